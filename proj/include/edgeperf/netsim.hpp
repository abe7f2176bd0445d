#pragma once

// Deterministic simulator of the handset -> edge server -> handset wireless
// exchange, plus the synthetic measurement campaign built on top of it.
//
// The channel is a single shared medium: uplink data frames and downlink TCP
// ACK frames contend for it, and every MAC frame pays frame_overhead_us for
// channel access, preamble and block-ack before its payload airtime.
//
// TCP (established connection, slow start, no loss):
//   - the sender releases up to cwnd unacknowledged packets; the host hands
//     them to the NIC one every host_pkt_interval_us;
//   - a data frame aggregates the packets queued at the NIC when it wins
//     channel access (frame_overhead_us after the access attempt starts),
//     at most max_aggregation of them;
//   - the server answers each data frame with one ACK frame, ready
//     rtt_base_us after the data frame ends; ACKs ready at the same access
//     opportunity share a frame, and a pending ACK wins ties with data;
//   - each ACK grows cwnd by the packets it covers, which doubles cwnd per
//     round trip.
//   The data phase ends when the last data frame is delivered.
//
// UDP burst: every packet is queued at once and sent back-to-back in
// udp_frames_per_burst frames, with no ACK wait.
//
// Clock: integer ticks of 2^-20 ms, so sums and differences of simulated
// times convert to milliseconds without rounding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeperf/error.hpp"
#include "edgeperf/format.hpp"
#include "edgeperf/kv.hpp"
#include "edgeperf/measurements.hpp"
#include "edgeperf/models.hpp"
#include "edgeperf/rng.hpp"

namespace edgeperf {

enum class Transport { tcp, udp_burst };
enum class Powersave { enabled, disabled };

inline std::string_view to_string(Transport t) noexcept {
    return t == Transport::tcp ? "tcp" : "udp-burst";
}
inline std::string_view to_string(Powersave p) noexcept {
    return p == Powersave::enabled ? "enabled" : "disabled";
}
inline std::optional<Transport> parse_transport(std::string_view s) {
    if (s == "tcp") return Transport::tcp;
    if (s == "udp-burst" || s == "udp") return Transport::udp_burst;
    return std::nullopt;
}
inline std::optional<Powersave> parse_powersave(std::string_view s) {
    if (s == "enabled" || s == "on") return Powersave::enabled;
    if (s == "disabled" || s == "off") return Powersave::disabled;
    return std::nullopt;
}

struct TransmissionProfile {
    Transport transport = Transport::tcp;
    Powersave powersave = Powersave::enabled;
    std::string name;
};

// Stock TCP with the handset's NIC powersave left on.
inline TransmissionProfile vanilla_profile() {
    return {Transport::tcp, Powersave::enabled, "vanilla"};
}
// UDP packet bursts with the NIC kept awake.
inline TransmissionProfile optimized_profile() {
    return {Transport::udp_burst, Powersave::disabled, "optimized"};
}

inline std::optional<TransmissionProfile> named_profile(std::string_view name) {
    if (name == "vanilla") return vanilla_profile();
    if (name == "optimized") return optimized_profile();
    if (name == "tcp-nops") return TransmissionProfile{Transport::tcp, Powersave::disabled, "tcp-nops"};
    if (name == "udp-ps") return TransmissionProfile{Transport::udp_burst, Powersave::enabled, "udp-ps"};
    return std::nullopt;
}

inline constexpr int kTcpIpHeaderBytes = 52;  // 1500 B packet carries 1448 B of payload
inline constexpr int kUdpIpHeaderBytes = 28;

struct SimConfig {
    double phy_rate_mbps = 700.0;  // effective MAC-layer goodput
    double frame_overhead_us = 140.0;
    int max_aggregation = 128;
    int tcp_initial_cwnd = 10;
    int tcp_payload_bytes = 1448;
    int udp_payload_bytes = 1472;
    double rtt_base_us = 1400.0;
    double wake_latency_ms = 5.0;
    double idle_sleep_timeout_ms = 20.0;
    int udp_frames_per_burst = 3;
    int response_bytes = 1400;
    double host_pkt_interval_us = 50.0;
    std::uint64_t rng_seed = 42;

    bool operator==(const SimConfig&) const = default;
};

inline void validate(const SimConfig& c) {
    auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0))
            throw DomainViolation(std::string("SimConfig.") + name + " must be positive");
    };
    positive(c.phy_rate_mbps, "phy_rate_mbps");
    positive(c.frame_overhead_us, "frame_overhead_us");
    positive(c.max_aggregation, "max_aggregation");
    positive(c.tcp_initial_cwnd, "tcp_initial_cwnd");
    positive(c.tcp_payload_bytes, "tcp_payload_bytes");
    positive(c.udp_payload_bytes, "udp_payload_bytes");
    positive(c.rtt_base_us, "rtt_base_us");
    positive(c.wake_latency_ms, "wake_latency_ms");
    positive(c.idle_sleep_timeout_ms, "idle_sleep_timeout_ms");
    positive(c.udp_frames_per_burst, "udp_frames_per_burst");
    positive(c.response_bytes, "response_bytes");
    positive(c.host_pkt_interval_us, "host_pkt_interval_us");
    if (c.tcp_payload_bytes > 1500) throw DomainViolation("SimConfig.tcp_payload_bytes exceeds 1500");
}

inline SimConfig read_sim_config(std::istream& in, const std::string& source = "<config>") {
    auto kv = KvFile::parse(in, source);
    SimConfig c;
    std::map<std::string, bool> known;
    auto real = [&](const char* key, double& dst) {
        known[key] = true;
        if (kv.has(key)) dst = kv.real(key);
    };
    auto integer = [&](const char* key, int& dst) {
        known[key] = true;
        if (kv.has(key)) dst = kv.integer<int>(key);
    };
    real("phy_rate_mbps", c.phy_rate_mbps);
    real("frame_overhead_us", c.frame_overhead_us);
    integer("max_aggregation", c.max_aggregation);
    integer("tcp_initial_cwnd", c.tcp_initial_cwnd);
    integer("tcp_payload_bytes", c.tcp_payload_bytes);
    integer("udp_payload_bytes", c.udp_payload_bytes);
    real("rtt_base_us", c.rtt_base_us);
    real("wake_latency_ms", c.wake_latency_ms);
    real("idle_sleep_timeout_ms", c.idle_sleep_timeout_ms);
    integer("udp_frames_per_burst", c.udp_frames_per_burst);
    integer("response_bytes", c.response_bytes);
    real("host_pkt_interval_us", c.host_pkt_interval_us);
    known["rng_seed"] = true;
    if (kv.has("rng_seed")) c.rng_seed = kv.integer<std::uint64_t>("rng_seed");
    for (const auto& [key, entry] : kv.entries()) {
        if (!known.count(key)) throw ParseError(kv.where(entry.line) + "unknown key '" + key + "'");
    }
    try {
        validate(c);
    } catch (const DomainViolation& e) {
        throw ParseError(source + ": " + e.what());
    }
    return c;
}

inline void write_sim_config(std::ostream& out, const SimConfig& c) {
    out << "phy_rate_mbps = " << format_exact(c.phy_rate_mbps) << '\n'
        << "frame_overhead_us = " << format_exact(c.frame_overhead_us) << '\n'
        << "max_aggregation = " << c.max_aggregation << '\n'
        << "tcp_initial_cwnd = " << c.tcp_initial_cwnd << '\n'
        << "tcp_payload_bytes = " << c.tcp_payload_bytes << '\n'
        << "udp_payload_bytes = " << c.udp_payload_bytes << '\n'
        << "rtt_base_us = " << format_exact(c.rtt_base_us) << '\n'
        << "wake_latency_ms = " << format_exact(c.wake_latency_ms) << '\n'
        << "idle_sleep_timeout_ms = " << format_exact(c.idle_sleep_timeout_ms) << '\n'
        << "udp_frames_per_burst = " << c.udp_frames_per_burst << '\n'
        << "response_bytes = " << c.response_bytes << '\n'
        << "host_pkt_interval_us = " << format_exact(c.host_pkt_interval_us) << '\n'
        << "rng_seed = " << c.rng_seed << '\n';
}

// ---------------------------------------------------------------------------
// Clock

using Ticks = std::int64_t;
inline constexpr int kTickShift = 20;  // 2^20 ticks per millisecond

inline Ticks ticks_from_ms(double ms) { return std::llround(std::ldexp(ms, kTickShift)); }
inline Ticks ticks_from_us(double us) { return ticks_from_ms(us / 1000.0); }
inline double ms_from_ticks(Ticks t) { return std::ldexp(static_cast<double>(t), -kTickShift); }

// ---------------------------------------------------------------------------
// NIC powersave automaton: awake -> asleep after idle_sleep_timeout_ms of
// inactivity (powersave enabled only); asleep -> awake on the next transfer,
// which first pays wake_latency_ms.

enum class NicMode { awake, asleep };

struct NicState {
    NicMode mode = NicMode::awake;
    double last_activity_ms = 0.0;
};

inline NicState advance_idle(NicState nic, double now_ms, Powersave ps, const SimConfig& cfg) {
    if (ps == Powersave::enabled && nic.mode == NicMode::awake &&
        now_ms - nic.last_activity_ms >= cfg.idle_sleep_timeout_ms)
        nic.mode = NicMode::asleep;
    return nic;
}

// ---------------------------------------------------------------------------
// Traces

enum class EventKind { wake, frame_tx, ack_rx, response_rx };

inline std::string_view to_string(EventKind k) noexcept {
    switch (k) {
        case EventKind::wake: return "wake";
        case EventKind::frame_tx: return "frame-tx";
        case EventKind::ack_rx: return "ack-rx";
        case EventKind::response_rx: return "response-rx";
    }
    return "?";
}

struct TraceEvent {
    double timestamp_ms = 0.0;
    EventKind kind = EventKind::frame_tx;
    int packet_count = 0;
};

struct TransferTrace {
    double start_ms = 0.0;
    std::vector<TraceEvent> events;
    double total_ms = 0.0;  // last event minus start
    int rounds = 0;         // cwnd openings that released packets (TCP); 1 for UDP

    int count(EventKind k) const {
        return static_cast<int>(std::count_if(events.begin(), events.end(),
                                              [k](const TraceEvent& e) { return e.kind == k; }));
    }
    int data_frames() const { return count(EventKind::frame_tx); }
    int ack_frames() const { return count(EventKind::ack_rx); }
    int data_packets() const {
        int s = 0;
        for (const auto& e : events)
            if (e.kind == EventKind::frame_tx) s += e.packet_count;
        return s;
    }
};

inline void write_trace_csv(std::ostream& out, const TransferTrace& trace) {
    out << "timestamp_ms,kind,packet_count\n";
    for (const auto& e : trace.events)
        out << format_sig9(e.timestamp_ms) << ',' << to_string(e.kind) << ',' << e.packet_count
            << '\n';
}

// ---------------------------------------------------------------------------
// Transfers

inline int payload_bytes(Transport t, const SimConfig& cfg) {
    return t == Transport::tcp ? cfg.tcp_payload_bytes : cfg.udp_payload_bytes;
}
inline int header_bytes(Transport t) {
    return t == Transport::tcp ? kTcpIpHeaderBytes : kUdpIpHeaderBytes;
}

inline int packetize(std::int64_t image_bytes, Transport transport, const SimConfig& cfg) {
    if (image_bytes <= 0) throw DomainViolation("packetize: image size must be positive");
    const std::int64_t pay = payload_bytes(transport, cfg);
    return static_cast<int>((image_bytes + pay - 1) / pay);
}

namespace detail {

class Channel {
public:
    explicit Channel(const SimConfig& cfg)
        : overhead_(ticks_from_us(cfg.frame_overhead_us)), bits_per_us_(cfg.phy_rate_mbps) {}

    Ticks overhead() const noexcept { return overhead_; }
    Ticks airtime(std::int64_t bytes) const {
        return ticks_from_us(static_cast<double>(bytes) * 8.0 / bits_per_us_);
    }

private:
    Ticks overhead_;
    double bits_per_us_;
};

// On-air size of packet i of an image split into `pay`-byte payloads.
inline std::int64_t wire_bytes(std::int64_t image_bytes, std::int64_t i, std::int64_t pay,
                               int header) {
    return std::min(pay, image_bytes - i * pay) + header;
}

// Prepends the wake-up when the NIC is asleep. Returns the time transfer can begin.
inline Ticks wake_if_needed(TransferTrace& trace, const NicState& nic, Ticks start,
                            const SimConfig& cfg) {
    if (nic.mode != NicMode::asleep) return start;
    Ticks t = start + ticks_from_ms(cfg.wake_latency_ms);
    trace.events.push_back({ms_from_ticks(t), EventKind::wake, 0});
    return t;
}

inline void finish(TransferTrace& trace, Ticks start, Ticks end) {
    trace.total_ms = ms_from_ticks(end - start);
}

}  // namespace detail

inline TransferTrace simulate_tcp_transfer(std::int64_t image_bytes, const SimConfig& cfg,
                                           const NicState& nic, double start_ms) {
    validate(cfg);
    const int n = packetize(image_bytes, Transport::tcp, cfg);
    const detail::Channel chan(cfg);
    const Ticks host_gap = ticks_from_us(cfg.host_pkt_interval_us);
    const Ticks rtt = ticks_from_us(cfg.rtt_base_us);
    const Ticks start = ticks_from_ms(start_ms);

    TransferTrace trace;
    trace.start_ms = ms_from_ticks(start);
    Ticks t = detail::wake_if_needed(trace, nic, start, cfg);

    struct Queued {
        Ticks arrival;
        int index;
    };
    struct PendingAck {
        Ticks ready;
        int packets;
    };
    std::deque<Queued> nic_queue;
    std::deque<PendingAck> acks;
    int next = 0;
    int inflight = 0;
    long long cwnd = cfg.tcp_initial_cwnd;
    std::optional<Ticks> last_handoff;

    auto release = [&](Ticks now) {
        bool any = false;
        while (next < n && inflight < cwnd) {
            Ticks a = last_handoff ? std::max(now, *last_handoff + host_gap) : now;
            last_handoff = a;
            nic_queue.push_back({a, next++});
            ++inflight;
            any = true;
        }
        if (any) ++trace.rounds;
    };

    constexpr Ticks kNever = std::numeric_limits<Ticks>::max();
    Ticks channel_free = t;
    Ticks data_end = t;
    int delivered = 0;
    release(t);
    while (delivered < n) {
        Ticks data_ready = nic_queue.empty() ? kNever : std::max(channel_free, nic_queue.front().arrival);
        Ticks ack_ready = acks.empty() ? kNever : std::max(channel_free, acks.front().ready);
        if (ack_ready <= data_ready) {
            int covered = 0;
            while (!acks.empty() && acks.front().ready <= ack_ready) {
                covered += acks.front().packets;
                acks.pop_front();
            }
            Ticks end = ack_ready + chan.overhead();
            trace.events.push_back({ms_from_ticks(end), EventKind::ack_rx, covered});
            channel_free = end;
            inflight -= covered;
            cwnd += covered;
            release(end);
        } else {
            Ticks lock = data_ready + chan.overhead();
            int count = 0;
            std::int64_t bytes = 0;
            while (!nic_queue.empty() && nic_queue.front().arrival <= lock &&
                   count < cfg.max_aggregation) {
                bytes += detail::wire_bytes(image_bytes, nic_queue.front().index,
                                            cfg.tcp_payload_bytes, kTcpIpHeaderBytes);
                nic_queue.pop_front();
                ++count;
            }
            Ticks end = lock + chan.airtime(bytes);
            trace.events.push_back({ms_from_ticks(end), EventKind::frame_tx, count});
            channel_free = end;
            data_end = end;
            delivered += count;
            acks.push_back({end + rtt, count});
        }
    }
    detail::finish(trace, start, data_end);
    return trace;
}

// Packets the host hands to the NIC while one channel access completes; a
// burst is only split into another frame once it has at least this many
// packets per frame.
inline int packets_per_access(const SimConfig& cfg) {
    return static_cast<int>(std::floor(cfg.frame_overhead_us / cfg.host_pkt_interval_us)) + 1;
}

inline int udp_frame_count(int packets, const SimConfig& cfg) {
    int frames = std::min(cfg.udp_frames_per_burst, std::max(1, packets / packets_per_access(cfg)));
    int needed = (packets + cfg.max_aggregation - 1) / cfg.max_aggregation;
    return std::max(frames, needed);
}

inline TransferTrace simulate_udp_burst(std::int64_t image_bytes, const SimConfig& cfg,
                                        const NicState& nic, double start_ms) {
    validate(cfg);
    const int n = packetize(image_bytes, Transport::udp_burst, cfg);
    if (static_cast<long long>(n) >
        static_cast<long long>(cfg.udp_frames_per_burst) * cfg.max_aggregation) {
        throw BurstOverflow("UDP burst of " + std::to_string(n) + " packets exceeds " +
                            std::to_string(cfg.udp_frames_per_burst) + " frames x " +
                            std::to_string(cfg.max_aggregation) + " packets");
    }
    const detail::Channel chan(cfg);
    const Ticks start = ticks_from_ms(start_ms);

    TransferTrace trace;
    trace.start_ms = ms_from_ticks(start);
    trace.rounds = 1;
    Ticks t = detail::wake_if_needed(trace, nic, start, cfg);

    const int frames = udp_frame_count(n, cfg);
    int index = 0;
    for (int f = 0; f < frames; ++f) {
        int count = n / frames + (f < n % frames ? 1 : 0);
        std::int64_t bytes = 0;
        for (int i = 0; i < count; ++i, ++index)
            bytes += detail::wire_bytes(image_bytes, index, cfg.udp_payload_bytes, kUdpIpHeaderBytes);
        t += chan.overhead() + chan.airtime(bytes);
        trace.events.push_back({ms_from_ticks(t), EventKind::frame_tx, count});
    }
    detail::finish(trace, start, t);
    return trace;
}

struct ExchangeResult {
    double t_tx_ms = 0.0;
    TransferTrace trace;  // uplink events plus the response, relative to the exchange start
    NicState nic_after;
};

// One image exchange: idle gap (powersave automaton), uplink transfer, then the
// single-frame downlink response rtt_base_us after the image is delivered. The
// response carries the server's last TCP ACK. The NIC was last active at t=0;
// the exchange starts at t=gap.
inline ExchangeResult simulate_exchange_detailed(std::int64_t image_bytes,
                                                 const TransmissionProfile& profile,
                                                 const SimConfig& cfg, double inter_image_gap_ms) {
    if (!(inter_image_gap_ms >= 0.0) || !std::isfinite(inter_image_gap_ms))
        throw DomainViolation("simulate_exchange: gap must be non-negative");
    NicState nic = advance_idle(NicState{NicMode::awake, 0.0}, inter_image_gap_ms,
                                profile.powersave, cfg);
    ExchangeResult r;
    r.trace = profile.transport == Transport::tcp
                  ? simulate_tcp_transfer(image_bytes, cfg, nic, inter_image_gap_ms)
                  : simulate_udp_burst(image_bytes, cfg, nic, inter_image_gap_ms);

    const detail::Channel chan(cfg);
    const Ticks start = ticks_from_ms(r.trace.start_ms);
    const Ticks data_end = start + ticks_from_ms(r.trace.total_ms);
    const Ticks end = data_end + ticks_from_us(cfg.rtt_base_us) + chan.overhead() +
                      chan.airtime(cfg.response_bytes);
    r.trace.events.push_back({ms_from_ticks(end), EventKind::response_rx, 1});
    detail::finish(r.trace, start, end);
    r.t_tx_ms = r.trace.total_ms;
    r.nic_after = NicState{NicMode::awake, ms_from_ticks(end)};
    return r;
}

inline double simulate_exchange(std::int64_t image_bytes, const TransmissionProfile& profile,
                                const SimConfig& cfg, double inter_image_gap_ms) {
    return simulate_exchange_detailed(image_bytes, profile, cfg, inter_image_gap_ms).t_tx_ms;
}

// ---------------------------------------------------------------------------
// Synthetic measurement campaign

// Compressed image size vs encoding rate: quadratic growth from
// bytes_at_min_q (q = 10) to bytes_at_max_q (q = 100).
struct ImageSizeCurve {
    double bytes_at_min_q = 20000.0;
    double bytes_at_max_q = 250000.0;

    std::int64_t operator()(int q) const {
        double u = (static_cast<double>(q) - kMinEncodingRate) /
                   static_cast<double>(kMaxEncodingRate - kMinEncodingRate);
        return std::llround(bytes_at_min_q + (bytes_at_max_q - bytes_at_min_q) * u * u);
    }
};

struct GeneratorSpec {
    QuadraticModel1D t_enc{{}, Variable::encoding_rate, Unit::milliseconds};
    QuadraticModel2D t_dec{{}, Unit::milliseconds};
    QuadraticModel1D t_dl{{}, Variable::nn_size, Unit::milliseconds};
    QuadraticModel2D precision{{}, Unit::dimensionless};
    // When set, t_tx follows this polynomial instead of the simulator.
    std::optional<QuadraticModel1D> t_tx;
    ImageSizeCurve size_curve;
    double delay_noise_ms = 0.0;  // Gaussian sigma added to each delay sample
    double precision_noise = 0.0;
    double inter_image_gap_ms = 25.0;
};

// Ground-truth surfaces shaped after the measured pipeline: encoding grows
// from ~5 ms (q=25) to ~11 ms (q=100), decoding jumps for large n, inference
// is roughly quadratic in n, precision rises with n and q and saturates.
inline GeneratorSpec default_generator() {
    GeneratorSpec g;
    g.t_enc.c = {4.0, 0.03, 4e-4};
    g.t_dec.c = {2.0, 2e-3, 5e-3, 1e-5, 1e-5, 2e-4};
    g.t_dl.c = {12.8, 5e-3, 2e-5};
    g.precision.c = {-0.15, 2.2e-3, 8e-4, 1e-6, -1.7e-6, 1e-6};
    g.delay_noise_ms = 0.1;
    g.precision_noise = 0.005;
    return g;
}

inline GeneratorSpec generator_from_model(const SystemModel& sm) {
    GeneratorSpec g;
    g.t_enc = sm.t_enc;
    g.t_dec = sm.t_dec;
    g.t_dl = sm.t_dl;
    g.precision = sm.precision;
    g.t_tx = sm.t_tx;
    return g;
}

inline std::vector<int> default_n_values() {
    std::vector<int> v;
    for (int n = kMinNnSize; n <= kMaxNnSize; n += kNnStep) v.push_back(n);
    return v;
}

inline std::vector<int> default_q_values(int step = 5) {
    std::vector<int> v;
    for (int q = kMinEncodingRate; q <= kMaxEncodingRate; q += step) v.push_back(q);
    return v;
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

inline std::vector<MeasurementRecord> generate_records(const SimConfig& cfg,
                                                       const TransmissionProfile& profile,
                                                       const GeneratorSpec& spec,
                                                       std::span<const int> n_values,
                                                       std::span<const int> q_values,
                                                       int samples_per_cell) {
    validate(cfg);
    if (n_values.empty() || q_values.empty())
        throw DomainViolation("generate: empty n or q value set");
    if (samples_per_cell < 1) throw DomainViolation("generate: samples_per_cell must be >= 1");
    if (!valid_identifier(profile.name))
        throw DomainViolation("generate: invalid profile name '" + profile.name + "'");
    for (int n : n_values)
        if (!valid_nn_size(n)) throw DomainViolation("generate: n = " + std::to_string(n));
    for (int q : q_values)
        if (!valid_encoding_rate(q)) throw DomainViolation("generate: q = " + std::to_string(q));
    if (spec.delay_noise_ms < 0.0 || spec.precision_noise < 0.0)
        throw DomainViolation("generate: negative noise");

    std::map<int, double> tx_by_q;
    for (int q : q_values) {
        tx_by_q[q] = spec.t_tx ? eval_1d(*spec.t_tx, q)
                               : simulate_exchange(spec.size_curve(q), profile, cfg,
                                                   spec.inter_image_gap_ms);
    }

    Rng rng(cfg.rng_seed ^ detail::fnv1a(profile.name));
    auto noisy_delay = [&](double v) { return std::max(0.0, v + rng.normal(0.0, spec.delay_noise_ms)); };

    std::vector<MeasurementRecord> out;
    out.reserve(n_values.size() * q_values.size() * static_cast<std::size_t>(samples_per_cell));
    for (int n : n_values) {
        for (int q : q_values) {
            const double nd = n;
            const double qd = q;
            for (int s = 0; s < samples_per_cell; ++s) {
                MeasurementRecord r;
                r.profile_name = profile.name;
                r.nn_size = n;
                r.encoding_rate = q;
                r.image_bytes = spec.size_curve(q);
                r.t_enc_ms = noisy_delay(eval_1d(spec.t_enc, qd));
                r.t_dec_ms = noisy_delay(eval_2d(spec.t_dec, nd, qd));
                r.t_tx_ms = noisy_delay(tx_by_q[q]);
                r.t_dl_ms = noisy_delay(eval_1d(spec.t_dl, nd));
                r.precision = std::clamp(
                    eval_2d(spec.precision, nd, qd) + rng.normal(0.0, spec.precision_noise), 0.0, 1.0);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

inline MeasurementGrid generate_grid(const SimConfig& cfg, const TransmissionProfile& profile,
                                     const GeneratorSpec& spec, std::span<const int> n_values,
                                     std::span<const int> q_values, int samples_per_cell) {
    auto records = generate_records(cfg, profile, spec, n_values, q_values, samples_per_cell);
    return ingest(records);
}

}  // namespace edgeperf
