// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "cli_runner.hpp"
#include "edgeperf/edgeperf.hpp"
#include "support.hpp"

using namespace edgeperf;
namespace et = edgeperf::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const NicState kAwake{NicMode::awake, 0.0};

Outcome ac1_packetization() {
    SimConfig cfg;
    auto t0 = Clock::now();
    int p = packetize(31335, Transport::tcp, cfg);
    double ms = seconds_since(t0) * 1e3;
    return {p == 22 && ms < 1.0, "packets=" + std::to_string(p) + " runtime=" + fmt("%.4f ms", ms)};
}

Outcome ac2_tcp_calibration() {
    auto tr = simulate_tcp_transfer(31335, SimConfig{}, kAwake, 0.0);
    bool time_ok = std::abs(tr.total_ms - 2.5) <= 0.2 * 2.5;
    bool frames_ok = std::abs(tr.data_frames() - 4) <= 1;
    return {time_ok && frames_ok, "t=" + fmt("%.4f ms", tr.total_ms) + " data_frames=" +
                                      std::to_string(tr.data_frames()) +
                                      " ack_frames=" + std::to_string(tr.ack_frames())};
}

Outcome ac3_udp_calibration() {
    SimConfig cfg;
    double udp = simulate_udp_burst(31335, cfg, kAwake, 0.0).total_ms;
    double tcp = simulate_tcp_transfer(31335, cfg, kAwake, 0.0).total_ms;
    double ratio = tcp / udp;
    bool ok = std::abs(udp - 0.8) <= 0.2 * 0.8 && ratio >= 2.4 && ratio <= 3.6;
    double worst = 0.0;
    std::int64_t worst_bytes = 0;
    const TransmissionProfile u{Transport::udp_burst, Powersave::disabled, "u"};
    const TransmissionProfile t{Transport::tcp, Powersave::disabled, "t"};
    for (std::int64_t b = 20000; b <= 250000; b += 500) {
        double r = simulate_exchange(b, u, cfg, 0.0) / simulate_exchange(b, t, cfg, 0.0);
        if (r > worst) {
            worst = r;
            worst_bytes = b;
        }
    }
    ok = ok && worst <= 0.6;
    return {ok, "udp=" + fmt("%.4f ms", udp) + " ratio=" + fmt("%.3f", ratio) +
                    " worst exchange ratio=" + fmt("%.3f", worst) + " at " +
                    std::to_string(worst_bytes) + " B"};
}

Outcome ac4_powersave_penalty() {
    SimConfig cfg;
    int checked = 0, bad = 0;
    for (auto tr : {Transport::tcp, Transport::udp_burst}) {
        TransmissionProfile on{tr, Powersave::enabled, "on"}, off{tr, Powersave::disabled, "off"};
        for (std::int64_t b = 1000; b <= 250000; b += 7919) {
            for (double gap : {20.5, 25.0, 40.0, 1000.0}) {
                double d = simulate_exchange(b, on, cfg, gap) - simulate_exchange(b, off, cfg, gap);
                ++checked;
                if (d != cfg.wake_latency_ms) ++bad;
            }
        }
    }
    return {bad == 0, std::to_string(checked) + " exchanges, " + std::to_string(bad) +
                          " with penalty != " + fmt("%g ms", cfg.wake_latency_ms)};
}

Outcome ac5_optimized_regime() {
    SimConfig cfg;
    ImageSizeCurve curve;
    double lo = INFINITY, hi = -INFINITY;
    for (int q = kMinEncodingRate; q <= kMaxEncodingRate; ++q) {
        double t = simulate_exchange(curve(q), optimized_profile(), cfg, 25.0);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return {lo >= 2.0 && hi <= 6.0, "range " + fmt("%.3f", lo) + fmt("..%.3f ms", hi)};
}

MeasurementGrid truth_grid(const SystemModel& truth, double noise, std::uint64_t seed) {
    SimConfig cfg;
    cfg.rng_seed = seed;
    auto gen = generator_from_model(truth);
    gen.delay_noise_ms = noise;
    return generate_grid(cfg, optimized_profile(), gen, default_n_values(), default_q_values(), 1);
}

std::vector<SystemModel> g_fitted;  // every model fitted along the way, reused by AC8

Outcome ac6_fitter_recovery() {
    auto t0 = Clock::now();
    Rng rng(606);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto truth = et::random_system_model(rng);
        auto sm = fit_system(truth_grid(truth, 0.0, 42));
        auto cmp = [&](const auto& got, const auto& want) {
            for (std::size_t k = 0; k < want.size(); ++k)
                worst_rel = std::max(worst_rel, std::abs(got[k] - want[k]) / std::abs(want[k]));
        };
        cmp(sm.t_enc.c, truth.t_enc.c);
        cmp(sm.t_tx.c, truth.t_tx.c);
        cmp(sm.t_dl.c, truth.t_dl.c);
        cmp(sm.t_dec.c, truth.t_dec.c);
        cmp(sm.precision.c, truth.precision.c);
        if (trial < 20) g_fitted.push_back(sm);
    }
    const double sigma = 0.1;
    double worst_rms = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto truth = et::random_system_model(rng);
        auto sm = fit_system(truth_grid(truth, sigma, seed));
        const auto& r = sm.fit_report;
        worst_rms = std::max({worst_rms, r.t_enc_rms, r.t_dec_rms, r.t_tx_rms, r.t_dl_rms});
        g_fitted.push_back(sm);
    }
    double secs = seconds_since(t0);
    return {worst_rel <= 1e-6 && worst_rms <= 3 * sigma && secs < 10.0,
            "max rel coeff error=" + fmt("%.2e", worst_rel) + " max noisy rms=" + fmt("%.4f", worst_rms) +
                " (limit 0.3) runtime=" + fmt("%.2f s", secs)};
}

bool same(const SolveResult& r, const et::OracleAnswer& o) {
    if (r.feasible() != o.feasible) return false;
    if (!o.feasible) return true;
    return r.point->n == o.n && r.point->q == o.q && r.point->precision == o.precision &&
           r.point->t_total_ms == o.t_total_ms;
}

Outcome ac7_solver_oracle() {
    auto t0 = Clock::now();
    Rng rng(707);
    const auto domain = DecisionDomain::standard();
    int checks = 0, mismatches = 0;
    std::string first;
    for (int trial = 0; trial < 100; ++trial) {
        auto sm = trial % 4 == 0 ? et::random_system_model(rng, -0.3, 1.3) : et::random_system_model(rng);
        EvaluatedGrid grid(sm, domain);
        double t_lo = INFINITY, t_hi = 0.0;
        for (const auto& p : grid.points()) {
            t_lo = std::min(t_lo, p.t_total_ms);
            t_hi = std::max(t_hi, p.t_total_ms);
        }
        for (int k = 0; k < 10; ++k) {
            double fps = 1000.0 / rng.uniform(0.9 * t_lo, 1.05 * t_hi);
            double f_min = rng.uniform(-0.05, 1.05);
            checks += 2;
            if (!same(solve_p1(grid, fps), et::brute_force_p1(sm, fps))) {
                ++mismatches;
                if (first.empty()) first = " first: model " + std::to_string(trial) + " p1 fps " + fmt("%g", fps);
            }
            if (!same(solve_p2(grid, f_min), et::brute_force_p2(sm, f_min))) {
                ++mismatches;
                if (first.empty()) first = " first: model " + std::to_string(trial) + " p2 f " + fmt("%g", f_min);
            }
        }
    }
    double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 30.0, std::to_string(checks) + " solves, " +
                                               std::to_string(mismatches) + " mismatches" + first +
                                               " runtime=" + fmt("%.2f s", secs)};
}

std::pair<SystemModel, SystemModel> calibrated_pair() {
    SimConfig cfg;
    auto gen = default_generator();
    auto n = default_n_values();
    auto q = default_q_values();
    return {fit_system(generate_grid(cfg, optimized_profile(), gen, n, q, 3)),
            fit_system(generate_grid(cfg, vanilla_profile(), gen, n, q, 3))};
}

Outcome ac8_sweep_monotonicity() {
    auto [opt, van] = calibrated_pair();
    std::vector<SystemModel> models = g_fitted;
    models.push_back(opt);
    models.push_back(van);
    const auto domain = DecisionDomain::standard();
    auto fps = threshold_range(1, 150, 0.5);
    auto fs = threshold_range(0.0, 1.0, 0.005);
    std::string violations;
    int count = 0;
    for (std::size_t m = 0; m < models.size(); ++m) {
        auto p1 = pareto_sweep_p1(models[m], domain, fps);
        for (std::size_t i = 1; i < p1.size(); ++i) {
            const auto &a = p1[i - 1].result, &b = p1[i].result;
            if (b.feasible() && (!a.feasible() || b.point->precision > a.point->precision)) {
                ++count;
                violations += " [model " + std::to_string(m) + " p1 " + fmt("%g", p1[i - 1].threshold) +
                              fmt("->%g]", p1[i].threshold);
            }
        }
        auto p2 = pareto_sweep_p2(models[m], domain, fs);
        for (std::size_t i = 1; i < p2.size(); ++i) {
            const auto &a = p2[i - 1].result, &b = p2[i].result;
            if (b.feasible() && (!a.feasible() || b.point->fps > a.point->fps)) {
                ++count;
                violations += " [model " + std::to_string(m) + " p2 " + fmt("%g", p2[i - 1].threshold) +
                              fmt("->%g]", p2[i].threshold);
            }
        }
    }
    return {count == 0, std::to_string(models.size()) + " fitted models, " + std::to_string(count) +
                            " violations" + violations};
}

Outcome ac9_profile_comparison() {
    auto [opt, van] = calibrated_pair();
    auto rep = compare_profiles(opt, van, DecisionDomain::standard(),
                                {Problem::p1, threshold_range(5, 60, 0.5)});
    std::optional<double> rel;
    for (const auto& row : rep.rows)
        if (row.threshold == 30.0) rel = row.relative_gap;
    bool a = rep.optimized_frontier && rep.vanilla_frontier && *rep.optimized_frontier > *rep.vanilla_frontier;
    bool b = rel && *rel >= 0.25;
    auto show = [](const std::optional<double>& v) { return v ? fmt("%g", *v) : std::string("none"); };
    return {a && b, "frontier optimized=" + show(rep.optimized_frontier) + " fps vanilla=" +
                        show(rep.vanilla_frontier) + " fps; precision gain at 30 fps=" +
                        (rel ? fmt("%.1f%%", *rel * 100) : std::string("n/a"))};
}

Outcome ac10_reproduction() {
    et::Workspace ws("acceptance_repro");
    const std::vector<std::string> steps = {
        "--seed 42 gen-data",
        "--seed 42 fit measurements_vanilla.csv measurements_optimized.csv",
        "--seed 42 pareto --model model_optimized.txt --problem p1",
        "--seed 42 pareto --model model_vanilla.txt --problem p2",
        "--seed 42 compare --optimized model_optimized.txt --vanilla model_vanilla.txt"};
    auto run_all = [&](std::map<std::string, std::string>& files) -> std::string {
        for (const auto& s : steps) {
            auto r = ws.run(s);
            if (r.exit_code != 0) return "'" + s + "' exited " + std::to_string(r.exit_code) + ": " + r.err;
        }
        for (const auto& e : std::filesystem::directory_iterator(ws.dir())) {
            auto name = e.path().filename().string();
            if (name[0] == '.') continue;
            files[name] = et::slurp(e.path());
            std::filesystem::remove(e.path());
        }
        return {};
    };
    std::map<std::string, std::string> first, second;
    if (auto err = run_all(first); !err.empty()) return {false, err};
    if (auto err = run_all(second); !err.empty()) return {false, err};
    int differing = 0;
    for (const auto& [name, text] : first)
        if (!second.count(name) || second[name] != text) ++differing;
    bool ok = differing == 0 && first.size() == second.size() && first.size() >= 9;
    return {ok, std::to_string(first.size()) + " output files, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1 packetization exactness", ac1_packetization},
        {"AC2 TCP calibration", ac2_tcp_calibration},
        {"AC3 UDP calibration and ratio", ac3_udp_calibration},
        {"AC4 powersave penalty", ac4_powersave_penalty},
        {"AC5 optimized regime 2-6 ms", ac5_optimized_regime},
        {"AC6 fitter exact recovery", ac6_fitter_recovery},
        {"AC7 solver-oracle equivalence", ac7_solver_oracle},
        {"AC8 sweep monotonicity", ac8_sweep_monotonicity},
        {"AC9 profile comparison shape", ac9_profile_comparison},
        {"AC10 deterministic reproduction", ac10_reproduction},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
