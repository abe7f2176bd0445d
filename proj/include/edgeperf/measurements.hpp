#pragma once

// Measurement data model: per-sample records, the per-(n, q) grid of cell
// means fed to the fitter, and the CSV format both travel in.

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgeperf/error.hpp"
#include "edgeperf/format.hpp"

namespace edgeperf {

// Decision-variable domain shared by every module.
inline constexpr int kMinNnSize = 128;
inline constexpr int kMaxNnSize = 608;
inline constexpr int kNnStep = 32;
inline constexpr int kMinEncodingRate = 10;
inline constexpr int kMaxEncodingRate = 100;

inline bool valid_nn_size(int n) noexcept {
    return n >= kMinNnSize && n <= kMaxNnSize && n % kNnStep == 0;
}
inline bool valid_encoding_rate(int q) noexcept {
    return q >= kMinEncodingRate && q <= kMaxEncodingRate;
}

inline bool valid_identifier(std::string_view s) noexcept {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

struct MeasurementRecord {
    int nn_size = 0;        // n, pixels
    int encoding_rate = 0;  // q, percent
    double t_enc_ms = 0.0;
    double t_dec_ms = 0.0;
    double t_tx_ms = 0.0;
    double t_dl_ms = 0.0;
    double precision = 0.0;
    std::int64_t image_bytes = 0;
    std::string profile_name;
};

enum class Field { t_enc_ms, t_dec_ms, t_tx_ms, t_dl_ms, precision, image_bytes };
inline constexpr std::size_t kFieldCount = 6;
inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::t_enc_ms, Field::t_dec_ms, Field::t_tx_ms,
    Field::t_dl_ms,  Field::precision, Field::image_bytes};

inline std::string_view field_name(Field f) noexcept {
    switch (f) {
        case Field::t_enc_ms: return "t_enc_ms";
        case Field::t_dec_ms: return "t_dec_ms";
        case Field::t_tx_ms: return "t_tx_ms";
        case Field::t_dl_ms: return "t_dl_ms";
        case Field::precision: return "precision";
        case Field::image_bytes: return "image_bytes";
    }
    return "?";
}

inline double field_value(const MeasurementRecord& r, Field f) noexcept {
    switch (f) {
        case Field::t_enc_ms: return r.t_enc_ms;
        case Field::t_dec_ms: return r.t_dec_ms;
        case Field::t_tx_ms: return r.t_tx_ms;
        case Field::t_dl_ms: return r.t_dl_ms;
        case Field::precision: return r.precision;
        case Field::image_bytes: return static_cast<double>(r.image_bytes);
    }
    return 0.0;
}

// Name of the first field that breaks the record invariants, if any.
inline std::optional<std::string> first_invalid_field(const MeasurementRecord& r) {
    if (!valid_nn_size(r.nn_size)) return "n";
    if (!valid_encoding_rate(r.encoding_rate)) return "q";
    for (Field f : {Field::t_enc_ms, Field::t_dec_ms, Field::t_tx_ms, Field::t_dl_ms}) {
        double v = field_value(r, f);
        if (!std::isfinite(v) || v < 0.0) return std::string(field_name(f));
    }
    if (!std::isfinite(r.precision) || r.precision < 0.0 || r.precision > 1.0) return "precision";
    if (r.image_bytes < 0) return "image_bytes";
    if (!valid_identifier(r.profile_name)) return "profile";
    return std::nullopt;
}

struct CellKey {
    int nn_size = 0;
    int encoding_rate = 0;
    auto operator<=>(const CellKey&) const = default;
};

struct CellStats {
    std::size_t count = 0;
    std::array<double, kFieldCount> mean{};

    double get(Field f) const noexcept { return mean[static_cast<std::size_t>(f)]; }
};

// Cell means keyed by (n, q). std::map keeps ascending n, then ascending q.
struct MeasurementGrid {
    std::string profile_name;
    std::map<CellKey, CellStats> cells;

    bool empty() const noexcept { return cells.empty(); }
    std::size_t size() const noexcept { return cells.size(); }
};

inline MeasurementGrid ingest(std::span<const MeasurementRecord> records) {
    MeasurementGrid grid;
    if (records.empty()) return grid;
    grid.profile_name = records.front().profile_name;

    std::map<CellKey, std::pair<std::size_t, std::array<double, kFieldCount>>> sums;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (auto bad = first_invalid_field(r)) {
            throw DomainViolation("record " + std::to_string(i) + ": field '" + *bad +
                                  "' out of domain");
        }
        if (r.profile_name != grid.profile_name) {
            throw MixedProfiles("record " + std::to_string(i) + ": profile '" + r.profile_name +
                                "' differs from '" + grid.profile_name + "'");
        }
        auto& [count, acc] = sums[CellKey{r.nn_size, r.encoding_rate}];
        ++count;
        for (std::size_t k = 0; k < kFieldCount; ++k) acc[k] += field_value(r, kAllFields[k]);
    }
    for (const auto& [key, entry] : sums) {
        CellStats cs;
        cs.count = entry.first;
        for (std::size_t k = 0; k < kFieldCount; ++k)
            cs.mean[k] = entry.second[k] / static_cast<double>(entry.first);
        grid.cells.emplace(key, cs);
    }
    return grid;
}

struct DesignRows {
    std::vector<CellKey> inputs;
    std::vector<double> outputs;
};

inline DesignRows to_design_matrix(const MeasurementGrid& grid, Field target) {
    if (grid.empty()) throw EmptyGrid("to_design_matrix: grid has no cells");
    DesignRows rows;
    rows.inputs.reserve(grid.size());
    rows.outputs.reserve(grid.size());
    for (const auto& [key, cell] : grid.cells) {
        rows.inputs.push_back(key);
        rows.outputs.push_back(cell.get(target));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::array<std::string_view, 9> kMeasurementColumns = {
    "profile", "n", "q", "t_enc_ms", "t_dec_ms", "t_tx_ms", "t_dl_ms", "precision", "image_bytes"};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline bool is_skippable(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace detail

// Reads records from the measurement CSV. Lines starting with '#' are comments.
// Columns may appear in any order but the set must match exactly.
inline std::vector<MeasurementRecord> read_measurements_csv(std::istream& in,
                                                            const std::string& source = "<input>") {
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(source + ":" + std::to_string(lineno) + ": " + msg);
    };

    std::array<int, kMeasurementColumns.size()> index{};
    index.fill(-1);
    std::size_t ncols = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_skippable(line)) continue;
        auto cols = detail::split_commas(line);
        ncols = cols.size();
        for (std::size_t c = 0; c < cols.size(); ++c) {
            bool known = false;
            for (std::size_t k = 0; k < kMeasurementColumns.size(); ++k) {
                if (cols[c] == kMeasurementColumns[k]) {
                    if (index[k] >= 0) throw fail("duplicate column '" + std::string(cols[c]) + "'");
                    index[k] = static_cast<int>(c);
                    known = true;
                }
            }
            if (!known) throw fail("unknown column '" + std::string(cols[c]) + "'");
        }
        for (std::size_t k = 0; k < kMeasurementColumns.size(); ++k) {
            if (index[k] < 0)
                throw fail("missing column '" + std::string(kMeasurementColumns[k]) + "'");
        }
        have_header = true;
        break;
    }
    if (!have_header) throw ParseError(source + ": missing CSV header");

    std::vector<MeasurementRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_skippable(line)) continue;
        auto cols = detail::split_commas(line);
        if (cols.size() != ncols)
            throw fail("expected " + std::to_string(ncols) + " fields, got " +
                       std::to_string(cols.size()));
        auto col = [&](std::size_t k) { return cols[static_cast<std::size_t>(index[k])]; };
        auto real = [&](std::size_t k) {
            auto v = parse_double(col(k));
            if (!v) throw fail("column '" + std::string(kMeasurementColumns[k]) +
                               "': not a number: '" + std::string(col(k)) + "'");
            return *v;
        };
        auto integer = [&](std::size_t k) {
            auto v = parse_int<std::int64_t>(col(k));
            if (!v) throw fail("column '" + std::string(kMeasurementColumns[k]) +
                               "': not an integer: '" + std::string(col(k)) + "'");
            return *v;
        };
        MeasurementRecord r;
        r.profile_name = std::string(col(0));
        r.nn_size = static_cast<int>(integer(1));
        r.encoding_rate = static_cast<int>(integer(2));
        r.t_enc_ms = real(3);
        r.t_dec_ms = real(4);
        r.t_tx_ms = real(5);
        r.t_dl_ms = real(6);
        r.precision = real(7);
        r.image_bytes = integer(8);
        records.push_back(std::move(r));
    }
    return records;
}

// Values are written with shortest round-trip formatting so that re-reading
// yields bit-identical doubles.
inline void write_measurements_csv(std::ostream& out, std::span<const MeasurementRecord> records) {
    for (std::size_t k = 0; k < kMeasurementColumns.size(); ++k)
        out << (k ? "," : "") << kMeasurementColumns[k];
    out << '\n';
    for (const auto& r : records) {
        out << r.profile_name << ',' << r.nn_size << ',' << r.encoding_rate << ','
            << format_exact(r.t_enc_ms) << ',' << format_exact(r.t_dec_ms) << ','
            << format_exact(r.t_tx_ms) << ',' << format_exact(r.t_dl_ms) << ','
            << format_exact(r.precision) << ',' << r.image_bytes << '\n';
    }
}

}  // namespace edgeperf
