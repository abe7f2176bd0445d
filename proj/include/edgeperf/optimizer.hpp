#pragma once

// Latency/precision trade-off problems over the discrete (n, q) grid:
//
//   P1  maximize f(n,q)        s.t. T_total(n,q) <= 1000 / target_fps
//   P2  minimize T_total(n,q)  s.t. f(n,q) >= f_min
//
// The grid has at most 16 x 91 points, so both are solved by exhaustive
// enumeration. Ties: P1 prefers lower latency, then lower n, then lower q;
// P2 prefers higher precision, then lower n, then lower q.

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeperf/error.hpp"
#include "edgeperf/format.hpp"
#include "edgeperf/measurements.hpp"
#include "edgeperf/models.hpp"

namespace edgeperf {

struct DecisionDomain {
    std::vector<int> n_values;
    std::vector<int> q_values;

    // n in {128, 160, ..., 608}, q in {10, 11, ..., 100}.
    static DecisionDomain standard() {
        DecisionDomain d;
        for (int n = kMinNnSize; n <= kMaxNnSize; n += kNnStep) d.n_values.push_back(n);
        for (int q = kMinEncodingRate; q <= kMaxEncodingRate; ++q) d.q_values.push_back(q);
        return d;
    }

    void validate() const {
        if (n_values.empty() || q_values.empty()) throw DomainViolation("decision domain is empty");
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            if (!valid_nn_size(n_values[i]))
                throw DomainViolation("decision domain: n = " + std::to_string(n_values[i]));
            if (i && n_values[i] <= n_values[i - 1])
                throw DomainViolation("decision domain: n values must be strictly increasing");
        }
        for (std::size_t i = 0; i < q_values.size(); ++i) {
            if (!valid_encoding_rate(q_values[i]))
                throw DomainViolation("decision domain: q = " + std::to_string(q_values[i]));
            if (i && q_values[i] <= q_values[i - 1])
                throw DomainViolation("decision domain: q values must be strictly increasing");
        }
    }

    bool contains(int n, int q) const {
        return std::binary_search(n_values.begin(), n_values.end(), n) &&
               std::binary_search(q_values.begin(), q_values.end(), q);
    }
};

struct OperatingPoint {
    int n = 0;
    int q = 0;
    double precision = 0.0;
    double t_total_ms = 0.0;
    double fps = 0.0;

    bool operator==(const OperatingPoint&) const = default;
};

struct SolveResult {
    std::optional<OperatingPoint> point;  // empty when infeasible

    bool feasible() const noexcept { return point.has_value(); }
    bool operator==(const SolveResult&) const = default;
};

enum class Problem { p1, p2 };

inline std::string_view to_string(Problem p) noexcept { return p == Problem::p1 ? "p1" : "p2"; }
inline std::optional<Problem> parse_problem(std::string_view s) {
    if (s == "p1") return Problem::p1;
    if (s == "p2") return Problem::p2;
    return std::nullopt;
}

struct ParetoPoint {
    double threshold = 0.0;  // target fps (P1) or f_min (P2)
    SolveResult result;
};

// Every domain point evaluated once; reused across thresholds of a sweep.
class EvaluatedGrid {
public:
    EvaluatedGrid(const SystemModel& sm, const DecisionDomain& domain) {
        domain.validate();
        points_.reserve(domain.n_values.size() * domain.q_values.size());
        for (int n : domain.n_values) {
            for (int q : domain.q_values) {
                auto e = evaluate_total(sm, n, q);
                points_.push_back({n, q, e.precision, e.t_total_ms, e.fps});
            }
        }
    }

    std::span<const OperatingPoint> points() const noexcept { return points_; }

private:
    std::vector<OperatingPoint> points_;
};

namespace detail {

inline bool p1_better(const OperatingPoint& a, const OperatingPoint& b) {
    if (a.precision != b.precision) return a.precision > b.precision;
    if (a.t_total_ms != b.t_total_ms) return a.t_total_ms < b.t_total_ms;
    if (a.n != b.n) return a.n < b.n;
    return a.q < b.q;
}

inline bool p2_better(const OperatingPoint& a, const OperatingPoint& b) {
    if (a.t_total_ms != b.t_total_ms) return a.t_total_ms < b.t_total_ms;
    if (a.precision != b.precision) return a.precision > b.precision;
    if (a.n != b.n) return a.n < b.n;
    return a.q < b.q;
}

template <typename Feasible, typename Better>
SolveResult pick(std::span<const OperatingPoint> points, Feasible feasible, Better better) {
    SolveResult r;
    for (const auto& p : points) {
        if (!feasible(p)) continue;
        if (!r.point || better(p, *r.point)) r.point = p;
    }
    return r;
}

inline void require_increasing(std::span<const double> v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw DomainViolation(std::string(what) + ": non-finite threshold");
        if (i && !(v[i] > v[i - 1]))
            throw DomainViolation(std::string(what) + ": thresholds must be strictly increasing");
    }
}

}  // namespace detail

inline SolveResult solve_p1(const EvaluatedGrid& grid, double target_fps) {
    if (!(target_fps > 0.0) || !std::isfinite(target_fps))
        throw DomainViolation("solve_p1: target fps must be positive");
    const double t_max = 1000.0 / target_fps;
    return detail::pick(
        grid.points(), [t_max](const OperatingPoint& p) { return p.t_total_ms <= t_max; },
        detail::p1_better);
}

inline SolveResult solve_p1(const SystemModel& sm, const DecisionDomain& domain, double target_fps) {
    return solve_p1(EvaluatedGrid(sm, domain), target_fps);
}

inline SolveResult solve_p2(const EvaluatedGrid& grid, double f_min) {
    if (!std::isfinite(f_min)) throw DomainViolation("solve_p2: f_min must be finite");
    return detail::pick(
        grid.points(), [f_min](const OperatingPoint& p) { return p.precision >= f_min; },
        detail::p2_better);
}

inline SolveResult solve_p2(const SystemModel& sm, const DecisionDomain& domain, double f_min) {
    return solve_p2(EvaluatedGrid(sm, domain), f_min);
}

inline SolveResult solve(const EvaluatedGrid& grid, Problem problem, double threshold) {
    return problem == Problem::p1 ? solve_p1(grid, threshold) : solve_p2(grid, threshold);
}

inline std::vector<ParetoPoint> pareto_sweep(const SystemModel& sm, const DecisionDomain& domain,
                                             Problem problem, std::span<const double> thresholds) {
    detail::require_increasing(thresholds, "pareto_sweep");
    EvaluatedGrid grid(sm, domain);
    std::vector<ParetoPoint> out;
    out.reserve(thresholds.size());
    for (double th : thresholds) out.push_back({th, solve(grid, problem, th)});
    return out;
}

inline std::vector<ParetoPoint> pareto_sweep_p1(const SystemModel& sm, const DecisionDomain& domain,
                                                std::span<const double> fps_values) {
    return pareto_sweep(sm, domain, Problem::p1, fps_values);
}

inline std::vector<ParetoPoint> pareto_sweep_p2(const SystemModel& sm, const DecisionDomain& domain,
                                                std::span<const double> f_values) {
    return pareto_sweep(sm, domain, Problem::p2, f_values);
}

// Evenly spaced thresholds from `from` to `to` inclusive.
inline std::vector<double> threshold_range(double from, double to, double step) {
    if (!(step > 0.0) || !(to >= from)) throw DomainViolation("threshold range: need step > 0, to >= from");
    std::vector<double> v;
    auto count = static_cast<long long>(std::floor((to - from) / step + 1e-9));
    for (long long i = 0; i <= count; ++i) v.push_back(from + static_cast<double>(i) * step);
    return v;
}

// ---------------------------------------------------------------------------
// Profile comparison

struct SweepSpec {
    Problem problem = Problem::p1;
    std::vector<double> thresholds;
};

struct ComparisonRow {
    double threshold = 0.0;
    SolveResult optimized;
    SolveResult vanilla;
    // Precision (P1) or fps (P2) difference optimized - vanilla, when both are feasible.
    std::optional<double> gap;
    std::optional<double> relative_gap;
};

struct ComparisonReport {
    Problem problem = Problem::p1;
    std::string optimized_name;
    std::string vanilla_name;
    std::vector<ComparisonRow> rows;
    // Largest swept threshold each profile can still meet.
    std::optional<double> optimized_frontier;
    std::optional<double> vanilla_frontier;
};

inline ComparisonReport compare_profiles(const SystemModel& optimized, const SystemModel& vanilla,
                                         const DecisionDomain& domain, const SweepSpec& sweep) {
    auto a = pareto_sweep(optimized, domain, sweep.problem, sweep.thresholds);
    auto b = pareto_sweep(vanilla, domain, sweep.problem, sweep.thresholds);
    ComparisonReport rep;
    rep.problem = sweep.problem;
    rep.optimized_name = optimized.profile_name;
    rep.vanilla_name = vanilla.profile_name;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ComparisonRow row{a[i].threshold, a[i].result, b[i].result, std::nullopt, std::nullopt};
        if (row.optimized.feasible() && row.vanilla.feasible()) {
            double x = sweep.problem == Problem::p1 ? row.optimized.point->precision
                                                     : row.optimized.point->fps;
            double y = sweep.problem == Problem::p1 ? row.vanilla.point->precision
                                                     : row.vanilla.point->fps;
            row.gap = x - y;
            if (y != 0.0) row.relative_gap = (x - y) / y;
        }
        if (row.optimized.feasible()) rep.optimized_frontier = row.threshold;
        if (row.vanilla.feasible()) rep.vanilla_frontier = row.threshold;
        rep.rows.push_back(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kSweepHeader = "threshold,feasible,n,q,precision,t_total_ms,fps";

inline void write_result_fields(std::ostream& out, double threshold, const SolveResult& r) {
    out << format_sig9(threshold) << ',';
    if (!r.point) {
        out << "false,,,,,";
        return;
    }
    const auto& p = *r.point;
    out << "true," << p.n << ',' << p.q << ',' << format_sig9(p.precision) << ','
        << format_sig9(p.t_total_ms) << ',' << format_sig9(p.fps);
}

inline void write_sweep_csv(std::ostream& out, std::span<const ParetoPoint> points) {
    out << kSweepHeader << '\n';
    for (const auto& p : points) {
        write_result_fields(out, p.threshold, p.result);
        out << '\n';
    }
}

inline void write_comparison_csv(std::ostream& out, const ComparisonReport& rep) {
    out << "profile," << kSweepHeader << '\n';
    for (const auto& row : rep.rows) {
        out << rep.optimized_name << ',';
        write_result_fields(out, row.threshold, row.optimized);
        out << '\n';
    }
    for (const auto& row : rep.rows) {
        out << rep.vanilla_name << ',';
        write_result_fields(out, row.threshold, row.vanilla);
        out << '\n';
    }
}

// Frontiers and per-threshold gaps as `key = value` lines.
inline void write_comparison_summary(std::ostream& out, const ComparisonReport& rep) {
    auto opt = [](const std::optional<double>& v) { return v ? format_sig9(*v) : std::string("none"); };
    out << "problem = " << to_string(rep.problem) << '\n'
        << "optimized.profile = " << rep.optimized_name << '\n'
        << "vanilla.profile = " << rep.vanilla_name << '\n'
        << "optimized.frontier = " << opt(rep.optimized_frontier) << '\n'
        << "vanilla.frontier = " << opt(rep.vanilla_frontier) << '\n';
    for (const auto& row : rep.rows) {
        auto key = "gap." + format_sig9(row.threshold);
        out << key << ".absolute = " << opt(row.gap) << '\n'
            << key << ".relative = " << opt(row.relative_gap) << '\n';
    }
}

}  // namespace edgeperf
