#pragma once

// Test-only generators and oracles. Nothing here calls the solver or the
// fitter; the brute-force optimum evaluates the polynomials itself.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "edgeperf/models.hpp"
#include "edgeperf/optimizer.hpp"
#include "edgeperf/rng.hpp"

namespace edgeperf::testing {

inline const std::vector<int>& all_n() {
    static const std::vector<int> v = [] {
        std::vector<int> out;
        for (int n = 128; n <= 608; n += 32) out.push_back(n);
        return out;
    }();
    return v;
}

inline const std::vector<int>& all_q() {
    static const std::vector<int> v = [] {
        std::vector<int> out;
        for (int q = 10; q <= 100; ++q) out.push_back(q);
        return out;
    }();
    return v;
}

// Random magnitude in [0.05, 1] with random sign.
inline double signed_unit(Rng& rng) {
    double m = rng.uniform(0.05, 1.0);
    return rng.uniform() < 0.5 ? -m : m;
}

// Random quadratic in one variable whose minimum over the domain values is
// `floor_value`. Coefficients are drawn on the rescaled variable.
inline QuadraticModel1D random_positive_1d(Rng& rng, Variable var, double span, double floor_value) {
    const double s = variable_scale(var);
    QuadraticModel1D m{{0.0, span * signed_unit(rng) / s, span * signed_unit(rng) / (s * s)}, var,
                       Unit::milliseconds};
    const auto& xs = var == Variable::nn_size ? all_n() : all_q();
    double lo = INFINITY;
    for (int x : xs) lo = std::min(lo, m.c[1] * x + m.c[2] * x * x);
    m.c[0] = floor_value - lo;
    return m;
}

inline QuadraticModel2D random_2d_shape(Rng& rng, double span) {
    const double sn = kNnScale, sq = kEncodingRateScale;
    return QuadraticModel2D{{0.0, span * signed_unit(rng) / sn, span * signed_unit(rng) / sq,
                             span * signed_unit(rng) / (sn * sq), span * signed_unit(rng) / (sn * sn),
                             span * signed_unit(rng) / (sq * sq)},
                            Unit::milliseconds};
}

inline std::pair<double, double> range_2d(const QuadraticModel2D& m) {
    double lo = INFINITY, hi = -INFINITY;
    for (int n : all_n())
        for (int q : all_q()) {
            double v = m.c[1] * n + m.c[2] * q + m.c[3] * n * q + m.c[4] * n * n + m.c[5] * q * q;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    return {lo, hi};
}

inline QuadraticModel2D random_positive_2d(Rng& rng, double span, double floor_value) {
    auto m = random_2d_shape(rng, span);
    m.c[0] = floor_value - range_2d(m).first;
    return m;
}

// Affinely maps a random surface onto [lo, hi] over the domain.
inline QuadraticModel2D random_precision(Rng& rng, double lo, double hi) {
    auto m = random_2d_shape(rng, 1.0);
    auto [a, b] = range_2d(m);
    double scale = (hi - lo) / (b - a);
    for (std::size_t k = 1; k < 6; ++k) m.c[k] *= scale;
    m.c[0] = lo - a * scale;
    m.unit = Unit::dimensionless;
    return m;
}

// A random system model with strictly positive delays everywhere on the domain.
// `precision_lo/hi` may stray outside [0, 1] to exercise clamping.
inline SystemModel random_system_model(Rng& rng, double precision_lo = 0.05,
                                       double precision_hi = 0.95) {
    SystemModel sm;
    sm.profile_name = "random";
    sm.t_enc = random_positive_1d(rng, Variable::encoding_rate, rng.uniform(1, 10), rng.uniform(1, 6));
    sm.t_tx = random_positive_1d(rng, Variable::encoding_rate, rng.uniform(1, 15), rng.uniform(1, 10));
    sm.t_dl = random_positive_1d(rng, Variable::nn_size, rng.uniform(2, 30), rng.uniform(3, 15));
    sm.t_dec = random_positive_2d(rng, rng.uniform(1, 10), rng.uniform(1, 5));
    sm.precision = random_precision(rng, precision_lo, precision_hi);
    return sm;
}

// ---------------------------------------------------------------------------
// Brute-force optimum: a literal double loop over the domain, evaluating the
// polynomials term by term.

struct OracleAnswer {
    bool feasible = false;
    int n = 0;
    int q = 0;
    double precision = 0.0;
    double t_total_ms = 0.0;
};

inline double oracle_total(const SystemModel& sm, double n, double q) {
    const auto& e = sm.t_enc.c;
    const auto& x = sm.t_tx.c;
    const auto& l = sm.t_dl.c;
    const auto& d = sm.t_dec.c;
    double enc = e[0] + e[1] * q + e[2] * q * q;
    double tx = x[0] + x[1] * q + x[2] * q * q;
    double dl = l[0] + l[1] * n + l[2] * n * n;
    double dec = d[0] + d[1] * n + d[2] * q + d[3] * n * q + d[4] * n * n + d[5] * q * q;
    return enc + dec + tx + dl;
}

inline double oracle_precision(const SystemModel& sm, double n, double q) {
    const auto& f = sm.precision.c;
    double v = f[0] + f[1] * n + f[2] * q + f[3] * n * q + f[4] * n * n + f[5] * q * q;
    return std::min(1.0, std::max(0.0, v));
}

inline OracleAnswer brute_force_p1(const SystemModel& sm, double target_fps) {
    OracleAnswer best;
    double t_max = 1000.0 / target_fps;
    for (int n = 128; n <= 608; n += 32) {
        for (int q = 10; q <= 100; ++q) {
            double t = oracle_total(sm, n, q);
            if (t > t_max) continue;
            double p = oracle_precision(sm, n, q);
            bool take = !best.feasible || p > best.precision ||
                        (p == best.precision && t < best.t_total_ms);
            // n and q are visited in ascending order, so an exact tie keeps the earlier point.
            if (take) best = {true, n, q, p, t};
        }
    }
    return best;
}

inline OracleAnswer brute_force_p2(const SystemModel& sm, double f_min) {
    OracleAnswer best;
    for (int n = 128; n <= 608; n += 32) {
        for (int q = 10; q <= 100; ++q) {
            double p = oracle_precision(sm, n, q);
            if (p < f_min) continue;
            double t = oracle_total(sm, n, q);
            bool take = !best.feasible || t < best.t_total_ms ||
                        (t == best.t_total_ms && p > best.precision);
            if (take) best = {true, n, q, p, t};
        }
    }
    return best;
}

}  // namespace edgeperf::testing
