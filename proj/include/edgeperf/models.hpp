#pragma once

// Quadratic response surfaces for the pipeline's delay components and
// detection precision, their least-squares fits, and end-to-end evaluation.
//
//   T_enc(q), T_tx(q)   c0 + c1 q + c2 q^2
//   T_dl(n)             c0 + c1 n + c2 n^2
//   T_dec(n,q), f(n,q)  c0 + c1 n + c2 q + c3 n q + c4 n^2 + c5 q^2
//
// Fits run on rescaled variables (n / 608, q / 100) and report coefficients
// in original units.

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "edgeperf/error.hpp"
#include "edgeperf/format.hpp"
#include "edgeperf/kv.hpp"
#include "edgeperf/linalg.hpp"
#include "edgeperf/measurements.hpp"

namespace edgeperf {

enum class Variable { encoding_rate, nn_size };
enum class Unit { milliseconds, dimensionless };

inline constexpr double kNnScale = 608.0;
inline constexpr double kEncodingRateScale = 100.0;

inline double variable_scale(Variable v) noexcept {
    return v == Variable::nn_size ? kNnScale : kEncodingRateScale;
}

struct QuadraticModel1D {
    std::array<double, 3> c{};
    Variable variable = Variable::encoding_rate;
    Unit unit = Unit::milliseconds;

    bool operator==(const QuadraticModel1D&) const = default;
};

// Coefficients ordered (1, n, q, n q, n^2, q^2).
struct QuadraticModel2D {
    std::array<double, 6> c{};
    Unit unit = Unit::milliseconds;

    bool operator==(const QuadraticModel2D&) const = default;
};

inline double eval_1d(const QuadraticModel1D& m, double x) noexcept {
    return m.c[0] + m.c[1] * x + m.c[2] * x * x;
}

inline double eval_2d(const QuadraticModel2D& m, double n, double q) noexcept {
    return m.c[0] + m.c[1] * n + m.c[2] * q + m.c[3] * n * q + m.c[4] * n * n + m.c[5] * q * q;
}

struct Point1D {
    double x = 0.0;
    double y = 0.0;
};

struct Point2D {
    double n = 0.0;
    double q = 0.0;
    double y = 0.0;
};

struct Fit1D {
    QuadraticModel1D model;
    double residual_rms = 0.0;
};

struct Fit2D {
    QuadraticModel2D model;
    double residual_rms = 0.0;
};

namespace detail {

inline double rms(std::span<const double> r) {
    if (r.empty()) return 0.0;
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s / static_cast<double>(r.size()));
}

}  // namespace detail

inline Fit1D fit_1d(std::span<const Point1D> points, Variable variable,
                    Unit unit = Unit::milliseconds) {
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw NonFinite("fit_1d: non-finite point");
    }
    std::vector<double> xs;
    for (const auto& p : points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    if (std::unique(xs.begin(), xs.end()) - xs.begin() < 3)
        throw RankDeficient("fit_1d needs at least 3 distinct x values");

    const double s = variable_scale(variable);
    linalg::Matrix a(points.size(), 3);
    std::vector<double> b(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        double x = points[i].x / s;
        a(i, 0) = 1.0;
        a(i, 1) = x;
        a(i, 2) = x * x;
        b[i] = points[i].y;
    }
    auto beta = linalg::least_squares(std::move(a), std::move(b));

    Fit1D fit;
    fit.model.variable = variable;
    fit.model.unit = unit;
    fit.model.c = {beta[0], beta[1] / s, beta[2] / (s * s)};
    std::vector<double> resid;
    resid.reserve(points.size());
    for (const auto& p : points) resid.push_back(p.y - eval_1d(fit.model, p.x));
    fit.residual_rms = detail::rms(resid);
    return fit;
}

inline Fit2D fit_2d(std::span<const Point2D> points, Unit unit = Unit::milliseconds) {
    for (const auto& p : points) {
        if (!std::isfinite(p.n) || !std::isfinite(p.q) || !std::isfinite(p.y))
            throw NonFinite("fit_2d: non-finite point");
    }
    if (points.size() < 6) throw RankDeficient("fit_2d needs at least 6 points");

    linalg::Matrix a(points.size(), 6);
    std::vector<double> b(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        double n = points[i].n / kNnScale;
        double q = points[i].q / kEncodingRateScale;
        a(i, 0) = 1.0;
        a(i, 1) = n;
        a(i, 2) = q;
        a(i, 3) = n * q;
        a(i, 4) = n * n;
        a(i, 5) = q * q;
        b[i] = points[i].y;
    }
    auto beta = linalg::least_squares(std::move(a), std::move(b));

    const double sn = kNnScale;
    const double sq = kEncodingRateScale;
    Fit2D fit;
    fit.model.unit = unit;
    fit.model.c = {beta[0],           beta[1] / sn,        beta[2] / sq,
                   beta[3] / (sn * sq), beta[4] / (sn * sn), beta[5] / (sq * sq)};
    std::vector<double> resid;
    resid.reserve(points.size());
    for (const auto& p : points) resid.push_back(p.y - eval_2d(fit.model, p.n, p.q));
    fit.residual_rms = detail::rms(resid);
    return fit;
}

// ---------------------------------------------------------------------------
// System model

struct FitReport {
    double t_enc_rms = 0.0;
    double t_dec_rms = 0.0;
    double t_tx_rms = 0.0;
    double t_dl_rms = 0.0;
    double precision_rms = 0.0;

    bool operator==(const FitReport&) const = default;
};

struct SystemModel {
    QuadraticModel1D t_enc{{}, Variable::encoding_rate, Unit::milliseconds};
    QuadraticModel2D t_dec{{}, Unit::milliseconds};
    QuadraticModel1D t_tx{{}, Variable::encoding_rate, Unit::milliseconds};
    QuadraticModel1D t_dl{{}, Variable::nn_size, Unit::milliseconds};
    QuadraticModel2D precision{{}, Unit::dimensionless};
    std::string profile_name = "model";
    FitReport fit_report;

    bool operator==(const SystemModel&) const = default;
};

inline constexpr std::array<const char*, 5> kComponentNames = {"t_enc", "t_dec", "t_tx", "t_dl",
                                                               "precision"};

struct TotalEstimate {
    double t_enc_ms = 0.0;
    double t_dec_ms = 0.0;
    double t_tx_ms = 0.0;
    double t_dl_ms = 0.0;
    double t_total_ms = 0.0;
    double fps = 0.0;
    double precision = 0.0;
};

inline void require_decision_domain(int n, int q) {
    if (!valid_nn_size(n))
        throw DomainViolation("n = " + std::to_string(n) +
                              " outside {128..608, multiple of 32}");
    if (!valid_encoding_rate(q))
        throw DomainViolation("q = " + std::to_string(q) + " outside [10, 100]");
}

inline TotalEstimate evaluate_total(const SystemModel& sm, int n, int q) {
    require_decision_domain(n, q);
    const double nd = n;
    const double qd = q;
    TotalEstimate e;
    e.t_enc_ms = eval_1d(sm.t_enc, qd);
    e.t_dec_ms = eval_2d(sm.t_dec, nd, qd);
    e.t_tx_ms = eval_1d(sm.t_tx, qd);
    e.t_dl_ms = eval_1d(sm.t_dl, nd);
    e.t_total_ms = e.t_enc_ms + e.t_dec_ms + e.t_tx_ms + e.t_dl_ms;
    if (!(e.t_total_ms > 0.0))
        throw NonPositiveLatency("model '" + sm.profile_name + "' predicts t_total = " +
                                 format_sig9(e.t_total_ms) + " ms at n=" + std::to_string(n) +
                                 ", q=" + std::to_string(q));
    e.fps = 1000.0 / e.t_total_ms;
    e.precision = std::clamp(eval_2d(sm.precision, nd, qd), 0.0, 1.0);
    return e;
}

/// Fits every component of the system model to a measurement grid. Delay
/// components that depend on one variable are fitted to the unweighted mean
/// over the other variable.
inline SystemModel fit_system(const MeasurementGrid& grid) {
    if (grid.empty()) throw EmptyGrid("fit_system: grid has no cells");

    std::map<int, std::pair<int, std::array<double, 2>>> by_q;  // q -> (count, {t_enc, t_tx})
    std::map<int, std::pair<int, double>> by_n;                 // n -> (count, t_dl)
    std::vector<Point2D> dec_pts;
    std::vector<Point2D> prec_pts;
    for (const auto& [key, cell] : grid.cells) {
        auto& qe = by_q[key.encoding_rate];
        ++qe.first;
        qe.second[0] += cell.get(Field::t_enc_ms);
        qe.second[1] += cell.get(Field::t_tx_ms);
        auto& ne = by_n[key.nn_size];
        ++ne.first;
        ne.second += cell.get(Field::t_dl_ms);
        const double n = key.nn_size;
        const double q = key.encoding_rate;
        dec_pts.push_back({n, q, cell.get(Field::t_dec_ms)});
        prec_pts.push_back({n, q, cell.get(Field::precision)});
    }
    std::vector<Point1D> enc_pts, tx_pts, dl_pts;
    for (const auto& [q, e] : by_q) {
        enc_pts.push_back({static_cast<double>(q), e.second[0] / e.first});
        tx_pts.push_back({static_cast<double>(q), e.second[1] / e.first});
    }
    for (const auto& [n, e] : by_n) dl_pts.push_back({static_cast<double>(n), e.second / e.first});

    auto named = [](const char* component, auto&& fit) {
        try {
            return fit();
        } catch (const RankDeficient& e) {
            throw RankDeficient(e.what(), component);
        }
    };

    SystemModel sm;
    sm.profile_name = grid.profile_name.empty() ? "model" : grid.profile_name;
    auto enc = named("t_enc", [&] { return fit_1d(enc_pts, Variable::encoding_rate); });
    auto tx = named("t_tx", [&] { return fit_1d(tx_pts, Variable::encoding_rate); });
    auto dl = named("t_dl", [&] { return fit_1d(dl_pts, Variable::nn_size); });
    auto dec = named("t_dec", [&] { return fit_2d(dec_pts); });
    auto prec = named("precision", [&] { return fit_2d(prec_pts, Unit::dimensionless); });
    sm.t_enc = enc.model;
    sm.t_tx = tx.model;
    sm.t_dl = dl.model;
    sm.t_dec = dec.model;
    sm.precision = prec.model;
    sm.fit_report = {enc.residual_rms, dec.residual_rms, tx.residual_rms, dl.residual_rms,
                     prec.residual_rms};
    return sm;
}

// ---------------------------------------------------------------------------
// Serialization: `component.coefficient = value`, shortest round-trip decimals.

inline void write_system_model(std::ostream& out, const SystemModel& sm) {
    out << "model.profile = " << sm.profile_name << '\n';
    auto put1 = [&](const char* name, const QuadraticModel1D& m, double rms) {
        for (std::size_t k = 0; k < 3; ++k)
            out << name << ".c" << k << " = " << format_exact(m.c[k]) << '\n';
        out << name << ".rms = " << format_exact(rms) << '\n';
    };
    auto put2 = [&](const char* name, const QuadraticModel2D& m, double rms) {
        for (std::size_t k = 0; k < 6; ++k)
            out << name << ".c" << k << " = " << format_exact(m.c[k]) << '\n';
        out << name << ".rms = " << format_exact(rms) << '\n';
    };
    put1("t_enc", sm.t_enc, sm.fit_report.t_enc_rms);
    put2("t_dec", sm.t_dec, sm.fit_report.t_dec_rms);
    put1("t_tx", sm.t_tx, sm.fit_report.t_tx_rms);
    put1("t_dl", sm.t_dl, sm.fit_report.t_dl_rms);
    put2("precision", sm.precision, sm.fit_report.precision_rms);
}

inline SystemModel read_system_model(std::istream& in, const std::string& source = "<model>") {
    auto kv = KvFile::parse(in, source);
    SystemModel sm;
    std::map<std::string, bool> known;
    auto mark = [&](const std::string& k) { known[k] = true; return k; };

    sm.profile_name = kv.require(mark("model.profile")).value;
    if (!valid_identifier(sm.profile_name))
        throw ParseError(source + ": invalid profile name '" + sm.profile_name + "'");
    auto get1 = [&](const std::string& name, QuadraticModel1D& m, double& rms) {
        for (std::size_t k = 0; k < 3; ++k) m.c[k] = kv.real(mark(name + ".c" + std::to_string(k)));
        rms = kv.real(mark(name + ".rms"));
    };
    auto get2 = [&](const std::string& name, QuadraticModel2D& m, double& rms) {
        for (std::size_t k = 0; k < 6; ++k) m.c[k] = kv.real(mark(name + ".c" + std::to_string(k)));
        rms = kv.real(mark(name + ".rms"));
    };
    get1("t_enc", sm.t_enc, sm.fit_report.t_enc_rms);
    get2("t_dec", sm.t_dec, sm.fit_report.t_dec_rms);
    get1("t_tx", sm.t_tx, sm.fit_report.t_tx_rms);
    get1("t_dl", sm.t_dl, sm.fit_report.t_dl_rms);
    get2("precision", sm.precision, sm.fit_report.precision_rms);

    for (const auto& [key, entry] : kv.entries()) {
        if (!known.count(key)) throw ParseError(kv.where(entry.line) + "unknown key '" + key + "'");
    }
    auto finite = [&](const auto& arr) {
        for (double v : arr)
            if (!std::isfinite(v)) throw NonFinite(source + ": non-finite coefficient");
    };
    finite(sm.t_enc.c);
    finite(sm.t_dec.c);
    finite(sm.t_tx.c);
    finite(sm.t_dl.c);
    finite(sm.precision.c);
    return sm;
}

}  // namespace edgeperf
