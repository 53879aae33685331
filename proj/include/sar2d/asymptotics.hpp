#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "sar2d/covariance.hpp"
#include "sar2d/error.hpp"
#include "sar2d/params.hpp"

namespace sar2d {

/// Grid point ([n s], [n t]) of the scaled field Y_n(s,t) = X([ns],[nt]).
struct ScaledQuery {
    double s = 1.0;
    double t = 1.0;
    long long n = 1;

    long long k() const noexcept { return static_cast<long long>(std::floor(static_cast<double>(n) * s)); }
    long long l() const noexcept { return static_cast<long long>(std::floor(static_cast<double>(n) * t)); }

    void validate() const {
        if (n < 1) throw domain_error("scaled query needs n >= 1");
        if (k() < 1 || l() < 1) throw domain_error("scaled query needs [ns] >= 1 and [nt] >= 1");
    }
};

namespace detail {

inline void require_positive_st(double s, double t) {
    if (!(s > 0.0) || !(t > 0.0) || !std::isfinite(s) || !std::isfinite(t)) {
        throw domain_error("s and t must be positive finite reals");
    }
}

}  // namespace detail

/// Limit of Var X(k,l) inside the stability domain:
/// ((1+a+b-g)(1+a-b+g)(1-a+b+g)(1-a-b-g))^(-1/2).
inline double sigma2_stable(const Params& p, double tol = 1e-12) {
    if (classify(p, tol).kind != Kind::stable) throw domain_error("sigma2_stable needs stable parameters");
    const double a = p.alpha;
    const double b = p.beta;
    const double g = p.gamma;
    const double prod = (1.0 + a + b - g) * (1.0 + a - b + g) * (1.0 - a + b + g) * (1.0 - a - b - g);
    return 1.0 / std::sqrt(prod);
}

/// Limit of n^(-1/2) Var Y_n(s,t) on the faces covered by the main theorem:
/// min(sqrt((1-|a|)s), sqrt((1-|b|)t)) / (sqrt(pi) sqrt(|a|+|b|) (1-|a|)(1-|b|)).
inline double limit_face(const Params& p, double s, double t, double tol = 1e-12) {
    detail::require_positive_st(s, t);
    if (classify(p, tol).kind != Kind::face_a) {
        throw domain_error("limit_face needs parameters on a face covered by the limit theorem");
    }
    const double a = std::abs(p.alpha);
    const double b = std::abs(p.beta);
    if (a + b < 1e-8) throw domain_error("limit_face degenerates as |alpha|+|beta| -> 0");
    const double num = std::min(std::sqrt((1.0 - a) * s), std::sqrt((1.0 - b) * t));
    return num / (std::sqrt(std::numbers::pi) * std::sqrt(a + b) * (1.0 - a) * (1.0 - b));
}

/// Limit of n^(-1) Var Y_n(s,t): s/(1-g^2) on the alpha-axis edge, t/(1-g^2) on the beta-axis edge.
inline double limit_edge(const Params& p, double s, double t, double tol = 1e-12) {
    detail::require_positive_st(s, t);
    const DomainClass cls = classify(p, tol);
    if (cls.kind == Kind::missing_gamma_edge || cls.kind == Kind::trivial_gamma_edge) {
        throw domain_error("limit_edge does not cover the gamma-axis edge");
    }
    if (cls.kind != Kind::edge_b) throw domain_error("limit_edge needs parameters on an edge");
    const double denom = 1.0 - p.gamma * p.gamma;
    return (*cls.edge_axis == Axis::alpha ? s : t) / denom;
}

/// Limit of n^(-2) Var Y_n(s,t) at the vertices: the Wiener-sheet variance s t.
inline double limit_vertex(double s, double t) {
    detail::require_positive_st(s, t);
    return s * t;
}

/// alpha = beta = 0, |gamma| = 1: Var X(k,l) = min(k,l), so the n^(-1) limit is min(s,t).
inline double limit_trivial_gamma_edge(double s, double t) {
    detail::require_positive_st(s, t);
    return std::min(s, t);
}

struct VarianceLimitResult {
    Params canonical;
    DomainClass cls;
    /// Empty when no limit is known for the regime.
    std::optional<double> value;
};

/// Canonicalizes, classifies and evaluates the matching limit.
inline VarianceLimitResult variance_limit(const Params& p, double s, double t, double tol = 1e-12) {
    detail::require_positive_st(s, t);
    VarianceLimitResult out;
    out.canonical = canonicalize(p).first;
    out.cls = classify(out.canonical, tol);
    switch (out.cls.kind) {
        case Kind::stable: out.value = sigma2_stable(out.canonical, tol); break;
        case Kind::face_a: out.value = limit_face(out.canonical, s, t, tol); break;
        case Kind::edge_b: out.value = limit_edge(out.canonical, s, t, tol); break;
        case Kind::vertex_c: out.value = limit_vertex(s, t); break;
        case Kind::trivial_gamma_edge: out.value = limit_trivial_gamma_edge(s, t); break;
        case Kind::missing_face:
        case Kind::missing_gamma_edge:
        case Kind::outside: break;
    }
    return out;
}

struct ConvergenceRow {
    long long n = 0;
    double var_exact = 0.0;
    double scaled = 0.0;
    double limit = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;

    friend bool operator==(const ConvergenceRow&, const ConvergenceRow&) = default;
};

struct ConvergenceReport {
    Params params;
    DomainClass cls;
    double s = 1.0;
    double t = 1.0;
    std::vector<ConvergenceRow> rows;  // ascending in n
};

/// Exact Var X([ns],[nt]) scaled by n^(-2 rho) against the known limit, for each n.
/// Grid sizes are evaluated concurrently; rows keep the order of n_list.
inline ConvergenceReport convergence_study(const Params& p, double s, double t, const std::vector<long long>& n_list,
                                           double tol = 1e-12) {
    if (n_list.empty()) throw domain_error("convergence_study needs a nonempty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) throw domain_error("convergence_study needs n in ascending order");
    }
    const VarianceLimitResult lim = variance_limit(p, s, t, tol);
    if (!lim.value) {
        throw domain_error(std::string("no known variance limit for regime ") + std::string(to_string(lim.cls.kind)));
    }
    for (long long n : n_list) ScaledQuery{s, t, n}.validate();

    ConvergenceReport rep;
    rep.params = p;
    rep.cls = lim.cls;
    rep.s = s;
    rep.t = t;
    rep.rows.resize(n_list.size());

    auto fill = [&](std::size_t i) {
        const ScaledQuery q{s, t, n_list[i]};
        ConvergenceRow& row = rep.rows[i];
        row.n = q.n;
        row.var_exact = var_point(q.k(), q.l(), p);
        row.scaled = row.var_exact * rho_scale(lim.cls.rho, static_cast<double>(q.n));
        row.limit = *lim.value;
        row.abs_err = std::abs(row.scaled - row.limit);
        row.rel_err = row.abs_err / std::abs(row.limit);
    };

    const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
    if (workers == 1 || n_list.size() == 1) {
        for (std::size_t i = 0; i < n_list.size(); ++i) fill(i);
        return rep;
    }
    std::vector<std::future<void>> pending;
    pending.reserve(n_list.size());
    for (std::size_t i = 0; i < n_list.size(); ++i) pending.push_back(std::async(std::launch::async, fill, i));
    for (auto& f : pending) f.get();
    return rep;
}

}  // namespace sar2d
