#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sar2d/error.hpp"
#include "sar2d/macoef.hpp"
#include "sar2d/numeric.hpp"
#include "sar2d/params.hpp"

namespace sar2d {

/// Index pair of the covariance Cov(X(k1,l1), X(k2,l2)); all indices >= 1.
struct CovQuery {
    long long k1 = 1;
    long long l1 = 1;
    long long k2 = 1;
    long long l2 = 1;

    void validate() const {
        if (k1 < 1 || l1 < 1 || k2 < 1 || l2 < 1) {
            throw domain_error("covariance indices must be >= 1");
        }
    }
};

/// Var X(k,l) for 1<=k<=K, 1<=l<=L.
class VarianceTable {
public:
    VarianceTable(const Params& p, long long K, long long L)
        : params_(p), K_(K), L_(L), values_(static_cast<std::size_t>(K) * static_cast<std::size_t>(L), 0.0) {}

    const Params& params() const noexcept { return params_; }
    long long K() const noexcept { return K_; }
    long long L() const noexcept { return L_; }

    /// 1-based, like the field indices.
    double operator()(long long k, long long l) const noexcept { return values_[index(k, l)]; }
    double& operator()(long long k, long long l) noexcept { return values_[index(k, l)]; }

private:
    std::size_t index(long long k, long long l) const noexcept {
        return static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(L_) + static_cast<std::size_t>(l - 1);
    }

    Params params_;
    long long K_;
    long long L_;
    std::vector<double> values_;
};

/// Cov(X(k1,l1), X(k2,l2)) = sum_{i<=k1^k2, j<=l1^l2} G(k1-i,l1-j) G(k2-i,l2-j).
inline double cov_exact(const CovQuery& q, const Params& p) {
    q.validate();
    require_finite(p);
    const long long K = std::max(q.k1, q.k2);
    const long long L = std::max(q.l1, q.l2);
    const CoeffTable g = g_table(K - 1, L - 1, p);
    const long long kmin = std::min(q.k1, q.k2);
    const long long lmin = std::min(q.l1, q.l2);

    compensated_sum acc;
    for (long long i = 1; i <= kmin; ++i) {
        const auto r1 = g.row(static_cast<std::size_t>(q.k1 - i));
        const auto r2 = g.row(static_cast<std::size_t>(q.k2 - i));
        for (long long j = 1; j <= lmin; ++j) {
            acc += r1[static_cast<std::size_t>(q.l1 - j)] * r2[static_cast<std::size_t>(q.l2 - j)];
        }
    }
    return acc.value();
}

/// All variances up to (K,L) from a single streaming pass over rows of G:
/// Var X(k,l) = sum_{m<k, n<l} G(m,n)^2 via two-dimensional prefix sums.
inline VarianceTable var_table(long long K, long long L, const Params& p) {
    if (K < 1 || L < 1) throw domain_error("var_table needs K, L >= 1");
    require_budget(static_cast<std::size_t>(K), static_cast<std::size_t>(L), "var_table");
    VarianceTable out(p, K, L);
    std::vector<compensated_sum> columns(static_cast<std::size_t>(L));
    for_each_g_row(K - 1, L - 1, p, [&](long long m, std::span<const double> row) {
        compensated_sum prefix;
        for (std::size_t n = 0; n < row.size(); ++n) {
            prefix += row[n] * row[n];
            columns[n] += prefix.value();
            out(m + 1, static_cast<long long>(n) + 1) = columns[n].value();
        }
    });
    return out;
}

/// Var X(K,L) alone, with O(L) working memory.
inline double var_point(long long K, long long L, const Params& p) {
    if (K < 1 || L < 1) throw domain_error("var_point needs K, L >= 1");
    require_budget(2, static_cast<std::size_t>(L), "var_point");
    compensated_sum acc;
    for_each_g_row(K - 1, L - 1, p, [&](long long, std::span<const double> row) {
        for (double v : row) acc += v * v;
    });
    return acc.value();
}

/// Closed-form covariance on the alpha- or beta-axis edge (and the degenerate
/// |alpha|=1, beta=gamma=0 / |beta|=1, alpha=gamma=0 points).
inline double cov_edge(const CovQuery& q, const Params& p, double tol = 1e-12) {
    q.validate();
    const DomainClass cls = classify(p, tol);
    if (cls.kind != Kind::edge_b || !cls.edge_axis || *cls.edge_axis == Axis::gamma) {
        throw domain_error("cov_edge needs parameters on the alpha- or beta-axis edge");
    }
    const long long dk = std::llabs(q.k1 - q.k2);
    const long long dl = std::llabs(q.l1 - q.l2);
    const long long kmin = std::min(q.k1, q.k2);
    const long long lmin = std::min(q.l1, q.l2);

    // Sum of sub^(2j) for j < count, i.e. (1 - sub^(2 count)) / (1 - sub^2).
    auto geometric = [](double sub, long long count) {
        const double s2 = sub * sub;
        return (1.0 - ipow(s2, count)) / (1.0 - s2);
    };
    const double unit_a = p.alpha >= 0.0 ? 1.0 : -1.0;
    const double unit_b = p.beta >= 0.0 ? 1.0 : -1.0;
    if (*cls.edge_axis == Axis::alpha) {
        return static_cast<double>(kmin) * ipow(unit_a, dk) * ipow(p.beta, dl) * geometric(p.beta, lmin);
    }
    return static_cast<double>(lmin) * ipow(unit_b, dl) * ipow(p.alpha, dk) * geometric(p.alpha, kmin);
}

/// Cov = (k1^k2)(l1^l2) alpha^|k1-k2| beta^|l1-l2| at the vertices.
inline double cov_vertex(const CovQuery& q, const Params& p, double tol = 1e-12) {
    q.validate();
    if (classify(p, tol).kind != Kind::vertex_c) {
        throw domain_error("cov_vertex needs a vertex of the stability domain");
    }
    const double sa = p.alpha > 0.0 ? 1.0 : -1.0;
    const double sb = p.beta > 0.0 ? 1.0 : -1.0;
    const double mag = static_cast<double>(std::min(q.k1, q.k2)) * static_cast<double>(std::min(q.l1, q.l2));
    return mag * ipow(sa, std::llabs(q.k1 - q.k2)) * ipow(sb, std::llabs(q.l1 - q.l2));
}

// ---------------------------------------------------------------------------
// Covariance bound checks

struct BoundCheckReport {
    DomainClass cls;
    std::size_t samples = 0;
    long long index_max = 0;
    std::uint64_t seed = 0;
    std::size_t violations = 0;
    /// stable/edge: max |cov| / bound; face: max |cov| / sqrt(k1+l1+k2+l2);
    /// vertex: max |cov_exact - closed form|.
    double max_statistic = 0.0;
    /// face only: max ratio at index_max = 16, 32, 64.
    std::vector<double> face_ratio_by_size;
    bool passed = false;
    std::string note;
};

inline std::vector<CovQuery> sample_queries(std::size_t n_samples, long long index_max, std::uint64_t seed) {
    if (index_max < 1) throw domain_error("index_max must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> pick(1, index_max);
    std::vector<CovQuery> out(n_samples);
    for (auto& q : out) {
        q.k1 = pick(rng);
        q.l1 = pick(rng);
        q.k2 = pick(rng);
        q.l2 = pick(rng);
    }
    return out;
}

/// (|a|+|b|+|g|)^((|dk|+|dl|)/2) / (1 - (|a|+|b|+|g|))^2 for |a|+|b|+|g| < 1.
inline double stable_cov_bound(const CovQuery& q, const Params& p) {
    const double s = p.abs_sum();
    if (!(s < 1.0)) throw domain_error("stable covariance bound needs |alpha|+|beta|+|gamma| < 1");
    const double lag = static_cast<double>(std::llabs(q.k1 - q.k2) + std::llabs(q.l1 - q.l2));
    return std::pow(s, lag / 2.0) / ((1.0 - s) * (1.0 - s));
}

/// (k1^k2)|g|^|dl| / (1-g^2) on the alpha-axis edge, the mirrored form on the beta-axis edge.
inline double edge_cov_bound(const CovQuery& q, const Params& p, Axis axis) {
    const double g = std::abs(p.gamma);
    const double denom = 1.0 - g * g;
    if (axis == Axis::alpha) {
        return static_cast<double>(std::min(q.k1, q.k2)) * ipow(g, std::llabs(q.l1 - q.l2)) / denom;
    }
    return static_cast<double>(std::min(q.l1, q.l2)) * ipow(g, std::llabs(q.k1 - q.k2)) / denom;
}

/// max |cov| / sqrt(k1+l1+k2+l2) over sampled quadruples.
inline double face_ratio_max(const Params& p, std::size_t n_samples, long long index_max, std::uint64_t seed) {
    double best = 0.0;
    for (const auto& q : sample_queries(n_samples, index_max, seed)) {
        const double ratio = std::abs(cov_exact(q, p)) / std::sqrt(static_cast<double>(q.k1 + q.l1 + q.k2 + q.l2));
        best = std::max(best, ratio);
    }
    return best;
}

/// Checks the covariance bounds on sampled index quadruples.
///
/// Stable and edge regimes test the inequalities as stated (with a relative
/// slack of 1e-12 for rounding). The face constant is unspecified, so the face
/// check tests that the max ratio at index_max = 64 is at most twice that at 16.
/// Vertices compare cov_exact with the closed form exactly.
inline BoundCheckReport check_bounds(const Params& p, std::size_t n_samples, long long index_max,
                                     std::uint64_t seed, double tol = 1e-12) {
    constexpr double slack = 1e-12;
    BoundCheckReport rep;
    rep.cls = classify(p, tol);
    rep.samples = n_samples;
    rep.index_max = index_max;
    rep.seed = seed;

    switch (rep.cls.kind) {
        case Kind::stable: {
            for (const auto& q : sample_queries(n_samples, index_max, seed)) {
                const double bound = stable_cov_bound(q, p);
                const double c = std::abs(cov_exact(q, p));
                rep.max_statistic = std::max(rep.max_statistic, c / bound);
                if (c > bound * (1.0 + slack)) ++rep.violations;
            }
            rep.passed = rep.violations == 0;
            rep.note = "|cov| <= (|a|+|b|+|g|)^((|dk|+|dl|)/2) / (1-(|a|+|b|+|g|))^2";
            break;
        }
        case Kind::edge_b: {
            if (*rep.cls.edge_axis == Axis::gamma) throw domain_error("no covariance bound on the gamma-axis edge");
            for (const auto& q : sample_queries(n_samples, index_max, seed)) {
                const double bound = edge_cov_bound(q, p, *rep.cls.edge_axis);
                const double c = std::abs(cov_exact(q, p));
                rep.max_statistic = std::max(rep.max_statistic, c / bound);
                if (c > bound * (1.0 + slack)) ++rep.violations;
            }
            rep.passed = rep.violations == 0;
            rep.note = "|cov| <= (k1^k2)|g|^|dl|/(1-g^2) (alpha axis) or (l1^l2)|g|^|dk|/(1-g^2) (beta axis)";
            break;
        }
        case Kind::face_a: {
            rep.max_statistic = face_ratio_max(p, n_samples, index_max, seed);
            for (long long size : {16LL, 32LL, 64LL}) {
                rep.face_ratio_by_size.push_back(face_ratio_max(p, n_samples, size, seed));
            }
            rep.passed = rep.face_ratio_by_size.back() <= 2.0 * rep.face_ratio_by_size.front();
            rep.note = "face constant is unspecified; checks max |cov|/sqrt(k1+l1+k2+l2) at index_max 64 <= 2x at 16";
            break;
        }
        case Kind::vertex_c: {
            for (const auto& q : sample_queries(n_samples, index_max, seed)) {
                const double diff = std::abs(cov_exact(q, p) - cov_vertex(q, p, tol));
                rep.max_statistic = std::max(rep.max_statistic, diff);
                if (diff != 0.0) ++rep.violations;
            }
            rep.passed = rep.violations == 0;
            rep.note = "cov == (k1^k2)(l1^l2) a^|dk| b^|dl| exactly";
            break;
        }
        default:
            throw domain_error(std::string("no covariance bound for regime ") + std::string(to_string(rep.cls.kind)));
    }
    return rep;
}

}  // namespace sar2d
