#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sar2d/binomial.hpp"
#include "sar2d/error.hpp"
#include "sar2d/numeric.hpp"
#include "sar2d/params.hpp"

namespace sar2d {

enum class Method { direct, recurrence, binomial, hypergeometric };

constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::direct: return "direct";
        case Method::recurrence: return "recurrence";
        case Method::binomial: return "binomial";
        case Method::hypergeometric: return "hypergeometric";
    }
    return "recurrence";
}

/// Dense row-major table of moving-average coefficients G(m,n), 0<=m<=M, 0<=n<=N.
class CoeffTable {
public:
    CoeffTable(const Params& p, std::size_t rows, std::size_t cols, Method method)
        : params_(p), rows_(rows), cols_(cols), method_(method), values_(rows * cols, 0.0) {}

    const Params& params() const noexcept { return params_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Method method() const noexcept { return method_; }

    double operator()(std::size_t m, std::size_t n) const noexcept { return values_[m * cols_ + n]; }
    double& operator()(std::size_t m, std::size_t n) noexcept { return values_[m * cols_ + n]; }

    std::span<const double> row(std::size_t m) const noexcept {
        return {values_.data() + m * cols_, cols_};
    }
    std::span<double> row(std::size_t m) noexcept { return {values_.data() + m * cols_, cols_}; }

private:
    Params params_;
    std::size_t rows_;
    std::size_t cols_;
    Method method_;
    std::vector<double> values_;
};

namespace detail {

inline void require_index(long long m, long long n) {
    if (m < 0 || n < 0) throw domain_error("coefficient indices must be nonnegative");
}

// Powers base^0 .. base^count in double-double.
inline std::vector<double_double> dd_powers(double base, long long count) {
    std::vector<double_double> out(static_cast<std::size_t>(count) + 1);
    out[0] = double_double(1.0);
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[i - 1] * double_double(base);
    return out;
}

inline bool dd_finite(const double_double& x) noexcept { return std::isfinite(x.hi) && std::isfinite(x.lo); }

// Terminating 2F1 accumulated in double-double.
inline double_double hypergeometric_dd(long long n, double b, double c, double z) {
    double_double term(1.0);
    double_double total(1.0);
    for (long long r = 0; r < n; ++r) {
        const double num = (static_cast<double>(r) - static_cast<double>(n)) * (b + static_cast<double>(r));
        if (num == 0.0) break;
        const double den = (c + static_cast<double>(r)) * static_cast<double>(r + 1);
        if (den == 0.0) {
            throw domain_error("hypergeometric: Pochhammer (c)_r vanishes before the series terminates");
        }
        term = term * double_double(num) / double_double(den) * double_double(z);
        if (!dd_finite(term)) throw numeric_overflow("hypergeometric: term overflow");
        total += term;
    }
    return total;
}

}  // namespace detail

/// G(m,n) from the defining factorial sum
///   sum_r (m+n-r)! / ((m-r)! (n-r)! r!) alpha^(m-r) beta^(n-r) gamma^r.
///
/// The multinomial weights follow the ratio
///   c(r+1)/c(r) = (m-r)(n-r) / ((m+n-r)(r+1)),
/// and every term is formed and accumulated in double-double. Negative gamma
/// makes the sum alternate with terms far larger than the result (on the
/// edges by a factor of roughly (3+2 sqrt 2)^(m+n)), so this route is meant
/// for moderate indices; g_table is the production path.
inline double g_direct(long long m, long long n, const Params& p) {
    detail::require_index(m, n);
    require_finite(p);
    const long long lo = std::min(m, n);
    const long long hi = std::max(m, n);

    double_double weight(1.0);  // C(m+n, lo)
    for (long long i = 1; i <= lo; ++i) {
        weight = weight * double_double(static_cast<double>(hi + i)) / double_double(static_cast<double>(i));
    }
    if (!detail::dd_finite(weight)) throw numeric_overflow("g_direct: multinomial weight overflows; use g_table");

    const auto pa = detail::dd_powers(p.alpha, m);
    const auto pb = detail::dd_powers(p.beta, n);
    const auto pg = detail::dd_powers(p.gamma, lo);

    double_double total(0.0);
    for (long long r = 0; r <= lo; ++r) {
        const double_double term = weight * pa[static_cast<std::size_t>(m - r)] *
                                   pb[static_cast<std::size_t>(n - r)] * pg[static_cast<std::size_t>(r)];
        if (!detail::dd_finite(term)) throw numeric_overflow("g_direct: term overflow; use g_table");
        total += term;
        if (r < lo) {
            const double num = static_cast<double>(m - r) * static_cast<double>(n - r);
            const double den = static_cast<double>(m + n - r) * static_cast<double>(r + 1);
            weight = weight * double_double(num) / double_double(den);
        }
    }
    return total.to_double();
}

/// Streams rows of G for 0<=m<=M, 0<=n<=N through `sink(m, row)` using O(N)
/// memory. Rows follow G(m,n) = a G(m-1,n) + b G(m,n-1) + g G(m-1,n-1),
/// G(0,0) = 1, G = 0 at negative indices.
template <class Sink>
void for_each_g_row(long long M, long long N, const Params& p, Sink&& sink) {
    detail::require_index(M, N);
    require_finite(p);
    const auto cols = static_cast<std::size_t>(N) + 1;
    std::vector<double> prev(cols, 0.0);
    std::vector<double> cur(cols, 0.0);
    for (long long m = 0; m <= M; ++m) {
        if (m == 0) {
            cur[0] = 1.0;
            for (std::size_t n = 1; n < cols; ++n) cur[n] = p.beta * cur[n - 1];
        } else {
            cur[0] = p.alpha * prev[0];
            for (std::size_t n = 1; n < cols; ++n) {
                cur[n] = p.alpha * prev[n] + p.beta * cur[n - 1] + p.gamma * prev[n - 1];
            }
        }
        sink(m, std::span<const double>(cur));
        std::swap(prev, cur);
    }
}

/// Full (M+1) x (N+1) table by the two-dimensional recurrence.
inline CoeffTable g_table(long long M, long long N, const Params& p) {
    detail::require_index(M, N);
    require_budget(static_cast<std::size_t>(M) + 1, static_cast<std::size_t>(N) + 1, "g_table");
    CoeffTable table(p, static_cast<std::size_t>(M) + 1, static_cast<std::size_t>(N) + 1, Method::recurrence);
    for_each_g_row(M, N, p, [&](long long m, std::span<const double> row) {
        std::copy(row.begin(), row.end(), table.row(static_cast<std::size_t>(m)).begin());
    });
    return table;
}

/// Terminating Gauss hypergeometric sum F(-n, b; c; z) = sum_{r<=n} (-n)_r (b)_r / ((c)_r r!) z^r.
/// Stops early once a numerator Pochhammer vanishes.
inline double hypergeometric_terminating(long long n, double b, double c, double z) {
    if (n < 0) throw domain_error("hypergeometric: degree must be nonnegative");
    return detail::hypergeometric_dd(n, b, c, z).to_double();
}

/// G(m,n) = C(m+n,n) alpha^m beta^n F(-m,-n;-m-n; -gamma/(alpha beta)); needs alpha*beta != 0.
inline double g_hypergeom(long long m, long long n, const Params& p) {
    detail::require_index(m, n);
    require_finite(p);
    if (p.alpha == 0.0 || p.beta == 0.0) {
        throw unsupported_parameterization("g_hypergeom needs alpha*beta != 0; use g_direct or g_table");
    }
    const double z = -p.gamma / (p.alpha * p.beta);
    const double_double f = detail::hypergeometric_dd(m, static_cast<double>(-n), static_cast<double>(-m - n), z);

    const auto md = static_cast<double>(m);
    const auto nd = static_cast<double>(n);
    const double log_mag = std::lgamma(md + nd + 1.0) - std::lgamma(md + 1.0) - std::lgamma(nd + 1.0) +
                           md * std::log(std::abs(p.alpha)) + nd * std::log(std::abs(p.beta));
    const bool negative = ((p.alpha < 0.0) && (m % 2 == 1)) != ((p.beta < 0.0) && (n % 2 == 1));
    const double prefactor = std::exp(log_mag);
    if (!std::isfinite(prefactor)) throw numeric_overflow("g_hypergeom: prefactor overflow");
    const double value = prefactor * f.to_double();
    return negative ? -value : value;
}

/// Which of the two binomial-probability forms to evaluate.
enum class BinomialForm { automatic, along_n, along_m };

/// G(m,n) as a scaled probability of a sum of independent binomials:
///   along_n: ((a+g)/(1-b))^m P(xi_n^(b) + eta_m^((ab+g)/(a+g)) = n)
///   along_m: ((b+g)/(1-a))^n P(xi_m^(a) + eta_n^((ab+g)/(b+g)) = m)
/// Requires 0 <= alpha, beta < 1 and alpha*beta + gamma >= 0.
inline double g_binomial(long long m, long long n, const Params& p, BinomialForm form = BinomialForm::automatic) {
    detail::require_index(m, n);
    require_finite(p);
    if (!(p.alpha >= 0.0 && p.alpha < 1.0 && p.beta >= 0.0 && p.beta < 1.0)) {
        throw domain_error("g_binomial needs 0 <= alpha, beta < 1");
    }
    const double cross = p.alpha * p.beta + p.gamma;
    if (cross < 0.0) throw domain_error("g_binomial needs alpha*beta + gamma >= 0");

    const double den_n = p.alpha + p.gamma;  // zero only when alpha = gamma = 0
    const double den_m = p.beta + p.gamma;
    if (den_n <= 0.0 && den_m <= 0.0) {
        return (m == 0 && n == 0) ? 1.0 : 0.0;
    }

    const double f_n = den_n / (1.0 - p.beta);
    const double f_m = den_m / (1.0 - p.alpha);
    if (form == BinomialForm::automatic) {
        if (den_n <= 0.0) {
            form = BinomialForm::along_m;
        } else if (den_m <= 0.0) {
            form = BinomialForm::along_n;
        } else {
            // Prefer the smaller scale factor so the probability carries the magnitude.
            const double log_n = static_cast<double>(m) * std::log(f_n);
            const double log_m = static_cast<double>(n) * std::log(f_m);
            form = log_n <= log_m ? BinomialForm::along_n : BinomialForm::along_m;
        }
    }

    if (form == BinomialForm::along_n) {
        if (den_n <= 0.0) throw domain_error("g_binomial: along_n form needs alpha + gamma > 0");
        const double q = std::clamp(cross / den_n, 0.0, 1.0);
        const binomial::BinomialSumSpec spec{n, m, p.beta, q};
        return std::pow(f_n, static_cast<double>(m)) * binomial::pmf_sum(spec, n);
    }
    if (den_m <= 0.0) throw domain_error("g_binomial: along_m form needs beta + gamma > 0");
    const double q = std::clamp(cross / den_m, 0.0, 1.0);
    const binomial::BinomialSumSpec spec{m, n, p.alpha, q};
    return std::pow(f_m, static_cast<double>(n)) * binomial::pmf_sum(spec, m);
}

/// On the face alpha + beta + gamma = 1 with 0 <= alpha, beta < 1:
/// G(m,n) = P(xi_m^(alpha) + eta_n^(1-beta) = m).
inline double g_face(long long m, long long n, const Params& p, double tol = 1e-12) {
    detail::require_index(m, n);
    require_finite(p);
    if (!(p.alpha >= 0.0 && p.alpha < 1.0 && p.beta >= 0.0 && p.beta < 1.0)) {
        throw domain_error("g_face needs 0 <= alpha, beta < 1");
    }
    if (std::abs(p.alpha + p.beta + p.gamma - 1.0) > tol) {
        throw domain_error("g_face needs alpha + beta + gamma = 1");
    }
    const binomial::BinomialSumSpec spec{m, n, p.alpha, 1.0 - p.beta};
    return binomial::pmf_sum(spec, m);
}

}  // namespace sar2d
