#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "sar2d/error.hpp"
#include "sar2d/numeric.hpp"
#include "sar2d/params.hpp"

namespace sar2d {

namespace detail {

// Walks P_0^(0,b)(x), P_1^(0,b)(x), ... one degree per call.
class jacobi_p0b_walk {
public:
    jacobi_p0b_walk(long long b, double x) : b_(static_cast<double>(b)), x_(x) {}

    double next() noexcept {
        ++degree_;
        if (degree_ == 0) {
            cur_ = 1.0;
        } else if (degree_ == 1) {
            prev_ = cur_;
            cur_ = 0.5 * (-b_ + (b_ + 2.0) * x_);
        } else {
            const auto k = static_cast<double>(degree_);
            const double s = 2.0 * k + b_;  // 2k + a + b with a = 0
            const double c1 = 2.0 * k * (k + b_) * (s - 2.0);
            const double c2 = (s - 1.0) * (s * (s - 2.0) * x_ - b_ * b_);
            const double c3 = 2.0 * (k - 1.0) * (k + b_ - 1.0) * s;
            const double nxt = (c2 * cur_ - c3 * prev_) / c1;
            prev_ = cur_;
            cur_ = nxt;
        }
        return cur_;
    }

private:
    double b_;
    double x_;
    long long degree_ = -1;
    double prev_ = 0.0;
    double cur_ = 0.0;
};

// Bin(n, p) pmf in double-double, p and q = 1 - p given separately so that
// neither is rounded; mode-centered ratio walk, then normalization.
inline std::vector<double_double> pmf_dd(long long n, const double_double& p, const double_double& q) {
    const auto size = static_cast<std::size_t>(n) + 1;
    std::vector<double_double> w(size, double_double(0.0));
    const double_double odds = p / q;
    const auto mode = std::clamp(static_cast<long long>(std::floor(static_cast<double>(n + 1) * p.hi)), 0LL, n);
    w[static_cast<std::size_t>(mode)] = 1.0;
    for (long long j = mode; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        w[ju + 1] = w[ju] * odds * double_double(static_cast<double>(n - j)) / double_double(static_cast<double>(j + 1));
    }
    for (long long j = mode; j > 0; --j) {
        const auto ju = static_cast<std::size_t>(j);
        w[ju - 1] = w[ju] / odds * double_double(static_cast<double>(j)) / double_double(static_cast<double>(n - j + 1));
    }
    double_double total(0.0);
    for (const auto& x : w) total += x;
    for (auto& x : w) x = x / total;
    return w;
}

inline void require_sub_unit(double alpha) {
    if (!(std::abs(alpha) < 1.0)) throw domain_error("gamma-edge representation needs |alpha| < 1");
}

}  // namespace detail

/// Jacobi polynomial P_n^(0,b)(x) by the three-term recurrence in the degree,
/// seeded with P_0 = 1 and P_1 = (-b + (b+2) x) / 2.
inline double jacobi_p0b(long long n, long long b, double x) {
    if (n < 0 || b < 0) throw domain_error("jacobi_p0b needs n >= 0 and b >= 0");
    detail::jacobi_p0b_walk walk(b, x);
    double value = 1.0;
    for (long long k = 0; k <= n; ++k) value = walk.next();
    return value;
}

/// G(m,n; a, a, -1) = a^|m-n| P_{min(m,n)}^(0,|m-n|)(2a^2 - 1).
inline double g_gamma_edge(long long m, long long n, double alpha) {
    if (m < 0 || n < 0) throw domain_error("coefficient indices must be nonnegative");
    detail::require_sub_unit(alpha);
    const long long d = std::llabs(m - n);
    return ipow(alpha, d) * jacobi_p0b(std::min(m, n), d, 2.0 * alpha * alpha - 1.0);
}

/// Var X(K,L) at (a, a, -1):
///   sum_{k<K, l<L} (cos^2(theta/2))^|k-l| (P_{min(k,l)}^(0,|k-l|)(cos theta))^2
/// with cos theta = 2a^2 - 1 and cos^2(theta/2) = a^2. Each diagonal k - l = d
/// runs one Jacobi recurrence in the degree, so the cost is O(K L).
inline double var_gamma_edge(long long K, long long L, double alpha) {
    if (K < 1 || L < 1) throw domain_error("var_gamma_edge needs K, L >= 1");
    detail::require_sub_unit(alpha);
    const double x = 2.0 * alpha * alpha - 1.0;
    const double a2 = alpha * alpha;

    compensated_sum total;
    auto diagonal = [&](long long d, long long count) {
        const double weight = ipow(a2, d);
        detail::jacobi_p0b_walk walk(d, x);
        for (long long deg = 0; deg < count; ++deg) {
            const double value = walk.next();
            total += weight * value * value;
        }
    };
    for (long long d = 0; d < K; ++d) diagonal(d, std::min(K - d, L));  // k = l + d
    for (long long d = 1; d < L; ++d) diagonal(d, std::min(L - d, K));  // l = k + d
    return total.value();
}

/// Default index cap for the alternating missing-face sums.
constexpr long long missing_face_index_cap = 200;

/// G(m,n) on the sign-mixed faces a - b - g = 1 or -a + b - g = 1 with
/// 0 < a, b < 1 and -1 <= g < 0, as an alternating sum of binomial
/// probabilities:
///   (1+2b)^n sum_r (-1)^r P(xi_m^(a) = m-r) P(eta_n^((1+b)/(1+2b)) = r)
/// and the mirrored form with the roles of (m,a) and (n,b) swapped.
inline double g_missing_face(long long m, long long n, const Params& p, double tol = 1e-12,
                             long long index_cap = missing_face_index_cap) {
    if (m < 0 || n < 0) throw domain_error("coefficient indices must be nonnegative");
    require_finite(p);
    if (!(p.alpha > 0.0 && p.alpha < 1.0 && p.beta > 0.0 && p.beta < 1.0 && p.gamma >= -1.0 - tol &&
          p.gamma < 0.0)) {
        throw domain_error("g_missing_face needs 0 < alpha, beta < 1 and -1 <= gamma < 0");
    }
    if (m > index_cap || n > index_cap) {
        throw precision_error("g_missing_face: indices beyond the cap lose all precision to cancellation");
    }
    const bool first = std::abs(p.alpha - p.beta - p.gamma - 1.0) <= tol;
    const bool second = std::abs(-p.alpha + p.beta - p.gamma - 1.0) <= tol;
    if (!first && !second) {
        throw domain_error("g_missing_face needs alpha - beta - gamma = 1 or -alpha + beta - gamma = 1");
    }

    // Second face: swap (m, alpha) with (n, beta).
    const long long mm = first ? m : n;
    const long long nn = first ? n : m;
    const double a = first ? p.alpha : p.beta;
    const double b = first ? p.beta : p.alpha;

    // The sum cancels by up to (1+2b)^n, so pmfs, products and the sum carry
    // double-double precision.
    const double_double one(1.0);
    const double_double scale = one + double_double(2.0) * double_double(b);
    const auto px = detail::pmf_dd(mm, a, one - double_double(a));
    const auto py = detail::pmf_dd(nn, (one + double_double(b)) / scale, double_double(b) / scale);
    double_double acc(0.0);
    for (long long r = 0; r <= std::min(mm, nn); ++r) {
        const double_double term = px[static_cast<std::size_t>(mm - r)] * py[static_cast<std::size_t>(r)];
        acc += (r % 2 == 0) ? term : -term;
    }
    return (pow(scale, static_cast<unsigned>(nn)) * acc).hi;
}

}  // namespace sar2d
