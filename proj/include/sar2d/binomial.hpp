#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sar2d/error.hpp"
#include "sar2d/numeric.hpp"

namespace sar2d::binomial {

/// Full pmf of Bin(n, p), j = 0..n.
///
/// Starts from the mode with an unnormalized weight of one, walks outward with
/// the ratio P(j+1)/P(j) = (n-j)/(j+1) * p/(1-p), then normalizes. Tail values
/// keep full relative accuracy until they underflow.
inline std::vector<double> pmf_vector(long long n, double p) {
    if (n < 0) throw domain_error("binomial: n must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("binomial: p must lie in [0,1]");
    const auto size = static_cast<std::size_t>(n) + 1;
    std::vector<double> w(size, 0.0);
    if (p == 0.0) {
        w.front() = 1.0;
        return w;
    }
    if (p == 1.0) {
        w.back() = 1.0;
        return w;
    }

    const double odds = p / (1.0 - p);
    const auto mode = static_cast<long long>(std::floor(static_cast<double>(n + 1) * p));
    const long long m = std::clamp(mode, 0LL, n);
    w[static_cast<std::size_t>(m)] = 1.0;
    for (long long j = m; j < n; ++j) {
        w[static_cast<std::size_t>(j + 1)] =
            w[static_cast<std::size_t>(j)] * (static_cast<double>(n - j) / static_cast<double>(j + 1)) * odds;
    }
    for (long long j = m; j > 0; --j) {
        w[static_cast<std::size_t>(j - 1)] =
            w[static_cast<std::size_t>(j)] * (static_cast<double>(j) / static_cast<double>(n - j + 1)) / odds;
    }

    compensated_sum total;
    for (double x : w) total += x;
    const double norm = total.value();
    for (double& x : w) x /= norm;
    return w;
}

/// P(Bin(n,p) = j); zero outside 0..n.
inline double pmf_binomial(long long n, double p, long long j) {
    if (j < 0 || j > n) return 0.0;
    return pmf_vector(n, p)[static_cast<std::size_t>(j)];
}

/// S = xi + eta with xi ~ Bin(k, nu) and eta ~ Bin(l, mu) independent.
struct BinomialSumSpec {
    long long k = 0;
    long long l = 0;
    double nu = 0.5;
    double mu = 0.5;

    double mean() const noexcept {
        return static_cast<double>(k) * nu + static_cast<double>(l) * mu;
    }
    double variance() const noexcept {
        return static_cast<double>(k) * nu * (1.0 - nu) + static_cast<double>(l) * mu * (1.0 - mu);
    }
    /// (j - mean) / sqrt(variance)
    double standardize(long long j) const { return (static_cast<double>(j) - mean()) / std::sqrt(variance()); }

    void validate() const {
        if (k < 0 || l < 0) throw domain_error("binomial sum: k and l must be nonnegative");
        if (!(nu >= 0.0 && nu <= 1.0) || !(mu >= 0.0 && mu <= 1.0)) {
            throw domain_error("binomial sum: nu and mu must lie in [0,1]");
        }
    }
};

/// Exact distribution of S, j = 0..k+l, by direct convolution.
inline std::vector<double> pmf_sum_vector(const BinomialSumSpec& spec) {
    spec.validate();
    const auto px = pmf_vector(spec.k, spec.nu);
    const auto py = pmf_vector(spec.l, spec.mu);
    std::vector<double> out(px.size() + py.size() - 1, 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const std::size_t lo = j >= py.size() ? j - (py.size() - 1) : 0;
        const std::size_t hi = std::min(j, px.size() - 1);
        double acc = 0.0;
        for (std::size_t r = lo; r <= hi; ++r) acc += px[r] * py[j - r];
        out[j] = acc;
    }
    return out;
}

/// P(S = j); zero outside the support.
inline double pmf_sum(const BinomialSumSpec& spec, long long j) {
    spec.validate();
    if (j < 0 || j > spec.k + spec.l) return 0.0;
    const auto px = pmf_vector(spec.k, spec.nu);
    const auto py = pmf_vector(spec.l, spec.mu);
    const long long lo = std::max(0LL, j - spec.l);
    const long long hi = std::min(j, spec.k);
    double acc = 0.0;
    for (long long r = lo; r <= hi; ++r) {
        acc += px[static_cast<std::size_t>(r)] * py[static_cast<std::size_t>(j - r)];
    }
    return acc;
}

/// Normal density with matched mean and variance, evaluated at the lattice point j.
inline double local_clt_density(const BinomialSumSpec& spec, long long j) {
    spec.validate();
    const double b = spec.variance();
    if (!(b > 0.0)) throw domain_error("local CLT density needs a positive variance");
    const double x = spec.standardize(j);
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi * b);
}

struct CltErrorProfile {
    double sup_error = 0.0;
    long long argmax = 0;
    double b = 0.0;
    /// sup_error * b, an empirical stand-in for the O(1/b) constant.
    double product = 0.0;
};

/// Scans the whole support for sup_j |P(S=j) - density(j)|.
inline CltErrorProfile clt_error_profile(const BinomialSumSpec& spec) {
    const auto pmf = pmf_sum_vector(spec);
    CltErrorProfile out;
    out.b = spec.variance();
    if (!(out.b > 0.0)) throw domain_error("local CLT profile needs a positive variance");
    for (std::size_t j = 0; j < pmf.size(); ++j) {
        const double err = std::abs(pmf[j] - local_clt_density(spec, static_cast<long long>(j)));
        if (err > out.sup_error) {
            out.sup_error = err;
            out.argmax = static_cast<long long>(j);
        }
    }
    out.product = out.sup_error * out.b;
    return out;
}

}  // namespace sar2d::binomial
