#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "sar2d/covariance.hpp"
#include "sar2d/error.hpp"
#include "sar2d/numeric.hpp"
#include "sar2d/params.hpp"
#include "sar2d/philox.hpp"

namespace sar2d {

/// Innovation law; every kind has mean 0 and variance 1.
enum class NoiseKind { gaussian, rademacher, uniform_centered };

constexpr std::string_view to_string(NoiseKind k) noexcept {
    switch (k) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::rademacher: return "rademacher";
        case NoiseKind::uniform_centered: return "uniform_centered";
    }
    return "gaussian";
}

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    std::uint64_t seed = 0;
};

/// eps(k,l) of replicate `replicate`; a pure function of (seed, replicate, k, l).
inline double innovation(const NoiseSpec& noise, std::uint64_t replicate, std::uint32_t k, std::uint32_t l) noexcept {
    const philox4x32::key_type key = {static_cast<std::uint32_t>(noise.seed),
                                      static_cast<std::uint32_t>(noise.seed >> 32U)};
    const philox4x32::counter_type ctr = {k, l, static_cast<std::uint32_t>(replicate),
                                          static_cast<std::uint32_t>(replicate >> 32U)};
    const auto w = philox4x32::apply(ctr, key);
    switch (noise.kind) {
        case NoiseKind::gaussian: {
            const double u1 = open_unit(w[0], w[1]);
            const double u2 = open_unit(w[2], w[3]);
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }
        case NoiseKind::rademacher:
            return (w[0] & 1U) != 0U ? 1.0 : -1.0;
        case NoiseKind::uniform_centered:
            return std::numbers::sqrt3 * (2.0 * open_unit(w[0], w[1]) - 1.0);
    }
    return 0.0;
}

/// X(k,l) for 0<=k<=K, 0<=l<=L with the zero boundary X(k,0) = X(0,l) = 0.
class FieldGrid {
public:
    FieldGrid(long long K, long long L)
        : K_(K), L_(L), values_(static_cast<std::size_t>(K + 1) * static_cast<std::size_t>(L + 1), 0.0) {}

    long long K() const noexcept { return K_; }
    long long L() const noexcept { return L_; }
    double operator()(long long k, long long l) const noexcept { return values_[index(k, l)]; }
    double& operator()(long long k, long long l) noexcept { return values_[index(k, l)]; }

private:
    std::size_t index(long long k, long long l) const noexcept {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(L_ + 1) + static_cast<std::size_t>(l);
    }

    long long K_;
    long long L_;
    std::vector<double> values_;
};

namespace detail {

inline void require_grid(long long K, long long L) {
    if (K < 1 || L < 1) throw domain_error("field grid needs K, L >= 1");
    if (K > 0xFFFFFFFFLL || L > 0xFFFFFFFFLL) throw domain_error("field grid index exceeds 32 bits");
}

// Runs the recursion row by row through `sink(k, row)`, row[l] = X(k,l), O(L) memory.
template <class Sink>
void stream_field(long long K, long long L, const Params& p, const NoiseSpec& noise, std::uint64_t replicate,
                  Sink&& sink) {
    std::vector<double> prev(static_cast<std::size_t>(L) + 1, 0.0);
    std::vector<double> cur(static_cast<std::size_t>(L) + 1, 0.0);
    for (long long k = 1; k <= K; ++k) {
        cur[0] = 0.0;
        for (long long l = 1; l <= L; ++l) {
            const auto li = static_cast<std::size_t>(l);
            cur[li] = p.alpha * prev[li] + p.beta * cur[li - 1] + p.gamma * prev[li - 1] +
                      innovation(noise, replicate, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(l));
        }
        sink(k, std::span<const double>(cur));
        std::swap(prev, cur);
    }
}

// Sum by recursive halving; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> xs) noexcept {
    if (xs.size() <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace detail

inline FieldGrid generate_field(long long K, long long L, const Params& p, const NoiseSpec& noise,
                                std::uint64_t replicate_id) {
    require_finite(p);
    detail::require_grid(K, L);
    require_budget(static_cast<std::size_t>(K) + 1, static_cast<std::size_t>(L) + 1, "generate_field");
    FieldGrid grid(K, L);
    detail::stream_field(K, L, p, noise, replicate_id, [&](long long k, std::span<const double> row) {
        for (std::size_t l = 0; l < row.size(); ++l) grid(k, static_cast<long long>(l)) = row[l];
    });
    return grid;
}

/// Monte Carlo estimate. For mc_covariance `variance` holds the sample
/// covariance and `mean` the mean of X(k1,l1).
struct McEstimate {
    CovQuery query;
    std::size_t reps = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
};

/// Values of X(k1,l1) and X(k2,l2) per replicate. Each replicate writes its own
/// slot, so the output does not depend on the number of workers.
inline std::pair<std::vector<double>, std::vector<double>> mc_cells(const CovQuery& q, const Params& p,
                                                                    const NoiseSpec& noise, std::size_t reps,
                                                                    unsigned workers = 0) {
    q.validate();
    require_finite(p);
    const long long K = std::max(q.k1, q.k2);
    const long long L = std::max(q.l1, q.l2);
    detail::require_grid(K, L);
    std::vector<double> xs(reps);
    std::vector<double> ys(reps);

    auto run = [&](std::size_t r) {
        detail::stream_field(K, L, p, noise, r, [&](long long k, std::span<const double> row) {
            if (k == q.k1) xs[r] = row[static_cast<std::size_t>(q.l1)];
            if (k == q.k2) ys[r] = row[static_cast<std::size_t>(q.l2)];
        });
    };

    if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(reps, 1)));
    if (workers <= 1) {
        for (std::size_t r = 0; r < reps; ++r) run(r);
        return {std::move(xs), std::move(ys)};
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) run(r);
        });
    }
    pool.clear();  // joins
    return {std::move(xs), std::move(ys)};
}

/// Sample covariance of paired draws with a standard error: the normal-theory
/// value sqrt((s_xx s_yy + s_xy^2)/(n-1)) for Gaussian noise, jackknife otherwise.
inline McEstimate summarize_pairs(const CovQuery& q, std::span<const double> xs, std::span<const double> ys,
                                  bool gaussian) {
    const std::size_t n = xs.size();
    if (n < 2) throw domain_error("Monte Carlo estimates need reps >= 2");
    const auto nd = static_cast<double>(n);
    const double mx = detail::pairwise_sum(xs) / nd;
    const double my = detail::pairwise_sum(ys) / nd;
    std::vector<double> dx(n), dy(n), prod(n), sqx(n), sqy(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = xs[i] - mx;
        dy[i] = ys[i] - my;
        prod[i] = dx[i] * dy[i];
        sqx[i] = dx[i] * dx[i];
        sqy[i] = dy[i] * dy[i];
    }
    const double sxy_total = detail::pairwise_sum(prod);
    const double sxy = sxy_total / (nd - 1.0);
    const double sxx = detail::pairwise_sum(sqx) / (nd - 1.0);
    const double syy = detail::pairwise_sum(sqy) / (nd - 1.0);

    McEstimate est;
    est.query = q;
    est.reps = n;
    est.mean = mx;
    est.variance = sxy;
    if (gaussian || n < 3) {
        est.std_error = std::sqrt((sxx * syy + sxy * sxy) / (nd - 1.0));
        return est;
    }
    // Leave-one-out covariances: (S - d_i e_i n/(n-1)) / (n-2).
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) loo[i] = (sxy_total - prod[i] * nd / (nd - 1.0)) / (nd - 2.0);
    const double loo_mean = detail::pairwise_sum(loo) / nd;
    for (double& v : loo) v = (v - loo_mean) * (v - loo_mean);
    est.std_error = std::sqrt((nd - 1.0) / nd * detail::pairwise_sum(loo));
    return est;
}

/// Sample variance of X(k,l) over `reps` replicates.
inline McEstimate mc_variance(long long k, long long l, const Params& p, const NoiseSpec& noise, std::size_t reps,
                              unsigned workers = 0) {
    if (reps < 2) throw domain_error("mc_variance needs reps >= 2");
    const CovQuery q{k, l, k, l};
    auto [xs, ys] = mc_cells(q, p, noise, reps, workers);
    return summarize_pairs(q, xs, ys, noise.kind == NoiseKind::gaussian);
}

/// Sample covariance of (X(k1,l1), X(k2,l2)), both read from the same replicate.
inline McEstimate mc_covariance(const CovQuery& q, const Params& p, const NoiseSpec& noise, std::size_t reps,
                                unsigned workers = 0) {
    if (reps < 2) throw domain_error("mc_covariance needs reps >= 2");
    auto [xs, ys] = mc_cells(q, p, noise, reps, workers);
    return summarize_pairs(q, xs, ys, noise.kind == NoiseKind::gaussian);
}

}  // namespace sar2d
