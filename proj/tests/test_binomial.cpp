#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "sar2d/binomial.hpp"

using namespace sar2d;
using namespace sar2d::binomial;

TEST(PmfBinomial, Examples) {
    EXPECT_NEAR(pmf_binomial(20, 0.5, 10), 0.176197052001953125, 1e-16);
    EXPECT_EQ(pmf_binomial(7, 0.0, 0), 1.0);
    EXPECT_EQ(pmf_binomial(5, 1.0, 5), 1.0);
    EXPECT_EQ(pmf_binomial(5, 0.3, 6), 0.0);
    EXPECT_EQ(pmf_binomial(5, 0.3, -1), 0.0);
    EXPECT_EQ(pmf_binomial(0, 0.3, 0), 1.0);
}

TEST(PmfBinomial, RejectsBadProbability) {
    EXPECT_THROW(pmf_binomial(5, 1.5, 2), domain_error);
    EXPECT_THROW(pmf_binomial(5, std::nan(""), 2), domain_error);
    EXPECT_THROW(pmf_vector(-1, 0.5), domain_error);
}

TEST(PmfBinomial, MatchesExactOracle) {
    for (long long n : {1LL, 7LL, 30LL, 100LL, 400LL}) {
        for (double p : {0.01, 0.3, 0.5, 0.77, 0.99}) {
            const auto v = pmf_vector(n, p);
            for (long long j = 0; j <= n; j += std::max(1LL, n / 17)) {
                const double want = oracle::binomial_pmf(n, p, j);
                EXPECT_NEAR(v[std::size_t(j)], want, 1e-13 * want + 1e-300) << n << " " << p << " " << j;
            }
        }
    }
}

TEST(PmfBinomial, NormalizedWithCorrectMoments) {
    const auto v = pmf_vector(1000, 0.37);
    double total = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        total += v[j];
        mean += double(j) * v[j];
        second += double(j) * double(j) * v[j];
    }
    EXPECT_NEAR(total, 1.0, 1e-13);
    EXPECT_NEAR(mean, 370.0, 1e-9);
    EXPECT_NEAR(second - mean * mean, 1000 * 0.37 * 0.63, 1e-7);
}

TEST(PmfSum, Examples) {
    EXPECT_NEAR(pmf_sum({1, 1, 0.3, 0.5}, 1), 0.5, 1e-16);
    for (long long j = 0; j <= 9; ++j) EXPECT_DOUBLE_EQ(pmf_sum({9, 0, 0.4, 0.8}, j), pmf_binomial(9, 0.4, j));
    EXPECT_EQ(pmf_sum({3, 3, 0.4, 0.5}, 7), 0.0);
    EXPECT_EQ(pmf_sum({3, 3, 0.4, 0.5}, -1), 0.0);
    EXPECT_THROW(pmf_sum({-1, 3, 0.4, 0.5}, 1), domain_error);
    EXPECT_THROW(pmf_sum({1, 3, 1.4, 0.5}, 1), domain_error);
}

TEST(PmfSum, VectorAgreesWithPointwiseAndMoments) {
    const BinomialSumSpec spec{40, 25, 0.3, 0.8};
    const auto v = pmf_sum_vector(spec);
    ASSERT_EQ(v.size(), 66u);
    double total = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        EXPECT_NEAR(v[j], pmf_sum(spec, (long long)j), 1e-16);
        total += v[j];
        mean += double(j) * v[j];
        second += double(j) * double(j) * v[j];
    }
    EXPECT_NEAR(total, 1.0, 1e-13);
    EXPECT_NEAR(mean, spec.mean(), 1e-11);
    EXPECT_NEAR(second - mean * mean, spec.variance(), 1e-9);
}

TEST(LocalClt, CenterDensity) {
    EXPECT_NEAR(local_clt_density({10, 10, 0.5, 0.5}, 10), 0.1784124116152771, 1e-12);
    EXPECT_THROW(local_clt_density({10, 10, 0.0, 1.0}, 3), domain_error);
    EXPECT_DOUBLE_EQ(BinomialSumSpec({10, 10, 0.5, 0.5}).standardize(15), 5.0 / std::sqrt(5.0));
}

TEST(LocalClt, ErrorProfileMatchesExactOracle) {
    const auto p10 = clt_error_profile({10, 10, 0.5, 0.5});
    EXPECT_NEAR(p10.sup_error, 0.002215359613323975, 1e-12);
    EXPECT_EQ(p10.b, 5.0);
    EXPECT_EQ(p10.argmax, 10);
    EXPECT_NEAR(p10.product, 0.011076798066619875, 1e-11);

    const double ref = clt_error_profile({20, 20, 0.5, 0.5}).product;
    EXPECT_NEAR(ref, 0.00785938481428744, 1e-11);
    const double expected[] = {0.0055665406746263635, 0.003939290548082841, 0.002786600738404199};
    int i = 0;
    for (long long k : {40LL, 80LL, 160LL}) {
        const auto prof = clt_error_profile({k, k, 0.5, 0.5});
        EXPECT_NEAR(prof.product, expected[i++], 1e-11);
        EXPECT_LE(prof.product, 2.0 * ref);
    }
}

// sup error * b stays bounded as k, l grow, for uneven probabilities too.
TEST(LocalCltProperty, ScaledErrorStaysBounded) {
    for (auto [nu, mu] : {std::pair{0.3, 0.6}, std::pair{0.1, 0.5}, std::pair{0.7, 0.7}}) {
        const double ref = clt_error_profile({20, 30, nu, mu}).product;
        for (long long scale : {2LL, 4LL, 8LL}) {
            EXPECT_LE(clt_error_profile({20 * scale, 30 * scale, nu, mu}).product, 2.0 * ref) << nu << " " << mu;
        }
    }
}
