#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "sar2d/macoef.hpp"
#include "sar2d/simulate.hpp"

using namespace sar2d;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

::testing::AssertionResult within(const McEstimate& est, double target, double width) {
    const double dev = std::abs(est.variance - target);
    if (dev <= width * est.std_error) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "estimate " << est.variance << " target " << target << " se "
                                         << est.std_error;
}

}  // namespace

TEST(Philox, KnownAnswers) {
    constexpr auto zero = philox4x32::apply({0, 0, 0, 0}, {0, 0});
    static_assert(zero[0] == 0x6627e8d5U);
    EXPECT_EQ(zero, (philox4x32::counter_type{0x6627e8d5U, 0xe169c58dU, 0xbc57ac4cU, 0x9b00dbd8U}));
    const auto ones = philox4x32::apply({0xffffffffU, 0xffffffffU, 0xffffffffU, 0xffffffffU}, {0xffffffffU, 0xffffffffU});
    EXPECT_EQ(ones, (philox4x32::counter_type{0x408f276dU, 0x41c83b0eU, 0xa20bc7c6U, 0x6d5451fdU}));
    const auto pi = philox4x32::apply({0x243f6a88U, 0x85a308d3U, 0x13198a2eU, 0x03707344U}, {0xa4093822U, 0x299f31d0U});
    EXPECT_EQ(pi, (philox4x32::counter_type{0xd16cfe09U, 0x94fdccebU, 0x5001e420U, 0x24126ea1U}));
}

TEST(Philox, OpenUnitNeverHitsEndpoints) {
    EXPECT_GT(open_unit(0, 0), 0.0);
    EXPECT_LT(open_unit(0xffffffffU, 0xffffffffU), 1.0);
}

TEST(Innovation, MomentsPerKind) {
    for (NoiseKind kind : {NoiseKind::gaussian, NoiseKind::rademacher, NoiseKind::uniform_centered}) {
        const NoiseSpec noise{kind, 42};
        double s1 = 0.0, s2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double e = innovation(noise, std::uint64_t(i), 1, 1);
            s1 += e;
            s2 += e * e;
        }
        EXPECT_NEAR(s1 / n, 0.0, 0.015) << to_string(kind);
        EXPECT_NEAR(s2 / n, 1.0, 0.02) << to_string(kind);
    }
    const NoiseSpec rad{NoiseKind::rademacher, 1};
    for (std::uint32_t k = 1; k < 20; ++k) EXPECT_EQ(std::abs(innovation(rad, 0, k, 3)), 1.0);
}

TEST(GenerateField, WhiteNoiseAndPartialSums) {
    const NoiseSpec noise{NoiseKind::gaussian, 5};
    const auto white = generate_field(6, 7, {0.0, 0.0, 0.0}, noise, 3);
    for (long long k = 1; k <= 6; ++k) {
        for (long long l = 1; l <= 7; ++l) {
            EXPECT_EQ(white(k, l), innovation(noise, 3, std::uint32_t(k), std::uint32_t(l)));
        }
    }
    const auto sheet = generate_field(6, 7, {1.0, 1.0, -1.0}, noise, 3);
    for (long long k = 1; k <= 6; ++k) {
        for (long long l = 1; l <= 7; ++l) {
            double s = 0.0;
            for (long long i = 1; i <= k; ++i) {
                for (long long j = 1; j <= l; ++j) s += white(i, j);
            }
            EXPECT_NEAR(sheet(k, l), s, 1e-12);
        }
    }
    EXPECT_EQ(sheet(0, 4), 0.0);
    EXPECT_EQ(sheet(3, 0), 0.0);
}

TEST(GenerateField, DeterministicAndReplicateDependent) {
    const NoiseSpec noise{NoiseKind::uniform_centered, 77};
    const Params p{0.3, 0.2, 0.1};
    const auto a = generate_field(10, 10, p, noise, 9);
    const auto b = generate_field(10, 10, p, noise, 9);
    const auto c = generate_field(10, 10, p, noise, 10);
    bool differs = false;
    for (long long k = 1; k <= 10; ++k) {
        for (long long l = 1; l <= 10; ++l) {
            EXPECT_TRUE(bit_equal(a(k, l), b(k, l)));
            differs = differs || a(k, l) != c(k, l);
        }
    }
    EXPECT_TRUE(differs);
}

TEST(GenerateField, Errors) {
    EXPECT_THROW(generate_field(0, 3, {0.1, 0.1, 0.1}, {}, 0), domain_error);
    ::setenv("SAR2D_MEM_BUDGET_BYTES", "100", 1);
    EXPECT_THROW(generate_field(50, 50, {0.1, 0.1, 0.1}, {}, 0), resource_error);
    ::unsetenv("SAR2D_MEM_BUDGET_BYTES");
}

// X(k,l) = sum_{i<=k, j<=l} G(k-i, l-j) eps(i,j), from the stored noise.
TEST(SimulateProperty, MovingAverageRepresentation) {
    const Params samples[] = {{0.3, 0.2, 0.1}, {0.3, 0.3, 0.4}, {1.0, 0.5, -0.5}, {-0.4, 0.6, -0.2}};
    const NoiseSpec noise{NoiseKind::gaussian, 2024};
    for (const auto& p : samples) {
        const long long K = 20, L = 20;
        const auto field = generate_field(K, L, p, noise, 1);
        const auto white = generate_field(K, L, {0.0, 0.0, 0.0}, noise, 1);
        const auto g = g_table(K - 1, L - 1, p);
        for (long long k = 1; k <= K; k += 3) {
            for (long long l = 1; l <= L; l += 2) {
                double s = 0.0;
                for (long long i = 1; i <= k; ++i) {
                    for (long long j = 1; j <= l; ++j) s += g(std::size_t(k - i), std::size_t(l - j)) * white(i, j);
                }
                EXPECT_NEAR(field(k, l), s, 1e-10);
            }
        }
    }
}

TEST(McVariance, WorkerCountDoesNotChangeTheResult) {
    const Params p{0.2, 0.1, 0.3};
    const NoiseSpec noise{NoiseKind::gaussian, 11};
    const auto one = mc_variance(8, 9, p, noise, 3000, 1);
    const auto four = mc_variance(8, 9, p, noise, 3000, 4);
    const auto seven = mc_variance(8, 9, p, noise, 3000, 7);
    EXPECT_TRUE(bit_equal(one.variance, four.variance));
    EXPECT_TRUE(bit_equal(one.variance, seven.variance));
    EXPECT_TRUE(bit_equal(one.std_error, seven.std_error));
    EXPECT_TRUE(bit_equal(one.mean, four.mean));
}

TEST(McVariance, Examples) {
    const NoiseSpec noise{NoiseKind::gaussian, 1};
    const auto white = mc_variance(5, 5, {0.0, 0.0, 0.0}, noise, 10000);
    EXPECT_TRUE(within(white, 1.0, 4.0));
    EXPECT_NEAR(white.std_error, white.variance * std::sqrt(2.0 / 9999.0), 1e-15);

    const auto sheet = mc_variance(3, 4, {1.0, 1.0, -1.0}, noise, 10000);
    EXPECT_TRUE(within(sheet, 12.0, 4.0));

    const Params p{0.2, 0.1, 0.3};
    const double exact = var_point(20, 20, p);
    const auto gauss = mc_variance(20, 20, p, noise, 10000);
    const auto rad = mc_variance(20, 20, p, {NoiseKind::rademacher, 1}, 10000);
    EXPECT_TRUE(within(gauss, exact, 4.0));
    EXPECT_TRUE(within(rad, exact, 4.0));
    // both laws share the second moments
    EXPECT_LE(std::abs(gauss.variance - rad.variance), 5.0 * std::hypot(gauss.std_error, rad.std_error));
    EXPECT_THROW(mc_variance(2, 2, p, noise, 1), domain_error);
}

TEST(McCovariance, Examples) {
    const NoiseSpec noise{NoiseKind::gaussian, 3};
    EXPECT_TRUE(within(mc_covariance({2, 3, 4, 1}, {1.0, -1.0, 1.0}, noise, 10000), 2.0, 4.0));
    const Params p{0.2, 0.1, 0.2};
    EXPECT_TRUE(within(mc_covariance({3, 3, 5, 5}, p, noise, 10000), cov_exact({3, 3, 5, 5}, p), 4.0));
    const auto cov = mc_covariance({6, 4, 6, 4}, p, noise, 2000);
    const auto var = mc_variance(6, 4, p, noise, 2000);
    EXPECT_TRUE(bit_equal(cov.variance, var.variance));
    EXPECT_TRUE(bit_equal(cov.std_error, var.std_error));
}

TEST(McCovariance, JackknifeForNonGaussianNoise) {
    const NoiseSpec noise{NoiseKind::uniform_centered, 8};
    const Params p{0.3, 0.2, 0.1};
    const auto est = mc_covariance({4, 4, 5, 3}, p, noise, 10000);
    EXPECT_GT(est.std_error, 0.0);
    EXPECT_TRUE(within(est, cov_exact({4, 4, 5, 3}, p), 4.0));
}
