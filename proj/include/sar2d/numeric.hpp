#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <string>

#include "sar2d/error.hpp"

namespace sar2d {

// Neumaier's variant of Kahan summation. Robust when the running sum is
// smaller in magnitude than the next term, which happens in alternating sums.
class compensated_sum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    compensated_sum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, built on error-free
/// transforms. About 32 significant digits.
struct double_double {
    double hi = 0.0;
    double lo = 0.0;

    constexpr double_double() = default;
    constexpr double_double(double x) : hi(x), lo(0.0) {}  // NOLINT(implicit)
    constexpr double_double(double h, double l) : hi(h), lo(l) {}

    double to_double() const noexcept { return hi + lo; }
};

namespace detail {

inline double_double two_sum(double a, double b) noexcept {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline double_double quick_two_sum(double a, double b) noexcept {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline double_double two_prod(double a, double b) noexcept {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace detail

inline double_double operator+(const double_double& a, const double_double& b) noexcept {
    double_double s = detail::two_sum(a.hi, b.hi);
    const double_double t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline double_double operator-(const double_double& a) noexcept { return {-a.hi, -a.lo}; }

inline double_double operator-(const double_double& a, const double_double& b) noexcept {
    return a + (-b);
}

inline double_double operator*(const double_double& a, const double_double& b) noexcept {
    double_double p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline double_double operator/(const double_double& a, const double_double& b) noexcept {
    const double q1 = a.hi / b.hi;
    double_double r = a - b * double_double(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * double_double(q2);
    const double q3 = r.hi / b.hi;
    return double_double(detail::quick_two_sum(q1, q2)) + double_double(q3);
}

inline double_double& operator+=(double_double& a, const double_double& b) noexcept {
    a = a + b;
    return a;
}

inline double_double& operator*=(double_double& a, const double_double& b) noexcept {
    a = a * b;
    return a;
}

inline double_double pow(double_double base, unsigned exponent) noexcept {
    double_double result(1.0);
    while (exponent != 0) {
        if (exponent & 1U) result *= base;
        base *= base;
        exponent >>= 1U;
    }
    return result;
}

/// Relative/absolute agreement used by the cross-method checks.
inline bool close(double a, double b, double rel = 1e-10, double abs_floor = 1e-13) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(rel * scale, abs_floor);
}

constexpr std::size_t default_memory_budget = std::size_t{2} << 30;

/// Memory budget in bytes; SAR2D_MEM_BUDGET_BYTES overrides the 2 GiB default.
inline std::size_t memory_budget_bytes() {
    if (const char* env = std::getenv("SAR2D_MEM_BUDGET_BYTES"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0') return static_cast<std::size_t>(v);
    }
    return default_memory_budget;
}

/// Throws resource_error when `count` doubles would exceed the budget.
inline void require_budget(std::size_t rows, std::size_t cols, const char* what) {
    const std::size_t budget = memory_budget_bytes() / sizeof(double);
    if (cols != 0 && rows > budget / cols) {
        throw resource_error(std::string(what) + ": " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " doubles exceeds memory budget of " +
                             std::to_string(memory_budget_bytes()) + " bytes");
    }
}

/// Integer power by repeated squaring.
inline double ipow(double base, long long exponent) noexcept {
    double result = 1.0;
    bool neg = exponent < 0;
    unsigned long long e = neg ? static_cast<unsigned long long>(-exponent)
                               : static_cast<unsigned long long>(exponent);
    while (e != 0) {
        if (e & 1ULL) result *= base;
        base *= base;
        e >>= 1ULL;
    }
    return neg ? 1.0 / result : result;
}

}  // namespace sar2d
