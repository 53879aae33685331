#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "sar2d/error.hpp"

namespace sar2d {

/// Coefficients of X(k,l) = alpha X(k-1,l) + beta X(k,l-1) + gamma X(k-1,l-1) + eps(k,l).
struct Params {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    bool finite() const noexcept {
        return std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma);
    }
    double abs_sum() const noexcept { return std::abs(alpha) + std::abs(beta) + std::abs(gamma); }
    double product() const noexcept { return alpha * beta * gamma; }

    friend bool operator==(const Params&, const Params&) = default;
};

inline void require_finite(const Params& p) {
    if (!p.finite()) {
        throw invalid_parameter("parameters must be finite reals");
    }
}

enum class Kind {
    stable,
    face_a,
    edge_b,
    vertex_c,
    missing_face,
    missing_gamma_edge,
    trivial_gamma_edge,
    outside,
};

enum class Axis { alpha, beta, gamma };

/// Variance scaling exponent: Var X([ns],[nt]) grows like n^(2 rho).
enum class Rho { zero, quarter, half, one, unknown };

inline std::optional<double> rho_value(Rho r) noexcept {
    switch (r) {
        case Rho::zero: return 0.0;
        case Rho::quarter: return 0.25;
        case Rho::half: return 0.5;
        case Rho::one: return 1.0;
        case Rho::unknown: break;
    }
    return std::nullopt;
}

/// Normalizing factor n^(-2 rho) for a known exponent.
inline double rho_scale(Rho r, double n) {
    switch (r) {
        case Rho::zero: return 1.0;
        case Rho::quarter: return 1.0 / std::sqrt(n);
        case Rho::half: return 1.0 / n;
        case Rho::one: return 1.0 / (n * n);
        case Rho::unknown: break;
    }
    throw domain_error("scaling exponent is unknown for this regime");
}

constexpr std::string_view to_string(Kind k) noexcept {
    switch (k) {
        case Kind::stable: return "stable";
        case Kind::face_a: return "face_a";
        case Kind::edge_b: return "edge_b";
        case Kind::vertex_c: return "vertex_c";
        case Kind::missing_face: return "missing_face";
        case Kind::missing_gamma_edge: return "missing_gamma_edge";
        case Kind::trivial_gamma_edge: return "trivial_gamma_edge";
        case Kind::outside: return "outside";
    }
    return "outside";
}

constexpr std::string_view to_string(Axis a) noexcept {
    switch (a) {
        case Axis::alpha: return "alpha";
        case Axis::beta: return "beta";
        case Axis::gamma: return "gamma";
    }
    return "alpha";
}

constexpr std::string_view to_string(Rho r) noexcept {
    switch (r) {
        case Rho::zero: return "0";
        case Rho::quarter: return "1/4";
        case Rho::half: return "1/2";
        case Rho::one: return "1";
        case Rho::unknown: return "unknown";
    }
    return "unknown";
}

/// Regime of a parameter triple relative to the stability domain.
///
/// `face_index` (1..4) names the active linear equality on faces:
///   1: a-b-g = 1, 2: -a+b-g = 1, 3: -a-b+g = 1, 4: a+b+g = 1.
/// `missing_variant` is 1 for |a|-|b|+|g| = 1 and 2 for -|a|+|b|+|g| = 1.
struct DomainClass {
    Kind kind = Kind::outside;
    Rho rho = Rho::unknown;
    int face_index = 0;
    int missing_variant = 0;
    std::optional<Axis> edge_axis;
    // A face point with exactly one of alpha, beta equal to zero.
    bool degenerate = false;
};

/// Multiplies X(k,l) by (-1)^k and/or (-1)^l. Variances are unchanged.
struct SignMap {
    bool flip_k = false;
    bool flip_l = false;

    /// flip_k maps (a,b,g) -> (-a,b,-g); flip_l maps (a,b,g) -> (a,-b,-g).
    Params apply(const Params& p) const noexcept {
        auto clean = [](double x) { return x == 0.0 ? 0.0 : x; };
        Params q = p;
        if (flip_k) {
            q.alpha = -q.alpha;
            q.gamma = -q.gamma;
        }
        if (flip_l) {
            q.beta = -q.beta;
            q.gamma = -q.gamma;
        }
        return {clean(q.alpha), clean(q.beta), clean(q.gamma)};
    }

    /// Sign relating the transformed field to the original at (k,l).
    int sign_at(long long k, long long l) const noexcept {
        long long e = (flip_k ? k : 0) + (flip_l ? l : 0);
        return (e % 2 == 0) ? 1 : -1;
    }

    friend bool operator==(const SignMap&, const SignMap&) = default;
};

/// Canonical representative under the sign flips: all parameters nonnegative
/// when alpha*beta*gamma >= 0, otherwise alpha, beta > 0 and gamma < 0.
inline std::pair<Params, SignMap> canonicalize(const Params& p) {
    require_finite(p);
    SignMap map;
    if (p.alpha != 0.0) map.flip_k = p.alpha < 0.0;
    if (p.beta != 0.0) map.flip_l = p.beta < 0.0;

    // A zero alpha (or beta) leaves its flip free; use it to make gamma >= 0.
    auto gamma_after = [&](const SignMap& m) { return m.apply(p).gamma; };
    if (p.alpha == 0.0 && gamma_after(map) < 0.0) {
        map.flip_k = true;
    } else if (p.beta == 0.0 && gamma_after(map) < 0.0) {
        map.flip_l = true;
    }
    return {map.apply(p), map};
}

/// Classifies against the stability tetrahedron and its boundary strata.
/// Equalities are tested as |expr| <= tol; the stable interior requires a
/// margin of tol on every strict inequality.
inline DomainClass classify(const Params& p, double tol = 1e-12) {
    require_finite(p);
    if (!(tol >= 0.0) || !std::isfinite(tol)) {
        throw invalid_parameter("tolerance must be a finite nonnegative number");
    }

    const double a = std::abs(p.alpha);
    const double b = std::abs(p.beta);
    const double g = std::abs(p.gamma);
    const std::array<double, 4> lin = {
        p.alpha - p.beta - p.gamma,
        -p.alpha + p.beta - p.gamma,
        -p.alpha - p.beta + p.gamma,
        p.alpha + p.beta + p.gamma,
    };

    DomainClass out;

    bool interior = a < 1.0 - tol && b < 1.0 - tol && g < 1.0 - tol;
    for (double e : lin) interior = interior && e < 1.0 - tol;
    if (interior) {
        out.kind = Kind::stable;
        out.rho = Rho::zero;
        return out;
    }

    bool closure = a <= 1.0 + tol && b <= 1.0 + tol && g <= 1.0 + tol;
    for (double e : lin) closure = closure && e <= 1.0 + tol;
    if (!closure) {
        return out;  // outside
    }

    auto unit = [tol](double x) { return std::abs(x - 1.0) <= tol; };
    const int units = int(unit(a)) + int(unit(b)) + int(unit(g));

    if (units == 3) {
        // On the closure the only unit-modulus corners have a*b*g = -1.
        if (p.product() < 0.0) {
            out.kind = Kind::vertex_c;
            out.rho = Rho::one;
        }
        return out;
    }
    if (units == 2) {
        return out;  // not reachable on the closure within tolerance
    }
    if (units == 1) {
        // On the closure a unit modulus forces the other two moduli equal
        // with a*b*g <= 0.
        if (unit(a)) {
            out.kind = Kind::edge_b;
            out.rho = Rho::half;
            out.edge_axis = Axis::alpha;
        } else if (unit(b)) {
            out.kind = Kind::edge_b;
            out.rho = Rho::half;
            out.edge_axis = Axis::beta;
        } else if (a <= tol && b <= tol) {
            out.kind = Kind::trivial_gamma_edge;
            out.rho = Rho::half;
            out.edge_axis = Axis::gamma;
        } else {
            out.kind = Kind::missing_gamma_edge;
            out.edge_axis = Axis::gamma;
        }
        return out;
    }

    int active = 0;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(lin[static_cast<std::size_t>(i)] - 1.0) <= tol) {
            out.face_index = i + 1;
            ++active;
        }
    }
    if (active != 1) {
        out.face_index = 0;
        return out;
    }

    if (p.product() >= 0.0 || std::abs(a + b - g - 1.0) <= tol) {
        out.kind = Kind::face_a;
        out.rho = Rho::quarter;
        out.degenerate = (p.alpha == 0.0) != (p.beta == 0.0);
        return out;
    }
    out.kind = Kind::missing_face;
    out.missing_variant = std::abs(a - b + g - 1.0) <= tol ? 1 : 2;
    return out;
}

}  // namespace sar2d
