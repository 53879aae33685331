// Face regime: n^(-1/2) Var X(n,n) creeping up to the limit, plus a short
// Monte Carlo cross-check at a small grid.
#include <cstdio>
#include <iostream>

#include "sar2d/sar2d.hpp"

int main() {
    using namespace sar2d;
    const Params p{0.3, 0.3, 0.4};
    const auto cls = classify(p);
    std::printf("params (%.2f, %.2f, %.2f): %s, rho = %.2f\n", p.alpha, p.beta, p.gamma,
                std::string(to_string(cls.kind)).c_str(), rho_value(cls.rho).value_or(-1.0));

    const auto rep = convergence_study(p, 1.0, 1.0, {16, 64, 256, 1024});
    write_convergence_csv(std::cout, rep);

    const auto est = mc_variance(16, 16, p, {NoiseKind::gaussian, 7}, 4000);
    std::printf("Monte Carlo Var X(16,16) = %.4f +- %.4f, exact %.4f\n", est.variance, est.std_error,
                rep.rows.front().var_exact);
    return 0;
}
