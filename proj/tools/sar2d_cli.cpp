// sar2d: command-line front end for the sar2d library.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sar2d/sar2d.hpp"

namespace {

using nlohmann::json;
using namespace sar2d;

constexpr int schema_version = 1;
constexpr int exit_domain = 2;
constexpr int exit_resource = 3;

json params_json(const Params& p) { return {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}}; }

json class_json(const DomainClass& c) {
    json out = {{"kind", to_string(c.kind)}, {"rho", nullptr}};
    if (const auto rho = rho_value(c.rho)) out["rho"] = *rho;
    if (c.face_index != 0) out["face_index"] = c.face_index;
    if (c.missing_variant != 0) out["missing_variant"] = c.missing_variant;
    if (c.edge_axis) out["edge_axis"] = to_string(*c.edge_axis);
    if (c.kind == Kind::face_a) out["degenerate"] = c.degenerate;
    return out;
}

json envelope(const std::string& command, const Params& p) {
    json out = {{"schema_version", schema_version}, {"command", command}};
    out.update(params_json(p));
    return out;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

int fail(const char* kind, const std::string& message, int code) {
    const json err = {{"schema_version", schema_version}, {"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump() << '\n';
    return code;
}

struct Common {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double tol = 1e-12;

    Params params() const { return {alpha, beta, gamma}; }
};

void add_params(CLI::App* cmd, Common& c) {
    cmd->add_option("--alpha", c.alpha, "coefficient of X(k-1,l)")->required();
    cmd->add_option("--beta", c.beta, "coefficient of X(k,l-1)")->required();
    cmd->add_option("--gamma", c.gamma, "coefficient of X(k-1,l-1)")->required();
    cmd->add_option("--tol", c.tol, "classification tolerance")->capture_default_str();
}

std::vector<long long> parse_list(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_integer(item));
    return out;
}

NoiseKind parse_noise(const std::string& name) {
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "rademacher") return NoiseKind::rademacher;
    if (name == "uniform_centered" || name == "uniform") return NoiseKind::uniform_centered;
    throw invalid_parameter("unknown noise kind '" + name + "'");
}

double g_by_method(const std::string& method, long long m, long long n, const Params& p, double tol) {
    if (method == "direct") return g_direct(m, n, p);
    if (method == "recurrence") {
        if (m < 0 || n < 0) throw domain_error("coefficient indices must be nonnegative");
        double value = 0.0;
        for_each_g_row(m, n, p, [&](long long row, std::span<const double> r) {
            if (row == m) value = r[static_cast<std::size_t>(n)];
        });
        return value;
    }
    if (method == "binomial") return g_binomial(m, n, p);
    if (method == "hypergeometric") return g_hypergeom(m, n, p);
    if (method == "face") return g_face(m, n, p, tol);
    if (method == "missing_face") return g_missing_face(m, n, p, tol);
    if (method == "gamma_edge") {
        if (std::abs(p.alpha - p.beta) > tol || std::abs(p.gamma + 1.0) > tol) {
            throw domain_error("gamma_edge method needs alpha = beta and gamma = -1");
        }
        return g_gamma_edge(m, n, p.alpha);
    }
    throw invalid_parameter("unknown method '" + method + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unilateral 2-D autoregressive fields: regimes, coefficients, covariances, limits"};
    app.require_subcommand(1);
    Common c;

    auto* classify_cmd = app.add_subcommand("classify", "classify parameters and canonicalize signs");
    add_params(classify_cmd, c);

    long long m = 0, n = 0;
    std::string method = "recurrence";
    auto* gcoef_cmd = app.add_subcommand("gcoef", "moving-average coefficient G(m,n)");
    add_params(gcoef_cmd, c);
    gcoef_cmd->add_option("--m", m)->required();
    gcoef_cmd->add_option("--n", n)->required();
    gcoef_cmd->add_option("--method", method, "direct|recurrence|binomial|hypergeometric|face|missing_face|gamma_edge")
        ->capture_default_str();

    long long k1 = 1, l1 = 1, k2 = 1, l2 = 1;
    auto* cov_cmd = app.add_subcommand("cov", "exact covariance Cov(X(k1,l1), X(k2,l2))");
    add_params(cov_cmd, c);
    cov_cmd->add_option("--k1", k1)->required();
    cov_cmd->add_option("--l1", l1)->required();
    cov_cmd->add_option("--k2", k2)->required();
    cov_cmd->add_option("--l2", l2)->required();

    long long k = 1, l = 1;
    bool table = false;
    auto* var_cmd = app.add_subcommand("var", "exact variance Var X(k,l)");
    add_params(var_cmd, c);
    var_cmd->add_option("--k", k)->required();
    var_cmd->add_option("--l", l)->required();
    var_cmd->add_flag("--table", table, "emit the whole table as CSV (k,l,var)");

    double s = 1.0, t = 1.0;
    auto* limit_cmd = app.add_subcommand("limit", "limiting variance of the scaled field");
    add_params(limit_cmd, c);
    limit_cmd->add_option("--s", s)->capture_default_str();
    limit_cmd->add_option("--t", t)->capture_default_str();

    std::string n_list;
    std::string out_path;
    auto* converge_cmd = app.add_subcommand("converge", "exact scaled variances against the limit (CSV)");
    add_params(converge_cmd, c);
    converge_cmd->add_option("--s", s)->capture_default_str();
    converge_cmd->add_option("--t", t)->capture_default_str();
    converge_cmd->add_option("--n-list", n_list, "comma-separated ascending n")->required();
    converge_cmd->add_option("--out", out_path, "CSV path (default stdout)");

    std::size_t samples = 1000;
    long long index_max = 30;
    std::uint64_t seed = 0;
    auto* bounds_cmd = app.add_subcommand("check-bounds", "check covariance bounds on sampled quadruples");
    add_params(bounds_cmd, c);
    bounds_cmd->add_option("--samples", samples)->capture_default_str();
    bounds_cmd->add_option("--index-max", index_max)->capture_default_str();
    bounds_cmd->add_option("--seed", seed)->capture_default_str();

    std::size_t reps = 10000;
    std::string noise_name = "gaussian";
    unsigned workers = 0;
    std::optional<long long> sim_k2, sim_l2;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo variance (or covariance with --k2/--l2)");
    add_params(sim_cmd, c);
    sim_cmd->add_option("--k", k)->required();
    sim_cmd->add_option("--l", l)->required();
    sim_cmd->add_option("--k2", sim_k2);
    sim_cmd->add_option("--l2", sim_l2);
    sim_cmd->add_option("--reps", reps)->capture_default_str();
    sim_cmd->add_option("--seed", seed)->capture_default_str();
    sim_cmd->add_option("--noise", noise_name, "gaussian|rademacher|uniform_centered")->capture_default_str();
    sim_cmd->add_option("--workers", workers, "0 = hardware concurrency")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage_error", e.what(), exit_domain);
    }

    try {
        const Params p = c.params();
        require_finite(p);

        if (classify_cmd->parsed()) {
            const auto cls = classify(p, c.tol);
            const auto [canon, map] = canonicalize(p);
            json out = envelope("classify", p);
            out.update(class_json(cls));
            out["canonical"] = params_json(canon);
            out["sign_map"] = {{"flip_k", map.flip_k}, {"flip_l", map.flip_l}};
            emit(out);
        } else if (gcoef_cmd->parsed()) {
            json out = envelope("gcoef", p);
            out.update({{"m", m}, {"n", n}, {"method", method}, {"value", g_by_method(method, m, n, p, c.tol)}});
            emit(out);
        } else if (cov_cmd->parsed()) {
            json out = envelope("cov", p);
            out.update({{"k1", k1}, {"l1", l1}, {"k2", k2}, {"l2", l2}, {"value", cov_exact({k1, l1, k2, l2}, p)}});
            emit(out);
        } else if (var_cmd->parsed()) {
            if (table) {
                const auto vt = var_table(k, l, p);
                std::cout << "k,l,var\n";
                for (long long i = 1; i <= k; ++i) {
                    for (long long j = 1; j <= l; ++j) std::cout << i << ',' << j << ',' << format_real(vt(i, j)) << '\n';
                }
            } else {
                json out = envelope("var", p);
                out.update({{"k", k}, {"l", l}, {"value", var_point(k, l, p)}});
                emit(out);
            }
        } else if (limit_cmd->parsed()) {
            const auto lim = variance_limit(p, s, t, c.tol);
            json out = envelope("limit", p);
            out.update({{"s", s}, {"t", t}, {"canonical", params_json(lim.canonical)}});
            out.update(class_json(lim.cls));
            out["value"] = lim.value ? json(*lim.value) : json(nullptr);
            out["known"] = lim.value.has_value();
            emit(out);
        } else if (converge_cmd->parsed()) {
            const auto rep = convergence_study(p, s, t, parse_list(n_list), c.tol);
            if (out_path.empty()) {
                write_convergence_csv(std::cout, rep);
            } else {
                std::ofstream os(out_path, std::ios::binary);
                if (!os) throw invalid_parameter("cannot open '" + out_path + "' for writing");
                write_convergence_csv(os, rep);
            }
        } else if (bounds_cmd->parsed()) {
            const auto rep = check_bounds(p, samples, index_max, seed, c.tol);
            json out = envelope("check-bounds", p);
            out.update(class_json(rep.cls));
            out.update({{"samples", rep.samples},
                        {"index_max", rep.index_max},
                        {"seed", rep.seed},
                        {"violations", rep.violations},
                        {"max_statistic", rep.max_statistic},
                        {"passed", rep.passed},
                        {"note", rep.note}});
            if (!rep.face_ratio_by_size.empty()) out["face_ratio_by_size"] = rep.face_ratio_by_size;
            emit(out);
        } else if (sim_cmd->parsed()) {
            const NoiseSpec noise{parse_noise(noise_name), seed};
            const CovQuery q{k, l, sim_k2.value_or(k), sim_l2.value_or(l)};
            const bool covariance = sim_k2.has_value() || sim_l2.has_value();
            const auto est = covariance ? mc_covariance(q, p, noise, reps, workers)
                                        : mc_variance(k, l, p, noise, reps, workers);
            json out = envelope("simulate", p);
            out.update({{"k1", q.k1},
                        {"l1", q.l1},
                        {"k2", q.k2},
                        {"l2", q.l2},
                        {"reps", est.reps},
                        {"seed", seed},
                        {"noise", to_string(noise.kind)},
                        {"mean", est.mean},
                        {covariance ? "covariance" : "variance", est.variance},
                        {"std_error", est.std_error}});
            emit(out);
        }
    } catch (const resource_error& e) {
        return fail(e.kind(), e.what(), exit_resource);
    } catch (const std::bad_alloc&) {
        return fail("resource_error", "allocation failed", exit_resource);
    } catch (const sar2d::error& e) {
        return fail(e.kind(), e.what(), exit_domain);
    } catch (const std::exception& e) {
        return fail("error", e.what(), exit_domain);
    }
    return 0;
}
