// cocycle-lab: batch front-end for the cocycle numerics library.
//
// Subcommands: cf, analytic eps0, lyapunov, holder, ldt, birkhoff, ap.
// Scans emit CSV; structured reports emit JSON. With --out, a JSON manifest
// (<out>.manifest.json) records the config hash, code version, wall time,
// grid sizes and dropped-orbit counts. Exit codes: 0 success, 2 validation
// error, 3 numerical degeneracy.

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include "cocyclelab/arithmetic.hpp"
#include "cocyclelab/avalanche.hpp"
#include "cocyclelab/deviation.hpp"
#include "cocyclelab/lyapunov.hpp"
#include "cocyclelab/model_config.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace cocyclelab;

constexpr const char* kVersion = "cocycle-lab 0.1.0";

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegeneracyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

// FNV-1a over the canonical flag string; stable across runs and platforms
std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct RunOutput {
    std::string data;            // CSV or JSON payload
    long long dropped = 0;       // dropped/excluded orbit count
    std::vector<int> grids;      // grid sizes used
};

struct GlobalOpts {
    int workers = 1;
    std::uint64_t seed = 0;
    std::string out_path;
};

JacobiModel load_model(const std::string& path) {
    try {
        return load_model_file(path).build();
    } catch (const ConfigError& e) {
        throw ValidationFailure(e.what());
    }
}

std::vector<double> split_doubles(const std::string& s, std::size_t expect, const char* what) {
    std::vector<double> vals;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ValidationFailure(std::string("bad number in ") + what + ": " + tok);
        }
    }
    if (expect != 0 && vals.size() != expect)
        throw ValidationFailure(std::string(what) + ": expected " + std::to_string(expect) +
                                " comma-separated values");
    return vals;
}

// "q12" means the 12th convergent denominator of the supplied omega
long long resolve_n(const std::string& spec, const CFExpansion& cf) {
    if (!spec.empty() && spec[0] == 'q') {
        std::size_t s = 0;
        try {
            s = std::stoul(spec.substr(1));
        } catch (const std::exception&) {
            throw ValidationFailure("bad Fibonacci-style n spec: " + spec);
        }
        if (s == 0 || s > cf.convergents.size())
            throw ValidationFailure("n spec " + spec + " exceeds the expanded depth " +
                                    std::to_string(cf.convergents.size()));
        return cf.convergents[s - 1].q.convert_to<long long>();
    }
    try {
        return std::stoll(spec);
    } catch (const std::exception&) {
        throw ValidationFailure("bad n spec: " + spec);
    }
}

RunOutput run_cf(const std::string& omega_spec, int depth) {
    CFExpansion cf;
    try {
        cf = resolve_omega(omega_spec, depth);
    } catch (const std::exception& e) {
        throw ValidationFailure(e.what());
    }
    std::ostringstream out;
    out << "s,quotient,p,q,gap_exponent\n";
    for (std::size_t s = 0; s < cf.convergents.size(); ++s) {
        out << (s + 1) << "," << cf.quotients[s] << "," << cf.convergents[s].p << ","
            << cf.convergents[s].q << ",";
        if (s < cf.gap_exponents.size()) out << format_double(cf.gap_exponents[s]);
        out << "\n";
    }
    return {out.str(), 0, {}};
}

RunOutput run_eps0(const std::string& model_path, double delta, const std::string& grid_spec) {
    const JacobiModel model = load_model(model_path);
    const auto g = split_doubles(grid_spec, 3, "--grid");
    Epsilon0Params params;
    params.e1_min = -model.energy_radius;
    params.e1_max = model.energy_radius;
    params.e1_count = static_cast<int>(g[2]);
    params.x_grid = static_cast<int>(g[0]);
    params.y_grid = static_cast<int>(g[1]);
    if (params.e1_count < 1 || params.x_grid < 1 || params.y_grid < 1)
        throw ValidationFailure("--grid entries must be positive");
    if (!(delta > 0.0)) throw ValidationFailure("--delta must be positive");

    const double eps0 = epsilon0_estimate(model.v, delta, params);
    json j;
    j["epsilon0"] = eps0;
    j["delta"] = delta;
    j["e1_range"] = {params.e1_min, params.e1_max};
    j["grid"] = {params.x_grid, params.y_grid, params.e1_count};
    if (eps0 <= 0.0) throw DegeneracyFailure("epsilon0 estimate is zero; potential degenerate");
    return {j.dump(2) + "\n", 0, {params.x_grid, params.y_grid, params.e1_count}};
}

RunOutput run_lyapunov(const GlobalOpts& g, const std::string& model_path, double E, long long n,
                       int grid, const std::string& scan_spec) {
    const JacobiModel model = load_model(model_path);
    std::vector<double> energies;
    if (scan_spec.empty()) {
        energies.push_back(E);
    } else {
        const auto s = split_doubles(scan_spec, 3, "--scan");
        const int count = static_cast<int>(s[2]);
        if (count < 2 || !(s[1] > s[0])) throw ValidationFailure("--scan needs Emin < Emax, K >= 2");
        for (int i = 0; i < count; ++i)
            energies.push_back(s[0] + (s[1] - s[0]) * i / (count - 1));
    }

    std::ostringstream out;
    out << "E,n,grid,L_n,L_n_a,D_hat,dropped\n";
    long long dropped = 0;
    for (double e : energies) {
        LyapunovEstimate est;
        try {
            est = finite_le(model, e, n, grid, g.workers);
        } catch (const std::invalid_argument& ex) {
            throw ValidationFailure(ex.what());
        } catch (const std::runtime_error& ex) {
            throw DegeneracyFailure(ex.what());
        }
        dropped += est.dropped_orbits;
        out << format_double(est.E) << "," << est.n << "," << est.grid_size << ","
            << format_double(est.L_n) << "," << format_double(est.L_n_a) << ","
            << format_double(est.D_hat) << "," << est.dropped_orbits << "\n";
    }
    return {out.str(), dropped, {grid}};
}

RunOutput run_holder(const GlobalOpts& g, const std::string& model_path, double center,
                     double radius, int pairs, long long n, int grid, double c_bar) {
    const JacobiModel model = load_model(model_path);
    HolderReport report;
    try {
        report = holder_fit(model, center, radius, pairs, n, grid, g.seed, c_bar, g.workers);
    } catch (const std::invalid_argument& ex) {
        throw ValidationFailure(ex.what());
    } catch (const InsufficientDataError& ex) {
        throw DegeneracyFailure(ex.what());
    }
    json j;
    j["seed"] = report.seed;
    j["n"] = n;
    j["grid"] = grid;
    j["fitted_tau"] = report.fitted_tau;
    j["residual_se"] = report.residual_se;
    j["tau_formula"] = report.tau_formula;
    j["c_bar"] = c_bar;
    j["used_pairs"] = report.used_pairs;
    j["pairs"] = json::array();
    for (const auto& p : report.pairs)
        j["pairs"].push_back({{"E1", p.E1}, {"E2", p.E2}, {"dL", p.dL}});
    return {j.dump(2) + "\n", 0, {grid}};
}

RunOutput run_ldt(const GlobalOpts& g, const std::string& model_path, double E,
                  const std::string& n_spec, double delta, int grid, double c_abs,
                  double mu_guess) {
    const JacobiModel model = load_model(model_path);
    std::vector<long long> n_list;
    for (double v : split_doubles(n_spec, 0, "--n")) n_list.push_back(static_cast<long long>(v));
    DeviationReport report;
    try {
        report = ldt_experiment(model, E, n_list, delta, grid, c_abs, mu_guess, g.workers);
    } catch (const std::invalid_argument& ex) {
        throw ValidationFailure(ex.what());
    } catch (const std::runtime_error& ex) {
        throw DegeneracyFailure(ex.what());
    }
    json j;
    j["E"] = E;
    j["delta"] = report.delta;
    j["grid"] = report.grid_size;
    j["n_values"] = report.n_values;
    j["measures"] = report.measures;
    j["rate_defined"] = report.rate_defined;
    j["fitted_rate"] = report.fitted_rate;
    j["bound_rate"] = report.bound_rate;
    j["constants"] = {{"c_abs", c_abs}, {"mu_guess", mu_guess}};
    j["dropped"] = report.dropped_total;
    return {j.dump(2) + "\n", report.dropped_total, {grid}};
}

RunOutput run_birkhoff(const GlobalOpts& g, const std::string& zeta_spec,
                       const std::string& omega_spec, const std::string& n_spec, int grid) {
    const auto z = split_doubles(zeta_spec, 2, "--zeta");
    CFExpansion cf;
    try {
        cf = resolve_omega(omega_spec, 40);
    } catch (const std::exception& e) {
        throw ValidationFailure(e.what());
    }
    const long long n = resolve_n(n_spec, cf);
    if (n < 1 || grid < 1) throw ValidationFailure("--n and --grid must be positive");

    BirkhoffSumSample sample;
    try {
        sample = birkhoff_sample(Complex(z[0], z[1]), n, cf.omega, grid, g.workers);
    } catch (const std::runtime_error& ex) {
        throw DegeneracyFailure(ex.what());
    }
    std::ostringstream out;
    out << "x,F_n\n";
    for (std::size_t i = 0; i < sample.values.size(); ++i)
        out << format_double(sample.x_values[i]) << "," << format_double(sample.values[i])
            << "\n";
    return {out.str(), sample.dropped, {grid}};
}

RunOutput run_ap(const GlobalOpts& g, const std::string& model_path, double E, double x,
                 long long block_len, int blocks, double C_test) {
    const JacobiModel model = load_model(model_path);
    APReport report;
    try {
        report = ap_check(PreciseBlockSet(model, x, E, block_len, blocks), C_test);
    } catch (const std::invalid_argument& ex) {
        throw ValidationFailure(ex.what());
    } catch (const SingularStepError& ex) {
        throw DegeneracyFailure(ex.what());
    }
    (void)g;
    json j;
    j["E"] = E;
    j["x"] = x;
    j["block_len"] = block_len;
    j["n_blocks"] = report.n_blocks;
    j["log_gamma"] = report.log_gamma;
    j["gamma_bound"] = report.gamma_bound;
    j["det_ok"] = report.det_ok;
    j["gap_ok"] = report.gap_ok;
    j["size_ok"] = report.size_ok;
    j["hypotheses_ok"] = report.hypotheses_ok();
    j["log_lhs_residual"] = report.log_lhs_residual;
    j["lhs_residual"] = report.lhs_residual;
    j["log_bound"] = report.log_bound;
    j["bound_value"] = report.bound_value;
    j["C_test"] = report.C_test;
    j["conclusion_ok"] = report.conclusion_ok();
    return {j.dump(2) + "\n", 0, {}};
}

void emit(const GlobalOpts& g, const RunOutput& out, const std::string& canonical,
          double wall_seconds) {
    if (g.out_path.empty()) {
        std::cout << out.data;
        return;
    }
    {
        std::ofstream f(g.out_path, std::ios::binary);
        if (!f) throw ValidationFailure("cannot write output file: " + g.out_path);
        f << out.data;
    }
    json manifest;
    manifest["config_hash"] = config_hash(canonical);
    manifest["version"] = kVersion;
    manifest["wall_time_s"] = wall_seconds;
    manifest["dropped"] = out.dropped;
    manifest["grid_sizes"] = out.grids;
    std::ofstream mf(g.out_path + ".manifest.json", std::ios::binary);
    if (!mf) throw ValidationFailure("cannot write manifest next to: " + g.out_path);
    mf << manifest.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for quasi-periodic Jacobi cocycles"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand

    GlobalOpts g;
    app.add_option("--workers", g.workers, "worker thread count (never affects results)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed for randomized sampling");
    app.add_option("--out", g.out_path, "output file; a .manifest.json is written alongside");

    // cf
    std::string cf_omega = "golden";
    int cf_depth = 20;
    auto* cf_cmd = app.add_subcommand(
        "cf", "continued-fraction expansion: CSV of quotients, convergents, gap exponents");
    cf_cmd->add_option("--omega", cf_omega, "golden | sqrt2m1 | p/q | decimal");
    cf_cmd->add_option("--depth", cf_depth, "expansion depth")->check(CLI::PositiveNumber);

    // analytic eps0
    std::string eps_model;
    double eps_delta = 0.25;
    std::string eps_grid = "64,8,21";
    auto* analytic_cmd = app.add_subcommand("analytic", "analytic-function diagnostics");
    auto* eps_cmd = analytic_cmd->add_subcommand(
        "eps0", "grid estimate of the potential's separation constant epsilon0");
    eps_cmd->add_option("--model", eps_model, "model file")->required();
    eps_cmd->add_option("--delta", eps_delta, "strip height");
    eps_cmd->add_option("--grid", eps_grid, "Nx,Ny,NE");

    // lyapunov
    std::string ly_model, ly_scan;
    double ly_E = 0.0;
    long long ly_n = 1000;
    int ly_grid = 4096;
    auto* ly_cmd = app.add_subcommand(
        "lyapunov", "finite-scale Lyapunov exponents; CSV E,n,grid,L_n,L_n_a,D_hat,dropped");
    ly_cmd->add_option("--model", ly_model, "model file")->required();
    ly_cmd->add_option("--E", ly_E, "energy");
    ly_cmd->add_option("--n", ly_n, "orbit length")->check(CLI::PositiveNumber);
    ly_cmd->add_option("--grid", ly_grid, "x-grid size")->check(CLI::PositiveNumber);
    ly_cmd->add_option("--scan", ly_scan, "Emin,Emax,K energy scan");

    // holder
    std::string ho_model;
    double ho_center = 0.0, ho_radius = 0.05, ho_cbar = 1.0;
    int ho_pairs = 16, ho_grid = 1024;
    long long ho_n = 200;
    auto* ho_cmd =
        app.add_subcommand("holder", "Holder-exponent regression in E; JSON report");
    ho_cmd->add_option("--model", ho_model, "model file")->required();
    ho_cmd->add_option("--center", ho_center, "energy window center");
    ho_cmd->add_option("--radius", ho_radius, "energy window radius");
    ho_cmd->add_option("--pairs", ho_pairs, "number of sampled energy pairs")
        ->check(CLI::PositiveNumber);
    ho_cmd->add_option("--n", ho_n, "orbit length of the extrapolated proxy")
        ->check(CLI::PositiveNumber);
    ho_cmd->add_option("--grid", ho_grid, "x-grid size")->check(CLI::PositiveNumber);
    ho_cmd->add_option("--c-bar", ho_cbar, "assumed model constant for the formula exponent");

    // ldt
    std::string ld_model, ld_n = "100,200,400,800";
    double ld_E = 0.0, ld_delta = 0.1, ld_cabs = 1.0, ld_mu = 1.0;
    int ld_grid = 8192;
    auto* ld_cmd = app.add_subcommand(
        "ldt", "deviation-measure decay across orbit lengths; JSON report");
    ld_cmd->add_option("--model", ld_model, "model file")->required();
    ld_cmd->add_option("--E", ld_E, "energy");
    ld_cmd->add_option("--delta", ld_delta, "deviation band half-width");
    ld_cmd->add_option("--n", ld_n, "comma-separated increasing orbit lengths");
    ld_cmd->add_option("--grid", ld_grid, "x-grid size")->check(CLI::PositiveNumber);
    ld_cmd->add_option("--c-abs", ld_cabs, "assumed absolute constant c");
    ld_cmd->add_option("--mu-guess", ld_mu, "assumed measure constant mu(Omega_1)");

    // birkhoff
    std::string bi_zeta = "0,1", bi_omega = "golden", bi_n = "q12";
    int bi_grid = 4096;
    auto* bi_cmd = app.add_subcommand(
        "birkhoff", "Birkhoff sums of the log kernel on an x-grid; CSV x,F_n");
    bi_cmd->add_option("--zeta", bi_zeta, "re,im of the kernel singularity");
    bi_cmd->add_option("--omega", bi_omega, "golden | sqrt2m1 | p/q | decimal");
    bi_cmd->add_option("--n", bi_n, "orbit length; qS picks the S-th convergent denominator");
    bi_cmd->add_option("--grid", bi_grid, "x-grid size")->check(CLI::PositiveNumber);

    // ap
    std::string ap_model;
    double ap_E = 0.0, ap_x = 0.0, ap_C = 10.0;
    long long ap_len = 200;
    int ap_blocks_n = 20;
    auto* ap_cmd = app.add_subcommand(
        "ap", "block-product expansion check (hypotheses + residual); JSON report");
    ap_cmd->add_option("--model", ap_model, "model file")->required();
    ap_cmd->add_option("--E", ap_E, "energy");
    ap_cmd->add_option("--x", ap_x, "orbit base point");
    ap_cmd->add_option("--block-len", ap_len, "length of each block")->check(CLI::PositiveNumber);
    ap_cmd->add_option("--blocks", ap_blocks_n, "number of blocks")->check(CLI::PositiveNumber);
    ap_cmd->add_option("--C-test", ap_C, "budget constant in the residual bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ostringstream canon;
    for (int i = 1; i < argc; ++i) canon << argv[i] << '\n';

    const auto t0 = std::chrono::steady_clock::now();
    try {
        RunOutput out;
        if (cf_cmd->parsed())
            out = run_cf(cf_omega, cf_depth);
        else if (eps_cmd->parsed())
            out = run_eps0(eps_model, eps_delta, eps_grid);
        else if (analytic_cmd->parsed())
            throw ValidationFailure("analytic: missing subcommand (try 'analytic eps0')");
        else if (ly_cmd->parsed())
            out = run_lyapunov(g, ly_model, ly_E, ly_n, ly_grid, ly_scan);
        else if (ho_cmd->parsed())
            out = run_holder(g, ho_model, ho_center, ho_radius, ho_pairs, ho_n, ho_grid, ho_cbar);
        else if (ld_cmd->parsed())
            out = run_ldt(g, ld_model, ld_E, ld_n, ld_delta, ld_grid, ld_cabs, ld_mu);
        else if (bi_cmd->parsed())
            out = run_birkhoff(g, bi_zeta, bi_omega, bi_n, bi_grid);
        else if (ap_cmd->parsed())
            out = run_ap(g, ap_model, ap_E, ap_x, ap_len, ap_blocks_n, ap_C);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit(g, out, canon.str(), wall);
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegeneracyFailure& e) {
        std::cerr << "degenerate: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
