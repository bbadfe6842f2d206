#include "fastarnoldi/certificate.hpp"
#include "fastarnoldi/error.hpp"
#include "fastarnoldi/experiment.hpp"
#include "fastarnoldi/matrix_market.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace fastarnoldi;

namespace {

cplx parse_shift_flag(const std::string& s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        return parse_complex(s);
    return {parse_complex(s.substr(0, comma)).real(), parse_complex(s.substr(comma + 1)).real()};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fast Arnoldi for BML matrices: orthogonality and residual experiments"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the selected methods on a test case and write CSV");
    std::string config_path, case_name, cert, methods, shift, out;
    int n = 0, iters = 0;
    std::uint64_t seed = 0, matrix_seed = 0;
    bool log_vv = false, special_tau = false;
    run->add_option("--config", config_path, "flat key = value configuration file");
    run->add_option("--case", case_name, "preset name or Matrix Market file");
    run->add_option("--cert", cert, "certificate file for a Matrix Market case");
    run->add_option("--n", n, "preset dimension");
    run->add_option("--iters", iters, "number of iterations");
    run->add_option("--seed", seed, "start vector seed");
    run->add_option("--matrix-seed", matrix_seed, "preset seed (default seed + 1)");
    run->add_option("--method", methods, "comma list of arnoldi, arnoldi-reorth, fast, bm, isometric");
    run->add_option("--shift", shift, "residual shift as re or re,im");
    run->add_option("--out", out, "CSV output path (stdout when omitted)");
    run->add_flag("--log-vv", log_vv, "also dump |V^*V - I| per method next to the CSV");
    run->add_flag("--special-tau", special_tau, "use the class-specific tau formulas");

    // validate
    auto* val = app.add_subcommand("validate", "check a certificate against a matrix");
    std::string matrix_path, cert_path;
    double tol = 1e-6;
    int probes = 5;
    val->add_option("--matrix", matrix_path, "Matrix Market file")->required();
    val->add_option("--cert", cert_path, "certificate file")->required();
    val->add_option("--tol", tol, "relative defect tolerance");
    val->add_option("--probes", probes, "number of random probes");

    auto* list = app.add_subcommand("presets", "list the built-in test cases");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ExperimentConfig cfg;
            if (!config_path.empty())
                load_config_file(config_path, cfg);
            if (run->count("--case"))
                cfg.case_name = case_name;
            if (run->count("--cert"))
                cfg.cert_path = cert;
            if (run->count("--n"))
                cfg.n = n;
            if (run->count("--iters"))
                cfg.iters = iters;
            if (run->count("--seed"))
                cfg.seed = seed;
            if (run->count("--matrix-seed"))
                cfg.matrix_seed = matrix_seed;
            if (run->count("--method")) {
                std::istringstream in("method = " + methods);
                apply_config_file(in, cfg);
            }
            if (run->count("--shift"))
                cfg.shift = parse_shift_flag(shift);
            if (run->count("--out"))
                cfg.out = out;
            if (log_vv)
                cfg.log_vv = true;
            if (special_tau)
                cfg.special_tau = true;
            if (cfg.log_vv && cfg.out.empty())
                throw ConfigError("--log-vv needs --out");
            const auto rec = run_experiment(cfg);
            if (cfg.out.empty())
                write_csv(std::cout, rec);
            return 0;
        }
        if (*val) {
            const CMatrix A = read_matrix_market(matrix_path);
            const BmlOperator op = load_certificate(cert_path, A);
            const auto rep = validate_bml(op, probes, tol);
            std::cout << "n = " << op.n() << ", m = " << op.m() << ", m2 = " << op.m2() << ", m3 = " << op.m3()
                      << "\nmax relative defect = " << rep.max_defect << "\n"
                      << (rep.pass ? "PASS" : "FAIL") << "\n";
            return rep.pass ? 0 : 1;
        }
        if (*list) {
            for (const auto& name : preset_names())
                std::cout << name << " (n = " << preset_default_n(name) << ")\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
