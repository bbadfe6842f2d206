#pragma once

#include "fastarnoldi/genmat.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fastarnoldi {

struct ExperimentConfig {
    std::string case_name;      ///< preset name or Matrix Market path
    std::string cert_path;      ///< certificate for a matrix file
    int n = 0;                  ///< preset size, 0 for the preset default
    int iters = 150;
    std::uint64_t seed = 1;     ///< start vector seed
    std::optional<std::uint64_t> matrix_seed; ///< preset seed, seed + 1 when unset
    std::vector<std::string> methods{"arnoldi", "arnoldi-reorth", "fast", "bm"};
    std::optional<cplx> shift;  ///< first pole (or 0) when unset
    std::string out;
    bool log_vv = false;
    bool special_tau = false;   ///< use the cheaper tau formulas where the class allows
};

struct ExperimentRecord {
    std::string label;
    int n = 0;
    cplx shift{0.0, 0.0};
    std::vector<std::string> methods;
    std::vector<int> k;
    std::vector<std::vector<double>> paige; ///< paige[row][method]
    std::vector<double> resid_prog;
    std::vector<double> resid_exact;
    std::vector<Eigen::MatrixXd> vv;        ///< |V^* V - I| per method (log_vv)
};

const std::vector<std::string>& known_methods();

/// Applies "key = value" lines to cfg (keys: case, cert, n, iters, seed,
/// matrix_seed, method, shift, out, log_vv, special_tau).
void apply_config_file(std::istream& in, ExperimentConfig& cfg);
void load_config_file(const std::string& path, ExperimentConfig& cfg);

/// Builds the operator described by the configuration.
TestCase resolve_case(const ExperimentConfig& cfg);

ExperimentRecord run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, const ExperimentRecord& rec);
void write_csv(const std::string& path, const ExperimentRecord& rec);
void write_vv_csv(std::ostream& out, const Eigen::MatrixXd& M);

} // namespace fastarnoldi
