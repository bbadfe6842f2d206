#include "fastarnoldi/experiment.hpp"
#include "fastarnoldi/analysis.hpp"
#include "fastarnoldi/bmref.hpp"
#include "fastarnoldi/certificate.hpp"
#include "fastarnoldi/error.hpp"
#include "fastarnoldi/matrix_market.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fastarnoldi {

namespace {

struct MethodRun {
    CMatrix V;
    bool lost_tail = false; ///< stopped early without an invariant subspace
};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

cplx parse_shift(const std::string& s, int line)
{
    const auto parts = split_list(s);
    if (parts.size() == 1)
        return parse_complex(parts[0], line);
    if (parts.size() == 2)
        return {parse_complex(parts[0], line).real(), parse_complex(parts[1], line).real()};
    throw ParseError("shift must be 're' or 're,im'", line);
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

} // namespace

const std::vector<std::string>& known_methods()
{
    static const std::vector<std::string> m{"arnoldi", "arnoldi-reorth", "fast", "bm", "isometric"};
    return m;
}

void apply_config_file(std::istream& in, ExperimentConfig& cfg)
{
    for (const auto& kv : parse_key_values(in)) {
        try {
            if (kv.key == "case")
                cfg.case_name = kv.value;
            else if (kv.key == "cert")
                cfg.cert_path = kv.value;
            else if (kv.key == "n")
                cfg.n = std::stoi(kv.value);
            else if (kv.key == "iters")
                cfg.iters = std::stoi(kv.value);
            else if (kv.key == "seed")
                cfg.seed = std::stoull(kv.value);
            else if (kv.key == "matrix_seed")
                cfg.matrix_seed = std::stoull(kv.value);
            else if (kv.key == "method")
                cfg.methods = split_list(kv.value);
            else if (kv.key == "shift")
                cfg.shift = parse_shift(kv.value, kv.line);
            else if (kv.key == "out")
                cfg.out = kv.value;
            else if (kv.key == "log_vv")
                cfg.log_vv = kv.value == "true" || kv.value == "1";
            else if (kv.key == "special_tau")
                cfg.special_tau = kv.value == "true" || kv.value == "1";
            else
                throw ParseError("unknown key '" + kv.key + "'", kv.line);
        } catch (const std::logic_error&) {
            throw ParseError("bad value for '" + kv.key + "'", kv.line);
        }
    }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg)
{
    std::ifstream in(path);
    if (!in)
        throw FileNotFound(path);
    apply_config_file(in, cfg);
}

TestCase resolve_case(const ExperimentConfig& cfg)
{
    if (cfg.case_name.empty())
        throw ConfigError("no case given");
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), cfg.case_name) != names.end())
        return make_preset(cfg.case_name, cfg.n, cfg.matrix_seed.value_or(cfg.seed + 1));

    if (!std::filesystem::exists(cfg.case_name))
        throw FileNotFound("'" + cfg.case_name + "' is neither a preset nor a file");
    if (cfg.cert_path.empty())
        throw ConfigError("a matrix file needs a certificate (--cert)");
    TestCase tc;
    const CMatrix A = read_matrix_market(cfg.case_name);
    if (A.rows() != A.cols())
        throw ConfigError("matrix is not square");
    tc.op = load_certificate(cfg.cert_path, A);
    const auto rep = validate_bml(tc.op, 5, 1e-6);
    if (!rep.pass)
        throw CertificateInvalid("certificate defect " + format_double(rep.max_defect) + " exceeds 1e-6");
    tc.label = std::filesystem::path(cfg.case_name).filename().string();
    tc.spectrum = "from file";
    return tc;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg)
{
    if (cfg.methods.empty())
        throw ConfigError("no method selected");
    std::vector<std::string> methods;
    for (const auto& m : cfg.methods) {
        const auto& km = known_methods();
        if (std::find(km.begin(), km.end(), m) == km.end())
            throw ConfigError("unknown method '" + m + "'");
        if (std::find(methods.begin(), methods.end(), m) == methods.end())
            methods.push_back(m);
    }

    TestCase tc = resolve_case(cfg);
    if (cfg.special_tau)
        tc.op.use_special_tau = true;
    const BmlOperator& op = tc.op;
    const int n = op.n();
    const int iters = cfg.iters;
    if (iters < 1 || iters > n)
        throw ConfigError("iters must satisfy 1 <= iters <= n = " + std::to_string(n));

    Rng rng(cfg.seed);
    CVector b = randn_cvector(n, rng);
    b /= b.norm();
    const cplx shift = cfg.shift.value_or(op.poles.empty() ? cplx(0.0) : op.poles.front());

    ExperimentRecord rec;
    rec.label = tc.label;
    rec.n = n;
    rec.shift = shift;
    rec.methods = methods;

    // progressive residual from the fast method: a pole track or a monitor
    FastArnoldiOptions fo;
    fo.kmax = iters;
    int pole_track = -1;
    for (int j = 0; j < op.m2(); ++j)
        if (op.poles[j] == shift)
            pole_track = j;
    if (pole_track < 0)
        fo.monitor_shifts = {shift};
    const FastArnoldiState fast = fast_arnoldi(op, b, fo);
    const auto& prog = pole_track >= 0 ? fast.tracks[pole_track].history : fast.monitors[0].history;

    std::vector<MethodRun> runs;
    for (const auto& m : methods) {
        MethodRun r;
        if (m == "arnoldi")
            r.V = arnoldi(op.action(), b, iters, false).V;
        else if (m == "arnoldi-reorth")
            r.V = arnoldi(op.action(), b, iters, true).V;
        else if (m == "fast")
            r.V = fast.V();
        else if (m == "isometric")
            r.V = isometric_arnoldi(op.action(), b, iters).base.V;
        else if (m == "bm") {
            BmOptions bo;
            bo.kmax = iters;
            const BmState bs = bm_iterate(op, b, bo);
            r.V = bs.normalized_V();
            r.lost_tail = bs.overflow;
        }
        runs.push_back(std::move(r));
    }

    const auto exact = reference_gmres(op.action(), b, shift, iters);
    for (int k = 1; k <= iters; ++k) {
        rec.k.push_back(k);
        std::vector<double> row;
        for (const auto& r : runs) {
            const int K = static_cast<int>(r.V.cols());
            if (r.lost_tail && k + 1 > K)
                row.push_back(1.0);
            else
                row.push_back(paige_measure(r.V.leftCols(std::min({k + 1, K, n}))));
        }
        rec.paige.push_back(std::move(row));
        rec.resid_prog.push_back(prog[std::min<std::size_t>(k, prog.size() - 1)]);
        rec.resid_exact.push_back(exact[k]);
    }
    if (cfg.log_vv)
        for (const auto& r : runs)
            rec.vv.push_back(orthogonality_matrix(r.V));

    if (!cfg.out.empty()) {
        write_csv(cfg.out, rec);
        if (cfg.log_vv) {
            for (std::size_t i = 0; i < methods.size(); ++i) {
                const std::string path = cfg.out + ".vv_" + methods[i] + ".csv";
                std::ofstream vv(path);
                if (!vv)
                    throw FileNotFound(path);
                write_vv_csv(vv, rec.vv[i]);
            }
        }
    }
    return rec;
}

void write_csv(std::ostream& out, const ExperimentRecord& rec)
{
    out << "k";
    for (const auto& m : rec.methods)
        out << ",paige_" << m;
    out << ",resid_prog,resid_exact\r\n";
    for (std::size_t r = 0; r < rec.k.size(); ++r) {
        out << rec.k[r];
        for (const double p : rec.paige[r])
            out << "," << format_double(p);
        out << "," << format_double(rec.resid_prog[r]) << "," << format_double(rec.resid_exact[r]) << "\r\n";
    }
}

void write_csv(const std::string& path, const ExperimentRecord& rec)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FileNotFound(path);
    write_csv(out, rec);
}

void write_vv_csv(std::ostream& out, const Eigen::MatrixXd& M)
{
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            out << (j ? "," : "") << format_double(M(i, j));
        out << "\r\n";
    }
}

} // namespace fastarnoldi
