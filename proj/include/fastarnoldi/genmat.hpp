#pragma once

#include "fastarnoldi/bml.hpp"

#include <string>
#include <vector>

namespace fastarnoldi {

struct TestCase {
    BmlOperator op;
    std::string label;
    std::string spectrum;
    std::uint64_t seed = 0;
};

/// Diagonal matrix with eigenvalues center + radius e^{i theta},
/// theta uniform on [0, 2 pi arc_fraction), plus the given outliers.
TestCase diag_arc_spectrum(int n, double arc_fraction, cplx center, double radius,
                           const std::vector<cplx>& outliers, Rng& rng);

/// A = U + u v^* with U Haar unitary and random u, v.
TestCase unitary_plus_rank_one(int n, Rng& rng);
TestCase unitary_plus_rank_one(const CMatrix& U, const CVector& u, const CVector& v);

/// Block diagonal: p eigenvalues in [-beta, -alpha], n-2-p in [alpha, beta],
/// and the 2 x 2 block [[0, gamma], [-gamma, 0]].
TestCase nearly_hermitian_class(int n, int p, double alpha, double beta, double gamma, Rng& rng);

/// rho I + gamma U with U Haar unitary.
TestCase shifted_unitary_synthetic(int n, cplx rho, cplx gamma, Rng& rng);

/// Named presets; n <= 0 selects the preset's default size.
TestCase make_preset(const std::string& name, int n, std::uint64_t seed);
const std::vector<std::string>& preset_names();
int preset_default_n(const std::string& name);

} // namespace fastarnoldi
