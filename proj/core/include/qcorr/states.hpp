#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "qcorr/linalg.hpp"

namespace qcorr {

// Bell-diagonal state as its correlation triple {c1, c2, c3}.
struct BDTriple {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

// Eigenvalues of the Bell-diagonal state in the fixed Bell order
// { Phi+, Phi-, Psi+, Psi- }.
std::array<double, 4> bell_eigenvalues(const BDTriple& c);

struct BdValidation {
    bool valid = false;
    std::array<double, 4> eigenvalues{};  // Bell order as above
};

// Tetrahedron membership: all four Bell eigenvalues >= -1e-12.
BdValidation bd_validate(const BDTriple& c);

// 4x4 density matrix. Construction checks hermiticity and unit trace; the
// PSD check is an explicit eigensolve, so it is exposed separately instead
// of running on every construction.
class DensityMatrix {
  public:
    explicit DensityMatrix(const ComplexMat& m);
    static DensityMatrix unchecked(ComplexMat m);

    const ComplexMat& mat() const { return m_; }
    double min_eigenvalue() const;

  private:
    DensityMatrix() = default;
    ComplexMat m_;
};

DensityMatrix bd_to_density(const BDTriple& c);
// Diagonal of the correlation tensor; exact inverse of bd_to_density for BD
// inputs.
BDTriple density_to_bd(const DensityMatrix& rho);

struct BlochTwoQubit {
    std::array<double, 3> x{};            // local Bloch vector of A
    std::array<double, 3> y{};            // local Bloch vector of B
    std::array<std::array<double, 3>, 3> t{};  // correlation matrix T_ij
};

BlochTwoQubit density_to_bloch(const DensityMatrix& rho);
// Rebuilds the matrix from its Bloch data. Hermiticity and unit trace hold
// by construction; positivity is the caller's concern.
DensityMatrix bloch_to_density(const BlochTwoQubit& b);

// State with the locals flipped: {x, y, T} -> {-x, -y, T}. Fixed point on
// BD states.
DensityMatrix spin_flip_companion(const DensityMatrix& rho);

// Classical-quantum state p |e+><e+| (x) rho1 + (1-p) |e-><e-| (x) rho2.
// basis_a is a unit Bloch vector; rho1_b/rho2_b are Bloch vectors of the B
// states (norm <= 1).
struct CQParam {
    double p = 0.5;
    std::array<double, 3> basis_a{0.0, 0.0, 1.0};
    std::array<double, 3> rho1_b{};
    std::array<double, 3> rho2_b{};
};

// Classical-classical state sum_ij p_ij |i><i| (x) |j><j| in the bases
// defined by the two unit Bloch vectors.
struct CCParam {
    std::array<double, 3> basis_a{0.0, 0.0, 1.0};
    std::array<double, 3> basis_b{0.0, 0.0, 1.0};
    std::array<std::array<double, 2>, 2> probs{{{1.0, 0.0}, {0.0, 0.0}}};
};

DensityMatrix make_cq(const CQParam& param);
DensityMatrix make_cc(const CCParam& param);

// Ginibre construction: normalized G G^dagger with G a 4 x rank matrix of
// seeded standard complex Gaussians.
DensityMatrix random_density(std::uint64_t seed, int rank);

// Single-qubit helpers.
std::array<cplx, 2> ket_from_bloch(const std::array<double, 3>& unit);   // +1 eigenstate of e.sigma
std::array<cplx, 2> ket_from_bloch_minus(const std::array<double, 3>& unit);
ComplexMat qubit_from_bloch(const std::array<double, 3>& r);             // (I + r.sigma)/2
std::array<cplx, 4> kron_ket(const std::array<cplx, 2>& a, const std::array<cplx, 2>& b);
ComplexMat outer4(const std::array<cplx, 4>& k);

std::string bd_to_csv(const BDTriple& c);
std::string bd_to_json(const BDTriple& c);

}  // namespace qcorr
