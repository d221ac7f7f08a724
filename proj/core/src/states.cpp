#include "qcorr/states.hpp"

#include <cmath>
#include <cstdio>

#include "qcorr/rng.hpp"

namespace qcorr {

namespace {

constexpr double kTetrahedronTol = 1e-12;

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

std::array<double, 4> bell_eigenvalues(const BDTriple& c) {
    return {
        (1.0 + c.c1 - c.c2 + c.c3) / 4.0,  // Phi+
        (1.0 - c.c1 + c.c2 + c.c3) / 4.0,  // Phi-
        (1.0 + c.c1 + c.c2 - c.c3) / 4.0,  // Psi+
        (1.0 - c.c1 - c.c2 - c.c3) / 4.0,  // Psi-
    };
}

BdValidation bd_validate(const BDTriple& c) {
    BdValidation v;
    v.eigenvalues = bell_eigenvalues(c);
    v.valid = true;
    for (double lam : v.eigenvalues)
        if (lam < -kTetrahedronTol) v.valid = false;
    return v;
}

DensityMatrix::DensityMatrix(const ComplexMat& m) {
    if (m.dim() != 4) fail(Errc::InvalidParam, "density matrix must be 4x4");
    if (m.hermiticity_error() > 1e-10)
        fail(Errc::InvalidParam, "density matrix is not Hermitian");
    if (std::abs(m.trace() - cplx(1.0)) > 1e-10)
        fail(Errc::InvalidParam, "density matrix trace is not 1");
    m_ = m.hermitized();
}

DensityMatrix DensityMatrix::unchecked(ComplexMat m) {
    DensityMatrix d;
    d.m_ = std::move(m);
    return d;
}

double DensityMatrix::min_eigenvalue() const { return eigvals_hermitian(m_).front(); }

DensityMatrix bd_to_density(const BDTriple& c) {
    if (!bd_validate(c).valid)
        fail(Errc::InvalidTriple, "triple outside the Bell-diagonal tetrahedron");
    ComplexMat m(4);
    const double dplus = (1.0 + c.c3) / 4.0;
    const double dminus = (1.0 - c.c3) / 4.0;
    m(0, 0) = dplus;
    m(1, 1) = dminus;
    m(2, 2) = dminus;
    m(3, 3) = dplus;
    m(0, 3) = (c.c1 - c.c2) / 4.0;
    m(3, 0) = m(0, 3);
    m(1, 2) = (c.c1 + c.c2) / 4.0;
    m(2, 1) = m(1, 2);
    return DensityMatrix::unchecked(std::move(m));
}

BDTriple density_to_bd(const DensityMatrix& rho) {
    const ComplexMat& m = rho.mat();
    BDTriple c;
    c.c1 = (m(0, 3) + m(3, 0) + m(1, 2) + m(2, 1)).real();
    c.c2 = (m(1, 2) + m(2, 1) - m(0, 3) - m(3, 0)).real();
    c.c3 = (m(0, 0) - m(1, 1) - m(2, 2) + m(3, 3)).real();
    return c;
}

BlochTwoQubit density_to_bloch(const DensityMatrix& rho) {
    BlochTwoQubit b;
    const ComplexMat& m = rho.mat();
    for (int i = 1; i <= 3; ++i) {
        b.x[i - 1] = (pauli2(i, 0) * m).trace().real();
        b.y[i - 1] = (pauli2(0, i) * m).trace().real();
        for (int j = 1; j <= 3; ++j) b.t[i - 1][j - 1] = (pauli2(i, j) * m).trace().real();
    }
    return b;
}

DensityMatrix bloch_to_density(const BlochTwoQubit& b) {
    ComplexMat m = ComplexMat::identity(4);
    for (int i = 1; i <= 3; ++i) {
        m += b.x[i - 1] * pauli2(i, 0);
        m += b.y[i - 1] * pauli2(0, i);
        for (int j = 1; j <= 3; ++j) m += b.t[i - 1][j - 1] * pauli2(i, j);
    }
    m *= 0.25;
    return DensityMatrix::unchecked(m.hermitized());
}

DensityMatrix spin_flip_companion(const DensityMatrix& rho) {
    BlochTwoQubit b = density_to_bloch(rho);
    for (int i = 0; i < 3; ++i) {
        b.x[i] = -b.x[i];
        b.y[i] = -b.y[i];
    }
    return bloch_to_density(b);
}

std::array<cplx, 2> ket_from_bloch(const std::array<double, 3>& unit) {
    const double theta = std::acos(std::clamp(unit[2], -1.0, 1.0));
    const double phi = std::atan2(unit[1], unit[0]);
    return {cplx(std::cos(theta / 2.0), 0.0),
            std::polar(std::sin(theta / 2.0), phi)};
}

std::array<cplx, 2> ket_from_bloch_minus(const std::array<double, 3>& unit) {
    const double theta = std::acos(std::clamp(unit[2], -1.0, 1.0));
    const double phi = std::atan2(unit[1], unit[0]);
    return {cplx(std::sin(theta / 2.0), 0.0),
            -std::polar(std::cos(theta / 2.0), phi)};
}

ComplexMat qubit_from_bloch(const std::array<double, 3>& r) {
    ComplexMat m = ComplexMat::identity(2);
    for (int i = 1; i <= 3; ++i) m += r[i - 1] * pauli(i);
    m *= 0.5;
    return m;
}

std::array<cplx, 4> kron_ket(const std::array<cplx, 2>& a, const std::array<cplx, 2>& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

ComplexMat outer4(const std::array<cplx, 4>& k) {
    ComplexMat m(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = k[r] * std::conj(k[c]);
    return m;
}

DensityMatrix make_cq(const CQParam& param) {
    if (param.p < -1e-12 || param.p > 1.0 + 1e-12)
        fail(Errc::InvalidParam, "p must lie in [0,1]");
    if (std::abs(norm3(param.basis_a) - 1.0) > 1e-12)
        fail(Errc::InvalidParam, "basis_a must be a unit Bloch vector");
    if (norm3(param.rho1_b) > 1.0 + 1e-12 || norm3(param.rho2_b) > 1.0 + 1e-12)
        fail(Errc::InvalidParam, "B-state Bloch vectors must have norm <= 1");

    const double p = std::clamp(param.p, 0.0, 1.0);
    const auto k1 = ket_from_bloch(param.basis_a);
    const auto k2 = ket_from_bloch_minus(param.basis_a);
    ComplexMat proj1(2), proj2(2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            proj1(r, c) = k1[r] * std::conj(k1[c]);
            proj2(r, c) = k2[r] * std::conj(k2[c]);
        }
    ComplexMat m = tensor2(proj1, qubit_from_bloch(param.rho1_b));
    m *= p;
    ComplexMat m2 = tensor2(proj2, qubit_from_bloch(param.rho2_b));
    m2 *= (1.0 - p);
    m += m2;
    return DensityMatrix(m);
}

DensityMatrix make_cc(const CCParam& param) {
    double sum = 0.0;
    for (const auto& row : param.probs)
        for (double pij : row) {
            if (pij < -1e-12) fail(Errc::InvalidProbabilities, "negative joint probability");
            sum += pij;
        }
    if (std::abs(sum - 1.0) > 1e-12)
        fail(Errc::InvalidProbabilities, "joint probabilities must sum to 1");
    if (std::abs(norm3(param.basis_a) - 1.0) > 1e-12 ||
        std::abs(norm3(param.basis_b) - 1.0) > 1e-12)
        fail(Errc::InvalidParam, "bases must be unit Bloch vectors");

    const std::array<std::array<cplx, 2>, 2> ka = {ket_from_bloch(param.basis_a),
                                                   ket_from_bloch_minus(param.basis_a)};
    const std::array<std::array<cplx, 2>, 2> kb = {ket_from_bloch(param.basis_b),
                                                   ket_from_bloch_minus(param.basis_b)};
    ComplexMat m(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double pij = std::max(0.0, param.probs[i][j]);
            if (pij == 0.0) continue;
            ComplexMat term = outer4(kron_ket(ka[i], kb[j]));
            term *= pij;
            m += term;
        }
    return DensityMatrix(m);
}

DensityMatrix random_density(std::uint64_t seed, int rank) {
    if (rank < 1 || rank > 4) fail(Errc::InvalidParam, "rank must be 1..4");
    Rng rng(seed);
    // G: 4 x rank complex Gaussian; rho = G G^dagger / Tr.
    std::array<std::array<cplx, 4>, 4> g{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < rank; ++c) g[r][c] = rng.next_complex_gaussian();
    ComplexMat m(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < rank; ++k) s += g[r][k] * std::conj(g[c][k]);
            m(r, c) = s;
        }
    const double tr = m.trace().real();
    m *= cplx(1.0 / tr, 0.0);
    return DensityMatrix::unchecked(m.hermitized());
}

std::string bd_to_csv(const BDTriple& c) {
    return fmt12(c.c1) + "," + fmt12(c.c2) + "," + fmt12(c.c3);
}

std::string bd_to_json(const BDTriple& c) {
    return "[" + fmt12(c.c1) + "," + fmt12(c.c2) + "," + fmt12(c.c3) + "]";
}

}  // namespace qcorr
