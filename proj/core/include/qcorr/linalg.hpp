#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "qcorr/error.hpp"

namespace qcorr {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major. Sized for this project's needs
// (2x2 and 4x4 states, 16x16 Choi matrices); not a general-purpose BLAS.
class ComplexMat {
  public:
    ComplexMat() : dim_(0) {}
    explicit ComplexMat(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}
    ComplexMat(int dim, std::initializer_list<cplx> entries);

    static ComplexMat identity(int dim);

    int dim() const { return dim_; }
    cplx& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
    const cplx& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    ComplexMat& operator+=(const ComplexMat& o);
    ComplexMat& operator-=(const ComplexMat& o);
    ComplexMat& operator*=(cplx s);

    ComplexMat adjoint() const;
    ComplexMat transpose() const;
    ComplexMat conjugate() const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    // max_ij |A[i][j] - conj(A[j][i])|
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }
    // Averages A with its adjoint; cleans up roundoff drift after products.
    ComplexMat hermitized() const;

  private:
    int dim_;
    std::vector<cplx> a_;
};

ComplexMat operator+(ComplexMat a, const ComplexMat& b);
ComplexMat operator-(ComplexMat a, const ComplexMat& b);
ComplexMat operator*(cplx s, ComplexMat a);
ComplexMat operator*(const ComplexMat& a, const ComplexMat& b);

double max_abs_diff(const ComplexMat& a, const ComplexMat& b);

struct EigDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMat eigenvectors;          // unitary; column j pairs with eigenvalues[j]
};

// Low-level cyclic Jacobi kernel for Hermitian input. `a` (n x n, row-major)
// is destroyed; eigenvalues land in `w` unsorted. If `v` is non-null it
// accumulates the rotations (columns are eigenvectors). Returns the number
// of sweeps used. Stops when the off-diagonal Frobenius mass drops below
// `off_tol`.
int jacobi_hermitian(cplx* a, int n, cplx* v, double* w, double off_tol = 1e-14,
                     int max_sweeps = 64);

EigDecomposition eig_hermitian(const ComplexMat& a);
std::vector<double> eigvals_hermitian(const ComplexMat& a);

enum class MatFunc { Sqrt, Log };

// Spectral function of a PSD matrix. Eigenvalues in [-1e-10, 0) are clamped
// to zero; anything below -1e-10 throws NegativeEigenvalue. Log acts on the
// support only (kernel directions contribute zero, never -inf).
ComplexMat mat_func_psd(const ComplexMat& a, MatFunc f);

// Schatten one-norm of a Hermitian matrix.
double trace_norm(const ComplexMat& a);

// Kronecker product of two 2x2 matrices, subsystem A on the left.
ComplexMat tensor2(const ComplexMat& a, const ComplexMat& b);

// Pauli matrices; k = 0 is the identity, k = 1..3 are x, y, z.
const ComplexMat& pauli(int k);
// sigma_i (x) sigma_j on two qubits, indices 0..3 as above.
ComplexMat pauli2(int i, int j);

}  // namespace qcorr
