#include "qcorr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcorr {

ComplexMat::ComplexMat(int dim, std::initializer_list<cplx> entries) : ComplexMat(dim) {
    if (static_cast<int>(entries.size()) != dim * dim)
        fail(Errc::DimensionMismatch, "entry count does not match dimension");
    std::copy(entries.begin(), entries.end(), a_.begin());
}

ComplexMat ComplexMat::identity(int dim) {
    ComplexMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMat& ComplexMat::operator+=(const ComplexMat& o) {
    if (dim_ != o.dim_) fail(Errc::DimensionMismatch, "matrix addition");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMat& ComplexMat::operator-=(const ComplexMat& o) {
    if (dim_ != o.dim_) fail(Errc::DimensionMismatch, "matrix subtraction");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ComplexMat& ComplexMat::operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
}

ComplexMat ComplexMat::adjoint() const {
    ComplexMat m(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

ComplexMat ComplexMat::transpose() const {
    ComplexMat m(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

ComplexMat ComplexMat::conjugate() const {
    ComplexMat m(dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
    return m;
}

cplx ComplexMat::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMat::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
}

double ComplexMat::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

double ComplexMat::hermiticity_error() const {
    double m = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return m;
}

ComplexMat ComplexMat::hermitized() const {
    ComplexMat m(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c)
            m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
    return m;
}

ComplexMat operator+(ComplexMat a, const ComplexMat& b) { return a += b; }
ComplexMat operator-(ComplexMat a, const ComplexMat& b) { return a -= b; }
ComplexMat operator*(cplx s, ComplexMat a) { return a *= s; }

ComplexMat operator*(const ComplexMat& a, const ComplexMat& b) {
    if (a.dim() != b.dim()) fail(Errc::DimensionMismatch, "matrix product");
    const int n = a.dim();
    ComplexMat m(n);
    for (int r = 0; r < n; ++r) {
        for (int k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx{}) continue;
            for (int c = 0; c < n; ++c) m(r, c) += ark * b(k, c);
        }
    }
    return m;
}

double max_abs_diff(const ComplexMat& a, const ComplexMat& b) {
    if (a.dim() != b.dim()) fail(Errc::DimensionMismatch, "matrix comparison");
    double m = 0.0;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

int jacobi_hermitian(cplx* a, int n, cplx* v, double* w, double off_tol, int max_sweeps) {
    auto at = [&](int r, int c) -> cplx& { return a[r * n + c]; };
    if (v) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) v[r * n + c] = (r == c) ? 1.0 : 0.0;
    }

    // Rotations on entries below skip_tol cannot lift the off-diagonal mass
    // above off_tol, so they are skipped.
    const double skip_tol = off_tol / (2.0 * n);
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off2 = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off2 += std::norm(at(p, q));
        if (std::sqrt(2.0 * off2) <= off_tol) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = at(p, q);
                const double beta = std::abs(apq);
                if (beta <= skip_tol) continue;

                const double alpha = at(p, p).real();
                const double gamma = at(q, q).real();
                const cplx phase = apq / beta;  // e^{i phi}

                // tan(theta) for the rotation zeroing a_pq; smaller root for
                // stability.
                const double tau = (alpha - gamma) / (2.0 * beta);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app_new = c * c * alpha + s * s * gamma + 2.0 * c * s * beta;
                const double aqq_new = s * s * alpha + c * c * gamma - 2.0 * c * s * beta;
                at(p, p) = app_new;
                at(q, q) = aqq_new;
                at(p, q) = 0.0;
                at(q, p) = 0.0;

                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const cplx arp = at(r, p);
                    const cplx arq = at(r, q);
                    const cplx np = c * arp + s * std::conj(phase) * arq;
                    const cplx nq = -s * phase * arp + c * arq;
                    at(r, p) = np;
                    at(r, q) = nq;
                    at(p, r) = std::conj(np);
                    at(q, r) = std::conj(nq);
                }
                if (v) {
                    for (int r = 0; r < n; ++r) {
                        const cplx vrp = v[r * n + p];
                        const cplx vrq = v[r * n + q];
                        v[r * n + p] = c * vrp + s * std::conj(phase) * vrq;
                        v[r * n + q] = -s * phase * vrp + c * vrq;
                    }
                }
            }
        }
    }

    for (int i = 0; i < n; ++i) w[i] = a[i * n + i].real();
    return sweep;
}

namespace {

void check_hermitian(const ComplexMat& a, const char* who) {
    if (a.hermiticity_error() > 1e-12)
        fail(Errc::NonHermitianInput, std::string(who) + " requires a Hermitian matrix");
}

}  // namespace

EigDecomposition eig_hermitian(const ComplexMat& a) {
    check_hermitian(a, "eig_hermitian");
    const int n = a.dim();
    ComplexMat work = a.hermitized();
    ComplexMat vec(n);
    std::vector<double> w(n);
    jacobi_hermitian(work.data(), n, vec.data(), w.data());

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return w[i] < w[j]; });

    EigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMat(n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = w[idx[j]];
        for (int r = 0; r < n; ++r) out.eigenvectors(r, j) = vec(r, idx[j]);
    }
    return out;
}

std::vector<double> eigvals_hermitian(const ComplexMat& a) {
    check_hermitian(a, "eigvals_hermitian");
    const int n = a.dim();
    ComplexMat work = a.hermitized();
    std::vector<double> w(n);
    jacobi_hermitian(work.data(), n, nullptr, w.data());
    std::sort(w.begin(), w.end());
    return w;
}

ComplexMat mat_func_psd(const ComplexMat& a, MatFunc f) {
    EigDecomposition eig = eig_hermitian(a);
    const int n = a.dim();
    std::vector<double> fe(n);
    for (int i = 0; i < n; ++i) {
        double lam = eig.eigenvalues[i];
        if (lam < -1e-10)
            fail(Errc::NegativeEigenvalue, "matrix is not PSD within tolerance");
        // Eigenvalues at the solver noise floor are exact zeros of the input;
        // keeping them would fabricate sqrt(1e-14)-sized spectral weight.
        if (lam < 1e-13) lam = 0.0;
        switch (f) {
            case MatFunc::Sqrt: fe[i] = std::sqrt(lam); break;
            case MatFunc::Log: fe[i] = lam > 0.0 ? std::log(lam) : 0.0; break;
        }
    }
    ComplexMat out(n);
    const ComplexMat& v = eig.eigenvectors;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) s += v(r, k) * fe[k] * std::conj(v(c, k));
            out(r, c) = s;
        }
    return out;
}

double trace_norm(const ComplexMat& a) {
    check_hermitian(a, "trace_norm");
    std::vector<double> w = eigvals_hermitian(a);
    double s = 0.0;
    for (double x : w) s += std::abs(x);
    return s;
}

ComplexMat tensor2(const ComplexMat& a, const ComplexMat& b) {
    if (a.dim() != 2 || b.dim() != 2) fail(Errc::DimensionMismatch, "tensor2 expects 2x2 factors");
    ComplexMat m(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return m;
}

const ComplexMat& pauli(int k) {
    static const ComplexMat s0 = ComplexMat::identity(2);
    static const ComplexMat s1(2, {0.0, 1.0, 1.0, 0.0});
    static const ComplexMat s2(2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});
    static const ComplexMat s3(2, {1.0, 0.0, 0.0, -1.0});
    switch (k) {
        case 0: return s0;
        case 1: return s1;
        case 2: return s2;
        case 3: return s3;
    }
    fail(Errc::InvalidAxis, "Pauli index must be 0..3");
}

ComplexMat pauli2(int i, int j) { return tensor2(pauli(i), pauli(j)); }

}  // namespace qcorr
