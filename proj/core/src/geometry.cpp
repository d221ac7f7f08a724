#include "qcorr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <tuple>

#include "qcorr/rng.hpp"

#include <json.hpp>

namespace qcorr {

namespace detail {

double golden_section(double a, double b, double tol, const std::function<double(double)>& f,
                      double* arg_out) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (arg_out) *arg_out = xm;
    return fm;
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, const std::vector<double>& step,
                                int max_iters) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order[0], second_worst = order[n - 1], worst = order[n];

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto along = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d)
                x[d] = centroid[d] + coef * (centroid[d] - pts[worst][d]);
            return x;
        };

        std::vector<double> xr = along(1.0);
        const double fr = f(xr);
        if (fr < vals[best]) {
            std::vector<double> xe = along(2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[worst] = std::move(xe);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                vals[worst] = fr;
            }
        } else if (fr < vals[second_worst]) {
            pts[worst] = std::move(xr);
            vals[worst] = fr;
        } else {
            std::vector<double> xc = along(fr < vals[worst] ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = std::move(xc);
                vals[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (vals[i] < vals[best]) best = i;
    return pts[best];
}

}  // namespace detail

namespace {

constexpr double kTieTol = 1e-10;
constexpr double kFlatTol = 1e-12;

std::array<double, 4> axis_bell(int axis, double s) {
    switch (axis) {
        case 1: return {(1.0 + s) / 4.0, (1.0 - s) / 4.0, (1.0 + s) / 4.0, (1.0 - s) / 4.0};
        case 2: return {(1.0 - s) / 4.0, (1.0 + s) / 4.0, (1.0 + s) / 4.0, (1.0 - s) / 4.0};
        case 3: return {(1.0 + s) / 4.0, (1.0 + s) / 4.0, (1.0 - s) / 4.0, (1.0 - s) / 4.0};
    }
    fail(Errc::InvalidAxis, "axis must be 1, 2 or 3");
}

struct AxisScan {
    double s = 0.0;
    double value = 0.0;
};

// Minimizes f over s in [-1,1]: coarse 65-point grid, golden-section
// refinement, then midpoint of the near-minimal sublevel interval. The
// functionals are convex in s, so the sublevel set is an interval; taking
// its midpoint turns flat argmin plateaus into a canonical point.
AxisScan minimize_axis(const std::function<double(double)>& f) {
    constexpr int kCoarse = 65;
    const double h = 2.0 / (kCoarse - 1);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kCoarse; ++i) {
        const double v = f(-1.0 + i * h);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = std::max(-1.0, -1.0 + (best - 1) * h);
    const double hi = std::min(1.0, -1.0 + (best + 1) * h);
    double s_min = 0.0;
    double v_min = detail::golden_section(lo, hi, 1e-10, f, &s_min);
    if (best_val < v_min) {  // golden landed worse than the coarse point
        v_min = best_val;
        s_min = -1.0 + best * h;
    }

    const double level = v_min + kFlatTol;
    auto edge = [&](double outside, double inside) {
        if (f(outside) <= level) return outside;
        double a = outside, b = inside;
        for (int i = 0; i < 60; ++i) {
            const double m = 0.5 * (a + b);
            if (f(m) <= level)
                b = m;
            else
                a = m;
        }
        return b;
    };
    const double left = edge(-1.0, s_min);
    const double right = edge(1.0, s_min);
    AxisScan out;
    out.s = 0.5 * (left + right);
    out.value = f(out.s);
    if (v_min < out.value) {
        // Midpoint should match the minimum; fall back if roundoff disagrees.
        if (out.value - v_min > kFlatTol) {
            out.s = s_min;
            out.value = v_min;
        } else {
            out.value = v_min;
        }
    }
    return out;
}

}  // namespace

ClosestClassicalResult closest_classical_axis(const BDTriple& c, DistanceKind kind) {
    if (!bd_validate(c).valid)
        fail(Errc::InvalidTriple, "triple outside the Bell-diagonal tetrahedron");
    const std::array<double, 4> bell_rho = bell_eigenvalues(c);

    AxisScan scans[3];
    for (int k = 1; k <= 3; ++k) {
        scans[k - 1] = minimize_axis(
            [&](double s) { return distance_bell(kind, bell_rho, axis_bell(k, s)); });
    }

    int best_axis = 1;
    for (int k = 2; k <= 3; ++k)
        if (scans[k - 1].value < scans[best_axis - 1].value) best_axis = k;

    ClosestClassicalResult r;
    r.axis = best_axis;
    r.s = scans[best_axis - 1].s;
    r.value = scans[best_axis - 1].value;
    r.kind = kind;
    r.bona_fide = is_bona_fide(kind);
    int tied = 0;
    for (int k = 1; k <= 3; ++k)
        if (scans[k - 1].value <= r.value + kTieTol) ++tied;
    if (tied > 1) {
        for (int k = 1; k <= 3; ++k)
            if (scans[k - 1].value <= r.value + kTieTol)
                r.ties.emplace_back(k, scans[k - 1].s);
    }
    return r;
}

double discord_geometric(const BDTriple& c, DistanceKind kind) {
    return closest_classical_axis(c, kind).value;
}

double concurrence_bd(const BDTriple& c) {
    if (!bd_validate(c).valid)
        fail(Errc::InvalidTriple, "triple outside the Bell-diagonal tetrahedron");
    const std::array<double, 4> lam = bell_eigenvalues(c);
    const double lmax = *std::max_element(lam.begin(), lam.end());
    return std::max(0.0, 2.0 * lmax - 1.0);
}

double wootters_concurrence(const DensityMatrix& rho) {
    const ComplexMat yy = pauli2(2, 2);
    const ComplexMat flipped = yy * rho.mat().conjugate() * yy;
    const ComplexMat sr = mat_func_psd(rho.mat(), MatFunc::Sqrt);
    const ComplexMat m = (sr * flipped * sr).hermitized();
    std::vector<double> eta = eigvals_hermitian(m);  // ascending
    double c = std::sqrt(std::max(0.0, eta[3]));
    for (int i = 2; i >= 0; --i) c -= std::sqrt(std::max(0.0, eta[i]));
    return std::max(0.0, c);
}

double entanglement_bures_bd(const BDTriple& c) {
    const double con = concurrence_bd(c);
    const double fs = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - con * con)));
    return std::max(0.0, 2.0 * (1.0 - std::sqrt(fs)));
}

// ---------------------------------------------------------------------------
// Classical-set oracle
// ---------------------------------------------------------------------------

namespace {

constexpr double kZeroEig = 1e-12;
constexpr double kSupportMass = 1e-10;
// Candidate evaluations feed a 1e-3-tolerance upper bound; a looser Jacobi
// stop saves a sweep or two per call.
constexpr double kOracleEigTol = 1e-12;

struct RhoCtx {
    DistanceKind kind;
    ComplexMat rho;
    ComplexMat sqrt_rho;      // Bures / Hellinger
    double sum_lam_ln_lam = 0.0;  // relative entropy
    double tr_rho2 = 0.0;         // Hilbert-Schmidt
};

RhoCtx make_ctx(const DensityMatrix& rho, DistanceKind kind) {
    RhoCtx ctx;
    ctx.kind = kind;
    ctx.rho = rho.mat();
    if (kind == DistanceKind::BuresSquared || kind == DistanceKind::HellingerSquared)
        ctx.sqrt_rho = mat_func_psd(ctx.rho, MatFunc::Sqrt);
    if (kind == DistanceKind::RelativeEntropy) {
        for (double lam : eigvals_hermitian(ctx.rho))
            if (lam > kZeroEig) ctx.sum_lam_ln_lam += lam * std::log(lam);
    }
    if (kind == DistanceKind::HilbertSchmidtSquared) {
        for (int r = 0; r < 4; ++r)
            for (int cc = 0; cc < 4; ++cc) ctx.tr_rho2 += std::norm(ctx.rho(r, cc));
    }
    return ctx;
}

// Distance from ctx.rho to an arbitrary candidate state, reusing the cached
// per-rho pieces. Used by the CQ and separable oracles.
double distance_to_candidate(const RhoCtx& ctx, const ComplexMat& chi) {
    switch (ctx.kind) {
        case DistanceKind::Trace:
            return 0.5 * trace_norm((ctx.rho - chi).hermitized());
        case DistanceKind::BuresSquared: {
            const ComplexMat m = (ctx.sqrt_rho * chi * ctx.sqrt_rho).hermitized();
            double root_f = 0.0;
            for (double eta : eigvals_hermitian(m))
                if (eta > 1e-13) root_f += std::sqrt(eta);
            root_f = std::min(root_f, 1.0);
            return 2.0 * (1.0 - root_f);
        }
        case DistanceKind::HellingerSquared: {
            const ComplexMat sc = mat_func_psd(chi.hermitized(), MatFunc::Sqrt);
            const double aff = (ctx.sqrt_rho * sc).trace().real();
            return std::max(0.0, 2.0 * (1.0 - std::min(aff, 1.0)));
        }
        case DistanceKind::RelativeEntropy: {
            const EigDecomposition es = eig_hermitian(chi.hermitized());
            double cross = 0.0;
            for (int j = 0; j < 4; ++j) {
                cplx acc = 0.0;
                for (int r = 0; r < 4; ++r) {
                    cplx row = 0.0;
                    for (int cc = 0; cc < 4; ++cc) row += ctx.rho(r, cc) * es.eigenvectors(cc, j);
                    acc += std::conj(es.eigenvectors(r, j)) * row;
                }
                const double mj = std::max(0.0, acc.real());
                const double mu = es.eigenvalues[j];
                if (mu <= kZeroEig) {
                    if (mj > kSupportMass) return std::numeric_limits<double>::infinity();
                    continue;
                }
                if (mj > 0.0) cross += mj * std::log(mu);
            }
            return std::max(0.0, ctx.sum_lam_ln_lam - cross);
        }
        case DistanceKind::HilbertSchmidtSquared: {
            double s = 0.0;
            for (int r = 0; r < 4; ++r)
                for (int cc = 0; cc < 4; ++cc) s += std::norm(ctx.rho(r, cc) - chi(r, cc));
            return s;
        }
    }
    fail(Errc::InvalidParam, "distance kind");
}

std::array<double, 3> bloch_from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::array<cplx, 2> ket_from_angles(double theta, double phi) {
    return {cplx(std::cos(theta / 2.0), 0.0), std::polar(std::sin(theta / 2.0), phi)};
}

std::array<cplx, 2> ket_from_angles_minus(double theta, double phi) {
    return {cplx(std::sin(theta / 2.0), 0.0), -std::polar(std::cos(theta / 2.0), phi)};
}

// Product basis columns |a_i (x) b_j| for the CC evaluation, plus the
// Gram-style matrices needed per kind.
struct CcBasisCtx {
    std::array<std::array<cplx, 4>, 4> cols;  // order 00, 01, 10, 11
    std::array<cplx, 16> g;                   // U^dag rho U
    std::array<double, 4> g2diag;             // diag of U^dag sqrt(rho) U
};

void build_cc_basis(const RhoCtx& ctx, double theta_a, double phi_a, double theta_b,
                    double phi_b, CcBasisCtx& out) {
    const std::array<std::array<cplx, 2>, 2> ka = {ket_from_angles(theta_a, phi_a),
                                                   ket_from_angles_minus(theta_a, phi_a)};
    const std::array<std::array<cplx, 2>, 2> kb = {ket_from_angles(theta_b, phi_b),
                                                   ket_from_angles_minus(theta_b, phi_b)};
    int col = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.cols[col++] = kron_ket(ka[i], kb[j]);

    std::array<std::array<cplx, 4>, 4> rho_cols;
    for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 4; ++r) {
            cplx s = 0.0;
            for (int k = 0; k < 4; ++k) s += ctx.rho(r, k) * out.cols[c][k];
            rho_cols[c][r] = s;
        }
    }
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < 4; ++k) s += std::conj(out.cols[r][k]) * rho_cols[c][k];
            out.g[r * 4 + c] = s;
        }

    if (ctx.kind == DistanceKind::HellingerSquared) {
        for (int c = 0; c < 4; ++c) {
            cplx s = 0.0;
            for (int r = 0; r < 4; ++r) {
                cplx row = 0.0;
                for (int k = 0; k < 4; ++k) row += ctx.sqrt_rho(r, k) * out.cols[c][k];
                s += std::conj(out.cols[c][r]) * row;
            }
            out.g2diag[c] = s.real();
        }
    }
}

double eval_cc_probs(const RhoCtx& ctx, const CcBasisCtx& basis, const std::array<double, 4>& p) {
    switch (ctx.kind) {
        case DistanceKind::Trace: {
            std::array<cplx, 16> h = basis.g;
            for (int i = 0; i < 4; ++i) h[i * 4 + i] -= p[i];
            double w[4];
            jacobi_hermitian(h.data(), 4, nullptr, w, kOracleEigTol);
            return 0.5 * (std::abs(w[0]) + std::abs(w[1]) + std::abs(w[2]) + std::abs(w[3]));
        }
        case DistanceKind::BuresSquared: {
            std::array<cplx, 16> h;
            std::array<double, 4> sq;
            for (int i = 0; i < 4; ++i) sq[i] = std::sqrt(std::max(0.0, p[i]));
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) h[r * 4 + c] = sq[r] * sq[c] * basis.g[r * 4 + c];
            double w[4];
            jacobi_hermitian(h.data(), 4, nullptr, w, kOracleEigTol);
            double root_f = 0.0;
            for (double eta : w)
                if (eta > 1e-12) root_f += std::sqrt(eta);
            root_f = std::min(root_f, 1.0);
            return 2.0 * (1.0 - root_f);
        }
        case DistanceKind::HellingerSquared: {
            double aff = 0.0;
            for (int i = 0; i < 4; ++i)
                aff += std::sqrt(std::max(0.0, p[i])) * basis.g2diag[i];
            return std::max(0.0, 2.0 * (1.0 - std::min(aff, 1.0)));
        }
        case DistanceKind::RelativeEntropy: {
            double cross = 0.0;
            for (int i = 0; i < 4; ++i) {
                const double mi = std::max(0.0, basis.g[i * 4 + i].real());
                if (p[i] <= kZeroEig) {
                    if (mi > kSupportMass) return std::numeric_limits<double>::infinity();
                    continue;
                }
                cross += mi * std::log(p[i]);
            }
            return std::max(0.0, ctx.sum_lam_ln_lam - cross);
        }
        case DistanceKind::HilbertSchmidtSquared: {
            double s = ctx.tr_rho2;
            for (int i = 0; i < 4; ++i) {
                const double gi = basis.g[i * 4 + i].real();
                s += p[i] * p[i] - 2.0 * p[i] * gi;
            }
            return std::max(0.0, s);
        }
    }
    fail(Errc::InvalidParam, "distance kind");
}

// Full CC objective on the 7-vector (theta_a, phi_a, theta_b, phi_b, q1, q2, q3).
double eval_cc_params(const RhoCtx& ctx, const std::vector<double>& x) {
    const double theta_a = std::clamp(x[0], 0.0, std::numbers::pi);
    const double theta_b = std::clamp(x[2], 0.0, std::numbers::pi);
    const double phi_a = x[1];
    const double phi_b = x[3];
    double q[3] = {x[4], x[5], x[6]};
    double penalty = 0.0;
    for (double& qi : q) {
        if (qi < 0.0) {
            penalty += -qi;
            qi = 0.0;
        }
    }
    double q4 = 1.0 - q[0] - q[1] - q[2];
    if (q4 < 0.0) {
        penalty += -q4;
        q4 = 0.0;
    }
    const double norm = q[0] + q[1] + q[2] + q4;
    const std::array<double, 4> p = {q[0] / norm, q[1] / norm, q[2] / norm, q4 / norm};
    CcBasisCtx basis;
    build_cc_basis(ctx, theta_a, phi_a, theta_b, phi_b, basis);
    return eval_cc_probs(ctx, basis, p) + 10.0 * penalty;
}

ComplexMat cq_candidate(double theta_a, double phi_a, double p,
                        const std::array<double, 3>& r1, const std::array<double, 3>& r2) {
    const auto ea = bloch_from_angles(theta_a, phi_a);
    const auto k1 = ket_from_bloch(ea);
    const auto k2 = ket_from_bloch_minus(ea);
    ComplexMat proj1(2), proj2(2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            proj1(r, c) = k1[r] * std::conj(k1[c]);
            proj2(r, c) = k2[r] * std::conj(k2[c]);
        }
    ComplexMat m = tensor2(proj1, qubit_from_bloch(r1));
    m *= p;
    ComplexMat m2 = tensor2(proj2, qubit_from_bloch(r2));
    m2 *= (1.0 - p);
    m += m2;
    return m;
}

double eval_cq_params(const RhoCtx& ctx, const std::vector<double>& x) {
    const double theta_a = std::clamp(x[0], 0.0, std::numbers::pi);
    const double phi_a = x[1];
    const double p = std::clamp(x[2], 0.0, 1.0);
    std::array<double, 3> r1 = {x[3], x[4], x[5]};
    std::array<double, 3> r2 = {x[6], x[7], x[8]};
    for (auto* r : {&r1, &r2}) {
        const double n = std::sqrt((*r)[0] * (*r)[0] + (*r)[1] * (*r)[1] + (*r)[2] * (*r)[2]);
        if (n > 1.0)
            for (double& v : *r) v /= n;
    }
    return distance_to_candidate(ctx, cq_candidate(theta_a, phi_a, p, r1, r2));
}

double oracle_cc(const RhoCtx& ctx, const OracleBudget& budget, std::uint64_t seed) {
    const int ng = budget.basis_grid;
    const int np = budget.prob_grid;
    const double dtheta = std::numbers::pi / (ng - 1);
    const double dphi = 2.0 * std::numbers::pi / ng;

    // Simplex lattice with np points per axis.
    std::vector<std::array<double, 4>> probs;
    for (int i = 0; i < np; ++i)
        for (int j = 0; i + j < np; ++j)
            for (int k = 0; i + j + k < np; ++k) {
                const int l = np - 1 - i - j - k;
                const double d = np - 1.0;
                probs.push_back({i / d, j / d, k / d, l / d});
            }

    // One entry per basis cell so the scan parallelizes with a merge by
    // exact minimum; parallel and serial runs agree bit for bit.
    const long n_cells = static_cast<long>(ng) * ng * ng * ng;
    std::vector<double> cell_value(n_cells);
    std::vector<int> cell_prob(n_cells);
#pragma omp parallel for schedule(static)
    for (long cell = 0; cell < n_cells; ++cell) {
        const int jb = static_cast<int>(cell % ng);
        const int ib = static_cast<int>((cell / ng) % ng);
        const int ja = static_cast<int>((cell / (ng * ng)) % ng);
        const int ia = static_cast<int>(cell / (ng * ng * ng));
        CcBasisCtx basis;
        build_cc_basis(ctx, ia * dtheta, ja * dphi, ib * dtheta, jb * dphi, basis);
        double best_v = std::numeric_limits<double>::infinity();
        int best_p = 0;
        for (std::size_t pi = 0; pi < probs.size(); ++pi) {
            const double v = eval_cc_probs(ctx, basis, probs[pi]);
            if (v < best_v) {
                best_v = v;
                best_p = static_cast<int>(pi);
            }
        }
        cell_value[cell] = best_v;
        cell_prob[cell] = best_p;
    }

    // Top cells by (value, index); NM refines from each basin.
    std::array<long, 3> top = {-1, -1, -1};
    for (long cell = 0; cell < n_cells; ++cell) {
        for (int slot = 0; slot < 3; ++slot) {
            if (top[slot] < 0 || cell_value[cell] < cell_value[top[slot]]) {
                for (int shift = 2; shift > slot; --shift) top[shift] = top[shift - 1];
                top[slot] = cell;
                break;
            }
        }
    }

    auto cell_params = [&](long cell) {
        const int jb = static_cast<int>(cell % ng);
        const int ib = static_cast<int>((cell / ng) % ng);
        const int ja = static_cast<int>((cell / (ng * ng)) % ng);
        const int ia = static_cast<int>(cell / (ng * ng * ng));
        const auto& p = probs[cell_prob[cell]];
        return std::vector<double>{ia * dtheta, ja * dphi, ib * dtheta, jb * dphi,
                                   p[0],        p[1],      p[2]};
    };

    double best = cell_value[top[0]];
    auto objective = [&](const std::vector<double>& x) { return eval_cc_params(ctx, x); };
    const std::vector<double> step = {dtheta / 2.0, dphi / 2.0, dtheta / 2.0, dphi / 2.0,
                                      0.5 / np,     0.5 / np,  0.5 / np};
    std::vector<double> fine_step = step;
    for (double& s : fine_step) s /= 10.0;

    std::vector<std::vector<double>> starts;
    for (long cell : top)
        if (cell >= 0) starts.push_back(cell_params(cell));
    Rng rng(seed);
    {
        std::vector<double> jittered = starts.front();
        for (std::size_t d = 0; d < jittered.size(); ++d)
            jittered[d] += (rng.next_double() - 0.5) * step[d];
        starts.push_back(std::move(jittered));
    }

    for (const auto& start : starts) {
        std::vector<double> refined =
            detail::nelder_mead(objective, start, step, budget.refine_iters);
        refined = detail::nelder_mead(objective, refined, fine_step, budget.refine_iters);
        best = std::min(best, objective(refined));
    }
    return best;
}

double oracle_cq(const RhoCtx& ctx, const OracleBudget& budget, std::uint64_t seed) {
    const int ng = budget.basis_grid;
    const int np = budget.prob_grid;
    const double dtheta = std::numbers::pi / (ng - 1);
    const double dphi = 2.0 * std::numbers::pi / ng;

    const std::array<std::array<double, 3>, 7> bpoints = {{{0.0, 0.0, 0.0},
                                                           {1.0, 0.0, 0.0},
                                                           {-1.0, 0.0, 0.0},
                                                           {0.0, 1.0, 0.0},
                                                           {0.0, -1.0, 0.0},
                                                           {0.0, 0.0, 1.0},
                                                           {0.0, 0.0, -1.0}}};

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_x(9, 0.0);
    for (int ia = 0; ia < ng; ++ia)
        for (int ja = 0; ja < ng; ++ja) {
            const double ta = ia * dtheta, pa = ja * dphi;
            for (int ip = 0; ip < np; ++ip) {
                const double p = ip / (np - 1.0);
                for (const auto& r1 : bpoints)
                    for (const auto& r2 : bpoints) {
                        const double v =
                            distance_to_candidate(ctx, cq_candidate(ta, pa, p, r1, r2));
                        if (v < best) {
                            best = v;
                            best_x = {ta,    pa,    p,     r1[0], r1[1],
                                      r1[2], r2[0], r2[1], r2[2]};
                        }
                    }
            }
        }

    auto objective = [&](const std::vector<double>& x) { return eval_cq_params(ctx, x); };
    const std::vector<double> step = {dtheta / 2.0, dphi / 2.0, 0.5 / np, 0.3, 0.3,
                                      0.3,          0.3,        0.3,      0.3};
    Rng rng(seed);
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::vector<double> start = best_x;
        if (attempt > 0)
            for (std::size_t d = 0; d < start.size(); ++d)
                start[d] += (rng.next_double() - 0.5) * step[d];
        const std::vector<double> refined = detail::nelder_mead(objective, start, step,
                                                                budget.refine_iters);
        const double v = objective(refined);
        if (v < best) {
            best = v;
            best_x = refined;
        }
    }
    return best;
}

}  // namespace

double discord_oracle(const DensityMatrix& rho, DistanceKind kind, ClassicalSet set,
                      const OracleBudget& budget, std::uint64_t seed) {
    if (budget.basis_grid < 4) fail(Errc::BudgetTooSmall, "basis_grid must be >= 4");
    if (budget.prob_grid < 2) fail(Errc::BudgetTooSmall, "prob_grid must be >= 2");
    if (budget.refine_iters < 1) fail(Errc::BudgetTooSmall, "refine_iters must be >= 1");
    const RhoCtx ctx = make_ctx(rho, kind);
    return set == ClassicalSet::CC ? oracle_cc(ctx, budget, seed) : oracle_cq(ctx, budget, seed);
}

// ---------------------------------------------------------------------------
// Separable-set oracle
// ---------------------------------------------------------------------------

namespace {

constexpr int kProducts = 6;

// Parameter layout: 6 weights then (theta_a, phi_a, theta_b, phi_b) per product.
double eval_separable(const RhoCtx& ctx, const std::vector<double>& x) {
    std::array<double, kProducts> w{};
    double norm = 0.0;
    for (int i = 0; i < kProducts; ++i) {
        w[i] = std::abs(x[i]);
        norm += w[i];
    }
    if (norm <= 0.0) return std::numeric_limits<double>::infinity();
    ComplexMat sigma(4);
    for (int i = 0; i < kProducts; ++i) {
        if (w[i] == 0.0) continue;
        const double ta = std::clamp(x[kProducts + 4 * i + 0], 0.0, std::numbers::pi);
        const double pa = x[kProducts + 4 * i + 1];
        const double tb = std::clamp(x[kProducts + 4 * i + 2], 0.0, std::numbers::pi);
        const double pb = x[kProducts + 4 * i + 3];
        const auto ket = kron_ket(ket_from_bloch(bloch_from_angles(ta, pa)),
                                  ket_from_bloch(bloch_from_angles(tb, pb)));
        const double weight = w[i] / norm;
        ComplexMat term = outer4(ket);
        term *= weight;
        sigma += term;
    }
    return distance_to_candidate(ctx, sigma);
}

void set_product(std::vector<double>& x, int slot, double weight,
                 const std::array<double, 3>& a, const std::array<double, 3>& b) {
    x[slot] = weight;
    x[kProducts + 4 * slot + 0] = std::acos(std::clamp(a[2], -1.0, 1.0));
    x[kProducts + 4 * slot + 1] = std::atan2(a[1], a[0]);
    x[kProducts + 4 * slot + 2] = std::acos(std::clamp(b[2], -1.0, 1.0));
    x[kProducts + 4 * slot + 3] = std::atan2(b[1], b[0]);
}

std::vector<double> start_from_products(
    const std::vector<std::tuple<double, std::array<double, 3>, std::array<double, 3>>>& prods) {
    std::vector<double> x(kProducts + 4 * kProducts, 0.0);
    for (std::size_t i = 0; i < prods.size() && i < kProducts; ++i)
        set_product(x, static_cast<int>(i), std::get<0>(prods[i]), std::get<1>(prods[i]),
                    std::get<2>(prods[i]));
    return x;
}

// Exact four-product decomposition of a separable Bell-diagonal state: with
// orthogonal sign patterns X_j and component vectors a, b satisfying
// a_k b_k = c_k, ||a|| = ||b|| = 1, the uniform mixture of
// |a o X_j> (x) |b o X_j> reproduces the BD state. Such (a, b) exist exactly
// when sum |c_k| <= 1.
std::optional<std::vector<double>> bd_separable_start(const BDTriple& c_in) {
    std::array<double, 3> c = {c_in.c1, c_in.c2, c_in.c3};
    const double total = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
    if (total < 1e-14) return std::nullopt;  // maximally mixed; other seeds cover it
    if (total > 1.0)
        for (double& ck : c) ck /= total;  // octahedron surface projection

    auto gval = [&](const std::array<double, 3>& p) {
        double g = 0.0;
        for (int k = 0; k < 3; ++k) {
            if (std::abs(c[k]) < 1e-15) continue;
            if (p[k] <= 0.0) return std::numeric_limits<double>::infinity();
            g += c[k] * c[k] / p[k];
        }
        return g;
    };

    const double s = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
    std::array<double, 3> p_lo = {std::abs(c[0]) / s, std::abs(c[1]) / s, std::abs(c[2]) / s};
    // g(p_lo) = s^2 <= 1; push toward the dominant axis until g crosses 1.
    int m = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(c[k]) > std::abs(c[m])) m = k;
    std::array<double, 3> p_hi{};
    p_hi[m] = 1.0;

    double t_lo = 0.0, t_hi = 1.0;
    auto interp = [&](double t) {
        std::array<double, 3> p;
        for (int k = 0; k < 3; ++k) p[k] = (1.0 - t) * p_lo[k] + t * p_hi[k];
        return p;
    };
    if (gval(p_lo) > 1.0) return std::nullopt;  // only from roundoff at the boundary
    for (int i = 0; i < 200; ++i) {
        const double t = 0.5 * (t_lo + t_hi);
        if (gval(interp(t)) <= 1.0)
            t_lo = t;
        else
            t_hi = t;
    }
    const std::array<double, 3> p = interp(t_lo);

    std::array<double, 3> a, b;
    for (int k = 0; k < 3; ++k) {
        a[k] = std::sqrt(std::max(0.0, p[k]));
        b[k] = a[k] > 1e-12 ? c[k] / a[k] : 0.0;
    }
    const int signs[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<std::tuple<double, std::array<double, 3>, std::array<double, 3>>> prods;
    for (const auto& sg : signs) {
        std::array<double, 3> av, bv;
        for (int k = 0; k < 3; ++k) {
            av[k] = sg[k] * a[k];
            bv[k] = sg[k] * b[k];
        }
        // normalize away roundoff
        auto fix = [](std::array<double, 3>& v) {
            const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (n > 1e-12)
                for (double& vi : v) vi /= n;
            else
                v = {0.0, 0.0, 1.0};
        };
        fix(av);
        fix(bv);
        prods.emplace_back(0.25, av, bv);
    }
    return start_from_products(prods);
}

}  // namespace

double separable_oracle(const DensityMatrix& rho, DistanceKind kind, int samples,
                        std::uint64_t seed) {
    if (samples < 1) fail(Errc::InvalidParam, "samples must be >= 1");
    const RhoCtx ctx = make_ctx(rho, kind);

    const std::array<double, 3> xp = {1.0, 0.0, 0.0};
    const std::array<double, 3> xm = {-1.0, 0.0, 0.0};
    const std::array<double, 3> zp = {0.0, 0.0, 1.0};
    const std::array<double, 3> zm = {0.0, 0.0, -1.0};
    const double t3 = 1.0 / std::sqrt(3.0);
    const std::array<std::array<double, 3>, 4> tetra = {{{t3, t3, t3},
                                                         {t3, -t3, -t3},
                                                         {-t3, t3, -t3},
                                                         {-t3, -t3, t3}}};

    std::vector<std::vector<double>> starts;
    starts.push_back(start_from_products(
        {{0.25, zp, zp}, {0.25, zp, zm}, {0.25, zm, zp}, {0.25, zm, zm}}));
    starts.push_back(start_from_products(
        {{0.25, xp, xp}, {0.25, xp, xm}, {0.25, xm, xp}, {0.25, xm, xm}}));
    {
        std::vector<std::tuple<double, std::array<double, 3>, std::array<double, 3>>> aligned,
            anti;
        for (const auto& n : tetra) {
            aligned.emplace_back(0.25, n, n);
            anti.emplace_back(0.25, n, std::array<double, 3>{-n[0], -n[1], -n[2]});
        }
        starts.push_back(start_from_products(aligned));
        starts.push_back(start_from_products(anti));
    }
    if (auto bd = bd_separable_start(density_to_bd(rho))) starts.push_back(std::move(*bd));

    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(i));
        std::vector<double> x(kProducts + 4 * kProducts, 0.0);
        for (int k = 0; k < kProducts; ++k) {
            x[k] = sub.next_double() + 0.05;
            x[kProducts + 4 * k + 0] = sub.next_double() * std::numbers::pi;
            x[kProducts + 4 * k + 1] = sub.next_double() * 2.0 * std::numbers::pi;
            x[kProducts + 4 * k + 2] = sub.next_double() * std::numbers::pi;
            x[kProducts + 4 * k + 3] = sub.next_double() * 2.0 * std::numbers::pi;
        }
        starts.push_back(std::move(x));
    }

    auto objective = [&](const std::vector<double>& x) { return eval_separable(ctx, x); };
    std::vector<double> step(kProducts + 4 * kProducts, 0.15);
    for (int k = 0; k < kProducts; ++k) step[k] = 0.08;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        const double direct = objective(start);
        best = std::min(best, direct);
        const std::vector<double> refined = detail::nelder_mead(objective, start, step, 400);
        best = std::min(best, objective(refined));
    }
    return best;
}

std::string closest_classical_json(const ClosestClassicalResult& r) {
    nlohmann::json j;
    j["kind"] = std::string(kind_name(r.kind));
    j["k"] = r.axis;
    j["s"] = r.s;
    j["value"] = r.value;
    j["bona_fide"] = r.bona_fide;
    nlohmann::json ties = nlohmann::json::array();
    for (const auto& [axis, s] : r.ties) ties.push_back({{"k", axis}, {"s", s}});
    j["ties"] = ties;
    return j.dump();
}

}  // namespace qcorr
