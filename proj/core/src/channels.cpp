#include "qcorr/channels.hpp"

#include <cmath>

#include "qcorr/rng.hpp"

#include <json.hpp>

namespace qcorr {

namespace {

constexpr double kCompletenessTol = 1e-12;

void require_complete(const KrausChannel& ch) {
    const double res = completeness_residual(ch);
    if (res > kCompletenessTol)
        fail(Errc::IncompleteKrausSet,
             "Kraus completeness residual " + std::to_string(res) + " in channel " + ch.label);
}

// Bell kets in the computational basis |00>,|01>,|10>,|11>.
std::array<cplx, 4> bell_ket(int which) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (which) {
        case 0: return {s, 0.0, 0.0, s};    // Phi+
        case 1: return {s, 0.0, 0.0, -s};   // Phi-
        case 2: return {0.0, s, s, 0.0};    // Psi+
        case 3: return {0.0, s, -s, 0.0};   // Psi-
    }
    fail(Errc::InvalidParam, "Bell index");
}

}  // namespace

double completeness_residual(const KrausChannel& ch) {
    ComplexMat sum(4);
    for (const auto& k : ch.kraus) sum += k.adjoint() * k;
    return max_abs_diff(sum, ComplexMat::identity(4));
}

DensityMatrix apply_kraus(const KrausChannel& ch, const DensityMatrix& rho) {
    require_complete(ch);
    ComplexMat out(4);
    for (const auto& k : ch.kraus) out += k * rho.mat() * k.adjoint();
    return DensityMatrix(out.hermitized());
}

DecoherenceParams decoherence_from_rate(int axis, double gamma, double t) {
    if (axis < 1 || axis > 3) fail(Errc::InvalidAxis, "noise axis must be 1, 2 or 3");
    if (gamma < 0.0 || t < 0.0) fail(Errc::InvalidParam, "gamma and t must be nonnegative");
    DecoherenceParams p;
    p.axis = axis;
    p.survival = std::exp(-gamma * t);
    p.gamma = gamma;
    p.time = t;
    return p;
}

DecoherenceParams decoherence_from_survival(int axis, double r) {
    if (axis < 1 || axis > 3) fail(Errc::InvalidAxis, "noise axis must be 1, 2 or 3");
    if (r < 0.0 || r > 1.0) fail(Errc::InvalidParam, "survival factor must lie in [0,1]");
    DecoherenceParams p;
    p.axis = axis;
    p.survival = r;
    return p;
}

KrausChannel local_decoherence(const DecoherenceParams& params) {
    if (params.axis < 1 || params.axis > 3)
        fail(Errc::InvalidAxis, "noise axis must be 1, 2 or 3");
    if (params.survival < 0.0 || params.survival > 1.0)
        fail(Errc::InvalidParam, "survival factor must lie in [0,1]");
    if (params.gamma && params.time) {
        const double expected = std::exp(-(*params.gamma) * (*params.time));
        if (std::abs(expected - params.survival) > 1e-12)
            fail(Errc::InvalidParam, "survival factor inconsistent with gamma*t");
    }
    const double r = params.survival;
    ComplexMat k_noise = std::sqrt((1.0 - r) / 2.0) * pauli(params.axis);
    ComplexMat k_id = std::sqrt((1.0 + r) / 2.0) * ComplexMat::identity(2);

    KrausChannel ch;
    ch.label = "LD" + std::to_string(params.axis) + "(r=" + std::to_string(r) + ")";
    ch.kraus = {tensor2(k_id, k_id), tensor2(k_id, k_noise), tensor2(k_noise, k_id),
                tensor2(k_noise, k_noise)};
    return ch;
}

BDTriple evolve_triple(const BDTriple& c0, const DecoherenceParams& params) {
    if (params.axis < 1 || params.axis > 3)
        fail(Errc::InvalidAxis, "noise axis must be 1, 2 or 3");
    const double decay = params.survival * params.survival;  // e^{-2 gamma t}
    BDTriple c = c0;
    double* comps[3] = {&c.c1, &c.c2, &c.c3};
    for (int i = 1; i <= 3; ++i)
        if (i != params.axis) *comps[i - 1] *= decay;
    return c;
}

KrausChannel global_rephasing(double q) {
    if (q < -1.0 || q > 1.0) fail(Errc::OutOfRangeQ, "q must lie in [-1,1]");
    // K_{i,+-} = sqrt((1 +- q)/2) |Bell_i><comp_i| with the Bell state sharing
    // the computational state's parity sector.
    const int bell_for_comp[4][2] = {{0, 1}, {2, 3}, {2, 3}, {0, 1}};
    KrausChannel ch;
    ch.label = "GR3(q=" + std::to_string(q) + ")";
    for (int comp = 0; comp < 4; ++comp) {
        for (int pm = 0; pm < 2; ++pm) {
            const double w = std::sqrt((pm == 0 ? 1.0 + q : 1.0 - q) / 2.0);
            const auto bell = bell_ket(bell_for_comp[comp][pm]);
            ComplexMat k(4);
            for (int r = 0; r < 4; ++r) k(r, comp) = w * bell[r];
            ch.kraus.push_back(std::move(k));
        }
    }
    return ch;
}

ComplexMat named_unitary(NamedUnitary name) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i1(0.0, 1.0);
    // (I + i sigma_y)/sqrt(2) and i (I - i sigma_y)/sqrt(2)
    ComplexMat r_plus(2, {s, s, -s, s});
    ComplexMat r_minus(2, {i1 * s, -i1 * s, i1 * s, i1 * s});
    switch (name) {
        case NamedUnitary::U:
        case NamedUnitary::UPlus: return tensor2(r_plus, r_plus);
        case NamedUnitary::UMinus: return tensor2(r_minus, r_plus);
        case NamedUnitary::Ux: return pauli2(1, 1);
        case NamedUnitary::Uy: return pauli2(2, 2);
        case NamedUnitary::Uz: return pauli2(3, 3);
    }
    fail(Errc::UnknownName, "unitary name");
}

DensityMatrix named_unitary_conjugation(NamedUnitary name, const DensityMatrix& rho) {
    const ComplexMat u = named_unitary(name);
    return DensityMatrix((u * rho.mat() * u.adjoint()).hermitized());
}

std::optional<NamedUnitary> parse_unitary_name(std::string_view name) {
    if (name == "U") return NamedUnitary::U;
    if (name == "U+") return NamedUnitary::UPlus;
    if (name == "U-") return NamedUnitary::UMinus;
    if (name == "Ux") return NamedUnitary::Ux;
    if (name == "Uy") return NamedUnitary::Uy;
    if (name == "Uz") return NamedUnitary::Uz;
    return std::nullopt;
}

KrausChannel random_cptp(std::uint64_t seed, int kraus_count) {
    if (kraus_count < 1 || kraus_count > 16)
        fail(Errc::InvalidParam, "kraus_count must be 1..16");
    Rng rng(seed);
    const int rows = 4 * kraus_count;
    // Four Gaussian columns of length 4*count, orthonormalized twice.
    std::vector<std::array<cplx, 4>> v(rows);
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < rows; ++r) v[r][c] = rng.next_complex_gaussian();
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < 4; ++c) {
            for (int prev = 0; prev < c; ++prev) {
                cplx overlap = 0.0;
                for (int r = 0; r < rows; ++r) overlap += std::conj(v[r][prev]) * v[r][c];
                for (int r = 0; r < rows; ++r) v[r][c] -= overlap * v[r][prev];
            }
            double norm = 0.0;
            for (int r = 0; r < rows; ++r) norm += std::norm(v[r][c]);
            norm = std::sqrt(norm);
            for (int r = 0; r < rows; ++r) v[r][c] /= norm;
        }
    }
    KrausChannel ch;
    ch.label = "random(seed=" + std::to_string(seed) + ",n=" + std::to_string(kraus_count) + ")";
    for (int k = 0; k < kraus_count; ++k) {
        ComplexMat m(4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m(r, c) = v[4 * k + r][c];
        ch.kraus.push_back(std::move(m));
    }
    return ch;
}

KrausChannel trace_out_b_reset() {
    KrausChannel ch;
    ch.label = "trace-out-B-reset";
    for (int j = 0; j < 2; ++j) {
        ComplexMat e(2);
        e(0, j) = 1.0;  // |0><j| on B
        ch.kraus.push_back(tensor2(ComplexMat::identity(2), e));
    }
    return ch;
}

CptpReport validate_cptp(const KrausChannel& ch) {
    CptpReport rep;
    rep.completeness_residual = completeness_residual(ch);
    ComplexMat choi(16);
    for (const auto& k : ch.kraus) {
        // Choi += w w^dagger with w = sum_i |i> (x) K|i>, i.e. w[4i+r] = K[r][i].
        std::array<cplx, 16> w{};
        for (int i = 0; i < 4; ++i)
            for (int r = 0; r < 4; ++r) w[4 * i + r] = k(r, i);
        for (int a = 0; a < 16; ++a)
            for (int b = 0; b < 16; ++b) choi(a, b) += w[a] * std::conj(w[b]);
    }
    rep.choi_min_eigenvalue = eigvals_hermitian(choi.hermitized()).front();
    return rep;
}

std::string channel_json(const KrausChannel& ch) {
    nlohmann::json j;
    j["label"] = ch.label;
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& k : ch.kraus) {
        nlohmann::json op = nlohmann::json::array();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                op.push_back({k(r, c).real(), k(r, c).imag()});
        ops.push_back(op);
    }
    j["kraus"] = ops;
    return j.dump();
}

}  // namespace qcorr
