#include "qcorr/distances.hpp"

#include <cmath>
#include <limits>

#include "qcorr/channels.hpp"
#include "qcorr/rng.hpp"

#include <json.hpp>

namespace qcorr {

namespace {

constexpr double kZeroEig = 1e-12;     // eigenvalue treated as zero
constexpr double kSupportMass = 1e-10; // rho-mass on ker(sigma) that trips +inf
constexpr double kWitnessTol = 1e-9;

double clamp0(double x) { return x < 0.0 ? 0.0 : x; }

double relative_entropy(const ComplexMat& rho, const ComplexMat& sigma) {
    const EigDecomposition er = eig_hermitian(rho);
    const EigDecomposition es = eig_hermitian(sigma);
    double s_part = 0.0;
    for (double lam : er.eigenvalues)
        if (lam > kZeroEig) s_part += lam * std::log(lam);

    double cross = 0.0;
    for (int j = 0; j < 4; ++j) {
        // m_j = <v_j| rho |v_j>
        cplx acc = 0.0;
        for (int r = 0; r < 4; ++r) {
            cplx row = 0.0;
            for (int c = 0; c < 4; ++c) row += rho(r, c) * es.eigenvectors(c, j);
            acc += std::conj(es.eigenvectors(r, j)) * row;
        }
        const double mj = clamp0(acc.real());
        const double mu = es.eigenvalues[j];
        if (mu <= kZeroEig) {
            if (mj > kSupportMass) return std::numeric_limits<double>::infinity();
            continue;
        }
        if (mj > 0.0) cross += mj * std::log(mu);
    }
    return clamp0(s_part - cross);
}

double hs_squared(const ComplexMat& d) {
    double s = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) s += std::norm(d(r, c));
    return s;
}

}  // namespace

bool is_bona_fide(DistanceKind kind) { return kind != DistanceKind::HilbertSchmidtSquared; }
bool is_symmetric(DistanceKind kind) { return kind != DistanceKind::RelativeEntropy; }

std::string_view kind_name(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::Trace: return "trace";
        case DistanceKind::BuresSquared: return "bures2";
        case DistanceKind::HellingerSquared: return "hellinger2";
        case DistanceKind::RelativeEntropy: return "relent";
        case DistanceKind::HilbertSchmidtSquared: return "hs2";
    }
    return "?";
}

std::optional<DistanceKind> parse_kind(std::string_view name) {
    for (DistanceKind k : all_kinds())
        if (name == kind_name(k)) return k;
    return std::nullopt;
}

std::span<const DistanceKind> all_kinds() {
    static const DistanceKind kinds[] = {
        DistanceKind::Trace, DistanceKind::BuresSquared, DistanceKind::HellingerSquared,
        DistanceKind::RelativeEntropy, DistanceKind::HilbertSchmidtSquared};
    return kinds;
}

std::span<const DistanceKind> bona_fide_kinds() {
    static const DistanceKind kinds[] = {DistanceKind::Trace, DistanceKind::BuresSquared,
                                         DistanceKind::HellingerSquared,
                                         DistanceKind::RelativeEntropy};
    return kinds;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const ComplexMat sr = mat_func_psd(rho.mat(), MatFunc::Sqrt);
    const ComplexMat m = (sr * sigma.mat() * sr).hermitized();
    double sum = 0.0;
    for (double eta : eigvals_hermitian(m))
        if (eta > 1e-13) sum += std::sqrt(eta);  // noise-floor values are true zeros
    const double f = sum * sum;
    return f > 1.0 ? 1.0 : f;
}

double distance(DistanceKind kind, const DensityMatrix& rho, const DensityMatrix& sigma) {
    switch (kind) {
        case DistanceKind::Trace:
            return 0.5 * trace_norm((rho.mat() - sigma.mat()).hermitized());
        case DistanceKind::BuresSquared:
            return clamp0(2.0 * (1.0 - std::sqrt(fidelity(rho, sigma))));
        case DistanceKind::HellingerSquared: {
            const ComplexMat sr = mat_func_psd(rho.mat(), MatFunc::Sqrt);
            const ComplexMat ss = mat_func_psd(sigma.mat(), MatFunc::Sqrt);
            return clamp0(2.0 * (1.0 - (sr * ss).trace().real()));
        }
        case DistanceKind::RelativeEntropy:
            return relative_entropy(rho.mat(), sigma.mat());
        case DistanceKind::HilbertSchmidtSquared:
            return hs_squared(rho.mat() - sigma.mat());
    }
    fail(Errc::InvalidParam, "distance kind");
}

double distance_bell(DistanceKind kind, const std::array<double, 4>& lam,
                     const std::array<double, 4>& mu) {
    switch (kind) {
        case DistanceKind::Trace: {
            double s = 0.0;
            for (int i = 0; i < 4; ++i) s += std::abs(lam[i] - mu[i]);
            return 0.5 * s;
        }
        case DistanceKind::BuresSquared:
        case DistanceKind::HellingerSquared: {
            // For commuting states the affinity equals the root fidelity.
            double aff = 0.0;
            for (int i = 0; i < 4; ++i) aff += std::sqrt(clamp0(lam[i]) * clamp0(mu[i]));
            return clamp0(2.0 * (1.0 - aff));
        }
        case DistanceKind::RelativeEntropy: {
            double s = 0.0;
            for (int i = 0; i < 4; ++i) {
                if (lam[i] <= kZeroEig) continue;
                if (mu[i] <= kZeroEig) return std::numeric_limits<double>::infinity();
                s += lam[i] * (std::log(lam[i]) - std::log(mu[i]));
            }
            return clamp0(s);
        }
        case DistanceKind::HilbertSchmidtSquared: {
            double s = 0.0;
            for (int i = 0; i < 4; ++i) s += (lam[i] - mu[i]) * (lam[i] - mu[i]);
            return s;
        }
    }
    fail(Errc::InvalidParam, "distance kind");
}

std::string_view axiom_name(Axiom axiom) {
    switch (axiom) {
        case Axiom::Contractivity: return "contractivity";
        case Axiom::TranspositionInvariance: return "transposition_invariance";
        case Axiom::JointConvexity: return "joint_convexity";
    }
    return "?";
}

std::optional<Axiom> parse_axiom(std::string_view name) {
    for (Axiom a : {Axiom::Contractivity, Axiom::TranspositionInvariance, Axiom::JointConvexity})
        if (name == axiom_name(a)) return a;
    return std::nullopt;
}

namespace {

nlohmann::json matrix_json(const ComplexMat& m) {
    nlohmann::json j = nlohmann::json::array();
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) j.push_back({m(r, c).real(), m(r, c).imag()});
    return j;
}

// Ranks cycle with the sample index; relative-entropy reference states stay
// full rank so sampled distances remain finite.
DensityMatrix sample_state(Rng& rng, DistanceKind kind, int index, bool reference) {
    const int rank = (kind == DistanceKind::RelativeEntropy && reference) ? 4 : 1 + (index % 4);
    return random_density(rng.next_u64(), rank);
}

}  // namespace

AxiomProbeReport probe_axiom(DistanceKind kind, Axiom axiom, int samples, std::uint64_t seed) {
    if (samples < 1) fail(Errc::InvalidParam, "samples must be >= 1");
    AxiomProbeReport rep;
    rep.axiom = axiom;
    rep.kind = kind;
    rep.samples = samples;
    rep.max_violation = -std::numeric_limits<double>::infinity();

    Rng base(seed);
    for (int i = 0; i < samples; ++i) {
        Rng rng = base.substream(static_cast<std::uint64_t>(i));
        const std::uint64_t sample_seed = rng.next_u64();
        rng = Rng(sample_seed);

        double violation = 0.0;
        nlohmann::json detail;
        switch (axiom) {
            case Axiom::Contractivity: {
                const DensityMatrix rho = sample_state(rng, kind, i, false);
                const DensityMatrix sig = sample_state(rng, kind, i + 1, true);
                const int n_kraus = 1 + static_cast<int>(rng.next_u64() % 8);
                const KrausChannel ch = random_cptp(rng.next_u64(), n_kraus);
                const double before = distance(kind, rho, sig);
                if (!std::isfinite(before)) continue;  // nothing to contract
                const double after = distance(kind, apply_kraus(ch, rho), apply_kraus(ch, sig));
                violation = after - before;
                if (violation > kWitnessTol) {
                    detail["rho"] = matrix_json(rho.mat());
                    detail["sigma"] = matrix_json(sig.mat());
                    detail["channel"] = nlohmann::json::parse(channel_json(ch));
                    detail["before"] = before;
                    detail["after"] = after;
                }
                break;
            }
            case Axiom::TranspositionInvariance: {
                const DensityMatrix rho = sample_state(rng, kind, i, false);
                const DensityMatrix sig = sample_state(rng, kind, i + 1, true);
                const double plain = distance(kind, rho, sig);
                if (!std::isfinite(plain)) continue;
                const double transposed =
                    distance(kind, DensityMatrix(rho.mat().transpose()),
                             DensityMatrix(sig.mat().transpose()));
                violation = std::abs(transposed - plain);
                if (violation > kWitnessTol) {
                    detail["rho"] = matrix_json(rho.mat());
                    detail["sigma"] = matrix_json(sig.mat());
                    detail["plain"] = plain;
                    detail["transposed"] = transposed;
                }
                break;
            }
            case Axiom::JointConvexity: {
                const DensityMatrix rho = sample_state(rng, kind, i, false);
                const DensityMatrix sig = sample_state(rng, kind, i + 1, false);
                const DensityMatrix tau = sample_state(rng, kind, i + 2, true);
                const DensityMatrix var = sample_state(rng, kind, i + 3, true);
                const double q = rng.next_double();
                const double dr = distance(kind, rho, tau);
                const double ds = distance(kind, sig, var);
                if (!std::isfinite(dr) || !std::isfinite(ds)) continue;
                ComplexMat left = rho.mat();
                left *= q;
                ComplexMat tmp = sig.mat();
                tmp *= (1.0 - q);
                left += tmp;
                ComplexMat right = tau.mat();
                right *= q;
                tmp = var.mat();
                tmp *= (1.0 - q);
                right += tmp;
                const double mixed = distance(kind, DensityMatrix(left), DensityMatrix(right));
                violation = mixed - (q * dr + (1.0 - q) * ds);
                if (violation > kWitnessTol) {
                    detail["q"] = q;
                    detail["rho"] = matrix_json(rho.mat());
                    detail["sigma"] = matrix_json(sig.mat());
                    detail["tau"] = matrix_json(tau.mat());
                    detail["varsigma"] = matrix_json(var.mat());
                    detail["mixed"] = mixed;
                    detail["convex_bound"] = q * dr + (1.0 - q) * ds;
                }
                break;
            }
        }

        if (violation > rep.max_violation) {
            rep.max_violation = violation;
            if (violation > kWitnessTol) {
                AxiomWitness w;
                w.sample_index = i;
                w.sample_seed = sample_seed;
                w.violation = violation;
                w.detail_json = detail.dump();
                rep.witness = std::move(w);
            }
        }
    }
    if (!std::isfinite(rep.max_violation)) rep.max_violation = 0.0;
    if (rep.witness && rep.max_violation <= kWitnessTol) rep.witness.reset();
    return rep;
}

std::string probe_report_json(const AxiomProbeReport& report) {
    nlohmann::json j;
    j["axiom"] = std::string(axiom_name(report.axiom));
    j["kind"] = std::string(kind_name(report.kind));
    j["samples"] = report.samples;
    j["max_violation"] = report.max_violation;
    if (report.witness) {
        nlohmann::json w;
        w["sample_index"] = report.witness->sample_index;
        w["sample_seed"] = report.witness->sample_seed;
        w["violation"] = report.witness->violation;
        w["detail"] = nlohmann::json::parse(report.witness->detail_json);
        j["witness"] = w;
    }
    return j.dump();
}

HsCounterexample hs_contractivity_counterexample() {
    ComplexMat plus = ComplexMat::identity(4) + 0.5 * pauli2(3, 0);
    plus *= 0.25;
    ComplexMat minus = ComplexMat::identity(4) - 0.5 * pauli2(3, 0);
    minus *= 0.25;
    const DensityMatrix rho(plus);
    const DensityMatrix sig(minus);
    const KrausChannel ch = trace_out_b_reset();

    HsCounterexample out;
    out.before_squared = distance(DistanceKind::HilbertSchmidtSquared, rho, sig);
    out.after_squared = distance(DistanceKind::HilbertSchmidtSquared, apply_kraus(ch, rho),
                                 apply_kraus(ch, sig));
    out.before_unsquared = std::sqrt(out.before_squared);
    out.after_unsquared = std::sqrt(out.after_squared);
    return out;
}

}  // namespace qcorr
