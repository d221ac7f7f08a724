#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qcorr/states.hpp"

namespace qcorr {

enum class DistanceKind { Trace, BuresSquared, HellingerSquared, RelativeEntropy, HilbertSchmidtSquared };

// HilbertSchmidtSquared is the one functional that fails contractivity.
bool is_bona_fide(DistanceKind kind);
// Relative entropy is the one asymmetric functional; argument order is
// distance(kind, state, reference).
bool is_symmetric(DistanceKind kind);
std::string_view kind_name(DistanceKind kind);
std::optional<DistanceKind> parse_kind(std::string_view name);
std::span<const DistanceKind> all_kinds();
std::span<const DistanceKind> bona_fide_kinds();

// Distance between two-qubit states. Trace carries the conventional 1/2
// factor; Bures and Hellinger are the squared distances; relative entropy is
// in nats and returns +inf when supp(rho) is not contained in supp(sigma).
double distance(DistanceKind kind, const DensityMatrix& rho, const DensityMatrix& sigma);

// Same functionals for commuting states given their shared-eigenbasis
// spectra (used for Bell-diagonal pairs).
double distance_bell(DistanceKind kind, const std::array<double, 4>& lam,
                     const std::array<double, 4>& mu);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0,1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

enum class Axiom { Contractivity, TranspositionInvariance, JointConvexity };

std::string_view axiom_name(Axiom axiom);
std::optional<Axiom> parse_axiom(std::string_view name);

struct AxiomWitness {
    int sample_index = -1;
    std::uint64_t sample_seed = 0;
    double violation = 0.0;
    std::string detail_json;  // offending states plus channel/mixing data
};

struct AxiomProbeReport {
    Axiom axiom = Axiom::Contractivity;
    DistanceKind kind = DistanceKind::Trace;
    int samples = 0;
    double max_violation = 0.0;  // signed; <= 0 means the axiom held
    std::optional<AxiomWitness> witness;
};

// Samples seeded random state pairs/quadruples, CPTP channels and mixing
// weights, and records the maximum signed violation of the axiom. A witness
// is attached when the violation exceeds 1e-9. Deterministic per seed.
AxiomProbeReport probe_axiom(DistanceKind kind, Axiom axiom, int samples, std::uint64_t seed);

std::string probe_report_json(const AxiomProbeReport& report);

// The deterministic Hilbert-Schmidt contractivity counterexample:
// Lambda(X) = Tr_B[X] (x) |0><0| acting on (I +- 0.5 sigma_z (x) I)/4 grows
// the unsquared HS distance from 0.5 to sqrt(0.5).
struct HsCounterexample {
    double before_squared = 0.0;
    double after_squared = 0.0;
    double before_unsquared = 0.0;
    double after_unsquared = 0.0;
};

HsCounterexample hs_contractivity_counterexample();

}  // namespace qcorr
