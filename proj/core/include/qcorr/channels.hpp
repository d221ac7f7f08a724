#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/states.hpp"

namespace qcorr {

// CPTP map in operator-sum form on two qubits.
struct KrausChannel {
    std::vector<ComplexMat> kraus;  // 4x4 operators
    std::string label;
};

// max-abs residual of sum K^dagger K - I.
double completeness_residual(const KrausChannel& ch);

DensityMatrix apply_kraus(const KrausChannel& ch, const DensityMatrix& rho);

// Local non-dissipative decoherence along one Pauli axis. Parametrized by
// the survival factor r = e^{-gamma t}; gamma and t are kept only for
// reporting when supplied.
struct DecoherenceParams {
    int axis = 3;         // 1 = bit flip, 2 = bit-phase flip, 3 = phase flip
    double survival = 1.0;  // r = e^{-gamma t} in [0, 1]
    std::optional<double> gamma;
    std::optional<double> time;
};

DecoherenceParams decoherence_from_rate(int axis, double gamma, double t);
DecoherenceParams decoherence_from_survival(int axis, double r);

// The four nonzero product Kraus operators of the two-qubit channel.
KrausChannel local_decoherence(const DecoherenceParams& params);

// Closed-form Bloch-triple action of local_decoherence: the component along
// the noise axis survives, the other two shrink by r^2 = e^{-2 gamma t}.
BDTriple evolve_triple(const BDTriple& c0, const DecoherenceParams& params);

// Global two-qubit rephasing channel: eight Kraus operators mapping any
// state to the Bell-diagonal triple {q, -q T33, T33}.
KrausChannel global_rephasing(double q);

enum class NamedUnitary { U, UPlus, UMinus, Ux, Uy, Uz };

ComplexMat named_unitary(NamedUnitary name);
DensityMatrix named_unitary_conjugation(NamedUnitary name, const DensityMatrix& rho);
std::optional<NamedUnitary> parse_unitary_name(std::string_view name);

// Seeded random CPTP map via an orthonormalized Gaussian Stinespring block
// column; deterministic per seed.
KrausChannel random_cptp(std::uint64_t seed, int kraus_count);

// Lambda(X) = Tr_B[X] (x) |0><0|; the standard contractivity counterexample
// channel for the Hilbert-Schmidt distance.
KrausChannel trace_out_b_reset();

struct CptpReport {
    double completeness_residual = 0.0;
    double choi_min_eigenvalue = 0.0;
};

// Builds the 16x16 Choi matrix sum_ij |i><j| (x) Lambda(|i><j|) and reports
// its minimum eigenvalue together with the completeness residual.
CptpReport validate_cptp(const KrausChannel& ch);

std::string channel_json(const KrausChannel& ch);

}  // namespace qcorr
