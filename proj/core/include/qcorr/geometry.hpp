#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/distances.hpp"

namespace qcorr {

// Closest Bell-diagonal classical state to a BD state: axis k, coefficient
// s, and the attained distance. When the within-axis minimizer set is a flat
// interval (the trace distance does this), s is the interval midpoint, which
// is the canonical representative the axis theorems predict. Axes whose
// minima tie with the winner are listed in `ties`.
struct ClosestClassicalResult {
    int axis = 1;
    double s = 0.0;
    double value = 0.0;
    DistanceKind kind = DistanceKind::Trace;
    bool bona_fide = true;
    std::vector<std::pair<int, double>> ties;  // (axis, s) including the winner when tied
};

ClosestClassicalResult closest_classical_axis(const BDTriple& c, DistanceKind kind);

// Geometric discord: the axis minimum. Equals the infimum over all classical
// states for bona fide kinds; for Hilbert-Schmidt it is the axis-restricted
// value (bona_fide flag is false on the result).
double discord_geometric(const BDTriple& c, DistanceKind kind);

struct OracleBudget {
    int basis_grid = 12;
    int prob_grid = 6;
    int refine_iters = 200;
};

enum class ClassicalSet { CC, CQ };

// Brute-force upper bound on the discord infimum: grid over the classical
// set parametrization followed by Nelder-Mead refinement. Independent of the
// axis search so the two can cross-check each other.
double discord_oracle(const DensityMatrix& rho, DistanceKind kind, ClassicalSet set,
                      const OracleBudget& budget, std::uint64_t seed);

// Concurrence from the largest Bell eigenvalue.
double concurrence_bd(const BDTriple& c);
// Spin-flip construction on the full matrix; cross-checks concurrence_bd.
double wootters_concurrence(const DensityMatrix& rho);

// Squared-Bures distance to the separable set via the closed-form maximal
// separable fidelity (1 + sqrt(1 - C^2))/2.
double entanglement_bures_bd(const BDTriple& c);

// Upper bound on the distance to the separable set via minimization over
// explicit mixtures of up to six pure product states.
double separable_oracle(const DensityMatrix& rho, DistanceKind kind, int samples,
                        std::uint64_t seed);

std::string closest_classical_json(const ClosestClassicalResult& r);

namespace detail {

// Derivative-free helpers shared by the oracles; exposed for tests.
double golden_section(double a, double b, double tol, const std::function<double(double)>& f,
                      double* arg_out);
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, const std::vector<double>& step,
                                int max_iters);

}  // namespace detail

}  // namespace qcorr
