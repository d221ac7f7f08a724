#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/geometry.hpp"

namespace qcorr {

// Freezing-surface point for the phase-flip channel: {c1, -c1 c3, c3}.
struct SurfacePoint {
    BDTriple triple;
    bool strict = false;  // |c1| > |c3|
};

SurfacePoint freezing_surface_point(double c1, double c3);

// Sudden-change time t* = -(1/2 gamma) ln(|c3|/|c1|). Undefined when either
// coefficient is zero.
double threshold_time(double c1, double c3, double gamma);

// Decay exponent Gamma(t) replacing 2*gamma*t, supplied as a two-column
// (t, Gamma) table with linear interpolation. Must start at (0, 0) and be
// nondecreasing. The final slope extends beyond the last knot.
class RateTable {
  public:
    static RateTable from_points(std::vector<std::pair<double, double>> points);
    static RateTable load_csv(std::istream& in);

    double operator()(double t) const;
    // Smallest t with Gamma(t) = target, if reachable.
    std::optional<double> invert(double target) const;

  private:
    std::vector<std::pair<double, double>> pts_;
};

struct Trajectory {
    double gamma = 1.0;
    int axis = 3;
    std::vector<double> times;            // ascending, includes 0 and t_max
    std::vector<BDTriple> triples;
    std::map<DistanceKind, std::vector<double>> q_values;
    std::vector<double> e_bures;
    std::optional<double> t_star;         // set when the start lies on the surface
    bool initial_classical = false;
    bool on_surface = false;
};

// Evolves c0 under the axis-k decoherence channel over a uniform grid of
// `steps` points on [0, t_max] (t* is inserted as an extra exact grid point
// when defined), computing per-step discord for every requested kind and the
// Bures entanglement.
Trajectory run_trajectory(const BDTriple& c0, double gamma, int axis, double t_max, int steps,
                          const std::vector<DistanceKind>& kinds,
                          const RateTable* rate = nullptr);

struct PlateauInterval {
    double t_begin = 0.0;
    double t_end = 0.0;
    double value = 0.0;
};

struct FreezingReport {
    double plateau_value = 0.0;
    double plateau_end = 0.0;        // last grid time of the initial plateau
    double t_star_analytic = 0.0;    // NaN when undefined
    bool sudden_change_detected = false;
    double max_plateau_deviation = 0.0;
    bool classical = false;
    std::vector<PlateauInterval> plateaus;  // every maximal constant interval
};

FreezingReport detect_freezing(const Trajectory& traj, DistanceKind kind, double tol);

struct Theorem1Report {
    DistanceKind kind = DistanceKind::Trace;
    int grid_n = 0;
    double max_dev_eq21 = 0.0;
    double max_dev_eq22 = 0.0;
};

// Evaluates both translational-invariance identities on a grid_n x grid_n
// grid of (c1, c3) in [-0.95, 0.95]^2 through the full matrix distance path.
Theorem1Report verify_theorem1(DistanceKind kind, int grid_n);

struct ClosestClassicalCheckReport {
    DistanceKind kind = DistanceKind::Trace;
    int grid_n = 0;
    bool exempt = false;              // non-bona-fide kinds are informational
    bool axis_prediction_ok = true;   // predicted axis index attained
    double max_pinning_error = 0.0;   // max |s - c_k| at strict grid points
    double lemma1_min_margin = 0.0;   // >= -1e-10 required
    double lemma2_min_margin = 0.0;
    double lemma3_max_gap = 0.0;      // <= 1e-10 required
    double lemma4_min_step = 0.0;     // >= -1e-10 required
    double oracle_max_gap = 0.0;      // max |oracle - axis value|
    double oracle_min_signed_gap = 0.0;  // min (oracle - axis value)
    bool pass = false;
};

// Runs the axis-theorem property suite (pinning, lemma dominance and
// monotonicity checks, CC-oracle agreement) on the freezing-surface grid.
ClosestClassicalCheckReport verify_closest_classical(DistanceKind kind, int grid_n,
                                                     const OracleBudget& budget,
                                                     std::uint64_t seed);

// CSV schema:
// t,c1,c2,c3,Q_trace,Q_bures2,Q_hellinger2,Q_relent,Q_hs2,E_bures2,regime
// preceded by '#' header comments and followed by a '#' JSON footer with the
// per-kind freezing reports. Floats carry 12 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::string& header_json,
                          const std::map<DistanceKind, FreezingReport>& reports);

std::string freezing_report_json(const FreezingReport& r);
std::string theorem1_report_json(const Theorem1Report& r);
std::string closest_classical_report_json(const ClosestClassicalCheckReport& r);

}  // namespace qcorr
