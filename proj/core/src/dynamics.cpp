#include "qcorr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qcorr {

namespace {

constexpr double kSurfaceTol = 1e-12;
constexpr double kClassicalTol = 1e-12;
constexpr double kZeroFloor = 1e-12;

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// For noise axis k the surviving coefficient is c_k; the constraint couples
// the decaying pair as c_major * c_k = -c_product. Returns {major, product}.
std::pair<int, int> surface_axes(int axis) {
    switch (axis) {
        case 1: return {3, 2};
        case 2: return {1, 3};
        case 3: return {1, 2};
    }
    fail(Errc::InvalidAxis, "noise axis must be 1, 2 or 3");
}

double component(const BDTriple& c, int idx) {
    switch (idx) {
        case 1: return c.c1;
        case 2: return c.c2;
        case 3: return c.c3;
    }
    fail(Errc::InvalidAxis, "component index");
}

bool is_axis_triple(const BDTriple& c) {
    int nonzero = 0;
    for (int i = 1; i <= 3; ++i)
        if (std::abs(component(c, i)) > kClassicalTol) ++nonzero;
    return nonzero <= 1;
}

nlohmann::json freezing_json_obj(const FreezingReport& r) {
    nlohmann::json j;
    j["plateau_value"] = r.plateau_value;
    j["plateau_end"] = r.plateau_end;
    if (std::isfinite(r.t_star_analytic))
        j["t_star"] = r.t_star_analytic;
    else
        j["t_star"] = nullptr;
    j["sudden_change"] = r.sudden_change_detected;
    j["max_plateau_deviation"] = r.max_plateau_deviation;
    j["classical"] = r.classical;
    nlohmann::json plateaus = nlohmann::json::array();
    for (const auto& p : r.plateaus)
        plateaus.push_back({{"t_begin", p.t_begin}, {"t_end", p.t_end}, {"value", p.value}});
    j["plateaus"] = plateaus;
    return j;
}

}  // namespace

SurfacePoint freezing_surface_point(double c1, double c3) {
    if (std::abs(c1) > 1.0 || std::abs(c3) > 1.0)
        fail(Errc::InvalidTriple, "surface coordinates must lie in [-1,1]");
    SurfacePoint p;
    p.triple = {c1, -c1 * c3, c3};
    p.strict = std::abs(c1) > std::abs(c3);
    return p;
}

double threshold_time(double c1, double c3, double gamma) {
    if (c1 == 0.0 || c3 == 0.0)
        fail(Errc::DegenerateInput, "threshold time undefined when c1 or c3 vanishes");
    if (gamma <= 0.0) fail(Errc::InvalidParam, "gamma must be positive");
    return -std::log(std::abs(c3) / std::abs(c1)) / (2.0 * gamma);
}

RateTable RateTable::from_points(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) fail(Errc::ParseError, "rate table needs at least two points");
    if (std::abs(points.front().first) > 1e-12 || std::abs(points.front().second) > 1e-12)
        fail(Errc::ParseError, "rate table must start at (0, 0)");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].first <= points[i - 1].first)
            fail(Errc::ParseError, "rate table times must increase");
        if (points[i].second < points[i - 1].second - 1e-12)
            fail(Errc::ParseError, "rate table must be nondecreasing");
    }
    RateTable t;
    t.pts_ = std::move(points);
    return t;
}

RateTable RateTable::load_csv(std::istream& in) {
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double t, g;
        if (!(row >> t >> g)) fail(Errc::ParseError, "rate table row: " + line);
        pts.emplace_back(t, g);
    }
    return from_points(std::move(pts));
}

double RateTable::operator()(double t) const {
    if (t <= pts_.front().first) return pts_.front().second;
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        if (t <= pts_[i].first) {
            const auto& [t0, g0] = pts_[i - 1];
            const auto& [t1, g1] = pts_[i];
            return g0 + (g1 - g0) * (t - t0) / (t1 - t0);
        }
    }
    const auto& [t0, g0] = pts_[pts_.size() - 2];
    const auto& [t1, g1] = pts_.back();
    return g1 + (g1 - g0) / (t1 - t0) * (t - t1);
}

std::optional<double> RateTable::invert(double target) const {
    if (target <= pts_.front().second) return pts_.front().first;
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        const auto& [t0, g0] = pts_[i - 1];
        const auto& [t1, g1] = pts_[i];
        if (target <= g1) {
            if (g1 == g0) return t1;
            return t0 + (t1 - t0) * (target - g0) / (g1 - g0);
        }
    }
    const auto& [t0, g0] = pts_[pts_.size() - 2];
    const auto& [t1, g1] = pts_.back();
    const double slope = (g1 - g0) / (t1 - t0);
    if (slope <= 0.0) return std::nullopt;
    return t1 + (target - g1) / slope;
}

Trajectory run_trajectory(const BDTriple& c0, double gamma, int axis, double t_max, int steps,
                          const std::vector<DistanceKind>& kinds, const RateTable* rate) {
    if (!bd_validate(c0).valid)
        fail(Errc::InvalidTriple, "triple outside the Bell-diagonal tetrahedron");
    if (steps < 2) fail(Errc::InvalidParam, "steps must be >= 2");
    if (t_max <= 0.0) fail(Errc::InvalidParam, "t_max must be positive");
    if (gamma <= 0.0) fail(Errc::InvalidParam, "gamma must be positive");
    const auto [major, product] = surface_axes(axis);

    Trajectory traj;
    traj.gamma = gamma;
    traj.axis = axis;
    traj.initial_classical = is_axis_triple(c0);

    const double cm = component(c0, major);
    const double ck = component(c0, axis);
    const double cp = component(c0, product);
    traj.on_surface = std::abs(cp + cm * ck) <= kSurfaceTol;
    if (traj.on_surface && cm != 0.0 && ck != 0.0 && !traj.initial_classical) {
        const double target = std::log(std::abs(cm) / std::abs(ck));
        if (rate) {
            traj.t_star = rate->invert(target);
        } else if (target >= 0.0) {
            traj.t_star = target / (2.0 * gamma);
        }
    }

    traj.times.resize(steps);
    for (int i = 0; i < steps; ++i) traj.times[i] = t_max * i / (steps - 1.0);
    if (traj.t_star && *traj.t_star > 0.0 && *traj.t_star < t_max) {
        traj.times.push_back(*traj.t_star);
        std::sort(traj.times.begin(), traj.times.end());
        traj.times.erase(std::unique(traj.times.begin(), traj.times.end(),
                                     [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                         traj.times.end());
    }

    for (DistanceKind kind : kinds) traj.q_values[kind] = {};
    traj.triples.reserve(traj.times.size());
    traj.e_bures.reserve(traj.times.size());
    for (double t : traj.times) {
        const double exponent = rate ? (*rate)(t) : 2.0 * gamma * t;
        const double factor = std::exp(-exponent);
        BDTriple c = c0;
        double* comps[3] = {&c.c1, &c.c2, &c.c3};
        for (int i = 1; i <= 3; ++i)
            if (i != axis) *comps[i - 1] *= factor;
        traj.triples.push_back(c);
        traj.e_bures.push_back(entanglement_bures_bd(c));
        for (DistanceKind kind : kinds)
            traj.q_values[kind].push_back(discord_geometric(c, kind));
    }
    return traj;
}

FreezingReport detect_freezing(const Trajectory& traj, DistanceKind kind, double tol) {
    const auto it = traj.q_values.find(kind);
    if (it == traj.q_values.end())
        fail(Errc::InvalidParam, "trajectory does not carry the requested kind");
    const std::vector<double>& q = it->second;
    const std::vector<double>& t = traj.times;
    if (q.empty()) fail(Errc::InvalidParam, "empty trajectory");
    const std::size_t n = q.size();

    FreezingReport rep;
    rep.t_star_analytic =
        traj.t_star ? *traj.t_star : std::numeric_limits<double>::quiet_NaN();

    rep.classical = true;
    for (double v : q)
        if (std::abs(v) > 1e-10) rep.classical = false;

    // Every maximal run whose values stay within tol of the run's first value.
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double dev = 0.0;
        while (j + 1 < n && std::abs(q[j + 1] - q[i]) <= tol) {
            ++j;
            dev = std::max(dev, std::abs(q[j] - q[i]));
        }
        if (j > i) rep.plateaus.push_back({t[i], t[j], q[i]});
        if (i == 0) {
            rep.plateau_value = q[0];
            rep.plateau_end = t[j];
            rep.max_plateau_deviation = dev;
            // Sudden change: a plateau of >= 2 points, then a strict drop,
            // then decay that never climbs back above the plateau. Later
            // stalls (non-Markovian rate plateaus) are allowed.
            if (j > i && j + 1 < n) {
                bool dropped = q[j + 1] < q[0] - tol;
                bool never_recovers = true;
                for (std::size_t m = j + 1; m < n; ++m) {
                    if (q[m] > q[0] + tol) never_recovers = false;
                    if (m + 1 < n && q[m] > kZeroFloor && q[m + 1] > q[m] + tol)
                        never_recovers = false;
                }
                rep.sudden_change_detected = dropped && never_recovers && !rep.classical;
            }
        }
        i = (j == i) ? i + 1 : j + 1;
    }
    return rep;
}

Theorem1Report verify_theorem1(DistanceKind kind, int grid_n) {
    if (grid_n < 2) fail(Errc::InvalidParam, "grid_n must be >= 2");
    Theorem1Report rep;
    rep.kind = kind;
    rep.grid_n = grid_n;
    const DensityMatrix origin = bd_to_density({0.0, 0.0, 0.0});
    for (int i = 0; i < grid_n; ++i) {
        const double c1 = -0.95 + 1.9 * i / (grid_n - 1.0);
        for (int j = 0; j < grid_n; ++j) {
            const double c3 = -0.95 + 1.9 * j / (grid_n - 1.0);
            const DensityMatrix surface = bd_to_density({c1, -c1 * c3, c3});
            const DensityMatrix axis1 = bd_to_density({c1, 0.0, 0.0});
            const DensityMatrix axis3 = bd_to_density({0.0, 0.0, c3});
            const double lhs21 = distance(kind, surface, axis1);
            const double rhs21 = distance(kind, axis3, origin);
            const double lhs22 = distance(kind, surface, axis3);
            const double rhs22 = distance(kind, axis1, origin);
            rep.max_dev_eq21 = std::max(rep.max_dev_eq21, std::abs(lhs21 - rhs21));
            rep.max_dev_eq22 = std::max(rep.max_dev_eq22, std::abs(lhs22 - rhs22));
        }
    }
    return rep;
}

ClosestClassicalCheckReport verify_closest_classical(DistanceKind kind, int grid_n,
                                                     const OracleBudget& budget,
                                                     std::uint64_t seed) {
    if (grid_n < 2) fail(Errc::InvalidParam, "grid_n must be >= 2");
    ClosestClassicalCheckReport rep;
    rep.kind = kind;
    rep.grid_n = grid_n;
    rep.exempt = !is_bona_fide(kind);
    rep.lemma1_min_margin = std::numeric_limits<double>::infinity();
    rep.lemma2_min_margin = std::numeric_limits<double>::infinity();
    rep.lemma4_min_step = std::numeric_limits<double>::infinity();
    rep.oracle_min_signed_gap = std::numeric_limits<double>::infinity();

    const DensityMatrix origin = bd_to_density({0.0, 0.0, 0.0});
    auto axis_state = [](int axis, double s) {
        BDTriple c;
        if (axis == 1) c.c1 = s;
        if (axis == 2) c.c2 = s;
        if (axis == 3) c.c3 = s;
        return bd_to_density(c);
    };
    auto clip = [](double m) { return std::min(m, 1e9); };

    int point_index = 0;
    for (int i = 0; i < grid_n; ++i) {
        const double c1 = -0.95 + 1.9 * i / (grid_n - 1.0);
        for (int j = 0; j < grid_n; ++j, ++point_index) {
            const double c3 = -0.95 + 1.9 * j / (grid_n - 1.0);
            const BDTriple c = {c1, -c1 * c3, c3};
            const DensityMatrix rho = bd_to_density(c);
            const ClosestClassicalResult axis = closest_classical_axis(c, kind);

            const bool strict1 = std::abs(c1) > std::abs(c3) + 1e-12;
            const bool strict3 = std::abs(c3) > std::abs(c1) + 1e-12;
            if (strict1 || strict3) {
                const int pred_axis = strict1 ? 1 : 3;
                const double pred_s = strict1 ? c1 : c3;
                bool axis_ok = axis.axis == pred_axis;
                double s_found = axis.s;
                if (!axis_ok) {
                    for (const auto& [k, s] : axis.ties)
                        if (k == pred_axis) {
                            axis_ok = true;
                            s_found = s;
                        }
                }
                if (!axis_ok)
                    rep.axis_prediction_ok = false;
                else
                    rep.max_pinning_error =
                        std::max(rep.max_pinning_error, std::abs(s_found - pred_s));
            }

            // Lemma 1: {c1,0,0} beats every other state on the c1-axis.
            const double d_ref1 = distance(kind, rho, axis_state(1, c1));
            for (int m = 0; m < 21; ++m) {
                const double target = -1.0 + 2.0 * m / 20.0;
                const double d = distance(kind, rho, axis_state(1, target));
                if (std::isfinite(d))
                    rep.lemma1_min_margin = std::min(rep.lemma1_min_margin, d - d_ref1);
            }
            // Lemma 2: the predicted closest axis state beats the whole c2-axis.
            const double d_best =
                std::abs(c1) >= std::abs(c3) ? d_ref1 : distance(kind, rho, axis_state(3, c3));
            for (int m = 0; m < 21; ++m) {
                const double y = -1.0 + 2.0 * m / 20.0;
                const double d = distance(kind, rho, axis_state(2, y));
                if (std::isfinite(d))
                    rep.lemma2_min_margin = std::min(rep.lemma2_min_margin, d - d_best);
            }
            // Lemma 4: distance to the origin grows along each axis ray.
            for (int axis_id : {1, 3}) {
                const double coeff = axis_id == 1 ? c1 : c3;
                double prev = 0.0;
                for (int m = 0; m <= 10; ++m) {
                    const double qfrac = m / 10.0;
                    const double d = distance(kind, axis_state(axis_id, qfrac * coeff), origin);
                    if (m > 0) rep.lemma4_min_step = std::min(rep.lemma4_min_step, d - prev);
                    prev = d;
                }
            }

            const double oracle = discord_oracle(
                rho, kind, ClassicalSet::CC, budget,
                seed + static_cast<std::uint64_t>(point_index) * 0x9E3779B9ull);
            const double gap = oracle - axis.value;
            rep.oracle_max_gap = std::max(rep.oracle_max_gap, std::abs(gap));
            rep.oracle_min_signed_gap = std::min(rep.oracle_min_signed_gap, gap);
        }
    }

    // Lemma 3: equidistance of the two axis rays at equal coefficients.
    for (int i = 0; i < grid_n; ++i) {
        const double h = std::abs(-0.95 + 1.9 * i / (grid_n - 1.0));
        const double d1 = distance(kind, axis_state(1, h), origin);
        const double d3 = distance(kind, axis_state(3, h), origin);
        rep.lemma3_max_gap = std::max(rep.lemma3_max_gap, std::abs(d1 - d3));
    }

    rep.lemma1_min_margin = clip(rep.lemma1_min_margin);
    rep.lemma2_min_margin = clip(rep.lemma2_min_margin);
    rep.lemma4_min_step = clip(rep.lemma4_min_step);

    rep.pass = rep.axis_prediction_ok && rep.max_pinning_error <= 1e-6 &&
               rep.lemma1_min_margin >= -1e-10 && rep.lemma2_min_margin >= -1e-10 &&
               rep.lemma3_max_gap <= 1e-10 && rep.lemma4_min_step >= -1e-10 &&
               rep.oracle_max_gap <= 1e-3;
    return rep;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::string& header_json,
                          const std::map<DistanceKind, FreezingReport>& reports) {
    for (DistanceKind kind : all_kinds())
        if (!traj.q_values.count(kind))
            fail(Errc::InvalidParam, "trajectory CSV needs every distance kind");

    out << "# qcorr.trajectory/1 " << header_json << "\n";
    out << "t,c1,c2,c3,Q_trace,Q_bures2,Q_hellinger2,Q_relent,Q_hs2,E_bures2,regime\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const BDTriple& c = traj.triples[i];
        const char* regime = "decaying";
        if (traj.initial_classical)
            regime = "classical";
        else if (traj.t_star && t <= *traj.t_star + 1e-12)
            regime = "frozen";
        out << fmt12(t) << ',' << fmt12(c.c1) << ',' << fmt12(c.c2) << ',' << fmt12(c.c3);
        for (DistanceKind kind : all_kinds())
            out << ',' << fmt12(traj.q_values.at(kind)[i]);
        out << ',' << fmt12(traj.e_bures[i]) << ',' << regime << "\n";
    }
    nlohmann::json footer;
    for (const auto& [kind, rep] : reports)
        footer[std::string(kind_name(kind))] = freezing_json_obj(rep);
    out << "# freezing " << footer.dump() << "\n";
}

std::string freezing_report_json(const FreezingReport& r) { return freezing_json_obj(r).dump(); }

std::string theorem1_report_json(const Theorem1Report& r) {
    nlohmann::json j;
    j["kind"] = std::string(kind_name(r.kind));
    j["grid_n"] = r.grid_n;
    j["max_dev_eq21"] = r.max_dev_eq21;
    j["max_dev_eq22"] = r.max_dev_eq22;
    return j.dump();
}

std::string closest_classical_report_json(const ClosestClassicalCheckReport& r) {
    nlohmann::json j;
    j["kind"] = std::string(kind_name(r.kind));
    j["grid_n"] = r.grid_n;
    j["exempt"] = r.exempt;
    j["axis_prediction_ok"] = r.axis_prediction_ok;
    j["max_pinning_error"] = r.max_pinning_error;
    j["lemma1_min_margin"] = r.lemma1_min_margin;
    j["lemma2_min_margin"] = r.lemma2_min_margin;
    j["lemma3_max_gap"] = r.lemma3_max_gap;
    j["lemma4_min_step"] = r.lemma4_min_step;
    j["oracle_max_gap"] = r.oracle_max_gap;
    j["oracle_min_signed_gap"] = r.oracle_min_signed_gap;
    j["pass"] = r.pass;
    return j.dump();
}

}  // namespace qcorr
