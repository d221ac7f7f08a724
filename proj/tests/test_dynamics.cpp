#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qcorr/dynamics.hpp"

using namespace qcorr;

namespace {

std::vector<DistanceKind> kinds_vec(std::initializer_list<DistanceKind> ks) { return ks; }

}  // namespace

TEST_CASE("freezing surface point") {
    const SurfacePoint fig2 = freezing_surface_point(1.0, 0.6);
    CHECK(fig2.triple.c1 == doctest::Approx(1.0));
    CHECK(fig2.triple.c2 == doctest::Approx(-0.6));
    CHECK(fig2.triple.c3 == doctest::Approx(0.6));
    CHECK(fig2.strict);

    const SurfacePoint origin = freezing_surface_point(0.0, 0.0);
    CHECK(origin.triple.c1 == 0.0);
    CHECK(origin.triple.c2 == 0.0);
    CHECK(origin.triple.c3 == 0.0);
    CHECK_FALSE(origin.strict);

    const SurfacePoint boundary = freezing_surface_point(0.5, 0.5);
    CHECK(boundary.triple.c2 == doctest::Approx(-0.25));
    CHECK_FALSE(boundary.strict);

    CHECK_THROWS_AS((void)freezing_surface_point(1.5, 0.0), Error);
}

TEST_CASE("surface points are valid everywhere on the square") {
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const double c1 = -1.0 + 0.1 * i;
            const double c3 = -1.0 + 0.1 * j;
            CHECK(bd_validate(freezing_surface_point(c1, c3).triple).valid);
            // closed-form Bell eigenvalues (1 +- c1)(1 +- c3)/4 are exactly
            // nonnegative
            for (double s1 : {-1.0, 1.0})
                for (double s3 : {-1.0, 1.0})
                    CHECK((1.0 + s1 * c1) * (1.0 + s3 * c3) / 4.0 >= 0.0);
        }
}

TEST_CASE("threshold time") {
    CHECK(threshold_time(1.0, 0.6, 1.0) == doctest::Approx(0.255412811883).epsilon(1e-10));
    CHECK(threshold_time(0.8, 0.8, 1.0) == doctest::Approx(0.0));
    CHECK(threshold_time(0.8, 0.2, 0.5) == doctest::Approx(1.386294361120).epsilon(1e-10));
    CHECK(threshold_time(0.2, 0.8, 1.0) < 0.0);
    CHECK_THROWS_AS((void)threshold_time(0.0, 0.5, 1.0), Error);
    CHECK_THROWS_AS((void)threshold_time(0.5, 0.0, 1.0), Error);
    CHECK_THROWS_AS((void)threshold_time(0.5, 0.5, 0.0), Error);
}

TEST_CASE("rate table interpolation and inversion") {
    const RateTable table = RateTable::from_points({{0, 0}, {1, 2}, {2, 2}, {3, 4}});
    CHECK(table(0.5) == doctest::Approx(1.0));
    CHECK(table(1.5) == doctest::Approx(2.0));
    CHECK(table(2.5) == doctest::Approx(3.0));
    CHECK(table(4.0) == doctest::Approx(6.0));  // final slope extends
    CHECK(*table.invert(1.0) == doctest::Approx(0.5));
    CHECK(*table.invert(3.0) == doctest::Approx(2.5));

    std::istringstream csv("# t,Gamma\n0,0\n1,2\n2,2\n3,4\n");
    const RateTable loaded = RateTable::load_csv(csv);
    CHECK(loaded(1.5) == doctest::Approx(2.0));

    CHECK_THROWS_AS((void)RateTable::from_points({{0, 0}}), Error);
    CHECK_THROWS_AS((void)RateTable::from_points({{0, 0}, {1, 2}, {2, 1}}), Error);
    CHECK_THROWS_AS((void)RateTable::from_points({{0.5, 0}, {1, 2}}), Error);
}

TEST_CASE("Fig. 2 trajectory freezes every bona fide kind until t*") {
    const BDTriple c0 = freezing_surface_point(1.0, 0.6).triple;
    const std::vector<DistanceKind> kinds = {DistanceKind::Trace, DistanceKind::BuresSquared,
                                             DistanceKind::HellingerSquared,
                                             DistanceKind::RelativeEntropy};
    const Trajectory traj = run_trajectory(c0, 1.0, 3, 1.2, 61, kinds);
    REQUIRE(traj.t_star.has_value());
    const double tstar = *traj.t_star;
    CHECK(tstar == doctest::Approx(0.255412811883).epsilon(1e-10));
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(1.2));
    CHECK(std::count_if(traj.times.begin(), traj.times.end(),
                        [&](double t) { return std::abs(t - tstar) < 1e-14; }) == 1);

    // confinement: c2(t) = -c1(t) c3(t) at every step
    for (const BDTriple& c : traj.triples) CHECK(std::abs(c.c2 + c.c1 * c.c3) < 1e-12);

    // each step matches the closed-form channel action from t = 0
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const BDTriple via_channel =
            evolve_triple(c0, decoherence_from_rate(3, 1.0, traj.times[i]));
        CHECK(std::abs(via_channel.c1 - traj.triples[i].c1) < 1e-12);
        CHECK(std::abs(via_channel.c2 - traj.triples[i].c2) < 1e-12);
        CHECK(std::abs(via_channel.c3 - traj.triples[i].c3) < 1e-12);
    }

    const std::array<double, 4> frozen_bell = bell_eigenvalues({0, 0, 0.6});
    const std::array<double, 4> mixed_bell = bell_eigenvalues({0, 0, 0});
    for (DistanceKind kind : kinds) {
        const std::vector<double>& q = traj.q_values.at(kind);
        const double expected = distance_bell(kind, frozen_bell, mixed_bell);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            if (traj.times[i] <= tstar + 1e-12)
                CHECK(std::abs(q[i] - expected) < 1e-6);
        }
        // strictly decreasing after t*
        for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
            if (traj.times[i] >= tstar - 1e-12 && q[i] > 1e-10) CHECK(q[i + 1] < q[i] + 1e-12);
        }
    }
}

TEST_CASE("classical trajectory stays classical") {
    const Trajectory traj =
        run_trajectory({0, 0, 0.6}, 1.0, 3, 2.0, 21, kinds_vec({DistanceKind::Trace}));
    CHECK(traj.initial_classical);
    CHECK_FALSE(traj.t_star.has_value());
    for (double q : traj.q_values.at(DistanceKind::Trace)) CHECK(q <= 1e-10);
}

TEST_CASE("entanglement sudden death at ln 2") {
    const BDTriple c0 = freezing_surface_point(1.0, 0.6).triple;
    const Trajectory traj = run_trajectory(c0, 1.0, 3, 2.5, 251, kinds_vec({DistanceKind::Trace}));
    const double step = 2.5 / 250.0;
    double first_zero = -1.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        CHECK(std::abs(traj.e_bures[i] -
                       entanglement_bures_bd(traj.triples[i])) < 1e-12);
        if (first_zero < 0.0 && traj.e_bures[i] <= 0.0) first_zero = traj.times[i];
    }
    CHECK(std::abs(first_zero - std::log(2.0)) <= step + 1e-12);
    // no revival
    bool seen_zero = false;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.e_bures[i] == 0.0) seen_zero = true;
        if (seen_zero) CHECK(traj.e_bures[i] == 0.0);
        if (i + 1 < traj.times.size()) CHECK(traj.e_bures[i + 1] <= traj.e_bures[i] + 1e-12);
    }
}

TEST_CASE("post-threshold decay reaches near zero by t = 5/gamma") {
    const BDTriple c0 = freezing_surface_point(1.0, 0.6).triple;
    const Trajectory traj =
        run_trajectory(c0, 1.0, 3, 5.0, 101, kinds_vec({DistanceKind::Trace}));
    const std::vector<double>& q = traj.q_values.at(DistanceKind::Trace);
    CHECK(q.back() < q.front() - 10e-6);
    CHECK(q.back() <= q.front());
    CHECK(q.back() < 1e-3);
}

TEST_CASE("detect_freezing on the Fig. 2 trajectory") {
    const BDTriple c0 = freezing_surface_point(1.0, 0.6).triple;
    const Trajectory traj = run_trajectory(
        c0, 1.0, 3, 1.2, 241,
        kinds_vec({DistanceKind::Trace, DistanceKind::HilbertSchmidtSquared}));
    const FreezingReport rep = detect_freezing(traj, DistanceKind::Trace, 1e-6);
    CHECK(rep.plateau_value == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(rep.sudden_change_detected);
    CHECK_FALSE(rep.classical);
    CHECK(std::abs(rep.plateau_end - rep.t_star_analytic) <= 1.2 / 240.0 + 1e-12);
    CHECK(rep.max_plateau_deviation <= 1e-6);

    // Hilbert-Schmidt does not freeze: no two-point plateau at the start.
    const FreezingReport hs = detect_freezing(traj, DistanceKind::HilbertSchmidtSquared, 1e-6);
    CHECK(hs.plateau_end == traj.times.front());
    CHECK_FALSE(hs.sudden_change_detected);
    CHECK(hs.plateau_value == doctest::Approx(0.18).epsilon(1e-9));
}

TEST_CASE("detect_freezing flags classical series") {
    const Trajectory traj =
        run_trajectory({0, 0, 0.6}, 1.0, 3, 2.0, 41, kinds_vec({DistanceKind::Trace}));
    const FreezingReport rep = detect_freezing(traj, DistanceKind::Trace, 1e-6);
    CHECK(rep.classical);
    CHECK_FALSE(rep.sudden_change_detected);
    CHECK(rep.plateau_end == traj.times.back());
}

TEST_CASE("non-Markovian rate table gives multiple plateaus") {
    const RateTable table = RateTable::from_points({{0, 0}, {1, 2}, {2, 2}, {3, 6}});
    const BDTriple c0 = freezing_surface_point(1.0, 0.6).triple;
    const Trajectory traj =
        run_trajectory(c0, 1.0, 3, 3.0, 61, kinds_vec({DistanceKind::Trace}), &table);
    REQUIRE(traj.t_star.has_value());
    CHECK(*traj.t_star == doctest::Approx(0.5 * std::log(1.0 / 0.6)).epsilon(1e-10));

    const FreezingReport rep = detect_freezing(traj, DistanceKind::Trace, 1e-6);
    CHECK(rep.sudden_change_detected);
    REQUIRE(rep.plateaus.size() >= 2);
    CHECK(rep.plateaus[0].t_begin == 0.0);
    // the rate stall on [1,2] freezes the decay mid-flight
    bool has_stall = false;
    for (const auto& p : rep.plateaus)
        if (p.t_begin >= 0.99 && p.t_end <= 2.01 && p.t_end - p.t_begin > 0.5) has_stall = true;
    CHECK(has_stall);
}

TEST_CASE("verify_theorem1 quick grids") {
    CHECK(verify_theorem1(DistanceKind::Trace, 5).max_dev_eq21 < 1e-12);
    CHECK(verify_theorem1(DistanceKind::Trace, 5).max_dev_eq22 < 1e-12);
    const Theorem1Report hs = verify_theorem1(DistanceKind::HilbertSchmidtSquared, 5);
    CHECK(hs.max_dev_eq21 >= 0.08);
    // analytic witness: c1^2 c3^2 / 4 at the grid corner
    CHECK(hs.max_dev_eq21 == doctest::Approx(0.95 * 0.95 * 0.95 * 0.95 / 4.0).epsilon(1e-9));
}

TEST_CASE("verify_closest_classical quick grid") {
    OracleBudget budget;
    const ClosestClassicalCheckReport rep =
        verify_closest_classical(DistanceKind::Trace, 2, budget, 77);
    CHECK(rep.pass);
    CHECK(rep.axis_prediction_ok);
    CHECK(rep.max_pinning_error <= 1e-6);
    CHECK(rep.lemma1_min_margin >= -1e-10);
    CHECK(rep.lemma2_min_margin >= -1e-10);
    CHECK(rep.lemma3_max_gap <= 1e-10);
    CHECK(rep.lemma4_min_step >= -1e-10);
    CHECK(rep.oracle_max_gap <= 1e-3);
    const std::string json = closest_classical_report_json(rep);
    CHECK(json.find("\"pass\":true") != std::string::npos);
}

TEST_CASE("trajectory CSV schema") {
    const BDTriple c0 = freezing_surface_point(1.0, 0.6).triple;
    std::vector<DistanceKind> kinds(all_kinds().begin(), all_kinds().end());
    const Trajectory traj = run_trajectory(c0, 1.0, 3, 1.0, 11, kinds);
    std::map<DistanceKind, FreezingReport> reports;
    reports[DistanceKind::Trace] = detect_freezing(traj, DistanceKind::Trace, 1e-6);

    std::ostringstream a, b;
    write_trajectory_csv(a, traj, "{\"cmd\":\"test\"}", reports);
    write_trajectory_csv(b, traj, "{\"cmd\":\"test\"}", reports);
    CHECK(a.str() == b.str());

    std::istringstream lines(a.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# qcorr.trajectory/1", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "t,c1,c2,c3,Q_trace,Q_bures2,Q_hellinger2,Q_relent,Q_hs2,E_bures2,regime");
    std::getline(lines, line);
    CHECK(line.find(",frozen") != std::string::npos);
    std::string last;
    while (std::getline(lines, line))
        if (!line.empty()) last = line;
    CHECK(last.rfind("# freezing ", 0) == 0);
}
