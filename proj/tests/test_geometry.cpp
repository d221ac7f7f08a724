#include <doctest.h>

#include <cmath>

#include "qcorr/geometry.hpp"
#include "qcorr/rng.hpp"

using namespace qcorr;

namespace {

BDTriple random_valid_triple(std::uint64_t seed) {
    Rng rng(seed);
    double w[4];
    double total = 0.0;
    for (double& x : w) {
        x = rng.next_double();
        total += x;
    }
    for (double& x : w) x /= total;
    const double v[4][3] = {{1, -1, 1}, {-1, 1, 1}, {1, 1, -1}, {-1, -1, -1}};
    BDTriple c;
    for (int i = 0; i < 4; ++i) {
        c.c1 += w[i] * v[i][0];
        c.c2 += w[i] * v[i][1];
        c.c3 += w[i] * v[i][2];
    }
    return c;
}

DensityMatrix axis_density(int axis, double s) {
    BDTriple c;
    if (axis == 1) c.c1 = s;
    if (axis == 2) c.c2 = s;
    if (axis == 3) c.c3 = s;
    return bd_to_density(c);
}

}  // namespace

TEST_CASE("golden section minimizes a smooth scalar") {
    double arg = 0.0;
    const double val = detail::golden_section(
        -1.0, 1.0, 1e-12, [](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, &arg);
    CHECK(arg == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(val == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nelder mead minimizes a quadratic bowl") {
    auto f = [](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - 0.1 * (i + 1);
            s += (i + 1) * d * d;
        }
        return s;
    };
    const std::vector<double> best = detail::nelder_mead(f, {1.0, -1.0, 0.5}, {0.5, 0.5, 0.5}, 400);
    CHECK(f(best) < 1e-12);
}

TEST_CASE("closest classical axis on trace distance") {
    const ClosestClassicalResult classical =
        closest_classical_axis({0, 0, 0.6}, DistanceKind::Trace);
    CHECK(classical.axis == 3);
    CHECK(classical.s == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(classical.value == doctest::Approx(0.0).epsilon(1e-10));

    // Fig. 2 state: closest classical state is {1,0,0}, value c3/2.
    const ClosestClassicalResult surf = closest_classical_axis({1, -0.6, 0.6}, DistanceKind::Trace);
    CHECK(surf.axis == 1);
    CHECK(surf.s == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(surf.value == doctest::Approx(0.3).epsilon(1e-10));

    // |c3| > |c1| branch; the trace plateau midpoint recovers s = c3.
    const ClosestClassicalResult other =
        closest_classical_axis({0.3, -0.18, 0.6}, DistanceKind::Trace);
    CHECK(other.axis == 3);
    CHECK(other.s == doctest::Approx(0.6).epsilon(1e-7));
    CHECK(other.value == doctest::Approx(0.15).epsilon(1e-10));

    CHECK_THROWS_AS((void)closest_classical_axis({1, 1, 1}, DistanceKind::Trace), Error);
}

TEST_CASE("closest classical result reproduces its own distance") {
    for (int seed = 0; seed < 10; ++seed) {
        const BDTriple c = random_valid_triple(50 + seed);
        const DensityMatrix rho = bd_to_density(c);
        for (DistanceKind kind : all_kinds()) {
            const ClosestClassicalResult r = closest_classical_axis(c, kind);
            const double direct = distance(kind, rho, axis_density(r.axis, r.s));
            CHECK(std::abs(direct - r.value) < 1e-10);
        }
    }
}

TEST_CASE("maximally entangled state ties all three axes") {
    const ClosestClassicalResult r = closest_classical_axis({1, -1, 1}, DistanceKind::Trace);
    CHECK(r.axis == 1);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.ties.size() == 3);
}

TEST_CASE("discord examples") {
    for (DistanceKind kind : all_kinds())
        CHECK(discord_geometric({0, 0, 1}, kind) == doctest::Approx(0.0).epsilon(1e-9));

    CHECK(discord_geometric({1, -0.6, 0.6}, DistanceKind::BuresSquared) ==
          doctest::Approx(0.102633403899).epsilon(1e-8));
    CHECK(discord_geometric({1, -0.6, 0.6}, DistanceKind::RelativeEntropy) ==
          doctest::Approx(0.192744757022).epsilon(1e-8));
    CHECK(discord_geometric({1, -0.6, 0.6}, DistanceKind::HellingerSquared) ==
          doctest::Approx(0.102633403899).epsilon(1e-8));
    CHECK(discord_geometric({1, -0.6, 0.6}, DistanceKind::HilbertSchmidtSquared) ==
          doctest::Approx(0.18).epsilon(1e-10));
}

TEST_CASE("discord vanishes exactly on classical axis triples") {
    for (int axis = 1; axis <= 3; ++axis)
        for (double s : {-0.8, -0.3, 0.0, 0.5, 1.0}) {
            BDTriple c;
            if (axis == 1) c.c1 = s;
            if (axis == 2) c.c2 = s;
            if (axis == 3) c.c3 = s;
            for (DistanceKind kind : all_kinds())
                CHECK(discord_geometric(c, kind) <= 1e-10);
        }
    // and is positive away from the axes
    CHECK(discord_geometric({0.5, -0.2, 0.3}, DistanceKind::Trace) > 1e-3);
}

TEST_CASE("Theorem 3 pinning on freezing-surface points") {
    for (DistanceKind kind : bona_fide_kinds()) {
        const ClosestClassicalResult a = closest_classical_axis({0.8, -0.32, 0.4}, kind);
        CHECK(a.axis == 1);
        CHECK(std::abs(a.s - 0.8) < 1e-6);
        const ClosestClassicalResult b = closest_classical_axis({0.3, -0.21, 0.7}, kind);
        CHECK(b.axis == 3);
        CHECK(std::abs(b.s - 0.7) < 1e-6);
    }
}

TEST_CASE("concurrence") {
    CHECK(concurrence_bd({1, -1, 1}) == doctest::Approx(1.0));
    CHECK(concurrence_bd({0, 0, 0}) == doctest::Approx(0.0));
    CHECK(concurrence_bd({1, -0.6, 0.6}) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("concurrence matches the Wootters construction") {
    for (int seed = 0; seed < 25; ++seed) {
        const BDTriple c = random_valid_triple(600 + seed);
        const double fast = concurrence_bd(c);
        const double wootters = wootters_concurrence(bd_to_density(c));
        CHECK(std::abs(fast - wootters) < 1e-7);
    }
    // pure product state has no entanglement
    ComplexMat zz(4);
    zz(0, 0) = 1.0;
    CHECK(wootters_concurrence(DensityMatrix(zz)) < 1e-7);
}

TEST_CASE("Bures entanglement closed form") {
    CHECK(entanglement_bures_bd({0.3, 0.3, 0.3}) == doctest::Approx(0.0));
    CHECK(entanglement_bures_bd({1, -1, 1}) ==
          doctest::Approx(2.0 * (1.0 - std::sqrt(0.5))).epsilon(1e-12));
    CHECK(entanglement_bures_bd({1, -0.6, 0.6}) ==
          doctest::Approx(0.102633403899).epsilon(1e-9));
}

TEST_CASE("CC oracle on classical inputs") {
    OracleBudget budget;
    // grid-aligned CC state: z bases, lattice probabilities
    {
        CCParam p;
        p.probs = {{{0.4, 0.2}, {0.2, 0.2}}};
        const DensityMatrix chi = make_cc(p);
        CHECK(discord_oracle(chi, DistanceKind::Trace, ClassicalSet::CC, budget, 1) <= 1e-9);
        CHECK(discord_oracle(chi, DistanceKind::BuresSquared, ClassicalSet::CC, budget, 1) <=
              1e-9);
    }
    // generic CC state
    {
        CCParam p;
        p.basis_a = {0.6, 0.0, 0.8};
        p.basis_b = {0.0, 0.6, -0.8};
        p.probs = {{{0.35, 0.15}, {0.25, 0.25}}};
        const DensityMatrix chi = make_cc(p);
        CHECK(discord_oracle(chi, DistanceKind::BuresSquared, ClassicalSet::CC, budget, 2) <=
              1e-6);
        CHECK(discord_oracle(chi, DistanceKind::HilbertSchmidtSquared, ClassicalSet::CC, budget,
                             3) <= 1e-6);
        CHECK(discord_oracle(chi, DistanceKind::Trace, ClassicalSet::CC, budget, 4) <= 1e-4);
    }
    CHECK_THROWS_AS((void)discord_oracle(bd_to_density({0, 0, 0}), DistanceKind::Trace,
                                         ClassicalSet::CC, OracleBudget{3, 6, 200}, 1),
                    Error);
}

TEST_CASE("CC oracle agrees with the axis search on reference states") {
    OracleBudget budget;
    const double surf = discord_oracle(bd_to_density({1, -0.6, 0.6}), DistanceKind::Trace,
                                       ClassicalSet::CC, budget, 7);
    CHECK(std::abs(surf - 0.3) <= 1e-3);

    const double bell = discord_oracle(bd_to_density({1, -1, 1}), DistanceKind::Trace,
                                       ClassicalSet::CC, budget, 8);
    CHECK(std::abs(bell - 0.5) <= 1e-3);
}

TEST_CASE("CQ oracle on CQ inputs and BD states") {
    OracleBudget budget;
    budget.basis_grid = 8;
    CQParam p;
    p.p = 0.7;
    p.basis_a = {0.6, 0.0, 0.8};
    p.rho1_b = {0.2, 0.1, -0.4};
    p.rho2_b = {0.0, 0.5, 0.3};
    const DensityMatrix chi = make_cq(p);
    CHECK(discord_oracle(chi, DistanceKind::BuresSquared, ClassicalSet::CQ, budget, 5) <= 1e-5);

    // For BD states the CQ and CC infima coincide with the axis value.
    const double cq = discord_oracle(bd_to_density({1, -0.6, 0.6}), DistanceKind::BuresSquared,
                                     ClassicalSet::CQ, budget, 6);
    CHECK(std::abs(cq - 0.102633403899) <= 2e-3);
}

TEST_CASE("separable oracle") {
    // separable BD state: exact decomposition seed drives the value to ~0
    CHECK(separable_oracle(bd_to_density({0.3, 0.3, 0.3}), DistanceKind::BuresSquared, 4, 1) <=
          1e-3);
    // maximally mixed state
    CHECK(separable_oracle(bd_to_density({0, 0, 0}), DistanceKind::BuresSquared, 4, 2) <= 1e-6);
    // Bell state: closed form is the infimum
    const double bell = separable_oracle(bd_to_density({1, -1, 1}), DistanceKind::BuresSquared,
                                         8, 3);
    const double closed = entanglement_bures_bd({1, -1, 1});
    CHECK(bell >= closed - 1e-9);
    CHECK(std::abs(bell - closed) <= 5e-2);
}

TEST_CASE("separable oracle upper-bounds the closed form on BD samples") {
    for (int seed = 0; seed < 6; ++seed) {
        const BDTriple c = random_valid_triple(900 + seed);
        const double oracle =
            separable_oracle(bd_to_density(c), DistanceKind::BuresSquared, 3, 40 + seed);
        CHECK(oracle >= entanglement_bures_bd(c) - 1e-9);
    }
}

TEST_CASE("closest classical JSON") {
    const std::string j = closest_classical_json(closest_classical_axis({1, -1, 1},
                                                                        DistanceKind::Trace));
    CHECK(j.find("\"ties\"") != std::string::npos);
    CHECK(j.find("\"kind\":\"trace\"") != std::string::npos);
}
