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

}  // namespace

// The CC brute-force oracle must agree with the axis search on generic BD
// states: it may exceed the axis minimum by grid error but never undershoot
// beyond the refinement tolerance.
TEST_CASE("oracle equivalence over seeded BD triples") {
    OracleBudget budget;
    for (DistanceKind kind : bona_fide_kinds()) {
        double worst_over = 0.0;
        double worst_under = 0.0;
        for (int i = 0; i < 50; ++i) {
            const BDTriple c = random_valid_triple(10'000 + i);
            const double axis = discord_geometric(c, kind);
            const double oracle = discord_oracle(bd_to_density(c), kind, ClassicalSet::CC,
                                                 budget, 20'000 + i);
            const double gap = oracle - axis;
            worst_over = std::max(worst_over, gap);
            worst_under = std::min(worst_under, gap);
        }
        CAPTURE(kind_name(kind));
        CHECK(worst_over <= 1e-3);
        CHECK(worst_under >= -1e-3);
    }
}
