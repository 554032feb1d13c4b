#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "halfwave/boosted.hpp"
#include "halfwave/report.hpp"

using namespace hw;

namespace {

const GridPtr& test_grid() {
    static GridPtr g = make_grid(128, 40.0);
    return g;
}

}  // namespace

TEST_CASE("speed limits are enforced") {
    CHECK_THROWS_AS(solve_boosted(test_grid(), {1.0, 0.0}), Error);
    CHECK_THROWS_AS(solve_boosted(test_grid(), {0.9995, 0.0}), Error);
    BoostedOptions opts;
    opts.tol = 0.0;
    CHECK_THROWS_AS(solve_boosted(test_grid(), {0.1, 0.0}, opts), Error);
}

TEST_CASE("v = 0 reduces to the ground state") {
    GroundStateOptions gopt;
    const GroundState gs = solve_ground_state(test_grid(), gopt);
    const BoostedWave w = solve_boosted(test_grid(), {0.0, 0.0});
    CHECK(std::abs(w.mass - gs.mass) / gs.mass < 1e-8);
    CHECK(std::abs(w.c_v - gs.gn_constant) / gs.gn_constant < 1e-6);
}

TEST_CASE("moderate boost: mass bounds, vanishing boosted energy, momentum sign") {
    const std::array<double, 2> v{0.5, 0.0};
    const BoostedWave w = solve_boosted(test_grid(), v);
    GroundStateOptions gopt;
    const GroundState gs = solve_ground_state(test_grid(), gopt);

    CHECK(w.mass <= gs.mass * (1.0 + 1e-6));
    CHECK(w.mass >= (1.0 - 0.5) * gs.mass * (1.0 - 1e-6));

    const double h2 = norms(w.q_v).h_half * norms(w.q_v).h_half;
    CHECK(std::abs(w.energy_v) / h2 < 2e-3);  // truncation floor of this grid

    CHECK(w.momentum_projection <= 1e-8 * w.mass);

    // the conserved momentum itself points along the boost
    const Functionals f = functionals(w.q_v);
    CHECK(f.momentum[0] > 0.0);
}

TEST_CASE("gauge covariance of the diagnostics") {
    const std::array<double, 2> v{0.4, 0.0};
    const BoostedWave w = solve_boosted(test_grid(), v);
    const Field rotated = w.q_v * std::exp(complexd(0.0, 1.3));
    CHECK(std::abs(norm_l2(rotated) * norm_l2(rotated) - w.mass) / w.mass < 1e-10);
    CHECK(std::abs(boosted_energy(rotated, v) - w.energy_v) < 1e-10 * w.mass);
    CHECK(std::abs(boosted_quotient(rotated, v) - boosted_quotient(w.q_v, v)) < 1e-10);
}

TEST_CASE("axis rotation covariance: v along x vs v along y") {
    const BoostedWave wx = solve_boosted(test_grid(), {0.3, 0.0});
    const BoostedWave wy = solve_boosted(test_grid(), {0.0, 0.3});
    CHECK(std::abs(wx.mass - wy.mass) / wx.mass < 1e-6);
}

TEST_CASE("reflection raises the boosted energy") {
    const std::array<double, 2> v{0.4, 0.0};
    const BoostedWave w = solve_boosted(test_grid(), v);
    const std::size_t n = w.q_v.grid().n();
    Field reflected(w.q_v.grid_ptr(), Space::physical);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            reflected.at(i, j) = w.q_v.at((n - i) % n, (n - j) % n);
    CHECK(boosted_energy(reflected, v) >= w.energy_v - 1e-10);
}

TEST_CASE("sharp interpolation inequality for sub-mass random fields") {
    const std::array<double, 2> v{0.5, 0.0};
    const BoostedWave w = solve_boosted(test_grid(), v);
    Rng rng(77);
    for (int i = 0; i < 20; ++i) {
        Field u = random_smooth_field(test_grid(), rng);
        u *= 0.7 * std::sqrt(w.mass) / norm_l2(u);
        const double l3 = norm_lp(u.to(Space::physical), 3.0);
        const double kin = 2.0 * (boosted_energy(u, v) + l3 * l3 * l3 / 3.0);
        const double bound = 0.5 * kin * (1.0 - norm_l2(u) / std::sqrt(w.mass));
        CHECK(boosted_energy(u, v) >= bound - 1e-8);
    }
}

TEST_CASE("mass curve: strict decrease and warm starts") {
    std::vector<double> speeds{0.1, 0.2, 0.3};
    const auto rows = mass_curve(test_grid(), speeds);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].mass > rows[1].mass);
    CHECK(rows[1].mass > rows[2].mass);
    for (const auto& r : rows) CHECK(r.residual < 1e-6);

    CHECK_THROWS_AS(mass_curve(test_grid(), {0.3, 0.2}), Error);
    CHECK_THROWS_AS(mass_curve(test_grid(), {-0.1, 0.2}), Error);
}
