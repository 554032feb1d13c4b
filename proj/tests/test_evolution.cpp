#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "halfwave/evolution.hpp"
#include "halfwave/ground_state.hpp"
#include "halfwave/report.hpp"

using namespace hw;

namespace {

const GroundState& gs_fixture() {
    static GroundState gs = [] {
        GroundStateOptions opts;
        return solve_ground_state(make_grid(128, 40.0), opts);
    }();
    return gs;
}

Field plane_wave(const GridPtr& grid, std::size_t m1, std::size_t m2, double amp) {
    Field f(grid, Space::physical);
    const std::size_t n = grid->n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double phase =
                grid->wavenumber(m1) * grid->coord(i) + grid->wavenumber(m2) * grid->coord(j);
            f.at(i, j) = amp * std::exp(complexd(0.0, phase));
        }
    return f;
}

}  // namespace

TEST_CASE("linear limit: a tiny plane wave acquires exactly the linear phase") {
    auto grid = make_grid(64, 20.0);
    const double amp = 1e-9;  // nonlinear phase ~ amp * dt, below round-off of the check
    const Field pw = plane_wave(grid, 2, 1, amp);
    const double k = std::hypot(grid->wavenumber(2), grid->wavenumber(1));
    const double dt = 1e-2;
    const Field stepped = step(pw, dt);
    const Field expected = pw * std::exp(complexd(0.0, -k * dt));
    CHECK(norm_l2(stepped - expected) / norm_l2(pw) < 1e-8);
}

TEST_CASE("mass is conserved to round-off over 1000 steps") {
    const GroundState& gs = gs_fixture();
    Field u = gs.q * 0.8;
    const double m0 = norm_l2(u);
    for (int i = 0; i < 1000; ++i) u = step(u, 1e-3);
    CHECK(std::abs(norm_l2(u) - m0) / m0 < 1e-10);
}

TEST_CASE("energy drift below 1e-6 per unit time at dt = 1e-3") {
    const GroundState& gs = gs_fixture();
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.sample_every = 0.5;
    const EvolveResult res = evolve(gs.q * 0.8, cfg);
    const double e0 = res.series.samples.front().energy;
    const double e1 = res.series.samples.back().energy;
    CHECK(std::abs(e1 - e0) < 1e-6 * std::max(1.0, std::abs(e0)));
}

TEST_CASE("Richardson self-convergence slope is 2") {
    const GroundState& gs = gs_fixture();
    Field u0 = gs.q * 0.8;
    std::vector<double> dts{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    std::vector<double> errs;
    for (double dt : dts) {
        EvolutionConfig a, b;
        a.dt = dt;
        b.dt = dt / 2;
        a.t_end = b.t_end = 0.5;
        errs.push_back(norm_l2(evolve(u0, a).u - evolve(u0, b).u));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        sx += std::log(dts[i]);
        sy += std::log(errs[i]);
        sxx += std::log(dts[i]) * std::log(dts[i]);
        sxy += std::log(dts[i]) * std::log(errs[i]);
    }
    const double m = static_cast<double>(dts.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    INFO("slope ", slope);
    CHECK(slope > 1.9);
    CHECK(slope < 2.1);
}

TEST_CASE("time reversal returns the initial data") {
    const GroundState& gs = gs_fixture();
    Field u = gs.q * 0.8;
    const Field u0 = u;
    for (int i = 0; i < 200; ++i) u = step(u, 1e-3);
    for (int i = 0; i < 200; ++i) u = step(u, -1e-3);
    CHECK(norm_l2(u - u0) / norm_l2(u0) < 1e-11);
}

TEST_CASE("gauge equivariance is exact") {
    const GroundState& gs = gs_fixture();
    const complexd phase = std::exp(complexd(0.0, 0.9));
    Field a = gs.q * 0.8;
    Field b = a * phase;
    for (int i = 0; i < 50; ++i) {
        a = step(a, 1e-3);
        b = step(b, 1e-3);
    }
    CHECK(norm_l2(b - a * phase) / norm_l2(a) < 1e-13);
}

TEST_CASE("soliton tracks e^{it} Q") {
    const GroundState& gs = gs_fixture();
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    const EvolveResult res = evolve(gs.q, cfg);
    const complexd overlap = inner_product(res.u, gs.q * std::exp(complexd(0.0, 2.0)));
    CHECK(std::abs(overlap) / gs.mass > 0.999);
}

TEST_CASE("NaN guard aborts with the numerical error code") {
    auto grid = make_grid(32, 10.0);
    Field bad(grid, Space::physical);
    bad.at(3, 4) = complexd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(step(bad, 1e-3), Error);
}

TEST_CASE("evolve config validation and dealias flag") {
    const GroundState& gs = gs_fixture();
    EvolutionConfig cfg;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(evolve(gs.q, cfg), Error);
    cfg.dt = 1e-3;
    cfg.t_end = 0.0;
    cfg.t_start = 1.0;
    CHECK_THROWS_AS(evolve(gs.q, cfg), Error);

    // dealiased run stays close to the plain one on smooth data
    EvolutionConfig on, off;
    on.dt = off.dt = 1e-3;
    on.t_end = off.t_end = 0.25;
    on.dealias = true;
    const Field ua = evolve(gs.q * 0.8, on).u;
    const Field ub = evolve(gs.q * 0.8, off).u;
    CHECK(norm_l2(ua - ub) / norm_l2(ub) < 1e-4);
}

TEST_CASE("localized energy: zero difference gives zero, quadratic scaling") {
    const GroundState& gs = gs_fixture();
    const CutoffProfile phi;
    CHECK(evaluate_ja(gs.q, gs.q, 1.0, {0.0, 0.0}, 0.1, 20.0, phi) == 0.0);
    CHECK_THROWS_AS(evaluate_ja(gs.q, gs.q, -1.0, {0.0, 0.0}, 0.1, 20.0, phi), Error);

    Rng rng(5);
    Field noise = random_smooth_field(gs.q.grid_ptr(), rng);
    noise *= 1e-3 / norm_l2(noise);
    const Field u1 = gs.q + noise;
    const Field u2 = gs.q + noise * 2.0;
    const double j1 = evaluate_ja(u1, gs.q, 1.0, {0.0, 0.0}, 0.05, 20.0, phi);
    const double j2 = evaluate_ja(u2, gs.q, 1.0, {0.0, 0.0}, 0.05, 20.0, phi);
    const double ratio = j2 / j1;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);

    // |J_A| controlled by the quadratic norms
    const Norms nn = norms(noise);
    const double bound = 5.0 * (nn.hdot_half * nn.hdot_half + nn.l2 * nn.l2);
    CHECK(std::abs(j1) <= bound);
}

TEST_CASE("blowup guard: adaptive run stops at the resolution floor") {
    // a focusing field: supercritical-mass profile concentrates
    const GroundState& gs = gs_fixture();
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1e9;  // never reached
    cfg.adaptive = true;
    cfg.adaptive_floor = 0.9;  // trips as soon as the estimate drops
    cfg.sample_every = 0.01;
    const double ref = norms(gs.q).hdot_half * 0.9;  // estimate starts near 0.81
    const EvolveResult res = evolve(gs.q, cfg, ref);
    CHECK(res.stop == StopReason::blowup_floor);
}
