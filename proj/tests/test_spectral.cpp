#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "halfwave/report.hpp"
#include "halfwave/spectral.hpp"
#include "oracles.hpp"

using namespace hw;

namespace {

Field gaussian(const GridPtr& grid, double width, std::array<double, 2> center = {0, 0}) {
    Field f(grid, Space::physical);
    const std::size_t n = grid->n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double x1 = grid->coord(i) - center[0];
            const double x2 = grid->coord(j) - center[1];
            f.at(i, j) = std::exp(-(x1 * x1 + x2 * x2) / (width * width));
        }
    return f;
}

// Gaussian summed over its nearest periodic images: smooth as a function on
// the torus, so finite differences see no seam kink.
Field periodized_gaussian(const GridPtr& grid, double width) {
    Field f(grid, Space::physical);
    const std::size_t n = grid->n();
    const double len = grid->box_length();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int m1 = -1; m1 <= 1; ++m1)
                for (int m2 = -1; m2 <= 1; ++m2) {
                    const double x1 = grid->coord(i) - m1 * len;
                    const double x2 = grid->coord(j) - m2 * len;
                    acc += std::exp(-(x1 * x1 + x2 * x2) / (width * width));
                }
            f.at(i, j) = acc;
        }
    return f;
}

Field plane_wave(const GridPtr& grid, std::size_t m1, std::size_t m2, double amp = 1.0) {
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

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(make_grid(6, 10.0), Error);
    CHECK_THROWS_AS(make_grid(100, 10.0), Error);
    CHECK_THROWS_AS(make_grid(64, -1.0), Error);
    auto g = make_grid(64, 32.0);
    CHECK(g->spacing() == doctest::Approx(0.5));
    CHECK(g->coord(0) == doctest::Approx(-16.0));
    CHECK(g->wavenumber(1) == doctest::Approx(2.0 * M_PI / 32.0));
    CHECK(g->wavenumber(63) == doctest::Approx(-2.0 * M_PI / 32.0));
}

TEST_CASE("transform round trip at 1e-12 for random fields") {
    auto grid = make_grid(64, 20.0);
    Rng rng(11);
    for (int k = 0; k < 3; ++k) {
        Field f = random_smooth_field(grid, rng, 6.0);
        const Field rt = f.to(Space::frequency).to(Space::physical);
        CHECK(norm_l2(rt - f) / norm_l2(f) < 1e-12);
    }
}

TEST_CASE("apply_multiplier: constant killed by |k|, plane wave is eigenfunction") {
    auto grid = make_grid(32, 10.0);
    Field ones(grid, Space::physical);
    for (auto& v : ones.values()) v = 1.0;
    const Field zero = apply_multiplier(ones, Multiplier::halfwave(grid));
    CHECK(max_abs(zero) < 1e-13);

    const Field pw = plane_wave(grid, 1, 0);
    const Field dpw = apply_multiplier(pw, Multiplier::halfwave(grid));
    const double k = 2.0 * M_PI / 10.0;
    CHECK(norm_l2(dpw - pw * k) / norm_l2(pw) < 1e-12);
}

TEST_CASE("apply_multiplier matches the dense DFT-matrix oracle on 16x16") {
    auto grid = make_grid(16, 12.0);
    const Field f = gaussian(grid, 2.0, {0.7, -0.4});
    const Field fast = apply_multiplier(f, Multiplier::halfwave(grid));

    const auto op = oracle::dense_symbol_operator(
        *grid, [](double k1, double k2) { return complexd(std::hypot(k1, k2), 0.0); });
    const Field slow = oracle::from_vector(grid, op * oracle::to_vector(f));
    CHECK(max_abs(fast - slow) < 1e-12);
}

TEST_CASE("apply_multiplier commutes with lattice translation") {
    auto grid = make_grid(32, 16.0);
    const Field f = gaussian(grid, 2.5);
    const Multiplier d = Multiplier::halfwave(grid);
    const std::array<double, 2> shift{3.0 * grid->spacing(), -2.0 * grid->spacing()};
    const Field a = translate(apply_multiplier(f, d), shift);
    const Field b = apply_multiplier(translate(f, shift), d);
    CHECK(norm_l2(a - b) / norm_l2(a) < 1e-12);
}

TEST_CASE("gradient: sine derivative, mixed partials, finite-difference oracle") {
    auto grid = make_grid(128, 40.0);
    const double k = 2.0 * M_PI / 40.0;
    Field f(grid, Space::physical);
    for (std::size_t i = 0; i < 128; ++i)
        for (std::size_t j = 0; j < 128; ++j)
            f.at(i, j) = std::sin(k * grid->coord(i));
    auto [d1, d2] = gradient(f);
    Field expect(grid, Space::physical);
    for (std::size_t i = 0; i < 128; ++i)
        for (std::size_t j = 0; j < 128; ++j)
            expect.at(i, j) = k * std::cos(k * grid->coord(i));
    CHECK(norm_l2(d1 - expect) / norm_l2(expect) < 1e-12);
    CHECK(max_abs(d2) < 1e-12);

    const Field g = periodized_gaussian(grid, 7.0);
    auto [g1, g2] = gradient(g);
    auto [g12a, g12b] = gradient(g1);
    auto [g21a, g21b] = gradient(g2);
    (void)g12a;
    (void)g21b;
    CHECK(norm_l2(g12b - g21a) / std::max(norm_l2(g12b), 1e-300) < 1e-12);

    const Field fd = oracle::fd_partial(g, 0);
    CHECK(norm_l2(g1 - fd) / norm_l2(g1) < 1e-5);
}

TEST_CASE("scaling generator: constants, scaling derivative oracle, skew adjointness") {
    auto grid = make_grid(64, 30.0);
    Field ones(grid, Space::physical);
    for (auto& v : ones.values()) v = 1.0;
    const Field lones = scaling_generator(ones);
    CHECK(norm_l2(lones - ones) / norm_l2(ones) < 1e-11);

    // Lambda f = d/dmu [mu f(mu x)] at mu = 1.
    const Field f = gaussian(grid, 3.0);
    const Field lf = scaling_generator(f);
    const double mu = 1e-4;
    Field up(grid, Space::physical), dn(grid, Space::physical);
    for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j) {
            const double x1 = grid->coord(i), x2 = grid->coord(j);
            auto eval = [&](double m) {
                return m * std::exp(-((m * x1) * (m * x1) + (m * x2) * (m * x2)) / 9.0);
            };
            up.at(i, j) = eval(1.0 + mu);
            dn.at(i, j) = eval(1.0 - mu);
        }
    const Field fd = (up - dn) * (1.0 / (2.0 * mu));
    CHECK(norm_l2(lf - fd) / norm_l2(lf) < 1e-6);

    const Field g = gaussian(grid, 2.0);
    const double lhs = inner_product(scaling_generator(f), g).real();
    const double rhs = -inner_product(f, scaling_generator(g)).real();
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-6);

    bool warn = false;
    scaling_generator(ones, &warn);
    CHECK(warn);  // constants do not decay
    scaling_generator(gaussian(grid, 2.0), &warn);
    CHECK_FALSE(warn);
}

TEST_CASE("resolvent: plane wave, round trip, dense-solve oracle, domain error") {
    auto grid = make_grid(32, 10.0);
    const Field pw = plane_wave(grid, 2, 1);
    const double k = std::hypot(grid->wavenumber(2), grid->wavenumber(1));
    const Field r = resolvent_solve(pw, 1.0, ResolventOp::laplacian);
    CHECK(norm_l2(r - pw * (1.0 / (k * k + 1.0))) / norm_l2(r) < 1e-12);

    const Field f = gaussian(grid, 2.0);
    const Field rf = resolvent_solve(f, 0.7, ResolventOp::laplacian);
    const Field back = apply_multiplier(
        rf, Multiplier::radial(grid, [](double kk) { return kk * kk + 0.7; }));
    CHECK(norm_l2(back - f) / norm_l2(f) < 1e-12);

    // 16x16 dense linear solve oracle.
    auto small = make_grid(16, 12.0);
    const Field fs = gaussian(small, 2.0);
    const auto op = oracle::dense_symbol_operator(
        *small, [](double k1, double k2) { return complexd(k1 * k1 + k2 * k2 + 0.9, 0.0); });
    const oracle::Vec dense = op.fullPivLu().solve(oracle::to_vector(fs));
    const Field fast = resolvent_solve(fs, 0.9, ResolventOp::laplacian);
    CHECK(max_abs(fast - oracle::from_vector(small, dense)) < 1e-10);

    CHECK_THROWS_AS(resolvent_solve(f, -1.0, ResolventOp::laplacian), Error);
    CHECK_THROWS_AS(resolvent_solve(f, 0.0, ResolventOp::halfwave), Error);
}

TEST_CASE("halfwave identity check: gaussian, plane-wave quadrature oracle, scaling") {
    auto grid = make_grid(64, 30.0);
    const Field f = gaussian(grid, 3.0);
    const QuadratureScheme q200 = QuadratureScheme::log_trapezoid(200);
    const QuadratureScheme q400 = QuadratureScheme::log_trapezoid(400);
    const double e1 = halfwave_identity_check(f, q200);
    CHECK(e1 < 1e-4);
    const double e2 = halfwave_identity_check(f, q400);
    CHECK(e2 <= 2.0 * e1);  // node doubling does not regress

    // Single plane wave: the s-integrand is scalar; the identity reduces to a
    // 1D quadrature against |k|.
    const Field pw = plane_wave(grid, 3, 0);
    CHECK(halfwave_identity_check(pw, q400) < 1e-6);

    // Both sides quadratic: invariant under f -> 2f.
    CHECK(std::abs(halfwave_identity_check(f * 2.0, q200) - e1) < 1e-12);

    Field zero(grid, Space::physical);
    CHECK_THROWS_AS(halfwave_identity_check(zero, q200), Error);
}

TEST_CASE("balakrishnan: beta=1/2 against |k|, constants, plane wave") {
    auto grid = make_grid(64, 30.0);
    const QuadratureScheme q = QuadratureScheme::log_trapezoid(400);
    const Field f = gaussian(grid, 3.0);
    const Field approx_d = balakrishnan_apply(f, 0.5, q);
    const Field exact_d = apply_multiplier(f, Multiplier::halfwave(grid));
    CHECK(norm_l2(approx_d - exact_d) / norm_l2(exact_d) < 1e-3);

    Field ones(grid, Space::physical);
    for (auto& v : ones.values()) v = 1.0;
    CHECK(max_abs(balakrishnan_apply(ones, 0.5, q)) < 1e-12);

    const Field pw = plane_wave(grid, 2, 2);
    const double k = std::hypot(grid->wavenumber(2), grid->wavenumber(2));
    const Field bp = balakrishnan_apply(pw, 0.5, q);
    CHECK(norm_l2(bp - pw * k) / norm_l2(pw) < 1e-6);

    CHECK_THROWS_AS(balakrishnan_apply(f, 1.0, q), Error);
    CHECK_THROWS_AS(balakrishnan_apply(f, 0.0, q), Error);
}

TEST_CASE("functionals: phase invariance, real-field momentum, translation invariance") {
    auto grid = make_grid(64, 25.0);
    Rng rng(5);
    Field u = random_smooth_field(grid, rng);
    const Functionals base = functionals(u);
    const Functionals rot = functionals(u * std::exp(complexd(0.0, 0.7)));
    CHECK(std::abs(rot.mass - base.mass) / base.mass < 1e-12);
    CHECK(std::abs(rot.energy - base.energy) < 1e-12);
    CHECK(std::abs(rot.momentum[0] - base.momentum[0]) < 1e-12);

    const Functionals g = functionals(gaussian(grid, 3.0));
    CHECK(std::abs(g.momentum[0]) < 1e-12);
    CHECK(std::abs(g.momentum[1]) < 1e-12);

    // exact invariance under whole-cell translation
    const Field moved = translate(u, {4.0 * grid->spacing(), -7.0 * grid->spacing()});
    const Functionals m = functionals(moved);
    CHECK(std::abs(m.mass - base.mass) / base.mass < 1e-13);
    CHECK(std::abs(m.energy - base.energy) < 1e-11);
}

TEST_CASE("norms: parseval, plane-wave L3 vs direct summation, H-half dominates L2") {
    auto grid = make_grid(64, 25.0);
    Rng rng(6);
    Field u = random_smooth_field(grid, rng);
    CHECK(std::abs(norm_l2(u.to(Space::frequency)) - norm_l2(u)) / norm_l2(u) < 1e-12);

    const double amp = 1.7;
    const Field pw = plane_wave(grid, 3, 1, amp);
    const Norms nn = norms(pw);
    // direct pointwise summation oracle
    double acc = 0.0;
    for (const auto& v : pw.values()) acc += std::pow(std::abs(v), 3.0);
    const double direct = std::cbrt(acc * grid->cell_area());
    CHECK(nn.l3 == doctest::Approx(direct).epsilon(1e-12));
    // |pw| constant: L3 = A^{1/3} (L2)^{2/3}
    CHECK(nn.l3 == doctest::Approx(std::cbrt(amp) * std::pow(nn.l2, 2.0 / 3.0)).epsilon(1e-12));

    for (int k = 0; k < 5; ++k) {
        Field f = random_smooth_field(grid, rng);
        CHECK(norms(f).h_half >= norm_l2(f) * (1.0 - 1e-12));
    }
}

TEST_CASE("multiplier self-adjointness property") {
    auto grid = make_grid(64, 25.0);
    Rng rng(7);
    const Multiplier d = Multiplier::halfwave(grid);
    for (int k = 0; k < 5; ++k) {
        const Field f = real_part(random_smooth_field(grid, rng));
        const Field g = real_part(random_smooth_field(grid, rng));
        const double lhs = inner_product(apply_multiplier(f, d), g).real();
        const double rhs = inner_product(f, apply_multiplier(g, d)).real();
        CHECK(std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300) < 1e-10);
    }
}

TEST_CASE("boosted symbol positivity bound on the lattice") {
    auto grid = make_grid(64, 25.0);
    const std::array<double, 2> v{0.6, 0.3};
    const double speed = std::hypot(v[0], v[1]);
    const Multiplier b = Multiplier::boosted(grid, v);
    auto sym = b.symbol();
    for (std::size_t i = 0; i < grid->n(); ++i)
        for (std::size_t j = 0; j < grid->n(); ++j) {
            const double lower = (1.0 - speed) * grid->k_abs(i, j) + 1.0;
            CHECK(sym[i * grid->n() + j].real() >= lower - 1e-12);
        }
    CHECK_THROWS_AS(Multiplier::boosted(grid, {1.0, 0.0}), Error);
}
