#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "halfwave/modulation.hpp"
#include "halfwave/report.hpp"

using namespace hw;

namespace {

struct Fixture {
    GroundState gs;
    ProfileBlocks blocks;
};

const Fixture& fixture() {
    static Fixture f = [] {
        GroundStateOptions opts;
        opts.tol = 1e-10;
        Fixture out{solve_ground_state(make_grid(256, 40.0), opts), {}};
        out.blocks = build_profile_blocks(out.gs);
        return out;
    }();
    return f;
}

ModulationState make_state(double lambda, std::array<double, 2> alpha, double gamma,
                           double a, std::array<double, 2> b) {
    ModulationState st;
    st.lambda = lambda;
    st.alpha = alpha;
    st.gamma = gamma;
    st.a = a;
    st.b = b;
    return st;
}

}  // namespace

TEST_CASE("sample_affine: identity map reproduces the field") {
    const auto& f = fixture();
    const Field u = f.blocks.s10;
    const Field same = sample_affine(u, u.grid_ptr(), 1.0, {0.0, 0.0});
    CHECK(norm_l2(same - u) / norm_l2(u) < 1e-12);
}

TEST_CASE("sample_affine: pure shift equals the spectral translation") {
    const auto& f = fixture();
    const Field u = f.blocks.s10;
    const std::array<double, 2> shift{1.7, -0.4};
    const Field a = sample_affine(u, u.grid_ptr(), 1.0, shift);   // u(y + shift)
    const Field b = translate(u, {-shift[0], -shift[1]});         // u(y + shift)
    CHECK(norm_l2(a - b) / norm_l2(a) < 1e-12);
}

TEST_CASE("synthesize/extract round trip recovers exact parameters") {
    const auto& f = fixture();
    const auto grid = make_grid(256, 40.0);
    const ModulationState truth =
        make_state(0.8, {0.3, -0.2}, 1.1, 0.05, {0.01, 0.0});
    const Field u = synthesize(f.blocks, truth, grid);

    ModulationState guess = make_state(0.85, {0.25, -0.15}, 1.0, 0.0, {0.0, 0.0});
    const ModulationState rec = extract(u, f.blocks, guess);
    CHECK(std::abs(rec.lambda - truth.lambda) < 1e-8);
    CHECK(std::abs(rec.alpha[0] - truth.alpha[0]) < 1e-8);
    CHECK(std::abs(rec.alpha[1] - truth.alpha[1]) < 1e-8);
    CHECK(std::abs(rec.gamma - truth.gamma) < 1e-8);
    CHECK(std::abs(rec.a - truth.a) < 1e-8);
    CHECK(std::abs(rec.b[0] - truth.b[0]) < 1e-8);
    CHECK(std::abs(rec.b[1] - truth.b[1]) < 1e-8);
    CHECK(rec.epsilon_l2 < 1e-8);
    for (double r : rec.ortho_residuals) CHECK(std::abs(r) < 1e-8);
}

TEST_CASE("extract round trip over random parameter draws") {
    const auto& f = fixture();
    const auto grid = make_grid(256, 40.0);
    Rng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        const ModulationState truth = make_state(
            rng.uniform(0.7, 1.3), {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)},
            rng.uniform(-1.5, 1.5), rng.uniform(-0.08, 0.08),
            {rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)});
        const Field u = synthesize(f.blocks, truth, grid);
        ModulationState guess = truth;
        guess.lambda *= 1.03;
        guess.gamma += 0.05;
        guess.a = 0.0;
        const ModulationState rec = extract(u, f.blocks, guess);
        CHECK(std::abs(rec.lambda - truth.lambda) < 1e-7);
        CHECK(std::abs(rec.a - truth.a) < 1e-7);
        CHECK(std::abs(rec.gamma - truth.gamma) < 1e-7);
    }
}

TEST_CASE("gauge consistency: a global phase shifts gamma only") {
    const auto& f = fixture();
    const auto grid = make_grid(256, 40.0);
    const ModulationState truth = make_state(0.9, {0.1, 0.2}, 0.4, 0.04, {0.0, 0.01});
    const Field u = synthesize(f.blocks, truth, grid);
    const double theta = 0.37;
    const Field rotated = u * std::exp(complexd(0.0, theta));
    ModulationState guess = truth;
    const ModulationState a = extract(u, f.blocks, guess);
    guess.gamma += theta;
    const ModulationState b = extract(rotated, f.blocks, guess);
    CHECK(std::abs(b.gamma - a.gamma - theta) < 1e-8);
    CHECK(std::abs(b.lambda - a.lambda) < 1e-9);
    CHECK(std::abs(b.a - a.a) < 1e-9);
}

TEST_CASE("extract rejects guesses outside the validity region") {
    const auto& f = fixture();
    const auto grid = make_grid(256, 40.0);
    const ModulationState truth = make_state(1.0, {0.0, 0.0}, 0.0, 0.0, {0.0, 0.0});
    const Field u = synthesize(f.blocks, truth, grid);
    ModulationState far = make_state(3.0, {5.0, 5.0}, 2.0, 0.0, {0.0, 0.0});
    CHECK_THROWS_AS(extract(u, f.blocks, far), Error);
}

TEST_CASE("pairing Jacobian diagonal matches the closed-form entries") {
    const auto& f = fixture();
    const auto grid = make_grid(256, 40.0);
    const ModulationState id = make_state(1.0, {0.0, 0.0}, 0.0, 0.0, {0.0, 0.0});
    const Field u = synthesize(f.blocks, id, grid);

    // sigma components from the independent path, unnormalized scale factors
    auto sigma_raw = [&](const ModulationState& st) {
        auto r = orthogonality_residuals(u, f.blocks, st);
        return r;
    };
    const double h = 1e-6;
    auto fd = [&](int param, int comp) {
        ModulationState up = id, dn = id;
        switch (param) {
            case 0: up.lambda += h; dn.lambda -= h; break;
            case 1: up.alpha[0] += h; dn.alpha[0] -= h; break;
            case 3: up.gamma += h; dn.gamma -= h; break;
            case 4: up.a += h; dn.a -= h; break;
            case 5: up.b[0] += h; dn.b[0] -= h; break;
            default: break;
        }
        return (sigma_raw(up)[static_cast<std::size_t>(comp)] -
                sigma_raw(dn)[static_cast<std::size_t>(comp)]) /
               (2.0 * h);
    };

    const double qn = norm_l2(f.blocks.q);
    const double e2 = 2.0 * f.blocks.e1;  // (L- S10, S10)
    // d sigma_lambda / d a = -(S10, L- S10), normalized by the pairing scale
    {
        const Field lam_qp = scaling_generator(profile_field(f.blocks, {0.0, {0.0, 0.0}}));
        const double scale = norm_l2(lam_qp) * qn;
        const double expect = -e2 / scale;
        CHECK(std::abs(fd(4, 0) - expect) / std::abs(expect) < 1e-4);
    }
    // d sigma_a / d lambda = -(S10, L- S10) with the d_a pairing scale
    {
        const double scale = norm_l2(profile_da(f.blocks, {0.0, {0.0, 0.0}})) * qn;
        const double expect = -e2 / scale;
        CHECK(std::abs(fd(0, 1) - expect) / std::abs(expect) < 1e-4);
    }
    // d sigma_rho / d gamma = (Q, rho1) (negative), rho pairing scale
    {
        const double rho_gamma = inner_product(f.blocks.q, f.blocks.rho1).real();
        const double scale = std::hypot(norm_l2(f.blocks.rho1), 0.0) * qn;
        const double expect = rho_gamma / scale;
        CHECK(std::abs(fd(3, 6) - expect) / std::abs(expect) < 1e-4);
    }
    // d sigma_x1 / d b1 = -(L- S01_1, S01_1), gradient pairing scale
    {
        auto [g1, g2] = gradient(profile_field(f.blocks, {0.0, {0.0, 0.0}}));
        (void)g2;
        const double scale = norm_l2(g1) * qn;
        const double expect = -f.blocks.p1_component[0] / scale;
        CHECK(std::abs(fd(5, 4) - expect) / std::abs(expect) < 1e-4);
    }
    // d sigma_b1 / d alpha1 = +(L- S01_1, S01_1), d_b pairing scale
    {
        const double scale = norm_l2(profile_db(f.blocks, {0.0, {0.0, 0.0}}, 0)) * qn;
        const double expect = f.blocks.p1_component[0] / scale;
        CHECK(std::abs(fd(1, 2) - expect) / std::abs(expect) < 1e-4);
    }
}

TEST_CASE("mod_vector: exact leading-order laws give a small deviation vector") {
    // synthetic trajectory following a_s = -a^2/2, b_s = -a b,
    // lambda_s = -a lambda, alpha_s = b lambda, gamma_s = 1
    std::vector<ModulationState> states;
    double a = 0.1, lambda = 1.0, gamma = 0.0;
    std::array<double, 2> b{0.02, -0.01}, alpha{0.0, 0.0};
    const double ds = 1e-3;
    double s = 0.0;
    for (int i = 0; i < 200; ++i) {
        ModulationState st;
        st.lambda = lambda;
        st.alpha = alpha;
        st.gamma = gamma;
        st.a = a;
        st.b = b;
        st.s_time = s;
        states.push_back(st);
        // RK4 on the law system keeps the trajectory at the FD-check floor
        auto rhs = [](double av, std::array<double, 2> bv, double lv,
                      std::array<double, 2>) {
            return std::array<double, 6>{-0.5 * av * av, -av * bv[0], -av * bv[1],
                                         -av * lv, bv[0] * lv, bv[1] * lv};
        };
        auto stepv = [&](double h) {
            auto k1 = rhs(a, b, lambda, alpha);
            auto k2 = rhs(a + 0.5 * h * k1[0], {b[0] + 0.5 * h * k1[1], b[1] + 0.5 * h * k1[2]},
                          lambda + 0.5 * h * k1[3], alpha);
            auto k3 = rhs(a + 0.5 * h * k2[0], {b[0] + 0.5 * h * k2[1], b[1] + 0.5 * h * k2[2]},
                          lambda + 0.5 * h * k2[3], alpha);
            auto k4 = rhs(a + h * k3[0], {b[0] + h * k3[1], b[1] + h * k3[2]},
                          lambda + h * k3[3], alpha);
            a += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
            b[0] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
            b[1] += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
            lambda += h / 6.0 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3]);
            alpha[0] += h / 6.0 * (k1[4] + 2 * k2[4] + 2 * k3[4] + k4[4]);
            alpha[1] += h / 6.0 * (k1[5] + 2 * k2[5] + 2 * k3[5] + k4[5]);
        };
        stepv(ds);
        gamma += ds;
        s += ds;
    }
    const auto mods = mod_vector(states);
    double worst = 0.0;
    for (const auto& m : mods)
        for (double v : m) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-6);

    // constant trajectory: the first entry is exactly a^2/2
    std::vector<ModulationState> frozen(states.begin(), states.begin() + 3);
    frozen[0].s_time = 0.0;
    frozen[1].s_time = 1.0;
    frozen[2].s_time = 2.0;
    for (auto& st : frozen) {
        st.a = 0.1;
        st.b = {0.0, 0.0};
        st.lambda = 1.0;
        st.alpha = {0.0, 0.0};
        st.gamma = 0.0;
    }
    const auto limits = mod_vector(frozen);
    CHECK(limits[0][0] == doctest::Approx(0.5 * 0.1 * 0.1));
    CHECK(limits[0][1] == doctest::Approx(-1.0));
}

TEST_CASE("mod_vector floor shrinks ~4x when the sampling step halves") {
    auto build = [](double ds) {
        std::vector<ModulationState> states;
        double a = 0.1, lambda = 1.0, gamma = 0.0, s = 0.0;
        for (int i = 0; i < 20; ++i) {
            ModulationState st;
            st.a = a;
            st.lambda = lambda;
            st.gamma = gamma;
            st.s_time = s;
            states.push_back(st);
            // exact solution of the laws with b = 0
            s += ds;
            a = 0.1 / (1.0 + 0.05 * s);
            lambda = 1.0 / ((1.0 + 0.05 * s) * (1.0 + 0.05 * s));
            gamma = s;
        }
        const auto mods = mod_vector(states);
        double worst = 0.0;
        for (const auto& m : mods)
            for (double v : m) worst = std::max(worst, std::abs(v));
        return worst;
    };
    const double coarse = build(0.02);
    const double fine = build(0.01);
    CHECK(coarse / fine > 3.0);
    CHECK(coarse / fine < 5.0);
}

TEST_CASE("mod_vector input validation") {
    std::vector<ModulationState> two(2);
    CHECK_THROWS_AS(mod_vector(two), Error);
    std::vector<ModulationState> bad(3);
    bad[0].s_time = 0.0;
    bad[1].s_time = 1.0;
    bad[2].s_time = 0.5;
    CHECK_THROWS_AS(mod_vector(bad), Error);
}

TEST_CASE("minimal-mass data: parameter plumbing at A0 = 1") {
    const auto& f = fixture();
    ExperimentConstants consts = ExperimentConstants::make(f.blocks.e1, {0.0, 0.0}, f.blocks);
    CHECK(consts.a0 == doctest::Approx(1.0));
    const ModulationState st = minimal_mass_parameters(consts, -1.0);
    CHECK(st.lambda == doctest::Approx(0.25));
    CHECK(st.a == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(st.gamma == doctest::Approx(consts.gamma0 + 4.0));
    CHECK_THROWS_AS(minimal_mass_parameters(consts, 1.0), Error);
}

TEST_CASE("minimal-mass data rejects unresolvable scales") {
    const auto& f = fixture();
    ExperimentConstants consts =
        ExperimentConstants::make(f.blocks.e1 / 4.0, {0.0, 0.0}, f.blocks);
    const auto grid = make_grid(128, 40.0);  // dx = 0.3125, 8 dx = 2.5
    CHECK_THROWS_AS(make_minimal_mass_data(consts, -2.3, f.blocks, grid, nullptr), Error);
}

TEST_CASE("minimal-mass data: mass approaches the critical mass as t -> 0") {
    const auto& f = fixture();
    // A0 = 2 gives room to shrink t while keeping lambda resolvable
    ExperimentConstants consts =
        ExperimentConstants::make(f.blocks.e1 / 4.0, {0.0, 0.0}, f.blocks);
    const auto grid = make_grid(1024, 8.0);
    const double q_mass = f.gs.mass;
    ModulationState st;
    const Field u1 = make_minimal_mass_data(consts, -2.38, f.blocks, grid, &st);
    const Field u2 = make_minimal_mass_data(consts, -1.19, f.blocks, grid, &st);
    const double gap1 = std::abs(functionals(u1).mass - q_mass);
    const double gap2 = std::abs(functionals(u2).mass - q_mass);
    const double ratio = gap1 / gap2;
    INFO("mass-gap ratio for t vs t/2: ", ratio);
    // quartic in t from the a^4 term of the mass expansion
    CHECK(ratio > 10.0);
    CHECK(ratio < 24.0);
}

TEST_CASE("minimal-mass data: energy matches the target as t -> 0") {
    const auto& f = fixture();
    ExperimentConstants consts =
        ExperimentConstants::make(f.blocks.e1 / 4.0, {0.0, 0.0}, f.blocks);
    const auto grid = make_grid(512, 8.0);
    const Field u = make_minimal_mass_data(consts, -2.38, f.blocks, grid, nullptr);
    const double e_meas = functionals(u).energy;
    CHECK(std::abs(e_meas - consts.e0) / consts.e0 < 0.1);
}
