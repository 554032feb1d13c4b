#include "halfwave/modulation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

#include "halfwave/report.hpp"

namespace hw {

Field sample_affine(const Field& src, const GridPtr& target, double scale,
                    std::array<double, 2> offset) {
    const Field src_hat = src.to(Space::frequency);
    const std::size_t ns = src.grid().n();
    const std::size_t nt = target->n();

    using Mat = Eigen::MatrixXcd;
    Mat e1(nt, ns), e2(nt, ns);
    for (std::size_t p = 0; p < nt; ++p) {
        const double y = target->coord(p);
        for (std::size_t m = 0; m < ns; ++m) {
            const double k = src.grid().wavenumber(m);
            e1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) =
                std::exp(complexd(0.0, k * (scale * y + offset[0])));
            e2(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) =
                std::exp(complexd(0.0, k * (scale * y + offset[1])));
        }
    }
    Eigen::Map<const Mat> hat(src_hat.values().data(), static_cast<Eigen::Index>(ns),
                              static_cast<Eigen::Index>(ns));
    // values are row-major (x2 fastest); Eigen maps column-major, so the map
    // holds the transpose: hat(j, i) = u_hat(k_i, k_j).
    Mat out_t = e2 * hat * e1.transpose();  // out_t(q, p) = field(p, q)

    Field out(target, Space::physical);
    for (std::size_t p = 0; p < nt; ++p)
        for (std::size_t q = 0; q < nt; ++q)
            out.at(p, q) = out_t(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p));
    return out;
}

namespace {

struct PairingSet {
    Field q_p;
    std::array<Field, 7> v;  // pairing fields in sigma order
    std::array<double, 7> norm;
};

PairingSet pairing_set(const ProfileBlocks& bl, double a, const std::array<double, 2>& b) {
    ProfileParams p;
    p.a = a;
    p.b = b;
    PairingSet out{profile_field(bl, p), {}, {}};
    out.v[0] = scaling_generator(out.q_p);
    out.v[1] = profile_da(bl, p);
    out.v[2] = profile_db(bl, p, 0);
    out.v[3] = profile_db(bl, p, 1);
    auto [g1, g2] = gradient(out.q_p);
    out.v[4] = std::move(g1);
    out.v[5] = std::move(g2);
    // sigma_7 pairs (eps_2, rho_1) + (eps_1, rho_2) = -Im <eps, conj(rho)>.
    Field rho = bl.rho1;
    {
        const Field r2 = bl.rho2(a, b);
        auto rv = rho.values();
        auto r2v = r2.values();
        for (std::size_t i = 0; i < rv.size(); ++i)
            rv[i] = complexd(rv[i].real(), -r2v[i].real());
    }
    out.v[6] = std::move(rho);
    const double qn = norm_l2(bl.q);
    for (int i = 0; i < 7; ++i) out.norm[static_cast<std::size_t>(i)] =
        std::max(norm_l2(out.v[static_cast<std::size_t>(i)]) * qn, 1e-300);
    return out;
}

// Pull u back to profile coordinates: w(y) = e^{-i gamma} lambda u(lambda y + alpha).
Field pull_back(const Field& u, const GridPtr& profile_grid, double lambda,
                const std::array<double, 2>& alpha, double gamma) {
    Field w = sample_affine(u, profile_grid, lambda, alpha);
    w *= lambda * std::exp(complexd(0.0, -gamma));
    return w;
}

std::array<double, 7> sigma_of(const Field& w, const PairingSet& ps) {
    Field eps = w;
    eps -= ps.q_p;
    std::array<double, 7> sigma{};
    for (int i = 0; i < 7; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        sigma[idx] = -inner_product(eps, ps.v[idx]).imag() / ps.norm[idx];
    }
    return sigma;
}

std::array<double, 7> sigma_at(const Field& u, const ProfileBlocks& bl,
                               const double* params) {
    const double lambda = params[0];
    if (!(lambda > 0.0)) fail(ErrorCode::numerical, "extract: lambda left (0, inf)");
    const std::array<double, 2> alpha{params[1], params[2]};
    const double gamma = params[3];
    const double a = params[4];
    const std::array<double, 2> b{params[5], params[6]};
    const PairingSet ps = pairing_set(bl, a, b);
    const Field w = pull_back(u, bl.q.grid_ptr(), lambda, alpha, gamma);
    return sigma_of(w, ps);
}

double tail_fraction(const Field& f) {
    const Field fh = f.to(Space::frequency);
    const std::size_t n = fh.grid().n();
    const long cut = static_cast<long>(n) / 3;
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const long m1 = (i < n / 2) ? static_cast<long>(i)
                                    : static_cast<long>(i) - static_cast<long>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const long m2 = (j < n / 2) ? static_cast<long>(j)
                                        : static_cast<long>(j) - static_cast<long>(n);
            const double e = std::norm(fh.at(i, j));
            total += e;
            if (std::abs(m1) > cut || std::abs(m2) > cut) tail += e;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

ModulationState extract(const Field& u, const ProfileBlocks& blocks,
                        const ModulationState& guess, const ExtractOptions& opts) {
    double params[7] = {guess.lambda, guess.alpha[0], guess.alpha[1], guess.gamma,
                        guess.a,      guess.b[0],     guess.b[1]};

    // Validity region: the guessed decomposition must already be close.
    {
        const PairingSet ps = pairing_set(blocks, params[4], {params[5], params[6]});
        Field eps = pull_back(u, blocks.q.grid_ptr(), params[0], {params[1], params[2]},
                              params[3]);
        eps -= ps.q_p;
        if (norm_l2(eps) > opts.validity_fraction * norm_l2(blocks.q))
            fail(ErrorCode::numerical,
                 "extract: guess outside the decomposition validity region");
    }

    std::array<double, 7> sigma = sigma_at(u, blocks, params);
    ModulationState out;
    for (int it = 0; it < opts.max_iter; ++it) {
        double worst = 0.0;
        for (double s : sigma) worst = std::max(worst, std::abs(s));
        out.newton_iterations = it;
        if (worst < opts.tol) break;
        if (it + 1 == opts.max_iter)
            fail(ErrorCode::numerical, "extract: Newton did not converge (|sigma| = " +
                                           format_double(worst) + ")");

        Eigen::Matrix<double, 7, 7> jac;
        for (int j = 0; j < 7; ++j) {
            double step = opts.fd_step;
            if (j == 0) step *= std::max(params[0], 0.1);
            double perturbed[7];
            std::copy(params, params + 7, perturbed);
            perturbed[j] += step;
            const std::array<double, 7> sp = sigma_at(u, blocks, perturbed);
            for (int i = 0; i < 7; ++i)
                jac(i, j) = (sp[static_cast<std::size_t>(i)] -
                             sigma[static_cast<std::size_t>(i)]) /
                            step;
        }
        Eigen::JacobiSVD<Eigen::Matrix<double, 7, 7>> svd(
            jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double cond =
            svd.singularValues()(0) / std::max(svd.singularValues()(6), 1e-300);
        if (cond > opts.condition_limit)
            fail(ErrorCode::numerical,
                 "extract: pairing Jacobian ill-conditioned (cond = " + format_double(cond) +
                     ")");
        Eigen::Matrix<double, 7, 1> rhs;
        for (int i = 0; i < 7; ++i) rhs(i) = -sigma[static_cast<std::size_t>(i)];
        const Eigen::Matrix<double, 7, 1> delta = svd.solve(rhs);
        for (int j = 0; j < 7; ++j) params[j] += delta(j);
        sigma = sigma_at(u, blocks, params);
    }

    out.lambda = params[0];
    out.alpha = {params[1], params[2]};
    out.gamma = params[3];
    out.a = params[4];
    out.b = {params[5], params[6]};
    if (!(out.lambda > 0.0)) fail(ErrorCode::numerical, "extract: converged lambda <= 0");

    const PairingSet ps = pairing_set(blocks, out.a, out.b);
    const Field w = pull_back(u, blocks.q.grid_ptr(), out.lambda, out.alpha, out.gamma);
    out.epsilon = w;
    out.epsilon -= ps.q_p;
    out.epsilon_l2 = norm_l2(out.epsilon);
    out.spectral_tail = tail_fraction(w);
    out.ortho_residuals = orthogonality_residuals(u, blocks, out);
    return out;
}

std::array<double, 7> orthogonality_residuals(const Field& u, const ProfileBlocks& blocks,
                                              const ModulationState& state) {
    // Direct evaluation, separate from the Newton machinery: rebuild eps and
    // form each pairing from its real and imaginary parts.
    const ProfileParams p{state.a, state.b};
    Field w = sample_affine(u, blocks.q.grid_ptr(), state.lambda, state.alpha);
    w *= state.lambda * std::exp(complexd(0.0, -state.gamma));
    Field eps = w - profile_field(blocks, p);
    const Field e1f = real_part(eps);
    const Field e2f = imag_part(eps);

    auto pair_j = [&](const Field& v) {
        // (eps_2, v_1) - (eps_1, v_2), normalized.
        const double raw = inner_product(e2f, real_part(v)).real() -
                           inner_product(e1f, imag_part(v)).real();
        return raw / std::max(norm_l2(v) * norm_l2(blocks.q), 1e-300);
    };

    std::array<double, 7> res{};
    const Field q_p = profile_field(blocks, p);
    res[0] = pair_j(scaling_generator(q_p));
    res[1] = pair_j(profile_da(blocks, p));
    res[2] = pair_j(profile_db(blocks, p, 0));
    res[3] = pair_j(profile_db(blocks, p, 1));
    auto [g1, g2] = gradient(q_p);
    res[4] = pair_j(g1);
    res[5] = pair_j(g2);
    const Field rho2f = blocks.rho2(state.a, state.b);
    const double raw7 = inner_product(e2f, blocks.rho1).real() +
                        inner_product(e1f, rho2f).real();
    const double n7 = std::hypot(norm_l2(blocks.rho1), norm_l2(rho2f)) * norm_l2(blocks.q);
    res[6] = raw7 / std::max(n7, 1e-300);
    return res;
}

Field synthesize(const ProfileBlocks& blocks, const ModulationState& state,
                 const GridPtr& target) {
    if (!(state.lambda > 0.0))
        fail(ErrorCode::invalid_argument, "synthesize: lambda must be positive");
    ProfileParams p{state.a, state.b};
    Field v = profile_field(blocks, p);
    if (state.epsilon.size() == v.size() && state.epsilon_l2 > 0.0) v += state.epsilon;
    Field u = sample_affine(v, target, 1.0 / state.lambda,
                            {-state.alpha[0] / state.lambda, -state.alpha[1] / state.lambda});
    u *= std::exp(complexd(0.0, state.gamma)) / state.lambda;
    return u;
}

std::vector<std::array<double, 7>> mod_vector(const std::vector<ModulationState>& states) {
    if (states.size() < 3)
        fail(ErrorCode::invalid_argument, "mod_vector: need at least 3 states");
    const bool increasing = states[1].s_time > states[0].s_time;
    for (std::size_t i = 1; i < states.size(); ++i) {
        const bool step_up = states[i].s_time > states[i - 1].s_time;
        if (step_up != increasing || states[i].s_time == states[i - 1].s_time)
            fail(ErrorCode::invalid_argument, "mod_vector: rescaled times not monotone");
    }

    std::vector<std::array<double, 7>> out;
    for (std::size_t i = 1; i + 1 < states.size(); ++i) {
        const auto& lo = states[i - 1];
        const auto& mid = states[i];
        const auto& hi = states[i + 1];
        const double ds = hi.s_time - lo.s_time;
        auto d = [&](double a, double b) { return (b - a) / ds; };

        std::array<double, 7> mod{};
        mod[0] = d(lo.a, hi.a) + 0.5 * mid.a * mid.a;
        mod[1] = d(lo.gamma, hi.gamma) - 1.0;
        mod[2] = d(lo.lambda, hi.lambda) / mid.lambda + mid.a;
        mod[3] = d(lo.alpha[0], hi.alpha[0]) / mid.lambda - mid.b[0];
        mod[4] = d(lo.alpha[1], hi.alpha[1]) / mid.lambda - mid.b[1];
        mod[5] = d(lo.b[0], hi.b[0]) + mid.a * mid.b[0];
        mod[6] = d(lo.b[1], hi.b[1]) + mid.a * mid.b[1];
        out.push_back(mod);
    }
    return out;
}

ExperimentConstants ExperimentConstants::make(double e0, std::array<double, 2> p0,
                                              const ProfileBlocks& blocks, double gamma0,
                                              std::array<double, 2> x0) {
    if (!(e0 > 0.0)) fail(ErrorCode::invalid_argument, "experiment: E0 must be positive");
    ExperimentConstants c;
    c.e0 = e0;
    c.p0 = p0;
    c.gamma0 = gamma0;
    c.x0 = x0;
    c.a0 = std::sqrt(blocks.e1 / e0);
    c.b0 = {p0[0] / blocks.p1, p0[1] / blocks.p1};
    return c;
}

ModulationState minimal_mass_parameters(const ExperimentConstants& c, double t) {
    if (!(t < 0.0))
        fail(ErrorCode::invalid_argument, "minimal-mass data: t must be negative");
    ModulationState st;
    st.lambda = t * t / (4.0 * c.a0 * c.a0);
    st.a = -t / (2.0 * c.a0 * c.a0);
    st.b = {c.b0[0] * st.lambda, c.b0[1] * st.lambda};
    st.gamma = c.gamma0 - 4.0 * c.a0 * c.a0 / t;
    st.alpha = c.x0;
    return st;
}

Field make_minimal_mass_data(const ExperimentConstants& consts, double t_init,
                             const ProfileBlocks& blocks, const GridPtr& grid,
                             ModulationState* state_out) {
    ModulationState st = minimal_mass_parameters(consts, t_init);
    if (st.lambda < 8.0 * grid->spacing())
        fail(ErrorCode::invalid_argument,
             "minimal-mass data: scale " + format_double(st.lambda) +
                 " unresolvable; need lambda >= 8 dx = " +
                 format_double(8.0 * grid->spacing()) +
                 " (move t_init away from 0 or refine the grid)");
    ProfileParams p{st.a, st.b};
    p.validate();
    if (state_out) *state_out = st;
    return synthesize(blocks, st, grid);
}

BlowupReport blowup_experiment(const ExperimentConstants& consts, double t_init,
                               const ProfileBlocks& blocks, const GridPtr& grid,
                               const BlowupOptions& opts) {
    BlowupReport rep;
    ModulationState st;
    Field u = make_minimal_mass_data(consts, t_init, blocks, grid, &st);

    const double ref_hdot = norms(blocks.q).hdot_half;
    const double direction = opts.forward ? 1.0 : -1.0;
    const double floor = 4.0 * grid->spacing();

    double t = t_init;
    double lambda_est = st.lambda;
    st.s_time = 0.0;
    st.epsilon = Field(blocks.q.grid_ptr(), Space::physical);

    auto snapshot = [&](const ModulationState& state) {
        BlowupSnapshot snap;
        snap.t = t;
        snap.state = state;
        const Functionals f = functionals(u);
        snap.mass = f.mass;
        snap.energy = f.energy;
        snap.hdot_half = norms(u).hdot_half;
        rep.snapshots.push_back(std::move(snap));
    };
    snapshot(st);

    ModulationState prev = st;
    double next_sample = std::abs(opts.sample_dt);
    double traveled = 0.0;
    const std::size_t max_steps = 2000000;
    std::size_t steps = 0;
    rep.stop_reason = "parameter-range";

    while (steps < max_steps) {
        const double dt = direction * opts.ds * lambda_est;
        try {
            u = step(u, dt, false);
        } catch (const Error&) {
            rep.stop_reason = "nan";
            break;
        }
        t += dt;
        traveled += std::abs(dt);
        ++steps;

        if (steps % 8 == 0 || traveled >= next_sample) {
            const double hh = norms(u).hdot_half;
            if (hh > 0.0) {
                const double r = ref_hdot / hh;
                lambda_est = r * r;
            }
        }
        if (opts.forward && lambda_est < floor) {
            rep.stop_reason = "resolution-floor";
            break;
        }
        const double a_pred = -t / (2.0 * consts.a0 * consts.a0);
        if (!opts.forward && std::abs(a_pred) > opts.a_cap) {
            rep.stop_reason = "parameter-range";
            break;
        }

        if (traveled >= next_sample) {
            next_sample += std::abs(opts.sample_dt);
            ModulationState state = extract(u, blocks, prev);
            state.s_time = prev.s_time +
                           (t - rep.snapshots.back().t) * 0.5 *
                               (1.0 / prev.lambda + 1.0 / state.lambda);
            prev = state;
            snapshot(state);
        }
    }
    if (steps >= max_steps) rep.stop_reason = "step-budget";

    // Fits over the sampled window.
    if (rep.snapshots.size() >= 4) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, shy = 0, sxhy = 0;
        double lmin = 1e300, lmax = 0.0;
        const double m = static_cast<double>(rep.snapshots.size());
        for (const auto& s : rep.snapshots) {
            const double lx = std::log(std::abs(s.t));
            const double ly = std::log(s.state.lambda);
            const double lh = std::log(s.hdot_half);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            shy += lh;
            sxhy += lx * lh;
            lmin = std::min(lmin, s.state.lambda);
            lmax = std::max(lmax, s.state.lambda);
        }
        const double denom = m * sxx - sx * sx;
        rep.lambda_exponent = (m * sxy - sx * sy) / denom;
        rep.lambda_coefficient =
            std::exp((sy - rep.lambda_exponent * sx) / m);
        rep.c_over_prediction = rep.lambda_coefficient * 4.0 * consts.a0 * consts.a0;
        rep.hdot_exponent = (m * sxhy - sx * shy) / denom;
        rep.lambda_ratio = lmax / lmin;

        const auto& last = rep.snapshots.back().state;
        rep.a_over_sqrt_lambda_end = last.a / std::sqrt(last.lambda);
        const double b0n = std::hypot(consts.b0[0], consts.b0[1]);
        if (b0n > 0.0) {
            rep.b_over_lambda_end = (last.b[0] * consts.b0[0] + last.b[1] * consts.b0[1]) /
                                    (last.lambda * b0n);
        } else {
            rep.b_over_lambda_end = std::hypot(last.b[0], last.b[1]) / last.lambda;
        }

        // log ||eps|| vs log lambda, skipping the exact-data transient.
        double ex = 0, ey = 0, exx = 0, exy = 0;
        double en = 0;
        for (const auto& s : rep.snapshots) {
            if (s.state.epsilon_l2 < 1e-10) continue;
            const double lx = std::log(s.state.lambda);
            const double ly = std::log(s.state.epsilon_l2);
            ex += lx;
            ey += ly;
            exx += lx * lx;
            exy += lx * ly;
            en += 1.0;
        }
        if (en >= 4.0)
            rep.eps_vs_lambda_slope = (en * exy - ex * ey) / (en * exx - ex * ex);
    }
    return rep;
}

}  // namespace hw
