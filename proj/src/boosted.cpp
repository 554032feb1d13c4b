#include "halfwave/boosted.hpp"

#include <cmath>

namespace hw {

namespace {

// K_v(u) = int conj(u) (D + i v.grad) u  (real for the real symbol |k| - v.k).
double boosted_kinetic(const Field& u, std::array<double, 2> v) {
    const Field uh = u.to(Space::frequency);
    const auto& g = uh.grid();
    const std::size_t n = g.n();
    std::vector<double> terms(uh.size());
    auto uv = uh.values();
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = g.wavenumber(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double k2 = g.wavenumber(j);
            const double sym = std::hypot(k1, k2) - (v[0] * k1 + v[1] * k2);
            terms[i * n + j] = sym * std::norm(uv[i * n + j]);
        }
    }
    const double l = g.box_length();
    return pairwise_sum(terms) * l * l;
}

Field abs_times(const Field& u) {
    Field out = u;
    for (auto& w : out.values()) w *= std::abs(w);
    return out;
}

struct IterationResult {
    Field q;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

IterationResult fixed_point(const GridPtr& grid, std::array<double, 2> v, Field seed,
                            const BoostedOptions& opts) {
    const Multiplier lin = Multiplier::boosted(grid, v);
    const Multiplier inv_lin = [&] {
        std::vector<complexd> sym(lin.symbol().begin(), lin.symbol().end());
        for (auto& s : sym) s = 1.0 / s;
        return Multiplier(grid, std::move(sym));
    }();

    Field q = std::move(seed);
    IterationResult out;
    for (int it = 0; it < opts.max_iter; ++it) {
        const Field lq = apply_multiplier(q, lin);
        const double num = inner_product(q, lq).real();
        const Field nl = abs_times(q);
        const double den = inner_product(nl, q).real();
        if (!(den > 0.0) || !std::isfinite(den))
            fail(ErrorCode::numerical, "boosted solve: iteration collapsed");
        const double stabilizer = num / den;

        Field next = apply_multiplier(nl, inv_lin);
        next *= stabilizer * stabilizer;

        if ((it + 1) % opts.recenter_every == 0) {
            const auto c = core_centroid(next);
            next = translate(next, {-c[0], -c[1]});
            // Phase gauge: make the lattice average real positive.
            const complexd mean = pairwise_sum(std::span<const complexd>(next.values()));
            const double mag = std::abs(mean);
            if (mag > 0.0) next *= std::conj(mean) / mag;
        }

        const double step = norm_l2(next - q) / std::max(norm_l2(next), 1e-300);
        q = std::move(next);
        out.iterations = it + 1;

        if (step < opts.tol) {
            Field resid = apply_multiplier(q, lin);
            resid -= abs_times(q);
            out.residual = norm_l2(resid);
            const double scale = std::max(norms(q).h_half, 1e-300);
            if (out.residual < 10.0 * opts.tol * scale) {
                out.q = std::move(q);
                out.converged = true;
                return out;
            }
        }
    }
    out.q = std::move(q);
    Field resid = apply_multiplier(out.q, lin);
    resid -= abs_times(out.q);
    out.residual = norm_l2(resid);
    return out;
}

}  // namespace

double boosted_energy(const Field& u, std::array<double, 2> v) {
    const double l3 = norm_lp(u.to(Space::physical), 3.0);
    return 0.5 * boosted_kinetic(u, v) - (l3 * l3 * l3) / 3.0;
}

double boosted_quotient(const Field& u, std::array<double, 2> v) {
    const double l3 = norm_lp(u.to(Space::physical), 3.0);
    return (l3 * l3 * l3) / (boosted_kinetic(u, v) * norm_l2(u));
}

BoostedWave solve_boosted(const GridPtr& grid, std::array<double, 2> v,
                          const BoostedOptions& opts, const Field* warm_start) {
    const double speed = std::hypot(v[0], v[1]);
    if (!(speed < 1.0 - 1e-3))
        fail(ErrorCode::invalid_argument, "boosted solve: requires |v| < 1 - 1e-3");
    if (!(opts.tol > 0.0)) fail(ErrorCode::invalid_argument, "boosted solve: tol must be > 0");

    Field seed(grid, Space::physical);
    if (warm_start) {
        seed = warm_start->to(Space::physical);
    } else {
        GroundStateOptions gopts;
        gopts.tol = std::min(1e-9, opts.tol);
        seed = solve_ground_state(grid, gopts).q;
    }

    // Continuation in speed along the fixed direction.
    std::array<double, 2> dir{1.0, 0.0};
    if (speed > 0.0) dir = {v[0] / speed, v[1] / speed};
    double reached = warm_start ? speed : 0.0;

    IterationResult res;
    res.q = std::move(seed);
    if (warm_start) {
        res = fixed_point(grid, v, std::move(res.q), opts);
    } else {
        double target = 0.0;
        do {
            target = std::min(speed, target + opts.continuation_step);
            const std::array<double, 2> vt{dir[0] * target, dir[1] * target};
            res = fixed_point(grid, vt, std::move(res.q), opts);
            if (!res.converged)
                fail(ErrorCode::numerical,
                     "boosted solve: no convergence at |v| = " + std::to_string(target) +
                         " (residual " + std::to_string(res.residual) + " after " +
                         std::to_string(res.iterations) + " iterations)");
            reached = target;
        } while (reached < speed);
    }
    if (!res.converged)
        fail(ErrorCode::numerical, "boosted solve: no convergence (residual " +
                                       std::to_string(res.residual) + ")");

    BoostedWave out;
    out.v = v;
    out.q_v = std::move(res.q);
    out.residual = res.residual;
    out.iterations = res.iterations;
    out.mass = norm_l2(out.q_v) * norm_l2(out.q_v);
    out.c_v = 1.5 / norm_l2(out.q_v);
    const double quotient = boosted_quotient(out.q_v, v);
    out.weinstein_mismatch = std::abs(quotient - out.c_v) / out.c_v;
    out.energy_v = boosted_energy(out.q_v, v);

    // v . Re (Q_v, i grad Q_v): minus the conserved momentum pairing.
    auto [d1, d2] = gradient(out.q_v);
    const complexd p1 = inner_product(out.q_v, d1);
    const complexd p2 = inner_product(out.q_v, d2);
    out.momentum_projection = v[0] * (complexd(0.0, 1.0) * p1).real() +
                              v[1] * (complexd(0.0, 1.0) * p2).real();
    return out;
}

std::vector<MassCurveRow> mass_curve(const GridPtr& grid, const std::vector<double>& speeds,
                                     const BoostedOptions& opts) {
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        if (!(speeds[i] > 0.0) || (i > 0 && !(speeds[i] > speeds[i - 1])))
            fail(ErrorCode::invalid_argument,
                 "mass curve: speeds must be strictly increasing in (0,1)");
    }
    std::vector<MassCurveRow> rows;
    Field warm(grid, Space::physical);
    bool have_warm = false;
    double prev_speed = 0.0;
    for (double s : speeds) {
        BoostedWave w;
        if (have_warm && s - prev_speed <= opts.continuation_step + 1e-12) {
            w = solve_boosted(grid, {s, 0.0}, opts, &warm);
        } else {
            w = solve_boosted(grid, {s, 0.0}, opts);
        }
        warm = w.q_v;
        have_warm = true;
        prev_speed = s;
        rows.push_back({s, w.mass, w.residual, w.weinstein_mismatch, w.momentum_projection,
                        w.energy_v, norms(w.q_v).h_half});
    }
    return rows;
}

}  // namespace hw
