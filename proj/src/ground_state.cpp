#include "halfwave/ground_state.hpp"

#include <cmath>

namespace hw {

namespace {

Field gaussian_seed(const GridPtr& grid, double amplitude) {
    Field f(grid, Space::physical);
    const std::size_t n = grid->n();
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = grid->coord(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double x2 = grid->coord(j);
            f.at(i, j) = amplitude * std::exp(-(x1 * x1 + x2 * x2) / 4.0);
        }
    }
    return f;
}

double equation_residual(const Field& q, const Multiplier& dop) {
    Field r = apply_multiplier(q, dop);
    r += q;
    r -= pointwise_multiply(q, q);
    return norm_l2(r);
}

}  // namespace

GroundState solve_ground_state(const GridPtr& grid, const GroundStateOptions& opts) {
    if (!(opts.tol > 0.0)) fail(ErrorCode::invalid_argument, "ground state: tol must be > 0");

    const Multiplier dop = Multiplier::halfwave(grid);
    const Multiplier resolvent =
        Multiplier::radial(grid, [](double k) { return 1.0 / (k + 1.0); });

    // Amplitude tuned so the first stabilizer is 1 (within [0.5, 2] always).
    Field q = gaussian_seed(grid, 1.0);
    {
        const Field dq = apply_multiplier(q, dop);
        const double num = (inner_product(q, dq) + inner_product(q, q)).real();
        const double den = inner_product(pointwise_multiply(q, q), q).real();
        double amp = num / den;
        if (opts.initial_amplitude > 0.0) amp = opts.initial_amplitude;
        q *= amp;
    }

    GroundState out;
    double stabilizer = 0.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        const Field dq = apply_multiplier(q, dop);
        const double num = (inner_product(q, dq) + inner_product(q, q)).real();
        const double den = inner_product(pointwise_multiply(q, q), q).real();
        if (!(den > 0.0) || !std::isfinite(den))
            fail(ErrorCode::numerical, "ground state: iteration collapsed to zero");
        stabilizer = num / den;

        Field next = apply_multiplier(pointwise_multiply(q, q), resolvent);
        next *= stabilizer * stabilizer;
        // Realness is the phase gauge; imaginary round-off is projected away.
        next = real_part(next);

        if ((it + 1) % opts.recenter_every == 0) {
            const auto c = core_centroid(next);
            next = real_part(translate(next, {-c[0], -c[1]}));
        }

        Field diff = next - q;
        const double step = norm_l2(diff) / std::max(norm_l2(next), 1e-300);
        q = std::move(next);

        const double resid = equation_residual(q, dop);
        out.residual_history.push_back(resid);
        out.iterations = it + 1;

        const double scale = std::max(norms(q).h_half, 1e-300);
        if (step < opts.tol && resid < opts.tol * scale) {
            out.q = q;
            out.residual = resid;
            out.mass = norm_l2(q) * norm_l2(q);
            out.gn_constant = 1.5 / norm_l2(q);
            out.stabilizer_final = stabilizer;
            out.decay_slope = decay_fit(q);
            return out;
        }
    }
    fail(ErrorCode::numerical,
         "ground state: no convergence after " + std::to_string(opts.max_iter) +
             " iterations (last residual " +
             std::to_string(out.residual_history.empty() ? -1.0
                                                         : out.residual_history.back()) +
             ")");
}

double weinstein_quotient(const Field& u) {
    const double l3 = norm_lp(u.to(Space::physical), 3.0);
    const Norms nn = norms(u);
    return (l3 * l3 * l3) / (nn.hdot_half * nn.hdot_half * nn.l2);
}

double gn_extremality(const GroundState& gs) {
    const double cubic = std::pow(norm_lp(gs.q, 3.0), 3.0);
    const Norms nn = norms(gs.q);
    const double bound = gs.gn_constant * nn.hdot_half * nn.hdot_half * nn.l2;
    return std::abs(cubic - bound) / cubic;
}

double decay_fit(const Field& q, bool* flagged) {
    const auto& g = q.grid();
    const double lo = g.box_length() / 8.0, hi = g.box_length() / 4.0;
    const std::size_t n = g.n();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.coord(i);
        if (r < lo || r > hi) continue;
        const double v = std::abs(q.at(i, n / 2));
        if (!(v > 0.0)) continue;
        const double lx = std::log(r), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count < 3) fail(ErrorCode::invalid_argument, "decay_fit: empty fit window");
    const double m = static_cast<double>(count);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (flagged) *flagged = std::abs(slope + 3.0) > 0.3;
    return slope;
}

}  // namespace hw
