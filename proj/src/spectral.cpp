#include "halfwave/spectral.hpp"

#include <cmath>

namespace hw {

Multiplier::Multiplier(GridPtr grid, std::vector<complexd> symbol)
    : grid_(std::move(grid)), symbol_(std::move(symbol)) {
    if (symbol_.size() != grid_->size())
        fail(ErrorCode::invalid_argument, "multiplier: symbol size does not match grid");
}

Multiplier Multiplier::halfwave(const GridPtr& grid) {
    const std::size_t n = grid->n();
    std::vector<complexd> sym(grid->size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym[i * n + j] = grid->k_abs(i, j);
    return Multiplier(grid, std::move(sym));
}

Multiplier Multiplier::boosted(const GridPtr& grid, std::array<double, 2> v) {
    const double speed = std::hypot(v[0], v[1]);
    if (!(speed < 1.0))
        fail(ErrorCode::invalid_argument, "boosted multiplier: requires |v| < 1");
    const std::size_t n = grid->n();
    std::vector<complexd> sym(grid->size());
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = grid->wavenumber(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double k2 = grid->wavenumber(j);
            const double val = std::hypot(k1, k2) - (v[0] * k1 + v[1] * k2) + 1.0;
            if (!(val > 0.0))
                fail(ErrorCode::numerical, "boosted multiplier: symbol not positive");
            sym[i * n + j] = val;
        }
    }
    return Multiplier(grid, std::move(sym));
}

Multiplier Multiplier::derivative(const GridPtr& grid, int axis) {
    if (axis != 0 && axis != 1)
        fail(ErrorCode::invalid_argument, "derivative multiplier: axis must be 0 or 1");
    const std::size_t n = grid->n();
    std::vector<complexd> sym(grid->size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t idx = (axis == 0) ? i : j;
            // Nyquist mode of an odd symbol is ambiguous; zero it.
            const double k = (idx == n / 2) ? 0.0 : grid->wavenumber(idx);
            sym[i * n + j] = complexd(0.0, k);
        }
    }
    return Multiplier(grid, std::move(sym));
}

Multiplier Multiplier::radial(const GridPtr& grid, const std::function<double(double)>& g) {
    const std::size_t n = grid->n();
    std::vector<complexd> sym(grid->size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym[i * n + j] = g(grid->k_abs(i, j));
    return Multiplier(grid, std::move(sym));
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
    if (!f.grid().same_as(m.grid()))
        fail(ErrorCode::invalid_argument, "apply_multiplier: grid mismatch");
    Field out = f.to(Space::frequency);
    auto ov = out.values();
    auto sym = m.symbol();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= sym[i];
    out.transform_inplace(f.space());
    return out;
}

std::pair<Field, Field> gradient(const Field& f) {
    auto grid = f.grid_ptr();
    const Field fh = f.to(Space::frequency);
    Field d1 = apply_multiplier(fh, Multiplier::derivative(grid, 0));
    Field d2 = apply_multiplier(fh, Multiplier::derivative(grid, 1));
    d1.transform_inplace(f.space());
    d2.transform_inplace(f.space());
    return {std::move(d1), std::move(d2)};
}

Field scaling_generator(const Field& f, bool* boundary_warning) {
    const Field fp = f.to(Space::physical);
    if (boundary_warning) {
        // L^2 mass in the outermost cell ring relative to the total.
        const std::size_t n = fp.grid().n();
        double shell = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double a = std::norm(fp.at(i, j));
                total += a;
                if (i == 0 || j == 0 || i == n - 1 || j == n - 1) shell += a;
            }
        }
        *boundary_warning = total > 0.0 && shell > 1e-6 * total;
    }
    auto [d1, d2] = gradient(fp);
    Field out = fp;
    const auto& g = fp.grid();
    const std::size_t n = g.n();
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = g.coord(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double x2 = g.coord(j);
            out.at(i, j) = fp.at(i, j) + x1 * d1.at(i, j) + x2 * d2.at(i, j);
        }
    }
    if (f.space() == Space::frequency) out.transform_inplace(Space::frequency);
    return out;
}

Field resolvent_solve(const Field& f, double s, ResolventOp op) {
    if (!(s > 0.0)) fail(ErrorCode::invalid_argument, "resolvent_solve: s must be positive");
    auto grid = f.grid_ptr();
    Multiplier m = (op == ResolventOp::laplacian)
                       ? Multiplier::radial(grid, [s](double k) { return 1.0 / (k * k + s); })
                       : Multiplier::radial(grid, [s](double k) { return 1.0 / (k + s); });
    return apply_multiplier(f, m);
}

Field auxiliary_us(const Field& u, double s) {
    Field us = resolvent_solve(u, s, ResolventOp::laplacian);
    us *= std::sqrt(2.0 / M_PI);
    return us;
}

double halfwave_identity_check(const Field& f, const QuadratureScheme& q) {
    const Field fh = f.to(Space::frequency);
    const double l2 = norm_l2(fh);
    if (!(l2 > 0.0)) fail(ErrorCode::invalid_argument, "halfwave_identity_check: zero field");

    const auto& g = fh.grid();
    const std::size_t n = g.n();
    const double measure = g.box_length() * g.box_length();

    // ||grad u_s||^2 per node via Parseval, then the s-quadrature.
    double lhs = 0.0;
    std::vector<double> terms(fh.size());
    auto fv = fh.values();
    for (std::size_t node = 0; node < q.size(); ++node) {
        const double s = q.s[node];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double k = g.k_abs(i, j);
                const double us_hat = 1.0 / (k * k + s);
                terms[i * n + j] = (2.0 / M_PI) * k * k * us_hat * us_hat *
                                   std::norm(fv[i * n + j]);
            }
        }
        lhs += q.w[node] * std::sqrt(s) * pairwise_sum(terms) * measure;
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            terms[i * n + j] = g.k_abs(i, j) * std::norm(fv[i * n + j]);
    const double rhs = pairwise_sum(terms) * measure;
    return std::abs(lhs - rhs) / rhs;
}

Field balakrishnan_apply(const Field& f, double beta, const QuadratureScheme& q) {
    if (!(beta > 0.0 && beta < 1.0))
        fail(ErrorCode::invalid_argument, "balakrishnan_apply: beta must lie in (0,1)");
    auto grid = f.grid_ptr();
    const std::size_t n = grid->n();
    std::vector<complexd> sym(grid->size(), complexd(0.0, 0.0));
    const double prefactor = std::sin(M_PI * beta) / M_PI;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double k2 = grid->k_abs(i, j) * grid->k_abs(i, j);
            double acc = 0.0;
            for (std::size_t node = 0; node < q.size(); ++node) {
                const double s = q.s[node];
                acc += q.w[node] * std::pow(s, beta - 1.0) * k2 / (k2 + s);
            }
            sym[i * n + j] = prefactor * acc;
        }
    }
    return apply_multiplier(f, Multiplier(grid, std::move(sym)));
}

Functionals functionals(const Field& u) {
    const Field up = u.to(Space::physical);
    Functionals out;
    out.mass = norm_l2(up) * norm_l2(up);

    const Field du = apply_multiplier(up, Multiplier::halfwave(up.grid_ptr()));
    const double kinetic = inner_product(up, du).real();
    const double cubic = norm_lp(up, 3.0);
    out.energy = 0.5 * kinetic - (cubic * cubic * cubic) / 3.0;

    auto [d1, d2] = gradient(up);
    out.momentum[0] = inner_product(up, d1).imag();
    out.momentum[1] = inner_product(up, d2).imag();
    return out;
}

Norms norms(const Field& u) {
    Norms out;
    const Field up = u.to(Space::physical);
    out.l2 = norm_l2(up);
    out.l3 = norm_lp(up, 3.0);
    const Field uh = u.to(Space::frequency);
    auto grid = u.grid_ptr();
    out.hdot_half = norm_l2(
        apply_multiplier(uh, Multiplier::radial(grid, [](double k) { return std::sqrt(k); })));
    out.h_half = norm_l2(apply_multiplier(
        uh, Multiplier::radial(grid, [](double k) { return std::pow(1.0 + k * k, 0.25); })));
    return out;
}

namespace {
std::array<double, 2> weighted_centroid(const Field& u, int power) {
    const Field up = u.to(Space::physical);
    const auto& g = up.grid();
    const std::size_t n = g.n();
    double total = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double w = std::norm(up.at(i, j));
            if (power == 4) w *= w;
            total += w;
            m1 += w * g.coord(i);
            m2 += w * g.coord(j);
        }
    }
    if (total <= 0.0) return {0.0, 0.0};
    return {m1 / total, m2 / total};
}
}  // namespace

std::array<double, 2> centroid(const Field& u) { return weighted_centroid(u, 2); }

std::array<double, 2> core_centroid(const Field& u) { return weighted_centroid(u, 4); }

Field translate(const Field& u, std::array<double, 2> shift) {
    Field uh = u.to(Space::frequency);
    const auto& g = uh.grid();
    const std::size_t n = g.n();
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = g.wavenumber(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double k2 = g.wavenumber(j);
            uh.at(i, j) *= std::exp(complexd(0.0, -(k1 * shift[0] + k2 * shift[1])));
        }
    }
    uh.transform_inplace(u.space());
    return uh;
}

}  // namespace hw
