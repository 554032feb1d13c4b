#include "halfwave/linearized.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "halfwave/report.hpp"

namespace hw {

LinearizedOp::LinearizedOp(LKind kind, Field q)
    : kind_(kind), q_(q.to(Space::physical)), dop_(Multiplier::halfwave(q.grid_ptr())) {}

Field LinearizedOp::apply(const Field& f) const {
    require_same_grid(f, q_, "linearized apply");
    const Field fp = f.to(Space::physical);
    Field out = apply_multiplier(fp, dop_);
    const double c = (kind_ == LKind::plus) ? 2.0 : 1.0;
    auto ov = out.values();
    auto fv = fp.values();
    auto qv = q_.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += fv[i] - c * qv[i] * fv[i];
    if (f.space() == Space::frequency) out.transform_inplace(Space::frequency);
    return out;
}

std::vector<Field> kernel_fields(const LinearizedOp& op) {
    if (op.kind() == LKind::minus) return {op.q()};
    auto [d1, d2] = gradient(op.q());
    return {std::move(d1), std::move(d2)};
}

namespace {

// Orthonormalize (modified Gram-Schmidt) and drop near-dependent vectors.
std::vector<Field> orthonormalize(std::vector<Field> vs) {
    std::vector<Field> basis;
    for (auto& v : vs) {
        Field w = v.to(Space::physical);
        for (const auto& b : basis) w -= b * inner_product(b, w);
        const double norm = norm_l2(w);
        if (norm > 1e-12) {
            w *= 1.0 / norm;
            basis.push_back(std::move(w));
        }
    }
    return basis;
}

void project_out(Field& f, const std::vector<Field>& basis) {
    for (const auto& b : basis) f -= b * inner_product(b, f);
}

}  // namespace

SolveResult solve_projected(const LinearizedOp& op, const Field& rhs,
                            const std::vector<Field>& constraints, const SolveOptions& opts) {
    const Field rhs_raw = rhs.to(Space::physical);
    const double rhs_norm = norm_l2(rhs_raw);
    if (!(rhs_norm > 0.0)) fail(ErrorCode::invalid_argument, "solve_projected: zero rhs");

    // Solvability pre-check: the kernel part of rhs must be discretization
    // noise, not structure.
    SolveResult out;
    const std::vector<Field> kernel = orthonormalize(kernel_fields(op));
    for (const auto& k : kernel) {
        const double overlap = std::abs(inner_product(k, rhs_raw)) / rhs_norm;
        out.solvability_defect = std::max(out.solvability_defect, overlap);
    }
    if (out.solvability_defect > opts.solvability_tol)
        fail(ErrorCode::solvability,
             "solve_projected: rhs overlaps the operator kernel (defect " +
                 format_double(out.solvability_defect) + ")");

    // Symmetric preconditioning by (D+1)^{-1/2}: the operator
    //   A~ = M^{1/2} (D + 1 - cQ) M^{1/2} = I - c M^{1/2} Q M^{1/2}
    // has a compressed spectrum, so MINRES converges in O(10^2) iterations
    // independently of the grid. Solve A~ y = M^{1/2} b, return x = M^{1/2} y.
    const Multiplier half_inv = Multiplier::radial(
        op.grid_ptr(), [](double k) { return 1.0 / std::sqrt(k + 1.0); });
    auto msqrt = [&](const Field& f) { return apply_multiplier(f, half_inv); };

    std::vector<Field> all;
    for (const auto& k : kernel_fields(op)) all.push_back(msqrt(k));
    for (const auto& c : constraints) all.push_back(msqrt(c));
    const std::vector<Field> basis = orthonormalize(std::move(all));

    Field b = msqrt(rhs_raw);
    project_out(b, basis);

    auto apply_projected = [&](const Field& y) {
        Field w = msqrt(op.apply(msqrt(y)));
        project_out(w, basis);
        return w;
    };

    const Field rhs_p = rhs_raw;
    Field x(rhs_p.grid_ptr(), Space::physical);
    Field r = b;
    double beta = norm_l2(r);

    Field v_prev(rhs_p.grid_ptr(), Space::physical);
    Field v = r * (1.0 / beta);
    double eta = beta;
    double c_old = 1.0, c_oldold = 1.0, s_old = 0.0, s_oldold = 0.0;
    double beta_old = 0.0;
    Field w(rhs_p.grid_ptr(), Space::physical);
    Field w_old(rhs_p.grid_ptr(), Space::physical);

    double rel = 1.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        Field av = apply_projected(v);
        const double alpha = inner_product(v, av).real();
        av -= v * alpha;
        av -= v_prev * beta_old;
        project_out(av, basis);
        const double beta_new = norm_l2(av);

        // Two previous Givens rotations applied to the new tridiagonal column.
        const double delta = c_old * alpha - c_oldold * s_old * beta_old;
        const double gamma2 = s_old * alpha + c_oldold * c_old * beta_old;
        const double gamma3 = s_oldold * beta_old;
        const double gamma1 = std::hypot(delta, beta_new);
        if (!(gamma1 > 0.0)) break;
        const double c_new = delta / gamma1;
        const double s_new = beta_new / gamma1;

        Field w_new = v;
        w_new -= w * gamma2;
        w_new -= w_old * gamma3;
        w_new *= 1.0 / gamma1;
        x += w_new * (c_new * eta);
        eta *= -s_new;

        w_old = std::move(w);
        w = std::move(w_new);
        v_prev = v;
        if (beta_new > 0.0) v = av * (1.0 / beta_new);
        beta_old = beta_new;
        c_oldold = c_old;
        c_old = c_new;
        s_oldold = s_old;
        s_old = s_new;

        rel = std::abs(eta) / norm_l2(b);
        out.iterations = it + 1;
        if (rel < opts.tol) break;
    }

    // Undo the preconditioning and verify against the plain operator, with
    // the genuinely unsolvable kernel directions removed.
    x = msqrt(x);
    std::vector<Field> plain = kernel_fields(op);
    for (const auto& c : constraints) plain.push_back(c);
    const std::vector<Field> plain_basis = orthonormalize(std::move(plain));
    Field check = op.apply(x);
    check -= rhs_p;
    project_out(check, plain_basis);
    out.residual = norm_l2(check) / rhs_norm;
    if (out.residual > 100.0 * opts.tol)
        fail(ErrorCode::numerical, "solve_projected: breakdown, residual " +
                                       format_double(out.residual) + " after " +
                                       std::to_string(out.iterations) + " iterations");
    out.x = std::move(x);
    return out;
}

SpectrumResult coercivity_spectrum(const LinearizedOp& op,
                                   const std::vector<Field>& constraints, std::uint64_t seed,
                                   int steps) {
    const std::vector<Field> basis = orthonormalize(constraints);
    Rng rng(seed);
    Field v = random_smooth_field(op.grid_ptr(), rng);
    project_out(v, basis);
    double nv = norm_l2(v);
    if (!(nv > 0.0)) fail(ErrorCode::invalid_argument, "coercivity_spectrum: empty subspace");
    v *= 1.0 / nv;

    std::vector<Field> lanczos{v};
    std::vector<double> alphas, betas;
    int prev_negative = -1;
    int stable_streak = 0;
    double prev_min = 0.0;
    SpectrumResult out;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    for (int it = 0; it < steps; ++it) {
        Field av = op.apply(lanczos.back());
        project_out(av, basis);
        const double alpha = inner_product(lanczos.back(), av).real();
        alphas.push_back(alpha);
        av -= lanczos.back() * alpha;
        if (lanczos.size() > 1) av -= lanczos[lanczos.size() - 2] * betas.back();
        // Full reorthogonalization keeps the Ritz counts honest.
        for (const auto& u : lanczos) av -= u * inner_product(u, av);
        project_out(av, basis);
        const double beta = norm_l2(av);

        const auto m = static_cast<Eigen::Index>(alphas.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            t(i, i) = alphas[static_cast<std::size_t>(i)];
            if (i + 1 < m)
                t(i, i + 1) = t(i + 1, i) = betas[static_cast<std::size_t>(i)];
        }
        eig.compute(t);
        int negatives = 0;
        for (Eigen::Index i = 0; i < m; ++i)
            if (eig.eigenvalues()(i) < -1e-10) ++negatives;
        out.min_rayleigh = eig.eigenvalues()(0);
        out.lanczos_steps = it + 1;

        const bool counts_stable = negatives == prev_negative;
        const bool value_stable =
            it > 0 && std::abs(out.min_rayleigh - prev_min) <
                          1e-12 * std::max(1.0, std::abs(out.min_rayleigh));
        prev_negative = negatives;
        prev_min = out.min_rayleigh;
        out.negative_directions = negatives;
        if (beta < 1e-12) break;
        stable_streak = (counts_stable && value_stable) ? stable_streak + 1 : 0;
        if (it > 30 && stable_streak >= 10) break;
        av *= 1.0 / beta;
        betas.push_back(beta);
        lanczos.push_back(std::move(av));
    }

    // Assemble the minimizing Ritz vector.
    const auto m = static_cast<Eigen::Index>(alphas.size());
    Field ritz(op.grid_ptr(), Space::physical);
    for (Eigen::Index i = 0; i < m && i < static_cast<Eigen::Index>(lanczos.size()); ++i)
        ritz += lanczos[static_cast<std::size_t>(i)] * eig.eigenvectors()(i, 0);
    const double rn = norm_l2(ritz);
    if (rn > 0.0) ritz *= 1.0 / rn;
    out.min_vector = std::move(ritz);
    return out;
}

CutoffProfile::CutoffProfile() {
    // Quintic p(r) on [1,2] with p(1)=1/4, p'(1)=1/2, p''(1)=1/2 (the r^2/4
    // core) and p(2)=3-e^{-2}, p'(2)=e^{-2}, p''(2)=-e^{-2} (the far tail).
    Eigen::MatrixXd m(6, 6);
    Eigen::VectorXd rhs(6);
    auto row = [&](int r, double x, int deriv) {
        for (int p = 0; p < 6; ++p) {
            double c = 1.0;
            int e = p;
            for (int d = 0; d < deriv; ++d) {
                c *= e;
                e -= 1;
            }
            m(r, p) = (e < 0) ? 0.0 : c * std::pow(x, e);
        }
    };
    row(0, 1.0, 0);
    rhs(0) = 0.25;
    row(1, 1.0, 1);
    rhs(1) = 0.5;
    row(2, 1.0, 2);
    rhs(2) = 0.5;
    const double e2 = std::exp(-2.0);
    row(3, 2.0, 0);
    rhs(3) = 3.0 - e2;
    row(4, 2.0, 1);
    rhs(4) = e2;
    row(5, 2.0, 2);
    rhs(5) = -e2;
    Eigen::VectorXd sol = m.fullPivLu().solve(rhs);
    for (int i = 0; i < 6; ++i) bridge_[static_cast<std::size_t>(i)] = sol(i);
}

double CutoffProfile::value(double r) const {
    if (r <= 1.0) return 0.25 * r * r;
    if (r >= 2.0) return 3.0 - std::exp(-r);
    double acc = 0.0, p = 1.0;
    for (int i = 0; i < 6; ++i) {
        acc += bridge_[static_cast<std::size_t>(i)] * p;
        p *= r;
    }
    return acc;
}

double CutoffProfile::derivative(double r) const {
    if (r <= 1.0) return 0.5 * r;
    if (r >= 2.0) return std::exp(-r);
    double acc = 0.0, p = 1.0;
    for (int i = 1; i < 6; ++i) {
        acc += static_cast<double>(i) * bridge_[static_cast<std::size_t>(i)] * p;
        p *= r;
    }
    return acc;
}

Field CutoffProfile::sample_scaled(const GridPtr& grid, double A,
                                   std::array<double, 2> center) const {
    if (!(A > 0.0)) fail(ErrorCode::invalid_argument, "cutoff: A must be positive");
    Field f(grid, Space::physical);
    const std::size_t n = grid->n();
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = grid->coord(i) - center[0];
        for (std::size_t j = 0; j < n; ++j) {
            const double r = std::hypot(x1, grid->coord(j) - center[1]);
            f.at(i, j) = A * A * value(r / A);
        }
    }
    return f;
}

namespace {

Field spectral_laplacian(const Field& f) {
    auto grid = f.grid_ptr();
    return apply_multiplier(f, Multiplier::radial(grid, [](double k) { return -k * k; }));
}

}  // namespace

LocalizedFormResult localized_form(LKind kind, const Field& q, const Field& eps, double A,
                                   const CutoffProfile& phi, const QuadratureScheme& quad,
                                   bool clip_weight) {
    const Field eps_p = eps.to(Space::physical);
    auto grid = eps_p.grid_ptr();

    Field weight = spectral_laplacian(phi.sample_scaled(grid, A));
    LocalizedFormResult out;
    std::size_t negatives = 0;
    for (auto& w : weight.values()) {
        double wr = w.real();
        out.weight_min = std::min(out.weight_min, wr);
        if (wr < 0.0) ++negatives;
        if (clip_weight) wr = 1.0;
        w = complexd(wr, 0.0);
    }
    out.negative_fraction =
        static_cast<double>(negatives) / static_cast<double>(weight.size());

    const Field eps_hat = eps_p.to(Space::frequency);
    double virial = 0.0;
    for (std::size_t node = 0; node < quad.size(); ++node) {
        const double s = quad.s[node];
        const Field us = auxiliary_us(eps_hat, s);
        auto [g1, g2] = gradient(us);
        const Field g1p = g1.to(Space::physical);
        const Field g2p = g2.to(Space::physical);
        std::vector<double> terms(eps_p.size());
        auto wv = weight.values();
        auto a1 = g1p.values();
        auto a2 = g2p.values();
        for (std::size_t i = 0; i < terms.size(); ++i)
            terms[i] = wv[i].real() * (std::norm(a1[i]) + std::norm(a2[i]));
        virial += quad.w[node] * std::sqrt(s) * pairwise_sum(terms) * grid->cell_area();
    }

    const double c = (kind == LKind::plus) ? 2.0 : 1.0;
    const Field qp = q.to(Space::physical);
    std::vector<double> mass_terms(eps_p.size());
    auto ev = eps_p.values();
    auto qv = qp.values();
    for (std::size_t i = 0; i < mass_terms.size(); ++i)
        mass_terms[i] = (1.0 - c * qv[i].real()) * std::norm(ev[i]);
    out.value = virial + pairwise_sum(mass_terms) * grid->cell_area();
    return out;
}

double localized_bilaplacian_term(const Field& eps, double A, const CutoffProfile& phi,
                                  const QuadratureScheme& quad) {
    const Field eps_p = eps.to(Space::physical);
    auto grid = eps_p.grid_ptr();
    const Field weight = spectral_laplacian(spectral_laplacian(phi.sample_scaled(grid, A)));
    const Field eps_hat = eps_p.to(Space::frequency);
    double acc = 0.0;
    for (std::size_t node = 0; node < quad.size(); ++node) {
        const double s = quad.s[node];
        const Field us = auxiliary_us(eps_hat, s).to(Space::physical);
        std::vector<double> terms(eps_p.size());
        auto wv = weight.values();
        auto uv = us.values();
        for (std::size_t i = 0; i < terms.size(); ++i)
            terms[i] = wv[i].real() * std::norm(uv[i]);
        acc += quad.w[node] * std::sqrt(s) * pairwise_sum(terms) * grid->cell_area();
    }
    return std::abs(acc);
}

}  // namespace hw
