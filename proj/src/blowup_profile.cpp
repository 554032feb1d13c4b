#include "halfwave/blowup_profile.hpp"

#include <algorithm>
#include <cmath>

#include "halfwave/report.hpp"

namespace hw {

void ProfileParams::validate() const {
    if (std::abs(a) > a_max || std::hypot(b[0], b[1]) > b_max)
        fail(ErrorCode::invalid_argument,
             "profile params out of the asymptotic range (|a| <= " + format_double(a_max) +
                 ", |b| <= " + format_double(b_max) + ")");
}

namespace {

void axpy_real_imag(Field& acc, const Field& re_part, double cr, const Field& im_part,
                    double ci) {
    auto av = acc.values();
    auto rv = re_part.values();
    auto iv = im_part.values();
    for (std::size_t i = 0; i < av.size(); ++i)
        av[i] += complexd(cr * rv[i].real(), ci * iv[i].real());
}

}  // namespace

Field profile_field(const ProfileBlocks& bl, const ProfileParams& p) {
    const double a = p.a;
    const auto& b = p.b;
    Field out = bl.q;  // real part starts from Q
    auto ov = out.values();
    auto add_re = [&](const Field& f, double c) {
        auto fv = f.values();
        for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += complexd(c * fv[i].real(), 0.0);
    };
    auto add_im = [&](const Field& f, double c) {
        auto fv = f.values();
        for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += complexd(0.0, c * fv[i].real());
    };
    add_im(bl.s10, a);
    for (int j = 0; j < 2; ++j) add_im(bl.s01[j], b[j]);
    for (int j = 0; j < 2; ++j) add_re(bl.t11[j], a * b[j]);
    add_re(bl.t20, a * a);
    for (int j = 0; j < 2; ++j) add_re(bl.t02[j], b[j] * b[j]);
    add_im(bl.s30, a * a * a);
    for (int j = 0; j < 2; ++j) add_im(bl.s21[j], a * a * b[j]);
    add_re(bl.t40, a * a * a * a);
    return out;
}

Field profile_da(const ProfileBlocks& bl, const ProfileParams& p) {
    const double a = p.a;
    const auto& b = p.b;
    Field out(bl.q.grid_ptr(), Space::physical);
    axpy_real_imag(out, bl.t20, 2.0 * a, bl.s10, 1.0);
    for (int j = 0; j < 2; ++j) axpy_real_imag(out, bl.t11[j], b[j], bl.s21[j], 2.0 * a * b[j]);
    axpy_real_imag(out, bl.t40, 4.0 * a * a * a, bl.s30, 3.0 * a * a);
    return out;
}

Field profile_db(const ProfileBlocks& bl, const ProfileParams& p, int j) {
    const double a = p.a;
    Field out(bl.q.grid_ptr(), Space::physical);
    axpy_real_imag(out, bl.t11[j], a, bl.s01[j], 1.0);
    axpy_real_imag(out, bl.t02[j], 2.0 * p.b[j], bl.s21[j], a * a);
    return out;
}

AssembledProfile assemble(const ProfileBlocks& bl, const ProfileParams& p) {
    p.validate();
    AssembledProfile out;
    out.params = p;
    out.q_p = profile_field(bl, p);

    // Residual of the renormalized equation with the leading-order parameter
    // laws a_s = -a^2/2, (b_j)_s = -a b_j entering through the exact
    // polynomial derivatives of the ansatz:
    //   phi = i a^2/2 d_a q_p + i a sum_j b_j d_bj q_p + D q_p + q_p
    //         - i a Lambda q_p + i sum_j b_j d_xj q_p - |q_p| q_p.
    const double a = p.a;
    const auto& b = p.b;
    Field phi = apply_multiplier(out.q_p, Multiplier::halfwave(bl.q.grid_ptr()));
    phi += out.q_p;

    Field da = profile_da(bl, p);
    phi += da * complexd(0.0, 0.5 * a * a);
    for (int j = 0; j < 2; ++j) {
        Field db = profile_db(bl, p, j);
        phi += db * complexd(0.0, a * b[j]);
    }
    phi += scaling_generator(out.q_p) * complexd(0.0, -a);
    auto [g1, g2] = gradient(out.q_p);
    phi += g1 * complexd(0.0, b[0]);
    phi += g2 * complexd(0.0, b[1]);

    // |q_p| q_p evaluated pointwise, no series truncation.
    Field nonlinear = out.q_p;
    for (auto& v : nonlinear.values()) v *= std::abs(v);
    phi -= nonlinear;

    out.phi_p = std::move(phi);
    out.phi_l2 = norm_l2(out.phi_p);
    auto [p1g, p2g] = gradient(out.phi_p);
    out.phi_h1 = std::sqrt(out.phi_l2 * out.phi_l2 + norm_l2(p1g) * norm_l2(p1g) +
                           norm_l2(p2g) * norm_l2(p2g));
    out.qp_l2 = norm_l2(out.q_p);
    return out;
}

OrderFit residual_order_fit(const ProfileBlocks& bl, FitAxis axis,
                            const std::vector<double>& values) {
    if (values.size() < 3)
        fail(ErrorCode::invalid_argument, "order fit: need at least 3 values");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            fail(ErrorCode::invalid_argument, "order fit: values must increase");

    double block_floor = 0.0;
    for (const auto& [name, r] : bl.solve_residuals) block_floor = std::max(block_floor, r);
    const double value_floor = 2.0 * std::pow(block_floor, 0.2);

    OrderFit fit;
    for (double v : values) {
        if (v < value_floor) {
            ++fit.dropped;
            continue;
        }
        ProfileParams p;
        if (axis == FitAxis::a)
            p.a = v;
        else
            p.b[0] = v;
        fit.values.push_back(v);
        fit.residuals.push_back(assemble(bl, p).phi_l2);
    }
    if (fit.values.size() < 3)
        fail(ErrorCode::numerical, "order fit: too few points above the residual floor");
    for (std::size_t i = 1; i < fit.residuals.size(); ++i)
        if (!(fit.residuals[i] > fit.residuals[i - 1]))
            fail(ErrorCode::numerical, "order fit: residuals not monotone, fit rejected");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(fit.values.size());
    for (std::size_t i = 0; i < fit.values.size(); ++i) {
        const double lx = std::log(fit.values[i]);
        const double ly = std::log(fit.residuals[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

ExpansionCheck expansions_check(const ProfileBlocks& bl, const ProfileParams& p) {
    p.validate();
    ExpansionCheck out;
    const Field q_p = profile_field(bl, p);
    const Functionals f = functionals(q_p);
    const Functionals base = functionals(bl.q);
    out.mass_gap = std::abs(f.mass - base.mass);
    // The discrete baseline energy of Q is a known truncation bias of the
    // periodic box; the expansion coefficient is measured relative to it.
    if (p.a != 0.0) out.energy_coeff = (f.energy - base.energy) / (p.a * p.a);
    const double b2 = p.b[0] * p.b[0] + p.b[1] * p.b[1];
    if (b2 > 0.0)
        out.momentum_coeff = (f.momentum[0] * p.b[0] + f.momentum[1] * p.b[1]) / b2;
    return out;
}

}  // namespace hw
