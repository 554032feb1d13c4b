#include "halfwave/evolution.hpp"

#include <cmath>

#include "halfwave/field_io.hpp"
#include "halfwave/report.hpp"

namespace hw {

void EvolutionConfig::validate() const {
    if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "evolve: dt must be positive");
    if (!(t_end > t_start))
        fail(ErrorCode::invalid_argument, "evolve: t_end must exceed t_start");
}

namespace {

void nonlinear_phase(Field& u, double dt_half) {
    for (auto& v : u.values()) {
        const double phase = std::abs(v) * dt_half;
        v *= complexd(std::cos(phase), std::sin(phase));
    }
}

void linear_phase(Field& u, double dt, bool dealias) {
    u.transform_inplace(Space::frequency);
    const auto& g = u.grid();
    const std::size_t n = g.n();
    const long cut = static_cast<long>(n) / 3;
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = g.wavenumber(i);
        const long m1 = (i < n / 2) ? static_cast<long>(i)
                                    : static_cast<long>(i) - static_cast<long>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double k = std::hypot(k1, g.wavenumber(j));
            const double phase = -k * dt;
            complexd& v = u.at(i, j);
            v *= complexd(std::cos(phase), std::sin(phase));
            if (dealias) {
                const long m2 = (j < n / 2) ? static_cast<long>(j)
                                            : static_cast<long>(j) - static_cast<long>(n);
                if (std::abs(m1) > cut || std::abs(m2) > cut) v = complexd(0.0, 0.0);
            }
        }
    }
    u.transform_inplace(Space::physical);
}

}  // namespace

Field step(const Field& u, double dt, bool dealias) {
    Field out = u.to(Space::physical);
    nonlinear_phase(out, 0.5 * dt);
    linear_phase(out, dt, dealias);
    nonlinear_phase(out, 0.5 * dt);
    if (has_nan(out)) fail(ErrorCode::numerical, "step: NaN/Inf detected");
    return out;
}

EvolveResult evolve(const Field& u0, const EvolutionConfig& cfg, double reference_hdot,
                    const std::function<void(const TimeSample&, const Field&)>& on_sample) {
    cfg.validate();
    EvolveResult out;
    out.u = u0.to(Space::physical);

    double t = cfg.t_start;
    double next_sample = cfg.t_start;
    double next_checkpoint =
        cfg.checkpoint_every > 0.0 ? cfg.t_start + cfg.checkpoint_every : 0.0;
    int checkpoint_index = 0;

    auto record = [&](const Field& u) {
        const Functionals f = functionals(u);
        const Norms nn = norms(u);
        TimeSample s;
        s.t = t;
        s.mass = f.mass;
        s.energy = f.energy;
        s.momentum = f.momentum;
        s.h_half = nn.h_half;
        s.hdot_half = nn.hdot_half;
        if (reference_hdot > 0.0 && nn.hdot_half > 0.0) {
            const double r = reference_hdot / nn.hdot_half;
            s.scale_estimate = r * r;
        }
        out.series.samples.push_back(s);
        if (on_sample) on_sample(s, u);
        return s;
    };

    TimeSample last = record(out.u);
    if (cfg.sample_every > 0.0) next_sample = cfg.t_start + cfg.sample_every;

    while (t < cfg.t_end - 1e-15) {
        double dt = cfg.dt;
        if (cfg.adaptive && last.scale_estimate > 0.0) dt = cfg.dt * last.scale_estimate;
        dt = std::min(dt, cfg.t_end - t);

        Field next(out.u.grid_ptr());
        try {
            next = step(out.u, dt, cfg.dealias);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::numerical) {
                out.stop = StopReason::nan_detected;  // keep the last good state
                break;
            }
            throw;
        }
        out.u = std::move(next);
        t += dt;
        ++out.steps;

        const bool due_sample = cfg.sample_every <= 0.0 || t >= next_sample - 0.5 * dt;
        if (due_sample) {
            last = record(out.u);
            while (cfg.sample_every > 0.0 && next_sample <= t + 0.5 * dt)
                next_sample += cfg.sample_every;
        } else if (cfg.adaptive && reference_hdot > 0.0) {
            const double hh = norms(out.u).hdot_half;
            if (hh > 0.0) {
                const double r = reference_hdot / hh;
                last.scale_estimate = r * r;
            }
        }

        if (cfg.adaptive && cfg.adaptive_floor > 0.0 && last.scale_estimate > 0.0 &&
            last.scale_estimate < cfg.adaptive_floor) {
            out.stop = StopReason::blowup_floor;
            break;
        }

        if (cfg.checkpoint_every > 0.0 && !cfg.checkpoint_base.empty() &&
            t >= next_checkpoint - 0.5 * dt) {
            save_field(out.u, cfg.checkpoint_base + "_" + std::to_string(checkpoint_index++) +
                                  ".hwf");
            next_checkpoint += cfg.checkpoint_every;
        }
    }
    out.t_final = t;
    return out;
}

namespace {

// f(w) = |w| w and the real-linear pairing F'(w).h = Re(f(w) conj(h)).
Field f_of(const Field& w) {
    Field out = w;
    for (auto& v : out.values()) v *= std::abs(v);
    return out;
}

}  // namespace

double evaluate_ja(const Field& u, const Field& ref, double lambda_est,
                   std::array<double, 2> alpha_est, double a_est, double A,
                   const CutoffProfile& phi) {
    if (!(lambda_est > 0.0))
        fail(ErrorCode::invalid_argument, "localized energy: lambda must be positive");
    require_same_grid(u, ref, "localized energy");
    const Field up = u.to(Space::physical);
    const Field wp = ref.to(Space::physical);
    Field tu = up - wp;

    const Norms nn = norms(tu);
    double value = 0.5 * nn.hdot_half * nn.hdot_half + 0.5 * nn.l2 * nn.l2 / lambda_est;

    // - int [F(u) - F(ref) - F'(ref).(u - ref)]
    const Field fw = f_of(wp);
    std::vector<double> terms(up.size());
    auto uv = up.values();
    auto wv = wp.values();
    auto fv = fw.values();
    auto tv = tu.values();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double fu = std::pow(std::abs(uv[i]), 3.0) / 3.0;
        const double fr = std::pow(std::abs(wv[i]), 3.0) / 3.0;
        const double fprime = (fv[i] * std::conj(tv[i])).real();
        terms[i] = fu - fr - fprime;
    }
    value -= pairwise_sum(terms) * up.grid().cell_area();

    // (a/2) Im int A grad(phi)((x-alpha)/(A lambda)) . grad(tu) conj(tu).
    auto [g1, g2] = gradient(tu);
    const auto& g = up.grid();
    const std::size_t n = g.n();
    const double c = A * lambda_est;
    std::vector<double> vterms(up.size());
    auto a1 = g1.values();
    auto a2 = g2.values();
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = g.coord(i) - alpha_est[0];
        for (std::size_t j = 0; j < n; ++j) {
            const double x2 = g.coord(j) - alpha_est[1];
            const double r = std::hypot(x1, x2);
            const double w = (r > 0.0) ? A * phi.derivative(r / c) / r : 0.0;
            const std::size_t idx = i * n + j;
            const complexd dot = x1 * a1[idx] + x2 * a2[idx];
            vterms[idx] = (dot * std::conj(tv[idx])).imag() * w;
        }
    }
    value += 0.5 * a_est * pairwise_sum(vterms) * g.cell_area();
    return value;
}

double ja_explicit_terms(const Field& u, const Field& ref, const Field& dref_dt,
                         double lambda_est, std::array<double, 2> alpha_est, double a_est,
                         double A, const CutoffProfile& phi, const QuadratureScheme& quad) {
    require_same_grid(u, ref, "ja_explicit_terms");
    const Field up = u.to(Space::physical);
    const Field wp = ref.to(Space::physical);
    const Field tu = up - wp;
    const auto& g = up.grid();
    const double area = g.cell_area();

    auto fprime_of = [&](const Field& h) {
        // f'(w) h = 3/2 |w| h + 1/2 |w|^{-1} w^2 conj(h)
        Field out = h;
        auto ov = out.values();
        auto wv = wp.values();
        for (std::size_t i = 0; i < ov.size(); ++i) {
            const double mag = std::abs(wv[i]);
            const complexd quad_term =
                (mag > 0.0) ? (wv[i] * wv[i] / mag) * std::conj(ov[i]) : complexd(0.0, 0.0);
            ov[i] = 1.5 * mag * ov[i] + 0.5 * quad_term;
        }
        return out;
    };

    double total = 0.0;
    // -(1/lambda) (tu, f'(ref) tu)
    total -= inner_product(tu, fprime_of(tu)).real() / lambda_est;

    // -Re (d ref/dt, f(u) - f(ref) - f'(ref) tu)
    {
        Field rem = f_of(up) - f_of(wp);
        rem -= fprime_of(tu);
        total -= inner_product(dref_dt, rem).real();
    }

    // +(a / 2 lambda) int |tu|^2 / lambda
    const double l2 = norm_l2(tu);
    total += 0.5 * a_est / (lambda_est * lambda_est) * l2 * l2;

    // Virial quadrature terms with the profile Laplacians at (x-alpha)/(A lambda).
    const double c = A * lambda_est;
    Field sampled = phi.sample_scaled(up.grid_ptr(), c, alpha_est);
    const Multiplier lap = Multiplier::radial(up.grid_ptr(), [](double k) { return -k * k; });
    const Field w1 = apply_multiplier(sampled, lap);            // (Delta phi)(xi)
    const Field w2 = apply_multiplier(w1, lap) * (c * c);       // (Delta^2 phi)(xi)

    const Field tu_hat = tu.to(Space::frequency);
    double virial1 = 0.0, virial2 = 0.0;
    for (std::size_t node = 0; node < quad.size(); ++node) {
        const double s = quad.s[node];
        const Field us_hat = auxiliary_us(tu_hat, s);
        auto [d1, d2] = gradient(us_hat);
        const Field d1p = d1.to(Space::physical);
        const Field d2p = d2.to(Space::physical);
        const Field usp = us_hat.to(Space::physical);
        std::vector<double> t1(up.size()), t2(up.size());
        auto w1v = w1.values();
        auto w2v = w2.values();
        auto e1v = d1p.values();
        auto e2v = d2p.values();
        auto uv = usp.values();
        for (std::size_t i = 0; i < t1.size(); ++i) {
            t1[i] = w1v[i].real() * (std::norm(e1v[i]) + std::norm(e2v[i]));
            t2[i] = w2v[i].real() * std::norm(uv[i]);
        }
        const double sq = std::sqrt(s);
        virial1 += quad.w[node] * sq * pairwise_sum(t1) * area;
        virial2 += quad.w[node] * sq * pairwise_sum(t2) * area;
    }
    total -= 2.0 * a_est / lambda_est * virial1;
    total += 0.5 * a_est / (A * A * lambda_est * lambda_est * lambda_est) * virial2;

    // +a Re int A grad(phi)(xi) (3/4 |w|^{-1} |tu|^2 w + 1/4 |w|^{-1} tu^2 conj(w)) . conj(grad w)
    {
        auto [dw1, dw2] = gradient(wp);
        const std::size_t n = g.n();
        std::vector<double> terms(up.size());
        auto wv = wp.values();
        auto tv = tu.values();
        auto b1 = dw1.values();
        auto b2 = dw2.values();
        for (std::size_t i = 0; i < n; ++i) {
            const double x1 = g.coord(i) - alpha_est[0];
            for (std::size_t j = 0; j < n; ++j) {
                const double x2 = g.coord(j) - alpha_est[1];
                const double r = std::hypot(x1, x2);
                const double wgt = (r > 0.0) ? A * phi.derivative(r / c) / r : 0.0;
                const std::size_t idx = i * n + j;
                const double mag = std::abs(wv[idx]);
                if (!(mag > 0.0)) {
                    terms[idx] = 0.0;
                    continue;
                }
                const complexd amp = 0.75 / mag * std::norm(tv[idx]) * wv[idx] +
                                     0.25 / mag * tv[idx] * tv[idx] * std::conj(wv[idx]);
                const complexd dots =
                    x1 * std::conj(b1[idx]) + x2 * std::conj(b2[idx]);
                terms[idx] = wgt * (amp * dots).real();
            }
        }
        total += a_est * pairwise_sum(terms) * area;
    }
    return total;
}

}  // namespace hw
