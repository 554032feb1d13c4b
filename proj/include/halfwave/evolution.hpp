//==============================================================================
// evolution.hpp
// Time integration of  i u_t = D u - |u| u  by Strang splitting. Both
// substeps are exact flows (a pointwise phase rotation and a Fourier phase
// factor), so the L^2 mass is conserved to round-off by construction.
// Includes the localized energy functional used by the virial diagnostics.
//==============================================================================
#pragma once

#include <functional>
#include <optional>

#include "halfwave/linearized.hpp"

namespace hw {

struct EvolutionConfig {
    double dt = 1e-3;
    double t_start = 0.0;
    double t_end = 1.0;
    bool adaptive = false;        // dt scaled by the current scale estimate
    double adaptive_floor = 0.0;  // stop when the scale estimate drops below
    bool dealias = false;         // 2/3-rule mask on the nonlinear substep
    double sample_every = 0.0;    // 0 => every step
    double checkpoint_every = 0.0;
    std::string checkpoint_base;

    void validate() const;
};

struct TimeSample {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    std::array<double, 2> momentum{0.0, 0.0};
    double h_half = 0.0;
    double hdot_half = 0.0;
    double scale_estimate = 0.0;  // (||Q||_{Hdot}/||u||_{Hdot})^2 when reference set
};

struct TimeSeries {
    std::vector<TimeSample> samples;
};

enum class StopReason { completed, blowup_floor, nan_detected };

struct EvolveResult {
    Field u;
    TimeSeries series;
    StopReason stop = StopReason::completed;
    double t_final = 0.0;
    std::size_t steps = 0;
};

// One Strang step: half nonlinear phase, full linear phase, half nonlinear.
Field step(const Field& u, double dt, bool dealias = false);

// March cfg.t_start -> cfg.t_end. The optional reference norm fixes the scale
// estimate (||ref||/||u||)^2 in the Hdot^{1/2} norm; adaptive runs use it for
// dt scaling and the resolution-floor stop. The optional callback sees every
// sample as it is recorded.
EvolveResult evolve(const Field& u0, const EvolutionConfig& cfg,
                    double reference_hdot = 0.0,
                    const std::function<void(const TimeSample&, const Field&)>& on_sample = {});

// Localized energy: 1/2 ||D^{1/2}w||^2 + 1/2 ||w||^2/lambda
//   - int [F(u) - F(ref) - F'(ref).w] + (a/2) Im int A grad(phi)((x-alpha)/(A lambda)) . grad(w) conj(w),
// with w = u - ref and F(u) = |u|^3/3.
double evaluate_ja(const Field& u, const Field& ref, double lambda_est,
                   std::array<double, 2> alpha_est, double a_est, double A,
                   const CutoffProfile& phi);

// The explicit terms of the time derivative of the localized energy along an
// exact-soliton reference (forcing psi = 0): the f'(ref) pairing, the
// reference-motion cubic pairing, and the a-weighted virial terms.
double ja_explicit_terms(const Field& u, const Field& ref, const Field& dref_dt,
                         double lambda_est, std::array<double, 2> alpha_est, double a_est,
                         double A, const CutoffProfile& phi, const QuadratureScheme& quad);

}  // namespace hw
