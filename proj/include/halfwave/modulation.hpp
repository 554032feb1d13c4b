//==============================================================================
// modulation.hpp
// Geometric decomposition  u = (1/lambda) [Q_P + eps]((x-alpha)/lambda) e^{i gamma}
// with the seven orthogonality conditions fixing (lambda, alpha, gamma, a, b),
// the deviation vector of the parameters from their leading-order laws, and
// the minimal-mass blowup experiment built on top of it.
//==============================================================================
#pragma once

#include "halfwave/blowup_profile.hpp"
#include "halfwave/evolution.hpp"

namespace hw {

// Evaluate the periodic trigonometric interpolant of src at the points
// scale * y + offset, with y running over the target grid. Used both to pull
// an evolving field back to profile coordinates and to push a profile onto a
// simulation grid.
Field sample_affine(const Field& src, const GridPtr& target, double scale,
                    std::array<double, 2> offset);

struct ModulationState {
    double lambda = 1.0;
    std::array<double, 2> alpha{0.0, 0.0};
    double gamma = 0.0;
    double a = 0.0;
    std::array<double, 2> b{0.0, 0.0};
    Field epsilon;  // on the profile grid
    std::array<double, 7> ortho_residuals{};
    double s_time = 0.0;
    double epsilon_l2 = 0.0;
    double spectral_tail = 0.0;  // fraction of the pulled-back field's energy
                                 // in the top-third modes
    int newton_iterations = 0;
};

struct ExtractOptions {
    double tol = 1e-10;
    int max_iter = 40;
    double fd_step = 1e-6;
    double condition_limit = 1e8;
    double validity_fraction = 0.5;  // ||eps|| must stay below this * ||Q||_2
};

// Newton iteration on the seven pairing conditions; the Jacobian is assembled
// by finite differences on the parameters. The guess must lie in the
// decomposition's validity region.
ModulationState extract(const Field& u, const ProfileBlocks& blocks,
                        const ModulationState& guess, const ExtractOptions& opts = {});

// The seven conditions evaluated directly (normalized), independent of the
// Newton path.
std::array<double, 7> orthogonality_residuals(const Field& u, const ProfileBlocks& blocks,
                                              const ModulationState& state);

// u on the target grid from a modulation state (eps optional, on profile grid).
Field synthesize(const ProfileBlocks& blocks, const ModulationState& state,
                 const GridPtr& target);

// Deviations from the leading-order laws, centered differences in rescaled
// time: (a_s + a^2/2, gamma_s - 1, lambda_s/lambda + a,
//        alpha_s/lambda - b (x2), b_s + a b (x2)).
std::vector<std::array<double, 7>> mod_vector(const std::vector<ModulationState>& states);

struct ExperimentConstants {
    double e0 = 1.0;                 // target energy (> 0)
    std::array<double, 2> p0{0.0, 0.0};
    double gamma0 = 0.0;
    std::array<double, 2> x0{0.0, 0.0};
    double a0 = 0.0;                 // sqrt(e1 / e0)
    std::array<double, 2> b0{0.0, 0.0};  // p0 / p1

    static ExperimentConstants make(double e0, std::array<double, 2> p0,
                                    const ProfileBlocks& blocks, double gamma0 = 0.0,
                                    std::array<double, 2> x0 = {0.0, 0.0});
};

// Parameter laws of the profile data at time t < 0:
//   lambda = t^2/(4 A0^2), a = -t/(2 A0^2), b = B0 lambda,
//   gamma = gamma0 - 4 A0^2/t, alpha = x0.
ModulationState minimal_mass_parameters(const ExperimentConstants& consts, double t);

// Profile initial data at t_init < 0 on the target grid. Requires
// lambda(t_init) >= 8 dx and the parameters inside the profile's range.
Field make_minimal_mass_data(const ExperimentConstants& consts, double t_init,
                             const ProfileBlocks& blocks, const GridPtr& grid,
                             ModulationState* state_out = nullptr);

struct BlowupSnapshot {
    double t = 0.0;
    ModulationState state;
    double hdot_half = 0.0;  // of the full field
    double mass = 0.0;
    double energy = 0.0;
};

struct BlowupReport {
    std::vector<BlowupSnapshot> snapshots;
    double lambda_exponent = 0.0;   // log lambda vs log |t| slope
    double lambda_coefficient = 0.0;  // c in lambda = c t^2
    double c_over_prediction = 0.0;   // c * 4 A0^2
    double a_over_sqrt_lambda_end = 0.0;
    double b_over_lambda_end = 0.0;
    double hdot_exponent = 0.0;     // log ||D^{1/2}u|| vs log |t| slope
    double eps_vs_lambda_slope = 0.0;
    double lambda_ratio = 0.0;      // max/min lambda over the fit window
    std::string stop_reason;
};

struct BlowupOptions {
    double ds = 1e-3;           // rescaled-time step; dt = ds * lambda_est
    double sample_dt = 0.01;
    double a_cap = 0.29;        // stop once |a| would leave the profile range
    bool forward = false;       // false: integrate backward from t_init toward
                                // more negative times (the construction's own
                                // direction); true: toward the blowup time
};

BlowupReport blowup_experiment(const ExperimentConstants& consts, double t_init,
                               const ProfileBlocks& blocks, const GridPtr& grid,
                               const BlowupOptions& opts = {});

}  // namespace hw
