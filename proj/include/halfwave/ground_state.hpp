//==============================================================================
// ground_state.hpp
// Normalized fixed-point (Petviashvili-type) solver for the ground state of
//   D Q + Q = Q^2,   Q real, positive, radial,
// plus the variational diagnostics attached to it: the sharp interpolation
// constant, the equation residual, and the far-field decay exponent.
//==============================================================================
#pragma once

#include <optional>

#include "halfwave/spectral.hpp"

namespace hw {

struct GroundState {
    Field q;                 // physical space, real positive
    double residual = 0.0;   // L2 norm of D Q + Q - Q^2
    double mass = 0.0;       // ||Q||_2^2
    double gn_constant = 0.0;    // 3 / (2 ||Q||_2)
    double decay_slope = 0.0;    // fitted log-log tail exponent
    double stabilizer_final = 0.0;  // last normalization factor M_m
    int iterations = 0;
    std::vector<double> residual_history;
};

struct GroundStateOptions {
    double tol = 1e-9;
    int max_iter = 2000;
    int recenter_every = 20;
    double initial_amplitude = 0.0;  // 0 => tuned so M_0 = 1
};

// Iterates Q <- M^2 (D+1)^{-1}(Q^2) with M = ((D+1)Q, Q)/(Q^2, Q) from a
// centered Gaussian until both the successive difference and the equation
// residual fall below tol (relative). Throws ErrorCode::numerical on
// non-convergence or collapse.
GroundState solve_ground_state(const GridPtr& grid, const GroundStateOptions& opts = {});

// Relative defect of  int Q^3 = C_opt ||D^{1/2}Q||^2 ||Q||_2.
double gn_extremality(const GroundState& gs);

// Weinstein quotient  int |u|^3 / (||D^{1/2}u||^2 ||u||_2).
double weinstein_quotient(const Field& u);

// Least-squares slope of log q(r) vs log r on r in [L/8, L/4] along the
// x1 axis. 'flagged' (optional) is set when the slope is incompatible with
// cubic decay (|slope + 3| > 0.3).
double decay_fit(const Field& q, bool* flagged = nullptr);

}  // namespace hw
