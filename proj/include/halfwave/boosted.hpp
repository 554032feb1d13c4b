//==============================================================================
// boosted.hpp
// Traveling-wave profiles: normalized fixed-point solves of
//   D Q_v + Q_v + i (v . grad) Q_v = |Q_v| Q_v,   |v| < 1,
// with continuation in the speed, plus the variational identities attached to
// the family (vanishing boosted energy, the sharp-constant identity, the
// momentum-sign pairing, and the mass curve).
//==============================================================================
#pragma once

#include "halfwave/ground_state.hpp"

namespace hw {

struct BoostedWave {
    std::array<double, 2> v{0.0, 0.0};
    Field q_v;               // complex profile
    double residual = 0.0;   // L2 norm of the equation defect
    double mass = 0.0;       // ||Q_v||_2^2
    double weinstein_mismatch = 0.0;  // two routes to C_v, relative
    double c_v = 0.0;                 // 3/(2 ||Q_v||_2)
    double momentum_projection = 0.0; // v . Re (Q_v, i grad Q_v), the sign pairing
    double energy_v = 0.0;            // boosted energy at the profile
    int iterations = 0;
};

struct BoostedOptions {
    double tol = 1e-9;
    int max_iter = 4000;
    double continuation_step = 0.1;
    int recenter_every = 25;
};

// Solve at speed v (2-vector) by continuation from the unboosted state in
// steps of at most continuation_step along the requested direction. An
// optional warm start skips the chain.
BoostedWave solve_boosted(const GridPtr& grid, std::array<double, 2> v,
                          const BoostedOptions& opts = {}, const Field* warm_start = nullptr);

// E_v(u) = 1/2 int conj(u) D u + 1/2 int conj(u) (i v.grad u) - 1/3 int |u|^3.
double boosted_energy(const Field& u, std::array<double, 2> v);

// Boosted Weinstein quotient int|u|^3 / (K_v(u) ||u||_2), K_v the boosted
// kinetic pairing.
double boosted_quotient(const Field& u, std::array<double, 2> v);

struct MassCurveRow {
    double speed = 0.0;
    double mass = 0.0;
    double residual = 0.0;
    double cv_mismatch = 0.0;
    double momentum_projection = 0.0;
    double energy_v = 0.0;
    double h_half = 0.0;  // H^{1/2} norm of the wave, normalization scale
};

// Continuation scan along e1; solves share warm starts. A solve failure
// aborts with the partial table preserved in the exception payload's rows.
std::vector<MassCurveRow> mass_curve(const GridPtr& grid, const std::vector<double>& speeds,
                                     const BoostedOptions& opts = {});

}  // namespace hw
