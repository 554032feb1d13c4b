//==============================================================================
// linearized.hpp
// The linearized operators around the ground state,
//   L_plus  = D + 1 - 2Q,   L_minus = D + 1 - Q,
// constrained Krylov solves on their kernel complements, extreme-eigenvalue
// scans, and the localized quadratic forms built from the resolvent integral.
//==============================================================================
#pragma once

#include "halfwave/ground_state.hpp"

namespace hw {

enum class LKind { plus, minus };

class LinearizedOp {
  public:
    LinearizedOp(LKind kind, Field q);

    LKind kind() const { return kind_; }
    const Field& q() const { return q_; }
    GridPtr grid_ptr() const { return q_.grid_ptr(); }

    // D f + f - c Q f with c = 2 (plus) / 1 (minus).
    Field apply(const Field& f) const;

  private:
    LKind kind_;
    Field q_;  // physical space, real
    Multiplier dop_;
};

struct SolveOptions {
    double tol = 1e-10;          // relative residual target
    int max_iter = 5000;
    double solvability_tol = 1e-4;  // pre-check threshold on the kernel overlap
};

struct SolveResult {
    Field x;
    double residual = 0.0;            // ||L x - rhs|| / ||rhs||
    double solvability_defect = 0.0;  // max kernel overlap of rhs before projection
    int iterations = 0;
};

// Minimal-residual iteration for L x = rhs with the operator's kernel vectors
// plus any extra constraints projected out of the right-hand side and all
// iterates. Rejects right-hand sides whose kernel overlap exceeds
// solvability_tol (relative): that rejection certifies the solvability
// conditions numerically.
SolveResult solve_projected(const LinearizedOp& op, const Field& rhs,
                            const std::vector<Field>& constraints,
                            const SolveOptions& opts = {});

// Kernel vectors used for projections: computed gradient of Q for L_plus,
// computed Q itself for L_minus.
std::vector<Field> kernel_fields(const LinearizedOp& op);

struct SpectrumResult {
    double min_rayleigh = 0.0;
    Field min_vector;
    int negative_directions = 0;  // count of negative Ritz values, stabilized
    int lanczos_steps = 0;
};

// Smallest Rayleigh quotient of op on the orthogonal complement of the given
// constraints, via Lanczos with full reorthogonalization. Deterministic for a
// fixed seed.
SpectrumResult coercivity_spectrum(const LinearizedOp& op,
                                   const std::vector<Field>& constraints,
                                   std::uint64_t seed = 7, int steps = 120);

// Radial cutoff profile: r^2/4 for r <= 1 (2D Laplacian exactly 1 there),
// 3 - e^{-r} for r >= 2, quintic C^2 bridge on [1, 2].
class CutoffProfile {
  public:
    CutoffProfile();
    double value(double r) const;
    double derivative(double r) const;

    // phi_A(x) = A^2 phi(|x - center|/A) sampled on the grid, so that the
    // spectrally computed Laplacian tends to 1 on the core as A grows.
    Field sample_scaled(const GridPtr& grid, double A,
                        std::array<double, 2> center = {0.0, 0.0}) const;

  private:
    std::array<double, 6> bridge_;  // quintic coefficients on [1,2]
};

struct LocalizedFormResult {
    double value = 0.0;
    double weight_min = 0.0;      // most negative value of the sampled weight
    double negative_fraction = 0.0;  // fraction of lattice sites with weight < 0
};

// Quadratic form  int_0^inf sqrt(s) int W |grad eps_s|^2 dx ds
//                 + int |eps|^2 - c int Q |eps|^2,
// with W the spectral Laplacian of the scaled cutoff (clip_weight replaces W
// by 1, recovering the unlocalized form exactly).
LocalizedFormResult localized_form(LKind kind, const Field& q, const Field& eps, double A,
                                   const CutoffProfile& phi, const QuadratureScheme& quad,
                                   bool clip_weight = false);

// |int sqrt(s) int Delta^2(phi_A) |eps_s|^2 dx ds|, the bound's left side.
double localized_bilaplacian_term(const Field& eps, double A, const CutoffProfile& phi,
                                  const QuadratureScheme& quad);

struct CommutatorReport {
    double residual_displayed = 0.0;   // variant with the doubled, Q-weighted term
    double residual_derived = 0.0;     // variant from the commutator algebra
    double residual_gradient = 0.0;    // the gradient-block identity
    bool derived_wins = false;
    bool consistent = false;           // gradient identity agrees with the winner
};

}  // namespace hw
