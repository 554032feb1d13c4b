//==============================================================================
// profile_blocks.hpp
// Order-by-order construction of the correction functions that assemble the
// approximate blowup profile: the imaginary blocks S_{1,0}, S_{0,1,j}, S_{3,0},
// S_{2,1,j}, the real blocks T_{1,1,j}, T_{2,0}, T_{0,2,j}, T_{4,0}, the pair
// (rho_1, rho_2), and the expansion constants e_1, p_1. Every right-hand side
// is checked against the relevant operator kernel before projection; those
// magnitudes certify the solvability identities.
//==============================================================================
#pragma once

#include <map>

#include "halfwave/linearized.hpp"

namespace hw {

struct ProfileBlocks {
    Field q;        // converged ground state (real)
    Field lambda_q; // scaling generator applied to q

    Field s10;
    std::array<Field, 2> s01;
    std::array<Field, 2> t11;
    Field t20;
    std::array<Field, 2> t02;
    Field s30;
    std::array<Field, 2> s21;
    Field t40;
    Field rho1;
    Field rho2_a;                 // coefficient of a in rho_2
    std::array<Field, 2> rho2_b;  // coefficients of b_j in rho_2

    double e1 = 0.0;        // 1/2 (L_minus s10, s10)
    double e1_cross = 0.0;  // 1/2 (Lambda q, s10), equal route
    double p1 = 0.0;        // sum_j (L_minus s01_j, s01_j)
    std::array<double, 2> p1_component{0.0, 0.0};

    std::map<std::string, double> solve_residuals;      // per block
    std::map<std::string, double> solvability;          // per order, pre-projection
    std::map<std::string, double> symmetry_defects;     // radial / antisymmetric
    CommutatorReport commutator;

    // rho_2 for given parameters: a * rho2_a + b1 * rho2_b[0] + b2 * rho2_b[1].
    Field rho2(double a, const std::array<double, 2>& b) const;
};

struct BlockBuildOptions {
    double tol = 1e-10;
    double solvability_tol = 1e-4;
};

ProfileBlocks build_profile_blocks(const GroundState& gs,
                                   const BlockBuildOptions& opts = {});

// Adjudicates the two written forms of the scaling-commutator identity for
// L_minus Lambda S_{1,0} (single vs doubled Q-weighted coupling term) plus the
// gradient-block analogue.
CommutatorReport commutator_adjudicate(const ProfileBlocks& blocks);

// Directory layout: one HWF1 file per block plus manifest.json.
void save_blocks(const ProfileBlocks& blocks, const std::string& dir);
ProfileBlocks load_blocks(const std::string& dir);
std::string blocks_manifest_json(const ProfileBlocks& blocks);

}  // namespace hw
