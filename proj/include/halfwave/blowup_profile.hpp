//==============================================================================
// blowup_profile.hpp
// Assembly of the approximate blowup profile from the correction blocks,
// the residual of its defining equation (with exact polynomial parameter
// derivatives), scaling-law fits for the residual, and the quadratic
// mass/energy/momentum expansions.
//==============================================================================
#pragma once

#include "halfwave/profile_blocks.hpp"

namespace hw {

struct ProfileParams {
    double a = 0.0;
    std::array<double, 2> b{0.0, 0.0};

    static constexpr double a_max = 0.3;
    static constexpr double b_max = 0.1;
    void validate() const;
};

struct AssembledProfile {
    ProfileParams params;
    Field q_p;       // complex profile
    Field phi_p;     // equation residual
    double phi_l2 = 0.0;
    double phi_h1 = 0.0;
    double qp_l2 = 0.0;
};

// q_p and its exact parameter derivatives (polynomial in a, b).
Field profile_field(const ProfileBlocks& blocks, const ProfileParams& p);
Field profile_da(const ProfileBlocks& blocks, const ProfileParams& p);
Field profile_db(const ProfileBlocks& blocks, const ProfileParams& p, int j);

AssembledProfile assemble(const ProfileBlocks& blocks, const ProfileParams& p);

struct OrderFit {
    double slope = 0.0;
    std::vector<double> values;     // parameter values kept after floor trim
    std::vector<double> residuals;  // matching residual norms
    std::size_t dropped = 0;        // points removed by the small-value floor
};

enum class FitAxis { a, b };

// Log-log slope of ||phi_p||_2 against the parameter along one axis. Values
// must increase; points below the block-residual floor are trimmed; a
// non-monotone remainder is rejected.
OrderFit residual_order_fit(const ProfileBlocks& blocks, FitAxis axis,
                            const std::vector<double>& values);

struct ExpansionCheck {
    double mass_gap = 0.0;       // |int |q_p|^2 - int Q^2|
    double energy_coeff = 0.0;   // E(q_p)/a^2       (b = 0 path)
    double momentum_coeff = 0.0; // P(q_p).b / |b|^2 (a = 0 path)
};

ExpansionCheck expansions_check(const ProfileBlocks& blocks, const ProfileParams& p);

}  // namespace hw
