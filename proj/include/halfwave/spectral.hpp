//==============================================================================
// spectral.hpp
// Fourier-multiplier operators on the periodic grid: the half-wave symbol |k|,
// boosted symbols |k| - v.k + 1, resolvents, fractional powers via the
// resolvent integral, the scaling generator, and the conserved functionals.
//==============================================================================
#pragma once

#include <array>
#include <functional>

#include "halfwave/field.hpp"

namespace hw {

// Sampled Fourier symbol m(k) on the grid's frequency lattice.
class Multiplier {
  public:
    Multiplier(GridPtr grid, std::vector<complexd> symbol);

    const Grid2D& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    std::span<const complexd> symbol() const { return symbol_; }

    // |k|, zero at k = 0.
    static Multiplier halfwave(const GridPtr& grid);
    // |k| - v.k + 1; requires |v| < 1 and checks positivity on the lattice.
    static Multiplier boosted(const GridPtr& grid, std::array<double, 2> v);
    // i k_axis (axis 0 or 1); the Nyquist row is zeroed.
    static Multiplier derivative(const GridPtr& grid, int axis);
    // general scalar symbol g(|k|)
    static Multiplier radial(const GridPtr& grid, const std::function<double(double)>& g);

  private:
    GridPtr grid_;
    std::vector<complexd> symbol_;
};

Field apply_multiplier(const Field& f, const Multiplier& m);

// Spectral partial derivatives (d/dx1, d/dx2).
std::pair<Field, Field> gradient(const Field& f);

// f + x . grad f with centered coordinates. Sets *boundary_warning (if given)
// when the L^2 mass in the outermost shell exceeds 1e-6 of the total.
Field scaling_generator(const Field& f, bool* boundary_warning = nullptr);

enum class ResolventOp { laplacian, halfwave };

// Exact frequency-space solve: f_hat/(|k|^2+s) or f_hat/(|k|+s); s > 0.
Field resolvent_solve(const Field& f, double s, ResolventOp op);

// u_s = sqrt(2/pi) (-Delta + s)^{-1} u, the auxiliary field of the resolvent
// integral representation.
Field auxiliary_us(const Field& u, double s);

// Relative error of  integral_0^inf sqrt(s) ||grad u_s||^2 ds  against
// ||D^{1/2} u||^2 evaluated with the direct symbol.
double halfwave_identity_check(const Field& f, const QuadratureScheme& q);

// Quadrature approximation of (-Delta)^beta via the resolvent integral,
// beta in (0,1).
Field balakrishnan_apply(const Field& f, double beta, const QuadratureScheme& q);

struct Functionals {
    double mass = 0.0;
    double energy = 0.0;
    std::array<double, 2> momentum{0.0, 0.0};
};

// M = int |u|^2, P = 2 int Re(u) grad Im(u)  (= Im int conj(u) grad u),
// E = 1/2 int conj(u) D u - 1/3 int |u|^3.
Functionals functionals(const Field& u);

struct Norms {
    double l2 = 0.0;
    double l3 = 0.0;
    double hdot_half = 0.0;  // multiplier |k|^{1/2}
    double h_half = 0.0;     // multiplier (1+|k|^2)^{1/4}
};

Norms norms(const Field& u);

// Centroid of |u|^2 in centered coordinates.
std::array<double, 2> centroid(const Field& u);

// Centroid weighted by |u|^4: insensitive to the slow power-law tails that
// bias the plain centroid on the (one-sided) periodic lattice. Used to pin
// the translation gauge inside the fixed-point solvers.
std::array<double, 2> core_centroid(const Field& u);

// v(x) = u(x - shift), via the spectral phase factor.
Field translate(const Field& u, std::array<double, 2> shift);

}  // namespace hw
