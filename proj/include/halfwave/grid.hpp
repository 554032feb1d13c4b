//==============================================================================
// grid.hpp
// Periodic 2D grid with centered coordinates and the s-integration quadrature
// used by resolvent-integral operators.
//   * n points per axis (power of two, n >= 8), box length L, spacing L/n.
//   * coordinates x_i = -L/2 + i*L/n, wavenumbers k_m = 2*pi*m/L with m in the
//     symmetric range [-n/2, n/2).
//==============================================================================
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "halfwave/errors.hpp"

namespace hw {

class Grid2D {
  public:
    Grid2D(std::size_t n, double box_length);

    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ * n_; }
    double box_length() const { return box_length_; }
    double spacing() const { return spacing_; }
    double cell_area() const { return spacing_ * spacing_; }

    // Per-axis physical coordinate / wavenumber for index i in [0, n).
    double coord(std::size_t i) const { return coords_[i]; }
    double wavenumber(std::size_t i) const { return wavenumbers_[i]; }
    const std::vector<double>& coords() const { return coords_; }
    const std::vector<double>& wavenumbers() const { return wavenumbers_; }

    // |k| at lattice point (i, j); index order is row-major, x2 fastest.
    double k_abs(std::size_t i, std::size_t j) const;

    bool same_as(const Grid2D& other) const {
        return n_ == other.n_ && box_length_ == other.box_length_;
    }

    static bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

  private:
    std::size_t n_;
    double box_length_;
    double spacing_;
    std::vector<double> coords_;
    std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

GridPtr make_grid(std::size_t n, double box_length);

// Nodes and weights approximating integral_0^inf g(s) ds via the substitution
// s = exp(y) with y uniform on [y_min, y_max], trapezoid rule. The integrands
// fed to it decay exponentially in y on both ends for every lattice mode.
struct QuadratureScheme {
    std::vector<double> s;
    std::vector<double> w;

    static QuadratureScheme log_trapezoid(std::size_t nodes, double y_min = -30.0,
                                          double y_max = 30.0);
    std::size_t size() const { return s.size(); }
};

}  // namespace hw
