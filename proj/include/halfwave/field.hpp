//==============================================================================
// field.hpp
// Complex scalar field sampled on a Grid2D, tagged physical- or frequency-
// space, plus the FFT machinery moving between the two.
//
// Conventions:
//   * physical values f(x_i, x_j), row-major with the second axis fastest.
//   * frequency values u_hat(k) such that f(x) = sum_k u_hat(k) e^{i k.x};
//     forward transform therefore divides by n^2.
//   * inner products are integrals: (f,g) = sum conj(f) g * cell_area in
//     physical space, = L^2 * sum conj(f_hat) g_hat in frequency space.
// Reductions use pairwise summation so results are deterministic for fixed n.
//==============================================================================
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "halfwave/grid.hpp"

namespace hw {

using complexd = std::complex<double>;

enum class Space : unsigned char { physical = 0, frequency = 1 };

class Field {
  public:
    Field() = default;
    Field(GridPtr grid, Space space = Space::physical);
    Field(GridPtr grid, Space space, std::vector<complexd> values);

    const Grid2D& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    Space space() const { return space_; }
    std::size_t size() const { return values_.size(); }

    complexd& at(std::size_t i, std::size_t j) { return values_[i * grid_->n() + j]; }
    const complexd& at(std::size_t i, std::size_t j) const {
        return values_[i * grid_->n() + j];
    }
    std::span<complexd> values() { return values_; }
    std::span<const complexd> values() const { return values_; }

    Field to(Space target) const;       // transform copy (identity if already there)
    Field& transform_inplace(Space target);

    // In-place pointwise helpers (both operands must share grid and space).
    Field& operator+=(const Field& rhs);
    Field& operator-=(const Field& rhs);
    Field& operator*=(complexd scalar);
    Field& operator*=(double scalar);

  private:
    GridPtr grid_;
    Space space_ = Space::physical;
    std::vector<complexd> values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(Field lhs, complexd scalar);
Field operator*(Field lhs, double scalar);
Field operator*(double scalar, Field rhs);

// Pointwise product/quotient in physical space.
Field pointwise_multiply(const Field& a, const Field& b);

void require_same_grid(const Field& a, const Field& b, const char* where);

// Deterministic pairwise reductions.
double pairwise_sum(std::span<const double> xs);
complexd pairwise_sum(std::span<const complexd> xs);

// L^2 inner product (f,g) = integral conj(f) g, valid in either space
// (both fields must be in the same one).
complexd inner_product(const Field& f, const Field& g);
double norm_l2(const Field& f);
double norm_lp(const Field& f, double p);  // physical space only

Field conj(const Field& f);
Field real_part(const Field& f);
Field imag_part(const Field& f);
double max_abs(const Field& f);
bool has_nan(const Field& f);

}  // namespace hw
