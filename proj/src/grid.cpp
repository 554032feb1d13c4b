#include "halfwave/grid.hpp"

#include <cmath>

namespace hw {

Grid2D::Grid2D(std::size_t n, double box_length) : n_(n), box_length_(box_length) {
    if (n < 8 || !is_power_of_two(n))
        fail(ErrorCode::invalid_argument, "grid: n must be a power of two >= 8");
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        fail(ErrorCode::invalid_argument, "grid: box_length must be positive");
    spacing_ = box_length_ / static_cast<double>(n_);
    coords_.resize(n_);
    wavenumbers_.resize(n_);
    const double k0 = 2.0 * M_PI / box_length_;
    for (std::size_t i = 0; i < n_; ++i) {
        coords_[i] = -0.5 * box_length_ + spacing_ * static_cast<double>(i);
        const long m = (i < n_ / 2) ? static_cast<long>(i)
                                    : static_cast<long>(i) - static_cast<long>(n_);
        wavenumbers_[i] = k0 * static_cast<double>(m);
    }
}

double Grid2D::k_abs(std::size_t i, std::size_t j) const {
    return std::hypot(wavenumbers_[i], wavenumbers_[j]);
}

GridPtr make_grid(std::size_t n, double box_length) {
    return std::make_shared<const Grid2D>(n, box_length);
}

QuadratureScheme QuadratureScheme::log_trapezoid(std::size_t nodes, double y_min,
                                                 double y_max) {
    if (nodes < 2) fail(ErrorCode::invalid_argument, "quadrature: need at least 2 nodes");
    QuadratureScheme q;
    q.s.resize(nodes);
    q.w.resize(nodes);
    const double h = (y_max - y_min) / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double y = y_min + h * static_cast<double>(i);
        const double s = std::exp(y);
        q.s[i] = s;
        // ds = e^y dy; trapezoid endpoint weights are halved.
        double w = h * s;
        if (i == 0 || i + 1 == nodes) w *= 0.5;
        q.w[i] = w;
    }
    return q;
}

}  // namespace hw
