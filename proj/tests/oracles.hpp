//==============================================================================
// oracles.hpp
// Test-only reference implementations kept independent of the library's
// spectral path: dense DFT-matrix operator application, dense resolvent
// solves, dense symmetric eigendecompositions, and finite-difference stencils.
//==============================================================================
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

#include "halfwave/field.hpp"

namespace hw::oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Flatten a field row-major (x2 fastest), matching Field storage.
inline Vec to_vector(const Field& f) {
    const auto vals = f.values();
    Vec v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

inline Field from_vector(const GridPtr& grid, const Vec& v, Space space = Space::physical) {
    std::vector<complexd> vals(static_cast<std::size_t>(v.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = v(static_cast<Eigen::Index>(i));
    return Field(grid, space, std::move(vals));
}

// Dense DFT synthesis matrix W with f = W f_hat, f_hat ordered like the
// library's frequency layout.
inline Mat dft_synthesis(const Grid2D& g) {
    const std::size_t n = g.n();
    const std::size_t total = n * n;
    Mat w(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < n; ++m)
                for (std::size_t l = 0; l < n; ++l) {
                    const double phase =
                        g.wavenumber(m) * g.coord(i) + g.wavenumber(l) * g.coord(j);
                    w(static_cast<Eigen::Index>(i * n + j),
                      static_cast<Eigen::Index>(m * n + l)) =
                        std::exp(complexd(0.0, phase));
                }
    return w;
}

// Dense application of a Fourier symbol in physical space.
inline Mat dense_symbol_operator(const Grid2D& g,
                                 const std::function<complexd(double, double)>& symbol) {
    const std::size_t n = g.n();
    const Mat w = dft_synthesis(g);
    Mat d = Mat::Zero(w.rows(), w.cols());
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t l = 0; l < n; ++l)
            d(static_cast<Eigen::Index>(m * n + l), static_cast<Eigen::Index>(m * n + l)) =
                symbol(g.wavenumber(m), g.wavenumber(l));
    // W D W^{-1}; W^{-1} = W^* / n^2 for this unitary-up-to-scale synthesis.
    return w * d * w.adjoint() / static_cast<double>(n * n);
}

// 4th-order centered finite-difference partial derivative (periodic).
inline Field fd_partial(const Field& f, int axis) {
    const Field fp = f.to(Space::physical);
    const auto& g = fp.grid();
    const std::size_t n = g.n();
    const double h = g.spacing();
    Field out(fp.grid_ptr(), Space::physical);
    auto wrap = [n](long i) { return static_cast<std::size_t>((i % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n)); };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto sample = [&](long off) {
                const long ii = axis == 0 ? static_cast<long>(i) + off : static_cast<long>(i);
                const long jj = axis == 1 ? static_cast<long>(j) + off : static_cast<long>(j);
                return fp.at(wrap(ii), wrap(jj));
            };
            out.at(i, j) =
                (-sample(2) + 8.0 * sample(1) - 8.0 * sample(-1) + sample(-2)) / (12.0 * h);
        }
    }
    return out;
}

}  // namespace hw::oracle
