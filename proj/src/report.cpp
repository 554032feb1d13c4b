#include "halfwave/report.hpp"

#include <cmath>
#include <cstdio>

#include "halfwave/field_io.hpp"

namespace hw {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != columns_)
        fail(ErrorCode::invalid_argument, "csv: row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_double(values[i]);
    }
    text_ += '\n';
}

void CsvWriter::write(const std::string& path) const { atomic_write_text(path, text_); }

double Rng::uniform(double lo, double hi) {
    // 53-bit mantissa in [0,1).
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform(0.0, 1.0);
    } while (u1 <= 1e-300);
    const double u2 = uniform(0.0, 1.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
}

Field random_smooth_field(const GridPtr& grid, Rng& rng, double k_cut) {
    Field f(grid, Space::frequency);
    const std::size_t n = grid->n();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double k = grid->k_abs(i, j);
            const double envelope = std::exp(-(k * k) / (2.0 * k_cut * k_cut));
            f.at(i, j) = envelope * complexd(rng.normal(), rng.normal());
        }
    }
    f.transform_inplace(Space::physical);
    const double norm = norm_l2(f);
    if (norm > 0.0) f *= 1.0 / norm;
    return f;
}

}  // namespace hw
