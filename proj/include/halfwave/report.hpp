//==============================================================================
// report.hpp
// Deterministic CSV/JSON emission and the seeded random fields used by
// property checks. Number formatting is fixed (%.17g) so replaying a command
// with the same seed yields byte-identical payloads.
//==============================================================================
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "halfwave/field.hpp"

namespace hw {

std::string format_double(double v);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    const std::string& text() const { return text_; }
    void write(const std::string& path) const;

  private:
    std::size_t columns_;
    std::string text_;
};

// Deterministic RNG front end. std::mt19937_64 is pinned by the standard;
// the normal/uniform draws below avoid the implementation-defined
// std::*_distribution wrappers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi);
    double normal();
    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Smooth random field: Gaussian-enveloped random low modes, unit L^2 norm.
Field random_smooth_field(const GridPtr& grid, Rng& rng, double k_cut = 3.0);

}  // namespace hw
