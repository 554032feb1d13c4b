#include "halfwave/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace hw {

namespace {

// Per-size FFTW plan pair. Plans are created once under a lock and then only
// executed (fftw_execute_dft is thread-safe); FFTW_UNALIGNED lets us run them
// on whatever buffers the fields own. FFTW_ESTIMATE keeps planning
// deterministic.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

PlanPair& plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<complexd> scratch(n * n);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pair;
    const int ni = static_cast<int>(n);
    pair.forward = fftw_plan_dft_2d(ni, ni, ptr, ptr, FFTW_FORWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    pair.backward = fftw_plan_dft_2d(ni, ni, ptr, ptr, FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, pair).first->second;
}

}  // namespace

Field::Field(GridPtr grid, Space space)
    : grid_(std::move(grid)), space_(space), values_(grid_->size(), complexd(0.0, 0.0)) {}

Field::Field(GridPtr grid, Space space, std::vector<complexd> values)
    : grid_(std::move(grid)), space_(space), values_(std::move(values)) {
    if (values_.size() != grid_->size())
        fail(ErrorCode::invalid_argument, "field: value count does not match grid");
}

Field& Field::transform_inplace(Space target) {
    if (space_ == target) return *this;
    auto& plans = plans_for(grid_->n());
    auto* ptr = reinterpret_cast<fftw_complex*>(values_.data());
    if (target == Space::frequency) {
        fftw_execute_dft(plans.forward, ptr, ptr);
        const double scale = 1.0 / static_cast<double>(grid_->size());
        for (auto& v : values_) v *= scale;
    } else {
        fftw_execute_dft(plans.backward, ptr, ptr);
    }
    space_ = target;
    return *this;
}

Field Field::to(Space target) const {
    Field copy = *this;
    copy.transform_inplace(target);
    return copy;
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!a.grid().same_as(b.grid()))
        fail(ErrorCode::invalid_argument, std::string(where) + ": grid mismatch");
}

namespace {
void require_same_layout(const Field& a, const Field& b, const char* where) {
    require_same_grid(a, b, where);
    if (a.space() != b.space())
        fail(ErrorCode::invalid_argument, std::string(where) + ": space tag mismatch");
}
}  // namespace

Field& Field::operator+=(const Field& rhs) {
    require_same_layout(*this, rhs, "field +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& rhs) {
    require_same_layout(*this, rhs, "field -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
    return *this;
}

Field& Field::operator*=(complexd scalar) {
    for (auto& v : values_) v *= scalar;
    return *this;
}

Field& Field::operator*=(double scalar) {
    for (auto& v : values_) v *= scalar;
    return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(Field lhs, complexd scalar) { return lhs *= scalar; }
Field operator*(Field lhs, double scalar) { return lhs *= scalar; }
Field operator*(double scalar, Field rhs) { return rhs *= scalar; }

Field pointwise_multiply(const Field& a, const Field& b) {
    require_same_grid(a, b, "pointwise_multiply");
    if (a.space() != Space::physical || b.space() != Space::physical)
        fail(ErrorCode::invalid_argument, "pointwise_multiply: expects physical space");
    Field out = a;
    auto ov = out.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= bv[i];
    return out;
}

namespace {
template <typename T>
T pairwise_sum_impl(const T* xs, std::size_t count) {
    if (count <= 8) {
        T acc{};
        for (std::size_t i = 0; i < count; ++i) acc += xs[i];
        return acc;
    }
    const std::size_t half = count / 2;
    return pairwise_sum_impl(xs, half) + pairwise_sum_impl(xs + half, count - half);
}
}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_sum_impl(xs.data(), xs.size()); }
complexd pairwise_sum(std::span<const complexd> xs) {
    return pairwise_sum_impl(xs.data(), xs.size());
}

complexd inner_product(const Field& f, const Field& g) {
    require_same_layout(f, g, "inner_product");
    std::vector<complexd> terms(f.size());
    auto fv = f.values();
    auto gv = g.values();
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::conj(fv[i]) * gv[i];
    const complexd raw = pairwise_sum(terms);
    if (f.space() == Space::physical) return raw * f.grid().cell_area();
    const double l = f.grid().box_length();
    return raw * (l * l);
}

double norm_l2(const Field& f) {
    std::vector<double> terms(f.size());
    auto fv = f.values();
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(fv[i]);
    const double raw = pairwise_sum(terms);
    const double measure = (f.space() == Space::physical)
                               ? f.grid().cell_area()
                               : f.grid().box_length() * f.grid().box_length();
    return std::sqrt(raw * measure);
}

double norm_lp(const Field& f, double p) {
    if (f.space() != Space::physical)
        fail(ErrorCode::invalid_argument, "norm_lp: expects physical space");
    std::vector<double> terms(f.size());
    auto fv = f.values();
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::pow(std::abs(fv[i]), p);
    return std::pow(pairwise_sum(terms) * f.grid().cell_area(), 1.0 / p);
}

Field conj(const Field& f) {
    Field out = f;
    for (auto& v : out.values()) v = std::conj(v);
    return out;
}

Field real_part(const Field& f) {
    Field out = f;
    for (auto& v : out.values()) v = complexd(v.real(), 0.0);
    return out;
}

Field imag_part(const Field& f) {
    Field out = f;
    for (auto& v : out.values()) v = complexd(v.imag(), 0.0);
    return out;
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

bool has_nan(const Field& f) {
    for (const auto& v : f.values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return true;
    return false;
}

}  // namespace hw
