#include "coassist/grid.hpp"

#include "coassist/errors.hpp"

#include <cmath>
#include <string>

namespace coassist {

Axis::Axis(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n), step_(0.0) {
    if (n < 2) {
        throw ConfigError("grid needs at least 2 points, got " + std::to_string(n));
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        throw ConfigError("grid bounds must be finite with hi > lo");
    }
    step_ = (hi - lo) / static_cast<double>(n - 1);
}

double Axis::value(std::size_t i) const {
    if (i + 1 == n_) {
        return hi_;
    }
    return lo_ + static_cast<double>(i) * step_;
}

std::size_t Axis::nearest(double x) const {
    if (!(x > lo_)) {
        return 0;
    }
    if (!(x < hi_)) {
        return n_ - 1;
    }
    auto i = static_cast<std::size_t>(std::llround((x - lo_) / step_));
    return i < n_ ? i : n_ - 1;
}

std::optional<std::size_t> Axis::index_of(double x) const {
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    const double tol = 1e-9 * step_;
    if (x < lo_ - tol || x > hi_ + tol) {
        return std::nullopt;
    }
    std::size_t i = nearest(x);
    if (std::abs(value(i) - x) > tol) {
        return std::nullopt;
    }
    return i;
}

ProductGrid::ProductGrid(std::vector<Axis> axes) : axes_(std::move(axes)), size_(1) {
    if (axes_.empty()) {
        throw ConfigError("grid needs at least one dimension");
    }
    for (const auto& a : axes_) {
        size_ *= a.size();
    }
}

std::vector<double> ProductGrid::point(std::size_t flat) const {
    std::vector<double> out(axes_.size());
    point(flat, out);
    return out;
}

void ProductGrid::point(std::size_t flat, std::span<double> out) const {
    for (std::size_t d = axes_.size(); d-- > 0;) {
        const auto n = axes_[d].size();
        out[d] = axes_[d].value(flat % n);
        flat /= n;
    }
}

std::size_t ProductGrid::nearest(std::span<const double> x) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        flat = flat * axes_[d].size() + axes_[d].nearest(x[d]);
    }
    return flat;
}

std::optional<std::size_t> ProductGrid::index_of(std::span<const double> x) const {
    if (x.size() != axes_.size()) {
        return std::nullopt;
    }
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        auto i = axes_[d].index_of(x[d]);
        if (!i) {
            return std::nullopt;
        }
        flat = flat * axes_[d].size() + *i;
    }
    return flat;
}

ProductGrid uniform_grid(double lo, double hi, std::size_t n, std::size_t dims) {
    return ProductGrid(std::vector<Axis>(dims, Axis(lo, hi, n)));
}

} // namespace coassist
