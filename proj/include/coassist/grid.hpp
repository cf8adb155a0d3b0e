#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace coassist {

// Uniformly spaced points lo, lo + h, ..., hi with n >= 2.
class Axis {
  public:
    Axis(double lo, double hi, std::size_t n);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t size() const { return n_; }
    double spacing() const { return step_; }
    double value(std::size_t i) const;
    std::size_t nearest(double x) const;
    // Index of the grid point equal to x up to rounding, if any.
    std::optional<std::size_t> index_of(double x) const;

  private:
    double lo_;
    double hi_;
    std::size_t n_;
    double step_;
};

// Cartesian product of per-dimension axes with row-major flat indexing
// (last axis fastest).
class ProductGrid {
  public:
    ProductGrid() = default;
    explicit ProductGrid(std::vector<Axis> axes);

    std::size_t dims() const { return axes_.size(); }
    std::size_t size() const { return size_; }
    const Axis& axis(std::size_t d) const { return axes_[d]; }
    const std::vector<Axis>& axes() const { return axes_; }

    std::vector<double> point(std::size_t flat) const;
    void point(std::size_t flat, std::span<double> out) const;
    std::size_t nearest(std::span<const double> x) const;
    std::optional<std::size_t> index_of(std::span<const double> x) const;

  private:
    std::vector<Axis> axes_;
    std::size_t size_ = 0;
};

// Per-agent action set: product of per-dimension action axes.
using ActionGrid = ProductGrid;
// Discretized state space used by the dynamic program.
using StateGrid = ProductGrid;

// Same axis repeated `dims` times.
ProductGrid uniform_grid(double lo, double hi, std::size_t n, std::size_t dims);

} // namespace coassist
