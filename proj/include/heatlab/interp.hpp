/// @file interp.hpp
/// @brief Cubic interpolation on uniformly spaced samples.
///
/// Catmull-Rom weights on a uniform grid; the two boundary cells borrow
/// quadratic ghost points so callers never special-case the ends. Evaluation
/// outside the sampled range throws: extrapolation is always a caller bug in
/// this lab. Local accuracy is O(h^4) for smooth data, which is far below the
/// 1e-3-level tolerances of the consumers that use tables at all (the exact
/// integrals are evaluated on quadrature checkpoints instead).
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace heatlab {

class UniformCubicTable {
  public:
    UniformCubicTable() = default;

    UniformCubicTable(double x0, double dx, std::vector<double> values)
        : x0_(x0), dx_(dx), y_(std::move(values)) {
        if (dx_ <= 0.0) throw std::invalid_argument("UniformCubicTable: spacing must be positive");
        if (y_.size() < 4)
            throw std::invalid_argument("UniformCubicTable: need at least four samples");
    }

    bool empty() const { return y_.empty(); }
    double x_front() const { return x0_; }
    double x_back() const { return x0_ + dx_ * static_cast<double>(y_.size() - 1); }

    double operator()(double x) const {
        if (y_.empty()) throw std::logic_error("UniformCubicTable: empty table");
        const double eps = 1e-9 * dx_;
        if (x < x0_ - eps || x > x_back() + eps)
            throw std::domain_error("UniformCubicTable: evaluation outside the sampled range");
        const std::size_t n = y_.size();
        double u = (x - x0_) / dx_;
        auto cell = static_cast<std::ptrdiff_t>(std::floor(u));
        if (cell < 0) cell = 0;
        if (cell > static_cast<std::ptrdiff_t>(n) - 2) cell = static_cast<std::ptrdiff_t>(n) - 2;
        const double s = u - static_cast<double>(cell);
        const auto i = static_cast<std::size_t>(cell);
        // Quadratic ghosts: second differences extrapolated past the ends.
        const double p0 = i > 0 ? y_[i - 1] : 3.0 * y_[0] - 3.0 * y_[1] + y_[2];
        const double p1 = y_[i];
        const double p2 = y_[i + 1];
        const double p3 =
            i + 2 < n ? y_[i + 2] : 3.0 * y_[n - 1] - 3.0 * y_[n - 2] + y_[n - 3];
        return 0.5 * (2.0 * p1 + s * (p2 - p0) +
                      s * s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) +
                      s * s * s * (3.0 * (p1 - p2) + p3 - p0));
    }

  private:
    double x0_ = 0.0, dx_ = 1.0;
    std::vector<double> y_;
};

}  // namespace heatlab
