#pragma once

#include <cstddef>
#include <vector>

namespace matsch {

/// Strictly increasing list of nonnegative evaluation points.
class EvalGrid {
public:
    EvalGrid() = default;
    /// Throws DomainError unless `points` is strictly increasing and >= 0.
    explicit EvalGrid(std::vector<double> points);

    /// lo, lo+step, ... up to hi (hi included when it lies on the lattice up to rounding).
    static EvalGrid range(double lo, double hi, double step);

    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] auto begin() const noexcept { return points_.begin(); }
    [[nodiscard]] auto end() const noexcept { return points_.end(); }

private:
    std::vector<double> points_;
};

}  // namespace matsch
