#include "matsch/grid.hpp"

#include <cmath>

#include "matsch/errors.hpp"

namespace matsch {

EvalGrid::EvalGrid(std::vector<double> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]) || points_[i] < 0.0)
            throw DomainError("EvalGrid: points must be finite and nonnegative");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw DomainError("EvalGrid: points must be strictly increasing");
    }
}

EvalGrid EvalGrid::range(double lo, double hi, double step) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step))
        throw DomainError("EvalGrid::range: bounds must be finite");
    if (!(step > 0.0)) throw DomainError("EvalGrid::range: step must be positive");
    if (hi < lo) throw DomainError("EvalGrid::range: hi < lo");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-9)) + 1;
    if (count > 100000000) throw DomainError("EvalGrid::range: too many points");
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i) pts[i] = lo + static_cast<double>(i) * step;
    return EvalGrid(std::move(pts));
}

}  // namespace matsch
