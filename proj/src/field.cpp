#include "tissot/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tissot {

void GridSpec::validate() const {
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
    if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) || !std::isfinite(y1))
        throw std::invalid_argument("grid ranges must be finite");
    if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("grid ranges must be non-empty");
}

ScalarField::ScalarField(GridSpec grid)
    : grid_(grid), values_(grid.size(), std::numeric_limits<double>::quiet_NaN()), mask_(grid.size(), 0) {
    grid_.validate();
}

std::optional<double> ScalarField::at(int i, int j) const {
    std::size_t k = grid_.index(i, j);
    if (!mask_[k]) return std::nullopt;
    return values_[k];
}

void ScalarField::set(int i, int j, double v) {
    std::size_t k = grid_.index(i, j);
    values_[k] = v;
    mask_[k] = 1;
}

void ScalarField::clear(int i, int j) {
    std::size_t k = grid_.index(i, j);
    values_[k] = std::numeric_limits<double>::quiet_NaN();
    mask_[k] = 0;
}

std::size_t ScalarField::count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

}  // namespace tissot
