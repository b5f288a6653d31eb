#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tissot/linalg.hpp"

namespace tissot {

/// Uniform rectangular grid of nodes; node (i, j) sits at
/// (x0 + i·dx, y0 + j·dy), with the last node placed exactly on x1 / y1.
/// Geographic grids use x = longitude and y = latitude, in radians.
struct GridSpec {
    double x0 = 0.0, x1 = 1.0;
    int nx = 2;
    double y0 = 0.0, y1 = 1.0;
    int ny = 2;

    /// Throws std::invalid_argument unless nx, ny >= 2 and the ranges are
    /// finite and non-empty.
    void validate() const;
    double dx() const { return (x1 - x0) / (nx - 1); }
    double dy() const { return (y1 - y0) / (ny - 1); }
    double x(int i) const { return i == nx - 1 ? x1 : x0 + i * dx(); }
    double y(int j) const { return j == ny - 1 ? y1 : y0 + j * dy(); }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    /// Row-major index (y outer, x inner).
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
};

/// Scalar values on a GridSpec; nodes outside the mask carry no value.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridSpec grid);

    const GridSpec& grid() const { return grid_; }
    bool has(int i, int j) const { return mask_[grid_.index(i, j)] != 0; }
    std::optional<double> at(int i, int j) const;
    /// Unchecked read of an in-mask node.
    double value(int i, int j) const { return values_[grid_.index(i, j)]; }
    void set(int i, int j, double v);
    void clear(int i, int j);
    std::size_t count() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
    std::vector<unsigned char> mask_;
};

}  // namespace tissot
