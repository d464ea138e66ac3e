// Nodal scalar fields on an axis-aligned box grid, plus the stiffness- and
// density-perturbation field bundles. Fields optionally carry an exact
// closure; evaluation falls back to trilinear interpolation of the samples.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tilab/tensors.hpp"

namespace tilab {

// Axis-aligned box with nodes at the cell corners (including the faces):
// x_a(i) = center_a - halfwidth_a + i * 2 halfwidth_a / (n_a - 1).
struct SpatialGrid {
    Vec3 center = Vec3::Zero();
    Vec3 halfwidth = Vec3(0.5, 0.5, 0.5);
    std::array<int, 3> nodes = {16, 16, 16};

    SpatialGrid() = default;
    SpatialGrid(const Vec3& c, const Vec3& hw, const std::array<int, 3>& n);

    std::size_t size() const {
        return static_cast<std::size_t>(nodes[0]) * nodes[1] * nodes[2];
    }
    double coord(int axis, int i) const {
        return center(axis) - halfwidth(axis) +
               2.0 * halfwidth(axis) * i / (nodes[axis] - 1);
    }
    Vec3 node(int i, int j, int k) const { return {coord(0, i), coord(1, j), coord(2, k)}; }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * nodes[1] + j) * nodes[2] + k;
    }
    bool same_geometry(const SpatialGrid& o) const;
};

using ScalarClosure = std::function<double(const Vec3&)>;

class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const SpatialGrid& g) : grid_(g), values_(g.size(), 0.0) {}
    ScalarField(const SpatialGrid& g, std::vector<double> v);

    // Samples the closure on the grid and keeps it for exact evaluation.
    static ScalarField from_closure(const SpatialGrid& g, ScalarClosure f);

    const SpatialGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    bool has_closure() const { return closure_.has_value(); }

    // Exact closure when present, trilinear interpolation otherwise.
    double operator()(const Vec3& x) const;
    double interpolate(const Vec3& x) const;

    double max_abs() const;

  private:
    SpatialGrid grid_;
    std::vector<double> values_;
    std::optional<ScalarClosure> closure_;
};

// The five independent TI stiffness perturbation fields.
struct TIPerturbationField {
    SpatialGrid grid;
    std::array<ScalarField, 5> comps;  // order of kTIComponentNames

    TIPerturbationField() = default;
    explicit TIPerturbationField(const SpatialGrid& g);

    TIComponents at(const Vec3& x) const;
    bool is_zero() const;
};

// diag(rho11, rho11, rho33) density perturbation.
struct DensityPerturbationField {
    SpatialGrid grid;
    ScalarField rho11;
    ScalarField rho33;

    DensityPerturbationField() = default;
    explicit DensityPerturbationField(const SpatialGrid& g);

    std::array<double, 2> at(const Vec3& x) const;
    bool is_zero() const;
};

// Relative L2 and Linf distances over the grid nodes (denominator ||b||).
struct FieldError {
    double rel_l2 = 0.0;
    double rel_linf = 0.0;
    double abs_l2 = 0.0;
    double ref_l2 = 0.0;
};
FieldError field_error(const ScalarField& a, const ScalarField& b);

}  // namespace tilab
