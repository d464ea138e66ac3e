#include "tilab/fields.hpp"

#include <cmath>

namespace tilab {

SpatialGrid::SpatialGrid(const Vec3& c, const Vec3& hw, const std::array<int, 3>& n)
    : center(c), halfwidth(hw), nodes(n) {
    for (int a = 0; a < 3; ++a) {
        if (!(halfwidth(a) > 0.0)) throw std::invalid_argument("grid halfwidths must be positive");
        if (nodes[a] < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
    }
}

bool SpatialGrid::same_geometry(const SpatialGrid& o) const {
    return nodes == o.nodes && (center - o.center).norm() < 1e-12 &&
           (halfwidth - o.halfwidth).norm() < 1e-12;
}

ScalarField::ScalarField(const SpatialGrid& g, std::vector<double> v)
    : grid_(g), values_(std::move(v)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field value count does not match grid");
    for (double x : values_)
        if (!std::isfinite(x)) throw std::invalid_argument("field contains non-finite values");
}

ScalarField ScalarField::from_closure(const SpatialGrid& g, ScalarClosure f) {
    ScalarField out(g);
    for (int i = 0; i < g.nodes[0]; ++i)
        for (int j = 0; j < g.nodes[1]; ++j)
            for (int k = 0; k < g.nodes[2]; ++k) out.values_[g.index(i, j, k)] = f(g.node(i, j, k));
    out.closure_ = std::move(f);
    return out;
}

double ScalarField::operator()(const Vec3& x) const {
    if (closure_) return (*closure_)(x);
    return interpolate(x);
}

double ScalarField::interpolate(const Vec3& x) const {
    int i0[3];
    double f[3];
    for (int a = 0; a < 3; ++a) {
        const double u =
            (x(a) - (grid_.center(a) - grid_.halfwidth(a))) * (grid_.nodes[a] - 1) /
            (2.0 * grid_.halfwidth(a));
        const double uc = std::clamp(u, 0.0, static_cast<double>(grid_.nodes[a] - 1));
        i0[a] = std::min(static_cast<int>(uc), grid_.nodes[a] - 2);
        f[a] = uc - i0[a];
    }
    double out = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                const double w = (di ? f[0] : 1.0 - f[0]) * (dj ? f[1] : 1.0 - f[1]) *
                                 (dk ? f[2] : 1.0 - f[2]);
                out += w * values_[grid_.index(i0[0] + di, i0[1] + dj, i0[2] + dk)];
            }
    return out;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

TIPerturbationField::TIPerturbationField(const SpatialGrid& g) : grid(g) {
    for (auto& c : comps) c = ScalarField(g);
}

TIComponents TIPerturbationField::at(const Vec3& x) const {
    return {comps[0](x), comps[1](x), comps[2](x), comps[3](x), comps[4](x)};
}

bool TIPerturbationField::is_zero() const {
    for (const auto& c : comps)
        if (c.max_abs() != 0.0) return false;
    return true;
}

DensityPerturbationField::DensityPerturbationField(const SpatialGrid& g)
    : grid(g), rho11(g), rho33(g) {}

std::array<double, 2> DensityPerturbationField::at(const Vec3& x) const {
    return {rho11(x), rho33(x)};
}

bool DensityPerturbationField::is_zero() const {
    return rho11.max_abs() == 0.0 && rho33.max_abs() == 0.0;
}

FieldError field_error(const ScalarField& a, const ScalarField& b) {
    if (!a.grid().same_geometry(b.grid()))
        throw std::invalid_argument("field_error: mismatched grids");
    FieldError e;
    double num2 = 0.0, den2 = 0.0, numinf = 0.0, deninf = 0.0;
    for (std::size_t n = 0; n < a.values().size(); ++n) {
        const double d = a.values()[n] - b.values()[n];
        num2 += d * d;
        den2 += b.values()[n] * b.values()[n];
        numinf = std::max(numinf, std::abs(d));
        deninf = std::max(deninf, std::abs(b.values()[n]));
    }
    e.abs_l2 = std::sqrt(num2);
    e.ref_l2 = std::sqrt(den2);
    e.rel_l2 = den2 > 0.0 ? e.abs_l2 / e.ref_l2 : e.abs_l2;
    e.rel_linf = deninf > 0.0 ? numinf / deninf : numinf;
    return e;
}

}  // namespace tilab
