#include "tilab/phantom.hpp"

#include <cmath>

namespace tilab {

double mollifier(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

ScalarClosure bump_closure(const std::vector<BumpSpec>& bumps, const std::string& component,
                           const Vec3& box_center, const Vec3& box_halfwidth, double window) {
    std::vector<BumpSpec> mine;
    for (const auto& b : bumps)
        if (b.component == component) mine.push_back(b);
    const Vec3 c0 = box_center;
    const Vec3 hw = box_halfwidth;
    return [mine, c0, hw, window](const Vec3& x) {
        double w = 1.0;
        for (int a = 0; a < 3; ++a) w *= mollifier((x(a) - c0(a)) / (window * 2.0 * hw(a)));
        if (w == 0.0) return 0.0;
        double v = 0.0;
        for (const auto& b : mine) {
            double g = b.amplitude;
            for (int a = 0; a < 3; ++a) {
                const double u = (x(a) - b.center(a)) / b.sigma(a);
                g *= std::exp(-0.5 * u * u);
            }
            v += g;
        }
        return v * w;
    };
}

Phantom build_phantom(const PhantomSpec& spec, const SpatialGrid& grid) {
    Phantom ph;
    ph.stiffness = TIPerturbationField(grid);
    ph.density = DensityPerturbationField(grid);
    for (int c = 0; c < 5; ++c)
        ph.stiffness.comps[c] = ScalarField::from_closure(
            grid, bump_closure(spec.bumps, kTIComponentNames[c], grid.center, grid.halfwidth,
                               spec.window));
    ph.density.rho11 = ScalarField::from_closure(
        grid, bump_closure(spec.bumps, "rho11", grid.center, grid.halfwidth, spec.window));
    ph.density.rho33 = ScalarField::from_closure(
        grid, bump_closure(spec.bumps, "rho33", grid.center, grid.halfwidth, spec.window));
    for (const auto& b : spec.bumps)
        if (b.component == "rho11" || b.component == "rho33") ph.has_density = true;
    return ph;
}

PhantomSpec PhantomSpec::default_ti() {
    PhantomSpec s;
    s.bumps = {
        {"c1111", 1.00, Vec3(0.08, -0.05, 0.06), Vec3(0.11, 0.10, 0.12)},
        {"c1122", 0.80, Vec3(-0.07, 0.04, -0.09), Vec3(0.10, 0.12, 0.10)},
        {"c1133", 0.90, Vec3(0.05, 0.08, -0.04), Vec3(0.12, 0.10, 0.11)},
        {"c1313", 0.70, Vec3(-0.04, -0.08, 0.07), Vec3(0.10, 0.11, 0.10)},
        {"c3333", 1.10, Vec3(0.06, -0.03, -0.07), Vec3(0.115, 0.10, 0.105)},
    };
    return s;
}

PhantomSpec PhantomSpec::default_full() {
    PhantomSpec s = default_ti();
    s.bumps.push_back({"rho11", 0.60, Vec3(0.07, 0.06, 0.05), Vec3(0.11, 0.10, 0.11)});
    s.bumps.push_back({"rho33", 0.75, Vec3(-0.06, 0.05, -0.06), Vec3(0.105, 0.11, 0.10)});
    return s;
}

Phantom build_constant_phantom(const TIComponents& p, double rho11, double rho33,
                               const SpatialGrid& grid) {
    Phantom ph;
    ph.stiffness = TIPerturbationField(grid);
    ph.density = DensityPerturbationField(grid);
    const auto arr = p.as_array();
    for (int c = 0; c < 5; ++c) {
        const double v = arr[c];
        ph.stiffness.comps[c] = ScalarField::from_closure(grid, [v](const Vec3&) { return v; });
    }
    ph.density.rho11 = ScalarField::from_closure(grid, [rho11](const Vec3&) { return rho11; });
    ph.density.rho33 = ScalarField::from_closure(grid, [rho33](const Vec3&) { return rho33; });
    ph.has_density = rho11 != 0.0 || rho33 != 0.0;
    return ph;
}

}  // namespace tilab
