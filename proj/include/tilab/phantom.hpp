// Synthetic ground-truth perturbations: smooth window-localized bumps per
// component, with exact closures attached to the sampled fields.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "tilab/fields.hpp"

namespace tilab {

// One bump: amplitude * prod_a exp(-(x_a-c_a)^2 / (2 sigma_a^2)) * window(x),
// where window is a compactly supported mollifier of half-width `window`
// centered on the box, so the support stays strictly inside the domain.
struct BumpSpec {
    std::string component;  // c1111..c3333, rho11, rho33
    double amplitude = 1.0;
    Vec3 center = Vec3::Zero();
    Vec3 sigma = Vec3(0.1, 0.1, 0.1);
};

struct PhantomSpec {
    std::vector<BumpSpec> bumps;
    double window = 0.47;  // mollifier half-width (relative to box halfwidth 0.5)

    static PhantomSpec default_ti();    // 5 distinct stiffness bumps
    static PhantomSpec default_full();  // + rho11, rho33 bumps
};

// C-infinity cutoff: exp(1 - 1/(1-u^2)) for |u|<1, 0 otherwise.
double mollifier(double u);

ScalarClosure bump_closure(const std::vector<BumpSpec>& bumps, const std::string& component,
                           const Vec3& box_center, const Vec3& box_halfwidth, double window);

struct Phantom {
    TIPerturbationField stiffness;
    DensityPerturbationField density;
    bool has_density = false;
};

Phantom build_phantom(const PhantomSpec& spec, const SpatialGrid& grid);

// Exactly constant fields on the box (oracle tests).
Phantom build_constant_phantom(const TIComponents& p, double rho11, double rho33,
                               const SpatialGrid& grid);

}  // namespace tilab
