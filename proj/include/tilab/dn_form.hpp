// The linearized Dirichlet-to-Neumann bilinear functional
//   <L'(dC,drho) f, g> = int dC_ijkl d_i u_j d_k v_l - w^2 drho_ik u_i v_k dx
// evaluated by tensor-product quadrature over the box, plus an exact oracle
// for constant perturbations. Pair products are always evaluated through the
// bounded combined exponential, so large-r configurations cannot overflow.
#pragma once

#include <optional>

#include "tilab/cgo.hpp"
#include "tilab/fields.hpp"
#include "tilab/quadrature.hpp"

namespace tilab {

// Pointwise contraction against the TI embedding of five components:
// equals contract(ti_expand(p), g, h).
Complex contract_ti(const TIComponents& p, const CMat3& g, const CMat3& h);

// Pair product split into moment slots. Writing the amplitude of each side
// as A(x) = A0 + (e.x) A1 (A1 = 0 for constant amplitudes), the integrand is
//   sum_{a,b} (eu.x)^a (ev.x)^b [ dC(x) : G_a : H_b - w^2 drho(x) . (Au_a, Av_b) ] e^{kappa.x}.
struct PairFactors {
    CMat3 g[2];
    CVec3 au[2];
    Vec3 eu = Vec3::Zero();
    bool u_affine = false;
    CMat3 h[2];
    CVec3 av[2];
    Vec3 ev = Vec3::Zero();
    bool v_affine = false;
    CVec3 kappa;  // combined phase
    double omega = 0.0;
};
PairFactors pair_factors(const CgoSolution& u, const CgoSolution& v);

struct FormValue {
    Complex value{0.0, 0.0};
    PairConfig config;
    bool ok = true;
    std::string error;
};

// Quadrature evaluation of the form. The density field may be null; it is
// also skipped entirely on the zero-frequency path.
Complex bilinear_form(const TIPerturbationField& dC, const DensityPerturbationField* dRho,
                      const CgoSolution& u, const CgoSolution& v, const QuadratureSpec& quad);

// Exact value for constant (p, rho) on the box: closed-form moment integrals
// int x^p e^{kappa.x} dx per axis against the slot coefficients.
Complex constant_oracle(const TIComponents& p, std::optional<std::array<double, 2>> rho,
                        const CgoSolution& u, const CgoSolution& v, const SpatialGrid& box);

// int_{-w}^{w} u^p e^{mu u} du for p = 0,1,2 (series switch at small |mu w|).
Complex axis_moment_integral(int p, Complex mu, double w);

// Per-axis Gauss point count needed to resolve e^{i kappa_j x} across the box.
int oscillation_points(double kappa_abs, double halfwidth, int base);

// Evaluates the form for every config; failures are flagged, not thrown.
std::vector<FormValue> synthesize_data(const TIPerturbationField& dC,
                                       const DensityPerturbationField* dRho,
                                       const IsotropicBackground& medium,
                                       const std::vector<PairConfig>& plan,
                                       const QuadratureSpec& quad, bool adaptive = true,
                                       int max_points = 64, int workers = 0);

}  // namespace tilab
