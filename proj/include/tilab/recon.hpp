// Staged inversion of the linearized map: from pair-indexed form values to
// the five stiffness perturbation fields (and, with two frequencies, the two
// density fields).
//
// Every pair product is a linear functional of the seven field variables
//   y1 = c1212 + c1313
//   y2 = c1111 - 2 c1133 + 4 c1313 + c3333
//   y3 = c1111 - 2 c1133 - 4 c1313 + c3333
//   z1 = c1133 - c1111
//   z2 = c1111
//   rho11, rho33
// with coefficients computable exactly from the pair's amplitude structure.
// Stages recover the variables in an order in which each new extraction only
// needs previously assembled grids (plus their exact moment transforms).
#pragma once

#include "tilab/freq_algebra.hpp"
#include "tilab/plan.hpp"

namespace tilab {

enum Var : int { VY1 = 0, VY2, VY3, VZ1, VZ2, VR11, VR33, kNumVars };

using VarCoeffs = std::array<Complex, kNumVars>;

// Coefficients of F[(eu.x)^a (ev.x)^b var] in the pair product, per slot.
struct SlotCoeffs {
    VarCoeffs m00{}, m10{}, m01{}, m11{};
    Vec3 eu = Vec3::Zero();
    Vec3 ev = Vec3::Zero();
    bool has10 = false, has01 = false, has11 = false;
};
SlotCoeffs pair_var_coefficients(const PairFactors& f);

// Least-squares fit of complex data against {1, r, r^2, r^3, r^4}.
struct PolyFit {
    std::array<Complex, 5> coef{};  // coef[k] multiplies r^k
    double condition = 0.0;
};
PolyFit fit_r_powers(const std::vector<double>& rs, const std::vector<Complex>& vals);

struct ReconOptions {
    int workers = 0;
    double fit_condition_limit = 1e10;
    bool collect_consistency = true;
    // Fill masked frequency nodes by forcing the field toward zero on the
    // boundary shell (the perturbations are supported strictly inside the
    // box); falls back to local polynomial interpolation when disabled.
    bool support_infill = true;
};

struct ReconDiagnostics {
    std::size_t nodes_total = 0;
    std::size_t nodes_usable = 0;
    std::size_t nodes_step4_masked = 0;
    std::size_t flagged_nodes = 0;
    double flagged_fraction = 0.0;
    double stage_flagged_fraction = 0.0;  // worst later-stage failure rate
    bool low_confidence = false;
    double max_fit_condition = 0.0;
    double masked_fraction_tier1 = 0.0;
    double masked_fraction_z1 = 0.0;
    double max_inverse_imag = 0.0;
    // Overdetermination checks (relative L2 over usable nodes).
    double y4_consistency = 0.0;       // P1-derived y4 vs 2 m1 - m2 (omega = 0)
    double data_consistency = 0.0;     // raw gradient-sweep data vs assembled fields
    double y3_cross_consistency = 0.0; // two-frequency: r^4 coefficient across omegas
    std::vector<std::string> notes;
};

struct ReconResult {
    TIPerturbationField stiffness;
    DensityPerturbationField density;
    bool has_density = false;
    std::array<FreqGrid, kNumVars> grids;  // assembled variable grids
    ReconDiagnostics diag;
};

class Reconstructor {
  public:
    Reconstructor(const FrequencyPlan& plan, ReconOptions opt = {});

    // bundle[i] corresponds to plan.entries[i].
    ReconResult run(const std::vector<FormValue>& bundle, const SpatialGrid& out_grid) const;

  private:
    const FrequencyPlan& plan_;
    ReconOptions opt_;
};

// Forward synthesis + reconstruction convenience used by the CLI and tests.
ReconResult reconstruct_from_bundle(const FrequencyPlan& plan,
                                    const std::vector<FormValue>& bundle,
                                    const SpatialGrid& out_grid, const ReconOptions& opt = {});

}  // namespace tilab
