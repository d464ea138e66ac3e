// Deterministic measurement plan: which pair configurations to evaluate so
// that every retained lattice frequency xi is reached by exactly one
// (s, t, phi), with exclusion masks carrying their reasons.
#pragma once

#include "tilab/cgo.hpp"
#include "tilab/dn_form.hpp"
#include "tilab/freq_grid.hpp"

namespace tilab {

struct PlanNode {
    std::array<int, 3> nu{0, 0, 0};  // xi = dxi * nu, retained (conjugate) half
    double s = 0.0, t = 0.0, phi = 0.0;
    double d2 = 0.0;                // s^2 + t^2
    bool usable = true;             // false: no pair data at all (dc / evanescent)
    bool step4_singular = false;    // |s| below s_min: no divergence-pair entries
    std::string mask_reason;
};

struct PlanEntry {
    int node = 0;  // index into nodes
    PairKind kind = PairKind::A_shear;
    int iw = -1;   // index into omegas, -1 for the zero-frequency pipeline
    int ir = -1;   // index into the r sweep, -1 when the family has no r
    PairConfig config;
};

struct FrequencyPlan {
    FreqGeometry geo;
    IsotropicBackground medium;     // omega ignored; per-entry omegas below
    std::vector<double> omegas;     // empty: omega = 0 pipeline; else exactly two
    std::vector<double> r_base;     // r = r_base * max(1, d)
    double s_min = 0.0;
    std::vector<PlanNode> nodes;
    std::vector<PlanEntry> entries;

    bool two_frequency() const { return !omegas.empty(); }
    double r_at(const PlanNode& n, int ir) const {
        return r_base[ir] * std::max(1.0, std::sqrt(n.d2));
    }
    std::vector<PairConfig> configs() const;
    std::size_t usable_nodes() const;
};

struct PlanOptions {
    int freq_n = 16;             // lattice size; modes |nu| <= freq_n/2 - 1
    double box_length = 1.0;     // periodization length (box edge)
    std::vector<double> omegas;  // empty or two distinct positive values
    std::vector<double> r_sweep = {8, 11, 16, 22, 32, 45, 64, 90};
    double s_min_spacings = 1.0;  // s_min in units of the s-lattice spacing dxi/2
    double kappa_max = 1e9;       // reject plans whose pair frequencies exceed this
    int quad_base_points = 16;
    int quad_max_points = 64;     // reject plans that would need more
    double evanescent_margin = 0.05;
};

FrequencyPlan plan_frequencies(const PlanOptions& opt, const IsotropicBackground& medium);

}  // namespace tilab
