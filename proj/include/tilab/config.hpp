// Experiment configuration: one JSON file drives phantom generation, forward
// synthesis, reconstruction, and the verification commands.
#pragma once

#include <string>

#include "tilab/phantom.hpp"
#include "tilab/plan.hpp"

namespace tilab {

struct ExperimentConfig {
    IsotropicBackground background{1.0, 1.0, 1.0, 0.0};
    std::vector<double> omegas;  // empty: static pipeline; else two values
    int spatial_n = 16;
    int freq_n = 16;
    double box_halfwidth = 0.5;
    PhantomSpec phantom = PhantomSpec::default_ti();
    QuadratureSpec quadrature{QuadratureRule::Gauss, 16};
    bool quad_adaptive = true;
    int quad_max_points = 64;
    std::vector<double> r_sweep = {8, 11, 16, 22, 32, 45, 64, 90};
    double s_min_spacings = 1.0;
    double kappa_max = 1e9;
    std::uint64_t seed = 20240817;
    int workers = 0;
    bool debug_tamper_affine_c = false;

    SpatialGrid spatial_grid() const;
    PlanOptions plan_options() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

}  // namespace tilab
