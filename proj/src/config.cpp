#include "tilab/config.hpp"

#include <fstream>

#include <json.hpp>

namespace tilab {

using nlohmann::json;

SpatialGrid ExperimentConfig::spatial_grid() const {
    return SpatialGrid(Vec3::Zero(), Vec3::Constant(box_halfwidth),
                       {spatial_n, spatial_n, spatial_n});
}

PlanOptions ExperimentConfig::plan_options() const {
    PlanOptions p;
    p.freq_n = freq_n;
    p.box_length = 2.0 * box_halfwidth;
    p.omegas = omegas;
    p.r_sweep = r_sweep;
    p.s_min_spacings = s_min_spacings;
    p.kappa_max = kappa_max;
    p.quad_base_points = quadrature.points;
    p.quad_max_points = quad_max_points;
    return p;
}

namespace {

Vec3 vec3_from(const json& j) { return Vec3(j.at(0), j.at(1), j.at(2)); }

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    if (j.contains("background")) {
        const auto& b = j["background"];
        cfg.background = IsotropicBackground(b.value("lambda0", 1.0), b.value("mu0", 1.0),
                                             b.value("rho0", 1.0), 0.0);
    }
    cfg.omegas = j.value("omegas", std::vector<double>{});
    if (!cfg.omegas.empty()) {
        if (cfg.omegas.size() != 2 || cfg.omegas[0] == cfg.omegas[1] || cfg.omegas[0] <= 0.0 ||
            cfg.omegas[1] <= 0.0)
            throw std::invalid_argument("config: omegas must be two distinct positive values");
    }
    cfg.spatial_n = j.value("spatial_n", 16);
    cfg.freq_n = j.value("freq_n", 16);
    cfg.box_halfwidth = j.value("box_halfwidth", 0.5);
    if (j.contains("phantom")) {
        PhantomSpec ph;
        ph.window = j["phantom"].value("window", 0.47);
        for (const auto& b : j["phantom"].value("bumps", json::array())) {
            BumpSpec bs;
            bs.component = b.at("component").get<std::string>();
            bs.amplitude = b.value("amplitude", 1.0);
            if (b.contains("center")) bs.center = vec3_from(b["center"]);
            if (b.contains("sigma")) {
                if (b["sigma"].is_array())
                    bs.sigma = vec3_from(b["sigma"]);
                else
                    bs.sigma = Vec3::Constant(b["sigma"].get<double>());
            }
            bool known = bs.component == "rho11" || bs.component == "rho33";
            for (const auto& n : kTIComponentNames) known = known || bs.component == n;
            if (!known) throw std::invalid_argument("config: unknown component " + bs.component);
            ph.bumps.push_back(bs);
        }
        cfg.phantom = ph;
    }
    if (j.contains("quadrature")) {
        const auto& q = j["quadrature"];
        const std::string rule = q.value("rule", std::string("gauss"));
        cfg.quadrature = QuadratureSpec(
            rule == "midpoint" ? QuadratureRule::Midpoint : QuadratureRule::Gauss,
            q.value("points", 16));
        cfg.quad_adaptive = q.value("adaptive", true);
        cfg.quad_max_points = q.value("max_points", 64);
    }
    cfg.r_sweep = j.value("r_sweep", cfg.r_sweep);
    cfg.s_min_spacings = j.value("s_min_spacings", 1.0);
    cfg.kappa_max = j.value("kappa_max", 1e9);
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(20240817));
    cfg.workers = j.value("workers", 0);
    cfg.debug_tamper_affine_c = j.value("debug_tamper_affine_c", false);
    return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json_text(text);
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    json j;
    j["background"] = {{"lambda0", cfg.background.lambda0},
                       {"mu0", cfg.background.mu0},
                       {"rho0", cfg.background.rho0}};
    j["omegas"] = cfg.omegas;
    j["spatial_n"] = cfg.spatial_n;
    j["freq_n"] = cfg.freq_n;
    j["box_halfwidth"] = cfg.box_halfwidth;
    json bumps = json::array();
    for (const auto& b : cfg.phantom.bumps)
        bumps.push_back({{"component", b.component},
                         {"amplitude", b.amplitude},
                         {"center", {b.center(0), b.center(1), b.center(2)}},
                         {"sigma", {b.sigma(0), b.sigma(1), b.sigma(2)}}});
    j["phantom"] = {{"window", cfg.phantom.window}, {"bumps", bumps}};
    j["quadrature"] = {
        {"rule", cfg.quadrature.rule == QuadratureRule::Midpoint ? "midpoint" : "gauss"},
        {"points", cfg.quadrature.points},
        {"adaptive", cfg.quad_adaptive},
        {"max_points", cfg.quad_max_points}};
    j["r_sweep"] = cfg.r_sweep;
    j["s_min_spacings"] = cfg.s_min_spacings;
    j["kappa_max"] = cfg.kappa_max;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["debug_tamper_affine_c"] = cfg.debug_tamper_affine_c;
    return j.dump(2);
}

}  // namespace tilab
