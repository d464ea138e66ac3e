#include "tilab/field_io.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

#include "tilab/plan.hpp"

namespace tilab {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "field sidecar format assumes a little-endian host");

namespace {

json grid_to_json(const SpatialGrid& g) {
    return json{{"center", {g.center(0), g.center(1), g.center(2)}},
                {"halfwidth", {g.halfwidth(0), g.halfwidth(1), g.halfwidth(2)}},
                {"nodes", {g.nodes[0], g.nodes[1], g.nodes[2]}}};
}

SpatialGrid grid_from_json(const json& j) {
    const auto c = j.at("center");
    const auto h = j.at("halfwidth");
    const auto n = j.at("nodes");
    return SpatialGrid(Vec3(c[0], c[1], c[2]), Vec3(h[0], h[1], h[2]),
                       {n[0].get<int>(), n[1].get<int>(), n[2].get<int>()});
}

void append_raw(std::ofstream& bin, const std::vector<double>& v) {
    bin.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

void write_fields(const std::string& stem, const TIPerturbationField& stiffness,
                  const DensityPerturbationField* density) {
    json header;
    header["format"] = "tilab-fields-v1";
    header["dtype"] = "float64-le";
    header["layout"] = "row-major, last axis fastest, components concatenated";
    header["grid"] = grid_to_json(stiffness.grid);
    std::vector<std::string> names(kTIComponentNames.begin(), kTIComponentNames.end());
    if (density) {
        names.push_back("rho11");
        names.push_back("rho33");
    }
    header["components"] = names;

    std::ofstream js(stem + ".json");
    if (!js) throw std::runtime_error("cannot write " + stem + ".json");
    js << header.dump(2) << "\n";

    std::ofstream bin(stem + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write " + stem + ".bin");
    for (const auto& c : stiffness.comps) append_raw(bin, c.values());
    if (density) {
        append_raw(bin, density->rho11.values());
        append_raw(bin, density->rho33.values());
    }
}

LoadedFields read_fields(const std::string& stem) {
    std::ifstream js(stem + ".json");
    if (!js) throw std::runtime_error("cannot read " + stem + ".json");
    json header = json::parse(js);
    if (header.at("format") != "tilab-fields-v1")
        throw std::runtime_error("unrecognized field file format");
    const SpatialGrid grid = grid_from_json(header.at("grid"));
    const auto names = header.at("components").get<std::vector<std::string>>();

    std::ifstream bin(stem + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot read " + stem + ".bin");

    LoadedFields out;
    out.stiffness = TIPerturbationField(grid);
    out.density = DensityPerturbationField(grid);
    for (const auto& name : names) {
        std::vector<double> v(grid.size());
        bin.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!bin) throw std::runtime_error("field sidecar truncated: " + stem + ".bin");
        bool matched = false;
        for (int c = 0; c < 5; ++c)
            if (name == kTIComponentNames[c]) {
                out.stiffness.comps[c] = ScalarField(grid, std::move(v));
                matched = true;
                break;
            }
        if (matched) continue;
        if (name == "rho11") {
            out.density.rho11 = ScalarField(grid, std::move(v));
            out.has_density = true;
        } else if (name == "rho33") {
            out.density.rho33 = ScalarField(grid, std::move(v));
            out.has_density = true;
        } else {
            throw std::runtime_error("unknown component in field file: " + name);
        }
    }
    return out;
}

namespace {

json config_to_json_obj(const PairConfig& cfg) {
    return json{{"kind", to_string(cfg.kind)}, {"s", cfg.s},         {"t", cfg.t},
                {"phi", cfg.phi},              {"r", cfg.r},         {"omega", cfg.omega}};
}

PairConfig config_from_json_obj(const json& j) {
    PairConfig cfg;
    cfg.kind = pair_kind_from_string(j.at("kind").get<std::string>());
    cfg.s = j.at("s");
    cfg.t = j.at("t");
    cfg.phi = j.at("phi");
    cfg.r = j.at("r");
    cfg.omega = j.at("omega");
    return cfg;
}

}  // namespace

std::string pair_config_to_json(const PairConfig& cfg) { return config_to_json_obj(cfg).dump(); }

PairConfig pair_config_from_json(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

void write_bundle(const std::string& path, const FrequencyPlan& plan,
                  const std::vector<FormValue>& values) {
    if (values.size() != plan.entries.size())
        throw std::invalid_argument("write_bundle: values do not match the plan");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    json header;
    header["format"] = "tilab-bundle-v1";
    header["entries"] = values.size();
    header["freq_h"] = plan.geo.h;
    header["length"] = plan.geo.length;
    header["omegas"] = plan.omegas;
    header["r_sweep"] = plan.r_base;
    out << header.dump() << "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const PlanEntry& e = plan.entries[i];
        json rec;
        rec["node"] = {plan.nodes[e.node].nu[0], plan.nodes[e.node].nu[1],
                       plan.nodes[e.node].nu[2]};
        rec["kind"] = to_string(e.kind);
        rec["iw"] = e.iw;
        rec["ir"] = e.ir;
        rec["config"] = config_to_json_obj(e.config);
        rec["value"] = {values[i].value.real(), values[i].value.imag()};
        rec["ok"] = values[i].ok;
        if (!values[i].ok) rec["error"] = values[i].error;
        out << rec.dump() << "\n";
    }
}

std::vector<FormValue> read_bundle(const std::string& path, const FrequencyPlan& plan) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty bundle file");
    json header = json::parse(line);
    if (header.at("format") != "tilab-bundle-v1")
        throw std::runtime_error("unrecognized bundle format");
    if (header.at("freq_h").get<int>() != plan.geo.h ||
        header.at("entries").get<std::size_t>() != plan.entries.size())
        throw std::runtime_error("bundle does not match the configured plan");

    std::vector<FormValue> out(plan.entries.size());
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (i >= out.size()) throw std::runtime_error("bundle has more entries than the plan");
        json rec = json::parse(line);
        FormValue fv;
        fv.config = config_from_json_obj(rec.at("config"));
        fv.value = Complex(rec.at("value")[0].get<double>(), rec.at("value")[1].get<double>());
        fv.ok = rec.at("ok").get<bool>();
        if (!fv.ok && rec.contains("error")) fv.error = rec["error"].get<std::string>();
        const auto nu = rec.at("node");
        const PlanEntry& e = plan.entries[i];
        if (nu[0].get<int>() != plan.nodes[e.node].nu[0] ||
            nu[1].get<int>() != plan.nodes[e.node].nu[1] ||
            nu[2].get<int>() != plan.nodes[e.node].nu[2] ||
            rec.at("kind").get<std::string>() != to_string(e.kind))
            throw std::runtime_error("bundle entry order does not match the plan");
        out[i++] = fv;
    }
    if (i != out.size()) throw std::runtime_error("bundle has fewer entries than the plan");
    return out;
}

}  // namespace tilab
