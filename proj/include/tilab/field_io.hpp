// On-disk formats: field sets (JSON header + row-major little-endian float64
// sidecar) and JSON-lines data bundles of pair-config form values.
#pragma once

#include <string>

#include "tilab/dn_form.hpp"
#include "tilab/phantom.hpp"

namespace tilab {

// Writes <stem>.json (grid geometry + component names) and <stem>.bin
// (components concatenated, each nodes[0]*nodes[1]*nodes[2] doubles in
// row-major order with the last axis fastest).
void write_fields(const std::string& stem, const TIPerturbationField& stiffness,
                  const DensityPerturbationField* density);

struct LoadedFields {
    TIPerturbationField stiffness;
    DensityPerturbationField density;
    bool has_density = false;
};
LoadedFields read_fields(const std::string& stem);

// Data bundle: one JSON object per line; line 0 is a header describing the
// plan shape, every following line one form value with its config and plan
// keys (node, kind, iw, ir).
struct BundleEntryKey {
    std::array<int, 3> nu;
    std::string kind;
    int iw = -1;
    int ir = -1;
};

void write_bundle(const std::string& path, const struct FrequencyPlan& plan,
                  const std::vector<FormValue>& values);
std::vector<FormValue> read_bundle(const std::string& path, const struct FrequencyPlan& plan);

// PairConfig <-> JSON strings (used by bundle records and experiment files).
std::string pair_config_to_json(const PairConfig& cfg);
PairConfig pair_config_from_json(const std::string& text);

}  // namespace tilab
