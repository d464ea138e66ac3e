// Machine-readable verification reports: the solution-residual suite, the
// identity catalog (constant-phantom closed forms, series reductions,
// lambda blindness), and reconstruction error tables.
#pragma once

#include "tilab/config.hpp"
#include "tilab/field_io.hpp"
#include "tilab/recon.hpp"

namespace tilab {

struct ReportRow {
    std::string id;      // stable check id (also the anchor in the README catalog)
    std::string detail;  // what was measured
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::size_t skipped = 0;  // configurations skipped with a counted reason
};

struct Report {
    std::string name;
    std::vector<ReportRow> rows;

    bool all_pass() const;
    std::string to_json() const;
};

// Navier-residual suite over all pair families, frequencies, and sampled
// nodes; random evaluation points drawn from the seeded generator.
Report verify_cgo(const ExperimentConfig& cfg);

// Constant- and smooth-phantom identity suite plus the series reductions.
Report verify_identities(const ExperimentConfig& cfg);

struct ComponentError {
    std::string name;
    double rel_l2 = 0.0;
    double rel_linf = 0.0;
    double ref_l2 = 0.0;
};
std::vector<ComponentError> error_table(const LoadedFields& truth, const LoadedFields& recon);
std::string error_table_csv(const std::vector<ComponentError>& rows);
std::string error_table_json(const std::vector<ComponentError>& rows);

std::string diagnostics_to_json(const ReconDiagnostics& d);

}  // namespace tilab
