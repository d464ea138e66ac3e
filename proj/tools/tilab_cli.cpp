// Command-line driver: phantom generation, solution verification, identity
// verification, forward synthesis, reconstruction, and error reporting.
//
// Exit codes: 0 pass, 1 check failure, 2 usage/config error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tilab/field_io.hpp"
#include "tilab/recon.hpp"
#include "tilab/reports.hpp"

using namespace tilab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig load_config(const std::string& path, int workers, long long seed) {
    ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : config_from_file(path);
    if (workers > 0) cfg.workers = workers;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int run_verify(const std::string& config_path, const std::string& out_dir, int workers,
               long long seed, bool identities) {
    ExperimentConfig cfg = load_config(config_path, workers, seed);
    const Report rep = identities ? verify_identities(cfg) : verify_cgo(cfg);
    const fs::path out = fs::path(out_dir) / (rep.name + ".json");
    write_text(out, rep.to_json() + "\n");
    for (const auto& row : rep.rows)
        std::cout << (row.pass ? "[PASS] " : "[FAIL] ") << row.id << "  dev=" << row.deviation
                  << " tol=" << row.tolerance
                  << (row.skipped ? "  skipped=" + std::to_string(row.skipped) : "") << "\n";
    std::cout << "report written to " << out.string() << "\n";
    return rep.all_pass() ? 0 : 1;
}

int run_forward(const std::string& config_path, const std::string& out_dir, int workers,
                long long seed) {
    ExperimentConfig cfg = load_config(config_path, workers, seed);
    const SpatialGrid grid = cfg.spatial_grid();
    const Phantom phantom = build_phantom(cfg.phantom, grid);
    const FrequencyPlan plan = plan_frequencies(cfg.plan_options(), cfg.background);
    const auto values = synthesize_data(
        phantom.stiffness, phantom.has_density ? &phantom.density : nullptr, cfg.background,
        plan.configs(), cfg.quadrature, cfg.quad_adaptive, cfg.quad_max_points, cfg.workers);
    fs::create_directories(out_dir);
    write_bundle((fs::path(out_dir) / "bundle.jsonl").string(), plan, values);
    write_fields((fs::path(out_dir) / "truth").string(), phantom.stiffness,
                 phantom.has_density ? &phantom.density : nullptr);
    std::size_t bad = 0;
    for (const auto& v : values) bad += v.ok ? 0 : 1;
    std::cout << "synthesized " << values.size() << " form values (" << bad << " flagged) to "
              << out_dir << "\n";
    return 0;
}

int run_reconstruct(const std::string& config_path, const std::string& bundle_path,
                    const std::string& out_dir, int workers, long long seed) {
    ExperimentConfig cfg = load_config(config_path, workers, seed);
    const FrequencyPlan plan = plan_frequencies(cfg.plan_options(), cfg.background);
    const auto bundle = read_bundle(bundle_path, plan);
    ReconOptions opt;
    opt.workers = cfg.workers;
    const ReconResult res = reconstruct_from_bundle(plan, bundle, cfg.spatial_grid(), opt);
    fs::create_directories(out_dir);
    write_fields((fs::path(out_dir) / "recon").string(), res.stiffness,
                 res.has_density ? &res.density : nullptr);
    write_text(fs::path(out_dir) / "diagnostics.json", diagnostics_to_json(res.diag) + "\n");
    std::cout << "reconstruction written to " << out_dir
              << (res.diag.low_confidence ? " (LOW CONFIDENCE)" : "") << "\n";
    return 0;
}

int run_report(const std::string& truth_stem, const std::string& recon_stem,
               const std::string& out_dir) {
    const LoadedFields truth = read_fields(truth_stem);
    const LoadedFields recon = read_fields(recon_stem);
    const auto rows = error_table(truth, recon);
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "errors.csv", error_table_csv(rows));
    write_text(fs::path(out_dir) / "errors.json", error_table_json(rows) + "\n");
    for (const auto& r : rows)
        std::cout << r.name << "  rel_l2=" << r.rel_l2 << "  rel_linf=" << r.rel_linf << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tilab: CGO-based verification and reconstruction for linearized "
                 "transversely isotropic elasticity"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", bundle_path, truth_stem, recon_stem;
    int workers = 0;
    long long seed = -1;

    auto add_common = [&](CLI::App* sub, bool with_config = true) {
        if (with_config) sub->add_option("--config", config_path, "experiment config JSON");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--workers", workers, "worker threads (0 = all cores)");
        sub->add_option("--seed", seed, "override the config seed");
    };

    CLI::App* vcgo = app.add_subcommand("verify-cgo", "run the solution-residual suite");
    add_common(vcgo);
    CLI::App* vid = app.add_subcommand("verify-identities", "run the identity catalog checks");
    add_common(vid);
    CLI::App* fwd = app.add_subcommand("forward", "synthesize a form-value data bundle");
    add_common(fwd);
    CLI::App* rec = app.add_subcommand("reconstruct", "invert a data bundle to fields");
    add_common(rec);
    rec->add_option("--bundle", bundle_path, "bundle.jsonl from the forward step")->required();
    CLI::App* rpt = app.add_subcommand("report", "error tables against ground truth");
    rpt->add_option("--truth", truth_stem, "truth field stem (without .json/.bin)")->required();
    rpt->add_option("--recon", recon_stem, "reconstructed field stem")->required();
    rpt->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (vcgo->parsed()) return run_verify(config_path, out_dir, workers, seed, false);
        if (vid->parsed()) return run_verify(config_path, out_dir, workers, seed, true);
        if (fwd->parsed()) return run_forward(config_path, out_dir, workers, seed);
        if (rec->parsed()) return run_reconstruct(config_path, bundle_path, out_dir, workers, seed);
        if (rpt->parsed()) return run_report(truth_stem, recon_stem, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
