// mcorr: generate multiset correlated data, detect how many latent components
// are correlated across which data sets, run the population-theory oracle, and
// drive Monte Carlo sweeps.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
// 3 I/O failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "mcorr/coherence.hpp"
#include "mcorr/io.hpp"
#include "mcorr/numerics.hpp"
#include "mcorr/oracle.hpp"

namespace {

// Default seed for every stochastic subcommand; also listed in README.
constexpr std::uint64_t kDefaultSeed = 1729;

double parse_snr(const std::string& text) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw mcorr::InvalidInput("--snr: trailing characters in '" + text + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw mcorr::InvalidInput("--snr: not a number: '" + text + "'");
    } catch (const std::out_of_range&) {
        throw mcorr::InvalidInput("--snr: out of range: '" + text + "'");
    }
}

std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

nlohmann::json validation_to_json(const mcorr::ValidationReport& report) {
    nlohmann::json per_component = nlohmann::json::array();
    for (const auto& check : report.per_component) {
        per_component.push_back({{"component", check.component + 1},
                                 {"k", check.k},
                                 {"group_sizes", check.group_sizes},
                                 {"psd", check.psd},
                                 {"transitive", check.transitive},
                                 {"threshold_ok", check.threshold_ok}});
    }
    return {{"theorem_assumptions_met", report.theorem_assumptions_met},
            {"single_group_per_component", report.single_group_per_component},
            {"dim_margin_ok", report.dim_margin_ok},
            {"d", report.d},
            {"d_all", report.d_all},
            {"per_component", per_component},
            {"warnings", report.warnings}};
}

nlohmann::json theorem1_to_json(const mcorr::TheoremReport& report) {
    nlohmann::json per_component = nlohmann::json::array();
    for (const auto& check : report.per_component) {
        per_component.push_back({{"component", check.component + 1},
                                 {"k", check.k},
                                 {"one_positive_eig", check.one_positive_eig},
                                 {"threshold_ok", check.threshold_ok}});
    }
    nlohmann::json degenerate = nlohmann::json::array();
    for (const auto& [i, j] : report.degenerate_pairs) {
        degenerate.push_back(nlohmann::json::array({i + 1, j + 1}));
    }
    return {{"eigs_above_one", report.eigs_above_one},
            {"expected_d", report.expected_d},
            {"matches", report.matches},
            {"per_component", per_component},
            {"degenerate_pairs", degenerate},
            {"notes", report.notes}};
}

nlohmann::json theorem2_to_json(const mcorr::Theorem2Report& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : report.entries) {
        nlohmann::json member_sets = nlohmann::json::array();
        for (const int p : entry.member_sets) member_sets.push_back(p + 1);
        nlohmann::json expected_sets = nlohmann::json::array();
        for (const int p : entry.expected_sets) expected_sets.push_back(p + 1);
        entries.push_back({{"component", entry.component + 1},
                           {"eigenvalue", entry.eigenvalue},
                           {"member_sets", member_sets},
                           {"expected_sets", expected_sets},
                           {"matches", entry.matches},
                           {"min_member_norm", entry.min_member_norm},
                           {"max_excluded_norm", entry.max_excluded_norm}});
    }
    return {{"all_match", report.all_match}, {"entries", entries}, {"notes", report.notes}};
}

struct GenArgs {
    std::string profile_path;
    std::string snr_text = "10";
    int samples = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string mixing = "orthogonal";
    std::string out_dir;
};

int run_gen(const GenArgs& args) {
    mcorr::GenConfig cfg;
    cfg.profile = mcorr::load_profile(args.profile_path);
    cfg.snr_db = parse_snr(args.snr_text);
    cfg.samples = args.samples;
    cfg.seed = args.seed;
    cfg.mixing = args.mixing == "gaussian" ? mcorr::MixingKind::gaussian
                                           : mcorr::MixingKind::orthogonal;
    std::cerr << "gen: seed " << cfg.seed << "\n";
    const mcorr::MultiDataset data = mcorr::generate(cfg);
    mcorr::save_dataset(data, args.out_dir);
    std::cout << "wrote " << data.p_sets << " data sets (" << data.samples << " x " << data.dim
              << ") to " << args.out_dir << "\n";
    return 0;
}

struct DetectArgs {
    std::string data_dir;
    mcorr::DetectConfig cfg;
    std::string out_path = "report.json";
    std::string spectrum_path;
};

int run_detect(const DetectArgs& args) {
    const mcorr::MultiDataset data = mcorr::load_dataset(args.data_dir);
    std::cerr << "detect: seed " << args.cfg.seed << "\n";
    if (!args.spectrum_path.empty()) {
        const mcorr::CoherenceDecomposition dec = mcorr::sample_coherence(data);
        mcorr::write_spectrum_csv(dec.eigen.values, args.spectrum_path);
    }
    const mcorr::DetectionReport report = mcorr::run_detection(data, args.cfg);
    mcorr::save_report(report, args.out_path);
    std::cout << "d_hat " << report.d_hat << "; report written to " << args.out_path << "\n";
    for (const auto& diag : report.diagnostics) std::cerr << "detect: " << diag << "\n";
    return 0;
}

struct OracleArgs {
    std::string profile_path;
    std::string mixing = "identity";
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-9;
    std::string out_path;
};

int run_oracle(const OracleArgs& args) {
    const mcorr::CorrelationProfile profile = mcorr::load_profile(args.profile_path);

    std::vector<Eigen::MatrixXd> mixing;
    if (args.mixing != "identity") {
        std::cerr << "oracle: seed " << args.seed << "\n";
        mcorr::GenConfig gen_cfg;
        gen_cfg.profile = profile;
        gen_cfg.samples = 1;
        gen_cfg.seed = args.seed;
        gen_cfg.mixing = args.mixing == "gaussian" ? mcorr::MixingKind::gaussian
                                                   : mcorr::MixingKind::orthogonal;
        mixing = mcorr::generate(gen_cfg).truth->mixing;
    }

    nlohmann::json out;
    out["validation"] = validation_to_json(mcorr::validate_profile(profile));
    out["theorem1"] = theorem1_to_json(mcorr::check_theorem1(profile, mixing, args.tol));

    const mcorr::CoherenceDecomposition dec = mcorr::population_coherence(profile, mixing);
    const mcorr::Corollary1Result cor1 = mcorr::check_corollary1(dec, profile);
    nlohmann::json components = nlohmann::json::array();
    for (const int i : cor1.components) components.push_back(i + 1);
    out["corollary1"] = {{"components", components},
                         {"eigs_at_p", cor1.eigs_at_p},
                         {"consistent", cor1.consistent},
                         {"notes", cor1.notes}};

    try {
        out["theorem2"] = theorem2_to_json(mcorr::check_theorem2_pattern(profile, mixing));
    } catch (const mcorr::DegenerateSpectrum& e) {
        // Still a useful report: the degeneracy itself is the finding.
        out["theorem2"] = {{"error", e.what()}};
    }
    nlohmann::json degenerate_groups = nlohmann::json::array();
    for (const auto& group : mcorr::degeneracy_check(dec)) {
        nlohmann::json ranks = nlohmann::json::array();
        for (const int r : group) ranks.push_back(r + 1);
        degenerate_groups.push_back(ranks);
    }
    out["degenerate_eigenvalue_groups"] = degenerate_groups;

    if (args.out_path.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        mcorr::save_json(out, args.out_path);
        std::cout << "oracle report written to " << args.out_path << "\n";
    }
    return 0;
}

struct McArgs {
    std::string scenario_path;
    int trials = -1;
    int bootstraps = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
};

int run_mc(const McArgs& args) {
    mcorr::ScenarioConfig cfg = mcorr::load_scenario(args.scenario_path);
    if (args.trials > 0) cfg.trials = args.trials;
    if (args.bootstraps > 0) cfg.detect.bootstraps = args.bootstraps;
    if (args.seed_given) cfg.seed = args.seed;
    std::cerr << "mc: scenario '" << cfg.name << "', trials " << cfg.trials << ", seed "
              << cfg.seed << "\n";

    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) throw mcorr::IoError("mc: cannot create directory " + args.out_dir);

    const std::vector<mcorr::MetricsRecord> records = mcorr::run_scenario(cfg);
    nlohmann::json outputs = nlohmann::json::array();

    mcorr::emit_csv(records, args.out_dir + "/metrics.csv");
    outputs.push_back("metrics.csv");
    if (cfg.emit_cell_heatmap) {
        for (const auto& rec : records) {
            const std::string name = "heatmap_" + std::string(format_g6(rec.sweep_point)) + ".svg";
            mcorr::emit_heatmap(rec.cell_accuracy, args.out_dir + "/" + name);
            outputs.push_back(name);
        }
    }
    for (const auto& rec : records) {
        std::cout << "sweep=" << format_g6(rec.sweep_point) << " acc_d=" << format_g6(rec.acc_d)
                  << " acc_dall=" << format_g6(rec.acc_dall)
                  << " precision=" << format_g6(rec.precision)
                  << " recall=" << format_g6(rec.recall) << "\n";
    }

    const nlohmann::json manifest = {{"scenario", mcorr::scenario_to_json(cfg)},
                                     {"scenario_file", args.scenario_path},
                                     {"outputs", outputs}};
    mcorr::save_json(manifest, args.out_dir + "/run-manifest.json");
    return 0;
}

struct HeatmapArgs {
    std::string in_csv;
    std::string profile_path;
    std::string out_path;
};

int run_heatmap(const HeatmapArgs& args) {
    if (args.in_csv.empty() == args.profile_path.empty()) {
        throw mcorr::InvalidInput("heatmap: pass exactly one of --in or --profile");
    }
    Eigen::MatrixXd cells;
    if (!args.in_csv.empty()) {
        cells = mcorr::read_csv_matrix(args.in_csv);
    } else {
        const mcorr::GroundTruthMap truth =
            mcorr::ground_truth_map(mcorr::load_profile(args.profile_path));
        cells.resize(truth.rows, truth.cols());
        for (int r = 0; r < truth.rows; ++r) {
            for (int c = 0; c < truth.cols(); ++c) cells(r, c) = truth.at(r, c);
        }
    }
    mcorr::emit_heatmap(cells, args.out_path);
    std::cout << "heatmap written to " << args.out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlated-component detection across multiple data sets"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset directory");
    gen->add_option("--profile", gen_args.profile_path, "Correlation profile JSON")
        ->required()
        ->check(CLI::ExistingFile);
    gen->add_option("--samples", gen_args.samples, "Samples per data set (M)")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--snr", gen_args.snr_text, "SNR in dB, or 'inf' for noise-free (default 10)");
    gen->add_option("--seed", gen_args.seed, "RNG seed (default 1729)");
    gen->add_option("--mixing", gen_args.mixing, "Mixing kind (default orthogonal)")
        ->check(CLI::IsMember({"orthogonal", "gaussian"}));
    gen->add_option("--out", gen_args.out_dir, "Output directory")->required();

    DetectArgs detect_args;
    detect_args.cfg.seed = kDefaultSeed;
    auto* detect = app.add_subcommand("detect", "Estimate correlated dimension and structure");
    detect->add_option("--data", detect_args.data_dir, "Dataset directory from gen")
        ->required()
        ->check(CLI::ExistingDirectory);
    detect->add_option("--bootstraps", detect_args.cfg.bootstraps,
                       "Bootstrap resamples B (default 1000)")
        ->check(CLI::PositiveNumber);
    detect->add_option("--pfa", detect_args.cfg.pfa,
                       "Probability of false alarm (default 0.05)");
    detect->add_option("--seed", detect_args.cfg.seed, "RNG seed (default 1729)");
    detect->add_option("--out", detect_args.out_path, "Report path (default report.json)");
    detect->add_option("--dump-spectrum", detect_args.spectrum_path,
                       "Also write the observed eigenvalues as CSV (rank,value)");
    detect->add_flag_callback(
        "--independent-streams",
        [&detect_args] { detect_args.cfg.share_bootstrap = false; },
        "Draw separate bootstrap resamples for the structure stage");

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "Population-theory checks for a profile");
    oracle->add_option("--profile", oracle_args.profile_path, "Correlation profile JSON")
        ->required()
        ->check(CLI::ExistingFile);
    oracle->add_option("--mixing", oracle_args.mixing,
                       "identity, orthogonal, or gaussian (default identity)")
        ->check(CLI::IsMember({"identity", "orthogonal", "gaussian"}));
    oracle->add_option("--seed", oracle_args.seed, "Seed for random mixing (default 1729)");
    oracle->add_option("--tol", oracle_args.tol, "Above-one eigenvalue tolerance (default 1e-9)");
    oracle->add_option("--out", oracle_args.out_path, "Write JSON here instead of stdout");

    McArgs mc_args;
    auto* mc = app.add_subcommand("mc", "Run a Monte Carlo scenario sweep");
    mc->add_option("--scenario", mc_args.scenario_path, "Scenario config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    mc->add_option("--trials", mc_args.trials, "Override trial count");
    mc->add_option("--bootstraps", mc_args.bootstraps, "Override bootstrap resample count");
    mc->add_option("--seed", mc_args.seed, "Override master seed")
        ->each([&mc_args](const std::string&) { mc_args.seed_given = true; });
    mc->add_option("--out-dir", mc_args.out_dir, "Output directory")->required();

    HeatmapArgs heatmap_args;
    auto* heatmap = app.add_subcommand("heatmap", "Render a cell matrix (or truth map) as SVG");
    heatmap->add_option("--in", heatmap_args.in_csv, "CSV matrix of values in [0,1]");
    heatmap->add_option("--profile", heatmap_args.profile_path,
                        "Render this profile's ground-truth map instead");
    heatmap->add_option("--out", heatmap_args.out_path, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return run_gen(gen_args);
        if (detect->parsed()) return run_detect(detect_args);
        if (oracle->parsed()) return run_oracle(oracle_args);
        if (mc->parsed()) return run_mc(mc_args);
        if (heatmap->parsed()) return run_heatmap(heatmap_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const mcorr::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const mcorr::SingularMatrix& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const mcorr::NotPSD& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const mcorr::DegenerateSpectrum& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const mcorr::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
