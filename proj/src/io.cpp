#include "mcorr/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace mcorr {

using nlohmann::json;

namespace {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json snr_to_json(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0.0) return "inf";
    return snr_db;
}

double snr_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        throw InvalidInput("snr_db: unrecognized string value '" + s + "'");
    }
    return j.get<double>();
}

}  // namespace

json profile_to_json(const CorrelationProfile& profile) {
    json components = json::array();
    for (int i = 0; i < profile.n_components(); ++i) {
        json pairs = json::array();
        for (int p = 0; p < profile.p_sets(); ++p) {
            for (int q = p + 1; q < profile.p_sets(); ++q) {
                const double rho = profile.rho(i, p, q);
                if (rho > 0.0) pairs.push_back(json::array({p + 1, q + 1, rho}));
            }
        }
        if (!pairs.empty()) components.push_back({{"index", i + 1}, {"pairs", pairs}});
    }
    return {{"P", profile.p_sets()}, {"n", profile.n_components()}, {"components", components}};
}

CorrelationProfile profile_from_json(const json& j) {
    try {
        const int p_sets = j.at("P").get<int>();
        const int n = j.at("n").get<int>();
        CorrelationProfile profile(p_sets, n);
        std::set<std::pair<int, std::pair<int, int>>> seen;
        for (const auto& comp : j.value("components", json::array())) {
            const int index = comp.at("index").get<int>();
            if (index < 1 || index > n) {
                throw InvalidInput("profile: component index " + std::to_string(index) +
                                   " outside 1.." + std::to_string(n));
            }
            for (const auto& pair : comp.at("pairs")) {
                if (!pair.is_array() || pair.size() != 3) {
                    throw InvalidInput("profile: each pair must be [p, q, rho]");
                }
                const int p = pair[0].get<int>();
                const int q = pair[1].get<int>();
                const double rho = pair[2].get<double>();
                if (p < 1 || q < 1 || p > p_sets || q > p_sets || p >= q) {
                    throw InvalidInput("profile: pairs must satisfy 1 <= p < q <= P");
                }
                if (!seen.insert({index, {p, q}}).second) {
                    throw InvalidInput("profile: duplicate pair (" + std::to_string(p) + "," +
                                       std::to_string(q) + ") in component " +
                                       std::to_string(index));
                }
                profile.set_rho(index - 1, p - 1, q - 1, rho);
            }
        }
        return profile;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("profile: malformed JSON structure: ") + e.what());
    }
}

CorrelationProfile load_profile(const std::string& path) {
    return profile_from_json(load_json(path));
}

void save_profile(const CorrelationProfile& profile, const std::string& path) {
    save_json(profile_to_json(profile), path);
}

void save_dataset(const MultiDataset& data, const std::string& dir) {
    if (!data.truth) throw InvalidInput("save_dataset: dataset carries no generation truth");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("save_dataset: cannot create directory " + dir);

    json files = json::array();
    for (int p = 0; p < data.p_sets; ++p) {
        const std::string name = "x_" + std::to_string(p + 1) + ".csv";
        files.push_back(name);
        // On disk a row is a sample; in memory a column is a sample.
        write_csv_matrix(data.x_blocks[p].transpose(), dir + "/" + name);
    }
    const json manifest = {{"P", data.p_sets},
                           {"n", data.dim},
                           {"M", data.samples},
                           {"snr_db", snr_to_json(data.truth->snr_db)},
                           {"seed", data.truth->seed},
                           {"files", files},
                           {"truth_profile", profile_to_json(data.truth->profile)}};
    save_json(manifest, dir + "/manifest.json");
}

MultiDataset load_dataset(const std::string& dir) {
    const json manifest = load_json(dir + "/manifest.json");
    try {
        MultiDataset data;
        data.p_sets = manifest.at("P").get<int>();
        data.dim = manifest.at("n").get<int>();
        data.samples = manifest.at("M").get<int>();
        const auto& files = manifest.at("files");
        if (static_cast<int>(files.size()) != data.p_sets) {
            throw InvalidInput("manifest: file list length must equal P");
        }
        for (const auto& name : files) {
            const Eigen::MatrixXd stored = read_csv_matrix(dir + "/" + name.get<std::string>());
            if (stored.rows() != data.samples || stored.cols() != data.dim) {
                throw InvalidInput("dataset file " + name.get<std::string>() +
                                   ": expected M x n = " + std::to_string(data.samples) + " x " +
                                   std::to_string(data.dim));
            }
            data.x_blocks.push_back(stored.transpose());
        }
        DatasetTruth truth;
        truth.profile = profile_from_json(manifest.at("truth_profile"));
        truth.snr_db = snr_from_json(manifest.at("snr_db"));
        truth.seed = manifest.at("seed").get<std::uint64_t>();
        data.truth = std::move(truth);
        return data;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("manifest: malformed structure: ") + e.what());
    }
}

json report_to_json(const DetectionReport& report) {
    json map_entries = json::array();
    for (int r = 0; r < report.map.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < report.map.cols(); ++c) row.push_back(static_cast<int>(report.map.at(r, c)));
        map_entries.push_back(row);
    }
    json pvalues_struct = json::array();
    for (Eigen::Index r = 0; r < report.pvalues_struct.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < report.pvalues_struct.cols(); ++c) {
            row.push_back(report.pvalues_struct(r, c));
        }
        pvalues_struct.push_back(row);
    }
    return {{"d_hat", report.d_hat},
            {"pvalues_dim", report.pvalues_dim},
            {"map",
             {{"rows", report.map.rows},
              {"cols", report.map.rows > 0 ? report.map.cols() : 0},
              {"entries", map_entries}}},
            {"pvalues_struct", pvalues_struct},
            {"diagnostics", report.diagnostics}};
}

void save_report(const DetectionReport& report, const std::string& path) {
    save_json(report_to_json(report), path);
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j = {{"name", cfg.name},
              {"profile", profile_to_json(cfg.profile)},
              {"snr_grid", cfg.snr_grid},
              {"samples", cfg.samples},
              {"trials", cfg.trials},
              {"mixing", cfg.mixing == MixingKind::orthogonal ? "orthogonal" : "gaussian"},
              {"seed", cfg.seed},
              {"detect",
               {{"bootstraps", cfg.detect.bootstraps},
                {"pfa", cfg.detect.pfa},
                {"eig_tol", cfg.detect.eig_tol},
                {"share_bootstrap", cfg.detect.share_bootstrap}}}};
    if (!cfg.rho_grid.empty()) {
        j["rho_grid"] = cfg.rho_grid;
        json targets = json::array();
        for (const auto& [component, p, q] : cfg.rho_targets) {
            targets.push_back(json::array({component + 1, p + 1, q + 1}));
        }
        j["rho_targets"] = targets;
    }
    json metrics = json::array({"acc_d", "acc_dall", "precision", "recall"});
    if (cfg.emit_cell_heatmap) metrics.push_back("cellwise_heatmap");
    j["metrics"] = metrics;
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    try {
        ScenarioConfig cfg;
        cfg.name = j.value("name", std::string("scenario"));
        cfg.profile = profile_from_json(j.at("profile"));
        cfg.snr_grid = j.at("snr_grid").get<std::vector<double>>();
        cfg.samples = j.at("samples").get<int>();
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("mixing")) {
            const auto mixing = j.at("mixing").get<std::string>();
            if (mixing == "orthogonal") {
                cfg.mixing = MixingKind::orthogonal;
            } else if (mixing == "gaussian") {
                cfg.mixing = MixingKind::gaussian;
            } else {
                throw InvalidInput("scenario: mixing must be 'orthogonal' or 'gaussian'");
            }
        }
        if (j.contains("rho_grid")) {
            cfg.rho_grid = j.at("rho_grid").get<std::vector<double>>();
            for (const auto& target : j.at("rho_targets")) {
                if (!target.is_array() || target.size() != 3) {
                    throw InvalidInput("scenario: each rho target must be [component, p, q]");
                }
                cfg.rho_targets.push_back({target[0].get<int>() - 1, target[1].get<int>() - 1,
                                           target[2].get<int>() - 1});
            }
        }
        if (j.contains("detect")) {
            const auto& d = j.at("detect");
            cfg.detect.bootstraps = d.value("bootstraps", cfg.detect.bootstraps);
            cfg.detect.pfa = d.value("pfa", cfg.detect.pfa);
            cfg.detect.eig_tol = d.value("eig_tol", cfg.detect.eig_tol);
            cfg.detect.share_bootstrap = d.value("share_bootstrap", cfg.detect.share_bootstrap);
        }
        if (j.contains("metrics")) {
            cfg.emit_cell_heatmap = false;
            const std::set<std::string> known = {"acc_d", "acc_dall", "precision", "recall",
                                                 "cellwise_heatmap"};
            for (const auto& metric : j.at("metrics")) {
                const auto name = metric.get<std::string>();
                if (!known.contains(name)) throw InvalidInput("scenario: unknown metric " + name);
                if (name == "cellwise_heatmap") cfg.emit_cell_heatmap = true;
            }
        }
        return cfg;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("scenario: malformed structure: ") + e.what());
    }
}

ScenarioConfig load_scenario(const std::string& path) {
    return scenario_from_json(load_json(path));
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_csv_matrix: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("read_csv_matrix: non-numeric cell '" + cell + "' in " + path);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("read_csv_matrix: ragged rows in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("read_csv_matrix: empty file " + path);
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows.front().size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

void write_csv_matrix(const Eigen::MatrixXd& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_csv_matrix: cannot open " + path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_full(m(r, c));
        }
        out << '\n';
    }
    if (!out.good()) throw IoError("write_csv_matrix: write failed for " + path);
}

void write_spectrum_csv(const Eigen::VectorXd& values, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_spectrum_csv: cannot open " + path);
    out << "rank,value\n";
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out << (i + 1) << ',' << format_full(values(i)) << '\n';
    }
    if (!out.good()) throw IoError("write_spectrum_csv: write failed for " + path);
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_json: cannot open " + path);
    out << j.dump(2) << '\n';
    if (!out.good()) throw IoError("save_json: write failed for " + path);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_json: cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("load_json: parse error in " + path + ": " + e.what());
    }
}

}  // namespace mcorr
