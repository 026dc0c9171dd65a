#pragma once

#include <Eigen/Dense>
#include <string>

#include "json.hpp"
#include "mcorr/detect.hpp"
#include "mcorr/harness.hpp"
#include "mcorr/profile.hpp"
#include "mcorr/synth.hpp"

namespace mcorr {

// File formats are 1-based (profile components, data-set pairs) and JSON/CSV
// only; everything in memory stays 0-based. Parse failures and filesystem
// problems raise IoError; structurally valid files with bad values raise
// InvalidInput.

nlohmann::json profile_to_json(const CorrelationProfile& profile);
CorrelationProfile profile_from_json(const nlohmann::json& j);
CorrelationProfile load_profile(const std::string& path);
void save_profile(const CorrelationProfile& profile, const std::string& path);

// Dataset directory: manifest.json {P, n, M, snr_db, seed, files,
// truth_profile} plus one CSV per data set (M rows x n columns, no header).
// A +infinite SNR is stored as the string "inf".
void save_dataset(const MultiDataset& data, const std::string& dir);
MultiDataset load_dataset(const std::string& dir);

nlohmann::json report_to_json(const DetectionReport& report);
void save_report(const DetectionReport& report, const std::string& path);

nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);

Eigen::MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(const Eigen::MatrixXd& m, const std::string& path);

// Two columns "rank,value", rank 1-based, values in the given order.
void write_spectrum_csv(const Eigen::VectorXd& values, const std::string& path);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace mcorr
