#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rdv/elements.hpp"
#include "rdv/optimizer.hpp"
#include "rdv/sample.hpp"

namespace rdv {

// Shortest round-trip decimal text for a double (used for CSV cells so output
// bytes do not depend on the platform's iostream state).
std::string format_double(double v);

// Element serialization used by every file format:
//   {a_m, e, i_rad, raan_rad, argp_rad, mean_anom_rad, epoch_s}
// Readers also accept true_anom_rad in place of mean_anom_rad; the true
// anomaly is converted at ingestion.
nlohmann::json elements_to_json(const OrbitalElements& el);
OrbitalElements elements_from_json(const nlohmann::json& j);

// Single-object element file.
OrbitalElements load_elements(const std::string& path);
void save_elements(const OrbitalElements& el, const std::string& path);

// Dataset records (one JSON object per line).
nlohmann::json sample_to_json(const TransferSample& s);
TransferSample sample_from_json(const nlohmann::json& j);
std::vector<TransferSample> load_dataset(const std::string& path);

nlohmann::json solution_to_json(const TransferSolution& sol);

}  // namespace rdv
