#pragma once

#include <string>

#include "json.hpp"
#include "wavefront/analysis.hpp"
#include "wavefront/charroots.hpp"
#include "wavefront/operators.hpp"
#include "wavefront/profile.hpp"

namespace wavefront {

// CSV with header `t,phi`, 17 significant digits; the JSON sidecar carries
// the grid descriptor and both tail models.
void write_profile_csv(const Profile& phi, const std::string& path);
void write_profile_sidecar(const Profile& phi, const std::string& path);
Profile read_profile(const std::string& csv_path, const std::string& json_path);

nlohmann::json to_json(const TailModel& tail);
nlohmann::json to_json(const IterationReport& report);
nlohmann::json to_json(const ExpansionFit& fit);
nlohmann::json regime_json(const ModelParams& params, const RootData& roots,
                           const RegimeReport& report);

}  // namespace wavefront
