#include "wavefront/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavefront {

namespace {

std::string fmt17(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// JSON numbers must stay numbers; infinities become large sentinels is
// wrong for replotting, so they serialize as null.
nlohmann::json num_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

void write_profile_csv(const Profile& phi, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "t,phi\n";
  os.precision(17);
  for (std::size_t i = 0; i < phi.size(); ++i)
    os << phi.t(i) << ',' << phi.values[i] << '\n';
  if (!os) throw std::runtime_error("write failed: " + path);
}

nlohmann::json to_json(const TailModel& tail) {
  return {{"rate", tail.rate}, {"K", tail.K}, {"K2", tail.K2}, {"p", tail.p}};
}

void write_profile_sidecar(const Profile& phi, const std::string& path) {
  nlohmann::json j = {{"t0", phi.grid.t0},
                      {"step", phi.grid.step},
                      {"n", phi.grid.n},
                      {"t_max", phi.grid.t_max()},
                      {"left_tail", to_json(phi.left)},
                      {"right_tail", to_json(phi.right)}};
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << j.dump(2) << '\n';
}

Profile read_profile(const std::string& csv_path,
                     const std::string& json_path) {
  std::ifstream js(json_path);
  if (!js) throw std::runtime_error("cannot open " + json_path);
  nlohmann::json j;
  js >> j;
  Profile phi;
  phi.grid.t0 = j.at("t0").get<double>();
  phi.grid.step = j.at("step").get<double>();
  phi.grid.n = j.at("n").get<std::size_t>();
  auto read_tail = [&](const char* key) {
    const auto& t = j.at(key);
    return TailModel{t.at("rate").get<double>(), t.at("K").get<double>(),
                     t.at("K2").get<double>(), t.at("p").get<int>()};
  };
  phi.left = read_tail("left_tail");
  phi.right = read_tail("right_tail");

  std::ifstream cs(csv_path);
  if (!cs) throw std::runtime_error("cannot open " + csv_path);
  std::string line;
  if (!std::getline(cs, line) || line != "t,phi")
    throw std::runtime_error("bad CSV header in " + csv_path);
  phi.values.reserve(phi.grid.n);
  while (std::getline(cs, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("bad CSV row in " + csv_path);
    phi.values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (phi.values.size() != phi.grid.n)
    throw std::runtime_error("CSV row count does not match sidecar n");
  return phi;
}

nlohmann::json to_json(const IterationReport& report) {
  return {{"iterations", report.iterations},
          {"sup_increments", report.sup_increments},
          {"final_residual_fp", report.final_residual_fp},
          {"final_residual_ode", report.final_residual_ode},
          {"converged", report.converged},
          {"monotonicity_violations", report.monotonicity_violations}};
}

nlohmann::json to_json(const ExpansionFit& fit) {
  return {{"side", fit.side == TailSide::PLUS_INF ? "PLUS_INF" : "MINUS_INF"},
          {"fitted_rate", fit.fitted_rate},
          {"fitted_poly_degree", fit.fitted_poly_degree},
          {"fitted_coeff", fit.fitted_coeff},
          {"window", {fit.window_lo, fit.window_hi}},
          {"rms_log_residual", fit.rms_log_residual},
          {"accepted", fit.accepted},
          {"secondary_rate", num_or_null(fit.secondary_rate)},
          {"secondary_coeff", num_or_null(fit.secondary_coeff)}};
}

nlohmann::json regime_json(const ModelParams& params, const RootData& roots,
                           const RegimeReport& report) {
  nlohmann::json j = {{"h", params.h},
                      {"c", params.c},
                      {"epsilon", params.epsilon},
                      {"existence", to_string(report.existence)},
                      {"c_star_h", num_or_null(report.c_star_h)},
                      {"c_sharp_h", num_or_null(report.c_sharp_h)},
                      {"lambda", roots.lambda},
                      {"mu", roots.mu},
                      {"positive_root", roots.pos_root}};
  if (roots.has_negative) {
    j["lambda1"] = num_or_null(roots.lambda1);
    j["lambda2"] = roots.lambda2;
  }
  if (report.existence == Existence::EXISTS) {
    j["critical_speed"] = report.critical_speed;
    j["critical_c2"] = report.critical_c2;
    j["minus_regime"] = to_string(report.minus_regime);
    j["plus_regime"] = to_string(report.plus_regime);
  }
  return j;
}

}  // namespace wavefront
