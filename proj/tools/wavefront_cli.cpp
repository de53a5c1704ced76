#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavefront/io.hpp"
#include "wavefront/solve.hpp"

namespace {

using namespace wavefront;

double resolve_c(const std::string& c_arg, double h) {
  if (c_arg == "critical") {
    const double cs = c_star(h);
    if (!std::isfinite(cs))
      throw std::invalid_argument(
          "--c critical needs h in (1/e, h1]: c*(h) is +inf here");
    return cs;
  }
  std::size_t pos = 0;
  const double c = std::stod(c_arg, &pos);
  if (pos != c_arg.size())
    throw std::invalid_argument("cannot parse --c value '" + c_arg + "'");
  return c;
}

struct SweepSpec {
  double h0, h1, c0, c1;
  int nh, nc;
};

SweepSpec parse_sweep(const std::string& s) {
  SweepSpec sp{};
  if (std::sscanf(s.c_str(), "%lf:%lf:%d,%lf:%lf:%d", &sp.h0, &sp.h1, &sp.nh,
                  &sp.c0, &sp.c1, &sp.nc) != 6 ||
      sp.nh < 1 || sp.nc < 1)
    throw std::invalid_argument("--sweep expects h0:h1:n,c0:c1:m");
  return sp;
}

int run_sweep(const SweepSpec& sp) {
  const std::size_t total = static_cast<std::size_t>(sp.nh) * sp.nc;
  std::vector<std::string> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const int i = static_cast<int>(k) / sp.nc;
      const int j = static_cast<int>(k) % sp.nc;
      const double h =
          sp.nh == 1 ? sp.h0 : sp.h0 + (sp.h1 - sp.h0) * i / (sp.nh - 1);
      const double c =
          sp.nc == 1 ? sp.c0 : sp.c0 + (sp.c1 - sp.c0) * j / (sp.nc - 1);
      std::ostringstream os;
      os.precision(17);
      const RegimeReport rep = classify(ModelParams::from_hc(h, c));
      os << h << ',' << c << ',' << to_string(rep.existence);
      if (rep.existence == Existence::EXISTS)
        os << ',' << to_string(rep.minus_regime) << ','
           << to_string(rep.plus_regime);
      else
        os << ",,";
      rows[k] = os.str();
    }
  };
  std::vector<std::thread> pool;
  const unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::cout << "h,c,existence,minus_regime,plus_regime\n";
  for (const auto& r : rows) std::cout << r << '\n';
  return 0;
}

int cmd_region(double h, const std::string& c_arg) {
  const ModelParams p = ModelParams::from_hc(h, resolve_c(c_arg, h));
  const RegimeReport rep = classify(p);
  const RootData roots = compute_roots(p);
  std::cout << regime_json(p, roots, rep).dump(2) << '\n';
  return rep.existence == Existence::EXISTS ? 0 : 3;
}

int cmd_roots(double h, const std::string& c_arg) {
  const ModelParams p = ModelParams::from_hc(h, resolve_c(c_arg, h));
  const RootData r = compute_roots(p);
  nlohmann::json j = {{"h", p.h},       {"c", p.c},
                      {"epsilon", p.epsilon}, {"lambda", r.lambda},
                      {"mu", r.mu},     {"positive_root", r.pos_root},
                      {"has_negative", r.has_negative}};
  if (r.has_negative) {
    j["lambda1"] = std::isfinite(r.lambda1) ? nlohmann::json(r.lambda1)
                                            : nlohmann::json(nullptr);
    j["lambda2"] = r.lambda2;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_curves(int n) {
  const double h0c = h0_constant();
  const double h1c = h1_constant();
  const double inv_e = std::exp(-1.0);
  const double hln2 = 0.5 * std::log(2.0);
  std::vector<double> hs;
  for (int i = 1; i <= n; ++i)
    hs.push_back(h1c * static_cast<double>(i) / n);
  hs.insert(hs.end(), {hln2, inv_e, h0c, h1c});
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  std::cout << "h,eps_star,c_star,eps_sharp,c_sharp,h0,h1\n";
  std::cout.precision(17);
  for (double h : hs) {
    std::cout << h << ',';
    if (h > inv_e && h <= h1c)
      std::cout << eps_star(h) << ',' << c_star(h) << ',';
    else
      std::cout << ",inf,";
    if (h > hln2 && h <= h0c)
      std::cout << eps_sharp(h) << ',';
    else
      std::cout << ',';
    if (h <= hln2)
      std::cout << "inf";
    else
      std::cout << c_sharp(h);
    std::cout << ',' << h0c << ',' << h1c << '\n';
  }
  return 0;
}

int cmd_solve(double h, const std::string& c_arg, const SolveOptions& opts,
              const std::string& out_dir) {
  const ModelParams p = ModelParams::from_hc(h, resolve_c(c_arg, h));
  SolveResult res;
  try {
    res = solve_front(p, opts);
  } catch (const std::invalid_argument& e) {
    if (std::string(e.what()).rfind("NOT_EXISTS", 0) == 0) {
      std::cerr << e.what() << '\n';
      return 3;
    }
    throw;
  }
  write_profile_csv(res.front, out_dir + "/profile.csv");
  write_profile_sidecar(res.front, out_dir + "/profile.json");
  for (std::size_t k = 0; k < res.iterates.size(); ++k) {
    write_profile_csv(res.iterates[k],
                      out_dir + "/iterate_" + std::to_string(k + 1) + ".csv");
  }
  nlohmann::json j = {{"regime", regime_json(p, res.roots, res.regime)},
                      {"operator",
                       res.config.kind == OperatorKind::B_OP ? "B" : "A"},
                      {"lower_solution", res.used_critical_lower
                                             ? "critical"
                                             : "noncritical"},
                      {"report", to_json(res.report)},
                      {"plus_fit", to_json(res.plus_fit)},
                      {"minus_fit", to_json(res.minus_fit)}};
  {
    std::ofstream os(out_dir + "/report.json");
    os << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  if (res.report.monotonicity_violations > 0) return 5;
  if (!res.report.converged) return 4;
  return 0;
}

int cmd_validate(double delta) {
  const AZValidation v = validate_az(delta);
  nlohmann::json j = {{"delta", v.delta},
                      {"sup_error", v.sup_error},
                      {"max_signed_error", v.max_signed_error},
                      {"ode_residual", v.ode_residual},
                      {"ordering_ok", v.ordering_ok},
                      {"report", to_json(v.report)},
                      {"plus_fit", to_json(v.plus_fit)},
                      {"minus_fit", to_json(v.minus_fit)}};
  std::cout << j.dump(2) << '\n';
  const bool rates_ok =
      std::abs(v.plus_fit.fitted_rate + 5.0 / 6.0) < 0.01 * (5.0 / 6.0) &&
      std::abs(v.minus_fit.fitted_rate - 5.0 / 3.0) < 0.01 * (5.0 / 3.0);
  const bool ok = v.sup_error <= 1e-3 && v.ordering_ok &&
                  v.ode_residual <= 5e-4 && rates_ok &&
                  v.report.monotonicity_violations == 0;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone traveling wavefronts of the delayed KPP-Fisher "
               "equation: classification, solving, validation"};
  app.require_subcommand(1);

  double h = 0.0;
  std::string c_arg = "2";
  double delta = 0.01, tol = 1e-10;
  std::size_t max_iter = 5000;
  int emit_iterates = 0, curve_n = 256;
  std::string out_dir = ".", sweep;

  auto add_hc = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");  // frees -h for the delay
    sub->add_option("--h", h, "delay h >= 0");
    sub->add_option("--c", c_arg, "wave speed c >= 2, or 'critical'");
  };
  CLI::App* region = app.add_subcommand("region", "classify (h, c)");
  add_hc(region);
  region->add_option("--sweep", sweep, "grid sweep h0:h1:n,c0:c1:m (CSV out)");
  CLI::App* roots = app.add_subcommand("roots", "characteristic roots");
  add_hc(roots);
  CLI::App* curves =
      app.add_subcommand("curves", "critical curves CSV (Figure 1 data)");
  curves->add_option("--n", curve_n, "sample density");
  CLI::App* solve = app.add_subcommand("solve", "compute the front");
  add_hc(solve);
  solve->add_option("--delta", delta, "grid step target");
  solve->add_option("--tol", tol, "iteration sup-increment tolerance");
  solve->add_option("--max-iter", max_iter, "iteration cap");
  solve->add_option("--emit-iterates", emit_iterates,
                    "write the first k iterates (Figure 2 data)");
  solve->add_option("--out-dir", out_dir, "output directory");
  CLI::App* validate =
      app.add_subcommand("validate", "exact-solution validation (eps=0.24)");
  validate->add_option("--delta", delta, "grid step target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    if (region->parsed())
      return sweep.empty() ? cmd_region(h, c_arg) : run_sweep(parse_sweep(sweep));
    if (roots->parsed()) return cmd_roots(h, c_arg);
    if (curves->parsed()) return cmd_curves(curve_n);
    if (solve->parsed()) {
      SolveOptions opts;
      opts.delta = delta;
      opts.tol_iter = tol;
      opts.max_iter = max_iter;
      opts.emit_iterates = emit_iterates;
      return cmd_solve(h, c_arg, opts, out_dir);
    }
    if (validate->parsed()) return cmd_validate(delta);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  }
  return 2;
}
