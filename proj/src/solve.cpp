#include "wavefront/solve.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <tuple>

namespace wavefront {

namespace {

bool logging_enabled() {
  const char* v = std::getenv("WAVEFRONT_LOG");
  return v && *v && *v != '0';
}

}  // namespace

SolveResult solve_front(const ModelParams& params, const SolveOptions& opts) {
  SolveResult res;
  res.params = params;
  res.regime = classify(params, opts.band_tol);
  if (res.regime.existence != Existence::EXISTS)
    throw std::invalid_argument("NOT_EXISTS: no monotone front for (h, c)");
  res.roots = compute_roots(params);

  const OperatorKind kind =
      res.regime.critical_c2 ? OperatorKind::B_OP : OperatorKind::A_OP;
  res.config = OperatorConfig::make(params, res.roots, kind);
  res.used_critical_lower = res.regime.critical_speed;
  if (res.used_critical_lower) res.config.trust_cut = 1e-10;

  Grid grid = design_grid(res.roots, params.h, opts.delta);
  res.lower = res.used_critical_lower
                  ? lower_critical(res.roots, params, grid)
                  : lower_noncritical(res.roots, grid);

  // Upper solution where the construction applies and no shift is needed;
  // the critical speed has none (the clamp at 1 takes over).
  Profile upper;
  bool have_upper = false;
  if (!res.used_critical_lower && res.roots.has_negative &&
      res.roots.lambda2 - res.roots.lambda1 > 1e-6) {
    try {
      const double r = choose_r(params, res.roots);
      upper = upper_noncritical(res.roots, grid, r);
      have_upper = shift_to_order(res.lower, upper).shift == 0.0;
    } catch (const std::runtime_error&) {
      have_upper = false;  // iterate unbounded above; range clamp suffices
    }
  }
  if (logging_enabled())
    std::cerr << "[wavefront] h=" << params.h << " c=" << params.c
              << " op=" << (kind == OperatorKind::B_OP ? "B" : "A")
              << " lower=" << (res.used_critical_lower ? "critical" : "noncritical")
              << " upper=" << (have_upper ? "yes" : "no")
              << " grid n=" << grid.n << "\n";

  if (opts.emit_iterates > 0) {
    Profile cur = res.lower;
    for (int k = 0; k < opts.emit_iterates; ++k) {
      cur = apply(res.config, cur);
      res.iterates.push_back(cur);
    }
  }

  auto run = [&](const Profile& low) {
    return iterate(res.config, low, have_upper ? &upper : nullptr,
                   opts.tol_iter, opts.max_iter);
  };
  auto [front, report] = run(res.lower);
  if (!report.converged && report.stalled_at_one) {
    // Front drifted against the right edge: widen once and retry.
    Grid wide = grid;
    wide.n += static_cast<std::size_t>(20.0 / grid.step);
    Profile low2 = res.used_critical_lower
                       ? lower_critical(res.roots, params, wide)
                       : lower_noncritical(res.roots, wide);
    have_upper = false;
    std::tie(front, report) = iterate(res.config, low2, nullptr, opts.tol_iter,
                                      opts.max_iter);
  }
  res.front = std::move(front);
  res.report = report;
  if (logging_enabled())
    std::cerr << "[wavefront] iterations=" << report.iterations
              << " converged=" << report.converged
              << " ode=" << report.final_residual_ode << "\n";
  res.plus_fit = fit_plus_tail(res.front, res.regime, res.roots);
  res.minus_fit = fit_minus_tail(res.front, res.regime, res.roots);
  return res;
}

}  // namespace wavefront
