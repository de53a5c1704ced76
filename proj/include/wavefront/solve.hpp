#pragma once

#include <vector>

#include "wavefront/analysis.hpp"
#include "wavefront/charroots.hpp"
#include "wavefront/operators.hpp"
#include "wavefront/profile.hpp"

namespace wavefront {

struct SolveOptions {
  double delta = 0.01;
  double tol_iter = 1e-10;
  std::size_t max_iter = 5000;
  int emit_iterates = 0;
  double band_tol = 1e-9;
};

struct SolveResult {
  ModelParams params;
  RootData roots;
  RegimeReport regime;
  OperatorConfig config;
  bool used_critical_lower = false;
  Profile lower;
  std::vector<Profile> iterates;  // first emit_iterates images of lower
  Profile front;
  IterationReport report;
  ExpansionFit plus_fit;
  ExpansionFit minus_fit;
};

// Full pipeline: classify, roots, lower solution (critical or not), upper
// where one applies, monotone iteration, residuals, tail fits.  Throws
// invalid_argument("NOT_EXISTS...") outside the existence region.
SolveResult solve_front(const ModelParams& params, const SolveOptions& opts);

}  // namespace wavefront
