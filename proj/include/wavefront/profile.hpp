#pragma once

#include <cstddef>
#include <vector>

#include "wavefront/charroots.hpp"

namespace wavefront {

// Analytic tail descriptor.  On the right, 1 - phi(t) ~ e^{rate t}(K t^p + K2)
// for t > t_max (p = 0 collapses to K e^{rate t}, K2 unused and kept 0).
// On the left, phi(t) ~ K e^{rate t} for t < t_min; rate = 0 means the
// constant extension K (upper solutions), K = 0 the identically-zero
// extension (critical lower solution).
struct TailModel {
  double rate = 0.0;
  double K = 0.0;
  double K2 = 0.0;
  int p = 0;
};

struct Grid {
  double t0 = 0.0;
  double step = 0.0;
  std::size_t n = 0;

  double t(std::size_t i) const { return t0 + step * static_cast<double>(i); }
  double t_max() const { return t(n - 1); }
};

struct Profile {
  Grid grid;
  std::vector<double> values;
  TailModel left;
  TailModel right;

  double t(std::size_t i) const { return grid.t(i); }
  std::size_t size() const { return values.size(); }
  // Tail-model evaluations (used beyond the grid).
  double left_value(double t) const;
  double right_value(double t) const;  // returns phi, not 1 - phi
};

// Monotone in [0,1], grid consistent, tails continuous at the ends.
void check_profile_invariants(const Profile& phi, double tail_tol = 1e-6);

// Grid with the delay an exact number of steps and tails resolved to depth
// e^{-40}: t in [tau - 40/lambda, tau + 40/|lambda2|], clamped to [-200,200].
Grid design_grid(const RootData& roots, double h, double delta_target = 0.01,
                 double shift = 0.0);

double lower_tau(const RootData& roots);

// Piecewise lower solution for lambda1 < lambda2, translated by sigma
// (any translate of a lower solution is a lower solution).
Profile lower_noncritical(const RootData& roots, const Grid& grid,
                          double sigma = 0.0);

// Upper solution phi2(t) = 1 - e^{lambda2 t} + e^{rt} flattened to its
// minimum left of t0(r); valid for r < lambda2 close enough to lambda2.
Profile upper_noncritical(const RootData& roots, const Grid& grid, double r);

// First r = lambda2 - delta0 2^{-k} whose differential-inequality sweep
// passes; throws after 40 halvings.
double choose_r(const ModelParams& params, const RootData& roots);

// Critical-case lower solution 1 - (At+1)e^{lambda2 t} beyond tau', zero
// before; requires the double root lambda1 = lambda2 (c = c_star(h)).
Profile lower_critical(const RootData& roots, const ModelParams& params,
                       const Grid& grid);
double lower_critical_A(const RootData& roots, const ModelParams& params);

struct LowerUpperPair {
  Profile lower;
  Profile upper;
  double shift = 0.0;
};

// Doubling search for sigma with lower(t) < upper(t + sigma) pointwise.
LowerUpperPair shift_to_order(const Profile& lower, const Profile& upper);

// Differential operator N phi = eps phi'' - phi' + phi (1 - phi(. - h))
// evaluated analytically on the piecewise forms (for inequality sweeps).
double lower_inequality_max(const RootData& roots, const ModelParams& params,
                            double sigma, int samples);
double upper_inequality_min(const RootData& roots, const ModelParams& params,
                            double r, int samples);

}  // namespace wavefront
