#pragma once

#include "wavefront/charroots.hpp"
#include "wavefront/operators.hpp"
#include "wavefront/profile.hpp"

namespace wavefront {

enum class TailSide { MINUS_INF, PLUS_INF };

struct ExpansionFit {
  TailSide side = TailSide::PLUS_INF;
  double fitted_rate = 0.0;
  int fitted_poly_degree = 0;
  double fitted_coeff = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double rms_log_residual = 0.0;
  bool accepted = false;
  // Present only when the regime predicts a second exponential (TWO_TERM at
  // minus infinity, TWO_EXP at plus infinity); NaN otherwise.
  double secondary_rate = 0.0;
  double secondary_coeff = 0.0;
};

// Log-linear regression of the tail data over [window_lo, window_hi]:
// degree 0 fits y ~ K e^{rate t}, degree 1 fits y ~ K |t| e^{rate t}.
// y is phi on the minus side and 1 - phi on the plus side; points with
// y below y_floor are excluded (projected / rounding-noise strip).
ExpansionFit fit_tail(const Profile& phi, TailSide side, int degree,
                      double window_lo, double window_hi,
                      double y_floor = 1.05e-6);

// Regime-driven fits: window from the dominance gap, degree from classify.
ExpansionFit fit_plus_tail(const Profile& phi, const RegimeReport& regime,
                           const RootData& roots);
ExpansionFit fit_minus_tail(const Profile& phi, const RegimeReport& regime,
                            const RootData& roots);

// Exact front for eps = 6/25, h = 0 (c = 5/sqrt 6), normalized with
// s0 = 0.5 ln 2 so that no free shift remains.
double az_exact(double s);

struct AZValidation {
  double delta = 0.0;
  double sup_error = 0.0;   // sup |front - exact| on [-10, 10]
  double max_signed_error = 0.0;
  double ode_residual = 0.0;
  bool ordering_ok = false;  // lower <= K lower <= K^2 lower <= K^3 lower <= exact
  IterationReport report;
  ExpansionFit plus_fit;
  ExpansionFit minus_fit;
  Profile front;
};

AZValidation validate_az(double delta = 0.01);

}  // namespace wavefront
