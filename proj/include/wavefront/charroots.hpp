#pragma once

#include <optional>
#include <string>
#include <utility>

namespace wavefront {

// Problem instance: delay h >= 0 and wave speed c >= 2, with epsilon = 1/c^2.
struct ModelParams {
  double h = 0.0;
  double c = 2.0;
  double epsilon = 0.25;

  static ModelParams from_hc(double h, double c);
};

// Characteristic function at the positive steady state.
double psi(double z, double epsilon, double h);
double psi_prime(double z, double epsilon, double h);

// Roots at both steady states.  lambda1 is -infinity when h = 0; the pair
// (lambda1, lambda2) is absent when the equation has no negative real roots.
struct RootData {
  double lambda = 0.0;   // smaller positive root of eps z^2 - z + 1 = 0
  double mu = 0.0;       // larger positive root
  bool has_negative = false;
  double lambda1 = 0.0;  // -inf sentinel for h = 0
  double lambda2 = 0.0;
  double pos_root = 0.0; // unique positive root of psi
};

std::pair<double, double> zero_state_roots(const ModelParams& p);
std::optional<std::pair<double, double>> negative_roots(const ModelParams& p);
double positive_root(const ModelParams& p);
RootData compute_roots(const ModelParams& p);

// Critical delays and speed curves.
double h1_constant();   // existence boundary, ~0.560771160
double h0_constant();   // clean-regime boundary, ~0.5336619208
double eps_star(double h);   // domain (1/e, h1]
double eps_sharp(double h);  // domain (0.5 ln 2, h0]
double c_star(double h);     // 1/sqrt(eps_star); +inf for h <= 1/e
double c_sharp(double h);    // +inf on (0, 0.5 ln 2]; 1/sqrt(eps_sharp) on
                             // (0.5 ln 2, h0]; 2 on (h0, h1]

enum class Existence { EXISTS, NOT_EXISTS };
enum class MinusRegime { CRITICAL_C2, TWO_TERM, ONE_TERM };
enum class PlusRegime { CLEAN, TWO_EXP, DOUBLE_ROOT };

const char* to_string(Existence e);
const char* to_string(MinusRegime r);
const char* to_string(PlusRegime r);

struct RegimeReport {
  Existence existence = Existence::NOT_EXISTS;
  bool critical_speed = false;  // |c - c_star(h)| within the band
  bool critical_c2 = false;     // |c - 2| within the band (operator B)
  MinusRegime minus_regime = MinusRegime::TWO_TERM;
  PlusRegime plus_regime = PlusRegime::CLEAN;
  double c_star_h = 0.0;        // +inf when h <= 1/e
  double c_sharp_h = 0.0;
};

// tol is relative in c; it is the half-width of the CRITICAL_SPEED band.
RegimeReport classify(const ModelParams& p, double tol = 1e-9);

}  // namespace wavefront
