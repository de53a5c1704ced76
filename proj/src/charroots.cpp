#include "wavefront/charroots.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace wavefront {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection to near machine precision on a sign-changing bracket.
double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw std::runtime_error("bisect: bracket does not change sign");
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Newton polish with bisection fallback interval kept implicit; psi is
// smooth so a few steps from a bisected seed are enough.
double polish_root(const std::function<double(double)>& f,
                   const std::function<double(double)>& df, double z) {
  for (int i = 0; i < 6; ++i) {
    double d = df(z);
    if (d == 0.0) break;
    double step = f(z) / d;
    if (!std::isfinite(step)) break;
    z -= step;
  }
  return z;
}

// Parametric curve for eps_star: h(t) with eps = t*h(t), t in [0, t_end].
double eps_star_h_of_t(double t) {
  double s = std::sqrt(4.0 * t * t + 1.0);
  return (2.0 * t + s) * std::exp(-1.0 - 2.0 * t / (1.0 + s));
}

// Parametric curve for eps_sharp: h(t), eps#(t), t in (-2, t_end].
double eps_sharp_of_t(double t) {
  return (t + 2.0 + std::sqrt(2.0 * t + 4.0)) / (t * t);
}
double eps_sharp_h_of_t(double t) {
  return -std::log(2.0 + std::sqrt(2.0 * t + 4.0)) / t;
}

// t-range endpoints are recomputed, not taken from the paper's truncated
// digits: they solve eps(t) = 0.25.
double eps_star_t_end() {
  static const double t_end = bisect(
      [](double t) { return t * eps_star_h_of_t(t) - 0.25; }, 0.0, 1.0);
  return t_end;
}
double eps_sharp_t_end() {
  static const double t_end = bisect(
      [](double t) { return eps_sharp_of_t(t) - 0.25; }, -1.999999, -1.0);
  return t_end;
}

void check_params(const ModelParams& p) {
  if (!(p.h >= 0.0)) throw std::invalid_argument("h must be >= 0");
  if (!(p.c >= 2.0)) throw std::invalid_argument("c must be >= 2");
}

}  // namespace

ModelParams ModelParams::from_hc(double h, double c) {
  ModelParams p;
  p.h = h;
  p.c = c;
  p.epsilon = 1.0 / (c * c);
  check_params(p);
  return p;
}

double psi(double z, double epsilon, double h) {
  return epsilon * z * z - z - std::exp(-z * h);
}

double psi_prime(double z, double epsilon, double h) {
  return 2.0 * epsilon * z - 1.0 + h * std::exp(-z * h);
}

std::pair<double, double> zero_state_roots(const ModelParams& p) {
  check_params(p);
  const double eps = p.epsilon;
  if (!(eps > 0.0 && eps <= 0.25))
    throw std::invalid_argument("epsilon outside (0, 0.25]");
  const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * eps));
  // Stable quadratic formula: the smaller root via the conjugate form.
  const double lambda = 2.0 / (1.0 + disc);
  const double mu = (1.0 + disc) / (2.0 * eps);
  return {lambda, mu};
}

std::optional<std::pair<double, double>> negative_roots(const ModelParams& p) {
  check_params(p);
  const double eps = p.epsilon;
  const double h = p.h;
  if (h == 0.0) {
    // eps z^2 - z - 1 = 0 has one negative root; lambda1 = -inf sentinel.
    const double l2 = (1.0 - std::sqrt(1.0 + 4.0 * eps)) / (2.0 * eps);
    return std::make_pair(-kInf, l2);
  }
  // psi' is convex (psi''' = h^3 e^{-zh} > 0), so psi has a unique interior
  // critical point zs < 0 which is a maximum of psi on (-inf, 0) whenever
  // psi'(0-) < 0 fails... locate zs by derivative bisection, then bracket a
  // root on each side of it.
  auto dpsi = [&](double z) { return psi_prime(z, eps, h); };
  double a = -1.0;
  while (dpsi(a) < 0.0) {
    a *= 2.0;
    if (a < -1e8) return std::nullopt;
  }
  const double zs = bisect(dpsi, a, -1e-300);
  const double peak = psi(zs, eps, h);
  if (peak < -1e-11) return std::nullopt;  // max below axis: no roots
  if (peak < 0.0) return std::make_pair(zs, zs);  // tangency at rounding level
  auto f = [&](double z) { return psi(z, eps, h); };
  auto df = [&](double z) { return psi_prime(z, eps, h); };
  double l2 = bisect(f, zs, -1e-300);
  double b = zs * 2.0;
  while (psi(b, eps, h) > 0.0) b *= 2.0;
  double l1 = bisect(f, b, zs);
  l1 = polish_root(f, df, l1);
  l2 = polish_root(f, df, l2);
  if (l1 > l2) std::swap(l1, l2);
  return std::make_pair(l1, l2);
}

double positive_root(const ModelParams& p) {
  check_params(p);
  auto f = [&](double z) { return psi(z, p.epsilon, p.h); };
  auto df = [&](double z) { return psi_prime(z, p.epsilon, p.h); };
  double b = 1.0;
  while (f(b) < 0.0) b *= 2.0;
  double z = bisect(f, 1e-300, b);
  return polish_root(f, df, z);
}

RootData compute_roots(const ModelParams& p) {
  RootData r;
  std::tie(r.lambda, r.mu) = zero_state_roots(p);
  if (auto neg = negative_roots(p)) {
    r.has_negative = true;
    r.lambda1 = neg->first;
    r.lambda2 = neg->second;
  }
  r.pos_root = positive_root(p);
  return r;
}

double h1_constant() {
  static const double h1 = bisect(
      [](double h) {
        double s = std::sqrt(1.0 + 4.0 * h * h);
        return 2.0 * h * h * std::exp(1.0 + s - 2.0 * h) - (1.0 + s);
      },
      0.3, 1.0);
  return h1;
}

double h0_constant() {
  static const double h0 = eps_sharp_h_of_t(eps_sharp_t_end());
  return h0;
}

double eps_star(double h) {
  static const double h1 = h1_constant();
  const double h_lo = std::exp(-1.0);
  if (!(h > h_lo && h <= h1 + 1e-14))
    throw std::invalid_argument("eps_star: h outside (1/e, h1]");
  const double t = bisect(
      [&](double tt) { return eps_star_h_of_t(tt) - h; }, 0.0,
      eps_star_t_end());
  return t * eps_star_h_of_t(t);
}

double eps_sharp(double h) {
  static const double h0 = h0_constant();
  const double h_lo = 0.5 * std::log(2.0);
  if (!(h > h_lo && h <= h0 + 1e-14))
    throw std::invalid_argument("eps_sharp: h outside (0.5 ln 2, h0]");
  const double t = bisect(
      [&](double tt) { return eps_sharp_h_of_t(tt) - h; }, -1.9999999,
      eps_sharp_t_end());
  return eps_sharp_of_t(t);
}

double c_star(double h) {
  if (h <= std::exp(-1.0)) return kInf;
  return 1.0 / std::sqrt(eps_star(h));
}

double c_sharp(double h) {
  const double hln2 = 0.5 * std::log(2.0);
  if (h <= hln2) return kInf;
  if (h <= h0_constant()) return 1.0 / std::sqrt(eps_sharp(h));
  return 2.0;
}

const char* to_string(Existence e) {
  return e == Existence::EXISTS ? "EXISTS" : "NOT_EXISTS";
}
const char* to_string(MinusRegime r) {
  switch (r) {
    case MinusRegime::CRITICAL_C2: return "CRITICAL_C2";
    case MinusRegime::TWO_TERM: return "TWO_TERM";
    default: return "ONE_TERM";
  }
}
const char* to_string(PlusRegime r) {
  switch (r) {
    case PlusRegime::CLEAN: return "CLEAN";
    case PlusRegime::TWO_EXP: return "TWO_EXP";
    default: return "DOUBLE_ROOT";
  }
}

RegimeReport classify(const ModelParams& p, double tol) {
  check_params(p);
  RegimeReport rep;
  const double h1 = h1_constant();
  const double inv_e = std::exp(-1.0);
  rep.c_star_h = (p.h > inv_e && p.h <= h1) ? c_star(p.h) : kInf;
  rep.c_sharp_h = c_sharp(std::min(p.h, h1));
  const bool exists =
      (p.h <= inv_e) || (p.h <= h1 && p.c <= rep.c_star_h * (1.0 + tol));
  rep.existence = exists ? Existence::EXISTS : Existence::NOT_EXISTS;
  if (!exists) return rep;

  rep.critical_c2 = std::abs(p.c - 2.0) <= 2.0 * tol;
  rep.critical_speed = std::isfinite(rep.c_star_h) &&
                       std::abs(p.c - rep.c_star_h) <= rep.c_star_h * tol;

  const double c_one_term = 1.5 * std::sqrt(2.0);
  if (rep.critical_c2)
    rep.minus_regime = MinusRegime::CRITICAL_C2;
  else if (p.c < c_one_term)
    rep.minus_regime = MinusRegime::TWO_TERM;
  else
    rep.minus_regime = MinusRegime::ONE_TERM;

  if (rep.critical_speed) {
    rep.plus_regime = PlusRegime::DOUBLE_ROOT;
  } else {
    // Lemma 2.2: lambda1 <= 2 lambda2 is equivalent to the (h, c) band
    // h <= h0, c <= c_sharp(h); the root form handles every boundary.
    auto neg = negative_roots(p);
    if (neg && neg->first <= 2.0 * neg->second)
      rep.plus_regime = PlusRegime::CLEAN;
    else
      rep.plus_regime = PlusRegime::TWO_EXP;
  }
  return rep;
}

}  // namespace wavefront
