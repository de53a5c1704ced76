#include "wavefront/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavefront {

namespace {

double clip01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Piecewise-analytic evaluators used by the differential-inequality sweeps.
struct LowerPieces {
  double tau, lam, l2, a;  // a = -l2/(lam - l2)
  double phi(double t) const {
    return t <= tau ? a * std::exp(lam * (t - tau)) : 1.0 - std::exp(l2 * t);
  }
  double d1(double t) const {
    return t <= tau ? lam * a * std::exp(lam * (t - tau))
                    : -l2 * std::exp(l2 * t);
  }
  double d2(double t) const {
    return t <= tau ? lam * lam * a * std::exp(lam * (t - tau))
                    : -l2 * l2 * std::exp(l2 * t);
  }
};

struct UpperPieces {
  double t0r, l2, r, m0;
  double phi(double t) const {
    return t <= t0r ? m0 : 1.0 - std::exp(l2 * t) + std::exp(r * t);
  }
  double d1(double t) const {
    return t <= t0r ? 0.0 : -l2 * std::exp(l2 * t) + r * std::exp(r * t);
  }
  double d2(double t) const {
    return t <= t0r ? 0.0
                    : -l2 * l2 * std::exp(l2 * t) + r * r * std::exp(r * t);
  }
};

}  // namespace

double Profile::left_value(double t) const {
  if (left.rate == 0.0) return left.K;
  return left.K * std::exp(left.rate * t);
}

double Profile::right_value(double t) const {
  double y = std::exp(right.rate * t) *
             (right.p == 1 ? right.K * t + right.K2 : right.K);
  return 1.0 - y;
}

void check_profile_invariants(const Profile& phi, double tail_tol) {
  if (phi.values.size() != phi.grid.n || phi.grid.n < 4)
    throw std::runtime_error("profile: grid/value size mismatch");
  if (!(phi.grid.step > 0.0)) throw std::runtime_error("profile: bad step");
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    double v = phi.values[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw std::runtime_error("profile: value outside [0,1]");
    if (i > 0 && v < phi.values[i - 1] - 1e-12)
      throw std::runtime_error("profile: values not nondecreasing");
  }
  if (std::abs(phi.left_value(phi.grid.t0) - phi.values.front()) > tail_tol)
    throw std::runtime_error("profile: left tail discontinuous");
  if (std::abs(phi.right_value(phi.grid.t_max()) - phi.values.back()) >
      tail_tol)
    throw std::runtime_error("profile: right tail discontinuous");
}

Grid design_grid(const RootData& roots, double h, double delta_target,
                 double shift) {
  if (!roots.has_negative)
    throw std::invalid_argument("design_grid: no negative roots");
  double step = delta_target;
  if (h > 0.0) {
    auto m = static_cast<std::size_t>(std::ceil(h / delta_target - 1e-12));
    step = h / static_cast<double>(m);
  }
  const double tau = lower_tau(roots);
  double t0 = std::max(-200.0, tau - 40.0 / roots.lambda);
  double t1 = std::min(200.0, tau + 40.0 / (-roots.lambda2) + shift);
  Grid g;
  g.t0 = t0;
  g.step = step;
  g.n = static_cast<std::size_t>(std::ceil((t1 - t0) / step)) + 1;
  return g;
}

double lower_tau(const RootData& roots) {
  return std::log(roots.lambda / (roots.lambda - roots.lambda2)) /
         roots.lambda2;
}

Profile lower_noncritical(const RootData& roots, const Grid& grid,
                          double sigma) {
  if (!roots.has_negative || !(roots.lambda1 < roots.lambda2))
    throw std::invalid_argument("lower_noncritical: needs lambda1 < lambda2");
  const double lam = roots.lambda, l2 = roots.lambda2;
  const double tau = lower_tau(roots);
  const double a = -l2 / (lam - l2);
  Profile phi;
  phi.grid = grid;
  phi.values.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.t(i) - sigma;
    phi.values[i] = clip01(t <= tau ? a * std::exp(lam * (t - tau))
                                    : 1.0 - std::exp(l2 * t));
  }
  phi.left = {lam, a * std::exp(-lam * (tau + sigma)), 0.0, 0};
  phi.right = {l2, std::exp(-l2 * sigma), 0.0, 0};
  check_profile_invariants(phi);
  return phi;
}

Profile upper_noncritical(const RootData& roots, const Grid& grid, double r) {
  if (!roots.has_negative)
    throw std::invalid_argument("upper_noncritical: needs negative roots");
  const double l2 = roots.lambda2;
  if (!(r < l2 && r > roots.lambda1))
    throw std::invalid_argument("upper_noncritical: r outside (lambda1, lambda2)");
  const double t0r = (std::log(-r) - std::log(-l2)) / (l2 - r);
  const double m0 = 1.0 - std::exp(l2 * t0r) + std::exp(r * t0r);
  Profile phi;
  phi.grid = grid;
  phi.values.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.t(i);
    phi.values[i] =
        clip01(t <= t0r ? m0 : 1.0 - std::exp(l2 * t) + std::exp(r * t));
  }
  phi.left = {0.0, m0, 0.0, 0};
  phi.right = {l2, 1.0, 0.0, 0};
  check_profile_invariants(phi);
  return phi;
}

double lower_inequality_max(const RootData& roots, const ModelParams& params,
                            double sigma, int samples) {
  LowerPieces f{lower_tau(roots) + sigma, roots.lambda, roots.lambda2,
                -roots.lambda2 / (roots.lambda - roots.lambda2)};
  // translate: phi(t) pieces already shifted via tau + sigma except the
  // right exponential, handled by evaluating at t - sigma.
  auto phi = [&](double t) {
    return t <= f.tau
               ? f.a * std::exp(f.lam * (t - f.tau))
               : 1.0 - std::exp(f.l2 * (t - sigma));
  };
  auto d1 = [&](double t) {
    return t <= f.tau ? f.lam * f.a * std::exp(f.lam * (t - f.tau))
                      : -f.l2 * std::exp(f.l2 * (t - sigma));
  };
  auto d2 = [&](double t) {
    return t <= f.tau ? f.lam * f.lam * f.a * std::exp(f.lam * (t - f.tau))
                      : -f.l2 * f.l2 * std::exp(f.l2 * (t - sigma));
  };
  const double lo = f.tau - 10.0, hi = f.tau + params.h + 10.0;
  double worst = -1e300;
  for (int i = 0; i <= samples; ++i) {
    const double t = lo + (hi - lo) * i / samples;
    if (std::abs(t - f.tau) < 1e-9) continue;  // second derivative jump
    const double n = params.epsilon * d2(t) - d1(t) +
                     phi(t) * (1.0 - phi(t - params.h));
    worst = std::max(worst, n);
  }
  return worst;
}

double upper_inequality_min(const RootData& roots, const ModelParams& params,
                            double r, int samples) {
  const double l2 = roots.lambda2;
  const double t0r = (std::log(-r) - std::log(-l2)) / (l2 - r);
  UpperPieces f{t0r, l2, r, 1.0 - std::exp(l2 * t0r) + std::exp(r * t0r)};
  const double lo = t0r - 5.0, hi = t0r + params.h + 20.0;
  double worst = 1e300;
  for (int i = 0; i <= samples; ++i) {
    const double t = lo + (hi - lo) * i / samples;
    if (std::abs(t - t0r) < 1e-9) continue;
    const double n = params.epsilon * f.d2(t) - f.d1(t) +
                     f.phi(t) * (1.0 - f.phi(t - params.h));
    worst = std::min(worst, n);
  }
  return worst;
}

double choose_r(const ModelParams& params, const RootData& roots) {
  if (!roots.has_negative)
    throw std::invalid_argument("choose_r: needs negative roots");
  const double l2 = roots.lambda2;
  const double delta0 = std::isfinite(roots.lambda1)
                            ? std::min(0.1, 0.5 * (l2 - roots.lambda1))
                            : 0.1;
  if (!(delta0 > 0.0)) throw std::runtime_error("choose_r: lambda1 = lambda2");
  double delta = delta0;
  for (int k = 0; k <= 40; ++k, delta *= 0.5) {
    const double r = l2 - delta;
    if (upper_inequality_min(roots, params, r, 10000) >= -1e-12) return r;
  }
  throw std::runtime_error("choose_r: NO_VALID_R after 40 halvings");
}

double lower_critical_A(const RootData& roots, const ModelParams& params) {
  // Twice the paper's lower bound; the iteration driver may retry larger.
  return 2.0 * (std::exp(-roots.lambda2 * params.h) - 1.0) / params.h;
}

Profile lower_critical(const RootData& roots, const ModelParams& params,
                       const Grid& grid) {
  if (!roots.has_negative)
    throw std::invalid_argument("lower_critical: needs negative roots");
  const double l2 = roots.lambda2;
  if (params.h <= std::exp(-1.0))
    throw std::invalid_argument("lower_critical: critical case needs h > 1/e");
  const double A = lower_critical_A(roots, params);
  // tau' solves At + 1 = e^{-l2 t}; positive and > h.
  auto f = [&](double t) { return A * t + 1.0 - std::exp(-l2 * t); };
  double hi = params.h;
  while (f(hi) > 0.0) hi *= 2.0;
  double lo = params.h;
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    if (m == lo || m == hi) break;
    (f(m) > 0.0 ? lo : hi) = m;
  }
  const double taup = 0.5 * (lo + hi);
  Profile phi;
  phi.grid = grid;
  phi.values.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.t(i);
    phi.values[i] =
        clip01(t <= taup ? 0.0 : 1.0 - (A * t + 1.0) * std::exp(l2 * t));
  }
  phi.left = {0.0, 0.0, 0.0, 0};
  phi.right = {l2, A, 1.0, 1};
  check_profile_invariants(phi);
  return phi;
}

LowerUpperPair shift_to_order(const Profile& lower, const Profile& upper) {
  auto ordered = [&](double sigma) {
    // Grid part: evaluate upper at t + sigma by the floor sample (upper is
    // monotone, so this underestimates it and keeps the check conservative).
    const Grid& g = lower.grid;
    const Grid& gu = upper.grid;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      const double ts = g.t(i) + sigma;
      double uv;
      if (ts <= gu.t0)
        uv = upper.left_value(ts);
      else if (ts >= gu.t_max())
        uv = upper.right_value(ts);
      else {
        auto j = static_cast<std::size_t>((ts - gu.t0) / gu.step);
        uv = upper.values[j];
      }
      const double lv = lower.values[i];
      if (lv > uv) return false;
      // Strictness is only meaningful away from the saturated ends, where
      // double rounding collapses the analytic gap to exact equality.
      const bool interior = lv > 1e-13 && uv < 1.0 - 1e-13;
      if (interior && !(lv < uv)) return false;
    }
    // Right tails: lower(t) < upper(t + sigma) iff y_low(t) > y_up(t+sigma).
    if (lower.right.p == upper.right.p) {
      if (!(lower.right.K >=
            upper.right.K * std::exp(upper.right.rate * sigma) - 1e-300))
        return false;
    } else if (lower.right.p < upper.right.p) {
      return false;  // upper's tail approaches 1 slower: ordering fails far out
    }
    // Left side: a constant-left upper dominates any decaying left tail; two
    // exponential tails with the same rate compare by coefficient.
    if (upper.left.rate == 0.0) {
      if (!(upper.left.K > 0.0)) return false;
    } else if (lower.left.rate == upper.left.rate) {
      if (!(lower.left.K <= upper.left.K * std::exp(upper.left.rate * sigma)))
        return false;
    }
    return true;
  };
  LowerUpperPair pair{lower, upper, 0.0};
  if (ordered(0.0)) return pair;
  for (double sigma = 1.0; sigma <= 1024.0; sigma *= 2.0) {
    if (ordered(sigma)) {
      pair.shift = sigma;
      return pair;
    }
  }
  throw std::runtime_error("shift_to_order: ORDERING_FAILED");
}

}  // namespace wavefront
