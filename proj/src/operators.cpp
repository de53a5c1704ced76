#include "wavefront/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavefront {

namespace {

using ld = long double;

ld clip01(ld x) { return std::min<ld>(1.0L, std::max<ld>(0.0L, x)); }

std::size_t delay_steps(double h, double step) {
  if (h == 0.0) return 0;
  auto m = static_cast<std::size_t>(std::llround(h / step));
  if (std::abs(static_cast<double>(m) * step - h) > 1e-9)
    throw std::runtime_error("NONALIGNED_GRID: h is not a multiple of step");
  return m;
}

// Two-point weights on a panel of width d against the kernels e^{-nu u} and
// u e^{-nu u}, exact for integrands in span{1, e^{b u}}.
struct PanelW {
  ld E, w0, w1, v0, v1;
};

PanelW panel_weights(ld nu, ld d, ld b) {
  PanelW p;
  p.E = std::exp(-nu * d);
  const ld J0 = -std::expm1(-nu * d) / nu;
  const ld Jb = -std::expm1((b - nu) * d) / (nu - b);
  const ld denom = std::expm1(b * d);
  p.w1 = (Jb - J0) / denom;
  p.w0 = J0 - p.w1;
  const ld J1 = (1.0L - (1.0L + nu * d) * p.E) / (nu * nu);
  const ld J1b =
      (1.0L - (1.0L + (nu - b) * d) * std::exp((b - nu) * d)) /
      ((nu - b) * (nu - b));
  p.v1 = (J1b - J1) / denom;
  p.v0 = J1 - p.v1;
  return p;
}

// 1 - phi(s) ~ e^{bs}(C0' ...): after expanding g = phi(s)phi(s-h) to first
// order in the tail, g ~ 1 - e^{bs}(C1 s + C0).
struct TailConsts {
  ld b = 0.0L, C0 = 0.0L, C1 = 0.0L;
};

TailConsts tail_consts(const TailModel& right, ld h) {
  TailConsts c;
  c.b = right.rate;
  const ld eb = std::exp(-c.b * h);
  if (right.p == 1) {
    c.C0 = (ld)right.K2 * (1.0L + eb) - (ld)right.K * h * eb;
    c.C1 = (ld)right.K * (1.0L + eb);
  } else {
    c.C0 = (ld)right.K * (1.0L + eb);
    c.C1 = 0.0L;
  }
  return c;
}

// int_t^inf e^{nu(t-s)} g(s) ds with the tail-model g.
ld itail_exp(ld nu, ld t, const TailConsts& c) {
  const ld d = nu - c.b;
  return 1.0L / nu -
         std::exp(c.b * t) * (c.C0 / d + c.C1 * (t / d + 1.0L / (d * d)));
}

// int_t^inf (s - t) e^{2(t-s)} g(s) ds with the tail-model g.
ld itail_u(ld t, const TailConsts& c) {
  const ld d = 2.0L - c.b;
  return 0.25L - std::exp(c.b * t) *
                     (c.C0 / (d * d) +
                      c.C1 * (t / (d * d) + 2.0L / (d * d * d)));
}

ld left_value_ld(const TailModel& left, ld t) {
  if (left.rate == 0.0) return left.K;
  return (ld)left.K * std::exp((ld)left.rate * t);
}

ld model_y_ld(const TailModel& right, ld t) {
  const ld e = std::exp((ld)right.rate * t);
  return right.p == 1 ? e * ((ld)right.K * t + (ld)right.K2) : (ld)right.K * e;
}

std::vector<ld> build_g(const Grid& grid, const std::vector<ld>& v,
                        const TailModel& left, double h, std::size_t m) {
  std::vector<ld> g(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const ld vh = i >= m ? v[i - m]
                         : left_value_ld(left, (ld)grid.t(i) - (ld)h);
    g[i] = v[i] * vh;
  }
  return g;
}

// Raw operator application on the grid (clipped to [0,1], no projection).
std::vector<ld> apply_raw(const OperatorConfig& cfg, const Grid& grid,
                          const std::vector<ld>& v, const TailModel& left,
                          const TailModel& right) {
  const std::size_t N = v.size();
  const std::size_t m = delay_steps(cfg.h, grid.step);
  const ld d = grid.step;
  const ld b = cfg.mode_rate;
  const std::vector<ld> g = build_g(grid, v, left, cfg.h, m);
  const TailConsts tc = tail_consts(right, cfg.h);
  const ld tN = grid.t_max();
  std::vector<ld> res(N);
  if (cfg.kind == OperatorKind::A_OP) {
    const PanelW pl = panel_weights(cfg.lambda, d, b);
    const PanelW pm = panel_weights(cfg.mu, d, b);
    ld Il = itail_exp(cfg.lambda, tN, tc);
    ld Im = itail_exp(cfg.mu, tN, tc);
    const ld scale = 1.0L / ((ld)cfg.epsilon * ((ld)cfg.mu - (ld)cfg.lambda));
    res[N - 1] = clip01((Il - Im) * scale);
    for (std::size_t i = N - 1; i-- > 0;) {
      Il = pl.E * Il + pl.w0 * g[i] + pl.w1 * g[i + 1];
      Im = pm.E * Im + pm.w0 * g[i] + pm.w1 * g[i + 1];
      res[i] = clip01((Il - Im) * scale);
    }
  } else {
    const PanelW p = panel_weights(2.0L, d, b);
    ld I1 = itail_exp(2.0L, tN, tc);
    ld I2 = itail_u(tN, tc);
    res[N - 1] = clip01(4.0L * I2);
    for (std::size_t i = N - 1; i-- > 0;) {
      I2 = p.E * (I2 + d * I1) + p.v0 * g[i] + p.v1 * g[i + 1];
      I1 = p.E * I1 + p.w0 * g[i] + p.w1 * g[i + 1];
      res[i] = clip01(4.0L * I2);
    }
  }
  return res;
}

// Project the saturated right strip onto the (invariant) tail model and
// refit the left coefficient with the rate pinned to lambda.
void project(const OperatorConfig& cfg, const Grid& grid, std::vector<ld>& v,
             TailModel& left, const TailModel& right) {
  const std::size_t N = v.size();
  std::size_t i = N;
  while (i > 0 && 1.0L - v[i - 1] <= (ld)cfg.trust_cut) --i;
  for (std::size_t j = i; j < N; ++j)
    v[j] = clip01(1.0L - model_y_ld(right, grid.t(j)));
  if (cfg.lambda > 0.0) {
    ld sum = 0.0L;
    std::size_t count = 0;
    for (std::size_t j = 0; j < N; ++j) {
      if (v[j] > 1e-10L && v[j] < 1e-4L) {
        sum += v[j] * std::exp(-(ld)cfg.lambda * (ld)grid.t(j));
        ++count;
      }
    }
    if (count >= 10) {
      left.rate = cfg.lambda;
      left.K = static_cast<double>(sum / (ld)count);
      std::size_t j0 = 0;
      while (j0 < N && v[j0] <= (ld)cfg.trust_cut) ++j0;
      for (std::size_t j = 0; j < j0; ++j)
        v[j] = clip01(left_value_ld(left, grid.t(j)));
    }
  }
}

std::vector<ld> to_ld(const std::vector<double>& v) {
  return std::vector<ld>(v.begin(), v.end());
}

Profile to_profile(const Grid& grid, const std::vector<ld>& v,
                   const TailModel& left, const TailModel& right) {
  Profile out;
  out.grid = grid;
  out.values.resize(v.size());
  std::transform(v.begin(), v.end(), out.values.begin(),
                 [](ld x) { return static_cast<double>(x); });
  out.left = left;
  out.right = right;
  return out;
}

}  // namespace

OperatorConfig OperatorConfig::make(const ModelParams& params,
                                    const RootData& roots, OperatorKind kind) {
  OperatorConfig cfg;
  cfg.kind = kind;
  cfg.epsilon = params.epsilon;
  cfg.h = params.h;
  cfg.lambda = roots.lambda;
  cfg.mu = roots.mu;
  cfg.mode_rate = roots.has_negative ? roots.lambda2 : -1.0;
  cfg.trust_cut = kind == OperatorKind::A_OP ? 1e-6 : 1e-10;
  return cfg;
}

Profile apply(const OperatorConfig& config, const Profile& phi) {
  std::vector<ld> v = to_ld(phi.values);
  std::vector<ld> out = apply_raw(config, phi.grid, v, phi.left, phi.right);
  TailModel left = phi.left;
  project(config, phi.grid, out, left, phi.right);
  return to_profile(phi.grid, out, left, phi.right);
}

std::pair<Profile, IterationReport> iterate(const OperatorConfig& config,
                                            const Profile& lower,
                                            const Profile* upper,
                                            double tol_iter,
                                            std::size_t max_iter) {
  if (upper && (upper->grid.n != lower.grid.n ||
                upper->grid.t0 != lower.grid.t0))
    throw std::invalid_argument("iterate: upper must share the lower grid");
  IterationReport rep;
  std::vector<ld> cur = to_ld(lower.values);
  TailModel left = lower.left;
  const TailModel right = lower.right;
  for (std::size_t j = 0; j < max_iter; ++j) {
    std::vector<ld> nxt = apply_raw(config, lower.grid, cur, left, right);
    project(config, lower.grid, nxt, left, right);
    const double viol_tol = j == 0 ? 1e-10 : 1e-12;
    ld worst = 0.0L, inc = 0.0L;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const ld dv = nxt[i] - cur[i];
      worst = std::min(worst, dv);
      inc = std::max(inc, dv < 0 ? -dv : dv);
      if (dv < -(ld)viol_tol) ++rep.monotonicity_violations;
      if (upper && nxt[i] > (ld)upper->values[i] + 1e-12L)
        ++rep.monotonicity_violations;
    }
    if (j == 0)
      for (std::size_t i = 0; i < cur.size(); ++i)
        nxt[i] = std::max(nxt[i], cur[i]);
    rep.worst_increment =
        std::min(rep.worst_increment, static_cast<double>(worst));
    rep.sup_increments.push_back(static_cast<double>(inc));
    cur.swap(nxt);
    ++rep.iterations;
    if (static_cast<double>(inc) <= tol_iter) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) {
    rep.stalled_at_one =
        std::all_of(cur.begin(), cur.end(),
                    [](ld x) { return x > 1.0L - 1e-13L; });
  }
  // Post-hoc audits: fixed-point residual from one further application, ODE
  // residual from centered differences.
  {
    std::vector<ld> nxt = apply_raw(config, lower.grid, cur, left, right);
    TailModel l2 = left;
    project(config, lower.grid, nxt, l2, right);
    ld fp = 0.0L;
    for (std::size_t i = 0; i < cur.size(); ++i)
      fp = std::max(fp, nxt[i] > cur[i] ? nxt[i] - cur[i] : cur[i] - nxt[i]);
    rep.final_residual_fp = static_cast<double>(fp);
  }
  Profile out = to_profile(lower.grid, cur, left, right);
  rep.final_residual_ode = ode_residual(out, config.epsilon, config.h);
  return {std::move(out), rep};
}

double ode_residual(const Profile& phi, double epsilon, double h) {
  const std::vector<double>& v = phi.values;
  const double d = phi.grid.step;
  const std::size_t N = v.size();
  const std::size_t m = delay_steps(h, d);
  if (N < 8) return 0.0;
  double worst = 0.0;
  for (std::size_t i = std::max<std::size_t>(2, m + 1); i + 4 <= N; ++i) {
    const double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (d * d);
    const double d1 = (v[i + 1] - v[i - 1]) / (2.0 * d);
    const double r = epsilon * d2 - d1 + v[i] * (1.0 - v[i - m]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::pair<double, double> fixed_point_residuals(const OperatorConfig& config,
                                                const Profile& phi) {
  std::vector<ld> v = to_ld(phi.values);
  std::vector<ld> nxt = apply_raw(config, phi.grid, v, phi.left, phi.right);
  ld fp = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i)
    fp = std::max(fp, nxt[i] > v[i] ? nxt[i] - v[i] : v[i] - nxt[i]);
  return {static_cast<double>(fp), ode_residual(phi, config.epsilon, config.h)};
}

double half_crossing(const Profile& phi) {
  const std::vector<double>& v = phi.values;
  auto it = std::lower_bound(v.begin(), v.end(), 0.5);
  if (it == v.begin() || it == v.end())
    throw std::runtime_error("NO_HALF_CROSSING: profile does not span 0.5");
  const std::size_t i = static_cast<std::size_t>(it - v.begin());
  return phi.grid.t(i - 1) +
         (0.5 - v[i - 1]) / (v[i] - v[i - 1]) * phi.grid.step;
}

namespace {

double interp4(const Profile& phi, double x) {
  const double d = phi.grid.step;
  const std::vector<double>& v = phi.values;
  auto i = static_cast<std::ptrdiff_t>(std::floor((x - phi.grid.t0) / d));
  i = std::min<std::ptrdiff_t>(
      std::max<std::ptrdiff_t>(i, 1),
      static_cast<std::ptrdiff_t>(v.size()) - 3);
  const double s = (x - phi.grid.t(static_cast<std::size_t>(i))) / d;
  const auto ui = static_cast<std::size_t>(i);
  return -s * (s - 1.0) * (s - 2.0) / 6.0 * v[ui - 1] +
         (s * s - 1.0) * (s - 2.0) / 2.0 * v[ui] -
         s * (s + 1.0) * (s - 2.0) / 2.0 * v[ui + 1] +
         s * (s * s - 1.0) / 6.0 * v[ui + 2];
}

}  // namespace

namespace detail {

PanelWeights make_panel_weights(double nu, double step, double mode_rate) {
  const PanelW p = panel_weights(nu, step, mode_rate);
  return {static_cast<double>(p.E), static_cast<double>(p.w0),
          static_cast<double>(p.w1), static_cast<double>(p.v0),
          static_cast<double>(p.v1)};
}

double tail_integral_exp(const TailModel& right, double h, double nu,
                         double t) {
  return static_cast<double>(itail_exp(nu, t, tail_consts(right, h)));
}

double tail_integral_u(const TailModel& right, double h, double t) {
  return static_cast<double>(itail_u(t, tail_consts(right, h)));
}

}  // namespace detail

double uniqueness_check(const OperatorConfig& /*config*/, const Profile& phiA,
                        const Profile& phiB) {
  const double ca = half_crossing(phiA);
  const double cb = half_crossing(phiB);
  const double margin = 2.0 * std::max(phiA.grid.step, phiB.grid.step);
  const double lo =
      std::max({-10.0, phiA.grid.t0 - ca + margin, phiB.grid.t0 - cb + margin});
  const double hi = std::min({10.0, phiA.grid.t_max() - ca - margin,
                              phiB.grid.t_max() - cb - margin});
  const int samples = 4000;
  double worst = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double x = lo + (hi - lo) * k / samples;
    worst = std::max(worst,
                     std::abs(interp4(phiA, x + ca) - interp4(phiB, x + cb)));
  }
  return worst;
}

}  // namespace wavefront
