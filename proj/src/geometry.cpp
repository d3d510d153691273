#include "pdef/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace pdef {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Objective the intruder maximizes over the reachable arc. Its stationary
// points are exactly the solutions of the two governing equations.
double race_margin(const RelativeConfig& cfg, SpeedRatio nu, double theta) {
  return nu.nu * defender_target_time(cfg.phi, theta) - intruder_target_time(cfg.r, cfg.psi - theta);
}

// theta - G(theta), where G chains the beta equation into the theta equation.
double fixed_point_gap(const RelativeConfig& cfg, SpeedRatio nu, double theta) {
  return theta - breaching_angle(cfg, approach_angle(cfg.phi, theta, nu));
}

BreachingSolution finish(const RelativeConfig& cfg, SpeedRatio nu, double theta, int iterations,
                         double tol) {
  BreachingSolution s;
  s.theta_star = theta;
  s.beta_star = approach_angle(cfg.phi, theta, nu);
  s.tau_d = defender_target_time(cfg.phi, theta);
  s.tau_a = intruder_target_time(cfg.r, cfg.psi - theta);
  s.payoff = s.tau_d - s.tau_a;
  s.iterations = iterations;
  const auto res = breaching_residuals(cfg, nu, s.theta_star, s.beta_star);
  s.converged = std::abs(res.beta) <= tol && std::abs(res.theta) <= tol;
  return s;
}

bool is_local_max(const RelativeConfig& cfg, SpeedRatio nu, double theta) {
  const double w = reachable_half_width(cfg.r);
  const double lo = cfg.psi - w;
  const double hi = cfg.psi + w;
  const double h = 1e-4;
  const double f0 = race_margin(cfg, nu, theta);
  const double slack = 1e-13;
  if (theta - h >= lo && race_margin(cfg, nu, theta - h) > f0 + slack) return false;
  if (theta + h <= hi && race_margin(cfg, nu, theta + h) > f0 + slack) return false;
  return true;
}

// Coarse scan of the reachable arc, Brent maximization inside the best cell,
// then a bracketed root solve of the fixed-point gap for full precision.
double bracketed_refine(const RelativeConfig& cfg, SpeedRatio nu, double tol) {
  const double w = reachable_half_width(cfg.r);
  const double lo = cfg.psi - w;
  const double hi = cfg.psi + w;
  if (w <= 0.0) return cfg.psi;

  constexpr int kScan = 512;
  const double cell = (hi - lo) / kScan;
  int best = 0;
  double best_val = race_margin(cfg, nu, lo);
  for (int i = 1; i <= kScan; ++i) {
    const double v = race_margin(cfg, nu, lo + i * cell);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = std::max(lo, lo + (best - 1) * cell);
  const double b = std::min(hi, lo + (best + 1) * cell);
  auto neg = [&](double t) { return -race_margin(cfg, nu, t); };
  std::uintmax_t it = 200;
  double theta = boost::math::tools::brent_find_minima(neg, a, b, 52, it).first;

  if (std::abs(fixed_point_gap(cfg, nu, theta)) <= tol) return theta;
  for (double endpoint : {lo, hi}) {
    if (std::abs(theta - endpoint) < cell && std::abs(fixed_point_gap(cfg, nu, endpoint)) <= tol) {
      return endpoint;
    }
  }

  auto gap = [&](double t) { return fixed_point_gap(cfg, nu, t); };
  for (double span = 1e-7; span <= 2.0 * cell; span *= 4.0) {
    const double l = std::max(lo, theta - span);
    const double r = std::min(hi, theta + span);
    const double gl = gap(l);
    const double gr = gap(r);
    if (gl == 0.0) return l;
    if (gr == 0.0) return r;
    if ((gl < 0.0) != (gr < 0.0)) {
      std::uintmax_t root_it = 200;
      auto tol_fn = [](double x, double y) { return std::abs(x - y) <= 1e-15; };
      const auto [x0, x1] = boost::math::tools::toms748_solve(gap, l, r, gl, gr, tol_fn, root_it);
      return std::abs(gap(x0)) <= std::abs(gap(x1)) ? x0 : x1;
    }
  }
  return theta;
}

}  // namespace

double wrap_angle(double a) {
  const double two_pi = 2.0 * kPi;
  return a - two_pi * std::ceil((a - kPi) / two_pi);
}

Eigen::Vector3d to_cartesian(const SphericalPos& p) {
  const double c = std::cos(p.phi);
  return {p.r * c * std::cos(p.psi), p.r * c * std::sin(p.psi), p.r * std::sin(p.phi)};
}

SphericalPos from_cartesian(const Eigen::Vector3d& x) {
  SphericalPos p;
  p.r = x.norm();
  p.psi = wrap_angle(std::atan2(x.y(), x.x()));
  p.phi = p.r > 0.0 ? std::asin(clamp_unit(x.z() / p.r)) : 0.0;
  return p;
}

RelativeConfig relative_config(const SphericalPos& d, const SphericalPos& a) {
  return {wrap_angle(a.psi - d.psi), d.phi, a.r};
}

double defender_target_time(double phi, double delta_psi) {
  return std::acos(clamp_unit(std::cos(phi) * std::cos(delta_psi)));
}

double intruder_target_time(double r, double delta_psi) {
  return std::sqrt(std::max(0.0, r * r + 1.0 - 2.0 * r * std::cos(delta_psi)));
}

double reachable_half_width(double r) { return r <= 1.0 ? 0.0 : std::acos(1.0 / r); }

double approach_angle(double phi, double theta, SpeedRatio nu) {
  const double cphi = std::cos(phi);
  const double ct = cphi * std::cos(theta);
  const double den = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  if (den == 0.0) return kPi / 2.0;
  return std::acos(clamp_unit(nu.nu * cphi * std::sin(theta) / den));
}

double breaching_angle(const RelativeConfig& cfg, double beta) {
  return cfg.psi - beta + std::acos(clamp_unit(std::cos(beta) / cfg.r));
}

BreachingResiduals breaching_residuals(const RelativeConfig& cfg, SpeedRatio nu, double theta,
                                       double beta) {
  return {beta - approach_angle(cfg.phi, theta, nu), theta - breaching_angle(cfg, beta)};
}

double payoff_at(const RelativeConfig& cfg, double theta) {
  return defender_target_time(cfg.phi, theta) - intruder_target_time(cfg.r, cfg.psi - theta);
}

BreachingSolution solve_breaching(const RelativeConfig& cfg, SpeedRatio nu, const SolverOptions& opts) {
  double theta = cfg.psi;
  int k = 0;
  bool settled = false;
  for (; k < opts.max_iter; ++k) {
    const double next = breaching_angle(cfg, approach_angle(cfg.phi, theta, nu));
    if (std::abs(theta - next) <= opts.tol) {
      settled = true;
      break;
    }
    theta = 0.5 * theta + 0.5 * next;
  }

  if (settled && is_local_max(cfg, nu, theta)) {
    auto s = finish(cfg, nu, theta, k + 1, opts.tol);
    if (s.converged || !opts.allow_fallback) return s;
  }
  if (!opts.allow_fallback) return finish(cfg, nu, theta, k, opts.tol);

  auto s = finish(cfg, nu, bracketed_refine(cfg, nu, opts.tol), k, opts.tol);
  s.used_fallback = true;
  return s;
}

double payoff(const RelativeConfig& cfg, SpeedRatio nu) {
  const auto s = solve_breaching(cfg, nu);
  if (!s.converged) throw NonConvergence("optimal breaching point did not converge");
  return s.payoff;
}

}  // namespace pdef
