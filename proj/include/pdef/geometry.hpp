#pragma once

// Hemisphere perimeter geometry: coordinate transforms, target times and the
// one-on-one optimal breaching point.
//
// All lengths at this boundary are normalized by the perimeter radius R, so a
// defender sits on the unit hemisphere and a live intruder has r >= 1. Angles
// are radians; azimuths are wrapped to (-pi, pi], counterclockwise seen from +z.

#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

namespace pdef {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct SphericalPos {
  double psi = 0.0;  ///< azimuth
  double phi = 0.0;  ///< elevation, 0 for intruders
  double r = 1.0;    ///< radial distance, 1 for defenders
};

/// Defender-intruder relative configuration z = [psi, phi, r].
struct RelativeConfig {
  double psi = 0.0;  ///< wrap(psi_A - psi_D)
  double phi = 0.0;  ///< defender elevation
  double r = 1.0;    ///< intruder radius
};

struct SpeedRatio {
  double nu = 1.0;
};

struct BreachingSolution {
  double theta_star = 0.0;  ///< breaching azimuth relative to the defender (not wrapped)
  double beta_star = 0.0;   ///< approach angle in [0, pi]
  double tau_d = 0.0;
  double tau_a = 0.0;
  double payoff = 0.0;  ///< tau_d - tau_a
  bool converged = false;
  bool used_fallback = false;
  int iterations = 0;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 200;
  /// Bracketed refinement when the fixed point stalls or lands on a
  /// non-maximal stationary point.
  bool allow_fallback = true;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Eigen::Vector3d to_cartesian(const SphericalPos& p);
SphericalPos from_cartesian(const Eigen::Vector3d& x);

RelativeConfig relative_config(const SphericalPos& d, const SphericalPos& a);

/// Great-circle angle from a defender at elevation phi to a rim point whose
/// azimuth differs by delta_psi.
double defender_target_time(double phi, double delta_psi);

/// Ground distance from an intruder at radius r to a rim point whose azimuth
/// differs by delta_psi.
double intruder_target_time(double r, double delta_psi);

/// Half-width of the rim arc reachable by a straight ground path: arccos(1/r).
double reachable_half_width(double r);

/// Approach angle implied by the defender side of the equilibrium for a
/// candidate breaching angle theta. The 0/0 case (phi = 0, theta = 0) takes
/// the limiting value pi/2.
double approach_angle(double phi, double theta, SpeedRatio nu = {});

/// Breaching angle implied by the intruder side for a given approach angle.
double breaching_angle(const RelativeConfig& cfg, double beta);

/// Residuals of the two governing equations at (theta, beta).
struct BreachingResiduals {
  double beta = 0.0;
  double theta = 0.0;
};
BreachingResiduals breaching_residuals(const RelativeConfig& cfg, SpeedRatio nu, double theta,
                                       double beta);

/// Pair payoff for an arbitrary (not necessarily optimal) breaching angle.
double payoff_at(const RelativeConfig& cfg, double theta);

/// Solves the optimal breaching point. The returned solution is the global
/// maximizer of the payoff over the reachable arc; `converged` is false only
/// if neither the fixed point nor the fallback met `tol`.
BreachingSolution solve_breaching(const RelativeConfig& cfg, SpeedRatio nu = {},
                                  const SolverOptions& opts = {});

/// Payoff at the optimal breaching point. Throws NonConvergence.
double payoff(const RelativeConfig& cfg, SpeedRatio nu = {});

}  // namespace pdef
