#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfm/process.hpp"

namespace cfm {

/// Scale and conflict parameters of the idealized process.
/// deltas[j] is the maximum degree of the size-j conflicts (j in [2, ell]).
struct TrajectoryParams {
  double n = 0, k = 0, d = 0;
  std::size_t ell = 2;
  double gamma = 1.0;
  double mu = 0.5;
  double eps = 0.5;
  std::vector<double> deltas;

  /// Throws InputError on invalid parameters.
  void validate() const;
  double delta(std::size_t j) const { return j < deltas.size() ? deltas[j] : 0.0; }
  /// Horizon (1 - mu) n / k of the error functions.
  double horizon() const { return (1.0 - mu) * n / k; }
};

using JS = std::pair<std::size_t, std::size_t>;

struct TrajectoryPoint {
  double x = 0;
  double p_v = 0, p_m = 0;
  double gamma_hat = 0, d_hat = 0, h_hat = 0, c_hat = 0;
  std::map<JS, double> z_hat;  // (j, s) for j in [1, ell], s in [0, j]

  /// Error functions; present only for x in [0, horizon].
  bool has_errors = false;
  double log_xi = 0;  // natural log of the true xi
  /// The following are scaled by exp(-scale_log), where scale_log is the
  /// value passed to eval (0 means true values, which may overflow to inf).
  double xi = 0, delta_err = 0, eta = 0, gamma_err = 0;
  std::map<JS, double> zeta;
};

/// Evaluates trajectories on [0, n/k] and error functions on [0, horizon].
/// Throws InputError outside [0, n/k].
TrajectoryPoint eval(const TrajectoryParams& p, double x, double scale_log = 0.0);

struct Residual {
  std::string name;
  double value = 0;  // relative residual
};

/// For each derivative identity: the agreement of its alternative analytic
/// forms, and a fourth-order central difference against the analytic form.
/// Relative residuals use the sum of the magnitudes of the analytic terms as
/// the scale.
std::vector<Residual> derivative_residuals(const TrajectoryParams& p, double x);

/// Central-difference step used by derivative_residuals.
double difference_step(const TrajectoryParams& p);

struct BandVerdict {
  std::size_t step = 0;
  double measured = 0, predicted = 0;
  bool in_domain = false;         // step within [0, horizon]
  bool theory_vacuous = false;     // theoretical error >= prediction
  bool in_theory_band = false;
  bool in_empirical_band = false;
  double relative_error = 0;
};

struct BandReport {
  std::vector<BandVerdict> alive;  // |H(i)| against h_hat
  std::vector<BandVerdict> uncovered_degree_min, uncovered_degree_max;  // against d_hat
  std::vector<BandVerdict> semiconflicts_min, semiconflicts_max;        // against c_hat
};

/// Compares alive-edge counts (and recorded degree statistics, when present)
/// against the trajectories. Paper bands and empirical bands are reported
/// separately.
BandReport tracking_bands(const TrajectoryParams& p, const std::vector<TraceRecord>& trace, std::size_t total_edges,
                          double empirical_tolerance = 0.1);

/// Verdicts for a caller-supplied sequence of |H(i)|, i = 0, 1, ...
std::vector<BandVerdict> alive_bands(const TrajectoryParams& p, const std::vector<double>& alive_sizes,
                                     double empirical_tolerance);

/// Natural log of the lower bound on the number of conflict-free matchings
/// of size `length`. Throws DomainError on a nonpositive prefactor.
double counting_lower_bound(double d, double k, std::size_t ell, const std::vector<double>& deltas, double length,
                            double eps);

/// Freedman tail bound exp(-t^2 / (2a(t+b))) clamped to 1.
double freedman_tail(double a, double b, double t);

}  // namespace cfm
