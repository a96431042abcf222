#include "cfm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cfm {

void TrajectoryParams::validate() const {
  if (!(n > 0 && k >= 1 && d > 0)) throw InputError("trajectory parameters need n > 0, k >= 1, d > 0");
  if (ell < 2) throw InputError("ell must be at least 2");
  if (!(mu > 0 && mu <= 1.0 / static_cast<double>(ell))) throw InputError("mu must lie in (0, 1/ell]");
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0,1)");
  if (!(gamma >= 1)) throw InputError("gamma must be at least 1");
  for (double v : deltas)
    if (!(v >= 0)) throw InputError("conflict degrees must be nonnegative");
}

namespace {

double ipow(double base, std::size_t e) {
  // 0^0 = 1 by convention.
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

double choose(std::size_t j, std::size_t s) { return s > j ? 0.0 : binom(static_cast<long long>(j), static_cast<long long>(s)); }

// 300 k^2 ell Gamma / (n p_V): the logarithmic derivative of xi.
double xi_rate(const TrajectoryParams& p, double pv) {
  return 300.0 * p.k * p.k * static_cast<double>(p.ell) * p.gamma / (p.n * pv);
}

double gamma_hat_prime(const TrajectoryParams& p, double pm) {
  double s = 0;
  for (std::size_t j = 2; j <= p.ell; ++j)
    s += p.delta(j) * static_cast<double>(j - 1) * ipow(pm, j - 2) * p.k / (p.d * p.n);
  return s;
}

}  // namespace

TrajectoryPoint eval(const TrajectoryParams& p, double x, double scale_log) {
  p.validate();
  if (!(x >= 0.0 && x <= p.n / p.k)) throw InputError("x outside [0, n/k]");
  TrajectoryPoint t;
  t.x = x;
  t.p_v = 1.0 - p.k * x / p.n;
  if (t.p_v < 0) t.p_v = 0;
  t.p_m = p.k * x / (p.d * p.n);
  for (std::size_t j = 2; j <= p.ell; ++j) t.gamma_hat += p.delta(j) * ipow(t.p_m, j - 1);
  const std::size_t kk = static_cast<std::size_t>(std::llround(p.k));
  t.d_hat = p.d * std::pow(t.p_v, p.k - 1.0) * std::exp(-t.gamma_hat);
  t.h_hat = p.n / p.k * t.p_v * t.d_hat;
  const double survive = ipow(t.p_v, kk) * std::exp(-t.gamma_hat);
  for (std::size_t j = 1; j <= p.ell; ++j)
    for (std::size_t s = 0; s <= j; ++s) t.z_hat[{j, s}] = choose(j, s) * ipow(survive, s) * ipow(t.p_m, j - s);
  for (std::size_t j = 1; j + 1 <= p.ell; ++j) t.c_hat += p.delta(j + 1) * t.z_hat[{j, 1}];

  if (x <= p.horizon()) {
    t.has_errors = true;
    const double exponent = 300.0 * p.k * static_cast<double>(p.ell) * p.gamma;
    t.log_xi = -exponent * std::log(t.p_v) - p.eps / 32.0 * std::log(p.d);
    t.xi = std::exp(t.log_xi - scale_log);
    t.delta_err = t.xi * t.d_hat;
    t.eta = t.xi * t.h_hat;
    const double base = p.gamma * static_cast<double>(p.ell);
    for (std::size_t j = 1; j <= p.ell; ++j)
      for (std::size_t s = 0; s <= j; ++s)
        t.zeta[{j, s}] = t.xi * (t.z_hat[{j, s}] + choose(j, s) * ipow(t.d_hat, s) / (base * ipow(p.d, j)));
    for (std::size_t j = 1; j + 1 <= p.ell; ++j) t.gamma_err += 2.0 * p.delta(j + 1) * t.zeta[{j, 1}];
  }
  return t;
}

double difference_step(const TrajectoryParams& p) { return std::max(1e-6 * p.n / p.k, 1e-3); }

std::vector<Residual> derivative_residuals(const TrajectoryParams& p, double x) {
  p.validate();
  const double h = difference_step(p);
  if (!(x - 2 * h >= 0 && x + 2 * h <= p.horizon())) throw DomainError("x not interior to the error domain");

  // All evaluations share one scale so the exponential factor cancels in ratios.
  const TrajectoryPoint c = eval(p, x);
  const double scale = c.log_xi;
  const TrajectoryPoint at = eval(p, x, scale);
  std::vector<TrajectoryPoint> nb;
  for (int off : {-2, -1, 1, 2}) nb.push_back(eval(p, x + off * h, scale));
  auto fd = [&](const std::function<double(const TrajectoryPoint&)>& f) {
    return (f(nb[0]) - 8.0 * f(nb[1]) + 8.0 * f(nb[2]) - f(nb[3])) / (12.0 * h);
  };
  auto rel = [](double a, double b, double s) { return s > 0 ? std::abs(a - b) / s : std::abs(a - b); };

  std::vector<Residual> out;
  const double pv = at.p_v;
  const double npv = p.n * pv;
  const double gp = gamma_hat_prime(p, at.p_m);
  const double rate = xi_rate(p, pv);

  // Gamma_hat' = c_hat / h_hat.
  {
    double alt = at.c_hat / at.h_hat;
    double s = std::max(std::abs(gp), std::abs(alt));
    out.push_back({"Gamma'=c/h", rel(gp, alt, s)});
    out.push_back({"Gamma' FD", rel(fd([](const TrajectoryPoint& t) { return t.gamma_hat; }), gp, s)});
  }
  // xi' = rate * xi.
  {
    double an = rate * at.xi;
    out.push_back({"xi' FD", rel(fd([](const TrajectoryPoint& t) { return t.xi; }), an, std::abs(an))});
  }
  // d_hat'.
  {
    double t1 = gp * at.d_hat, t2 = p.k * (p.k - 1) / npv * at.d_hat;
    double form1 = -(t1 + t2);
    double form2 = -((at.c_hat + (p.k - 1) * at.d_hat) / at.h_hat) * at.d_hat;
    double s = std::abs(t1) + std::abs(t2);
    out.push_back({"d' forms", rel(form1, form2, s)});
    out.push_back({"d' FD", rel(fd([](const TrajectoryPoint& t) { return t.d_hat; }), form1, s)});
  }
  // h_hat' = -(c_hat + k d_hat), and the product identity for h_hat.
  {
    double an = -(at.c_hat + p.k * at.d_hat);
    double s = std::abs(at.c_hat) + std::abs(p.k * at.d_hat);
    out.push_back({"h' FD", rel(fd([](const TrajectoryPoint& t) { return t.h_hat; }), an, s)});
  }
  // z_hat' and zeta'.
  for (std::size_t j = 1; j <= p.ell; ++j) {
    for (std::size_t s = 0; s <= j; ++s) {
      const double sd = static_cast<double>(s);
      const double z = at.z_hat.at({j, s});
      const double znext = s < j ? at.z_hat.at({j, s + 1}) : 0.0;
      const double t1 = (sd + 1) * znext / at.h_hat;
      const double t2 = sd * (gp + p.k * p.k / npv) * z;
      const double form1 = t1 - t2;
      const double form2 = t1 - sd * (at.c_hat + p.k * at.d_hat) / at.h_hat * z;
      const double scale_z = std::abs(t1) + std::abs(t2);
      std::string tag = "(" + std::to_string(j) + "," + std::to_string(s) + ")";
      out.push_back({"z'" + tag + " forms", rel(form1, form2, scale_z)});
      out.push_back({"z'" + tag + " FD",
                     rel(fd([&](const TrajectoryPoint& t) { return t.z_hat.at({j, s}); }), form1, scale_z)});

      const double zeta = at.zeta.at({j, s});
      const double u1 = (rate - sd * gp - p.k * p.k * sd / npv) * zeta;
      const double u2 = (sd + 1) * at.xi * znext / at.h_hat;
      const double u3 = sd * choose(j, s) * at.xi * ipow(at.d_hat, s + 1) /
                        (p.gamma * static_cast<double>(p.ell) * ipow(p.d, j) * at.h_hat);
      const double an = u1 + u2 + u3;
      const double scale_u = std::abs(rate * zeta) + std::abs(sd * gp * zeta) + std::abs(p.k * p.k * sd / npv * zeta) +
                             std::abs(u2) + std::abs(u3);
      out.push_back({"zeta'" + tag + " FD",
                     rel(fd([&](const TrajectoryPoint& t) { return t.zeta.at({j, s}); }), an, scale_u)});
    }
  }
  // delta'.
  {
    double t1 = rate * at.delta_err, t2 = gp * at.delta_err, t3 = p.k * (p.k - 1) / npv * at.delta_err;
    double an = t1 - t2 - t3;
    out.push_back({"delta' FD", rel(fd([](const TrajectoryPoint& t) { return t.delta_err; }), an,
                                    std::abs(t1) + std::abs(t2) + std::abs(t3))});
  }
  return out;
}

namespace {

BandVerdict verdict(std::size_t step, double measured, double predicted, double err, bool in_domain, double tol) {
  BandVerdict v;
  v.step = step;
  v.measured = measured;
  v.predicted = predicted;
  v.in_domain = in_domain;
  v.theory_vacuous = in_domain && err >= predicted;
  v.in_theory_band = in_domain && std::abs(measured - predicted) <= err;
  v.relative_error = predicted > 0 ? std::abs(measured - predicted) / predicted : (measured == 0 ? 0.0 : INFINITY);
  v.in_empirical_band = v.relative_error <= tol;
  return v;
}

}  // namespace

std::vector<BandVerdict> alive_bands(const TrajectoryParams& p, const std::vector<double>& alive_sizes,
                                     double empirical_tolerance) {
  std::vector<BandVerdict> out;
  for (std::size_t i = 0; i < alive_sizes.size(); ++i) {
    double x = static_cast<double>(i);
    if (x > p.n / p.k) break;
    auto t = eval(p, x);
    out.push_back(verdict(i, alive_sizes[i], t.h_hat, t.eta, t.has_errors, empirical_tolerance));
  }
  return out;
}

BandReport tracking_bands(const TrajectoryParams& p, const std::vector<TraceRecord>& trace, std::size_t total_edges,
                          double empirical_tolerance) {
  BandReport r;
  std::vector<double> sizes{static_cast<double>(total_edges)};
  for (const auto& rec : trace)
    sizes.push_back(static_cast<double>(rec.available_before - 1 - rec.removed_conflict - rec.removed_intersect));
  r.alive = alive_bands(p, sizes, empirical_tolerance);
  for (const auto& rec : trace) {
    double x = static_cast<double>(rec.step);
    if (x > p.n / p.k) break;
    auto t = eval(p, x);
    if (rec.min_uncovered_degree) {
      r.uncovered_degree_min.push_back(verdict(rec.step, static_cast<double>(*rec.min_uncovered_degree), t.d_hat,
                                               t.delta_err, t.has_errors, empirical_tolerance));
      r.uncovered_degree_max.push_back(verdict(rec.step, static_cast<double>(*rec.max_uncovered_degree), t.d_hat,
                                               t.delta_err, t.has_errors, empirical_tolerance));
    }
    if (rec.min_semiconflicts) {
      r.semiconflicts_min.push_back(verdict(rec.step, static_cast<double>(*rec.min_semiconflicts), t.c_hat,
                                            t.gamma_err, t.has_errors, empirical_tolerance));
      r.semiconflicts_max.push_back(verdict(rec.step, static_cast<double>(*rec.max_semiconflicts), t.c_hat,
                                            t.gamma_err, t.has_errors, empirical_tolerance));
    }
  }
  return r;
}

double counting_lower_bound(double d, double k, std::size_t ell, const std::vector<double>& deltas, double length,
                            double eps) {
  if (!(d > 0 && eps > 0 && eps < 1 && length >= 0)) throw DomainError("counting bound needs d > 0, eps in (0,1)");
  const double shrink = std::pow(d, -std::pow(eps, 4));
  if (!(shrink < 1.0)) throw DomainError("nonpositive prefactor (1 - d^(-eps^4)) d");
  double correction = 0;
  for (std::size_t j = 2; j <= ell && j < deltas.size(); ++j)
    correction += deltas[j] / (static_cast<double>(j) * std::pow(d, static_cast<double>(j) - 1.0));
  return length * (std::log(d) + std::log1p(-shrink) - (k - 1.0) - correction);
}

double freedman_tail(double a, double b, double t) {
  if (!(a > 0) || !(t > 0)) throw DomainError("Freedman bound needs a > 0 and t > 0");
  if (!(b >= 0)) throw DomainError("Freedman bound needs b >= 0");
  return std::min(1.0, std::exp(-t * t / (2.0 * a * (t + b))));
}

}  // namespace cfm
