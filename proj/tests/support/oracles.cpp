#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

using hawkes::EventSequence;
using hawkes::KernelKind;
using hawkes::KernelSpec;
using hawkes::ModelParams;

namespace oracle {

namespace {

// Direct basis evaluation, matching the library's contract that the
// gaussian bank is zero beyond six scales from the center.
double basis_eval(const KernelSpec& k, int m, double t) {
  if (t < 0.0) return 0.0;
  if (k.kind == KernelKind::exponential) {
    return k.zeta * std::exp(-k.zeta * t);
  }
  const double b = k.scale;
  const double d = t - k.centers[static_cast<std::size_t>(m)];
  if (std::abs(d) > 6.0 * b) return 0.0;
  return std::exp(-d * d / (2.0 * b * b)) / (2.0 * 3.14159265358979323846 * b * b);
}

// Untruncated version, the integrand the closed-form integrals claim to
// integrate.
double basis_eval_full(const KernelSpec& k, int m, double t) {
  if (t < 0.0) return 0.0;
  if (k.kind == KernelKind::exponential) {
    return k.zeta * std::exp(-k.zeta * t);
  }
  const double b = k.scale;
  const double d = t - k.centers[static_cast<std::size_t>(m)];
  return std::exp(-d * d / (2.0 * b * b)) / (2.0 * 3.14159265358979323846 * b * b);
}

double normal_cdf(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

// Integral of basis m over [0, upper] by a formula coded separately from
// the library (std::erf here, erfc there).
double basis_integral(const KernelSpec& k, int m, double upper) {
  if (upper <= 0.0) return 0.0;
  if (k.kind == KernelKind::exponential) {
    return 1.0 - std::exp(-k.zeta * upper);
  }
  const double b = k.scale;
  const double tau = k.centers[static_cast<std::size_t>(m)];
  const double mass = 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * b * b);
  return mass * (normal_cdf((upper - tau) / b) - normal_cdf(-tau / b));
}

double event_intensity(const ModelParams& p, const KernelSpec& k,
                       const EventSequence& seq, int i, double t,
                       std::size_t upto) {
  double lam = p.mu[static_cast<std::size_t>(i)];
  const int M = k.basis_count();
  for (std::size_t n = 0; n < upto; ++n) {
    const double dt = t - seq.events[n].time;
    if (dt <= 0.0) continue;
    for (int m = 0; m < M; ++m) {
      lam += p.w_at(i, seq.events[n].dim, m) * basis_eval(k, m, dt);
    }
  }
  return lam;
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 40);
}

double naive_log_likelihood(const ModelParams& p, const KernelSpec& k,
                            const EventSequence& seq) {
  const int M = k.basis_count();
  double ll = 0.0;
  for (std::size_t n = 0; n < seq.events.size(); ++n) {
    const double lam =
        event_intensity(p, k, seq, seq.events[n].dim, seq.events[n].time, n);
    if (!(lam > 0.0)) throw std::runtime_error("oracle hit nonpositive intensity");
    ll += std::log(lam);
  }
  double comp = 0.0;
  for (int i = 0; i < p.dims; ++i) comp += p.mu[static_cast<std::size_t>(i)];
  comp *= seq.horizon;
  for (const auto& ev : seq.events) {
    const double rem = seq.horizon - ev.time;
    for (int i = 0; i < p.dims; ++i) {
      for (int m = 0; m < M; ++m) {
        comp += p.w_at(i, ev.dim, m) * basis_integral(k, m, rem);
      }
    }
  }
  return ll - comp;
}

double quadrature_log_likelihood(const ModelParams& p, const KernelSpec& k,
                                 const EventSequence& seq, double segment_tol) {
  const int M = k.basis_count();
  double ll = 0.0;
  for (std::size_t n = 0; n < seq.events.size(); ++n) {
    const double lam =
        event_intensity(p, k, seq, seq.events[n].dim, seq.events[n].time, n);
    if (!(lam > 0.0)) throw std::runtime_error("oracle hit nonpositive intensity");
    ll += std::log(lam);
  }

  // Total intensity over all dimensions with the untruncated basis, so the
  // quadrature targets exactly what the closed-form integrals express.
  std::vector<double> colsum(static_cast<std::size_t>(p.dims) * M, 0.0);
  for (int j = 0; j < p.dims; ++j) {
    for (int m = 0; m < M; ++m) {
      double s = 0.0;
      for (int i = 0; i < p.dims; ++i) s += p.w_at(i, j, m);
      colsum[static_cast<std::size_t>(j) * M + m] = s;
    }
  }
  double mu_sum = 0.0;
  for (double v : p.mu) mu_sum += v;

  // Beyond this lag a source event's remaining contribution is under 1e-19
  // of a basis mass, far below the quadrature tolerance.
  const double support = k.kind == KernelKind::exponential
                             ? 45.0 / k.zeta
                             : k.centers.back() + 9.0 * k.scale;
  const std::size_t n_ev = seq.events.size();
  std::vector<double> times(n_ev);
  for (std::size_t n = 0; n < n_ev; ++n) times[n] = seq.events[n].time;

  std::size_t win_lo = 0, win_hi = 0;
  auto window_intensity = [&](double t) {
    double lam = mu_sum;
    for (std::size_t n = win_lo; n < win_hi; ++n) {
      const double dt = t - times[n];
      if (dt <= 0.0) break;
      if (dt > support) continue;
      for (int m = 0; m < M; ++m) {
        lam += colsum[static_cast<std::size_t>(seq.events[n].dim) * M + m] *
               basis_eval_full(k, m, dt);
      }
    }
    return lam;
  };

  // Chunk boundaries at every event time and, for the gaussian bank, at every
  // bump center, so no peak sits strictly inside a quadrature chunk where the
  // initial coarse samples could miss it.
  std::vector<double> knots(times);
  if (k.kind != KernelKind::exponential) {
    for (double t : times) {
      for (int m = 0; m < M; ++m) {
        const double c = t + k.centers[static_cast<std::size_t>(m)];
        if (c < seq.horizon) knots.push_back(c);
      }
    }
  }
  knots.push_back(seq.horizon);
  std::sort(knots.begin(), knots.end());

  double comp = 0.0;
  double prev = 0.0;
  for (double knot : knots) {
    if (!(knot > prev)) continue;
    win_lo = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), prev - support) -
        times.begin());
    win_hi = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), knot) - times.begin());
    comp += adaptive_simpson(window_intensity, prev, knot, segment_tol);
    prev = knot;
  }
  return ll - comp;
}

double central_diff(const std::function<double(double)>& f, double x,
                    double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double rel_err(double got, double want, double floor_val) {
  const double denom =
      std::max(std::max(std::abs(got), std::abs(want)), floor_val);
  return std::abs(got - want) / denom;
}

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double ks_exp1(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 1.0 - std::exp(-samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    dist = std::max(dist, std::max(cdf - lo, hi - cdf));
  }
  return dist;
}

double median(std::vector<double> values) {
  if (values.empty())
    return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace oracle
