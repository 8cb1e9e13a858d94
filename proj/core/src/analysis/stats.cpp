#include "spdsim/analysis/stats.hpp"

#include <cmath>

namespace spdsim::analysis {
namespace {

// Continued fraction for the incomplete beta function, modified Lentz.
double betaContinuedFraction(double a, double b, double x) {
  const int max_iterations = 300;
  const double eps = 3e-14;
  const double tiny = 1e-300;

  double qab = a + b;
  double qap = a + 1;
  double qam = a - 1;
  double c = 1;
  double d = 1 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= max_iterations; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1) < eps) break;
  }
  return h;
}

}  // namespace

double incompleteBeta(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                     a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * betaContinuedFraction(a, b, x) / a;
  return 1 - front * betaContinuedFraction(b, a, 1 - x) / b;
}

double studentTCdf(double t, double dof) {
  if (t == 0) return 0.5;
  double tail = 0.5 * incompleteBeta(dof / 2, 0.5, dof / (dof + t * t));
  return t > 0 ? 1 - tail : tail;
}

double studentTQuantile(double p, double dof) {
  if (p == 0.5) return 0;
  if (p < 0.5) return -studentTQuantile(1 - p, dof);
  double lo = 0;
  double hi = 1;
  while (studentTCdf(hi, dof) < p && hi < 1e10) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (studentTCdf(mid, dof) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

Summary summarize(const std::vector<double>& values, double confidence) {
  Summary s;
  s.confidence = confidence;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / (s.n - 1));
  double t = studentTQuantile(0.5 + confidence / 2, s.n - 1);
  s.ci_halfwidth = t * s.stddev / std::sqrt(static_cast<double>(s.n));
  s.ci_defined = true;
  return s;
}

Correlation pearson(const std::vector<double>& x, const std::vector<double>& y) {
  Correlation c;
  if (x.size() != y.size()) return c;
  c.n = static_cast<int>(x.size());
  if (c.n < 2) return c;
  double mx = 0;
  double my = 0;
  for (int i = 0; i < c.n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= c.n;
  my /= c.n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (int i = 0; i < c.n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return c;
  c.r = sxy / std::sqrt(sxx * syy);
  if (c.n < 3) return c;
  double r2 = c.r * c.r;
  if (r2 >= 1) {
    c.p_value = 0;
  } else {
    double t = c.r * std::sqrt((c.n - 2) / (1 - r2));
    c.p_value = 2 * (1 - studentTCdf(std::fabs(t), c.n - 2));
  }
  c.defined = true;
  return c;
}

}  // namespace spdsim::analysis
