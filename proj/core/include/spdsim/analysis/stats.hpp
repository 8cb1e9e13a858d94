#pragma once

// Replication statistics: sample summaries with Student-t confidence
// intervals, and Pearson correlation with a two-sided p-value.

#include <vector>

namespace spdsim::analysis {

struct Summary {
  int n = 0;
  double mean = 0;
  double stddev = 0;         // sample deviation, n - 1
  double ci_halfwidth = 0;   // at the given confidence level
  double confidence = 0.95;
  bool ci_defined = false;   // needs n >= 2
};

Summary summarize(const std::vector<double>& values, double confidence = 0.95);

// Student-t distribution with dof degrees of freedom.
double studentTCdf(double t, double dof);
double studentTQuantile(double p, double dof);

// Regularized incomplete beta function I_x(a, b).
double incompleteBeta(double a, double b, double x);

struct Correlation {
  int n = 0;
  double r = 0;
  double p_value = 1;  // two-sided, t approximation; needs n >= 3
  bool defined = false;
};

Correlation pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace spdsim::analysis
