#pragma once

#include <cstdint>

namespace hrs {

// Standard normal CDF. Absolute error below 1e-14.
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0, 1). Throws std::domain_error outside the
// open interval; callers that need saturation handle 0/1 before calling.
double std_normal_quantile(double q);

// ln C(n, k); returns -infinity for k > n.
double log_binomial(std::uint64_t n, std::uint64_t k);

// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);

// One-sided exact binomial confidence bounds. The lower bound is the largest
// p with Pr[Bin(n, p) >= k] <= alpha (0 for k = 0); the upper bound is the
// smallest p with Pr[Bin(n, p) <= k] <= alpha (1 for k = n). Bisection on the
// regularized incomplete beta; the returned value is rounded toward the
// conservative side of the final bracket.
double clopper_pearson_lower(std::uint64_t k, std::uint64_t n, double alpha);
double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double alpha);

// Failure budget split across simultaneous confidence bounds (Bonferroni).
struct ConfidenceSpec {
  double alpha = 0.01;  // in (0, 1)
  int n_bounds = 1;     // >= 1

  double per_bound_alpha() const;
};

}  // namespace hrs
