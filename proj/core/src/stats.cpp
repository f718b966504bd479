#include "hrs/stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hrs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Rational initial estimate for the normal quantile (Acklam), refined below.
double quantile_estimate(double q) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double q_low = 0.02425;

  if (q < q_low) {
    const double u = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
           ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  if (q > 1.0 - q_low) {
    const double u = std::sqrt(-2.0 * std::log(1.0 - q));
    return -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
           ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  const double u = q - 0.5;
  const double t = u * u;
  return (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * u /
         (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
}

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_cont_frac(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr int max_iter = 500;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 3e-16) return h;
  }
  return h;
}

}  // namespace

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("normal quantile requires q in (0, 1)");
  }
  double x = quantile_estimate(q);
  // Two Halley refinements against the high-accuracy CDF.
  for (int i = 0; i < 2; ++i) {
    const double err = std_normal_cdf(x) - q;
    const double pdf = std_normal_pdf(x);
    if (pdf <= 0.0) break;
    const double u = err / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -kInf;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double reg_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) {
    throw std::domain_error("incomplete beta requires positive shape parameters");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cont_frac(a, b, x) / a;
  }
  return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

namespace {

void check_cp_args(std::uint64_t k, std::uint64_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("confidence bound requires n >= 1");
  if (k > n) throw std::invalid_argument("successes cannot exceed trials");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must be in (0, 1)");
  }
}

constexpr int kBisectIters = 200;
constexpr double kBisectTol = 1e-13;

}  // namespace

double clopper_pearson_lower(std::uint64_t k, std::uint64_t n, double alpha) {
  check_cp_args(k, n, alpha);
  if (k == 0) return 0.0;
  // Pr[Bin(n, p) >= k] = I_p(k, n - k + 1), increasing in p.
  const double a = static_cast<double>(k);
  const double b = static_cast<double>(n - k) + 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kBisectIters && hi - lo > kBisectTol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (reg_incomplete_beta(a, b, mid) <= alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double alpha) {
  check_cp_args(k, n, alpha);
  if (k == n) return 1.0;
  // Pr[Bin(n, p) <= k] = 1 - I_p(k + 1, n - k), decreasing in p.
  const double a = static_cast<double>(k) + 1.0;
  const double b = static_cast<double>(n - k);
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kBisectIters && hi - lo > kBisectTol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - reg_incomplete_beta(a, b, mid) <= alpha) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double ConfidenceSpec::per_bound_alpha() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must be in (0, 1)");
  }
  if (n_bounds < 1) {
    throw std::invalid_argument("n_bounds must be at least 1");
  }
  return alpha / static_cast<double>(n_bounds);
}

}  // namespace hrs
