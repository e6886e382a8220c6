#include "gedsense/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gedsense/errors.hpp"

namespace gedsense {

namespace {

void require_finite(double x, const char* op) {
  if (!std::isfinite(x)) {
    std::ostringstream msg;
    msg << op << ": argument must be finite, got " << x;
    throw DomainError(msg.str());
  }
}

// Acklam's rational approximation of the standard normal quantile for p in (0, 0.5].
// Relative error below 1.2e-9; used only to seed Newton refinement.
double normal_quantile_lower(double p) {
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// erfc_inv for y in (0, 1]; the result is >= 0.
double erfc_inv_upper(double y) {
  if (y == 1.0) return 0.0;
  // erfc(x) = 2 Q(x sqrt 2), so erfc_inv(y) = -Phi^-1(y/2) / sqrt 2.
  double x = -normal_quantile_lower(0.5 * y) / std::numbers::sqrt2;
  constexpr double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;
  for (int i = 0; i < 4; ++i) {
    const double slope = -two_over_sqrt_pi * std::exp(-x * x);
    if (slope == 0.0) break;  // deep tail: seed is already at 1e-9 relative
    const double step = (std::erfc(x) - y) / slope;
    // Halley correction; erfc'' = -2x erfc'.
    const double corrected = step / (1.0 + x * step);
    x -= corrected;
    if (std::abs(corrected) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
    throw DomainError("Tolerance: abs_tol must be positive and finite");
  }
  if (max_iter < 1) throw DomainError("Tolerance: max_iter must be >= 1");
}

double erf(double x) {
  require_finite(x, "erf");
  return std::erf(x);
}

double erfc(double x) {
  require_finite(x, "erfc");
  return std::erfc(x);
}

double erfc_inv(double y) {
  if (!(y > 0.0 && y < 2.0)) {
    std::ostringstream msg;
    msg << "erfc_inv: argument must lie in (0, 2), got " << y;
    throw DomainError(msg.str());
  }
  if (y <= 1.0) return erfc_inv_upper(y);
  return -erfc_inv_upper(2.0 - y);
}

UnimodalMaximum maximize_unimodal(const std::function<double(double)>& f, double lo, double hi,
                                  const Tolerance& tol) {
  tol.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("maximize_unimodal: need finite lo < hi");
  }

  constexpr double inv_phi = 0.6180339887498949;  // (sqrt 5 - 1) / 2
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);

  int iter = 0;
  while (b - a > tol.abs_tol) {
    if (iter == tol.max_iter) {
      const bool left = fc >= fd;
      throw ConvergenceError("maximize_unimodal: max_iter exhausted before bracket shrank below abs_tol",
                             left ? c : d, left ? fc : fd, iter);
    }
    ++iter;
    if (fc >= fd) {
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

  if (fc >= fd) return {c, fc, iter};
  return {d, fd, iter};
}

}  // namespace gedsense
