#pragma once

#include <functional>

namespace gedsense {

/// Stopping rule for scalar iterative searches.
struct Tolerance {
  double abs_tol = 1e-6;
  int max_iter = 200;

  /// Throws DomainError unless abs_tol > 0 and max_iter >= 1.
  void validate() const;
};

// Error function family. All throw DomainError on non-finite input.
double erf(double x);
double erfc(double x);

/// Inverse of erfc on (0, 2). Throws DomainError outside the open interval.
double erfc_inv(double y);

struct UnimodalMaximum {
  double argmax = 0.0;
  double max = 0.0;
  int iterations = 0;
};

/// Golden-section search for the maximizer of a unimodal function on [lo, hi].
///
/// Stops once the bracket is narrower than `tol.abs_tol`; the returned point
/// lies inside that final bracket. Throws ConvergenceError (carrying the best
/// point seen) if `tol.max_iter` is exhausted first.
UnimodalMaximum maximize_unimodal(const std::function<double(double)>& f, double lo, double hi,
                                  const Tolerance& tol = {});

}  // namespace gedsense
