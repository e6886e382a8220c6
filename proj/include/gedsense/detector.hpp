#pragma once

#include <cstddef>
#include <string_view>

#include "gedsense/spectral.hpp"

namespace gedsense {

/// Energy-ratio statistic R_k of one sensing window.
struct GedStatistic {
  double value = 0.0;
  std::size_t n_target = 0;
  double beta = 0.0;
};

/// Gaussian model of R_k under H1: N(mean, std^2).
struct H1Theory {
  double snr = 0.0;   // gamma_k, linear
  double mean = 0.0;  // mu_k
  double std = 1.0;   // 1 + gamma_k

  /// GED with a white band of relative width beta.
  static H1Theory ged(double snr, std::size_t n_target, double beta);
  /// Known-noise limit (beta -> infinity).
  static H1Theory ced_limit(double snr, std::size_t n_target);
};

enum class Label { white, non_white };

std::string_view to_string(Label label);

struct Decision {
  Label label = Label::non_white;
  GedStatistic statistic;
  double threshold = 0.0;
};

/// sqrt(N_dk beta / (beta + 1)): the scale that makes R_k unit-variance under H0.
double ged_scale(std::size_t n_target, double beta);

/// R_k = sqrt(N_dk beta/(beta+1)) (M_dk/M_z - 1). Invariant to scaling of the samples.
/// Throws DegenerateInputError when M_z <= 0.
GedStatistic ged_statistic(const SubbandEnergies& e, const SubbandPlan& plan);

/// Classic energy detector with known noise variance: sqrt(N_dk) (M_dk/sigma^2 - 1).
double ced_statistic(const SubbandEnergies& e, double noise_variance, const SubbandPlan& plan);

/// False-alarm probability for threshold lambda. R_k ~ N(0,1) under H0 regardless of the plan.
double pf_theory(double threshold);

/// Detection probability for threshold lambda under the given H1 model.
double pd_theory(double threshold, const H1Theory& h1);

/// Threshold achieving the requested false-alarm probability.
double threshold_for_pf(double target_pf);

/// Relative detection loss of the GED against the known-noise detector at the
/// threshold that yields `target_pf` for both: 1 - Pd_ged / Pd_ced.
double detection_loss_eta(double target_pf, double snr, std::size_t n_target, double beta);

/// White iff statistic < threshold; ties go to non_white.
Decision decide(const GedStatistic& stat, double threshold);

}  // namespace gedsense
