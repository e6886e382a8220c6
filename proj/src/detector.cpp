#include "gedsense/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gedsense/errors.hpp"
#include "gedsense/numerics.hpp"

namespace gedsense {

namespace {

void require_probability(double p, const char* op) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << op << ": probability must lie in (0, 1), got " << p;
    throw DomainError(msg.str());
  }
}

void require_snr(double snr) {
  if (!(snr >= 0.0) || !std::isfinite(snr)) throw DomainError("SNR must be finite and >= 0");
}

}  // namespace

H1Theory H1Theory::ged(double snr, std::size_t n_target, double beta) {
  require_snr(snr);
  return {snr, ged_scale(n_target, beta) * snr, 1.0 + snr};
}

H1Theory H1Theory::ced_limit(double snr, std::size_t n_target) {
  require_snr(snr);
  return {snr, std::sqrt(static_cast<double>(n_target)) * snr, 1.0 + snr};
}

std::string_view to_string(Label label) {
  return label == Label::white ? "white" : "non_white";
}

double ged_scale(std::size_t n_target, double beta) {
  if (n_target == 0) throw DomainError("ged_scale: N_dk must be >= 1");
  if (!(beta > 0.0)) throw DomainError("ged_scale: beta must be positive");
  if (std::isinf(beta)) return std::sqrt(static_cast<double>(n_target));
  return std::sqrt(static_cast<double>(n_target) * beta / (beta + 1.0));
}

GedStatistic ged_statistic(const SubbandEnergies& e, const SubbandPlan& plan) {
  if (!(e.white_avg > 0.0)) throw DegenerateInputError("ged_statistic: white-band energy must be positive");
  const double ratio = e.target_avg / e.white_avg;
  return {ged_scale(plan.n_target, plan.beta) * (ratio - 1.0), plan.n_target, plan.beta};
}

double ced_statistic(const SubbandEnergies& e, double noise_variance, const SubbandPlan& plan) {
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw DomainError("ced_statistic: noise variance must be positive");
  }
  return std::sqrt(static_cast<double>(plan.n_target)) * (e.target_avg / noise_variance - 1.0);
}

double pf_theory(double threshold) {
  return 0.5 * erfc(threshold / std::numbers::sqrt2);
}

double pd_theory(double threshold, const H1Theory& h1) {
  if (!(h1.std > 0.0)) throw DomainError("pd_theory: H1 standard deviation must be positive");
  return 0.5 * erfc((threshold - h1.mean) / (std::numbers::sqrt2 * h1.std));
}

double threshold_for_pf(double target_pf) {
  require_probability(target_pf, "threshold_for_pf");
  return std::numbers::sqrt2 * erfc_inv(2.0 * target_pf);
}

double detection_loss_eta(double target_pf, double snr, std::size_t n_target, double beta) {
  const double lambda = threshold_for_pf(target_pf);
  const double pd_ged = pd_theory(lambda, H1Theory::ged(snr, n_target, beta));
  const double pd_ced = pd_theory(lambda, H1Theory::ced_limit(snr, n_target));
  // pd_ged <= pd_ced analytically; clamp rounding below zero.
  return std::max(0.0, 1.0 - pd_ged / pd_ced);
}

Decision decide(const GedStatistic& stat, double threshold) {
  return {stat.value < threshold ? Label::white : Label::non_white, stat, threshold};
}

}  // namespace gedsense
