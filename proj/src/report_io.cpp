#include "gedsense/report_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace gedsense {

namespace {

nlohmann::ordered_json report_object(const MonteCarloReport& r) {
  nlohmann::ordered_json j;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["threshold"] = r.threshold;
  j["false_alarms"] = r.false_alarms;
  j["detections"] = r.detections;
  j["empirical_pf"] = r.empirical_pf;
  j["pf_stderr"] = r.pf_stderr;
  j["empirical_pd"] = r.empirical_pd;
  j["pd_stderr"] = r.pd_stderr;
  j["theory_pf"] = r.theory_pf;
  j["theory_pd"] = r.theory_pd;
  j["ced_false_alarms"] = r.ced_false_alarms;
  j["ced_empirical_pf"] = r.ced_empirical_pf;
  j["ced_pf_stderr"] = r.ced_pf_stderr;
  return j;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool within_three_sigma(double empirical, double theory, std::size_t trials) {
  return std::abs(empirical - theory) <= 3.0 * binomial_stderr(theory, trials);
}

std::string to_json(const MonteCarloReport& report) { return report_object(report).dump(2); }

std::string to_json(std::span<const MonteCarloReport> reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_object(r));
  return arr.dump(2);
}

std::string to_json(const OptimizationResult& result) {
  nlohmann::ordered_json j;
  j["mode"] = result.mode == DetectorMode::ced ? "ced" : "ged";
  j["optimal_sensing_time_s"] = result.optimal_sensing_time;
  j["optimal_threshold"] = result.optimal_threshold;
  j["max_normalized_throughput_bps_per_hz"] = result.max_throughput;
  j["iterations"] = result.iterations;
  return j.dump(2);
}

void write_roc_csv(std::ostream& os, std::span<const MonteCarloReport> reports) {
  os << "threshold_dimensionless,theory_pf_prob,theory_pd_prob,empirical_pf_prob,pf_stderr_prob,"
        "empirical_pd_prob,pd_stderr_prob,pf_within_3sigma_bool,pd_within_3sigma_bool,"
        "ced_empirical_pf_prob,ced_pf_stderr_prob,trials_count,seed\n";
  for (const auto& r : reports) {
    os << format_number(r.threshold) << ',' << format_number(r.theory_pf) << ',' << format_number(r.theory_pd)
       << ',' << format_number(r.empirical_pf) << ',' << format_number(r.pf_stderr) << ','
       << format_number(r.empirical_pd) << ',' << format_number(r.pd_stderr) << ','
       << (within_three_sigma(r.empirical_pf, r.theory_pf, r.trials) ? "true" : "false") << ','
       << (within_three_sigma(r.empirical_pd, r.theory_pd, r.trials) ? "true" : "false") << ','
       << format_number(r.ced_empirical_pf) << ',' << format_number(r.ced_pf_stderr) << ',' << r.trials << ','
       << r.seed << '\n';
  }
}

}  // namespace gedsense
