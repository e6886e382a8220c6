#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gedsense/optimizer.hpp"
#include "gedsense/simulator.hpp"

namespace gedsense {

/// Every input of one experiment. Frequencies in Hz, times in seconds, powers in mW;
/// SNRs are dB in the JSON file and linear here.
struct ExperimentConfig {
  Scenario scenario;
  ThroughputConfig throughput;
  std::vector<double> target_pfs{0.01, 0.05, 0.1, 0.2, 0.4};
  std::optional<double> target_pf;  // fixed-Pf sensing instead of the optimized schedule
  std::vector<double> frame_sweep{0.1, 0.3, 0.6, 1.2, 2.0};
  int grid_points = 200;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string output_path;
  std::string output_format = "csv";

  /// Checks every module's preconditions. Throws ConfigError naming the field.
  void validate() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Parses the JSON document; missing entries keep the defaults above
/// (a 12 MHz band split 6/6 MHz, T_f = 2 s, -20 dB target SNR, 20 dB link SNR).
/// Unknown keys and wrongly typed values raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace gedsense
