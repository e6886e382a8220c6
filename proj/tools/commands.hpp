#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gedsense::cli {

// Process exit codes. `sense` additionally returns kNonWhite for an occupied band.
inline constexpr int kOk = 0;
inline constexpr int kNonWhite = 1;
inline constexpr int kInvalidConfig = 2;
inline constexpr int kMalformedFile = 3;
inline constexpr int kRuntimeFailure = 4;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> jobs;
  std::string output_path;
  std::string format;
  bool ced = false;
};

int cmd_optimize(const CommonOptions& opt);
int cmd_roc(const CommonOptions& opt);
int cmd_sense(const CommonOptions& opt, const std::string& signal_path, std::optional<double> target_pf);
int cmd_synth(const CommonOptions& opt, const std::string& hypothesis);
int cmd_figures(const CommonOptions& opt, const std::vector<std::string>& only);

}  // namespace gedsense::cli
