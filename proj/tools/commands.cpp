#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "gedsense/config.hpp"
#include "gedsense/errors.hpp"
#include "gedsense/optimizer.hpp"
#include "gedsense/presets.hpp"
#include "gedsense/report_io.hpp"
#include "gedsense/sample_io.hpp"

namespace gedsense::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const MalformedFileError& e) {
    std::cerr << "error: malformed sample file: " << e.what() << '\n';
    return kMalformedFile;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

std::uint64_t parse_seed_env(const char* text) {
  std::istringstream in(text);
  std::uint64_t v = 0;
  if (!(in >> v) || !in.eof()) throw ConfigError("GEDSENSE_SEED", "must be an unsigned 64-bit integer");
  return v;
}

// Config file, then GEDSENSE_SEED, then command-line flags; validated before use.
ExperimentConfig resolve(const CommonOptions& opt) {
  ExperimentConfig cfg = opt.config_path.empty() ? parse_config("{}") : load_config(opt.config_path);
  if (const char* env = std::getenv("GEDSENSE_SEED"); env && *env) cfg.seed = parse_seed_env(env);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.jobs) cfg.jobs = *opt.jobs;
  if (!opt.output_path.empty()) cfg.output_path = opt.output_path;
  if (!opt.format.empty()) cfg.output_format = opt.format;
  cfg.validate();
  return cfg;
}

// Writes to the configured path, or to stdout when none is set.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
}

std::vector<ScanPoint> curve(const ObjectiveCoefficients& coef, double frame, double lo, double step_or_points,
                             bool by_step) {
  if (!by_step) return scan_objective(coef, frame, lo, frame, static_cast<int>(step_or_points));
  std::vector<ScanPoint> out;
  for (double t = step_or_points; t <= frame + 1e-12; t += step_or_points) {
    out.push_back({t, objective(coef, std::min(t, frame), frame)});
  }
  return out;
}

std::string curve_csv(const std::vector<ScanPoint>& pts, double threshold_a, double threshold_b) {
  std::ostringstream os;
  os << "sensing_time_s,normalized_throughput_bps_per_hz,threshold_dimensionless\n";
  for (const auto& p : pts) {
    os << format_number(p.sensing_time) << ',' << format_number(p.throughput) << ','
       << format_number(threshold_a * std::sqrt(p.sensing_time) + threshold_b) << '\n';
  }
  return os.str();
}

ordered_json summary_json(const OptimizationResult& r, double frame) {
  ordered_json j;
  j["mode"] = r.mode == DetectorMode::ced ? "ced" : "ged";
  j["frame_duration_s"] = frame;
  j["optimal_sensing_time_s"] = r.optimal_sensing_time;
  j["optimal_threshold"] = r.optimal_threshold;
  j["max_normalized_throughput_bps_per_hz"] = r.max_throughput;
  j["iterations"] = r.iterations;
  return j;
}

std::vector<double> thresholds_for(const std::vector<double>& pfs) {
  std::vector<double> out;
  for (double pf : pfs) out.push_back(threshold_for_pf(pf));
  return out;
}

// --- figure writers -------------------------------------------------------

constexpr double kCurveStep = 0.5e-3;

void write_frame_sweep(const fs::path& path) {
  std::ofstream os(path);
  os << "frame_duration_s,sensing_time_s,normalized_throughput_bps_per_hz\n";
  for (double tf : {0.1, 0.3, 0.6, 1.2, 2.0}) {
    auto cfg = presets::tv_band_throughput();
    cfg.frame_duration = tf;
    const auto coef = coefficients(cfg);
    for (const auto& p : curve(coef, tf, 0.0, kCurveStep, true)) {
      os << format_number(tf) << ',' << format_number(p.sensing_time) << ',' << format_number(p.throughput) << '\n';
    }
  }
}

void write_bandwidth_effect(const fs::path& path) {
  std::ofstream os(path);
  os << "target_hz,white_hz,sensing_time_s,normalized_throughput_bps_per_hz\n";
  for (double white : {10e6, 6e6}) {
    auto cfg = presets::tv_band_throughput();
    cfg.frame_duration = 1.2;
    cfg.band = {10e6 + white, 10e6, white};
    const auto coef = coefficients(cfg);
    for (const auto& p : curve(coef, cfg.frame_duration, 0.0, kCurveStep, true)) {
      os << format_number(10e6) << ',' << format_number(white) << ',' << format_number(p.sensing_time) << ','
         << format_number(p.throughput) << '\n';
    }
  }
}

void write_mode_comparison(const fs::path& path) {
  std::ofstream os(path);
  os << "mode,sensing_time_s,normalized_throughput_bps_per_hz\n";
  const auto cfg = presets::tv_band_throughput();
  for (auto mode : {DetectorMode::ged, DetectorMode::ced}) {
    const auto coef = coefficients(cfg, mode);
    for (const auto& p : curve(coef, cfg.frame_duration, 0.0, kCurveStep, true)) {
      os << (mode == DetectorMode::ced ? "ced" : "ged") << ',' << format_number(p.sensing_time) << ','
         << format_number(p.throughput) << '\n';
    }
  }
}

void write_roc_figure(const fs::path& path, const ExperimentConfig& cfg) {
  const auto sc = presets::qpsk_sensing(4.28e6);
  const auto reports = roc(sc, thresholds_for({0.01, 0.05, 0.1, 0.2, 0.4}), {cfg.trials, cfg.seed, cfg.jobs});
  std::ofstream os(path);
  write_roc_csv(os, reports);
}

void write_uncertainty_figure(const fs::path& path, const ExperimentConfig& cfg) {
  const double threshold = threshold_for_pf(0.1);
  bool header_done = false;
  std::ofstream os(path);
  for (double white : {6e6, 4.28e6}) {
    for (auto channel : {ChannelKind::awgn, ChannelKind::rayleigh_block}) {
      const auto sc = presets::qpsk_sensing(white, channel, 2.0);
      const auto rep = monte_carlo(sc, threshold, {cfg.trials, cfg.seed, cfg.jobs});
      std::ostringstream rows;
      write_roc_csv(rows, std::span(&rep, 1));
      std::istringstream lines(rows.str());
      std::string header, row;
      std::getline(lines, header);
      std::getline(lines, row);
      if (!header_done) {
        os << "beta_ratio,channel," << header << '\n';
        header_done = true;
      }
      os << format_number(white / 6e6) << ',' << (channel == ChannelKind::awgn ? "awgn" : "rayleigh_block") << ','
         << row << '\n';
    }
  }
}

}  // namespace

int cmd_optimize(const CommonOptions& opt) {
  return guarded([&] {
    const auto cfg = resolve(opt);
    const auto mode = opt.ced ? DetectorMode::ced : DetectorMode::ged;
    const auto& tc = cfg.throughput;
    const auto result = optimize_sensing_time(tc, {}, mode);
    const auto coef = coefficients(tc, mode);

    auto summary = summary_json(result, tc.frame_duration);
    auto sweep = ordered_json::array();
    for (double tf : cfg.frame_sweep) {
      auto swept = tc;
      swept.frame_duration = tf;
      const auto r = optimize_sensing_time(swept, {}, mode);
      sweep.push_back({{"frame_duration_s", tf}, {"optimal_sensing_time_s", r.optimal_sensing_time}});
    }
    summary["frame_sweep"] = sweep;
    std::cout << summary.dump(2) << '\n';

    if (!cfg.output_path.empty()) {
      const auto pts = curve(coef, tc.frame_duration, min_sensing_time(tc), cfg.grid_points, false);
      if (cfg.output_format == "json") {
        ordered_json doc;
        doc["summary"] = summary;
        auto arr = ordered_json::array();
        for (const auto& p : pts) {
          arr.push_back({{"sensing_time_s", p.sensing_time},
                         {"normalized_throughput_bps_per_hz", p.throughput},
                         {"threshold", threshold_schedule(coef, p.sensing_time)}});
        }
        doc["curve"] = arr;
        emit(cfg.output_path, doc.dump(2) + "\n");
      } else {
        emit(cfg.output_path, curve_csv(pts, coef.a, coef.b));
      }
    }
    return kOk;
  });
}

int cmd_roc(const CommonOptions& opt) {
  return guarded([&] {
    const auto cfg = resolve(opt);
    const auto reports = roc(cfg.scenario, thresholds_for(cfg.target_pfs), {cfg.trials, cfg.seed, cfg.jobs});
    if (cfg.output_format == "json") {
      emit(cfg.output_path, to_json(std::span<const MonteCarloReport>(reports)) + "\n");
    } else {
      std::ostringstream os;
      write_roc_csv(os, reports);
      emit(cfg.output_path, os.str());
    }
    return kOk;
  });
}

int cmd_sense(const CommonOptions& opt, const std::string& signal_path, std::optional<double> target_pf) {
  return guarded([&] {
    auto cfg = resolve(opt);
    if (target_pf) {
      if (!(*target_pf > 0.0 && *target_pf < 1.0)) throw ConfigError("--target-pf", "must lie in (0, 1)");
      cfg.target_pf = target_pf;
    }
    const auto window = load_samples(signal_path);
    const auto& band = cfg.throughput.band;
    if (std::abs(window.sample_rate - band.total_hz) > 1e-9 * band.total_hz) {
      throw ConfigError("band.total_hz", "does not match the sample file's sample_rate");
    }

    ordered_json out;
    Decision decision;
    SubbandPlan plan;
    if (cfg.target_pf) {
      plan = plan_subbands(band, static_cast<double>(window.samples.size()) / window.sample_rate,
                           cfg.scenario.layout);
      const auto stat = ged_statistic(measure_energies(window.samples, plan), plan);
      decision = decide(stat, threshold_for_pf(*cfg.target_pf));
      out["mode"] = "fixed_pf";
      out["target_pf"] = *cfg.target_pf;
    } else {
      const auto frame = run_frame(cfg.throughput, window, {}, cfg.scenario.layout);
      decision = frame.decision;
      plan = frame.plan;
      out["mode"] = "optimized_schedule";
      out["optimal_sensing_time_s"] = frame.optimization.optimal_sensing_time;
    }
    out["statistic"] = decision.statistic.value;
    out["threshold"] = decision.threshold;
    out["label"] = std::string(to_string(decision.label));
    out["n_samples"] = plan.n_samples;
    out["n_target_bins"] = plan.n_target;
    out["n_white_bins"] = plan.n_white;
    out["beta"] = plan.beta;
    std::cout << out.dump(2) << '\n';
    return decision.label == Label::white ? kOk : kNonWhite;
  });
}

int cmd_synth(const CommonOptions& opt, const std::string& hypothesis) {
  return guarded([&] {
    const auto cfg = resolve(opt);
    if (cfg.output_path.empty()) throw ConfigError("--output", "synth needs an output sample file path");
    const auto h = hypothesis == "h1" ? Hypothesis::h1 : Hypothesis::h0;
    const TrialGenerator gen(cfg.scenario);
    auto eng = make_engine(cfg.seed, h == Hypothesis::h0 ? 0 : 1, 0);
    save_samples(cfg.output_path, gen.generate(h, eng).buffer);
    std::cerr << "wrote " << gen.plan().n_samples << " samples to " << cfg.output_path << '\n';
    return kOk;
  });
}

int cmd_figures(const CommonOptions& opt, const std::vector<std::string>& only) {
  return guarded([&] {
    const auto cfg = resolve(opt);
    const fs::path dir = cfg.output_path.empty() ? fs::path(".") : fs::path(cfg.output_path);
    fs::create_directories(dir);
    const auto wanted = [&](const std::string& name) {
      return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
    };
    if (wanted("fig2")) write_frame_sweep(dir / "fig2.csv");
    if (wanted("fig3")) write_bandwidth_effect(dir / "fig3.csv");
    if (wanted("fig4")) write_mode_comparison(dir / "fig4.csv");
    if (wanted("fig5")) write_roc_figure(dir / "fig5.csv", cfg);
    if (wanted("fig6")) write_uncertainty_figure(dir / "fig6.csv", cfg);
    return kOk;
  });
}

}  // namespace gedsense::cli
