#include "gedsense/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "gedsense/errors.hpp"

namespace gedsense {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(section.empty() ? "<root>" : section, "must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(section.empty() ? key : section + "." + key, "unknown field");
  }
}

template <class T>
void read(const json& obj, const std::string& section, const char* key, T& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  const std::string field = section + "." + key;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!obj.at(key).is_number()) throw ConfigError(field, "must be a number");
    }
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

BandLayout parse_layout(const std::string& s) {
  if (s == "lower_edge") return BandLayout::lower_edge;
  if (s == "centered") return BandLayout::centered;
  throw ConfigError("band.layout", "must be \"lower_edge\" or \"centered\"");
}

ChannelKind parse_channel(const std::string& s) {
  if (s == "awgn") return ChannelKind::awgn;
  if (s == "rayleigh" || s == "rayleigh_block") return ChannelKind::rayleigh_block;
  throw ConfigError("channel.kind", "must be \"awgn\" or \"rayleigh_block\"");
}

SignalKind parse_signal(const std::string& s) {
  if (s == "freq_domain_gaussianized") return SignalKind::freq_domain_gaussianized;
  if (s == "qpsk_time_domain") return SignalKind::qpsk_time_domain;
  if (s == "qpsk_srrcf") return SignalKind::qpsk_srrcf;
  throw ConfigError("signal.kind", "must be freq_domain_gaussianized, qpsk_time_domain or qpsk_srrcf");
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void ExperimentConfig::validate() const {
  throughput.validate();
  scenario.validate();
  for (double pf : target_pfs) {
    if (!(pf > 0.0 && pf < 1.0)) throw ConfigError("sensing.target_pfs", "entries must lie in (0, 1)");
  }
  if (target_pf && !(*target_pf > 0.0 && *target_pf < 1.0)) {
    throw ConfigError("sensing.target_pf", "must lie in (0, 1)");
  }
  for (double tf : frame_sweep) {
    if (!(tf > 0.0) || !std::isfinite(tf)) throw ConfigError("optimize.frame_sweep_s", "entries must be positive");
  }
  if (grid_points < 2) throw ConfigError("optimize.grid_points", "must be >= 2");
  if (trials < 100) throw ConfigError("trials", "must be >= 100");
  if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
  if (output_format != "csv" && output_format != "json") throw ConfigError("output.format", "must be csv or json");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(root, "", {"band", "throughput", "sensing", "noise", "channel", "signal", "optimize", "trials",
                            "seed", "jobs", "output"});

  ExperimentConfig cfg;
  auto& sc = cfg.scenario;
  sc.band = cfg.throughput.band;
  sc.sensing_time = 0.0303;

  if (root.contains("band")) {
    const auto& b = root.at("band");
    reject_unknown(b, "band", {"total_hz", "target_hz", "white_hz", "layout"});
    read(b, "band", "target_hz", sc.band.target_hz);
    read(b, "band", "white_hz", sc.band.white_hz);
    sc.band.total_hz = sc.band.target_hz + sc.band.white_hz;
    read(b, "band", "total_hz", sc.band.total_hz);
    std::string layout = "lower_edge";
    read(b, "band", "layout", layout);
    sc.layout = parse_layout(layout);
  }
  cfg.throughput.band = sc.band;

  if (root.contains("throughput")) {
    const auto& t = root.at("throughput");
    reject_unknown(t, "throughput", {"frame_duration_s", "prior_h0", "prior_h1", "snr_secondary_db",
                                     "snr_primary_at_cr_db", "target_pd", "snr_target_db"});
    auto& tc = cfg.throughput;
    read(t, "throughput", "frame_duration_s", tc.frame_duration);
    read(t, "throughput", "prior_h0", tc.prior_h0);
    tc.prior_h1 = 1.0 - tc.prior_h0;
    read(t, "throughput", "prior_h1", tc.prior_h1);
    double snr_db = linear_to_db(tc.snr_secondary);
    read(t, "throughput", "snr_secondary_db", snr_db);
    tc.snr_secondary = db_to_linear(snr_db);
    if (t.contains("snr_primary_at_cr_db") && !t.at("snr_primary_at_cr_db").is_null()) {
      double pk_db = 0.0;
      read(t, "throughput", "snr_primary_at_cr_db", pk_db);
      tc.snr_primary_at_cr = db_to_linear(pk_db);
    }
    read(t, "throughput", "target_pd", tc.target_pd);
    double target_db = linear_to_db(tc.snr_target);
    read(t, "throughput", "snr_target_db", target_db);
    tc.snr_target = db_to_linear(target_db);
  }

  if (root.contains("sensing")) {
    const auto& s = root.at("sensing");
    reject_unknown(s, "sensing", {"sensing_time_s", "target_pfs", "target_pf"});
    read(s, "sensing", "sensing_time_s", sc.sensing_time);
    read(s, "sensing", "target_pfs", cfg.target_pfs);
    if (s.contains("target_pf") && !s.at("target_pf").is_null()) {
      double pf = 0.0;
      read(s, "sensing", "target_pf", pf);
      cfg.target_pf = pf;
    }
  }

  if (root.contains("noise")) {
    const auto& n = root.at("noise");
    reject_unknown(n, "noise", {"nominal_variance_mw", "uncertainty_db"});
    read(n, "noise", "nominal_variance_mw", sc.noise.nominal_variance);
    read(n, "noise", "uncertainty_db", sc.noise.uncertainty_db);
  }

  if (root.contains("channel")) {
    const auto& c = root.at("channel");
    reject_unknown(c, "channel", {"kind", "signal_power_mw"});
    std::string kind = "awgn";
    read(c, "channel", "kind", kind);
    sc.channel.kind = parse_channel(kind);
    read(c, "channel", "signal_power_mw", sc.channel.signal_power);
  }

  if (root.contains("signal")) {
    const auto& g = root.at("signal");
    reject_unknown(g, "signal", {"kind", "rolloff", "symbol_period_s"});
    std::string kind = "qpsk_time_domain";
    read(g, "signal", "kind", kind);
    sc.signal.kind = parse_signal(kind);
    read(g, "signal", "rolloff", sc.signal.rolloff);
    read(g, "signal", "symbol_period_s", sc.signal.symbol_period);
  }

  if (root.contains("optimize")) {
    const auto& o = root.at("optimize");
    reject_unknown(o, "optimize", {"grid_points", "frame_sweep_s"});
    read(o, "optimize", "grid_points", cfg.grid_points);
    read(o, "optimize", "frame_sweep_s", cfg.frame_sweep);
  }

  if (root.contains("output")) {
    const auto& o = root.at("output");
    reject_unknown(o, "output", {"path", "format"});
    read(o, "output", "path", cfg.output_path);
    read(o, "output", "format", cfg.output_format);
  }

  try {
    if (root.contains("trials")) {
      if (!root.at("trials").is_number_unsigned()) throw ConfigError("trials", "must be a non-negative integer");
      cfg.trials = root.at("trials").get<std::size_t>();
    }
    if (root.contains("seed")) {
      if (!root.at("seed").is_number_unsigned()) throw ConfigError("seed", "must be a non-negative integer");
      cfg.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("jobs")) {
      if (!root.at("jobs").is_number_unsigned()) throw ConfigError("jobs", "must be a positive integer");
      cfg.jobs = root.at("jobs").get<unsigned>();
    }
  } catch (const json::exception& e) {
    throw ConfigError("<root>", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace gedsense
