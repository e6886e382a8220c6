#include "gedsense/presets.hpp"

namespace gedsense::presets {

ThroughputConfig tv_band_throughput() {
  ThroughputConfig cfg;
  cfg.frame_duration = 2.0;
  cfg.prior_h0 = 0.8;
  cfg.prior_h1 = 0.2;
  cfg.snr_secondary = 100.0;
  cfg.target_pd = 0.9;
  cfg.band = {12e6, 6e6, 6e6};
  cfg.snr_target = 0.01;
  return cfg;
}

Scenario qpsk_sensing(double white_hz, ChannelKind channel, double uncertainty_db) {
  Scenario sc;
  sc.band = {6e6 + white_hz, 6e6, white_hz};
  sc.layout = BandLayout::lower_edge;
  sc.sensing_time = 30.3e-3;
  sc.signal.kind = SignalKind::qpsk_time_domain;
  sc.channel = {channel, 1.0};
  sc.noise = {100.0, uncertainty_db};
  return sc;
}

Scenario rolloff_sensing(ChannelKind channel) {
  constexpr double symbol_period = 1e-6 / 6.0;
  constexpr double rolloff = 0.2;
  Scenario sc;
  sc.band = {(1.0 + rolloff) / symbol_period, 1.0 / symbol_period, rolloff / symbol_period};
  sc.layout = BandLayout::centered;
  sc.sensing_time = 4.55e-3;
  sc.signal = {SignalKind::qpsk_srrcf, rolloff, symbol_period};
  sc.channel = {channel, 1.0};
  sc.noise = {100.0, 0.0};
  return sc;
}

}  // namespace gedsense::presets
