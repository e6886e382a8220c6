#pragma once

#include "gedsense/optimizer.hpp"
#include "gedsense/simulator.hpp"

namespace gedsense::presets {

/// Two adjacent 6 MHz TV channels, target first: Pd >= 0.9 at -20 dB,
/// 20 dB secondary link, P(H0) = 0.8, 2 s frame.
ThroughputConfig tv_band_throughput();

/// 6 MHz target band next to a `white_hz` white band, 30.3 ms window,
/// band-limited QPSK at -20 dB (1 mW signal, 100 mW noise).
Scenario qpsk_sensing(double white_hz = 4.28e6, ChannelKind channel = ChannelKind::awgn,
                      double uncertainty_db = 0.0);

/// Root-raised-cosine QPSK, 1/6 us symbols, rolloff 0.2: the 6 MHz main lobe is the
/// target band and the two 0.6 MHz rolloff edges form the white band. 4.55 ms window.
Scenario rolloff_sensing(ChannelKind channel = ChannelKind::awgn);

}  // namespace gedsense::presets
