#pragma once

#include <ostream>
#include <span>
#include <string>

#include "gedsense/optimizer.hpp"
#include "gedsense/simulator.hpp"

namespace gedsense {

/// All report fields as a JSON object (pretty-printed, stable key order).
std::string to_json(const MonteCarloReport& report);
std::string to_json(std::span<const MonteCarloReport> reports);
std::string to_json(const OptimizationResult& result);

/// One header row with units, then one row per operating point. Includes
/// whether each empirical rate lies within three binomial standard errors
/// (evaluated at the theory probability) of its theory value.
void write_roc_csv(std::ostream& os, std::span<const MonteCarloReport> reports);

/// True iff |empirical - theory| <= 3 sqrt(theory (1 - theory) / trials).
bool within_three_sigma(double empirical, double theory, std::size_t trials);

/// Fixed-format decimal used by every CSV writer (17 significant digits).
std::string format_number(double v);

}  // namespace gedsense
