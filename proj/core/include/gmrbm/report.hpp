#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmrbm/crossmatch.hpp"
#include "gmrbm/harness.hpp"

namespace gmrbm {

/// label,mean_p,energy,epeff,cores
std::string parameter_sweep_csv(std::span<const EpeffReport> reports);

/// leak_density,mean_p,energy,epeff,cores,leak_neurons,total_neurons,interior_max
std::string leak_sweep_csv(std::span<const EpeffReport> reports);

/// bin_low,bin_high,count
std::string histogram_csv(const PValueStats& stats);

/// trial,p_value
std::string pvalues_csv(const PValueStats& stats);

/// Crossmatch outcome as JSON with a fixed key order.
std::string outcome_json(const CrossmatchOutcome& outcome);

/// Null-check summary as JSON with a fixed key order.
std::string null_check_json(const PValueStats& stats, std::size_t n_per_trial, double mean_low, double mean_high,
                            double max_cdf_excess);

/// Comma-separated rows; fields never contain commas or quotes.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct ChartSeries {
  std::string name;
  std::vector<double> values;
};

std::string svg_bar_chart(std::string_view title, std::span<const std::string> labels, std::span<const double> values,
                          std::string_view y_label);

/// One polyline per series over categorical x positions; each series is
/// scaled to its own maximum so different units share the plot.
std::string svg_line_chart(std::string_view title, std::span<const std::string> x_labels,
                           std::span<const ChartSeries> series, std::string_view x_label);

}  // namespace gmrbm
