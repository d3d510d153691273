#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pdef/experiment.hpp"

namespace pdef {

inline constexpr const char* kMetricsSchema = "# pdef-metrics v1";
inline constexpr const char* kSweepSchema = "# pdef-sweep v1";

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Absolute accuracy (mean and stddev of captures/N) per algorithm and N,
/// then gnn's comparative accuracy against each other algorithm, as CSV.
void write_summary(std::ostream& out, const std::vector<MetricsRow>& rows);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  ///< optional half-height error bars
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  double y_min = 0.0;
  double y_max = 1.0;
};

void write_svg_plot(std::ostream& out, const PlotSpec& plot, const std::vector<Series>& series);

/// Capture percentage against N, one line per algorithm.
std::vector<Series> accuracy_series(const std::vector<MetricsRow>& rows);
/// Capture percentage against the swept value, one line per algorithm.
std::vector<Series> sweep_series(const std::vector<SweepRow>& rows);

}  // namespace pdef
