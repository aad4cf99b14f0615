#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrtc/mri_sim.hpp"

namespace lrtc {

inline constexpr const char* kCsvHeader =
    "trial,round,method,observed_count,sampling_ratio,k_test,ser_db,psnr_db,wall_ms";

/// Floats use 17 significant digits; infinities print as "inf".
void emit_csv(std::span<const MetricsRow> rows, std::ostream& os);
void emit_csv(std::span<const MetricsRow> rows, const std::filesystem::path& path);
/// Rows only, no header.
void append_csv_rows(std::span<const MetricsRow> rows, std::ostream& os);

std::vector<MetricsRow> parse_csv(std::istream& is);
std::vector<MetricsRow> parse_csv(const std::filesystem::path& path);

enum class PlotMetric { KTest, SerDb, PsnrDb };
PlotMetric parse_plot_metric(const std::string& name);
std::string to_string(PlotMetric m);

struct PlotPoint {
  int round = 0;
  double x = 0.0;  // mean sampling ratio
  double y = 0.0;  // mean metric over trials with finite values
};

struct PlotSeries {
  std::string method;
  std::vector<PlotPoint> points;
};

/// Per (method, round) trial averages, methods in order of first appearance.
/// Non-finite metric values are left out of the mean; a group without any
/// finite value is dropped. wall_ms is ignored.
std::vector<PlotSeries> plot_series(std::span<const MetricsRow> rows, PlotMetric metric);

/// Self-contained SVG line chart: one polyline and one legend entry per method.
std::string render_svg(std::span<const PlotSeries> series, PlotMetric metric);

void emit_plot(const std::filesystem::path& csv_path, PlotMetric metric, const std::filesystem::path& out_path);

}  // namespace lrtc
