#include "lrtc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace lrtc {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double parse_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double metric_of(const MetricsRow& r, PlotMetric m) {
  switch (m) {
    case PlotMetric::KTest: return r.k_test;
    case PlotMetric::SerDb: return r.ser_db;
    case PlotMetric::PsnrDb: return r.psnr_db;
  }
  return 0.0;
}

}  // namespace

void append_csv_rows(std::span<const MetricsRow> rows, std::ostream& os) {
  for (const auto& r : rows) {
    os << r.trial << ',' << r.round << ',' << r.method << ',' << r.observed_count << ','
       << format_double(r.sampling_ratio) << ',' << format_double(r.k_test) << ',' << format_double(r.ser_db)
       << ',' << format_double(r.psnr_db) << ',' << r.wall_ms << '\n';
  }
}

void emit_csv(std::span<const MetricsRow> rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  append_csv_rows(rows, os);
  if (!os) throw Error("csv write failed");
}

void emit_csv(std::span<const MetricsRow> rows, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  emit_csv(rows, os);
}

std::vector<MetricsRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error("unexpected CSV header: " + line);
  std::vector<MetricsRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw Error("csv line " + std::to_string(lineno) + ": expected 9 fields");
    MetricsRow r;
    r.trial = static_cast<int>(parse_int(f[0], lineno));
    r.round = static_cast<int>(parse_int(f[1], lineno));
    r.method = f[2];
    r.observed_count = static_cast<std::size_t>(parse_int(f[3], lineno));
    r.sampling_ratio = parse_double(f[4], lineno);
    r.k_test = parse_double(f[5], lineno);
    r.ser_db = parse_double(f[6], lineno);
    r.psnr_db = parse_double(f[7], lineno);
    r.wall_ms = parse_int(f[8], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MetricsRow> parse_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  return parse_csv(is);
}

PlotMetric parse_plot_metric(const std::string& name) {
  if (name == "k_test") return PlotMetric::KTest;
  if (name == "ser_db") return PlotMetric::SerDb;
  if (name == "psnr_db") return PlotMetric::PsnrDb;
  throw Error("unknown metric '" + name + "' (expected k_test, ser_db or psnr_db)");
}

std::string to_string(PlotMetric m) {
  switch (m) {
    case PlotMetric::KTest: return "k_test";
    case PlotMetric::SerDb: return "ser_db";
    case PlotMetric::PsnrDb: return "psnr_db";
  }
  return "?";
}

std::vector<PlotSeries> plot_series(std::span<const MetricsRow> rows, PlotMetric metric) {
  struct Acc {
    double x = 0.0, y = 0.0;
    int nx = 0, ny = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, std::map<int, Acc>> groups;
  for (const auto& r : rows) {
    if (!groups.contains(r.method)) order.push_back(r.method);
    Acc& a = groups[r.method][r.round];
    a.x += r.sampling_ratio;
    ++a.nx;
    const double v = metric_of(r, metric);
    if (std::isfinite(v)) {
      a.y += v;
      ++a.ny;
    }
  }
  std::vector<PlotSeries> out;
  for (const auto& method : order) {
    PlotSeries s{method, {}};
    for (const auto& [round, a] : groups[method]) {
      if (a.ny == 0) continue;
      s.points.push_back({round, a.x / a.nx, a.y / a.ny});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_svg(std::span<const PlotSeries> series, PlotMetric metric) {
  constexpr double W = 720, H = 440, left = 80, right = 190, top = 30, bottom = 60;
  constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-12) xmin -= 0.005, xmax += 0.005;
  if (ymax - ymin < 1e-300) {
    const double pad = std::max(std::abs(ymin) * 0.05, 1e-12);
    ymin -= pad, ymax += pad;
  }
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
     << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0, fy = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << format_short(px(fx)) << "\" y=\"" << format_short(top + ph + 18)
       << "\" text-anchor=\"middle\">" << format_tick(fx) << "</text>\n";
    os << "<text x=\"" << format_short(left - 6) << "\" y=\"" << format_short(py(fy) + 4)
       << "\" text-anchor=\"end\">" << format_tick(fy) << "</text>\n";
  }
  os << "<text x=\"" << format_short(left + pw / 2) << "\" y=\"" << format_short(H - 15)
     << "\" text-anchor=\"middle\">sampling ratio</text>\n";
  os << "<text x=\"18\" y=\"" << format_short(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << format_short(top + ph / 2) << ")\">" << to_string(metric) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = palette[i % std::size(palette)];
    std::string pts, xs, ys;
    for (const auto& p : s.points) {
      if (!pts.empty()) pts += ' ', xs += ' ', ys += ' ';
      pts += format_short(px(p.x)) + "," + format_short(py(p.y));
      xs += format_double(p.x);
      ys += format_double(p.y);
    }
    os << "<polyline class=\"series\" data-method=\"" << xml_escape(s.method) << "\" data-x=\"" << xs
       << "\" data-y=\"" << ys << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts
       << "\"/>\n";
    const double ly = top + 14 + 20.0 * static_cast<double>(i);
    os << "<g class=\"legend\"><line x1=\"" << format_short(W - right + 15) << "\" y1=\"" << format_short(ly - 4)
       << "\" x2=\"" << format_short(W - right + 40) << "\" y2=\"" << format_short(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/><text x=\"" << format_short(W - right + 46) << "\" y=\"" << format_short(ly)
       << "\">" << xml_escape(s.method) << "</text></g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::filesystem::path& csv_path, PlotMetric metric, const std::filesystem::path& out_path) {
  const auto rows = parse_csv(csv_path);
  if (rows.empty()) throw Error("CSV " + csv_path.string() + " has no rows");
  const auto series = plot_series(rows, metric);
  std::ofstream os(out_path, std::ios::trunc);
  if (!os) throw Error("cannot open " + out_path.string() + " for writing");
  os << render_svg(series, metric);
  if (!os) throw Error("svg write failed");
}

}  // namespace lrtc
