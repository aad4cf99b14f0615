#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "lrtc/report.hpp"
#include "lrtc/tensor_io.hpp"
#include "test_util.hpp"

using namespace lrtc;
using lrtc::testing::random_shape;
using lrtc::testing::random_tensor;

namespace {

std::string bytes_of(const DenseTensor& t) {
  std::ostringstream os(std::ios::binary);
  write_tensor(os, t);
  return os.str();
}

DenseTensor from_bytes(const std::string& s) {
  std::istringstream is(s, std::ios::binary);
  return read_tensor(is);
}

std::string error_of(const std::string& bytes) {
  try {
    from_bytes(bytes);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "lrtc_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

MetricsRow row(int trial, int round, std::string method, double ratio, double kt) {
  MetricsRow r;
  r.trial = trial;
  r.round = round;
  r.method = std::move(method);
  r.observed_count = static_cast<std::size_t>(ratio * 100);
  r.sampling_ratio = ratio;
  r.k_test = kt;
  r.ser_db = 10.0 * kt;
  r.psnr_db = 20.0 * kt;
  r.wall_ms = 3;
  return r;
}

}  // namespace

TEST(TensorFile, HeaderLayout) {
  DenseTensor t(Shape{2, 3}, {Complex(1.5, -2.0), 0, 0, 0, 0, Complex(0.0, 7.0)});
  const std::string b = bytes_of(t);
  ASSERT_EQ(b.size(), 4u + 2 + 2 + 2 * 8 + 6 * 16);
  EXPECT_EQ(b.substr(0, 4), "ATNS");
  EXPECT_EQ(static_cast<unsigned char>(b[4]), 1u);
  EXPECT_EQ(static_cast<unsigned char>(b[5]), 0u);
  EXPECT_EQ(static_cast<unsigned char>(b[6]), 2u);
  EXPECT_EQ(static_cast<unsigned char>(b[8]), 2u);
  EXPECT_EQ(static_cast<unsigned char>(b[16]), 3u);
  double re = 0.0, im = 0.0;
  static_assert(std::endian::native == std::endian::little);
  std::memcpy(&re, b.data() + 24, 8);
  std::memcpy(&im, b.data() + 32, 8);
  EXPECT_EQ(re, 1.5);
  EXPECT_EQ(im, -2.0);
}

TEST(TensorFile, RoundtripBitwise) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    DenseTensor t = random_tensor(random_shape(rng, 2 + trial % 3, 6), rng);
    EXPECT_EQ(from_bytes(bytes_of(t)), t);
  }
  DenseTensor special(Shape{1, 3}, {Complex(-0.0, 0.0), Complex(std::numeric_limits<double>::denorm_min(), 1e308),
                                    Complex(0.1, -0.3)});
  EXPECT_EQ(bytes_of(from_bytes(bytes_of(special))), bytes_of(special));
}

TEST(TensorFile, FileRoundtrip) {
  std::mt19937_64 rng(2);
  DenseTensor t = random_tensor(Shape{4, 5, 6}, rng);
  auto path = temp_path("roundtrip.atns");
  write_tensor(path, t);
  EXPECT_EQ(read_tensor(path), t);
  EXPECT_THROW(read_tensor(temp_path("does_not_exist.atns")), Error);
}

TEST(TensorFile, Errors) {
  std::mt19937_64 rng(3);
  const std::string good = bytes_of(random_tensor(Shape{2, 2}, rng));

  std::string bad = good;
  bad[0] = 'X';
  EXPECT_NE(error_of(bad).find("bad magic"), std::string::npos);

  bad = good;
  bad[4] = 2;
  EXPECT_NE(error_of(bad).find("unsupported version 2"), std::string::npos);

  EXPECT_NE(error_of(good.substr(0, 10)).find("truncated header"), std::string::npos);

  const std::string msg = error_of(good.substr(0, good.size() - 8));
  EXPECT_NE(msg.find("header expects 64 bytes"), std::string::npos) << msg;
  EXPECT_NE(msg.find("file has 56 bytes"), std::string::npos) << msg;

  EXPECT_NE(error_of(good + "x").find("file has 65 bytes"), std::string::npos);
}

TEST(Csv, HeaderOnlyAndSingleRow) {
  std::ostringstream empty;
  emit_csv(std::span<const MetricsRow>{}, empty);
  EXPECT_EQ(empty.str(), std::string(kCsvHeader) + "\n");

  std::vector<MetricsRow> rows{row(0, 0, "Var", 0.25, 0.5)};
  std::ostringstream one;
  emit_csv(rows, one);
  std::size_t lines = 0;
  for (char c : one.str()) lines += c == '\n';
  EXPECT_EQ(lines, 2u);
}

TEST(Csv, RoundtripExact) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<MetricsRow> rows;
  for (int k = 0; k < 30; ++k) rows.push_back(row(k / 10, k % 10, k % 2 ? "Random" : "VarTimesLev", u(rng), u(rng)));
  rows[3].ser_db = std::numeric_limits<double>::infinity();
  rows[4].psnr_db = std::numeric_limits<double>::infinity();
  rows[5].k_test = std::numeric_limits<double>::quiet_NaN();
  std::stringstream ss;
  emit_csv(rows, ss);
  auto back = parse_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].trial, rows[i].trial);
    EXPECT_EQ(back[i].round, rows[i].round);
    EXPECT_EQ(back[i].method, rows[i].method);
    EXPECT_EQ(back[i].observed_count, rows[i].observed_count);
    EXPECT_EQ(back[i].sampling_ratio, rows[i].sampling_ratio);
    if (std::isnan(rows[i].k_test)) {
      EXPECT_TRUE(std::isnan(back[i].k_test));
    } else {
      EXPECT_EQ(back[i].k_test, rows[i].k_test);
    }
    EXPECT_EQ(back[i].ser_db, rows[i].ser_db);
    EXPECT_EQ(back[i].psnr_db, rows[i].psnr_db);
    EXPECT_EQ(back[i].wall_ms, rows[i].wall_ms);
  }
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(parse_csv(bad_header), Error);
  std::istringstream short_row(std::string(kCsvHeader) + "\n0,1,Var\n");
  EXPECT_THROW(parse_csv(short_row), Error);
}

TEST(Plot, SeriesAverageOverTrials) {
  std::vector<MetricsRow> rows{row(0, 0, "Var", 0.2, 0.4), row(1, 0, "Var", 0.2, 0.2),
                               row(0, 1, "Var", 0.3, 0.1), row(1, 1, "Var", 0.3, 0.3),
                               row(0, 0, "Random", 0.2, 0.5)};
  rows[3].k_test = std::numeric_limits<double>::quiet_NaN();
  auto series = plot_series(rows, PlotMetric::KTest);
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].method, "Var");
  ASSERT_EQ(series[0].points.size(), 2u);
  EXPECT_DOUBLE_EQ(series[0].points[0].y, 0.3);
  EXPECT_DOUBLE_EQ(series[0].points[0].x, 0.2);
  EXPECT_DOUBLE_EQ(series[0].points[1].y, 0.1);
  EXPECT_EQ(series[1].method, "Random");
  auto ser_series = plot_series(rows, PlotMetric::SerDb);
  EXPECT_DOUBLE_EQ(ser_series[0].points[0].y, 3.0);
}

TEST(Plot, SvgHasOnePolylineAndLegendPerMethod) {
  std::vector<MetricsRow> one{row(0, 0, "Var", 0.2, 0.4), row(0, 1, "Var", 0.3, 0.2)};
  const std::string svg1 = render_svg(plot_series(one, PlotMetric::KTest), PlotMetric::KTest);
  auto count = [](const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
  };
  EXPECT_EQ(svg1.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg1, "<polyline"), 1u);
  const auto start = svg1.find("points=\"") + 8;
  const std::string pts = svg1.substr(start, svg1.find('"', start) - start);
  EXPECT_EQ(count(pts, ","), 2u);

  one.push_back(row(0, 0, "Random", 0.2, 0.5));
  const std::string svg2 = render_svg(plot_series(one, PlotMetric::KTest), PlotMetric::KTest);
  EXPECT_EQ(count(svg2, "<polyline"), 2u);
  EXPECT_EQ(count(svg2, "class=\"legend\""), 2u);
  EXPECT_EQ(svg2.find("href"), std::string::npos);
}

TEST(Plot, EmitPlotErrors) {
  auto empty = temp_path("empty.csv");
  std::ofstream(empty) << "";
  EXPECT_THROW(emit_plot(empty, PlotMetric::KTest, temp_path("x.svg")), Error);
  EXPECT_THROW(parse_plot_metric("mse"), Error);
  EXPECT_EQ(parse_plot_metric("psnr_db"), PlotMetric::PsnrDb);
  EXPECT_EQ(to_string(PlotMetric::SerDb), "ser_db");

  auto csv = temp_path("ok.csv");
  std::vector<MetricsRow> rows{row(0, 0, "Var", 0.2, 0.4)};
  emit_csv(rows, csv);
  auto svg = temp_path("ok.svg");
  emit_plot(csv, PlotMetric::KTest, svg);
  EXPECT_TRUE(std::filesystem::file_size(svg) > 0);
}
