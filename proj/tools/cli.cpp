#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrtc/experiment.hpp"
#include "lrtc/fft.hpp"
#include "lrtc/mri_sim.hpp"
#include "lrtc/report.hpp"
#include "lrtc/tensor_io.hpp"

namespace lrtc {

namespace {

std::string fmt_metric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-rank tensor completion with active k-space sampling"};
  app.require_subcommand(1);

  std::vector<std::size_t> shape, ranks;
  std::uint64_t seed = 0;
  double sparse_fraction = 0.0, noise_sigma = 0.0;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic phantom as <out>_image.atns and <out>_kspace.atns");
  synth->add_option("--shape", shape, "Mode sizes, e.g. 16,16,8")->required()->delimiter(',');
  synth->add_option("--ranks", ranks, "Tucker ranks, one per mode")->required()->delimiter(',');
  synth->add_option("--seed", seed, "RNG seed");
  synth->add_option("--sparse-fraction", sparse_fraction, "Fraction of sparse spikes");
  synth->add_option("--noise-sigma", noise_sigma, "Complex noise standard deviation");
  synth->add_option("--out", synth_out, "Output path prefix")->required();

  std::string config_path, output_dir;
  auto* run = app.add_subcommand("run", "Run an active sampling experiment from a config file");
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--output-dir", output_dir, "Override experiment.output_dir");

  std::string csv_path, metric_name, plot_out;
  auto* plot = app.add_subcommand("plot", "Plot a metric against sampling ratio as SVG");
  plot->add_option("--csv", csv_path, "metrics.csv from `run`")->required();
  plot->add_option("--metric", metric_name, "k_test | ser_db | psnr_db")->required();
  plot->add_option("--out", plot_out, "Output SVG path")->required();

  std::string recon_path, truth_path, domain = "kspace";
  auto* metrics = app.add_subcommand("metrics", "Print k_test, SER and PSNR of a reconstruction");
  metrics->add_option("--recon", recon_path, "Reconstructed tensor file")->required();
  metrics->add_option("--truth", truth_path, "Reference tensor file")->required();
  metrics->add_option("--domain", domain, "Domain of both files: kspace | image")
      ->check(CLI::IsMember({"kspace", "image"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (synth->parsed()) {
      PhantomSpec spec{Shape(shape), ranks, sparse_fraction, noise_sigma, seed};
      const Phantom ph = synth_ground_truth(spec);
      write_tensor(synth_out + "_image.atns", ph.image);
      write_tensor(synth_out + "_kspace.atns", ph.kspace);
      out << "wrote " << synth_out << "_image.atns and " << synth_out << "_kspace.atns\n";
    } else if (run->parsed()) {
      ExperimentConfig cfg = parse_config_file(config_path);
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      if (cfg.output_dir.empty()) cfg.output_dir = ".";
      const auto rows = run_experiment(cfg);
      out << "wrote " << rows.size() << " rows to " << (cfg.output_dir / "metrics.csv").string() << '\n';
    } else if (plot->parsed()) {
      emit_plot(csv_path, parse_plot_metric(metric_name), plot_out);
      out << "wrote " << plot_out << '\n';
    } else if (metrics->parsed()) {
      const DenseTensor recon = read_tensor(recon_path);
      const DenseTensor truth = read_tensor(truth_path);
      const bool kspace = domain == "kspace";
      const DenseTensor recon_k = kspace ? recon : fft_forward(recon);
      const DenseTensor truth_k = kspace ? truth : fft_forward(truth);
      const DenseTensor recon_i = kspace ? fft_inverse(recon) : recon;
      const DenseTensor truth_i = kspace ? fft_inverse(truth) : truth;
      out << "k_test " << fmt_metric(k_test(recon_k, truth_k)) << '\n';
      out << "ser_db " << fmt_metric(ser(recon_i, truth_i)) << '\n';
      out << "psnr_db " << fmt_metric(psnr(recon_i, truth_i)) << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lrtc
