// fragnet.cpp
// Command-line front end:
//   fragnet run            full rolling pipeline over a price panel
//   fragnet mds            full-period classical MDS map
//   fragnet indicator-corr correlation matrix between indicator columns
// Exit code 0 on success; diagnostics go to stderr.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "fragnet/fragnet.hpp"

namespace {

fragnet::PricePanel load_panel(const std::string& prices_path,
                               const std::string& meta_path) {
  std::ifstream prices(prices_path);
  if (!prices) throw std::runtime_error("cannot open " + prices_path);
  std::ifstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot open " + meta_path);
  return fragnet::load_prices(prices, meta);
}

void print_warnings(const fragnet::PricePanel& panel) {
  for (const auto& w : panel.warnings) std::cerr << "warning: " << w << '\n';
}

int run_command(const std::string& prices_path, const std::string& meta_path,
                const fragnet::PipelineConfig& config) {
  auto panel = load_panel(prices_path, meta_path);
  auto clean = fragnet::clean_panel(panel, config.missing_day_fraction);
  print_warnings(clean);
  auto result = fragnet::run_pipeline(config, clean);
  std::cerr << "processed " << result.frame_count << " frame(s), wrote "
            << result.series.size() << " indicator series to "
            << config.output_dir << '\n';
  for (const auto& f : result.failures)
    std::cerr << "frame ending " << f.end_date.iso() << " failed: " << f.message
              << '\n';
  return result.failures.empty() ? 0 : 1;
}

int mds_command(const std::string& prices_path, const std::string& meta_path,
                const std::string& out_dir, double missing_day_fraction) {
  auto panel = load_panel(prices_path, meta_path);
  auto clean = fragnet::clean_panel(panel, missing_day_fraction);
  print_warnings(clean);
  auto returns = fragnet::log_returns(clean);

  // One window spanning the whole period, same code path as rolling frames.
  fragnet::WindowSpec window{0, static_cast<std::size_t>(returns.day_count()),
                             returns.dates.back()};
  auto corr = fragnet::correlation_frame(returns, window);
  auto dist = fragnet::distance_frame(corr);
  auto map = fragnet::classical_mds(dist, 2);
  if (map.rank_deficient)
    std::cerr << "warning: fewer than 2 positive eigenvalues; emitting a "
                 "lower-rank embedding\n";
  std::cerr << "clamped negative eigenvalue mass: " << map.clamped_negative_mass
            << '\n';

  std::filesystem::create_directories(out_dir);
  auto path = (std::filesystem::path(out_dir) / "mds.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "index_code,country_code,region_code,x,y\n";
  char buf[40];
  for (Eigen::Index i = 0; i < map.coordinates.rows(); ++i) {
    const auto& m = returns.meta[static_cast<std::size_t>(i)];
    out << m.index_code << ',' << m.country_code << ',' << m.region_code;
    for (int k = 0; k < 2; ++k) {
      std::snprintf(buf, sizeof(buf), "%.12g", map.coordinates(i, k));
      out << ',' << buf;
    }
    out << '\n';
  }
  return 0;
}

int indicator_corr_command(const std::string& indicators_path,
                           const std::string& out_file) {
  std::ifstream in(indicators_path);
  if (!in) throw std::runtime_error("cannot open " + indicators_path);
  auto corr = fragnet::indicator_correlations_from_csv(in);
  std::ofstream out(out_file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_file);
  fragnet::write_indicator_correlations_csv(corr, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-network fragility indicators for price panels"};
  app.require_subcommand(1);

  std::string prices_path, meta_path, out_dir;
  fragnet::PipelineConfig config;
  std::string method = "mst-threshold";
  std::vector<double> thresholds;

  auto* run = app.add_subcommand("run", "Run the rolling-window pipeline");
  run->set_config("--config", "", "Config file mirroring the flags (flags win)");
  run->add_option("--prices", prices_path, "Price panel CSV")->required();
  run->add_option("--meta", meta_path, "Index metadata CSV")->required();
  run->add_option("--tau", config.tau, "Window length in return days");
  run->add_option("--shift", config.shift, "Rolling shift in return days");
  run->add_option("--threshold", thresholds,
                  "Correlation threshold (repeatable)");
  run->add_option("--method", method, "mst | mst-threshold | pmfg")
      ->check(CLI::IsMember({"mst", "mst-threshold", "pmfg"}));
  run->add_option("--hr-max-path", config.hr_max_path,
                  "Haantjes path budget (edges)");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--missing-day-fraction", config.missing_day_fraction,
                  "Drop days with more than this fraction of markets closed");
  run->add_option("--threads", config.threads, "Worker threads (0 = auto)");
  run->add_flag("--emit-graphs", config.emit_graphs, "Write per-frame graph JSON");
  run->add_flag("--emit-weights", config.emit_weights,
                "Write per-frame portfolio weights");
  run->add_flag("--emit-node-series", config.emit_node_series,
                "Write per-node centrality/curvature series");
  run->add_flag("--emit-frames", config.emit_frames,
                "Write per-frame correlation matrices");
  run->add_flag("--keep-going", config.keep_going,
                "Report failed frames and continue");

  std::string mds_prices, mds_meta, mds_out;
  double mds_missing = 0.30;
  auto* mds = app.add_subcommand("mds", "Full-period classical MDS map");
  mds->add_option("--prices", mds_prices, "Price panel CSV")->required();
  mds->add_option("--meta", mds_meta, "Index metadata CSV")->required();
  mds->add_option("--out", mds_out, "Output directory")->required();
  mds->add_option("--missing-day-fraction", mds_missing,
                  "Drop days with more than this fraction of markets closed");

  std::string ind_path, ind_out;
  auto* icorr = app.add_subcommand(
      "indicator-corr", "Pearson correlations between indicator columns");
  icorr->add_option("--indicators", ind_path, "Indicator CSV from a run")
      ->required();
  icorr->add_option("--out", ind_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      if (!thresholds.empty()) config.thresholds = thresholds;
      if (method == "mst")
        config.method = fragnet::PipelineConfig::Method::Mst;
      else if (method == "pmfg")
        config.method = fragnet::PipelineConfig::Method::Pmfg;
      else
        config.method = fragnet::PipelineConfig::Method::MstThreshold;
      config.output_dir = out_dir;
      return run_command(prices_path, meta_path, config);
    }
    if (app.got_subcommand(mds)) return mds_command(mds_prices, mds_meta, mds_out, mds_missing);
    if (app.got_subcommand(icorr)) return indicator_corr_command(ind_path, ind_out);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
