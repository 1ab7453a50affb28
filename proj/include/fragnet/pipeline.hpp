// pipeline.hpp
// Frame-by-frame orchestration: rolling correlation frames, the configured
// network construction, every indicator, and the persisted outputs. Frames
// are independent, so they run on a bounded worker pool; each frame writes
// only its own per-frame files and fills its own result slot, which makes
// outputs byte-identical for any worker count.

#pragma once

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fragnet/correlation.hpp"
#include "fragnet/curvature.hpp"
#include "fragnet/market_graph.hpp"
#include "fragnet/network_build.hpp"
#include "fragnet/network_measures.hpp"
#include "fragnet/panel.hpp"
#include "fragnet/portfolio.hpp"
#include "fragnet/shortest_paths.hpp"

namespace fragnet {

struct PipelineConfig {
  std::size_t tau = 80;
  std::size_t shift = 20;
  std::vector<double> thresholds = {0.65};
  enum class Method { Mst, MstThreshold, Pmfg };
  Method method = Method::MstThreshold;
  std::size_t hr_max_path = 5;
  std::string output_dir;  // empty: no files are written
  double missing_day_fraction = 0.30;
  bool emit_graphs = false;
  bool emit_weights = false;
  bool emit_node_series = false;
  bool emit_frames = false;
  bool keep_going = false;
  unsigned threads = 0;  // 0: hardware concurrency
  // Called at the start of every frame (progress reporting, fault
  // injection in tests). A throw here fails that frame only.
  std::function<void(const WindowSpec&)> on_frame;
};

inline const char* method_name(PipelineConfig::Method m) {
  switch (m) {
    case PipelineConfig::Method::Mst: return "mst";
    case PipelineConfig::Method::MstThreshold: return "mst-threshold";
    case PipelineConfig::Method::Pmfg: return "pmfg";
  }
  return "?";
}

struct IndicatorRecord {
  Date end_date;
  double mean_correlation = 0.0;
  double eigen_entropy = 0.0;
  double min_risk = 0.0;
  GraphScalarReport graph;
  double avg_or = 0.0;
  double avg_fr = 0.0;
  double avg_mr = 0.0;
  double avg_hr = 0.0;
};

struct IndicatorSeries {
  std::optional<double> theta;
  std::vector<IndicatorRecord> records;  // sorted by end_date
};

struct FrameFailure {
  Date end_date;
  std::string message;
};

struct PipelineResult {
  std::vector<IndicatorSeries> series;
  std::vector<FrameFailure> failures;
  std::size_t frame_count = 0;
};

inline const std::vector<std::string>& indicator_columns() {
  static const std::vector<std::string> cols = {
      "mean_correlation", "eigen_entropy",  "min_risk",
      "num_edges",        "edge_density",   "avg_degree",
      "avg_weighted_degree", "avg_path_length", "diameter",
      "efficiency",       "avg_clustering", "modularity",
      "assortativity",    "network_entropy", "grc",
      "clique_number",    "avg_or",         "avg_fr",
      "avg_mr",           "avg_hr"};
  return cols;
}

inline std::vector<double> indicator_values(const IndicatorRecord& r) {
  return {r.mean_correlation,
          r.eigen_entropy,
          r.min_risk,
          static_cast<double>(r.graph.num_edges),
          r.graph.edge_density,
          r.graph.avg_degree,
          r.graph.avg_weighted_degree,
          r.graph.avg_path_length,
          r.graph.diameter,
          r.graph.efficiency,
          r.graph.avg_clustering,
          r.graph.modularity,
          r.graph.assortativity,
          r.graph.network_entropy,
          r.graph.grc,
          static_cast<double>(r.graph.clique_number),
          r.avg_or,
          r.avg_fr,
          r.avg_mr,
          r.avg_hr};
}

namespace detail {

inline std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string theta_label(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", theta);
  return buf;
}

}  // namespace detail

inline void export_indicators(const IndicatorSeries& series, std::ostream& out) {
  if (series.records.empty())
    throw std::invalid_argument("cannot export an empty indicator series");
  out << "end_date";
  for (const auto& c : indicator_columns()) out << ',' << c;
  out << '\n';
  for (const auto& r : series.records) {
    out << r.end_date.iso();
    for (double v : indicator_values(r)) out << ',' << detail::sig12(v);
    out << '\n';
  }
}

inline void export_indicators(const IndicatorSeries& series,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  export_indicators(series, out);
}

// Graph JSON: nodes carry metadata and community id, edges carry both
// weights and all four curvatures. Key order is fixed for byte-stable
// re-exports.
inline void export_graph(const MarketGraph& g, const CommunityPartition& partition,
                         const EdgeCurvatures& curv, const std::string& path) {
  if (partition.assignment.size() != g.vertices.size() ||
      curv.ollivier.size() != g.edges.size())
    throw std::invalid_argument("graph annotations do not match the graph");
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    nlohmann::ordered_json node;
    node["id"] = g.vertices[i].index_code;
    node["country"] = g.vertices[i].country_code;
    node["region"] = g.vertices[i].region_code;
    node["community"] = partition.assignment[i];
    doc["nodes"].push_back(std::move(node));
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    nlohmann::ordered_json edge;
    edge["u"] = g.vertices[static_cast<std::size_t>(e.u)].index_code;
    edge["v"] = g.vertices[static_cast<std::size_t>(e.v)].index_code;
    edge["strength"] = e.strength;
    edge["distance"] = e.distance;
    edge["or"] = curv.ollivier[k];
    edge["fr"] = curv.forman[k];
    edge["mr"] = curv.menger[k];
    edge["hr"] = curv.haantjes[k];
    doc["edges"].push_back(std::move(edge));
  }
  doc["kind"] = graph_kind_name(g.kind);
  doc["end_date"] = g.frame.end_date.iso();
  doc["tau"] = g.frame.tau;
  if (g.frame.theta)
    doc["theta"] = *g.frame.theta;
  else
    doc["theta"] = nullptr;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

// Pairwise Pearson correlation between indicator columns across frames.
// NaN marks pairs involving a constant column (printed as UD).
struct IndicatorCorrelation {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};

namespace detail {

inline IndicatorCorrelation correlate_columns(const std::vector<std::string>& names,
                                              const std::vector<std::vector<double>>& cols) {
  const std::size_t k = cols.size();
  const std::size_t rows = k ? cols[0].size() : 0;
  if (rows < 3)
    throw std::invalid_argument("indicator correlations need at least 3 frames");
  IndicatorCorrelation out;
  out.names = names;
  out.values.setConstant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k),
                         std::numeric_limits<double>::quiet_NaN());
  std::vector<char> constant(k, 0);
  std::vector<double> mean(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double lo = cols[c][0], hi = cols[c][0], sum = 0.0;
    for (double v : cols[c]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    constant[c] = (lo == hi);
    mean[c] = sum / static_cast<double>(rows);
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      if (constant[a] || constant[b]) continue;  // undefined, stays NaN
      double sab = 0.0, saa = 0.0, sbb = 0.0;
      for (std::size_t t = 0; t < rows; ++t) {
        double da = cols[a][t] - mean[a];
        double db = cols[b][t] - mean[b];
        sab += da * db;
        saa += da * da;
        sbb += db * db;
      }
      double r = sab / std::sqrt(saa * sbb);
      out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = r;
      out.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = r;
    }
  }
  return out;
}

}  // namespace detail

inline IndicatorCorrelation indicator_correlations(const IndicatorSeries& series) {
  const auto& names = indicator_columns();
  std::vector<std::vector<double>> cols(names.size());
  for (const auto& r : series.records) {
    auto vals = indicator_values(r);
    for (std::size_t c = 0; c < vals.size(); ++c) cols[c].push_back(vals[c]);
  }
  return detail::correlate_columns(names, cols);
}

// Generic variant for a previously exported indicator file: every column
// whose cells all parse as numbers participates.
inline IndicatorCorrelation indicator_correlations_from_csv(std::istream& in) {
  std::string line;
  if (!detail::read_line(in, line))
    throw std::invalid_argument("indicator file is empty");
  detail::strip_bom(line);
  auto header = detail::split_csv_line(line);
  std::vector<std::vector<std::string>> raw(header.size());
  while (detail::read_line(in, line)) {
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw std::invalid_argument("ragged indicator file");
    for (std::size_t c = 0; c < cells.size(); ++c) raw[c].push_back(cells[c]);
  }
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<double> parsed;
    parsed.reserve(raw[c].size());
    bool numeric = !raw[c].empty();
    for (const auto& cell : raw[c]) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        numeric = false;
        break;
      }
      parsed.push_back(v);
    }
    if (numeric) {
      names.push_back(header[c]);
      cols.push_back(std::move(parsed));
    }
  }
  if (names.empty())
    throw std::invalid_argument("indicator file has no numeric columns");
  return detail::correlate_columns(names, cols);
}

inline void write_indicator_correlations_csv(const IndicatorCorrelation& corr,
                                             std::ostream& out) {
  out << "indicator";
  for (const auto& n : corr.names) out << ',' << n;
  out << '\n';
  for (std::size_t a = 0; a < corr.names.size(); ++a) {
    out << corr.names[a];
    for (std::size_t b = 0; b < corr.names.size(); ++b) {
      double v = corr.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      out << ',';
      if (std::isnan(v))
        out << "UD";
      else
        out << detail::sig12(v);
    }
    out << '\n';
  }
}

namespace detail {

struct FrameOutput {
  // One record per configured series, plus node-series rows when requested.
  std::vector<IndicatorRecord> records;
  std::vector<std::vector<std::string>> node_rows;  // per series
};

inline void write_weights_csv(const std::vector<IndexMeta>& meta,
                              const Eigen::VectorXd& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "index_code,weight\n";
  for (Eigen::Index i = 0; i < w.size(); ++i)
    out << meta[static_cast<std::size_t>(i)].index_code << ',' << sig12(w(i)) << '\n';
}

}  // namespace detail

inline void validate_config(const PipelineConfig& config) {
  if (config.tau < 2) throw std::invalid_argument("tau must be >= 2");
  if (config.shift < 1) throw std::invalid_argument("shift must be >= 1");
  if (config.hr_max_path < 2)
    throw std::invalid_argument("hr-max-path must be >= 2");
  for (double t : config.thresholds)
    if (!(t > -1.0 && t <= 1.0))
      throw std::invalid_argument("thresholds must lie in (-1, 1]");
  if (config.method == PipelineConfig::Method::MstThreshold &&
      config.thresholds.empty())
    throw std::invalid_argument("mst-threshold method needs at least one threshold");
}

inline PipelineResult run_pipeline(const PipelineConfig& config,
                                   const PricePanel& prices) {
  validate_config(config);
  PricePanel clean = prices.cleaned
                         ? prices
                         : clean_panel(prices, config.missing_day_fraction);
  ReturnPanel returns = log_returns(clean);
  const auto windows = enumerate_windows(returns, config.tau, config.shift);
  const std::size_t nframes = windows.size();
  const std::size_t nseries =
      config.method == PipelineConfig::Method::MstThreshold
          ? config.thresholds.size()
          : 1;

  const bool writing = !config.output_dir.empty();
  if (writing) std::filesystem::create_directories(config.output_dir);
  auto out_path = [&](const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };

  std::vector<std::optional<detail::FrameOutput>> slots(nframes);
  std::vector<std::string> errors(nframes);

  auto process_frame = [&](std::size_t fi) {
    const WindowSpec& w = windows[fi];
    if (config.on_frame) config.on_frame(w);

    CorrelationFrame cf = correlation_frame(returns, w);
    DistanceFrame df = distance_frame(cf);
    double mean_corr = mean_correlation(cf);
    double entropy = eigen_entropy(cf).entropy;
    PortfolioResult portfolio = min_risk_portfolio(window_covariance(returns, w));

    if (writing && config.emit_frames) {
      std::ofstream out(out_path(frame_csv_name(cf)), std::ios::binary);
      if (!out) throw std::runtime_error("cannot write correlation frame");
      write_frame_csv(cf, returns.meta, out);
    }
    if (writing && config.emit_weights)
      detail::write_weights_csv(returns.meta, portfolio.weights,
                                out_path("weights_" + w.end_date.iso() + ".csv"));

    std::vector<MarketGraph> graphs;
    if (config.method == PipelineConfig::Method::Pmfg) {
      graphs.push_back(build_pmfg(cf, df, returns.meta));
    } else {
      MarketGraph mst = build_mst(df, cf, returns.meta);
      if (config.method == PipelineConfig::Method::Mst) {
        graphs.push_back(std::move(mst));
      } else {
        for (double theta : config.thresholds)
          graphs.push_back(build_threshold_network(mst, cf, theta));
      }
    }

    detail::FrameOutput output;
    output.node_rows.resize(nseries);
    for (std::size_t si = 0; si < graphs.size(); ++si) {
      const MarketGraph& g = graphs[si];
      Eigen::MatrixXd apsp = all_pairs_distances(g);
      CommunityPartition partition = louvain_partition(g);
      IndicatorRecord rec;
      rec.end_date = w.end_date;
      rec.mean_correlation = mean_corr;
      rec.eigen_entropy = entropy;
      rec.min_risk = portfolio.risk;
      rec.graph = graph_scalar_report(g, apsp, partition);
      EdgeCurvatures curv = compute_edge_curvatures(g, apsp, config.hr_max_path);
      auto avg = curvature_frame_averages(curv.ollivier, curv.forman, curv.menger,
                                          curv.haantjes);
      rec.avg_or = avg.avg_or;
      rec.avg_fr = avg.avg_fr;
      rec.avg_mr = avg.avg_mr;
      rec.avg_hr = avg.avg_hr;
      output.records.push_back(rec);

      if (writing && config.emit_graphs) {
        std::string name = "graph_" + w.end_date.iso() + "_" +
                           std::to_string(config.tau);
        if (g.frame.theta)
          name += "_theta" + detail::theta_label(*g.frame.theta);
        else
          name += std::string("_") +
                  (g.kind == GraphKind::PMFG ? "pmfg" : "mst");
        export_graph(g, partition, curv, out_path(name + ".json"));
      }
      if (config.emit_node_series) {
        CentralityVector centrality = eigenvector_centrality(g);
        NodeCurvatures nodes = node_curvature_aggregate(g, curv.ollivier, curv.forman);
        for (int vi = 0; vi < g.vertex_count(); ++vi) {
          std::ostringstream row;
          row << w.end_date.iso() << ','
              << g.vertices[static_cast<std::size_t>(vi)].index_code << ','
              << detail::sig12(centrality.values(vi)) << ','
              << detail::sig12(nodes.or_node[static_cast<std::size_t>(vi)]) << ','
              << detail::sig12(nodes.fr_node[static_cast<std::size_t>(vi)]);
          output.node_rows[si].push_back(row.str());
        }
      }
    }
    slots[fi] = std::move(output);
  };

  unsigned workers = config.threads ? config.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(nframes, 1)));
  if (workers <= 1) {
    for (std::size_t fi = 0; fi < nframes; ++fi) {
      try {
        process_frame(fi);
      } catch (const std::exception& ex) {
        errors[fi] = ex.what();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        while (true) {
          std::size_t fi = next.fetch_add(1);
          if (fi >= nframes) break;
          try {
            process_frame(fi);
          } catch (const std::exception& ex) {
            errors[fi] = ex.what();
          }
        }
      });
    for (auto& th : pool) th.join();
  }

  PipelineResult result;
  result.frame_count = nframes;
  for (std::size_t fi = 0; fi < nframes; ++fi)
    if (!errors[fi].empty()) {
      if (!config.keep_going)
        throw std::runtime_error("frame ending " + windows[fi].end_date.iso() +
                                 ": " + errors[fi]);
      result.failures.push_back(FrameFailure{windows[fi].end_date, errors[fi]});
    }

  result.series.resize(nseries);
  for (std::size_t si = 0; si < nseries; ++si)
    if (config.method == PipelineConfig::Method::MstThreshold)
      result.series[si].theta = config.thresholds[si];
  for (std::size_t fi = 0; fi < nframes; ++fi) {
    if (!slots[fi]) continue;
    for (std::size_t si = 0; si < nseries; ++si)
      result.series[si].records.push_back(slots[fi]->records[si]);
  }

  if (writing) {
    const bool suffixed = nseries > 1;
    for (std::size_t si = 0; si < nseries; ++si) {
      std::string suffix =
          suffixed ? "_" + detail::theta_label(config.thresholds[si]) : "";
      export_indicators(result.series[si], out_path("indicators" + suffix + ".csv"));
      if (config.emit_node_series) {
        std::ofstream out(out_path("node_series" + suffix + ".csv"),
                          std::ios::binary);
        if (!out) throw std::runtime_error("cannot write node series");
        out << "end_date,index_code,eig_centrality,or_node,fr_node\n";
        for (std::size_t fi = 0; fi < nframes; ++fi) {
          if (!slots[fi]) continue;
          for (const auto& row : slots[fi]->node_rows[si]) out << row << '\n';
        }
      }
    }
  }
  return result;
}

}  // namespace fragnet
