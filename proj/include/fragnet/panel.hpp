// panel.hpp
// Loading, validation and cleaning of daily closing-price panels, and the
// derived log-return panel.
//
// Price file format: UTF-8 delimited text, first column `date` (ISO-8601),
// one column per index code, decimal point '.', empty cell = missing close.
// Any cell that does not parse as a finite number also counts as missing.
// Metadata file columns: index_code,country,country_code,region_code,region.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fragnet/date.hpp"

namespace fragnet {

struct IndexMeta {
  std::string index_code;
  std::string country;
  std::string country_code;
  std::string region_code;  // NA, SA, AP, EME or AME
  std::string region;
};

// Dated N x T matrix of closing prices. Missing closes are NaN until the
// panel is cleaned; afterwards every entry is a positive real.
struct PricePanel {
  std::vector<Date> dates;    // strictly increasing, size T
  Eigen::MatrixXd prices;     // N x T
  std::vector<IndexMeta> meta;
  bool cleaned = false;
  std::vector<std::string> warnings;

  Eigen::Index index_count() const { return prices.rows(); }
  Eigen::Index day_count() const { return prices.cols(); }
};

// Log returns r_j(t) = ln g_j(t) - ln g_j(t-1); each return is stamped with
// the later of the two dates.
struct ReturnPanel {
  std::vector<Date> dates;    // size T-1
  Eigen::MatrixXd returns;    // N x (T-1)
  std::vector<IndexMeta> meta;

  Eigen::Index index_count() const { return returns.rows(); }
  Eigen::Index day_count() const { return returns.cols(); }
};

namespace detail {

inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline void strip_bom(std::string& s) {
  if (s.rfind("\xEF\xBB\xBF", 0) == 0) s.erase(0, 3);
}

// Empty or non-numeric cells mark a not-operative market; a parseable but
// non-positive or non-finite close is a data error.
inline double parse_price_cell(const std::string& cell, int line_no,
                               const std::string& code) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size())
    return std::numeric_limits<double>::quiet_NaN();
  if (!std::isfinite(v))
    return std::numeric_limits<double>::quiet_NaN();
  if (v <= 0.0)
    throw std::invalid_argument("non-positive price " + cell + " for index " +
                                code + " at line " + std::to_string(line_no));
  return v;
}

}  // namespace detail

inline std::vector<IndexMeta> load_index_meta(std::istream& meta_source) {
  std::string line;
  if (!detail::read_line(meta_source, line))
    throw std::invalid_argument("metadata file is empty");
  detail::strip_bom(line);
  auto header = detail::split_csv_line(line);
  static const std::array<const char*, 5> wanted = {
      "index_code", "country", "country_code", "region_code", "region"};
  std::array<int, 5> col{};
  col.fill(-1);
  for (size_t i = 0; i < header.size(); ++i)
    for (size_t w = 0; w < wanted.size(); ++w)
      if (header[i] == wanted[w]) col[w] = static_cast<int>(i);
  for (size_t w = 0; w < wanted.size(); ++w)
    if (col[w] < 0)
      throw std::invalid_argument(std::string("metadata file is missing column ") +
                                  wanted[w]);

  static const std::array<const char*, 5> regions = {"NA", "SA", "AP", "EME",
                                                     "AME"};
  std::vector<IndexMeta> out;
  int line_no = 1;
  while (detail::read_line(meta_source, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() < header.size())
      throw std::invalid_argument("metadata line " + std::to_string(line_no) +
                                  " has too few columns");
    IndexMeta m;
    m.index_code = cells[col[0]];
    m.country = cells[col[1]];
    m.country_code = cells[col[2]];
    m.region_code = cells[col[3]];
    m.region = cells[col[4]];
    if (m.index_code.empty())
      throw std::invalid_argument("metadata line " + std::to_string(line_no) +
                                  " has an empty index_code");
    if (std::find(regions.begin(), regions.end(), m.region_code) ==
        regions.end())
      throw std::invalid_argument("unknown region code '" + m.region_code +
                                  "' for index " + m.index_code);
    out.push_back(std::move(m));
  }
  return out;
}

// Loads a raw price panel; missing cells stay marked, dates are sorted
// ascending, metadata is joined by index code.
inline PricePanel load_prices(std::istream& source, std::istream& meta_source) {
  auto meta_list = load_index_meta(meta_source);
  std::unordered_map<std::string, const IndexMeta*> by_code;
  for (const auto& m : meta_list) by_code[m.index_code] = &m;

  std::string line;
  if (!detail::read_line(source, line))
    throw std::invalid_argument("price file is empty");
  detail::strip_bom(line);
  auto header = detail::split_csv_line(line);
  if (header.size() < 3 || header[0] != "date")
    throw std::invalid_argument(
        "price file header must start with `date` and carry at least two index columns");

  std::vector<std::string> codes(header.begin() + 1, header.end());
  {
    auto sorted = codes;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
      throw std::invalid_argument("duplicate index code: " + *dup);
  }

  PricePanel panel;
  for (const auto& code : codes) {
    auto it = by_code.find(code);
    if (it == by_code.end())
      throw std::invalid_argument("index " + code + " absent from metadata");
    panel.meta.push_back(*it->second);
  }

  const size_t n = codes.size();
  std::vector<Date> dates;
  std::vector<std::vector<double>> rows;  // one row per date
  int line_no = 1;
  while (detail::read_line(source, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != n + 1)
      throw std::invalid_argument("price line " + std::to_string(line_no) +
                                  " has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(n + 1));
    dates.push_back(Date::parse(cells[0]));
    std::vector<double> row(n);
    for (size_t j = 0; j < n; ++j)
      row[j] = detail::parse_price_cell(cells[j + 1], line_no, codes[j]);
    rows.push_back(std::move(row));
  }
  if (dates.empty()) throw std::invalid_argument("price file has no data rows");

  std::vector<size_t> order(dates.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return dates[a] < dates[b]; });
  for (size_t k = 1; k < order.size(); ++k)
    if (dates[order[k - 1]] == dates[order[k]])
      throw std::invalid_argument("duplicate date " + dates[order[k]].iso());

  panel.dates.resize(dates.size());
  panel.prices.resize(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(dates.size()));
  for (size_t t = 0; t < order.size(); ++t) {
    panel.dates[t] = dates[order[t]];
    for (size_t j = 0; j < n; ++j)
      panel.prices(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) =
          rows[order[t]][j];
  }
  return panel;
}

// Drops days on which more than `missing_day_fraction` of the markets were
// not operative, then replaces each remaining missing close with the most
// recent prior close. Leading gaps are back-filled from the first available
// close (with a warning). Idempotent on already-clean panels.
inline PricePanel clean_panel(const PricePanel& panel,
                              double missing_day_fraction = 0.30) {
  if (missing_day_fraction < 0.0 || missing_day_fraction > 1.0)
    throw std::invalid_argument("missing_day_fraction must lie in [0,1]");
  const Eigen::Index n = panel.index_count();
  const Eigen::Index t_all = panel.day_count();
  if (n < 2) throw std::invalid_argument("panel needs at least 2 indices");
  if (t_all < 1) throw std::invalid_argument("panel has no days");

  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < t_all; ++t) {
    Eigen::Index missing = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::isnan(panel.prices(j, t))) ++missing;
    double fraction = static_cast<double>(missing) / static_cast<double>(n);
    if (fraction <= missing_day_fraction) keep.push_back(t);
  }
  if (keep.empty()) throw std::invalid_argument("all days removed by cleaning");

  PricePanel out;
  out.meta = panel.meta;
  out.dates.reserve(keep.size());
  for (Eigen::Index t : keep) out.dates.push_back(panel.dates[t]);
  out.prices.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k)
    out.prices.col(static_cast<Eigen::Index>(k)) = panel.prices.col(keep[k]);

  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index first = -1;
    for (Eigen::Index t = 0; t < out.prices.cols(); ++t) {
      if (!std::isnan(out.prices(j, t))) {
        first = t;
        break;
      }
    }
    if (first < 0)
      throw std::invalid_argument("index " + out.meta[j].index_code +
                                  " has no observations");
    if (first > 0) {
      for (Eigen::Index t = 0; t < first; ++t)
        out.prices(j, t) = out.prices(j, first);
      out.warnings.push_back("index " + out.meta[j].index_code + ": first " +
                             std::to_string(first) +
                             " day(s) back-filled from " +
                             out.dates[first].iso());
    }
    for (Eigen::Index t = first + 1; t < out.prices.cols(); ++t)
      if (std::isnan(out.prices(j, t))) out.prices(j, t) = out.prices(j, t - 1);
  }

  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index t = 0; t < out.prices.cols(); ++t)
      if (!(out.prices(j, t) > 0.0))
        throw std::invalid_argument("non-positive price after cleaning for " +
                                    out.meta[j].index_code);
  out.cleaned = true;
  return out;
}

inline ReturnPanel log_returns(const PricePanel& panel) {
  const Eigen::Index n = panel.index_count();
  const Eigen::Index t_all = panel.day_count();
  if (t_all < 2) throw std::invalid_argument("need at least 2 days of prices");
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index t = 0; t < t_all; ++t)
      if (!(panel.prices(j, t) > 0.0) || std::isnan(panel.prices(j, t)))
        throw std::invalid_argument(
            "log_returns requires a cleaned panel of positive prices");

  ReturnPanel out;
  out.meta = panel.meta;
  out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
  out.returns.resize(n, t_all - 1);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index t = 0; t + 1 < t_all; ++t)
      out.returns(j, t) =
          std::log(panel.prices(j, t + 1)) - std::log(panel.prices(j, t));
  return out;
}

}  // namespace fragnet
