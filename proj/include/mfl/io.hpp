#pragma once

// File formats: instance and solution JSON, trace CSV, result-matrix CSV and
// statistics reports (JSON and a plain-text table).

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mfl/error.hpp"
#include "mfl/model.hpp"
#include "mfl/stats.hpp"
#include "mfl/vnd.hpp"

namespace mfl::io {

using nlohmann::json;

namespace detail {

inline json number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

inline json matrix_to_json(const Matrix<double>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (double v : m.row(i)) row.push_back(number(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
Matrix<T> matrix_from_json(const json& j, int rows, int cols, std::string_view name) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw Error(Errc::InvalidInstance, std::string(name) + ": expected " + std::to_string(rows) + " rows");
  Matrix<T> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw Error(Errc::InvalidInstance, std::string(name) + ": row " + std::to_string(i) + " has wrong length");
    for (int c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw Error(Errc::InvalidInstance, std::string(name) + ": non-numeric entry");
      m(i, c) = static_cast<T>(row[c].get<double>());
    }
  }
  return m;
}

inline const char* kLevelSuffix[5] = {"R", "D", "W", "P", "S"};
inline const char* kArcName[5] = {"", "cost_DR", "cost_WD", "cost_PW", "cost_SP"};

}  // namespace detail

inline json instance_to_json(const Instance& in) {
  json j;
  j["num_levels"] = in.num_levels;
  for (int l = 0; l <= 4; ++l) j[detail::kLevelSuffix[l]] = in.size[l];
  for (int l = 1; l <= 4; ++l) j[detail::kArcName[l]] = l <= in.top() ? detail::matrix_to_json(in.arc[l]) : json::array();
  json pr = json::array();
  for (int p = 0; p < in.elig_pr.rows(); ++p) {
    json row = json::array();
    for (auto v : in.elig_pr.row(p)) row.push_back(static_cast<int>(v));
    pr.push_back(std::move(row));
  }
  j["elig_PR"] = std::move(pr);
  for (int l = 1; l <= 4; ++l) {
    json f = json::array();
    if (l <= in.top())
      for (double v : in.fixed[l]) f.push_back(detail::number(v));
    j[std::string("fixed_") + detail::kLevelSuffix[l]] = std::move(f);
  }
  for (int l = 1; l <= 4; ++l) j[std::string("ub_") + detail::kLevelSuffix[l]] = l <= in.top() ? in.ub[l] : 0;
  j["meta"] = {{"seed", in.meta.seed},
               {"density_class", in.meta.density_class},
               {"fixed_class", in.meta.fixed_class},
               {"density", in.meta.density},
               {"rng", in.meta.rng}};
  return j;
}

/// Parses and fully validates an instance (including per-retailer path existence).
inline Instance instance_from_json(const json& j) {
  try {
    Instance in;
    in.num_levels = j.at("num_levels").get<int>();
    if (in.num_levels != 4 && in.num_levels != 5) throw Error(Errc::InvalidInstance, "num_levels must be 4 or 5");
    for (int l = 0; l <= in.top(); ++l) in.size[l] = j.at(detail::kLevelSuffix[l]).get<int>();
    for (int l = 1; l <= in.top(); ++l)
      in.arc[l] = detail::matrix_from_json<double>(j.at(detail::kArcName[l]), in.size[l], in.size[l - 1],
                                                   detail::kArcName[l]);
    in.elig_pr = detail::matrix_from_json<std::uint8_t>(j.at("elig_PR"), in.size[3], in.size[0], "elig_PR");
    for (int l = 1; l <= in.top(); ++l) {
      in.fixed[l] = j.at(std::string("fixed_") + detail::kLevelSuffix[l]).get<std::vector<double>>();
      in.ub[l] = j.at(std::string("ub_") + detail::kLevelSuffix[l]).get<int>();
    }
    if (j.contains("meta")) {
      const auto& m = j["meta"];
      in.meta.seed = m.value("seed", std::uint64_t{0});
      in.meta.density_class = m.value("density_class", std::string{});
      in.meta.fixed_class = m.value("fixed_class", std::string{});
      in.meta.density = m.value("density", 0.0);
      in.meta.rng = m.value("rng", std::string{});
    }
    validate(in);
    return in;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInstance, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::Io, "cannot write " + path);
  f << content;
  if (!f) throw Error(Errc::Io, "write failed for " + path);
}

inline std::string dump_instance(const Instance& in) { return instance_to_json(in).dump() + "\n"; }

inline Instance load_instance(const std::string& path) {
  const auto text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInstance, path + ": " + e.what());
  }
  return instance_from_json(j);
}

/// {paths: [[s,p,w,d], ...] indexed by retailer, objective}; 4-level paths are [p,w,d].
inline json solution_to_json(const Instance& in, const Solution& sol) {
  json paths = json::array();
  for (const Path& p : sol.paths()) {
    json row = json::array();
    for (int l = in.top(); l >= 1; --l) row.push_back(p.node[l]);
    paths.push_back(std::move(row));
  }
  return {{"paths", std::move(paths)}, {"objective", detail::number(sol.objective())}};
}

inline Solution solution_from_json(const Instance& in, const json& j) {
  std::vector<Path> paths;
  try {
    for (const auto& row : j.at("paths")) {
      if (static_cast<int>(row.size()) != in.top()) throw Error(Errc::IndexOutOfRange, "path has wrong length");
      Path p;
      for (int l = in.top(), i = 0; l >= 1; --l, ++i) p.node[l] = row[i].get<int>();
      paths.push_back(p);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInstance, e.what());
  }
  return rebuild_counters(in, std::move(paths));
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string trace_to_csv(const SearchTrace& t) {
  std::string out = "elapsed_s,objective\n";
  char buf[96];
  for (const auto& pt : t.points) {
    std::snprintf(buf, sizeof buf, "%.6f,%s\n", pt.elapsed, format_number(pt.objective).c_str());
    out += buf;
  }
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r\"");
    const auto e = cell.find_last_not_of(" \t\r\"");
    cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// Reads a result CSV: header row of column names, first column = instance id.
/// With a measure ("ofv" or "time"), only columns named `<measure>_<label>` are
/// used and the prefix is stripped; if no column carries the prefix, every data
/// column is used. Missing or non-numeric cells become NaN (rejected later).
inline stats::ResultMatrix parse_result_csv(std::string_view text, std::string_view measure = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.size() < 2) throw Error(Errc::IncompleteMatrix, "result CSV needs an id column and data columns");

  std::vector<int> cols;
  stats::ResultMatrix m;
  const std::string prefix = measure.empty() ? std::string{} : lower(std::string(measure)) + "_";
  if (!prefix.empty()) {
    for (int c = 1; c < static_cast<int>(header.size()); ++c) {
      const auto name = lower(header[c]);
      if (name.rfind(prefix, 0) == 0) {
        cols.push_back(c);
        auto label = header[c].substr(prefix.size());
        for (auto& ch : label) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        m.labels.push_back(label);
      }
    }
  }
  if (cols.empty()) {
    for (int c = 1; c < static_cast<int>(header.size()); ++c) {
      if (lower(header[c]) == "status") continue;
      cols.push_back(c);
      m.labels.push_back(header[c]);
    }
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    m.row_ids.push_back(cells.empty() ? std::string{} : cells[0]);
    std::vector<double> row;
    for (int c : cols) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (c < static_cast<int>(cells.size()) && !cells[c].empty()) {
        char* end = nullptr;
        const double parsed = std::strtod(cells[c].c_str(), &end);
        if (end && *end == '\0') v = parsed;
      }
      row.push_back(v);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

inline stats::ResultMatrix load_result_csv(const std::string& path, std::string_view measure = {}) {
  return parse_result_csv(read_file(path), measure);
}

namespace detail {
inline json pmatrix_to_json(const stats::PMatrix& p) {
  json rows = json::array();
  for (const auto& r : p) {
    json row = json::array();
    for (double v : r) row.push_back(std::isnan(v) ? json(nullptr) : json(v));
    rows.push_back(std::move(row));
  }
  return rows;
}
}  // namespace detail

inline json report_to_json(const stats::StatReport& r, std::string_view measure = {}) {
  json j;
  if (!measure.empty()) j["measure"] = std::string(measure);
  j["labels"] = r.labels;
  j["rows"] = r.n;
  j["mean_ranks"] = r.mean_ranks;
  j["ranks"] = r.ranks;
  j["friedman"] = {{"chi2", r.friedman.chi2},
                   {"df", r.friedman.df},
                   {"p", r.friedman.p},
                   {"log10_p", r.friedman.log10_p}};
  j["nemenyi_p"] = detail::pmatrix_to_json(r.nemenyi_p);
  j["wilcoxon_bonferroni_p"] = detail::pmatrix_to_json(r.wilcoxon_bonferroni_p);
  return j;
}

namespace detail {

inline std::string format_p(double p) {
  char buf[32];
  if (p == 0.0) return "0";
  if (p >= 0.001) std::snprintf(buf, sizeof buf, "%.3f", p);
  else std::snprintf(buf, sizeof buf, "%.2E", p);
  return buf;
}

inline std::string p_table(const std::vector<std::string>& labels, const stats::PMatrix& p) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "";
  for (const auto& l : labels) os << std::setw(12) << l;
  os << "\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << std::setw(10) << labels[i];
    for (std::size_t j = 0; j < labels.size(); ++j) os << std::setw(12) << (i == j ? "" : format_p(p[i][j]));
    os << "\n";
  }
  return os.str();
}

}  // namespace detail

/// Plain-text report: Friedman summary, Nemenyi and Wilcoxon-Bonferroni tables.
inline std::string report_to_text(const stats::StatReport& r) {
  std::ostringstream os;
  std::string names;
  for (std::size_t i = 0; i < r.labels.size(); ++i) names += (i ? ", " : "") + r.labels[i];
  char buf[128];
  os << "Friedman's Test for " << names << "\n";
  os << "Number of complete experiments (blocks/rows): " << r.n << "\n";
  os << "Number of algorithms (groups/columns): " << r.labels.size() << "\n";
  std::snprintf(buf, sizeof buf, "%.3f", r.friedman.chi2);
  os << "Friedman chi-squared statistic: " << buf << "\n";
  os << "Degrees of freedom: " << r.friedman.df << "\n";
  if (r.friedman.p > 0.0) std::snprintf(buf, sizeof buf, "%.3E", r.friedman.p);
  else std::snprintf(buf, sizeof buf, "1E%.1f", r.friedman.log10_p);
  os << "P-value: " << buf << "\n\n";
  os << "Mean ranks:";
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    std::snprintf(buf, sizeof buf, " %s=%.4f", r.labels[i].c_str(), r.mean_ranks[i]);
    os << buf;
  }
  os << "\n\n--- Post-Hoc Analysis ---\n\n";
  os << "Nemenyi's Post-Hoc Test Results (pairwise p-values):\n\n";
  os << detail::p_table(r.labels, r.nemenyi_p) << "\n";
  os << "Pairwise Wilcoxon Test with Bonferroni Correction (p-values):\n\n";
  os << detail::p_table(r.labels, r.wilcoxon_bonferroni_p);
  return os.str();
}

}  // namespace mfl::io
