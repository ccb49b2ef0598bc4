#pragma once

// Reproducible experiment batches: problem ids, per-row seeding and the
// result table (one row per instance, objective and time per variant).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfl/error.hpp"
#include "mfl/generator.hpp"
#include "mfl/io.hpp"
#include "mfl/model.hpp"
#include "mfl/rng.hpp"
#include "mfl/vnd.hpp"

namespace mfl {

/// `R-D-W-P[-S]-<Hdens|Mdens|Ldens>-<SmFx|MedFx|LgFx>-<replicate>`.
inline std::string problem_id(const GeneratorParams& p, int replicate) {
  std::string id = std::to_string(p.R) + "-" + std::to_string(p.D) + "-" + std::to_string(p.W) + "-" +
                   std::to_string(p.P);
  if (p.num_levels == 5) id += "-" + std::to_string(p.S);
  id += "-" + std::string(density_token(p.density_class)) + "-" + std::string(fixed_token(p.fixed_class)) + "-" +
        std::to_string(replicate);
  return id;
}

struct ParsedProblemId {
  int num_levels = 4;
  int R = 0, D = 0, W = 0, P = 0, S = 0;
  DensityClass density_class = DensityClass::High;
  FixedClass fixed_class = FixedClass::Large;
  int replicate = 0;
};

/// Accepts both the "dens" and "dend" density spellings.
inline ParsedProblemId parse_problem_id(std::string_view id) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : id) {
    if (c == '-') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  auto bad = [&] { return Error(Errc::InvalidParams, "malformed problem id: " + std::string(id)); };
  if (parts.size() != 7 && parts.size() != 8) throw bad();
  auto num = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
    return std::stoi(s);
  };
  ParsedProblemId out;
  out.num_levels = parts.size() == 8 ? 5 : 4;
  out.R = num(parts[0]);
  out.D = num(parts[1]);
  out.W = num(parts[2]);
  out.P = num(parts[3]);
  std::size_t i = 4;
  if (out.num_levels == 5) out.S = num(parts[i++]);
  const auto& dens = parts[i++];
  if (dens == "Hdens" || dens == "Hdend") out.density_class = DensityClass::High;
  else if (dens == "Mdens" || dens == "Mdend") out.density_class = DensityClass::Medium;
  else if (dens == "Ldens" || dens == "Ldend") out.density_class = DensityClass::Low;
  else throw bad();
  const auto& fx = parts[i++];
  if (fx == "SmFx") out.fixed_class = FixedClass::Small;
  else if (fx == "MedFx") out.fixed_class = FixedClass::Medium;
  else if (fx == "LgFx") out.fixed_class = FixedClass::Large;
  else throw bad();
  out.replicate = num(parts[i]);
  return out;
}

struct ExperimentCell {
  GeneratorParams params;  // the seed field is ignored; instance seeds are derived
  int replicates = 3;
};

struct ExperimentSpec {
  std::vector<ExperimentCell> cells;
  std::vector<Variant> variants{kAllVariants.begin(), kAllVariants.end()};
  std::uint64_t master_seed = 0;
  std::optional<double> time_limit;
  std::optional<int> max_local;  // default: max_local_for(density class)
  ClockKind clock = ClockKind::Wall;
  int threads = 0;
  bool multi_start_per_variant = false;  // default: one multi-start shared by all variants
  std::string output_dir;               // where cmd_batch writes results.csv
  MoveObserver on_move;    // optional hook, called after every applied move
};

inline void validate_spec(const ExperimentSpec& s) {
  if (s.cells.empty()) throw Error(Errc::InvalidParams, "experiment has no parameter cells");
  if (s.variants.empty()) throw Error(Errc::InvalidParams, "experiment has no variants");
  for (const auto& c : s.cells) {
    if (c.replicates < 1) throw Error(Errc::InvalidParams, "replicate count must be >= 1");
    validate_params(c.params);
  }
  if (s.max_local && *s.max_local < 1) throw Error(Errc::InvalidParams, "max_local must be >= 1");
  if (s.time_limit && !(*s.time_limit > 0.0)) throw Error(Errc::InvalidParams, "time limit must be positive");
}

struct VariantOutcome {
  double objective = std::numeric_limits<double>::quiet_NaN();
  double time_to_best = std::numeric_limits<double>::quiet_NaN();
  bool truncated = false;
};

struct ResultRow {
  std::string problem_id;
  std::map<Variant, VariantOutcome> results;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// Seed of the instance behind a problem id.
inline std::uint64_t instance_seed(std::uint64_t master, std::string_view id) {
  return derive_seed(master, std::string("instance:") + std::string(id));
}

/// Master seed of a row's searches; each variant derives its own stream from it.
inline std::uint64_t row_seed(std::uint64_t master, std::string_view id) { return derive_seed(master, id); }

/// Generates, solves and verifies one row. Multi-start runs once; each variant
/// descends from its best solution. Errors are caught and stored in the row.
inline ResultRow run_row(const ExperimentSpec& spec, GeneratorParams params, int replicate) {
  ResultRow row;
  row.problem_id = problem_id(params, replicate);
  try {
    params.seed = instance_seed(spec.master_seed, row.problem_id);
    const Instance in = generate(params);
    VndConfig cfg;
    cfg.max_local = spec.max_local.value_or(max_local_for(params.density_class));
    cfg.master_seed = row_seed(spec.master_seed, row.problem_id);
    cfg.time_limit = spec.time_limit;
    cfg.clock = spec.clock;
    cfg.threads = spec.threads;
    cfg.on_move = spec.on_move;
    for (auto& [v, res] : run_variants(in, cfg, spec.variants, spec.multi_start_per_variant)) {
      if (!check_feasible(in, res.solution).empty())
        throw Error(Errc::ConstructionFailed, std::string(variant_name(v)) + " returned an infeasible solution");
      row.results[v] = {res.solution.objective(), res.trace.time_to_best, res.trace.truncated};
    }
  } catch (const std::exception& e) {
    row.results.clear();
    row.error = e.what();
  }
  return row;
}

/// Runs every (cell, replicate) row; rows are returned sorted by problem id.
inline std::vector<ResultRow> run_batch(const ExperimentSpec& spec,
                                        const std::function<void(const ResultRow&)>& progress = {}) {
  validate_spec(spec);
  std::vector<ResultRow> rows;
  for (const auto& cell : spec.cells)
    for (int rep = 1; rep <= cell.replicates; ++rep) {
      rows.push_back(run_row(spec, cell.params, rep));
      if (progress) progress(rows.back());
    }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.problem_id < b.problem_id; });
  return rows;
}

/// Header: problem_id, ofv_<variant>..., time_<variant>..., status. Failed
/// rows carry NA cells and a "failed: ..." status.
inline std::string results_to_csv(const std::vector<Variant>& variants, const std::vector<ResultRow>& rows) {
  auto lower_name = [](Variant v) { return io::lower(std::string(variant_name(v))); };
  std::string out = "problem_id";
  for (Variant v : variants) out += ",ofv_" + lower_name(v);
  for (Variant v : variants) out += ",time_" + lower_name(v);
  out += ",status\n";
  char buf[64];
  for (const auto& row : rows) {
    out += row.problem_id;
    for (Variant v : variants) {
      const auto it = row.results.find(v);
      out += "," + (it == row.results.end() ? std::string("NA") : io::format_number(it->second.objective));
    }
    for (Variant v : variants) {
      const auto it = row.results.find(v);
      if (it == row.results.end()) {
        out += ",NA";
      } else {
        std::snprintf(buf, sizeof buf, ",%.6f", it->second.time_to_best);
        out += buf;
      }
    }
    if (row.ok()) {
      bool truncated = false;
      for (const auto& [v, o] : row.results) truncated = truncated || o.truncated;
      out += truncated ? ",time_limit\n" : ",ok\n";
    } else {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += ",failed: " + msg + "\n";
    }
  }
  return out;
}

/// The full desk- or full-scale grid: every density and fixed class.
inline std::vector<ExperimentCell> full_grid(const GeneratorParams& base, int replicates) {
  std::vector<ExperimentCell> cells;
  for (auto d : {DensityClass::High, DensityClass::Medium, DensityClass::Low})
    for (auto f : {FixedClass::Large, FixedClass::Medium, FixedClass::Small}) {
      ExperimentCell c{base, replicates};
      c.params.density_class = d;
      c.params.fixed_class = f;
      c.params.density_override.reset();
      cells.push_back(c);
    }
  return cells;
}

}  // namespace mfl
