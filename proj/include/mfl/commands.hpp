#pragma once

// The four CLI subcommands as library calls, so they can be driven from tests.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mfl/error.hpp"
#include "mfl/experiment.hpp"
#include "mfl/generator.hpp"
#include "mfl/io.hpp"
#include "mfl/model.hpp"
#include "mfl/stats.hpp"
#include "mfl/vnd.hpp"

namespace mfl {

/// Exit status for an error category.
inline int exit_code_for(Errc e) {
  switch (e) {
    case Errc::Io: return 4;
    case Errc::ConstructionFailed:
    case Errc::InadmissibleMove: return 3;
    default: return 2;
  }
}

inline double realized_density(const Matrix<double>& m) {
  std::size_t n = 0;
  for (double v : m.data()) n += v > 0 ? 1 : 0;
  return m.data().empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(m.data().size());
}

/// Writes the instance JSON and prints sizes, realized densities and bounds.
inline Instance cmd_generate(const GeneratorParams& params, const std::string& out_path, std::ostream& log) {
  const Instance in = generate(params);
  io::write_file(out_path, io::dump_instance(in));
  static const char* names[5] = {"R", "D", "W", "P", "S"};
  log << "wrote " << out_path << "\n";
  log << "levels " << in.num_levels << ", density " << in.meta.density << " (" << in.meta.density_class
      << "), fixed costs " << in.meta.fixed_class << ", seed " << in.meta.seed << "\n";
  char buf[128];
  for (int l = 0; l <= in.top(); ++l) {
    if (l == 0) {
      std::snprintf(buf, sizeof buf, "  %s: %d\n", names[l], in.size[l]);
    } else {
      std::snprintf(buf, sizeof buf, "  %s: %d  ub %d  arc density %.4f\n", names[l], in.size[l], in.ub[l],
                    realized_density(in.arc[l]));
    }
    log << buf;
  }
  std::size_t pr = 0;
  for (auto v : in.elig_pr.data()) pr += v;
  std::snprintf(buf, sizeof buf, "  P-R eligibility density %.4f\n",
                static_cast<double>(pr) / static_cast<double>(in.elig_pr.data().size()));
  log << buf;
  return in;
}

struct SolveOptions {
  std::string instance_path;
  std::vector<Variant> variants{Variant::BVND};
  std::uint64_t seed = 0;
  std::optional<double> time_limit;
  std::optional<int> max_local;  // default: from the instance's density class, else 30
  ClockKind clock = ClockKind::Wall;
  int threads = 0;
  bool multi_start_per_variant = false;
  std::string out_path = "result.json";  // traces go next to it as <stem>.<variant>.trace.csv
};

struct SolveOutcome {
  Variant variant;
  VndResult result;
};

/// Multi-start once, then each requested variant. Every solution is
/// re-verified before anything is written.
inline std::vector<SolveOutcome> cmd_solve(const SolveOptions& opt, std::ostream& log) {
  const Instance in = io::load_instance(opt.instance_path);
  VndConfig cfg;
  cfg.max_local = opt.max_local.value_or(30);
  if (!opt.max_local)
    if (auto d = parse_density(in.meta.density_class)) cfg.max_local = max_local_for(*d);
  cfg.master_seed = opt.seed;
  cfg.time_limit = opt.time_limit;
  cfg.clock = opt.clock;
  cfg.threads = opt.threads;
  cfg.record_trace = true;

  std::vector<SolveOutcome> outcomes;
  for (auto& [v, res] : run_variants(in, cfg, opt.variants, opt.multi_start_per_variant)) {
    if (!check_feasible(in, res.solution).empty())
      throw Error(Errc::ConstructionFailed, std::string(variant_name(v)) + " produced an infeasible solution");
    outcomes.push_back({v, std::move(res)});
  }

  namespace fs = std::filesystem;
  const fs::path out(opt.out_path);
  const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  io::json doc;
  doc["instance"] = opt.instance_path;
  doc["seed"] = opt.seed;
  doc["max_local"] = cfg.max_local;
  doc["clock"] = opt.clock == ClockKind::Work ? "work" : "wall";
  doc["multi_start_per_variant"] = opt.multi_start_per_variant;
  doc["results"] = io::json::array();
  for (const auto& o : outcomes) {
    const std::string vname = io::lower(std::string(variant_name(o.variant)));
    const fs::path trace_path = dir / (out.stem().string() + "." + vname + ".trace.csv");
    io::write_file(trace_path.string(), io::trace_to_csv(o.result.trace));
    doc["results"].push_back({{"variant", variant_name(o.variant)},
                              {"objective", io::detail::number(o.result.solution.objective())},
                              {"time_to_best", o.result.trace.time_to_best},
                              {"truncated", o.result.trace.truncated},
                              {"moves", o.result.trace.moves},
                              {"evaluations", o.result.trace.evaluations},
                              {"feasible", true},
                              {"trace", trace_path.filename().string()},
                              {"solution", io::solution_to_json(in, o.result.solution)}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s objective %s time_to_best %.4f%s\n", std::string(variant_name(o.variant)).c_str(),
                  io::format_number(o.result.solution.objective()).c_str(), o.result.trace.time_to_best,
                  o.result.trace.truncated ? " (time limit)" : "");
    log << buf;
  }
  io::write_file(opt.out_path, doc.dump(2) + "\n");
  log << "wrote " << opt.out_path << "\n";
  return outcomes;
}

/// Runs the batch and writes <output_dir>/results.csv. Returns the rows.
inline std::vector<ResultRow> cmd_batch(const ExperimentSpec& spec, std::ostream& log) {
  validate_spec(spec);
  namespace fs = std::filesystem;
  const fs::path dir = spec.output_dir.empty() ? fs::path(".") : fs::path(spec.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  const auto rows = run_batch(spec, [&](const ResultRow& r) {
    log << r.problem_id << (r.ok() ? " ok" : " failed: " + r.error) << "\n";
  });
  const auto path = (dir / "results.csv").string();
  io::write_file(path, results_to_csv(spec.variants, rows));
  log << "wrote " << path << "\n";
  return rows;
}

struct StatsOptions {
  std::string csv_path;
  std::string measure;   // "ofv", "time" or empty for every data column
  std::string out_path;  // writes <out>.json and <out>.txt; empty: print only
};

inline stats::StatReport cmd_stats(const StatsOptions& opt, std::ostream& log) {
  const auto m = io::load_result_csv(opt.csv_path, opt.measure);
  const auto report = stats::compare(m);
  const auto text = io::report_to_text(report);
  log << text;
  if (!opt.out_path.empty()) {
    io::write_file(opt.out_path + ".json", io::report_to_json(report, opt.measure).dump(2) + "\n");
    io::write_file(opt.out_path + ".txt", text);
  }
  return report;
}

}  // namespace mfl
