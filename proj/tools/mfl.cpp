#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfl/mfl.hpp"

namespace {

struct SizeFlags {
  int levels = 4;
  std::optional<int> R, D, W, P, S;

  void add(CLI::App* cmd) {
    cmd->add_option("--levels", levels, "Number of levels including retailers")->check(CLI::IsMember({4, 5}));
    cmd->add_option("--R", R, "Retailers")->check(CLI::PositiveNumber);
    cmd->add_option("--D", D, "Distribution centers")->check(CLI::PositiveNumber);
    cmd->add_option("--W", W, "Warehouses")->check(CLI::PositiveNumber);
    cmd->add_option("--P", P, "Plants")->check(CLI::PositiveNumber);
    cmd->add_option("--S", S, "Suppliers (5 levels only)")->check(CLI::PositiveNumber);
  }

  mfl::GeneratorParams params() const {
    auto p = mfl::default_params(levels);
    if (R) p.R = *R;
    if (D) p.D = *D;
    if (W) p.W = *W;
    if (P) p.P = *P;
    if (S) p.S = *S;
    return p;
  }
};

const std::vector<std::string> kDensities{"low", "medium", "high"};
const std::vector<std::string> kFixed{"small", "medium", "large"};

std::vector<mfl::Variant> variants_from(const std::string& s) {
  if (s == "all") return {mfl::kAllVariants.begin(), mfl::kAllVariants.end()};
  auto v = mfl::parse_variant(s);
  if (!v) throw mfl::Error(mfl::Errc::InvalidParams, "unknown variant " + s);
  return {*v};
}

mfl::ClockKind clock_from(const std::string& s) {
  return s == "work" ? mfl::ClockKind::Work : mfl::ClockKind::Wall;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level facility location: instance generation, VND solving and result statistics"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random instance");
  SizeFlags gen_sizes;
  gen_sizes.add(gen);
  std::string gen_density = "high", gen_fixed = "large", gen_out = "instance.json";
  std::uint64_t gen_seed = 0;
  gen->add_option("--density", gen_density, "Density class")->check(CLI::IsMember(kDensities));
  gen->add_option("--fixed", gen_fixed, "Fixed-cost class")->check(CLI::IsMember(kFixed));
  gen->add_option("--seed", gen_seed, "Instance seed");
  gen->add_option("--out", gen_out, "Output instance JSON");

  // solve
  auto* sol = app.add_subcommand("solve", "Solve an instance with one or all VND variants");
  std::string solve_instance, solve_variant = "bvnd", solve_clock = "wall", solve_out = "result.json";
  std::uint64_t solve_seed = 0;
  std::optional<double> solve_time_limit;
  std::optional<int> solve_max_local;
  int solve_threads = 0;
  sol->add_option("instance", solve_instance, "Instance JSON")->required();
  sol->add_option("--variant", solve_variant, "bvnd, pvnd, cvnd, uvnd or all")
      ->check(CLI::IsMember({"bvnd", "pvnd", "cvnd", "uvnd", "all"}, CLI::ignore_case));
  sol->add_option("--seed", solve_seed, "Master seed");
  sol->add_option("--time-limit", solve_time_limit, "Time limit in seconds")->check(CLI::PositiveNumber);
  sol->add_option("--max-local", solve_max_local, "Multi-start count")->check(CLI::PositiveNumber);
  sol->add_option("--clock", solve_clock, "wall or work (deterministic evaluation count)")
      ->check(CLI::IsMember({"wall", "work"}));
  sol->add_option("--threads", solve_threads, "Worker threads (0: all cores)");
  bool solve_ms_per_variant = false;
  sol->add_flag("--multi-start-per-variant", solve_ms_per_variant, "Run a separate multi-start for each variant");
  sol->add_option("--out", solve_out, "Result JSON; traces are written next to it");

  // batch
  auto* bat = app.add_subcommand("batch", "Run a seeded experiment grid and write results.csv");
  SizeFlags bat_sizes;
  bat_sizes.add(bat);
  std::vector<std::string> bat_density = kDensities, bat_fixed = kFixed;
  std::string bat_variant = "all", bat_clock = "wall", bat_out = "results";
  std::uint64_t bat_seed = 0;
  int bat_replicates = 3, bat_threads = 0;
  std::optional<double> bat_time_limit;
  std::optional<int> bat_max_local;
  bat->add_option("--density", bat_density, "Density classes (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(kDensities));
  bat->add_option("--fixed", bat_fixed, "Fixed-cost classes (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(kFixed));
  bat->add_option("--replicates", bat_replicates, "Instances per cell")->check(CLI::PositiveNumber);
  bat->add_option("--variant", bat_variant, "bvnd, pvnd, cvnd, uvnd or all")
      ->check(CLI::IsMember({"bvnd", "pvnd", "cvnd", "uvnd", "all"}, CLI::ignore_case));
  bat->add_option("--seed", bat_seed, "Master seed");
  bat->add_option("--time-limit", bat_time_limit, "Time limit per run in seconds")->check(CLI::PositiveNumber);
  bat->add_option("--max-local", bat_max_local, "Multi-start count (default: by density)")
      ->check(CLI::PositiveNumber);
  bat->add_option("--clock", bat_clock, "wall or work (deterministic evaluation count)")
      ->check(CLI::IsMember({"wall", "work"}));
  bat->add_option("--threads", bat_threads, "Worker threads (0: all cores)");
  bool bat_ms_per_variant = false;
  bat->add_flag("--multi-start-per-variant", bat_ms_per_variant, "Run a separate multi-start for each variant");
  bat->add_option("--out", bat_out, "Output directory");

  // stats
  auto* st = app.add_subcommand("stats", "Friedman, Nemenyi and Wilcoxon-Bonferroni on a result CSV");
  std::string stats_csv, stats_measure, stats_out;
  st->add_option("results", stats_csv, "Result CSV")->required();
  st->add_option("--measure", stats_measure, "ofv or time")->check(CLI::IsMember({"ofv", "time"}));
  st->add_option("--out", stats_out, "Output prefix for .json and .txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      auto p = gen_sizes.params();
      p.density_class = *mfl::parse_density(gen_density);
      p.fixed_class = *mfl::parse_fixed(gen_fixed);
      p.seed = gen_seed;
      mfl::cmd_generate(p, gen_out, std::cout);
    } else if (*sol) {
      mfl::SolveOptions o;
      o.instance_path = solve_instance;
      o.variants = variants_from(solve_variant);
      o.seed = solve_seed;
      o.time_limit = solve_time_limit;
      o.max_local = solve_max_local;
      o.clock = clock_from(solve_clock);
      o.threads = solve_threads;
      o.multi_start_per_variant = solve_ms_per_variant;
      o.out_path = solve_out;
      mfl::cmd_solve(o, std::cout);
    } else if (*bat) {
      mfl::ExperimentSpec spec;
      auto base = bat_sizes.params();
      for (const auto& d : bat_density)
        for (const auto& f : bat_fixed) {
          mfl::ExperimentCell cell{base, bat_replicates};
          cell.params.density_class = *mfl::parse_density(d);
          cell.params.fixed_class = *mfl::parse_fixed(f);
          spec.cells.push_back(cell);
        }
      spec.variants = variants_from(bat_variant);
      spec.master_seed = bat_seed;
      spec.time_limit = bat_time_limit;
      spec.max_local = bat_max_local;
      spec.clock = clock_from(bat_clock);
      spec.threads = bat_threads;
      spec.multi_start_per_variant = bat_ms_per_variant;
      spec.output_dir = bat_out;
      const auto rows = mfl::cmd_batch(spec, std::cerr);
      for (const auto& r : rows)
        if (!r.ok()) return 3;
    } else if (*st) {
      mfl::cmd_stats({stats_csv, stats_measure, stats_out}, std::cout);
    }
  } catch (const mfl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mfl::exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [Io]: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
