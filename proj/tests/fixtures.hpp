#pragma once

// Hand-built instances and independent brute-force oracles shared by the tests.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mfl/mfl.hpp"

namespace fx {

using mfl::Instance;
using mfl::Level;
using mfl::Matrix;
using mfl::Path;

/// 5-level instance with the given sizes; every arc ineligible, every plant
/// ineligible, fixed costs zero, bounds equal to the level sizes.
inline Instance blank(int R, int D, int W, int P, int S) {
  Instance in;
  in.num_levels = S > 0 ? 5 : 4;
  in.size = {R, D, W, P, S};
  for (int l = 1; l <= in.top(); ++l) {
    in.arc[l] = Matrix<double>(in.size[l], in.size[l - 1], 0.0);
    in.fixed[l].assign(in.size[l], 0.0);
    in.ub[l] = in.size[l];
  }
  in.elig_pr = Matrix<std::uint8_t>(P, R, 0);
  return in;
}

/// One retailer, one facility per level: DR=5, WD=100, PW=5, SP=5, fixed 50/100/200/20.
inline Instance t1() {
  Instance in = blank(1, 1, 1, 1, 1);
  in.arc[1](0, 0) = 5;
  in.arc[2](0, 0) = 100;
  in.arc[3](0, 0) = 5;
  in.arc[4](0, 0) = 5;
  in.elig_pr(0, 0) = 1;
  in.fixed[1] = {50};
  in.fixed[2] = {100};
  in.fixed[3] = {200};
  in.fixed[4] = {20};
  return in;
}

/// T1 plus a second distribution center: DR=7, WD=100, fixed 60.
inline Instance t2(int retailers = 1) {
  Instance in = blank(retailers, 2, 1, 1, 1);
  for (int r = 0; r < retailers; ++r) {
    in.arc[1](0, r) = 5;
    in.arc[1](1, r) = 7;
    in.elig_pr(0, r) = 1;
  }
  in.arc[2](0, 0) = 100;
  in.arc[2](0, 1) = 100;
  in.arc[3](0, 0) = 5;
  in.arc[4](0, 0) = 5;
  in.fixed[1] = {50, 60};
  in.fixed[2] = {100};
  in.fixed[3] = {200};
  in.fixed[4] = {20};
  return in;
}

/// Two retailers, two distribution centers, single facilities above. The
/// assignments (r1,r2) -> (d1,d1)=16, (d1,d2)=15, (d2,d1)=32, (d2,d2)=29 in
/// the distribution tier; (d1,d2) is the only 1-flip local optimum, reached
/// from (d1,d1) by moving r2 to d2.
inline Instance b1() {
  Instance in = blank(2, 2, 1, 1, 1);
  in.arc[1](0, 0) = 5;
  in.arc[1](0, 1) = 10;
  in.arc[1](1, 0) = 20;
  in.arc[1](1, 1) = 8;
  in.arc[2](0, 0) = 100;
  in.arc[2](0, 1) = 100;
  in.arc[3](0, 0) = 5;
  in.arc[4](0, 0) = 5;
  in.elig_pr(0, 0) = in.elig_pr(0, 1) = 1;
  in.fixed[1] = {1, 1};
  in.fixed[2] = {100};
  in.fixed[3] = {200};
  in.fixed[4] = {20};
  return in;
}

/// Objective recomputed from first principles (independent of the library).
inline double objective(const Instance& in, const std::vector<Path>& paths) {
  double total = 0.0;
  std::vector<std::vector<char>> used(5);
  for (int l = 1; l <= in.top(); ++l) used[l].assign(in.size[l], 0);
  for (int r = 0; r < static_cast<int>(paths.size()); ++r) {
    const Path& p = paths[r];
    total += in.arc[1](p.node[1], r);
    for (int l = 2; l <= in.top(); ++l) total += in.arc[l](p.node[l], p.node[l - 1]);
    for (int l = 1; l <= in.top(); ++l) used[l][p.node[l]] = 1;
  }
  for (int l = 1; l <= in.top(); ++l)
    for (int f = 0; f < in.size[l]; ++f)
      if (used[l][f]) total += in.fixed[l][f];
  return total;
}

inline bool eligible(const Instance& in, int r, const Path& p) {
  if (!(in.arc[1](p.node[1], r) > 0)) return false;
  for (int l = 2; l <= in.top(); ++l)
    if (!(in.arc[l](p.node[l], p.node[l - 1]) > 0)) return false;
  return in.elig_pr(p.node[3], r) != 0;
}

inline bool within_bounds(const Instance& in, const std::vector<Path>& paths) {
  for (int l = 1; l <= in.top(); ++l) {
    std::vector<char> used(in.size[l], 0);
    for (const auto& p : paths) used[p.node[l]] = 1;
    if (std::count(used.begin(), used.end(), 1) > in.ub[l]) return false;
  }
  return true;
}

/// Every eligible path of retailer r.
inline std::vector<Path> eligible_paths(const Instance& in, int r) {
  std::vector<Path> out;
  const int S = in.top() == 4 ? in.size[4] : 1;
  for (int s = 0; s < S; ++s)
    for (int p = 0; p < in.size[3]; ++p)
      for (int w = 0; w < in.size[2]; ++w)
        for (int d = 0; d < in.size[1]; ++d) {
          Path path = mfl::make_path(d, w, p, in.top() == 4 ? s : -1);
          if (eligible(in, r, path)) out.push_back(path);
        }
  return out;
}

/// Optimum by literal enumeration of every combination of eligible paths.
/// Returns nullopt if the search space exceeds `limit` assignments.
inline std::optional<double> optimum_by_assignments(const Instance& in, double limit = 2e6) {
  std::vector<std::vector<Path>> options;
  double space = 1.0;
  for (int r = 0; r < in.retailers(); ++r) {
    options.push_back(eligible_paths(in, r));
    space *= static_cast<double>(options.back().size());
  }
  if (space > limit) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Path> cur(in.retailers());
  auto rec = [&](auto&& self, int r) -> void {
    if (r == in.retailers()) {
      if (within_bounds(in, cur)) best = std::min(best, objective(in, cur));
      return;
    }
    for (const auto& p : options[r]) {
      cur[r] = p;
      self(self, r + 1);
    }
  };
  rec(rec, 0);
  return best;
}

/// Optimum by enumerating every open subset per level within its bound; each
/// retailer then takes its cheapest path inside the subsets.
inline double optimum_by_open_sets(const Instance& in) {
  const int top = in.top();
  std::vector<std::vector<Path>> options;
  for (int r = 0; r < in.retailers(); ++r) options.push_back(eligible_paths(in, r));
  double best = std::numeric_limits<double>::infinity();
  std::array<std::uint32_t, 5> mask{};
  auto rec = [&](auto&& self, int l) -> void {
    if (l > top) {
      double total = 0.0;
      for (int k = 1; k <= top; ++k)
        for (int f = 0; f < in.size[k]; ++f)
          if (mask[k] >> f & 1u) total += in.fixed[k][f];
      for (int r = 0; r < in.retailers(); ++r) {
        double cheapest = std::numeric_limits<double>::infinity();
        for (const auto& p : options[r]) {
          bool inside = true;
          for (int k = 1; k <= top; ++k) inside = inside && (mask[k] >> p.node[k] & 1u);
          if (!inside) continue;
          double c = in.arc[1](p.node[1], r);
          for (int k = 2; k <= top; ++k) c += in.arc[k](p.node[k], p.node[k - 1]);
          cheapest = std::min(cheapest, c);
        }
        total += cheapest;
      }
      best = std::min(best, total);
      return;
    }
    for (std::uint32_t m = 1; m < (1u << in.size[l]); ++m) {
      if (std::popcount(m) > in.ub[l]) continue;
      mask[l] = m;
      self(self, l + 1);
    }
  };
  rec(rec, 1);
  return best;
}

/// True if no admissible 1-flip move improves `paths` (brute force).
inline bool one_flip_local(const Instance& in, const std::vector<Path>& paths) {
  const double base = objective(in, paths);
  auto trial = paths;
  for (int r = 0; r < in.retailers(); ++r)
    for (int l = 1; l <= in.top(); ++l)
      for (int f = 0; f < in.size[l]; ++f) {
        if (f == paths[r].node[l]) continue;
        trial[r].node[l] = f;
        if (eligible(in, r, trial[r]) && within_bounds(in, trial) && objective(in, trial) < base) return false;
        trial[r] = paths[r];
      }
  return true;
}

/// Random tiny instance (R <= 6, D, W <= 3, P, S <= 2) that passes validation.
inline Instance random_tiny(std::uint64_t seed, int num_levels = 5) {
  mfl::Rng rng(seed);
  for (;;) {
    const int R = static_cast<int>(rng.uniform_int(2, 6));
    const int D = static_cast<int>(rng.uniform_int(1, 3));
    const int W = static_cast<int>(rng.uniform_int(1, 3));
    const int P = static_cast<int>(rng.uniform_int(1, 2));
    const int S = num_levels == 5 ? static_cast<int>(rng.uniform_int(1, 2)) : 0;
    Instance in = blank(R, D, W, P, S);
    for (int l = 1; l <= in.top(); ++l) {
      for (int i = 0; i < in.size[l]; ++i)
        for (int j = 0; j < in.size[l - 1]; ++j)
          if (rng.bernoulli(0.7)) in.arc[l](i, j) = static_cast<double>(rng.uniform_int(1, 60));
      for (auto& f : in.fixed[l]) f = static_cast<double>(rng.uniform_int(0, 80));
      in.ub[l] = static_cast<int>(rng.uniform_int(1, in.size[l]));
    }
    for (int p = 0; p < P; ++p)
      for (int r = 0; r < R; ++r) in.elig_pr(p, r) = rng.bernoulli(0.8) ? 1 : 0;
    if (!mfl::retailers_without_path(in).empty()) continue;
    if (!std::isfinite(optimum_by_open_sets(in))) continue;  // no bound-feasible assignment
    return in;
  }
}

/// Generated instance with loose bounds, for move-level tests.
inline Instance random_medium(std::uint64_t seed, int num_levels, int R = 40) {
  auto p = mfl::default_params(num_levels);
  p.R = R;
  p.D = 12;
  p.W = 8;
  p.P = 6;
  p.S = 5;
  p.density_override = 0.6;
  p.seed = seed;
  Instance in = mfl::generate(p);
  for (int l = 1; l <= in.top(); ++l) in.ub[l] = std::max(1, in.size[l] - 1);
  return in;
}

}  // namespace fx
