#pragma once

// Problem instance, per-retailer paths, and the solution state with
// incrementally maintained usage counters and objective.
//
// Levels are numbered bottom-up: 0 = retailers, 1 = distribution centers,
// 2 = warehouses, 3 = plants, 4 = suppliers (5-level instances only).
// Arc matrix `arc[L]` holds the cost of shipping from a level-L facility to a
// level-(L-1) node; an entry of 0 marks the arc as ineligible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mfl/error.hpp"

namespace mfl {

enum class Level : std::uint8_t { D = 1, W = 2, P = 3, S = 4 };

inline constexpr std::array<Level, 4> kFacilityLevels{Level::D, Level::W, Level::P, Level::S};

constexpr int idx(Level l) noexcept { return static_cast<int>(l); }

inline std::string_view level_name(Level l) {
  switch (l) {
    case Level::D: return "D";
    case Level::W: return "W";
    case Level::P: return "P";
    case Level::S: return "S";
  }
  return "?";
}

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T init = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, init) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T operator()(int r, int c) const { return data_[offset(r, c)]; }
  T& operator()(int r, int c) { return data_[offset(r, c)]; }

  std::span<const T> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }
  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t offset(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

struct InstanceMeta {
  std::uint64_t seed = 0;
  std::string density_class;
  std::string fixed_class;
  double density = 0.0;
  std::string rng;

  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

/// Immutable problem data. Construct, call validate(), then share by const reference.
struct Instance {
  int num_levels = 4;
  std::array<int, 5> size{};                 // [0] = R, [1] = D, ..., [4] = S (0 when absent)
  std::array<Matrix<double>, 5> arc;          // arc[L]: size[L] x size[L-1]; arc[0] unused
  Matrix<std::uint8_t> elig_pr;               // P x R
  std::array<std::vector<double>, 5> fixed;   // fixed[L], L >= 1
  std::array<int, 5> ub{};                    // open-facility upper bound per level
  InstanceMeta meta;

  int retailers() const noexcept { return size[0]; }
  int count(Level l) const noexcept { return size[idx(l)]; }
  int top() const noexcept { return num_levels - 1; }
  bool has(Level l) const noexcept { return idx(l) <= top(); }

  std::span<const Level> levels() const noexcept {
    return {kFacilityLevels.data(), static_cast<std::size_t>(top())};
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// One retailer's supply chain: the facility used at each level.
struct Path {
  std::array<std::int32_t, 5> node{-1, -1, -1, -1, -1};  // node[0] unused

  std::int32_t operator[](Level l) const noexcept { return node[idx(l)]; }
  std::int32_t& operator[](Level l) noexcept { return node[idx(l)]; }

  friend bool operator==(const Path&, const Path&) = default;
};

inline Path make_path(int d, int w, int p, int s = -1) {
  Path path;
  path[Level::D] = d;
  path[Level::W] = w;
  path[Level::P] = p;
  path[Level::S] = s;
  return path;
}

/// Structural checks: shapes, nonnegative data, bounds in range. Throws InvalidInstance.
inline void validate_shape(const Instance& in) {
  auto fail = [](const std::string& msg) { throw Error(Errc::InvalidInstance, msg); };
  if (in.num_levels != 4 && in.num_levels != 5) fail("num_levels must be 4 or 5");
  for (int l = 0; l <= in.top(); ++l)
    if (in.size[l] <= 0) fail("level " + std::to_string(l) + " has no nodes");
  if (in.num_levels == 4 && (in.size[4] != 0 || !in.arc[4].empty() || !in.fixed[4].empty()))
    fail("4-level instance carries supplier data");
  for (int l = 1; l <= in.top(); ++l) {
    const auto& m = in.arc[l];
    if (m.rows() != in.size[l] || m.cols() != in.size[l - 1])
      fail("arc matrix for level " + std::to_string(l) + " has wrong shape");
    for (double v : m.data())
      if (!(v >= 0.0) || !std::isfinite(v)) fail("negative or non-finite arc cost");
    if (static_cast<int>(in.fixed[l].size()) != in.size[l])
      fail("fixed-cost vector for level " + std::to_string(l) + " has wrong length");
    for (double v : in.fixed[l])
      if (!(v >= 0.0) || !std::isfinite(v)) fail("negative or non-finite fixed cost");
    if (in.ub[l] < 1 || in.ub[l] > in.size[l])
      fail("upper bound for level " + std::to_string(l) + " outside [1, size]");
  }
  if (in.elig_pr.rows() != in.size[3] || in.elig_pr.cols() != in.size[0])
    fail("elig_PR has wrong shape");
  for (auto v : in.elig_pr.data())
    if (v > 1) fail("elig_PR entries must be 0 or 1");
}

/// Retailers with no fully eligible path (every arc positive, plant allowed).
inline std::vector<int> retailers_without_path(const Instance& in) {
  const int top = in.top();
  const int P = in.size[3], W = in.size[2], D = in.size[1];
  std::vector<char> plant_supplied(P, 1);
  if (top == 4) {
    for (int p = 0; p < P; ++p) {
      plant_supplied[p] = 0;
      for (int s = 0; s < in.size[4] && !plant_supplied[p]; ++s)
        if (in.arc[4](s, p) > 0) plant_supplied[p] = 1;
    }
  }
  std::vector<int> missing;
  std::vector<char> w_ok(W), d_ok(D);
  for (int r = 0; r < in.retailers(); ++r) {
    std::fill(w_ok.begin(), w_ok.end(), 0);
    for (int p = 0; p < P; ++p) {
      if (!plant_supplied[p] || !in.elig_pr(p, r)) continue;
      for (int w = 0; w < W; ++w)
        if (in.arc[3](p, w) > 0) w_ok[w] = 1;
    }
    bool found = false;
    for (int d = 0; d < D && !found; ++d) {
      if (!(in.arc[1](d, r) > 0)) continue;
      for (int w = 0; w < W; ++w)
        if (w_ok[w] && in.arc[2](w, d) > 0) {
          found = true;
          break;
        }
    }
    if (!found) missing.push_back(r);
  }
  return missing;
}

/// Full load-time validation: shape checks plus a path for every retailer.
inline void validate(const Instance& in) {
  validate_shape(in);
  if (auto missing = retailers_without_path(in); !missing.empty())
    throw Error(Errc::InvalidInstance, std::to_string(missing.size()) +
                                           " retailer(s) have no eligible path, first r=" +
                                           std::to_string(missing.front()));
}

inline bool path_in_range(const Instance& in, int r, const Path& path) {
  if (r < 0 || r >= in.retailers()) return false;
  for (Level l : in.levels())
    if (path[l] < 0 || path[l] >= in.count(l)) return false;
  return true;
}

inline void require_in_range(const Instance& in, int r, const Path& path) {
  if (!path_in_range(in, r, path))
    throw Error(Errc::IndexOutOfRange, "path of retailer " + std::to_string(r) + " out of range");
}

/// Sum of arc costs along the path; ineligible arcs contribute 0.
inline double path_arc_cost(const Instance& in, int r, const Path& path) {
  double c = in.arc[1](path.node[1], r);
  for (int l = 2; l <= in.top(); ++l) c += in.arc[l](path.node[l], path.node[l - 1]);
  return c;
}

inline bool path_eligible(const Instance& in, int r, const Path& path) {
  if (!(in.arc[1](path.node[1], r) > 0)) return false;
  for (int l = 2; l <= in.top(); ++l)
    if (!(in.arc[l](path.node[l], path.node[l - 1]) > 0)) return false;
  return in.elig_pr(path.node[3], r) != 0;
}

/// Arc costs over all paths plus fixed costs of every facility used at least once.
inline double evaluate_full(const Instance& in, std::span<const Path> paths) {
  if (static_cast<int>(paths.size()) != in.retailers())
    throw Error(Errc::IndexOutOfRange, "expected one path per retailer");
  std::array<std::vector<char>, 5> used;
  for (int l = 1; l <= in.top(); ++l) used[l].assign(in.size[l], 0);
  double total = 0.0;
  for (int r = 0; r < in.retailers(); ++r) {
    require_in_range(in, r, paths[r]);
    total += path_arc_cost(in, r, paths[r]);
    for (int l = 1; l <= in.top(); ++l) used[l][paths[r].node[l]] = 1;
  }
  for (int l = 1; l <= in.top(); ++l)
    for (int f = 0; f < in.size[l]; ++f)
      if (used[l][f]) total += in.fixed[l][f];
  return total;
}

/// Cost change and bound admissibility of rerouting one retailer.
struct Reassignment {
  double delta = 0.0;
  bool admissible = false;
};

class Solution;
Solution rebuild_counters(const Instance& in, std::vector<Path> paths);

/// Per-retailer paths with usage counters, open counts and a cached objective.
/// A facility is open exactly when its usage counter is positive.
class Solution {
 public:
  Solution() = default;

  int retailers() const noexcept { return static_cast<int>(paths_.size()); }
  const std::vector<Path>& paths() const noexcept { return paths_; }
  const Path& path(int r) const { return paths_[r]; }
  int usage(Level l, int f) const { return usage_[idx(l)][f]; }
  bool is_open(Level l, int f) const { return usage(l, f) > 0; }
  int open_count(Level l) const { return open_[idx(l)]; }
  double objective() const noexcept { return objective_; }

  /// Delta and admissibility of replacing retailer r's path with `to`.
  /// Eligibility of `to` is the caller's responsibility.
  Reassignment evaluate_reassignment(const Instance& in, int r, const Path& to) const {
    const Path& from = paths_[r];
    double delta = path_arc_cost(in, r, to) - path_cost_[r];
    bool admissible = true;
    for (int l = 1; l <= in.top(); ++l) {
      const int a = from.node[l], b = to.node[l];
      if (a == b) continue;
      const bool closes = usage_[l][a] == 1;
      const bool opens = usage_[l][b] == 0;
      if (closes) delta -= in.fixed[l][a];
      if (opens) delta += in.fixed[l][b];
      if (open_[l] + (opens ? 1 : 0) - (closes ? 1 : 0) > in.ub[l]) admissible = false;
    }
    return {delta, admissible};
  }

  /// Reroute retailer r to `to`, applying a delta computed by evaluate_reassignment.
  void reassign(const Instance& in, int r, const Path& to, double delta) {
    Path& from = paths_[r];
    for (int l = 1; l <= in.top(); ++l) {
      const int a = from.node[l], b = to.node[l];
      if (a == b) continue;
      if (--usage_[l][a] == 0) --open_[l];
      if (usage_[l][b]++ == 0) ++open_[l];
    }
    from = to;
    path_cost_[r] = path_arc_cost(in, r, to);
    objective_ += delta;
  }

  /// Incremental reroute without a precomputed delta.
  void reassign(const Instance& in, int r, const Path& to) {
    reassign(in, r, to, evaluate_reassignment(in, r, to).delta);
  }

 private:
  friend Solution rebuild_counters(const Instance& in, std::vector<Path> paths);

  std::vector<Path> paths_;
  std::vector<double> path_cost_;
  std::array<std::vector<int>, 5> usage_;
  std::array<int, 5> open_{};
  double objective_ = 0.0;
};

/// Builds a Solution from scratch; counters and objective are recomputed, not trusted.
inline Solution rebuild_counters(const Instance& in, std::vector<Path> paths) {
  Solution s;
  s.objective_ = evaluate_full(in, paths);  // also range-checks every path
  for (int l = 1; l <= in.top(); ++l) s.usage_[l].assign(in.size[l], 0);
  s.path_cost_.resize(paths.size());
  for (int r = 0; r < in.retailers(); ++r) {
    s.path_cost_[r] = path_arc_cost(in, r, paths[r]);
    for (int l = 1; l <= in.top(); ++l) ++s.usage_[l][paths[r].node[l]];
  }
  for (int l = 1; l <= in.top(); ++l)
    s.open_[l] = static_cast<int>(std::count_if(s.usage_[l].begin(), s.usage_[l].end(),
                                                [](int u) { return u > 0; }));
  s.paths_ = std::move(paths);
  return s;
}

enum class ViolationKind { IneligibleArc, PlantIneligible, OpenBoundExceeded };

inline std::string_view violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::IneligibleArc: return "IneligibleArc";
    case ViolationKind::PlantIneligible: return "PlantIneligible";
    case ViolationKind::OpenBoundExceeded: return "OpenBoundExceeded";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  int retailer;  // -1 for level-wide violations
  Level level;   // for arcs: the upper endpoint's level

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// All feasibility violations, ordered by retailer then level; bound violations last.
/// Open counts are recounted from the paths rather than read from the counters.
inline std::vector<Violation> check_feasible(const Instance& in, const Solution& sol) {
  if (sol.retailers() != in.retailers())
    throw Error(Errc::IndexOutOfRange, "solution has wrong number of paths");
  std::vector<Violation> out;
  std::array<std::vector<char>, 5> used;
  for (int l = 1; l <= in.top(); ++l) used[l].assign(in.size[l], 0);
  for (int r = 0; r < in.retailers(); ++r) {
    const Path& path = sol.path(r);
    require_in_range(in, r, path);
    if (!(in.arc[1](path.node[1], r) > 0)) out.push_back({ViolationKind::IneligibleArc, r, Level::D});
    for (int l = 2; l <= in.top(); ++l) {
      if (!(in.arc[l](path.node[l], path.node[l - 1]) > 0))
        out.push_back({ViolationKind::IneligibleArc, r, static_cast<Level>(l)});
      if (l == idx(Level::P) && !in.elig_pr(path.node[l], r))
        out.push_back({ViolationKind::PlantIneligible, r, Level::P});
    }
    for (int l = 1; l <= in.top(); ++l) used[l][path.node[l]] = 1;
  }
  for (int l = 1; l <= in.top(); ++l) {
    const auto open = std::count(used[l].begin(), used[l].end(), 1);
    if (open > in.ub[l]) out.push_back({ViolationKind::OpenBoundExceeded, -1, static_cast<Level>(l)});
  }
  return out;
}

}  // namespace mfl
