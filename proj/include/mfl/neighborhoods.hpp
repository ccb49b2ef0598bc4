#pragma once

// k-flip neighborhood system: neighborhood types (level subsets), scan
// sequences, moves, and exact incremental cost deltas.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "mfl/error.hpp"
#include "mfl/model.hpp"
#include "mfl/rng.hpp"

namespace mfl {

/// A nonempty subset of facility levels that a k-flip move replaces.
class NeighborhoodType {
 public:
  constexpr NeighborhoodType() = default;
  constexpr NeighborhoodType(std::initializer_list<Level> levels) {
    for (Level l : levels) mask_ |= bit(l);
  }
  static constexpr NeighborhoodType from_mask(std::uint8_t mask) {
    NeighborhoodType t;
    t.mask_ = mask;
    return t;
  }

  constexpr bool contains(Level l) const { return (mask_ & bit(l)) != 0; }
  constexpr int k() const { return std::popcount(mask_); }
  constexpr std::uint8_t mask() const { return mask_; }

  /// Flipped levels, highest first.
  std::vector<Level> levels_desc() const {
    std::vector<Level> out;
    for (int l = 4; l >= 1; --l)
      if (contains(static_cast<Level>(l))) out.push_back(static_cast<Level>(l));
    return out;
  }

  std::string name() const {
    std::string s = "{";
    for (Level l : levels_desc()) {
      if (s.size() > 1) s += ',';
      s += level_name(l);
    }
    return s + "}";
  }

  friend constexpr bool operator==(NeighborhoodType, NeighborhoodType) = default;

 private:
  static constexpr std::uint8_t bit(Level l) { return static_cast<std::uint8_t>(1u << (idx(l) - 1)); }
  std::uint8_t mask_ = 0;
};

/// N(k): every neighborhood type that flips exactly k levels.
struct Structure {
  int k = 0;
  std::vector<NeighborhoodType> types;
};

/// N(1)..N(max-k) in canonical order: types are level tuples taken top-down
/// (S, P, W, D) in lexicographic order, e.g. {S,P}, {S,W}, {S,D}, {P,W}, ...
inline std::vector<Structure> structures_for(int num_levels) {
  if (num_levels != 4 && num_levels != 5)
    throw Error(Errc::UnsupportedLevelCount, "num_levels must be 4 or 5, got " + std::to_string(num_levels));
  std::vector<Level> top_down;
  for (int l = num_levels - 1; l >= 1; --l) top_down.push_back(static_cast<Level>(l));
  const int n = static_cast<int>(top_down.size());

  std::vector<Structure> out;
  for (int k = 1; k <= n; ++k) {
    Structure st{k, {}};
    // Lexicographic k-combinations of positions 0..n-1.
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i;
    while (true) {
      std::uint8_t mask = 0;
      for (int i : pos) mask |= NeighborhoodType{top_down[i]}.mask();
      st.types.push_back(NeighborhoodType::from_mask(mask));
      int i = k - 1;
      while (i >= 0 && pos[i] == n - k + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
    out.push_back(std::move(st));
  }
  return out;
}

inline int max_k(int num_levels) { return num_levels - 1; }

/// Scan orders for retailers (Lr) and each facility level (Ld, Lw, Lp, Ls).
struct SequenceSet {
  std::array<std::vector<int>, 5> order;  // order[0] = Lr, order[L] for facility level L

  const std::vector<int>& retailers() const { return order[0]; }
  const std::vector<int>& of(Level l) const { return order[idx(l)]; }
};

/// Independent uniform permutations for every level present in the instance.
/// Draw order: Lr, Ld, Lw, Lp, Ls.
inline SequenceSet fresh_sequences(const Instance& in, Rng& rng) {
  SequenceSet s;
  for (int l = 0; l <= in.top(); ++l) s.order[l] = rng.permutation(in.size[l]);
  return s;
}

/// Replace the facilities at a subset of levels on one retailer's path.
class Move {
 public:
  /// Throws IneligibleMove if a replacement equals the current facility, a
  /// level is repeated or absent, or no level is flipped.
  Move(const Instance& in, const Solution& sol, int retailer,
       std::vector<std::pair<Level, int>> replacements)
      : retailer_(retailer) {
    if (retailer < 0 || retailer >= in.retailers())
      throw Error(Errc::IndexOutOfRange, "retailer " + std::to_string(retailer));
    if (replacements.empty()) throw Error(Errc::IneligibleMove, "move flips no level");
    target_ = sol.path(retailer);
    std::uint8_t mask = 0;
    for (auto [level, f] : replacements) {
      if (!in.has(level)) throw Error(Errc::IneligibleMove, "level absent from instance");
      if (f < 0 || f >= in.count(level)) throw Error(Errc::IndexOutOfRange, "replacement facility");
      const auto b = NeighborhoodType{level}.mask();
      if (mask & b) throw Error(Errc::IneligibleMove, "level flipped twice");
      if (target_[level] == f)
        throw Error(Errc::IneligibleMove, "replacement equals current facility at level " +
                                              std::string(level_name(level)));
      mask |= b;
      target_[level] = f;
    }
    type_ = NeighborhoodType::from_mask(mask);
  }

  int retailer() const { return retailer_; }
  NeighborhoodType type() const { return type_; }
  const Path& target() const { return target_; }

 private:
  int retailer_;
  NeighborhoodType type_;
  Path target_;
};

/// Exact objective change of a move and whether every level bound still holds
/// afterwards. Throws IneligibleMove if the resulting path uses a zero-cost arc
/// or a plant the retailer does not accept. The solution is not modified.
inline Reassignment delta_cost(const Instance& in, const Solution& sol, const Move& m) {
  if (!path_eligible(in, m.retailer(), m.target()))
    throw Error(Errc::IneligibleMove, "move for retailer " + std::to_string(m.retailer()) +
                                          " produces an ineligible path");
  return sol.evaluate_reassignment(in, m.retailer(), m.target());
}

/// Applies an admissible move; the objective changes by exactly delta_cost().
inline void apply_move(const Instance& in, Solution& sol, const Move& m) {
  const auto d = delta_cost(in, sol, m);
  if (!d.admissible)
    throw Error(Errc::InadmissibleMove, "move for retailer " + std::to_string(m.retailer()) +
                                            " exceeds an open-facility bound");
  sol.reassign(in, m.retailer(), m.target(), d.delta);
}

namespace detail {

/// Enumerates eligible replacement paths for retailer r under type t, visiting
/// flipped levels outer = higher, each along its scan sequence, skipping the
/// current facility. Arcs are checked as soon as both endpoints are fixed.
/// `visit(const Path&)` returns true to stop the enumeration.
template <typename Visit>
bool enumerate_flips(const Instance& in, int r, const Path& current, NeighborhoodType t,
                     const SequenceSet& seq, Visit&& visit) {
  std::array<Level, 4> lv{};
  int n = 0;
  for (int l = in.top(); l >= 1; --l)
    if (t.contains(static_cast<Level>(l))) lv[n++] = static_cast<Level>(l);
  Path cand = current;
  const int top = in.top();

  auto fits = [&](int l, int f) {
    if (l < top && !(in.arc[l + 1](cand.node[l + 1], f) > 0)) return false;
    if (l == 1) {
      if (!(in.arc[1](f, r) > 0)) return false;
    } else if (!t.contains(static_cast<Level>(l - 1)) && !(in.arc[l](f, cand.node[l - 1]) > 0)) {
      return false;
    }
    if (l == idx(Level::P) && !in.elig_pr(f, r)) return false;
    return true;
  };

  auto rec = [&](auto&& self, int depth) -> bool {
    const int l = idx(lv[depth]);
    const int cur = current.node[l];
    for (int f : seq.order[l]) {
      if (f == cur || !fits(l, f)) continue;
      cand.node[l] = f;
      if (depth + 1 == n ? visit(static_cast<const Path&>(cand)) : self(self, depth + 1)) return true;
    }
    cand.node[l] = cur;
    return false;
  };
  return n > 0 && rec(rec, 0);
}

/// Like enumerate_flips, but only visits candidates that keep every level
/// within its bound and skips subtrees that cannot improve on `sol`: arc and
/// fixed costs are nonnegative, so arcs and openings fixed so far bound the
/// delta from below. The first improving admissible candidate in scan order is
/// the same as with the unpruned enumeration.
template <typename Visit>
bool enumerate_improving(const Instance& in, const Solution& sol, int r, NeighborhoodType t,
                         const SequenceSet& seq, Visit&& visit) {
  const Path& current = sol.path(r);
  const int top = in.top();
  std::array<Level, 4> lv{};
  int n = 0;
  for (int l = top; l >= 1; --l)
    if (t.contains(static_cast<Level>(l))) lv[n++] = static_cast<Level>(l);
  if (n == 0) return false;

  // Arcs between two unflipped nodes and fixed costs released by closing are constant.
  auto flipped = [&](int l) { return l >= 1 && l <= top && t.contains(static_cast<Level>(l)); };
  double base = flipped(1) ? 0.0 : in.arc[1](current.node[1], r);
  for (int l = 2; l <= top; ++l)
    if (!flipped(l) && !flipped(l - 1)) base += in.arc[l](current.node[l], current.node[l - 1]);
  double released = 0.0;
  std::array<bool, 5> may_open{};
  for (int i = 0; i < n; ++i) {
    const int l = idx(lv[i]);
    const bool closes = sol.usage(lv[i], current.node[l]) == 1;
    if (closes) released += in.fixed[l][current.node[l]];
    may_open[l] = closes || sol.open_count(lv[i]) < in.ub[l];
  }
  double old_arc = path_arc_cost(in, r, current);
  const double threshold = old_arc + released + 1e-7 * (1.0 + old_arc + released);

  Path cand = current;
  auto rec = [&](auto&& self, int depth, double partial) -> bool {
    const Level level = lv[depth];
    const int l = idx(level);
    const int cur = current.node[l];
    const bool lower_flipped = flipped(l - 1);
    for (int f : seq.order[l]) {
      if (f == cur) continue;
      const bool opens = sol.usage(level, f) == 0;
      if (opens && !may_open[l]) continue;
      double add = opens ? in.fixed[l][f] : 0.0;
      if (l < top) {
        const double a = in.arc[l + 1](cand.node[l + 1], f);
        if (!(a > 0)) continue;
        add += a;
      }
      if (l == 1) {
        const double a = in.arc[1](f, r);
        if (!(a > 0)) continue;
        add += a;
      } else if (!lower_flipped) {
        const double a = in.arc[l](f, cand.node[l - 1]);
        if (!(a > 0)) continue;
        add += a;
      }
      if (l == idx(Level::P) && !in.elig_pr(f, r)) continue;
      if (partial + add >= threshold) continue;
      cand.node[l] = f;
      if (depth + 1 == n ? visit(static_cast<const Path&>(cand)) : self(self, depth + 1, partial + add)) return true;
    }
    cand.node[l] = cur;
    return false;
  };
  return rec(rec, 0, base);
}

}  // namespace detail

}  // namespace mfl
