#pragma once

// Search procedures: greedy construction, exhaustive and return-on-first
// k-flip descent, multi-start 1-flip descent, and the four VND variants.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mfl/error.hpp"
#include "mfl/model.hpp"
#include "mfl/neighborhoods.hpp"
#include "mfl/rng.hpp"

namespace mfl {

enum class Variant { BVND, PVND, CVND, UVND };

inline constexpr std::array<Variant, 4> kAllVariants{Variant::BVND, Variant::PVND, Variant::CVND,
                                                     Variant::UVND};

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::BVND: return "BVND";
    case Variant::PVND: return "PVND";
    case Variant::CVND: return "CVND";
    case Variant::UVND: return "UVND";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(std::string_view s) {
  for (Variant v : kAllVariants) {
    const auto name = variant_name(v);
    if (s.size() == name.size() &&
        std::equal(s.begin(), s.end(), name.begin(), [](char a, char b) { return std::toupper(a) == b; }))
      return v;
  }
  return std::nullopt;
}

/// Wall: monotonic wall-clock seconds. Work: a deterministic clock that
/// advances by one unit per evaluated neighbor, reported as
/// evaluations / kEvaluationsPerWorkSecond.
enum class ClockKind { Wall, Work };

inline constexpr double kEvaluationsPerWorkSecond = 1e7;

class SearchClock {
 public:
  explicit SearchClock(ClockKind kind = ClockKind::Wall, double offset = 0.0)
      : kind_(kind), offset_(offset), start_(std::chrono::steady_clock::now()) {}

  ClockKind kind() const { return kind_; }
  void tick(std::uint64_t evaluations = 1) { work_ += evaluations; }
  std::uint64_t evaluations() const { return work_; }

  double elapsed() const {
    if (kind_ == ClockKind::Work) return offset_ + static_cast<double>(work_) / kEvaluationsPerWorkSecond;
    return offset_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  ClockKind kind_;
  double offset_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t work_ = 0;
};

/// Called after every applied move with the instance, the solution and the
/// objective before the move. Invoked concurrently from multi-start workers.
using MoveObserver = std::function<void(const Instance& in, const Solution& after, double objective_before)>;

struct VndConfig {
  Variant variant = Variant::BVND;
  int max_local = 30;
  std::uint64_t master_seed = 0;
  std::optional<double> time_limit;  // seconds on the configured clock
  bool record_trace = false;
  ClockKind clock = ClockKind::Wall;
  int threads = 0;  // 0: hardware concurrency, capped by MFL_THREADS
  MoveObserver on_move;
};

inline void validate_config(const VndConfig& c) {
  if (c.max_local < 1) throw Error(Errc::InvalidParams, "max_local must be >= 1");
  if (c.time_limit && !(*c.time_limit > 0.0)) throw Error(Errc::InvalidParams, "time limit must be positive");
}

/// Worker count: the request (or hardware concurrency), capped by MFL_THREADS.
inline int resolve_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("MFL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

struct TracePoint {
  double elapsed = 0.0;
  double objective = 0.0;
};

struct SearchTrace {
  std::vector<TracePoint> points;  // empty unless tracing was requested
  double time_to_best = 0.0;
  double final_objective = 0.0;
  bool truncated = false;
  std::uint64_t moves = 0;
  std::uint64_t evaluations = 0;
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline Bits make_bits(int n) { return Bits(static_cast<std::size_t>((n + 63) / 64), 0); }
inline void set_bit(Bits& b, int i) { b[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
inline void clear_bit(Bits& b, int i) { b[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
inline bool test_bit(const Bits& b, int i) { return (b[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
inline void or_into(Bits& dst, const Bits& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
}
template <typename F>
void for_each_bit(const Bits& b, F&& f) {
  for (std::size_t w = 0; w < b.size(); ++w)
    for (std::uint64_t x = b[w]; x; x &= x - 1) f(static_cast<int>(w * 64 + std::countr_zero(x)));
}

/// Depth-first enumeration of sets H over elements 0..n-1 with |H| <= budget
/// that meet every set in `sets`. Branches on the unmet set with the fewest
/// remaining elements; siblings exclude earlier choices, so no subset is
/// visited twice. Calls `accept(H)` per solution until it returns true.
/// `nodes` is a shared budget; the search gives up when it reaches zero.
template <typename Accept>
bool hitting_sets(int n, const std::vector<Bits>& sets, int budget, Rng& rng, long& nodes, Accept&& accept) {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
  for (int i = 0; i < static_cast<int>(sets.size()); ++i) for_each_bit(sets[i], [&](int e) { members[e].push_back(i); });
  std::vector<std::uint64_t> priority(static_cast<std::size_t>(n));
  for (auto& p : priority) p = rng.next();
  std::vector<int> hits(sets.size(), 0), chosen;
  Bits excluded = make_bits(n);

  auto rec = [&](auto&& self) -> bool {
    if (--nodes < 0) return false;
    int best = -1, best_avail = std::numeric_limits<int>::max();
    for (int i = 0; i < static_cast<int>(sets.size()); ++i) {
      if (hits[i]) continue;
      int avail = 0;
      for (std::size_t w = 0; w < sets[i].size(); ++w) avail += std::popcount(sets[i][w] & ~excluded[w]);
      if (avail == 0) return false;
      if (avail < best_avail) best_avail = avail, best = i;
    }
    if (best < 0) return accept(static_cast<const std::vector<int>&>(chosen));
    if (static_cast<int>(chosen.size()) >= budget) return false;

    std::vector<std::pair<int, int>> cand;  // (element, unmet sets it meets)
    for_each_bit(sets[best], [&](int e) {
      if (test_bit(excluded, e)) return;
      int gain = 0;
      for (int i : members[e]) gain += hits[i] == 0;
      cand.emplace_back(e, gain);
    });
    std::sort(cand.begin(), cand.end(), [&](auto x, auto y) {
      return x.second != y.second ? x.second > y.second : priority[x.first] < priority[y.first];
    });
    std::vector<int> newly_excluded;
    bool found = false;
    for (auto [e, gain] : cand) {
      chosen.push_back(e);
      for (int i : members[e]) ++hits[i];
      found = self(self);
      for (int i : members[e]) --hits[i];
      chosen.pop_back();
      if (found || nodes < 0) break;
      set_bit(excluded, e);
      newly_excluded.push_back(e);
    }
    for (int e : newly_excluded) clear_bit(excluded, e);
    return found;
  };
  return rec(rec);
}

/// Chooses open sets within every level bound such that each retailer keeps an
/// eligible path inside them. Levels are decided top-down (plants, suppliers,
/// warehouses, distribution centers), each as a hitting-set search over the
/// options left by the levels above, backtracking across levels. Returns an
/// empty optional if none is found within `node_limit` search nodes.
inline std::optional<std::array<std::vector<char>, 5>> open_sets_within_bounds(const Instance& in, Rng& rng,
                                                                              long node_limit = 200000) {
  const int top = in.top();
  const int R = in.retailers();
  const int nD = in.size[1], nW = in.size[2], nP = in.size[3], nS = in.size[4];

  // up[l][g]: level-l facilities with an arc to g (level l-1); down[l][f]: the reverse.
  std::array<std::vector<Bits>, 5> up, down;
  for (int l = 2; l <= top; ++l) {
    up[l].assign(in.size[l - 1], make_bits(in.size[l]));
    down[l].assign(in.size[l], make_bits(in.size[l - 1]));
    for (int f = 0; f < in.size[l]; ++f)
      for (int g = 0; g < in.size[l - 1]; ++g)
        if (in.arc[l](f, g) > 0) set_bit(up[l][g], f), set_bit(down[l][f], g);
  }
  std::vector<Bits> serve_d(R, make_bits(nD)), reach_w(R, make_bits(nW)), useful_p(R, make_bits(nP));
  for (int r = 0; r < R; ++r) {
    for (int d = 0; d < nD; ++d)
      if (in.arc[1](d, r) > 0) set_bit(serve_d[r], d), or_into(reach_w[r], up[2][d]);
    Bits reach_p = make_bits(nP);
    for_each_bit(reach_w[r], [&](int w) { or_into(reach_p, up[3][w]); });
    for (int p = 0; p < nP; ++p)
      if (in.elig_pr(p, r) && test_bit(reach_p, p) && (top < 4 || std::any_of(up[4][p].begin(), up[4][p].end(), [](auto x) { return x != 0; })))
        set_bit(useful_p[r], p);
  }

  std::array<std::vector<char>, 5> open;
  for (int l = 1; l <= top; ++l) open[l].assign(in.size[l], 0);
  auto mark = [&](int l, const std::vector<int>& chosen) {
    std::fill(open[l].begin(), open[l].end(), 0);
    for (int f : chosen) open[l][f] = 1;
  };
  long nodes = node_limit;
  std::vector<Bits> w_options(R);

  auto solve_d = [&] {
    std::vector<Bits> sets(R, make_bits(nD));
    for (int r = 0; r < R; ++r) {
      Bits via = make_bits(nD);
      for_each_bit(w_options[r], [&](int w) {
        if (open[2][w]) or_into(via, down[2][w]);
      });
      for (std::size_t i = 0; i < via.size(); ++i) sets[r][i] = via[i] & serve_d[r][i];
    }
    return hitting_sets(nD, sets, in.ub[1], rng, nodes, [&](const std::vector<int>& h) {
      mark(1, h);
      return true;
    });
  };
  auto solve_w = [&] {
    for (int r = 0; r < R; ++r) {
      Bits via = make_bits(nW);
      for_each_bit(useful_p[r], [&](int p) {
        if (open[3][p]) or_into(via, down[3][p]);
      });
      w_options[r] = make_bits(nW);
      for (std::size_t i = 0; i < via.size(); ++i) w_options[r][i] = via[i] & reach_w[r][i];
    }
    return hitting_sets(nW, w_options, in.ub[2], rng, nodes, [&](const std::vector<int>& h) {
      mark(2, h);
      return solve_d();
    });
  };
  const bool found = hitting_sets(nP, useful_p, in.ub[3], rng, nodes, [&](const std::vector<int>& h) {
    mark(3, h);
    if (top < 4) return solve_w();
    std::vector<Bits> sets;
    for (int p : h) sets.push_back(up[4][p]);
    return hitting_sets(nS, sets, in.ub[4], rng, nodes, [&](const std::vector<int>& hs) {
      mark(4, hs);
      return solve_w();
    });
  });
  if (!found) return std::nullopt;
  return open;
}

}  // namespace detail

/// Greedy randomized construction. Retailers are taken in a random order and
/// each is routed along the path of least marginal cost (arc costs plus fixed
/// costs of facilities not yet open), using only facilities that are open or
/// whose level still has room under its bound. Ties go to lower indices. If a
/// retailer cannot be routed, the same order is retried with every new opening
/// charged a large penalty, which spends tight bounds sparingly. If that also
/// fails, open sets within the bounds are chosen by an exact search and
/// the greedy routing is confined to them. Each restart draws a new order, up
/// to `max_restarts` times.
inline Solution construct_initial(const Instance& in, Rng& rng, int max_restarts = 50) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kOpeningPenalty = 1e9;
  const int R = in.retailers(), D = in.size[1], W = in.size[2], P = in.size[3], S = in.size[4];
  const int top = in.top();
  std::array<std::vector<int>, 5> usage;
  std::array<int, 5> open{};
  std::vector<double> best_s(P), val_p(P), val_w(W);
  std::vector<int> arg_s(P), arg_p(W), arg_w(D);

  auto build = [&](const std::vector<int>& order, double penalty,
                   const std::array<std::vector<char>, 5>* mask) -> std::optional<std::vector<Path>> {
    for (int l = 1; l <= top; ++l) usage[l].assign(in.size[l], 0);
    open.fill(0);
    std::vector<Path> paths(R);

    auto allowed = [&](int l, int f) {
      return (!mask || (*mask)[l][f]) && (usage[l][f] > 0 || open[l] < in.ub[l]);
    };
    auto node_cost = [&](int l, int f) { return usage[l][f] > 0 ? 0.0 : in.fixed[l][f] + penalty; };

    // Supplier choice per plant does not depend on the retailer.
    auto refresh_suppliers = [&] {
      if (top < 4) return;
      for (int p = 0; p < P; ++p) {
        best_s[p] = kInf;
        arg_s[p] = -1;
        for (int s = 0; s < S; ++s) {
          const double a = in.arc[4](s, p);
          if (!(a > 0) || !allowed(4, s)) continue;
          const double v = a + node_cost(4, s);
          if (v < best_s[p]) best_s[p] = v, arg_s[p] = s;
        }
      }
    };
    refresh_suppliers();

    for (int r : order) {
      for (int p = 0; p < P; ++p) {
        val_p[p] = kInf;
        if (!in.elig_pr(p, r) || !allowed(3, p)) continue;
        const double up = top == 4 ? best_s[p] : 0.0;
        if (up < kInf) val_p[p] = up + node_cost(3, p);
      }
      for (int w = 0; w < W; ++w) {
        val_w[w] = kInf;
        arg_p[w] = -1;
        if (!allowed(2, w)) continue;
        for (int p = 0; p < P; ++p) {
          const double a = in.arc[3](p, w);
          if (!(a > 0) || val_p[p] == kInf) continue;
          const double v = val_p[p] + a;
          if (v < val_w[w]) val_w[w] = v, arg_p[w] = p;
        }
        if (arg_p[w] >= 0) val_w[w] += node_cost(2, w);
      }
      double best = kInf;
      int best_d = -1;
      for (int d = 0; d < D; ++d) {
        const double dr = in.arc[1](d, r);
        if (!(dr > 0) || !allowed(1, d)) continue;
        double up = kInf;
        int aw = -1;
        for (int w = 0; w < W; ++w) {
          const double a = in.arc[2](w, d);
          if (!(a > 0) || val_w[w] == kInf) continue;
          if (val_w[w] + a < up) up = val_w[w] + a, aw = w;
        }
        if (aw < 0) continue;
        const double v = up + dr + node_cost(1, d);
        if (v < best) best = v, best_d = d, arg_w[d] = aw;
      }
      if (best_d < 0) return std::nullopt;
      Path& path = paths[r];
      path[Level::D] = best_d;
      path[Level::W] = arg_w[best_d];
      path[Level::P] = arg_p[path[Level::W]];
      if (top == 4) path[Level::S] = arg_s[path[Level::P]];
      bool opened_supplier = false;
      for (int l = 1; l <= top; ++l) {
        if (usage[l][path.node[l]]++ == 0) {
          ++open[l];
          opened_supplier = opened_supplier || l == 4;
        }
      }
      if (opened_supplier) refresh_suppliers();
    }
    return paths;
  };

  for (int attempt = 0; attempt <= max_restarts; ++attempt) {
    const auto order = rng.permutation(R);
    if (auto paths = build(order, 0.0, nullptr)) return rebuild_counters(in, std::move(*paths));
    if (auto paths = build(order, kOpeningPenalty, nullptr)) return rebuild_counters(in, std::move(*paths));
    if (const auto mask = detail::open_sets_within_bounds(in, rng))
      if (auto paths = build(order, 0.0, &*mask)) return rebuild_counters(in, std::move(*paths));
  }
  throw Error(Errc::ConstructionFailed,
              "no bound-feasible assignment found after " + std::to_string(max_restarts) + " restarts");
}

/// k-flip descent over one solution with a private random stream and clock.
class Descent {
 public:
  Descent(const Instance& in, Rng& rng, SearchClock& clock, std::optional<double> time_limit = {},
          bool record_trace = false, const MoveObserver* observer = nullptr)
      : in_(in),
        rng_(rng),
        clock_(clock),
        time_limit_(time_limit),
        record_(record_trace),
        observer_(observer),
        structures_(structures_for(in.num_levels)) {}

  /// Start the trace at a solution that was found at time `found_at`.
  void begin(const Solution& sol, double found_at) {
    trace_.final_objective = sol.objective();
    trace_.time_to_best = found_at;
    if (record_) trace_.points.push_back({trace_.time_to_best, sol.objective()});
  }

  /// Exhaustive k-flip search: repeated passes over the types of N(k) in a
  /// fresh random order, each type scanned along fresh sequences, applying
  /// every improving admissible neighbor found, until a full pass finds none.
  /// Returns true if any move was applied.
  bool exhaustive(Solution& sol, int k) {
    bool any = false;
    while (!expired()) {
      bool improved = false;
      for (NeighborhoodType t : shuffled_types(k)) {
        const auto seq = fresh_sequences(in_, rng_);
        improved |= scan(sol, t, seq, false);
        if (trace_.truncated) return any || improved;
      }
      if (!improved) break;
      any = true;
    }
    return any;
  }

  /// Same scan as exhaustive(), but returns right after the first applied move.
  bool first_improvement(Solution& sol, int k) {
    for (NeighborhoodType t : shuffled_types(k)) {
      if (expired()) return false;
      const auto seq = fresh_sequences(in_, rng_);
      if (scan(sol, t, seq, true)) return true;
    }
    return false;
  }

  bool expired() {
    if (!trace_.truncated && time_limit_ && clock_.elapsed() >= *time_limit_) trace_.truncated = true;
    return trace_.truncated;
  }

  int max_k() const { return static_cast<int>(structures_.size()); }
  const SearchTrace& trace() const { return trace_; }
  SearchTrace take_trace() {
    trace_.evaluations = clock_.evaluations();
    return std::move(trace_);
  }

 private:
  std::vector<NeighborhoodType> shuffled_types(int k) {
    auto types = structures_.at(static_cast<std::size_t>(k - 1)).types;
    rng_.shuffle(types);
    return types;
  }

  // One pass over the retailers in Lr order. For each retailer the candidates
  // are visited in sequence order and the first improving admissible one is
  // applied (Next Improvement); the scan then continues with the next retailer.
  bool scan(Solution& sol, NeighborhoodType t, const SequenceSet& seq, bool stop_after_first) {
    bool improved = false;
    for (int r : seq.retailers()) {
      if (expired()) break;
      std::uint64_t evaluated = 0;
      const bool applied = detail::enumerate_improving(in_, sol, r, t, seq, [&](const Path& cand) {
        ++evaluated;
        const auto re = sol.evaluate_reassignment(in_, r, cand);
        if (!re.admissible || !(re.delta < 0.0)) return false;
        const double before = sol.objective();
        sol.reassign(in_, r, cand, re.delta);
        clock_.tick(evaluated);
        evaluated = 0;
        record(sol, before);
        return true;
      });
      clock_.tick(evaluated);
      if (applied) {
        improved = true;
        if (stop_after_first) break;
      }
    }
    return improved;
  }

  void record(const Solution& sol, double before) {
    ++trace_.moves;
    trace_.final_objective = sol.objective();
    trace_.time_to_best = clock_.elapsed();
    if (record_) trace_.points.push_back({trace_.time_to_best, sol.objective()});
    if (observer_ && *observer_) (*observer_)(in_, sol, before);
  }

  const Instance& in_;
  Rng& rng_;
  SearchClock& clock_;
  std::optional<double> time_limit_;
  bool record_;
  const MoveObserver* observer_;
  std::vector<Structure> structures_;
  SearchTrace trace_;
};

/// Exhaustive k-flip descent; returns true if the solution improved.
inline bool algorithm0(const Instance& in, Solution& sol, int k, Rng& rng) {
  SearchClock clock;
  Descent d(in, rng, clock);
  return d.exhaustive(sol, k);
}

/// Return-on-first-improvement k-flip search; returns true iff a move was applied.
inline bool algorithm0_k(const Instance& in, Solution& sol, int k, Rng& rng) {
  SearchClock clock;
  Descent d(in, rng, clock);
  return d.first_improvement(sol, k);
}

struct MultiStartResult {
  Solution best;
  int best_start = 0;
  std::vector<double> start_objectives;  // NaN for starts skipped by the time limit
  double time_to_best = 0.0;
  double elapsed = 0.0;  // total, on the configured clock
  std::uint64_t evaluations = 0;
  bool truncated = false;
};

/// Stream seed of multi-start iteration `start`.
inline std::uint64_t multi_start_seed(std::uint64_t master, int start) {
  return derive_seed(derive_seed(master, std::string_view("multi-start")), static_cast<std::uint64_t>(start));
}

/// Max-Local independent (construction + exhaustive 1-flip) runs, each on its
/// own stream; the lowest objective wins, ties to the lowest start index. The
/// result does not depend on how many workers run the starts.
inline MultiStartResult multi_start(const Instance& in, const VndConfig& cfg) {
  validate_config(cfg);
  const int n = cfg.max_local;
  const auto t0 = std::chrono::steady_clock::now();
  struct StartOutcome {
    std::optional<Solution> sol;
    double finished_wall = 0.0;
    std::uint64_t evaluations = 0;
    bool truncated = false;
    std::exception_ptr error;
  };
  std::vector<StartOutcome> out(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};

  auto run_one = [&](int i) {
    StartOutcome& o = out[i];
    try {
      Rng rng(multi_start_seed(cfg.master_seed, i));
      Solution sol = construct_initial(in, rng);
      // Time limit applies to the whole multi-start; wall time is shared, work is per start.
      const double wall_offset = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      SearchClock clock(cfg.clock, cfg.clock == ClockKind::Wall ? wall_offset : 0.0);
      Descent d(in, rng, clock, cfg.clock == ClockKind::Wall ? cfg.time_limit : std::nullopt, false,
                cfg.on_move ? &cfg.on_move : nullptr);
      d.exhaustive(sol, 1);
      o.truncated = d.trace().truncated;
      o.evaluations = clock.evaluations();
      o.finished_wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      o.sol = std::move(sol);
      if (o.truncated) stop = true;
    } catch (...) {
      o.error = std::current_exception();
      stop = true;
    }
  };

  const int workers = std::min(resolve_threads(cfg.threads), n);
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      if (stop && i > 0) continue;
      if (cfg.time_limit && cfg.clock == ClockKind::Wall && i > 0 &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >= *cfg.time_limit)
        continue;
      run_one(i);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  MultiStartResult res;
  res.start_objectives.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::uint64_t cumulative = 0;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    if (out[i].error) std::rethrow_exception(out[i].error);
    if (!out[i].sol) {
      res.truncated = true;
      continue;
    }
    cumulative += out[i].evaluations;
    res.truncated = res.truncated || out[i].truncated;
    res.start_objectives[i] = out[i].sol->objective();
    if (best < 0 || out[i].sol->objective() < out[best].sol->objective()) {
      best = i;
      res.time_to_best = cfg.clock == ClockKind::Work
                             ? static_cast<double>(cumulative) / kEvaluationsPerWorkSecond
                             : out[i].finished_wall;
    }
    // Work-clock time limit: starts are charged serially in index order.
    if (cfg.clock == ClockKind::Work && cfg.time_limit &&
        static_cast<double>(cumulative) / kEvaluationsPerWorkSecond >= *cfg.time_limit) {
      res.truncated = res.truncated || i + 1 < n;
      break;
    }
  }
  res.evaluations = cumulative;
  res.elapsed = cfg.clock == ClockKind::Work ? static_cast<double>(cumulative) / kEvaluationsPerWorkSecond
                                             : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.best_start = best;
  res.best = std::move(*out[best].sol);
  return res;
}

struct VndResult {
  Solution solution;
  SearchTrace trace;
};

/// Stream seed for a variant's descent phase.
inline std::uint64_t variant_seed(std::uint64_t master, Variant v) {
  return derive_seed(master, std::string("variant:") + std::string(variant_name(v)));
}

/// Runs one VND variant from a given starting solution. `clock_offset` is the
/// time already spent (e.g. by multi-start) and is included in time_to_best.
/// The starting point's time to best is `start_time`.
inline VndResult descend(const Instance& in, Solution sol, Variant variant, const VndConfig& cfg,
                         double clock_offset = 0.0, double start_time = 0.0) {
  Rng rng(variant_seed(cfg.master_seed, variant));
  SearchClock clock(cfg.clock, clock_offset);
  Descent d(in, rng, clock, cfg.time_limit, cfg.record_trace, cfg.on_move ? &cfg.on_move : nullptr);
  d.begin(sol, start_time);
  const int kmax = d.max_k();

  switch (variant) {
    case Variant::BVND:
      // Exhaustive 1-flip, then the first larger structure that improves sends
      // the search back to the 1-flip step.
      while (!d.expired()) {
        d.exhaustive(sol, 1);
        bool improved = false;
        for (int k = 2; k <= kmax && !improved; ++k) improved = d.first_improvement(sol, k);
        if (!improved) break;
      }
      break;
    case Variant::PVND:
      while (!d.expired()) {
        bool improved = false;
        for (int k = 1; k <= kmax; ++k) improved |= d.exhaustive(sol, k);
        if (!improved) break;
      }
      break;
    case Variant::CVND:
      while (!d.expired()) {
        bool improved = false;
        for (int k = 1; k <= kmax; ++k) improved |= d.first_improvement(sol, k);
        if (!improved) break;
      }
      break;
    case Variant::UVND: {
      std::vector<int> ks(static_cast<std::size_t>(kmax));
      for (int k = 1; k <= kmax; ++k) ks[k - 1] = k;
      while (!d.expired()) {
        rng.shuffle(ks);
        bool improved = false;
        for (int k : ks) improved |= d.first_improvement(sol, k);
        if (!improved) break;
      }
      break;
    }
  }
  auto trace = d.take_trace();
  trace.final_objective = sol.objective();
  return {std::move(sol), std::move(trace)};
}

/// Multi-start followed by the configured variant.
inline VndResult solve(const Instance& in, const VndConfig& cfg) {
  auto ms = multi_start(in, cfg);
  auto res = descend(in, std::move(ms.best), cfg.variant, cfg, ms.elapsed, ms.time_to_best);
  res.trace.truncated = res.trace.truncated || ms.truncated;
  return res;
}

/// Runs several variants. By default one multi-start seeds them all; with
/// `multi_start_per_variant` each variant gets its own multi-start, seeded
/// from the variant's stream.
inline std::vector<std::pair<Variant, VndResult>> run_variants(const Instance& in, const VndConfig& cfg,
                                                               const std::vector<Variant>& variants,
                                                               bool multi_start_per_variant = false) {
  std::vector<std::pair<Variant, VndResult>> out;
  if (multi_start_per_variant) {
    for (Variant v : variants) {
      VndConfig c = cfg;
      c.variant = v;
      c.master_seed = variant_seed(cfg.master_seed, v);
      out.emplace_back(v, solve(in, c));
    }
    return out;
  }
  const auto ms = multi_start(in, cfg);
  for (Variant v : variants) {
    auto res = descend(in, ms.best, v, cfg, ms.elapsed, ms.time_to_best);
    res.trace.truncated = res.trace.truncated || ms.truncated;
    out.emplace_back(v, std::move(res));
  }
  return out;
}

inline VndResult bvnd(const Instance& in, VndConfig cfg) { cfg.variant = Variant::BVND; return solve(in, cfg); }
inline VndResult pvnd(const Instance& in, VndConfig cfg) { cfg.variant = Variant::PVND; return solve(in, cfg); }
inline VndResult cvnd(const Instance& in, VndConfig cfg) { cfg.variant = Variant::CVND; return solve(in, cfg); }
inline VndResult uvnd(const Instance& in, VndConfig cfg) { cfg.variant = Variant::UVND; return solve(in, cfg); }

}  // namespace mfl
