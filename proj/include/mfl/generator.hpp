#pragma once

// Seeded random instance generation over the benchmark parameter grid.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mfl/error.hpp"
#include "mfl/model.hpp"
#include "mfl/rng.hpp"

namespace mfl {

enum class DensityClass { Low, Medium, High };
enum class FixedClass { Small, Medium, Large };

struct IntRange {
  int lo = 0;
  int hi = 0;
};

inline std::string_view density_name(DensityClass c) {
  switch (c) {
    case DensityClass::Low: return "low";
    case DensityClass::Medium: return "medium";
    case DensityClass::High: return "high";
  }
  return "?";
}

inline std::string_view fixed_name(FixedClass c) {
  switch (c) {
    case FixedClass::Small: return "small";
    case FixedClass::Medium: return "medium";
    case FixedClass::Large: return "large";
  }
  return "?";
}

inline std::optional<DensityClass> parse_density(std::string_view s) {
  if (s == "low") return DensityClass::Low;
  if (s == "medium") return DensityClass::Medium;
  if (s == "high") return DensityClass::High;
  return std::nullopt;
}

inline std::optional<FixedClass> parse_fixed(std::string_view s) {
  if (s == "small") return FixedClass::Small;
  if (s == "medium") return FixedClass::Medium;
  if (s == "large") return FixedClass::Large;
  return std::nullopt;
}

/// Eligibility probability of every arc and of plant-retailer pairs.
inline double density_for(int num_levels, DensityClass c) {
  if (num_levels == 4) {
    switch (c) {
      case DensityClass::Low: return 0.20;
      case DensityClass::Medium: return 0.40;
      case DensityClass::High: return 0.60;
    }
  }
  switch (c) {
    case DensityClass::Low: return 0.40;
    case DensityClass::Medium: return 0.50;
    case DensityClass::High: return 0.60;
  }
  return 0.0;
}

/// Fixed-cost range for a facility level under a fixed-cost class.
inline IntRange fixed_range(FixedClass c, Level l) {
  // Rows: D, W, P, S.
  static constexpr IntRange kSmall[4] = {{50, 100}, {100, 200}, {200, 400}, {20, 100}};
  static constexpr IntRange kMedium[4] = {{100, 200}, {200, 400}, {400, 800}, {50, 200}};
  static constexpr IntRange kLarge[4] = {{200, 400}, {400, 800}, {800, 1600}, {200, 400}};
  const int i = idx(l) - 1;
  switch (c) {
    case FixedClass::Small: return kSmall[i];
    case FixedClass::Medium: return kMedium[i];
    case FixedClass::Large: return kLarge[i];
  }
  return {};
}

/// Default multi-start count for a density class.
inline int max_local_for(DensityClass c) {
  switch (c) {
    case DensityClass::Low: return 70;
    case DensityClass::Medium: return 50;
    case DensityClass::High: return 30;
  }
  return 1;
}

struct GeneratorParams {
  int num_levels = 4;
  int R = 2000;
  int D = 150;
  int W = 50;
  int P = 30;
  int S = 100;
  DensityClass density_class = DensityClass::High;
  FixedClass fixed_class = FixedClass::Large;
  std::optional<double> density_override;
  // Arc cost ranges indexed by upper level: [1] = D-R, [2] = W-D, [3] = P-W, [4] = S-P.
  std::array<IntRange, 5> arc_range{IntRange{}, {5, 50}, {100, 500}, {5, 500}, {5, 150}};
  std::array<std::optional<IntRange>, 5> fixed_override{};
  std::uint64_t seed = 0;

  double density() const { return density_override.value_or(density_for(num_levels, density_class)); }
  IntRange fixed_range_for(Level l) const { return fixed_override[idx(l)].value_or(fixed_range(fixed_class, l)); }
};

/// Full-scale defaults: P = 30 for four levels, P = 50 for five.
inline GeneratorParams default_params(int num_levels) {
  GeneratorParams p;
  p.num_levels = num_levels;
  p.P = num_levels == 4 ? 30 : 50;
  return p;
}

inline void validate_params(const GeneratorParams& p) {
  auto fail = [](const std::string& m) { throw Error(Errc::InvalidParams, m); };
  if (p.num_levels != 4 && p.num_levels != 5) fail("levels must be 4 or 5");
  if (p.R < 1 || p.D < 1 || p.W < 1 || p.P < 1 || (p.num_levels == 5 && p.S < 1))
    fail("level sizes must be positive");
  const double dens = p.density();
  if (!(dens > 0.0 && dens <= 1.0)) fail("density must lie in (0, 1]");
  for (int l = 1; l < p.num_levels; ++l) {
    const auto a = p.arc_range[l];
    if (a.lo < 1 || a.lo > a.hi) fail("arc cost range must satisfy 1 <= lo <= hi");
    const auto f = p.fixed_range_for(static_cast<Level>(l));
    if (f.lo < 0 || f.lo > f.hi) fail("fixed cost range must satisfy 0 <= lo <= hi");
  }
}

/// Problem-id density token: Hdens / Mdens / Ldens.
inline std::string_view density_token(DensityClass c) {
  switch (c) {
    case DensityClass::Low: return "Ldens";
    case DensityClass::Medium: return "Mdens";
    case DensityClass::High: return "Hdens";
  }
  return "?";
}

inline std::string_view fixed_token(FixedClass c) {
  switch (c) {
    case FixedClass::Small: return "SmFx";
    case FixedClass::Medium: return "MedFx";
    case FixedClass::Large: return "LgFx";
  }
  return "?";
}

/// Draws an instance. Sampling order, which fixes the byte stream for a seed:
/// arc matrices D-R, W-D, P-W, S-P row-major (a Bernoulli eligibility draw,
/// then a cost draw for eligible entries), then P-R eligibility row-major, then
/// fixed costs D, W, P, S, then the feasibility repair.
///
/// Repair: a random backbone of ub_L facilities is drawn per level. Each
/// retailer lacking an eligible path that stays inside the backbone gets a
/// uniformly chosen backbone chain forced eligible (only currently ineligible
/// entries receive fresh cost draws). Routing every retailer through the
/// backbone is then a solution within all open-facility bounds.
inline Instance generate(const GeneratorParams& params) {
  validate_params(params);
  Rng rng(params.seed);
  const double dens = params.density();

  Instance in;
  in.num_levels = params.num_levels;
  in.size = {params.R, params.D, params.W, params.P, params.num_levels == 5 ? params.S : 0};
  const int top = in.top();

  for (int l = 1; l <= top; ++l) {
    const auto range = params.arc_range[l];
    Matrix<double> m(in.size[l], in.size[l - 1], 0.0);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (rng.bernoulli(dens)) m(i, j) = static_cast<double>(rng.uniform_int(range.lo, range.hi));
    in.arc[l] = std::move(m);
  }
  in.elig_pr = Matrix<std::uint8_t>(in.size[3], in.size[0], 0);
  for (int p = 0; p < in.size[3]; ++p)
    for (int r = 0; r < in.size[0]; ++r) in.elig_pr(p, r) = rng.bernoulli(dens) ? 1 : 0;
  for (int l = 1; l <= top; ++l) {
    const auto range = params.fixed_range_for(static_cast<Level>(l));
    in.fixed[l].resize(in.size[l]);
    for (auto& f : in.fixed[l]) f = static_cast<double>(rng.uniform_int(range.lo, range.hi));
    in.ub[l] = std::max(1, static_cast<int>(std::ceil(dens * in.size[l] - 1e-9)));
    in.ub[l] = std::min(in.ub[l], in.size[l]);
  }

  // Backbone: the first ub_L entries of a random permutation per level.
  std::array<std::vector<int>, 5> backbone;
  std::array<std::vector<char>, 5> in_backbone;
  for (int l = 1; l <= top; ++l) {
    auto perm = rng.permutation(in.size[l]);
    perm.resize(in.ub[l]);
    in_backbone[l].assign(in.size[l], 0);
    for (int f : perm) in_backbone[l][f] = 1;
    backbone[l] = std::move(perm);
  }
  auto has_backbone_path = [&](int r) {
    std::vector<char> p_ok(in.size[3], 0), w_ok(in.size[2], 0);
    for (int p : backbone[3]) {
      if (!in.elig_pr(p, r)) continue;
      if (top == 4) {
        bool supplied = false;
        for (int s : backbone[4]) supplied = supplied || in.arc[4](s, p) > 0;
        if (!supplied) continue;
      }
      p_ok[p] = 1;
    }
    for (int w : backbone[2])
      for (int p : backbone[3])
        if (p_ok[p] && in.arc[3](p, w) > 0) w_ok[w] = 1;
    for (int d : backbone[1]) {
      if (!(in.arc[1](d, r) > 0)) continue;
      for (int w : backbone[2])
        if (w_ok[w] && in.arc[2](w, d) > 0) return true;
    }
    return false;
  };
  auto pick = [&](int l) {
    const auto& b = backbone[l];
    return b[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(b.size()) - 1))];
  };
  auto force = [&](int l, int from, int to) {
    if (!(in.arc[l](from, to) > 0)) {
      const auto range = params.arc_range[l];
      in.arc[l](from, to) = static_cast<double>(rng.uniform_int(range.lo, range.hi));
    }
  };
  for (int r = 0; r < in.size[0]; ++r) {
    if (has_backbone_path(r)) continue;
    Path chain;
    for (int l = top; l >= 1; --l) chain.node[l] = pick(l);
    force(1, chain.node[1], r);
    for (int l = 2; l <= top; ++l) force(l, chain.node[l], chain.node[l - 1]);
    in.elig_pr(chain.node[3], r) = 1;
  }

  in.meta.seed = params.seed;
  in.meta.density_class = std::string(density_name(params.density_class));
  in.meta.fixed_class = std::string(fixed_name(params.fixed_class));
  in.meta.density = dens;
  in.meta.rng = std::string(kRngAlgorithm);
  return in;
}

}  // namespace mfl
