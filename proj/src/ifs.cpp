#include "ssmf/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "ssmf/errors.hpp"

namespace ssmf {

double RatioGroup::weight() const {
  double s = 0.0;
  for (const auto& m : maps) s += m.p;
  return s;
}

std::size_t IfsSpec::map_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.maps.size();
  return n;
}

double IfsSpec::gamma_min() const {
  double v = groups.front().ratio;
  for (const auto& g : groups) v = std::min(v, g.ratio);
  return v;
}

double IfsSpec::gamma_max() const {
  double v = groups.front().ratio;
  for (const auto& g : groups) v = std::max(v, g.ratio);
  return v;
}

double SupportInterval::radius() const {
  return std::max(std::fabs(lo), std::fabs(hi));
}

IfsSpec validate_ifs(IfsSpec spec) {
  require(!spec.groups.empty(), Err::BadInput, "no ratio groups");
  for (const auto& g : spec.groups) {
    require(!g.maps.empty(), Err::BadInput, "ratio group with no maps");
    require(g.ratio > 0.0 && g.ratio < 1.0, Err::BoundsViolated,
            "contraction ratio must lie in (0,1)");
  }
  // Ratios must be pairwise distinct; equal ratios belong in one group.
  for (std::size_t i = 0; i < spec.groups.size(); ++i)
    for (std::size_t j = i + 1; j < spec.groups.size(); ++j)
      require(std::fabs(spec.groups[i].ratio - spec.groups[j].ratio) > 1e-14,
              Err::DuplicateRatio, "two groups share a contraction ratio");

  double total = 0.0;
  for (const auto& g : spec.groups)
    for (const auto& m : g.maps) {
      require(m.p > 0.0, Err::BadProbability, "map probability must be > 0");
      total += m.p;
    }
  require(std::fabs(total - 1.0) < 1e-10, Err::BadProbability,
          "probabilities must sum to 1");
  // Renormalize away the sub-1e-10 drift so downstream sums are exact-ish.
  for (auto& g : spec.groups)
    for (auto& m : g.maps) m.p /= total;

  // A system whose maps all share one fixed point carries a point mass.
  double fp0 = spec.groups[0].maps[0].a / (1.0 - spec.groups[0].ratio);
  bool all_same = true;
  for (const auto& g : spec.groups)
    for (const auto& m : g.maps) {
      double fp = m.a / (1.0 - g.ratio);
      if (std::fabs(fp - fp0) > 1e-12 * (1.0 + std::fabs(fp0))) all_same = false;
    }
  require(!all_same, Err::TrivialIfs, "all maps share a single fixed point");

  double gmin = spec.gamma_min();
  double gmax = spec.gamma_max();
  if (spec.B1 == 0.0) spec.B1 = 1.0 / gmax;
  if (spec.B2 == 0.0) {
    spec.B2 = 1.0 / gmin;
    // A single ratio would force B1 == B2; keep the bracket strict.
    if (spec.B2 <= spec.B1) spec.B2 = 2.0 * spec.B1;
  }
  require(spec.B1 > 1.0, Err::BoundsViolated, "need B1 > 1");
  require(spec.B2 > spec.B1, Err::BoundsViolated, "need B2 > B1");
  require(gmin >= 1.0 / spec.B2 - 1e-12 && gmax <= 1.0 / spec.B1 + 1e-12,
          Err::BoundsViolated, "ratios must satisfy 1/B2 <= gamma <= 1/B1");

  const auto& g1 = spec.groups.front().maps;
  spec.ek_normalized =
      g1.size() >= 2 && std::fabs(g1[1].a - g1[0].a - std::numbers::pi) <= 1e-12;
  return spec;
}

OriginalIfsSpec validate_original(OriginalIfsSpec spec) {
  std::size_t m = spec.lambda.size();
  require(m >= 2, Err::BadInput, "need at least two maps");
  require(spec.b.size() == m && spec.q.size() == m, Err::BadInput,
          "lambda, b, q must have equal lengths");
  for (double l : spec.lambda)
    require(l > 0.0 && l < 1.0, Err::BoundsViolated,
            "contraction ratio must lie in (0,1)");
  double total = 0.0;
  for (double p : spec.q) {
    require(p > 0.0, Err::BadProbability, "map probability must be > 0");
    total += p;
  }
  require(std::fabs(total - 1.0) < 1e-10, Err::BadProbability,
          "probabilities must sum to 1");
  for (double& p : spec.q) p /= total;

  double fp0 = spec.fixed_point(0);
  bool all_same = true;
  for (std::size_t j = 0; j < m; ++j)
    if (std::fabs(spec.fixed_point(j) - fp0) > 1e-12 * (1.0 + std::fabs(fp0)))
      all_same = false;
  require(!all_same, Err::TrivialIfs, "all maps share a single fixed point");
  return spec;
}

SupportInterval support_interval(const IfsSpec& spec) {
  // Start from the hull of the fixed points, then expand until invariant.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& g : spec.groups)
    for (const auto& m : g.maps) {
      double fp = m.a / (1.0 - g.ratio);
      lo = std::min(lo, fp);
      hi = std::max(hi, fp);
    }
  double scale = std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
  for (int iter = 0; iter < 200; ++iter) {
    double nlo = lo, nhi = hi;
    for (const auto& g : spec.groups)
      for (const auto& m : g.maps) {
        nlo = std::min(nlo, g.ratio * lo + m.a);
        nhi = std::max(nhi, g.ratio * hi + m.a);
      }
    if (nlo >= lo - 1e-13 * scale && nhi <= hi + 1e-13 * scale) break;
    lo = nlo;
    hi = nhi;
  }
  return {lo, hi};
}

std::vector<WeightedAtom> discretize(const IfsSpec& spec, int depth) {
  require(depth >= 0, Err::BadInput, "depth must be >= 0");
  std::size_t m = spec.map_count();
  double count = 1.0;
  for (int i = 0; i < depth; ++i) {
    count *= double(m);
    require(count <= 1e7, Err::TooLarge, "discretization exceeds 10^7 atoms");
  }

  struct FlatMap {
    double gamma, a, p;
  };
  std::vector<FlatMap> flat;
  flat.reserve(m);
  for (const auto& g : spec.groups)
    for (const auto& mp : g.maps) flat.push_back({g.ratio, mp.a, mp.p});

  double x0 = support_interval(spec).midpoint();
  std::vector<WeightedAtom> cur = {{x0, 1.0}};
  for (int i = 0; i < depth; ++i) {
    std::vector<WeightedAtom> next;
    next.reserve(cur.size() * m);
    for (const auto& atom : cur)
      for (const auto& f : flat)
        next.push_back({f.gamma * atom.x + f.a, f.p * atom.w});
    cur = std::move(next);
  }
  return cur;
}

AggregatedWeights aggregate_weights(const IfsSpec& spec) {
  AggregatedWeights w;
  w.p.reserve(spec.d());
  double floor_p = 1.0;
  for (const auto& g : spec.groups) {
    w.p.push_back(g.weight());
    for (const auto& m : g.maps) floor_p = std::min(floor_p, m.p);
  }
  w.p_min = *std::min_element(w.p.begin(), w.p.end());
  w.eps_floor = floor_p;
  return w;
}

}  // namespace ssmf
