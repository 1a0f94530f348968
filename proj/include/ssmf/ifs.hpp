#pragma once

#include <cstddef>
#include <vector>

namespace ssmf {

// One contraction x -> gamma*x + a taken with probability p; the ratio gamma
// lives on the enclosing RatioGroup so maps sharing it stay grouped.
struct MapSpec {
  double a = 0.0;
  double p = 0.0;
};

struct RatioGroup {
  double ratio = 0.0;
  std::vector<MapSpec> maps;

  double weight() const;  // sum of map probabilities in this group
};

// Self-similar system with d distinct contraction ratios. B1, B2 bracket the
// ratios as B2^{-1} <= gamma <= B1^{-1} with 1 < B1 < B2; when the caller does
// not supply them they are derived from the ratios themselves.
struct IfsSpec {
  std::vector<RatioGroup> groups;
  double B1 = 0.0;
  double B2 = 0.0;
  // True when the first group's first two translations differ by exactly pi,
  // the normal form produced by the reduction pipeline.
  bool ek_normalized = false;

  std::size_t d() const { return groups.size(); }
  std::size_t map_count() const;
  double gamma(std::size_t j) const { return groups[j].ratio; }
  double gamma_min() const;
  double gamma_max() const;
};

// Homogeneous input system x -> lambda_j*x + b_j with probabilities q_j, the
// raw form accepted before any iteration/normalization.
struct OriginalIfsSpec {
  std::vector<double> lambda;
  std::vector<double> b;
  std::vector<double> q;

  std::size_t m() const { return lambda.size(); }
  double fixed_point(std::size_t j) const { return b[j] / (1.0 - lambda[j]); }
};

// Per-group aggregated probabilities p_j = sum_k p_k^{(j)}. eps_floor is the
// smallest map-level probability, the epsilon entering the damping factor.
struct AggregatedWeights {
  std::vector<double> p;
  double p_min = 0.0;
  double eps_floor = 0.0;
};

struct SupportInterval {
  double lo = 0.0;
  double hi = 0.0;

  double halfwidth() const { return 0.5 * (hi - lo); }
  double midpoint() const { return 0.5 * (hi + lo); }
  double radius() const;  // max(|lo|, |hi|)
};

struct WeightedAtom {
  double x = 0.0;
  double w = 0.0;
};

// Checks structural soundness and fills in defaulted B1/B2. Throws SpecError
// on duplicate ratios, bad probabilities, a trivial (single fixed point)
// system, or ratio bounds violating B2^{-1} <= gamma <= B1^{-1} < 1.
IfsSpec validate_ifs(IfsSpec spec);

OriginalIfsSpec validate_original(OriginalIfsSpec spec);

// Smallest interval I with f_j(I) subset I for all maps, found by iterating
// the hull map from the fixed-point hull until stable.
SupportInterval support_interval(const IfsSpec& spec);

// Level-`depth` discretization: atoms f_w(x0) with weights p_w over all words
// w of length `depth`, x0 the support midpoint. Throws TooLarge past 10^7.
std::vector<WeightedAtom> discretize(const IfsSpec& spec, int depth);

AggregatedWeights aggregate_weights(const IfsSpec& spec);

}  // namespace ssmf
