#pragma once

#include <cstddef>
#include <vector>

#include "ssmf/ifs.hpp"

namespace ssmf {

// y = u * x + v, the coordinate change applied to an original system.
struct AffineTransform {
  double u = 1.0;
  double v = 0.0;
};

struct NormalizedOriginal {
  OriginalIfsSpec spec;       // first translation 0, second pi/(1-lambda_1^{ell-1})
  AffineTransform transform;  // original coordinates -> normalized coordinates
};

// Provenance block the CLI carries alongside a reduction.
struct ReductionParams {
  int m = 0;
  double C1 = 0.0;
  double C2 = 0.0;
  double s = 0.0;
  double epsilon = 0.0;
  int ell = 0;
  int d = 0;
};

struct ReducedIfs {
  IfsSpec spec;
  double b = 0.0;  // normalized second translation, pi/(1 - lambda_1^{ell-1})
  int ell = 0;
  // Per group, how many times each original map occurs in its compositions;
  // the group ratio is the matching product of original ratios.
  std::vector<std::vector<int>> lambda_power_coords;
  AffineTransform transform;
};

// Smallest ell >= 2 with ell > m*log(ell+m)/(s*log(C1)); the level at which
// iterated word counts are beaten by the contraction gained per level.
int choose_iterate_level(int m, double C1, double s);

// Reorder so the first two maps have distinct fixed points, then conjugate so
// the first translation is exactly 0 and the second exactly
// pi / (1 - lambda_1^{ell-1}).
NormalizedOriginal normalize_original(const OriginalIfsSpec& orig, int ell);

// Replace the system by its ell-fold compositions, grouped by the multiset of
// factors' ratios. The group containing f_1^{ell-1} f_2 comes first, with that
// composition and f_2 f_1^{ell-1} as its first two maps; their translations
// then differ by exactly pi. Requires the input to be normalized (first
// translation identically 0). With merge_equal_ratios, groups whose ratio
// values coincide are combined into the earliest of them.
ReducedIfs iterate_ifs(const OriginalIfsSpec& normalized, int ell,
                       bool merge_equal_ratios = false);

// normalize_original followed by iterate_ifs, keeping the transform.
ReducedIfs reduce_original(const OriginalIfsSpec& orig, int ell,
                           bool merge_equal_ratios = false);

// Read each original ratio back off a pure-power group via an ell-th root.
// BadCoordinate when some ratio has no pure-power group (for example after
// merging).
std::vector<double> recover_lambda(const ReducedIfs& red);

// View an original system as a grouped one, collecting maps with equal ratios.
IfsSpec to_ifs(const OriginalIfsSpec& orig);

}  // namespace ssmf
