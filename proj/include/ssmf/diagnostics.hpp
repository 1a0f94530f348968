#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ssmf/ek_lattice.hpp"
#include "ssmf/ifs.hpp"

namespace ssmf {

// Counting processes along one sampled word. With n_0 the root and n_k the
// prefix vertices,
//   X[r][i] counts k in [1, i] whose vertex has a good descendant exactly r
//           levels below it (r = 0 reads: is itself good),
//   Y[i]    counts k in [2, i] with n_{k-1} good and w_k the first letter.
// The compensated processes read off them:
//   Z(r, i) = X[r][i+1]/p_min - X[r+1][i]   (expected to drift upward),
//   U(i)    = Y[i+1]/p1 - X[0][i]           (expected to drift not at all).
struct PathProcessSample {
  Word word;
  std::vector<std::vector<int>> X;  // (d+1) rows, N+1 entries each
  std::vector<int> Y;               // N+1 entries
  double p_min = 0.0;
  double p1 = 0.0;

  double Z(int r, int i) const;
  double U(int i) const;
};

PathProcessSample path_processes(const GoodnessOracle& oracle,
                                 const AggregatedWeights& weights,
                                 const Word& word);
PathProcessSample path_processes(const IfsSpec& spec, double t,
                                 const Word& word, double rho);

struct StratumStats {
  std::size_t count = 0;
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

// Monte Carlo increment statistics for one compensated process. Increments
// split into the stratum where the compensator cannot move (case a, every
// increment must be exactly 0) and the active stratum (case b). support_ok
// checks each increment is one of the three admissible values; drift_ok
// checks the active-stratum mean against its 3-sigma band.
struct DriftReport {
  int r = -1;  // descent depth for the compensated pair; -1 for Y against X
  StratumStats case_a;
  StratumStats case_b;
  std::vector<StratumStats> per_i;  // case-b statistics by path position
  bool support_ok = true;
  bool drift_ok = true;
};

DriftReport submartingale_check(const IfsSpec& spec, double t, int N, int r,
                                std::size_t n_samples, std::uint64_t seed,
                                double rho, int threads = 0);

DriftReport martingale_check(const IfsSpec& spec, double t, int N,
                             std::size_t n_samples, std::uint64_t seed,
                             double rho, int threads = 0);

// The cascade of thresholds feeding the concentration bound: delta_r[d] is
// 1/((d+1) k1), each lower depth scales by p_min/3, and the final delta
// scales once more by p1/3.
struct DeltaChain {
  std::vector<double> delta_r;  // indices 0..d
  double delta = 0.0;
};

DeltaChain delta_chain(int d, int k1, double p_min, double p1);

// One-sided Azuma bound exp(-N p^2 delta^2 / 18) for a mean increment of
// size p*delta over N steps with the increment ranges in play here.
double azuma_rhs(double delta, double p, std::size_t N);

struct TailPoint {
  int N = 0;
  double t = 0.0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct TailReport {
  std::vector<TailPoint> points;
  double delta = 0.0;
  double slope_hat = 0.0;  // slope of log(p_hat + 1/trials) against N
  bool nonincreasing_within_ci = true;
};

// Estimate P(Y_N < delta * N) at each (N, t) pair, with Wilson 95% intervals.
// Points are flagged nonincreasing when each interval's low end does not
// exceed the previous interval's high end.
TailReport tail_estimate(const IfsSpec& spec, const std::vector<int>& Ns,
                         const std::vector<double>& ts, double delta,
                         std::size_t trials, std::uint64_t seed, double rho,
                         int threads = 0);

}  // namespace ssmf
