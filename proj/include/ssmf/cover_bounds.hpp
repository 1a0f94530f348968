#pragma once

#include <vector>

namespace ssmf {

// Constants of the covering argument for a system with d ratios pinched
// between 1/B2 and 1/B1 and similarity exponent s. Products that overflow a
// double are carried as logarithms.
struct EkConstants {
  double B1 = 0.0;
  double B2 = 0.0;
  int d = 0;
  double s = 0.0;
  double rho = 0.0;     // 1 / (4 (1+B2)(1+3B2))
  double A = 0.0;       // 2 (1+B2)(1+3B2) + 1
  double L1_log = 0.0;  // log B2^{(d+1) 2^d}
  double L2_log = 0.0;  // L1_log + 2 (d+1) log A
  double A1_log = 0.0;  // 2^{d+1} log A
  int k1 = 0;           // sparsity parameter; 0 until chosen
};

// Validates 1 < B1 < B2 and the dimension condition B1^s > d.
EkConstants constants_of(double B1, double B2, int d, double s);

// Exponential growth rate per lattice level of the N-step cover when one
// vertex in k may branch: H(1/k) + A1_log/k + log d - s log B1. Negative
// means the cover is summable.
double ek_rate(const EkConstants& c, int k);

// Smallest k making ek_rate negative. The dimension condition makes the rate
// limit negative, so the search succeeds; the cap is defensive.
int choose_k1(const EkConstants& c);

struct QBounds {
  double lo = 0.0;  // (N - d - 1) log B1 / log B2
  int hi = 0;       // N - d
};

// Range of the depth at which a backward reconstruction can start for
// frequencies in block N.
QBounds q_bounds(int N, double B1, double B2, int d);

// log of the branch count over all words of length N when at most N/k1
// transitions branch: L2_log + 2 log N + log C(N, floor(N/k1)) +
// (N/k1) A1_log, the power term taken with real division.
double cover_count_log(const EkConstants& c, int N, int k1);

// cover_count_log plus N (log d - s log B1): the log of one term of the
// Hausdorff-sum majorant.
double hausdorff_term(const EkConstants& c, int N, int k1);

struct HausdorffReport {
  std::vector<double> terms;  // entry i is the term at N = i + 1
  int N0 = 1;                 // least N0 with terms strictly decreasing after it
  bool eventually_decreasing = false;
  bool all_finite = true;
};

// Tabulates hausdorff_term for N = 1..N_max and locates the tail where the
// terms decrease strictly. The binomial factor jumps upward whenever N
// crosses a multiple of k1, so N_max is best kept below the next multiple.
HausdorffReport hausdorff_sum_check(const EkConstants& c, int k1, int N_max);

}  // namespace ssmf
