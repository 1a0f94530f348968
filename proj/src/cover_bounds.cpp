#include "ssmf/cover_bounds.hpp"

#include <cmath>

#include "ssmf/errors.hpp"

namespace ssmf {

namespace {

double binary_entropy_nats(double x) {
  // H(0) = H(1) = 0 by continuity.
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log(1.0 - x);
  return h;
}

double log_binomial(double n, double m) {
  return std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
}

}  // namespace

EkConstants constants_of(double B1, double B2, int d, double s) {
  require(d >= 1, Err::BadInput, "need at least one ratio");
  require(s > 0.0, Err::BadInput, "s must be positive");
  require(B1 > 1.0 && B2 > B1, Err::BoundsViolated,
          "need 1 < B1 < B2");
  require(s * std::log(B1) > std::log(static_cast<double>(d)),
          Err::Cond2Violated, "need B1^s > d");
  EkConstants c;
  c.B1 = B1;
  c.B2 = B2;
  c.d = d;
  c.s = s;
  const double prod = (1.0 + B2) * (1.0 + 3.0 * B2);
  c.rho = 0.25 / prod;
  c.A = 2.0 * prod + 1.0;
  const double pow2d = std::ldexp(1.0, d);  // 2^d
  c.L1_log = (d + 1) * pow2d * std::log(B2);
  c.L2_log = c.L1_log + 2.0 * (d + 1) * std::log(c.A);
  c.A1_log = 2.0 * pow2d * std::log(c.A);
  return c;
}

double ek_rate(const EkConstants& c, int k) {
  require(k >= 1, Err::BadInput, "k must be positive");
  const double x = 1.0 / static_cast<double>(k);
  return binary_entropy_nats(x) + c.A1_log * x +
         std::log(static_cast<double>(c.d)) - c.s * std::log(c.B1);
}

int choose_k1(const EkConstants& c) {
  // The rate tends to log d - s log B1; a nonnegative limit can never be
  // beaten by sparsity.
  require(c.s * std::log(c.B1) > std::log(static_cast<double>(c.d)),
          Err::NoFeasibleK, "rate limit is nonnegative");
  for (int k = 1; k <= 1'000'000'000; ++k)
    if (ek_rate(c, k) < 0.0) return k;
  fail(Err::NoFeasibleK, "no sparsity parameter below the search cap");
}

QBounds q_bounds(int N, double B1, double B2, int d) {
  require(d >= 1, Err::BadInput, "need at least one ratio");
  require(B1 > 1.0 && B2 > B1, Err::BoundsViolated, "need 1 < B1 < B2");
  require(N > d, Err::BadInput, "block index must exceed d");
  QBounds qb;
  qb.lo = static_cast<double>(N - d - 1) * std::log(B1) / std::log(B2);
  qb.hi = N - d;
  return qb;
}

double cover_count_log(const EkConstants& c, int N, int k1) {
  require(N >= 1, Err::BadInput, "N must be positive");
  require(k1 >= 1, Err::BadInput, "k1 must be positive");
  const double ratio = static_cast<double>(N) / static_cast<double>(k1);
  return c.L2_log + 2.0 * std::log(static_cast<double>(N)) +
         log_binomial(static_cast<double>(N), std::floor(ratio)) +
         ratio * c.A1_log;
}

double hausdorff_term(const EkConstants& c, int N, int k1) {
  return cover_count_log(c, N, k1) +
         static_cast<double>(N) *
             (std::log(static_cast<double>(c.d)) - c.s * std::log(c.B1));
}

HausdorffReport hausdorff_sum_check(const EkConstants& c, int k1, int N_max) {
  require(N_max >= 2, Err::BadInput, "need at least two terms");
  HausdorffReport rep;
  rep.terms.reserve(static_cast<std::size_t>(N_max));
  for (int N = 1; N <= N_max; ++N) {
    const double term = hausdorff_term(c, N, k1);
    rep.terms.push_back(term);
    if (!std::isfinite(term)) rep.all_finite = false;
  }
  rep.N0 = 1;
  for (int N = 1; N < N_max; ++N) {
    // terms[N] is the term at N+1; any non-decrease pushes the start of the
    // strictly decreasing tail past it.
    if (!(rep.terms[static_cast<std::size_t>(N)] <
          rep.terms[static_cast<std::size_t>(N - 1)]))
      rep.N0 = N + 1;
  }
  rep.eventually_decreasing = rep.N0 < N_max;
  return rep;
}

}  // namespace ssmf
