#include "ssmf/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ssmf/errors.hpp"
#include "ssmf/parallel.hpp"

namespace ssmf {

namespace {

struct Increment {
  int i = 0;
  double z = 0.0;
  bool case_b = false;
};

StratumStats stats_of(const std::vector<double>& xs) {
  StratumStats s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
           std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

bool near(double x, double y) { return std::fabs(x - y) <= 1e-12; }

// Shared tail of both drift checks: bucket the increments, compute stratum
// statistics, and evaluate the support and drift verdicts.
DriftReport summarize(const std::vector<std::vector<Increment>>& slots, int N,
                      double active_step, int r, bool one_sided) {
  std::vector<double> a_vals, b_vals;
  std::vector<std::vector<double>> by_i(static_cast<std::size_t>(std::max(0, N - 1)));
  bool support_ok = true;
  for (const auto& slot : slots)
    for (const auto& inc : slot) {
      if (!(near(inc.z, 0.0) || near(inc.z, -1.0) || near(inc.z, active_step)))
        support_ok = false;
      if (inc.case_b) {
        b_vals.push_back(inc.z);
        by_i[static_cast<std::size_t>(inc.i)].push_back(inc.z);
      } else {
        if (inc.z != 0.0) support_ok = false;
        a_vals.push_back(inc.z);
      }
    }

  DriftReport rep;
  rep.r = r;
  rep.case_a = stats_of(a_vals);
  rep.case_b = stats_of(b_vals);
  rep.per_i.reserve(by_i.size());
  for (const auto& xs : by_i) rep.per_i.push_back(stats_of(xs));
  rep.support_ok = support_ok;
  if (rep.case_b.count >= 30) {
    if (one_sided)
      rep.drift_ok = rep.case_b.mean >= -3.0 * rep.case_b.se;
    else
      rep.drift_ok = std::fabs(rep.case_b.mean) <= 3.0 * rep.case_b.se;
  }
  return rep;
}

}  // namespace

double PathProcessSample::Z(int r, int i) const {
  require(r >= 0 && static_cast<std::size_t>(r) + 1 < X.size(), Err::BadInput,
          "descent depth out of range");
  require(i >= 0 && static_cast<std::size_t>(i) + 1 < Y.size(), Err::BadInput,
          "position out of range");
  return static_cast<double>(X[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(i + 1)]) /
             p_min -
         static_cast<double>(X[static_cast<std::size_t>(r + 1)]
                              [static_cast<std::size_t>(i)]);
}

double PathProcessSample::U(int i) const {
  require(i >= 0 && static_cast<std::size_t>(i) + 1 < Y.size(), Err::BadInput,
          "position out of range");
  return static_cast<double>(Y[static_cast<std::size_t>(i + 1)]) / p1 -
         static_cast<double>(X[0][static_cast<std::size_t>(i)]);
}

PathProcessSample path_processes(const GoodnessOracle& oracle,
                                 const AggregatedWeights& weights,
                                 const Word& word) {
  const std::size_t d = oracle.d();
  const int N = static_cast<int>(word.size());
  PathProcessSample s;
  s.word = word;
  s.p_min = weights.p_min;
  s.p1 = weights.p.at(0);
  s.X.assign(d + 1, std::vector<int>(static_cast<std::size_t>(N) + 1, 0));
  s.Y.assign(static_cast<std::size_t>(N) + 1, 0);

  TypeVector n(d, 0);
  bool prev_good = oracle.good_desc_exact(n, 0);
  for (int i = 1; i <= N; ++i) {
    const int j = word[static_cast<std::size_t>(i - 1)];
    require(j >= 0 && static_cast<std::size_t>(j) < d, Err::BadInput,
            "word letter outside the alphabet");
    ++n[static_cast<std::size_t>(j)];
    for (std::size_t r = 0; r <= d; ++r)
      s.X[r][static_cast<std::size_t>(i)] =
          s.X[r][static_cast<std::size_t>(i - 1)] +
          (oracle.good_desc_exact(n, static_cast<int>(r)) ? 1 : 0);
    s.Y[static_cast<std::size_t>(i)] =
        s.Y[static_cast<std::size_t>(i - 1)] +
        ((i >= 2 && prev_good && j == 0) ? 1 : 0);
    prev_good = oracle.good_desc_exact(n, 0);
  }
  return s;
}

PathProcessSample path_processes(const IfsSpec& spec, double t,
                                 const Word& word, double rho) {
  GoodnessOracle oracle(spec, t, rho);
  oracle.precompute(static_cast<int>(word.size()), static_cast<int>(spec.d()));
  return path_processes(oracle, aggregate_weights(spec), word);
}

DriftReport submartingale_check(const IfsSpec& spec, double t, int N, int r,
                                std::size_t n_samples, std::uint64_t seed,
                                double rho, int threads) {
  require(N >= 2, Err::BadInput, "need at least two steps");
  require(r >= 0 && static_cast<std::size_t>(r) + 1 <= spec.d(), Err::BadInput,
          "descent depth out of range");
  require(n_samples >= 1000, Err::InsufficientSamples,
          "drift statistics need at least 1000 samples");
  GoodnessOracle oracle(spec, t, rho);
  oracle.precompute(N, static_cast<int>(spec.d()));
  const auto wts = aggregate_weights(spec);

  std::vector<std::vector<Increment>> slots(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t idx) {
    Rng rng(derive_seed(seed, idx));
    const Word w = sample_word(spec, N, rng);
    const auto s = path_processes(oracle, wts, w);
    auto& out = slots[idx];
    out.reserve(static_cast<std::size_t>(N - 1));
    for (int i = 0; i <= N - 2; ++i) {
      const auto rr = static_cast<std::size_t>(r);
      const bool case_b = s.X[rr + 1][static_cast<std::size_t>(i + 1)] !=
                          s.X[rr + 1][static_cast<std::size_t>(i)];
      out.push_back({i, s.Z(r, i + 1) - s.Z(r, i), case_b});
    }
  });
  return summarize(slots, N, 1.0 / wts.p_min - 1.0, r, /*one_sided=*/true);
}

DriftReport martingale_check(const IfsSpec& spec, double t, int N,
                             std::size_t n_samples, std::uint64_t seed,
                             double rho, int threads) {
  require(N >= 2, Err::BadInput, "need at least two steps");
  require(n_samples >= 1000, Err::InsufficientSamples,
          "drift statistics need at least 1000 samples");
  GoodnessOracle oracle(spec, t, rho);
  oracle.precompute(N, static_cast<int>(spec.d()));
  const auto wts = aggregate_weights(spec);

  std::vector<std::vector<Increment>> slots(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t idx) {
    Rng rng(derive_seed(seed, idx));
    const Word w = sample_word(spec, N, rng);
    const auto s = path_processes(oracle, wts, w);
    auto& out = slots[idx];
    out.reserve(static_cast<std::size_t>(N - 1));
    for (int i = 0; i <= N - 2; ++i) {
      const bool case_b = s.X[0][static_cast<std::size_t>(i + 1)] !=
                          s.X[0][static_cast<std::size_t>(i)];
      out.push_back({i, s.U(i + 1) - s.U(i), case_b});
    }
  });
  return summarize(slots, N, 1.0 / wts.p.at(0) - 1.0, -1, /*one_sided=*/false);
}

DeltaChain delta_chain(int d, int k1, double p_min, double p1) {
  require(d >= 1, Err::BadInput, "need at least one ratio");
  require(k1 >= 1, Err::BadInput, "k1 must be positive");
  require(p_min > 0.0 && p_min <= 1.0, Err::BadInput, "p_min must lie in (0,1]");
  require(p1 > 0.0 && p1 <= 1.0, Err::BadInput, "p1 must lie in (0,1]");
  DeltaChain c;
  c.delta_r.assign(static_cast<std::size_t>(d) + 1, 0.0);
  c.delta_r[static_cast<std::size_t>(d)] =
      1.0 / (static_cast<double>(d + 1) * static_cast<double>(k1));
  for (int r = d - 1; r >= 0; --r)
    c.delta_r[static_cast<std::size_t>(r)] =
        c.delta_r[static_cast<std::size_t>(r + 1)] * p_min / 3.0;
  c.delta = c.delta_r[0] * p1 / 3.0;
  return c;
}

double azuma_rhs(double delta, double p, std::size_t N) {
  require(delta >= 0.0, Err::BadInput, "delta must be nonnegative");
  require(p > 0.0 && p <= 1.0, Err::BadInput, "p must lie in (0,1]");
  return std::exp(-static_cast<double>(N) * p * p * delta * delta / 18.0);
}

TailReport tail_estimate(const IfsSpec& spec, const std::vector<int>& Ns,
                         const std::vector<double>& ts, double delta,
                         std::size_t trials, std::uint64_t seed, double rho,
                         int threads) {
  require(!Ns.empty() && Ns.size() == ts.size(), Err::BadInput,
          "need matching N and t lists");
  for (int N : Ns) require(N >= 2, Err::BadInput, "each N must be at least 2");
  require(delta >= 0.0, Err::BadInput, "delta must be nonnegative");
  require(trials >= 100, Err::InsufficientSamples,
          "tail estimates need at least 100 trials");

  const std::size_t P = Ns.size();
  std::vector<GoodnessOracle> oracles;
  oracles.reserve(P);
  for (std::size_t p = 0; p < P; ++p) {
    oracles.emplace_back(spec, ts[p], rho);
    oracles.back().precompute(Ns[p], 0);
  }

  const std::size_t total = P * trials;
  std::vector<char> low(total, 0);
  const std::size_t d = spec.d();
  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t p = idx / trials;
    const int N = Ns[p];
    Rng rng(derive_seed(seed, idx));
    const Word w = sample_word(spec, N, rng);
    TypeVector n(d, 0);
    int y = 0;
    bool prev_good = oracles[p].good_desc_exact(n, 0);
    for (int i = 1; i <= N; ++i) {
      const int j = w[static_cast<std::size_t>(i - 1)];
      ++n[static_cast<std::size_t>(j)];
      if (i >= 2 && prev_good && j == 0) ++y;
      prev_good = oracles[p].good_desc_exact(n, 0);
    }
    low[idx] = static_cast<double>(y) < delta * static_cast<double>(N) ? 1 : 0;
  });

  TailReport rep;
  rep.delta = delta;
  rep.points.reserve(P);
  const double z = 1.959963984540054;
  for (std::size_t p = 0; p < P; ++p) {
    std::size_t hits = 0;
    for (std::size_t k = 0; k < trials; ++k) hits += low[p * trials + k];
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(hits) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (ph + z * z / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / denom;
    // The interval must trap the point estimate; at ph = 0 or 1 the algebra
    // cancels exactly but the floating evaluation leaves residue.
    const double lo = std::min(std::max(0.0, center - half), ph);
    const double hi = std::max(std::min(1.0, center + half), ph);
    rep.points.push_back({Ns[p], ts[p], ph, lo, hi});
  }

  for (std::size_t p = 0; p + 1 < P; ++p)
    if (rep.points[p + 1].ci_lo > rep.points[p].ci_hi)
      rep.nonincreasing_within_ci = false;

  if (P >= 2) {
    double xm = 0.0, ym = 0.0;
    std::vector<double> ys(P);
    for (std::size_t p = 0; p < P; ++p) {
      ys[p] = std::log(rep.points[p].p_hat + 1.0 / static_cast<double>(trials));
      xm += static_cast<double>(Ns[p]);
      ym += ys[p];
    }
    xm /= static_cast<double>(P);
    ym /= static_cast<double>(P);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      sxx += (static_cast<double>(Ns[p]) - xm) * (static_cast<double>(Ns[p]) - xm);
      sxy += (static_cast<double>(Ns[p]) - xm) * (ys[p] - ym);
    }
    rep.slope_hat = sxx > 0.0 ? sxy / sxx : 0.0;
  } else {
    rep.slope_hat = 0.0;
  }
  return rep;
}

}  // namespace ssmf
