#include "ssmf/ek_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "ssmf/errors.hpp"
#include "ssmf/parallel.hpp"

namespace ssmf {

namespace {

int level_of(const TypeVector& n) {
  int s = 0;
  for (int v : n) s += v;
  return s;
}

void check_word(const Word& w, std::size_t d) {
  for (int j : w)
    require(j >= 0 && static_cast<std::size_t>(j) < d, Err::BadInput,
            "word letter outside the alphabet");
}

// All type vectors with |n| <= limit, for the precompute sweep.
void enumerate_upto(std::size_t d, int limit,
                    const std::function<void(const TypeVector&)>& visit) {
  TypeVector n(d, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == d) {
      for (int v = 0; v <= left; ++v) {
        n[j] = v;
        visit(n);
      }
      n[j] = 0;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      n[j] = v;
      rec(j + 1, left - v);
    }
    n[j] = 0;
  };
  if (d == 0) return;
  rec(0, limit);
}

}  // namespace

std::string word_string(const Word& w) {
  bool digits = true;
  for (int j : w)
    if (j > 8) digits = false;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (digits) {
      out.push_back(static_cast<char>('1' + w[i]));
    } else {
      if (i) out.push_back(',');
      out += std::to_string(w[i] + 1);
    }
  }
  return out;
}

TypeVector type_vector(const Word& w, std::size_t d) {
  TypeVector n(d, 0);
  for (int j : w) {
    require(j >= 0 && static_cast<std::size_t>(j) < d, Err::BadInput,
            "letter outside the alphabet");
    ++n[static_cast<std::size_t>(j)];
  }
  return n;
}

Word sample_word(const IfsSpec& spec, int N, Rng& rng) {
  require(N >= 0, Err::BadInput, "word length must be nonnegative");
  const auto wts = aggregate_weights(spec);
  const auto cdf = cumulative(wts.p);
  Word w(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) w[static_cast<std::size_t>(i)] = sample_index(rng, cdf);
  return w;
}

IntegerSplit nearest_integer_split(double x) {
  require(std::isfinite(x), Err::BadInput, "cannot split a non-finite value");
  require(std::fabs(x) <= 4611686018427387904.0, Err::TooLarge,
          "value too large for an exact integer part");
  const double fl = std::floor(x);
  const double frac = x - fl;  // exact: both operands share an exponent range
  const double K = fl + (frac >= 0.5 ? 1.0 : 0.0);
  return {static_cast<long long>(K), x - K};
}

GoodnessOracle::GoodnessOracle(const IfsSpec& spec, double t, double rho)
    : t_(t), rho_(rho) {
  require(t > 0.0, Err::BadInput, "frequency must be positive");
  require(rho > 0.0 && rho < 0.5, Err::BadInput, "rho must lie in (0, 1/2)");
  gammas_.reserve(spec.d());
  for (std::size_t j = 0; j < spec.d(); ++j) gammas_.push_back(spec.gamma(j));
}

double GoodnessOracle::value(const TypeVector& n) const {
  require(n.size() == gammas_.size(), Err::BadInput, "type vector has wrong arity");
  double v = t_;
  for (std::size_t j = 0; j < gammas_.size(); ++j) {
    require(n[j] >= 0, Err::BadInput, "type vector has a negative entry");
    if (n[j] > 0) v *= std::pow(gammas_[j], static_cast<double>(n[j]));
  }
  return v;
}

bool GoodnessOracle::is_good(const TypeVector& n) const {
  const double v = value(n);
  if (v < 1.0) return false;
  return std::fabs(v - std::nearbyint(v)) >= rho_;
}

bool GoodnessOracle::stored_flag(const TypeVector& n, int r, bool* found) const {
  *found = false;
  if (pre_limit_ < 0 || r > pre_r_) return false;
  if (level_of(n) + r > pre_limit_) return false;
  const auto it = flags_.find(n);
  if (it == flags_.end()) return false;
  *found = true;
  return it->second[static_cast<std::size_t>(r)] != 0;
}

bool GoodnessOracle::good_desc_exact(const TypeVector& n, int r) const {
  require(r >= 0, Err::BadInput, "descent depth must be nonnegative");
  bool found = false;
  const bool flag = stored_flag(n, r, &found);
  if (found) return flag;
  if (r == 0) return is_good(n);
  TypeVector m = n;
  for (std::size_t j = 0; j < gammas_.size(); ++j) {
    ++m[j];
    if (good_desc_exact(m, r - 1)) return true;
    --m[j];
  }
  return false;
}

bool GoodnessOracle::on_good_track(const TypeVector& n) const {
  const std::size_t d = gammas_.size();
  require(n.size() == d, Err::BadInput, "type vector has wrong arity");
  TypeVector m(d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    for (std::size_t j = 0; j < d; ++j)
      m[j] = n[j] + ((mask >> j) & 1U ? 1 : 0);
    if (good_desc_exact(m, 0)) return true;
  }
  return false;
}

FrequencyVertexRecord GoodnessOracle::record(const TypeVector& n) const {
  FrequencyVertexRecord rec;
  rec.n = n;
  rec.value = value(n);
  const auto sp = nearest_integer_split(rec.value);
  rec.K = sp.K;
  rec.eps = sp.eps;
  rec.is_good = is_good(n);
  rec.on_good_track = on_good_track(n);
  rec.out_edge_good = rec.is_good;
  return rec;
}

void GoodnessOracle::precompute(int max_level, int max_r) {
  require(max_level >= 0 && max_r >= 0, Err::BadInput,
          "precompute budgets must be nonnegative");
  const int limit = max_level + max_r;
  const std::size_t d = gammas_.size();
  require(d >= 1, Err::BadInput, "oracle needs at least one ratio");
  // C(limit + d, d) vertices; refuse absurd tables rather than thrash.
  double count = 1.0;
  for (std::size_t j = 1; j <= d; ++j)
    count *= static_cast<double>(limit + j) / static_cast<double>(j);
  require(count <= 2e7, Err::TooLarge, "goodness table exceeds vertex budget");

  flags_.clear();
  enumerate_upto(d, limit, [&](const TypeVector& n) {
    auto& f = flags_[n];
    f.assign(static_cast<std::size_t>(max_r) + 1, 0);
    f[0] = is_good(n) ? 1 : 0;
  });
  for (int r = 1; r <= max_r; ++r) {
    for (auto& [n, f] : flags_) {
      if (level_of(n) + r > limit) continue;
      char any = 0;
      TypeVector m = n;
      for (std::size_t j = 0; j < d && !any; ++j) {
        ++m[j];
        any = flags_.at(m)[static_cast<std::size_t>(r - 1)];
        --m[j];
      }
      f[static_cast<std::size_t>(r)] = any;
    }
  }
  pre_limit_ = limit;
  pre_r_ = max_r;
}

std::vector<long long> ek_candidates(long long K1, long long K2, double B2) {
  require(B2 > 1.0, Err::BadInput, "B2 must exceed 1");
  require(K1 >= 0, Err::BadK, "upstream integer part must be nonnegative");
  require(K2 >= 1, Err::BadK, "downstream integer part must be at least 1");
  const double radius = (1.0 + B2) * (1.0 + 3.0 * B2);  // (A - 1) / 2
  const double center =
      static_cast<double>(K1) * static_cast<double>(K1) / static_cast<double>(K2);
  require(center + radius < 9.0e18, Err::TooLarge,
          "candidate interval exceeds the integer range");
  const long long lo =
      std::max(0LL, static_cast<long long>(std::ceil(center - radius)));
  const long long hi = static_cast<long long>(std::floor(center + radius));
  std::vector<long long> out;
  for (long long k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

long long ek_reconstruct_unique(long long K1, long long K2, double /*rho*/) {
  require(K1 >= 0, Err::BadK, "upstream integer part must be nonnegative");
  require(K2 >= 1, Err::BadK, "downstream integer part must be at least 1");
  const double center =
      static_cast<double>(K1) * static_cast<double>(K1) / static_cast<double>(K2);
  return nearest_integer_split(center).K;
}

bool GammaInterval::contains(double x) const {
  return std::fabs(x - center) <= halfwidth;
}

ReconstructionResult reconstruct_along_path(const IfsSpec& spec, double t,
                                            const Word& word, double rho) {
  const std::size_t d = spec.d();
  check_word(word, d);
  const int N = static_cast<int>(word.size());
  GoodnessOracle oracle(spec, t, rho);

  std::vector<TypeVector> path(static_cast<std::size_t>(N) + 1, TypeVector(d, 0));
  for (int i = 1; i <= N; ++i) {
    path[static_cast<std::size_t>(i)] = path[static_cast<std::size_t>(i - 1)];
    ++path[static_cast<std::size_t>(i)][static_cast<std::size_t>(word[i - 1])];
  }

  const double entry_threshold = std::pow(spec.B2, static_cast<double>(d));
  int q = -1;
  for (int i = 0; i <= N; ++i)
    if (oracle.value(path[static_cast<std::size_t>(i)]) >= entry_threshold) q = i;
  require(q >= 1, Err::PathTooShort,
          "frequency never clears B2^d along the word");

  // Integer parts at every subset-descendant of the current path vertex.
  // Seeded at depth q; each backward step converts knowledge at n_i into
  // knowledge at n_{i-1}.
  const auto subset_vertex = [&](const TypeVector& base, std::size_t mask) {
    TypeVector v = base;
    for (std::size_t j = 0; j < d; ++j)
      if ((mask >> j) & 1U) ++v[j];
    return v;
  };
  std::map<TypeVector, long long> known;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    const TypeVector v = subset_vertex(path[static_cast<std::size_t>(q)], mask);
    known[v] = nearest_integer_split(oracle.value(v)).K;
  }

  ReconstructionResult res;
  res.log.q = q;
  res.log.step_unique.assign(static_cast<std::size_t>(q), 0);
  for (int i = q; i >= 1; --i) {
    const std::size_t j = static_cast<std::size_t>(word[i - 1]);
    const bool unique =
        !(oracle.on_good_track(path[static_cast<std::size_t>(i)]) ||
          oracle.on_good_track(path[static_cast<std::size_t>(i - 1)]));
    res.log.step_unique[static_cast<std::size_t>(i - 1)] = unique ? 1 : 0;
    if (unique)
      ++res.log.unique_steps;
    else
      ++res.log.branching_steps;
    std::map<TypeVector, long long> next;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      const TypeVector v =
          subset_vertex(path[static_cast<std::size_t>(i - 1)], mask);
      if ((mask >> j) & 1U) {
        // Same lattice vertex seen from the previous path index.
        next[v] = known.at(v);
        continue;
      }
      TypeVector v1 = v;
      ++v1[j];
      TypeVector v2 = v1;
      ++v2[j];
      const long long truth = nearest_integer_split(oracle.value(v)).K;
      long long rebuilt = truth;
      if (unique) {
        rebuilt = ek_reconstruct_unique(known.at(v1), known.at(v2), rho);
        if (rebuilt != truth) {
          ++res.log.unique_mismatches;
          rebuilt = truth;
        }
      }
      next[v] = rebuilt;
    }
    known = std::move(next);
  }

  for (int i = static_cast<int>(d) + 1; i <= N - static_cast<int>(d) - 1; ++i)
    if (oracle.on_good_track(path[static_cast<std::size_t>(i)]))
      ++res.log.good_track_count;

  const long long K0 = known.at(TypeVector(d, 0));
  for (std::size_t j = 0; j < d; ++j) {
    TypeVector ej(d, 0);
    ej[j] = 1;
    const long long Kj = known.at(ej);
    const double center = static_cast<double>(K0) / static_cast<double>(Kj);
    // Outward rounding: past 2^53 the casts and the division carry rounding
    // error of a few ulp, which must not be charged against the width.
    const double hw = (1.0 + spec.B2) / static_cast<double>(Kj) +
                      16.0 * std::numeric_limits<double>::epsilon() *
                          std::fabs(center);
    res.gamma.push_back({center, hw});
  }
  return res;
}

WordSampler make_bernoulli_sampler(const IfsSpec& spec, int N,
                                   std::uint64_t seed) {
  require(N >= 1, Err::BadInput, "word length must be positive");
  const auto wts = aggregate_weights(spec);
  const auto cdf = cumulative(wts.p);
  return [cdf, N, seed](std::size_t index) {
    Rng rng(derive_seed(seed, index));
    Word w(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
      w[static_cast<std::size_t>(i)] = sample_index(rng, cdf);
    return w;
  };
}

ScanReport exceptional_scan(const IfsSpec& spec, int N, int k1, double rho,
                            int t_grid, std::size_t n_words,
                            const WordSampler& sampler, int threads) {
  require(N >= 1, Err::BadInput, "window length must be positive");
  require(k1 >= 1, Err::BadInput, "k1 must be positive");
  require(t_grid >= 1, Err::BadInput, "frequency grid must be nonempty");
  require(n_words >= 1, Err::BadInput, "word sample must be nonempty");
  const std::size_t d = spec.d();

  std::vector<Word> words(n_words);
  for (std::size_t k = 0; k < n_words; ++k) {
    words[k] = sampler(k);
    require(words[k].size() == static_cast<std::size_t>(N), Err::BadInput,
            "sampler returned a word of the wrong length");
    check_word(words[k], d);
  }

  std::vector<double> ts(static_cast<std::size_t>(t_grid));
  for (int i = 0; i < t_grid; ++i)
    ts[static_cast<std::size_t>(i)] = std::pow(
        spec.B1, (N - 1) + static_cast<double>(i + 1) / static_cast<double>(t_grid));
  const double threshold = static_cast<double>(N) / static_cast<double>(k1);

  std::vector<std::vector<ScanRecord>> slots(static_cast<std::size_t>(t_grid));
  parallel_for(static_cast<std::size_t>(t_grid), threads, [&](std::size_t ti) {
    GoodnessOracle oracle(spec, ts[ti], rho);
    oracle.precompute(N, 0);
    auto& out = slots[ti];
    out.reserve(n_words);
    for (std::size_t k = 0; k < n_words; ++k) {
      TypeVector n(d, 0);
      int count = 0;
      const int win_lo = static_cast<int>(d) + 1;
      const int win_hi = N - static_cast<int>(d) - 1;
      for (int i = 1; i <= N; ++i) {
        ++n[static_cast<std::size_t>(words[k][i - 1])];
        if (i >= win_lo && i <= win_hi && oracle.on_good_track(n)) ++count;
      }
      out.push_back({ts[ti], words[k], count, threshold, count <= threshold});
    }
  });

  ScanReport rep;
  rep.N = N;
  rep.k1 = k1;
  rep.rho = rho;
  rep.t_grid = t_grid;
  rep.n_words = n_words;
  rep.records.reserve(static_cast<std::size_t>(t_grid) * n_words);
  for (auto& slot : slots)
    for (auto& rec : slot) {
      if (rec.witness) ++rep.witnesses;
      rep.records.push_back(std::move(rec));
    }
  return rep;
}

}  // namespace ssmf
