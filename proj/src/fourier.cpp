#include "ssmf/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>

#include "ssmf/errors.hpp"
#include "ssmf/parallel.hpp"

namespace ssmf {

namespace {

// Per-level vertex budget. C(L+d-1, d-1) stays tiny for realistic d, so this
// only trips on degenerate inputs (huge d).
constexpr std::size_t kMaxLevelVertices = 20'000'000;

std::complex<double> unit_phase(double theta) {
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

std::complex<double> phase_factor(const IfsSpec& spec, std::size_t j, double t) {
  require(j < spec.d(), Err::BadInput, "ratio group index out of range");
  std::complex<double> acc{0.0, 0.0};
  for (const auto& m : spec.groups[j].maps) acc += m.p * unit_phase(m.a * t);
  return acc;
}

FourierValue ft_bruteforce(const IfsSpec& spec, double t, int depth) {
  require(depth >= 0, Err::BadInput, "depth must be nonnegative");
  const auto atoms = discretize(spec, depth);
  std::complex<double> acc{0.0, 0.0};
  for (const auto& at : atoms) acc += at.w * unit_phase(at.x * t);
  const double R = support_interval(spec).radius();
  return {acc, std::abs(t) * std::pow(spec.gamma_max(), depth) * R};
}

FourierValue ft_lattice(const IfsSpec& spec, double t, double tol,
                        int max_levels, LatticeTrace* trace) {
  require(tol > 0.0, Err::BadInput, "tol must be positive");
  require(max_levels >= 0, Err::BadInput, "max_levels must be nonnegative");
  const std::size_t d = spec.d();
  const SupportInterval supp = support_interval(spec);
  const double R = supp.radius();
  const double x0 = supp.midpoint();
  const double abs_t = std::abs(t);
  const double gmax = spec.gamma_max();

  std::vector<double> log_gamma(d);
  for (std::size_t j = 0; j < d; ++j) log_gamma[j] = std::log(spec.gamma(j));

  // Coefficients on one lattice level, keyed by letter-count vector. The map
  // keeps iteration order deterministic, so sums do not depend on scheduling.
  using Level = std::map<std::vector<int>, std::complex<double>>;
  Level cur;
  cur.emplace(std::vector<int>(d, 0), std::complex<double>{1.0, 0.0});

  if (trace) {
    trace->level_mass.clear();
    trace->levels = 0;
  }

  const auto vertex_arg = [&](const std::vector<int>& n) {
    double lsum = 0.0;
    for (std::size_t j = 0; j < d; ++j) lsum += n[j] * log_gamma[j];
    return t * std::exp(lsum);
  };

  double gmax_pow = 1.0;
  for (int level = 0;; ++level) {
    if (trace) {
      double mass = 0.0;
      for (const auto& [n, c] : cur) mass += std::abs(c);
      trace->level_mass.push_back(mass);
      trace->levels = level;
    }
    if (gmax_pow * abs_t * R <= tol) {
      std::complex<double> acc{0.0, 0.0};
      double err = 0.0;
      for (const auto& [n, c] : cur) {
        const double s = vertex_arg(n);
        acc += c * unit_phase(s * x0);
        err = std::max(err, std::abs(s) * R);
      }
      return {acc, err};
    }
    if (level >= max_levels)
      fail(Err::TolTooSmall, "level cap reached before requested tolerance");

    Level next;
    for (const auto& [n, c] : cur) {
      const double s = vertex_arg(n);
      for (std::size_t j = 0; j < d; ++j) {
        const std::complex<double> w = c * phase_factor(spec, j, s);
        std::vector<int> m = n;
        ++m[j];
        next[std::move(m)] += w;
      }
    }
    if (next.size() > kMaxLevelVertices)
      fail(Err::TooLarge, "lattice level exceeds vertex budget");
    cur = std::move(next);
    gmax_pow *= gmax;
  }
}

FourierValue ft_homogeneous_product(double lambda, const std::vector<double>& a,
                                    const std::vector<double>& p, double t,
                                    int levels) {
  require(lambda > 0.0 && lambda < 1.0, Err::BadInput,
          "contraction ratio must lie in (0,1)");
  require(!a.empty() && a.size() == p.size(), Err::BadInput,
          "digit and weight lists must have equal nonzero length");
  require(levels >= 0, Err::BadInput, "levels must be nonnegative");
  double tot = 0.0;
  for (double w : p) {
    require(w > 0.0, Err::BadProbability, "weights must be positive");
    tot += w;
  }
  require(std::fabs(tot - 1.0) <= 1e-10, Err::BadProbability,
          "weights must sum to 1");

  double mean = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) mean += (p[k] / tot) * a[k];
  double spread = 0.0;
  for (double x : a) spread = std::max(spread, std::fabs(x - mean));

  std::complex<double> prod{1.0, 0.0};
  double s = t;
  for (int n = 0; n <= levels; ++n) {
    std::complex<double> phi{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k)
      phi += (p[k] / tot) * unit_phase((a[k] - mean) * s);
    prod *= phi;
    s *= lambda;
  }
  // Recentering shifted the measure by mean/(1-lambda); undo it as a phase.
  prod *= unit_phase(mean / (1.0 - lambda) * t);
  const double err = std::abs(s) * spread / (1.0 - lambda);
  return {prod, err};
}

DecayCurve decay_scan(const IfsSpec& spec, int N0, int N1, int grid, double tol,
                      int threads) {
  require(N0 <= N1, Err::BadInput, "block range is empty");
  require(grid >= 1, Err::BadInput, "grid must have at least one point");
  const double B1 = spec.B1;
  const int nblocks = N1 - N0 + 1;
  const std::size_t total =
      static_cast<std::size_t>(nblocks) * static_cast<std::size_t>(grid);

  // Right grid endpoint of block N is exactly B1^N; the next block starts
  // strictly above it.
  std::vector<double> ts(total);
  for (int b = 0; b < nblocks; ++b)
    for (int i = 0; i < grid; ++i)
      ts[static_cast<std::size_t>(b) * grid + i] = std::pow(
          B1, (N0 + b - 1) + static_cast<double>(i + 1) / static_cast<double>(grid));

  std::vector<double> vals(total);
  parallel_for(total, threads, [&](std::size_t idx) {
    vals[idx] = std::abs(ft_lattice(spec, ts[idx], tol).value);
  });

  DecayCurve curve;
  curve.B1 = B1;
  curve.blocks.resize(static_cast<std::size_t>(nblocks));
  for (int b = 0; b < nblocks; ++b) {
    DecayBlock& blk = curve.blocks[static_cast<std::size_t>(b)];
    blk.N = N0 + b;
    blk.sup_abs = -1.0;
    for (int i = 0; i < grid; ++i) {
      const std::size_t idx =
          static_cast<std::size_t>(b) * grid + static_cast<std::size_t>(i);
      // Strict comparison: ties resolve to the smallest frequency.
      if (vals[idx] > blk.sup_abs) {
        blk.sup_abs = vals[idx];
        blk.argmax_t = ts[idx];
      }
    }
  }
  return curve;
}

double fit_alpha(DecayCurve& curve) {
  require(curve.B1 > 1.0, Err::BadInput, "curve is missing its block base");
  const double logB1 = std::log(curve.B1);
  std::vector<double> xs, ys;
  for (const auto& blk : curve.blocks) {
    if (blk.sup_abs > 1e-12) {
      xs.push_back(blk.N * logB1);
      ys.push_back(-std::log(blk.sup_abs));
    }
  }
  require(xs.size() >= 2, Err::DegenerateFit,
          "fewer than two blocks with sup above the noise floor");
  const double n = static_cast<double>(xs.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  require(sxx > 0.0, Err::DegenerateFit, "usable blocks share one frequency scale");
  const double slope = sxy / sxx;
  const double icpt = ym - slope * xm;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (slope * xs[i] + icpt);
    ss += r * r;
  }
  curve.alpha_hat = slope;
  curve.fit_residual = std::sqrt(ss / n);
  return slope;
}

}  // namespace ssmf
