#include "ssmf/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "ssmf/errors.hpp"

namespace ssmf {

namespace {

bool ratios_equal(double r1, double r2) {
  return std::fabs(r1 - r2) <= 1e-12 * std::max({1.0, r1, r2});
}

}  // namespace

int choose_iterate_level(int m, double C1, double s) {
  require(m >= 2, Err::BadInput, "need at least two maps");
  require(C1 > 1.0, Err::BadInput, "C1 must exceed 1");
  require(s > 0.0, Err::BadInput, "s must be positive");
  for (int ell = 2; ell <= 10'000'000; ++ell) {
    const double rhs =
        static_cast<double>(m) * std::log(static_cast<double>(ell + m)) /
        (s * std::log(C1));
    if (static_cast<double>(ell) > rhs) return ell;
  }
  fail(Err::TooLarge, "no iterate level below the search cap");
}

NormalizedOriginal normalize_original(const OriginalIfsSpec& orig0, int ell) {
  OriginalIfsSpec orig = validate_original(orig0);
  require(ell >= 2, Err::BadInput, "iterate level must be at least 2");
  const std::size_t m = orig.m();
  const auto fix = [&](std::size_t j) {
    return orig.b[j] / (1.0 - orig.lambda[j]);
  };
  const auto same_fix = [&](std::size_t j, std::size_t k) {
    return std::fabs(fix(j) - fix(k)) <=
           1e-12 * std::max(1.0, std::fabs(fix(j)));
  };
  if (same_fix(0, 1)) {
    std::size_t k = 2;
    while (k < m && same_fix(0, k)) ++k;
    require(k < m, Err::TrivialIfs, "all maps share one fixed point");
    std::swap(orig.lambda[1], orig.lambda[k]);
    std::swap(orig.b[1], orig.b[k]);
    std::swap(orig.q[1], orig.q[k]);
  }

  const double l1 = orig.lambda[0];
  const double denom =
      orig.b[1] - orig.b[0] * (1.0 - orig.lambda[1]) / (1.0 - l1);
  const double target =
      std::numbers::pi / (1.0 - std::pow(l1, static_cast<double>(ell - 1)));
  const double u = target / denom;
  const double v = -u * orig.b[0] / (1.0 - l1);

  NormalizedOriginal out;
  out.transform = {u, v};
  out.spec = orig;
  for (std::size_t j = 0; j < m; ++j)
    out.spec.b[j] = u * orig.b[j] + v * (1.0 - orig.lambda[j]);
  // By construction; assigning directly avoids rounding residue in the two
  // translations everything downstream keys on.
  out.spec.b[0] = 0.0;
  out.spec.b[1] = target;
  return out;
}

ReducedIfs iterate_ifs(const OriginalIfsSpec& normalized, int ell,
                       bool merge_equal_ratios) {
  OriginalIfsSpec orig = validate_original(normalized);
  require(ell >= 2, Err::BadInput, "iterate level must be at least 2");
  require(orig.b[0] == 0.0, Err::NotNormalized,
          "first translation must be exactly 0");
  const std::size_t m = orig.m();
  double word_count = 1.0;
  for (int i = 0; i < ell; ++i) word_count *= static_cast<double>(m);
  require(word_count <= 1e7, Err::TooLarge, "composition count exceeds budget");

  const auto coords_of = [&](const std::vector<int>& w) {
    std::vector<int> c(m, 0);
    for (int letter : w) ++c[static_cast<std::size_t>(letter)];
    return c;
  };
  const auto translation_of = [&](const std::vector<int>& w) {
    double acc = 0.0;
    for (std::size_t i = w.size(); i-- > 0;) {
      const auto j = static_cast<std::size_t>(w[i]);
      acc = orig.b[j] + orig.lambda[j] * acc;
    }
    return acc;
  };
  const auto weight_of = [&](const std::vector<int>& w) {
    double acc = 1.0;
    for (int letter : w) acc *= orig.q[static_cast<std::size_t>(letter)];
    return acc;
  };

  std::vector<std::vector<int>> group_coords;
  std::vector<std::vector<MapSpec>> group_maps;
  std::map<std::vector<int>, std::size_t> index_of;
  const auto group_for = [&](const std::vector<int>& c) {
    const auto it = index_of.find(c);
    if (it != index_of.end()) return it->second;
    index_of.emplace(c, group_coords.size());
    group_coords.push_back(c);
    group_maps.emplace_back();
    return group_coords.size() - 1;
  };

  // The group of f_1^{ell-1} f_2 leads, and those two compositions lead in it:
  // their translations bracket the pi gap the whole construction is for.
  std::vector<int> word_a(static_cast<std::size_t>(ell), 0);
  word_a.back() = 1;
  std::vector<int> word_b(static_cast<std::size_t>(ell), 0);
  word_b.front() = 1;
  const std::size_t lead = group_for(coords_of(word_a));
  group_maps[lead].push_back({translation_of(word_a), weight_of(word_a)});
  group_maps[lead].push_back({translation_of(word_b), weight_of(word_b)});

  std::vector<int> w(static_cast<std::size_t>(ell), 0);
  for (;;) {
    if (w != word_a && w != word_b)
      group_maps[group_for(coords_of(w))].push_back(
          {translation_of(w), weight_of(w)});
    std::size_t pos = w.size();
    while (pos > 0 && w[pos - 1] == static_cast<int>(m) - 1) w[--pos] = 0;
    if (pos == 0) break;
    ++w[pos - 1];
  }

  std::vector<double> group_ratio(group_coords.size());
  for (std::size_t g = 0; g < group_coords.size(); ++g) {
    double r = 1.0;
    for (std::size_t j = 0; j < m; ++j)
      if (group_coords[g][j] > 0)
        r *= std::pow(orig.lambda[j],
                      static_cast<double>(group_coords[g][j]));
    group_ratio[g] = r;
  }

  std::vector<std::size_t> kept;
  std::vector<std::size_t> target_of(group_coords.size());
  for (std::size_t g = 0; g < group_coords.size(); ++g) {
    std::size_t tgt = kept.size();
    if (merge_equal_ratios)
      for (std::size_t k = 0; k < kept.size(); ++k)
        if (ratios_equal(group_ratio[kept[k]], group_ratio[g])) {
          tgt = k;
          break;
        }
    if (tgt == kept.size()) kept.push_back(g);
    target_of[g] = tgt;
  }

  IfsSpec assembled;
  assembled.groups.resize(kept.size());
  std::vector<std::vector<int>> kept_coords(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    assembled.groups[k].ratio = group_ratio[kept[k]];
    kept_coords[k] = group_coords[kept[k]];
  }
  for (std::size_t g = 0; g < group_coords.size(); ++g) {
    auto& maps = assembled.groups[target_of[g]].maps;
    maps.insert(maps.end(), group_maps[g].begin(), group_maps[g].end());
  }

  ReducedIfs red;
  red.spec = validate_ifs(assembled);
  red.b = orig.b[1];
  red.ell = ell;
  red.lambda_power_coords = std::move(kept_coords);
  return red;
}

ReducedIfs reduce_original(const OriginalIfsSpec& orig, int ell,
                           bool merge_equal_ratios) {
  NormalizedOriginal norm = normalize_original(orig, ell);
  ReducedIfs red = iterate_ifs(norm.spec, ell, merge_equal_ratios);
  red.transform = norm.transform;
  return red;
}

std::vector<double> recover_lambda(const ReducedIfs& red) {
  require(!red.lambda_power_coords.empty(), Err::BadInput,
          "reduction carries no composition exponents");
  require(red.ell >= 2, Err::BadInput, "reduction carries no iterate level");
  const std::size_t m = red.lambda_power_coords.front().size();
  std::vector<double> lam(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    bool found = false;
    for (std::size_t g = 0; g < red.lambda_power_coords.size() && !found; ++g) {
      const auto& c = red.lambda_power_coords[g];
      bool pure = c[j] == red.ell;
      for (std::size_t i = 0; i < m && pure; ++i)
        if (i != j && c[i] != 0) pure = false;
      if (pure) {
        lam[j] = std::pow(red.spec.gamma(g), 1.0 / static_cast<double>(red.ell));
        found = true;
      }
    }
    require(found, Err::BadCoordinate,
            "no pure composition power for this ratio");
  }
  return lam;
}

IfsSpec to_ifs(const OriginalIfsSpec& orig0) {
  OriginalIfsSpec orig = validate_original(orig0);
  IfsSpec out;
  for (std::size_t j = 0; j < orig.m(); ++j) {
    std::size_t g = out.groups.size();
    for (std::size_t k = 0; k < out.groups.size(); ++k)
      if (ratios_equal(out.groups[k].ratio, orig.lambda[j])) {
        g = k;
        break;
      }
    if (g == out.groups.size()) out.groups.push_back({orig.lambda[j], {}});
    out.groups[g].maps.push_back({orig.b[j], orig.q[j]});
  }
  return validate_ifs(out);
}

}  // namespace ssmf
