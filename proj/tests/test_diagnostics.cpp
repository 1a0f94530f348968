#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "ssmf/diagnostics.hpp"
#include "ssmf/ek_lattice.hpp"
#include "ssmf/errors.hpp"
#include "ssmf/ifs.hpp"
#include "ssmf/rng.hpp"

using namespace ssmf;

namespace {

IfsSpec single_half() {
  IfsSpec s;
  s.groups.push_back({0.5, {{-1.0, 0.5}, {1.0, 0.5}}});
  return validate_ifs(s);
}

IfsSpec generic_pair() {
  IfsSpec s;
  s.groups.push_back({0.5, {{-1.0, 0.3}, {1.0, 0.3}}});
  s.groups.push_back({0.3, {{0.4, 0.4}}});
  return validate_ifs(s);
}

IfsSpec dyadic_pair() {
  IfsSpec s;
  s.groups.push_back({0.5, {{-1.0, 0.25}, {1.0, 0.25}}});
  s.groups.push_back({0.25, {{0.5, 0.5}}});
  return validate_ifs(s);
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("hand traced counting processes on a halving cascade") {
  // gamma = 1/2, t = 44: prefix values 44, 22, 11, 5.5, 2.75, 1.375, ...;
  // with rho = 0.3 exactly the vertices at 5.5 and 1.375 are good.
  const auto sample = path_processes(single_half(), 44.0, Word(8, 0), 0.3);
  const std::vector<int> X0{0, 0, 0, 1, 1, 2, 2, 2, 2};
  const std::vector<int> X1{0, 0, 1, 1, 2, 2, 2, 2, 2};
  const std::vector<int> Y{0, 0, 0, 0, 1, 1, 2, 2, 2};
  REQUIRE(sample.X.size() == 2);
  CHECK(sample.X[0] == X0);
  CHECK(sample.X[1] == X1);
  CHECK(sample.Y == Y);
  CHECK(sample.p_min == doctest::Approx(1.0));
  CHECK(sample.p1 == doctest::Approx(1.0));
  for (int i = 0; i + 1 <= 8; ++i) {
    CHECK(sample.Z(0, i) == doctest::Approx(0.0));
    CHECK(sample.U(i) == doctest::Approx(0.0));
  }
}

TEST_CASE("oracle and spec process overloads agree") {
  const auto spec = generic_pair();
  const double t = 97.3, rho = 0.05;
  Rng rng(42);
  const auto word = sample_word(spec, 20, rng);
  const GoodnessOracle oracle(spec, t, rho);
  const auto a = path_processes(oracle, aggregate_weights(spec), word);
  const auto b = path_processes(spec, t, word, rho);
  CHECK(a.X == b.X);
  CHECK(a.Y == b.Y);
  CHECK(a.p_min == b.p_min);
  CHECK(a.p1 == b.p1);
}

TEST_CASE("dyadic frequencies freeze every process at zero") {
  Rng rng(7);
  const auto spec = dyadic_pair();
  const auto word = sample_word(spec, 30, rng);
  const auto s = path_processes(spec, 1048576.0, word, 1e-4);
  for (const auto& row : s.X)
    for (int v : row) CHECK(v == 0);
  for (int v : s.Y) CHECK(v == 0);
}

TEST_CASE("counting processes are monotone and dominated") {
  Rng rng(1111);
  const auto spec = generic_pair();
  for (int trial = 0; trial < 25; ++trial) {
    const double t = rng.uniform(50.0, 5000.0);
    const auto word = sample_word(spec, 25, rng);
    const auto s = path_processes(spec, t, word, 0.05);
    for (const auto& row : s.X)
      for (std::size_t i = 0; i < row.size(); ++i) {
        CHECK(row[i] <= static_cast<int>(i));
        if (i) CHECK(row[i] >= row[i - 1]);
      }
    for (std::size_t i = 1; i < s.Y.size(); ++i) {
      CHECK(s.Y[i] >= s.Y[i - 1]);
      // Y tallies good previous vertices, a subset of what X[0] tallies.
      CHECK(s.Y[i] <= s.X[0][i - 1]);
    }
  }
}

TEST_CASE("compensated increments stay on their three point support") {
  Rng rng(2222);
  const auto spec = generic_pair();
  const auto w = aggregate_weights(spec);
  const double step_z = 1.0 / w.p_min - 1.0;
  const double step_u = 1.0 / w.p[0] - 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double t = rng.uniform(100.0, 1e4);
    const int N = 22;
    const auto word = sample_word(spec, N, rng);
    const auto s = path_processes(spec, t, word, 0.05);
    for (int r = 0; r < 2; ++r)
      for (int i = 0; i + 2 <= N; ++i) {
        const double z = s.Z(r, i + 1) - s.Z(r, i);
        const bool ok = std::fabs(z) <= 1e-12 || std::fabs(z + 1.0) <= 1e-12 ||
                        std::fabs(z - step_z) <= 1e-12;
        CHECK(ok);
        // Steps whose compensator stands still must vanish exactly.
        if (s.X[static_cast<std::size_t>(r) + 1][static_cast<std::size_t>(i) + 1] ==
            s.X[static_cast<std::size_t>(r) + 1][static_cast<std::size_t>(i)])
          CHECK(z == 0.0);
      }
    for (int i = 0; i + 2 <= N; ++i) {
      const double u = s.U(i + 1) - s.U(i);
      const bool ok = std::fabs(u) <= 1e-12 || std::fabs(u + 1.0) <= 1e-12 ||
                      std::fabs(u - step_u) <= 1e-12;
      CHECK(ok);
      if (s.X[0][static_cast<std::size_t>(i) + 1] ==
          s.X[0][static_cast<std::size_t>(i)])
        CHECK(u == 0.0);
    }
  }
}

TEST_CASE("deep good tracks force terminal deep counts") {
  // Each window vertex on a good track certifies a good descendant within
  // d+1 levels of some later path vertex; at most d+1 window vertices share
  // one certificate, so X[d][N] * (d+1) dominates the window census.
  const auto spec = generic_pair();
  const int N = 30, d = 2;
  Rng rng(3333);
  for (int trial = 0; trial < 300; ++trial) {
    const double t = rng.uniform(64.0, 1e5);
    const auto word = sample_word(spec, N, rng);
    const GoodnessOracle oracle(spec, t, 0.02);
    const auto s = path_processes(oracle, aggregate_weights(spec), word);
    TypeVector n(2, 0);
    int window = 0;
    for (int i = 1; i <= N; ++i) {
      ++n[static_cast<std::size_t>(word[static_cast<std::size_t>(i - 1)])];
      if (i >= d + 1 && i <= N - d - 1 && oracle.on_good_track(n)) ++window;
    }
    CHECK(s.X[2][static_cast<std::size_t>(N)] * (d + 1) >= window);
  }
}

TEST_CASE("submartingale monte carlo accepts a generic spectrum") {
  const auto spec = generic_pair();
  const double t = std::pow(spec.B1, 39.5);
  for (int r = 0; r < 2; ++r) {
    const auto rep = submartingale_check(spec, t, 40, r, 2000, 99, 0.02);
    CHECK(rep.r == r);
    CHECK(rep.support_ok);
    CHECK(rep.drift_ok);
    CHECK(rep.case_a.mean == 0.0);
    CHECK(rep.case_a.count + rep.case_b.count == 2000u * 39u);
    CHECK(rep.per_i.size() == 39);
    CHECK(rep.case_b.count >= 30u);
    CHECK(rep.case_b.mean >= -3.0 * rep.case_b.se);
  }
}

TEST_CASE("martingale monte carlo centers on zero") {
  const auto spec = generic_pair();
  const double t = std::pow(spec.B1, 39.5);
  const auto rep = martingale_check(spec, t, 40, 2000, 99, 0.02);
  CHECK(rep.r == -1);
  CHECK(rep.support_ok);
  CHECK(rep.drift_ok);
  CHECK(rep.case_a.mean == 0.0);
  CHECK(std::fabs(rep.case_b.mean) <= 3.0 * rep.case_b.se);
}

TEST_CASE("drift statistics demand enough samples and a valid depth") {
  const auto spec = generic_pair();
  CHECK_THROWS_AS_MESSAGE(submartingale_check(spec, 100.0, 20, 0, 500, 1, 0.05),
                          SpecError, doctest::Contains("InsufficientSamples"));
  CHECK_THROWS_AS(submartingale_check(spec, 100.0, 20, 2, 2000, 1, 0.05),
                  SpecError);
  CHECK_THROWS_AS(submartingale_check(spec, 100.0, 20, -1, 2000, 1, 0.05),
                  SpecError);
}

TEST_CASE("drift reports are deterministic in the seed") {
  const auto spec = generic_pair();
  const auto a = martingale_check(spec, 500.0, 25, 1200, 31, 0.05);
  const auto b = martingale_check(spec, 500.0, 25, 1200, 31, 0.05);
  CHECK(a.case_b.mean == b.case_b.mean);
  CHECK(a.case_b.count == b.case_b.count);
  const auto c = martingale_check(spec, 500.0, 25, 1200, 32, 0.05);
  CHECK(a.case_b.mean != c.case_b.mean);
}

TEST_CASE("threshold cascade for the concentration bound") {
  const auto chain = delta_chain(2, 100, 0.5, 0.5);
  REQUIRE(chain.delta_r.size() == 3);
  CHECK(chain.delta_r[2] == 1.0 / 300.0);
  CHECK(chain.delta_r[1] == doctest::Approx(1.0 / 1800.0).epsilon(1e-15));
  CHECK(chain.delta_r[0] == doctest::Approx(1.0 / 10800.0).epsilon(1e-15));
  CHECK(chain.delta == doctest::Approx(1.0 / 64800.0).epsilon(1e-15));
}

TEST_CASE("azuma bound evaluation") {
  CHECK(azuma_rhs(0.1, 0.5, 1000) ==
        doctest::Approx(0.8703247258333905).epsilon(1e-15));
  CHECK(azuma_rhs(0.0, 0.5, 50) == 1.0);
  CHECK(azuma_rhs(0.2, 0.5, 1000) < azuma_rhs(0.1, 0.5, 1000));
  CHECK(azuma_rhs(0.1, 0.5, 2000) < azuma_rhs(0.1, 0.5, 1000));
}

TEST_CASE("tail estimate with a zero threshold is identically zero") {
  const auto spec = generic_pair();
  const auto rep = tail_estimate(spec, {10, 20}, {700.0, 7e5}, 0.0, 200, 5, 0.05);
  REQUIRE(rep.points.size() == 2);
  for (const auto& p : rep.points) {
    CHECK(p.p_hat == 0.0);
    CHECK(p.ci_lo == 0.0);
    CHECK(p.ci_hi < 0.05);
  }
  CHECK(rep.nonincreasing_within_ci);
}

TEST_CASE("tail estimate saturates on resonant frequencies") {
  const auto spec = dyadic_pair();
  // Powers of two: Y never moves, so the tail event happens always.
  const auto rep = tail_estimate(spec, {20, 24}, {1048576.0, 16777216.0},
                                 1.0 / 300.0, 150, 5, 1e-4);
  for (const auto& p : rep.points) {
    CHECK(p.p_hat == 1.0);
    CHECK(p.ci_hi == 1.0);
  }
}

TEST_CASE("tail estimate trends down for a generic spectrum") {
  const auto spec = generic_pair();
  std::vector<int> Ns{20, 30, 40};
  std::vector<double> ts;
  for (int N : Ns) ts.push_back(std::pow(spec.B1, N - 0.5));
  const auto chain = delta_chain(2, 50, 0.4, 0.6);
  const auto rep = tail_estimate(spec, Ns, ts, chain.delta, 400, 11, 0.02);
  REQUIRE(rep.points.size() == 3);
  CHECK(rep.nonincreasing_within_ci);
  for (const auto& p : rep.points) {
    CHECK(p.ci_lo <= p.p_hat);
    CHECK(p.p_hat <= p.ci_hi);
    CHECK(p.ci_lo >= 0.0);
    CHECK(p.ci_hi <= 1.0);
  }
  CHECK(rep.delta == chain.delta);
}

TEST_CASE("tail estimate validates its sampling plan") {
  const auto spec = generic_pair();
  CHECK_THROWS_AS_MESSAGE(tail_estimate(spec, {10}, {700.0}, 0.1, 50, 1, 0.05),
                          SpecError, doctest::Contains("InsufficientSamples"));
  CHECK_THROWS_AS(tail_estimate(spec, {10, 20}, {700.0}, 0.1, 200, 1, 0.05),
                  SpecError);
}

}  // TEST_SUITE
