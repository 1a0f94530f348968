#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssmf/cover_bounds.hpp"
#include "ssmf/diagnostics.hpp"
#include "ssmf/ek_lattice.hpp"
#include "ssmf/errors.hpp"
#include "ssmf/fourier.hpp"
#include "ssmf/ifs.hpp"
#include "ssmf/io.hpp"
#include "ssmf/parallel.hpp"
#include "ssmf/reduction.hpp"
#include "ssmf/rng.hpp"

namespace {

// JSON configuration files: top-level keys name long options, nested objects
// name subcommand sections. Command-line values win over configured ones.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw CLI::FileError(std::string("config parse failure: ") + e.what());
    }
    std::vector<CLI::ConfigItem> out;
    walk(j, {}, out);
    return out;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  static void walk(const nlohmann::json& j, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        walk(value, std::move(next), out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& el : value) item.inputs.push_back(scalar(el));
      else
        item.inputs.push_back(scalar(value));
      out.push_back(std::move(item));
    }
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  ssmf::require(f.good(), ssmf::Err::BadInput, "cannot open " + out_path);
  f << text;
}

ssmf::IfsSpec load_grouped(const std::string& path) {
  const auto j = ssmf::read_json_file(path);
  if (ssmf::is_original_spec(j))
    return ssmf::to_ifs(ssmf::original_from_json(j));
  return ssmf::ifs_from_json(j);
}

double default_rho(const ssmf::IfsSpec& spec) {
  return 0.25 / ((1.0 + spec.B2) * (1.0 + 3.0 * spec.B2));
}

int pick_k1(const ssmf::IfsSpec& spec, int k1, double s) {
  if (k1 > 0) return k1;
  ssmf::require(s > 0.0, ssmf::Err::BadInput,
                "give --k1 directly or --s to derive it");
  const auto c = ssmf::constants_of(spec.B1, spec.B2,
                                    static_cast<int>(spec.d()), s);
  return ssmf::choose_k1(c);
}

struct FtArgs {
  std::string spec_path, method = "lattice", out;
  double t = 0.0, tol = 1e-8;
  int depth = 12, levels = -1;
};

void run_ft(const FtArgs& a) {
  const auto spec = load_grouped(a.spec_path);
  ssmf::FourierValue fv;
  if (a.method == "lattice") {
    fv = ssmf::ft_lattice(spec, a.t, a.tol);
  } else if (a.method == "bruteforce") {
    fv = ssmf::ft_bruteforce(spec, a.t, a.depth);
  } else if (a.method == "product") {
    ssmf::require(spec.d() == 1, ssmf::Err::BadInput,
                  "product form needs a single ratio");
    const auto& g = spec.groups.front();
    std::vector<double> av, pv;
    for (const auto& m : g.maps) {
      av.push_back(m.a);
      pv.push_back(m.p);
    }
    int levels = a.levels;
    if (levels < 0) {
      // Smallest truncation whose tail bound clears the tolerance.
      double mean = 0.0;
      for (const auto& m : g.maps) mean += m.p * m.a;
      double spread = 0.0;
      for (const auto& m : g.maps)
        spread = std::max(spread, std::fabs(m.a - mean));
      double tail = std::fabs(a.t) * spread * g.ratio / (1.0 - g.ratio);
      levels = 0;
      while (tail > a.tol && levels < 1000000) {
        tail *= g.ratio;
        ++levels;
      }
      ssmf::require(tail <= a.tol, ssmf::Err::TolTooSmall,
                    "truncation cap reached before tolerance");
    }
    fv = ssmf::ft_homogeneous_product(g.ratio, av, pv, a.t, levels);
  } else {
    ssmf::fail(ssmf::Err::BadInput, "unknown method " + a.method);
  }
  emit(a.out, ssmf::fourier_to_json(a.t, fv, a.method).dump(2) + "\n");
}

struct DecayArgs {
  std::string spec_path, format = "csv", out;
  int N0 = 1, N1 = 8, grid = 256, threads = 0;
  double tol = 1e-8;
};

void run_decay(const DecayArgs& a) {
  const auto spec = load_grouped(a.spec_path);
  auto curve = ssmf::decay_scan(spec, a.N0, a.N1, a.grid, a.tol, a.threads);
  curve.alpha_hat = std::nan("");
  curve.fit_residual = std::nan("");
  try {
    ssmf::fit_alpha(curve);
  } catch (const ssmf::SpecError&) {
    // Degenerate curves keep nan; per-row fits handle the CSV case.
  }
  ssmf::Json config;
  config["spec"] = a.spec_path;
  config["N0"] = a.N0;
  config["N1"] = a.N1;
  config["grid"] = a.grid;
  config["tol"] = a.tol;
  std::ostringstream os;
  if (a.format == "csv")
    ssmf::write_decay_csv(os, curve, config);
  else if (a.format == "json")
    os << ssmf::decay_to_json(curve, config).dump(2) << "\n";
  else
    ssmf::fail(ssmf::Err::BadInput, "unknown format " + a.format);
  emit(a.out, os.str());
}

struct ReduceArgs {
  std::string spec_path, out;
  int ell = 0;
  double C1 = 0.0, C2 = 0.0, s = 0.0, epsilon = 0.0;
  bool merge = false;
};

void run_reduce(const ReduceArgs& a) {
  const auto j = ssmf::read_json_file(a.spec_path);
  ssmf::require(ssmf::is_original_spec(j), ssmf::Err::BadInput,
                "reduction starts from an original spec (lambda/b/q)");
  const auto orig = ssmf::original_from_json(j);
  int ell = a.ell;
  if (ell == 0) {
    ssmf::require(a.C1 > 1.0 && a.s > 0.0, ssmf::Err::BadInput,
                  "give --ell directly or --C1 and --s to derive it");
    ell = ssmf::choose_iterate_level(static_cast<int>(orig.m()), a.C1, a.s);
  }
  const auto red = ssmf::reduce_original(orig, ell, a.merge);
  ssmf::ReductionParams params;
  params.m = static_cast<int>(orig.m());
  params.C1 = a.C1;
  params.C2 = a.C2;
  params.s = a.s;
  params.epsilon = a.epsilon;
  params.ell = ell;
  params.d = static_cast<int>(red.spec.d());
  emit(a.out, ssmf::reduction_to_json(red, params).dump(2) + "\n");
}

struct ScanArgs {
  std::string spec_path, out;
  int N = 0, k1 = 0, grid = 64, threads = 0;
  std::size_t words = 64;
  double rho = 0.0, s = 0.0;
  std::uint64_t seed = 1;
};

void run_scan(const ScanArgs& a) {
  const auto spec = load_grouped(a.spec_path);
  const double rho = a.rho > 0.0 ? a.rho : default_rho(spec);
  const int k1 = pick_k1(spec, a.k1, a.s);
  const auto sampler = ssmf::make_bernoulli_sampler(spec, a.N, a.seed);
  const auto rep = ssmf::exceptional_scan(spec, a.N, k1, rho, a.grid, a.words,
                                          sampler, a.threads);
  ssmf::Json config;
  config["spec"] = a.spec_path;
  config["N"] = a.N;
  config["k1"] = k1;
  config["rho"] = rho;
  config["grid"] = a.grid;
  config["words"] = a.words;
  config["seed"] = a.seed;
  config["witnesses"] = rep.witnesses;
  std::ostringstream os;
  ssmf::write_scan_jsonl(os, rep, config);
  emit(a.out, os.str());
}

struct DiagnoseArgs {
  std::string spec_path, out;
  int N = 100, k1 = 0, threads = 0;
  std::size_t trials = 2000;
  double t = 0.0, rho = 0.0, delta = 0.0, s = 0.0;
  std::uint64_t seed = 1;
  std::vector<int> tail_N;
};

void run_diagnose(const DiagnoseArgs& a) {
  const auto spec = load_grouped(a.spec_path);
  const double rho = a.rho > 0.0 ? a.rho : default_rho(spec);
  const double t =
      a.t > 0.0 ? a.t : std::pow(spec.B1, static_cast<double>(a.N) - 0.5);
  ssmf::Json j;
  ssmf::Json config;
  config["spec"] = a.spec_path;
  config["t"] = t;
  config["N"] = a.N;
  config["trials"] = a.trials;
  config["seed"] = a.seed;
  config["rho"] = rho;
  j["config"] = config;
  j["drift"] = ssmf::Json::array();
  for (int r = 0; r < static_cast<int>(spec.d()); ++r)
    j["drift"].push_back(ssmf::drift_to_json(ssmf::submartingale_check(
        spec, t, a.N, r, a.trials, a.seed, rho, a.threads)));
  j["drift"].push_back(ssmf::drift_to_json(ssmf::martingale_check(
      spec, t, a.N, a.trials, ssmf::derive_seed(a.seed, 0x5eed), rho,
      a.threads)));
  if (!a.tail_N.empty()) {
    double delta = a.delta;
    if (delta <= 0.0) {
      const int k1 = pick_k1(spec, a.k1, a.s);
      const auto wts = ssmf::aggregate_weights(spec);
      delta = ssmf::delta_chain(static_cast<int>(spec.d()), k1, wts.p_min,
                                wts.p.at(0))
                  .delta;
    }
    std::vector<double> ts;
    for (int N : a.tail_N)
      ts.push_back(std::pow(spec.B1, static_cast<double>(N) - 0.5));
    j["tail"] = ssmf::tail_to_json(
        ssmf::tail_estimate(spec, a.tail_N, ts, delta, a.trials,
                            ssmf::derive_seed(a.seed, 0x7a11), rho, a.threads));
  }
  emit(a.out, j.dump(2) + "\n");
}

struct BoundsArgs {
  std::string spec_path, out;
  double B1 = 0.0, B2 = 0.0, s = 0.0;
  int d = 0, k1 = 0, N_max = 0;
};

void run_bounds(const BoundsArgs& a) {
  double B1 = a.B1, B2 = a.B2;
  int d = a.d;
  if (!a.spec_path.empty()) {
    const auto spec = load_grouped(a.spec_path);
    if (B1 <= 0.0) B1 = spec.B1;
    if (B2 <= 0.0) B2 = spec.B2;
    if (d <= 0) d = static_cast<int>(spec.d());
  }
  ssmf::require(B1 > 0.0 && B2 > 0.0 && d > 0, ssmf::Err::BadInput,
                "give --spec or all of --B1, --B2, --d");
  ssmf::require(a.s > 0.0, ssmf::Err::BadInput, "give --s");
  auto c = ssmf::constants_of(B1, B2, d, a.s);
  const int k1 = a.k1 > 0 ? a.k1 : ssmf::choose_k1(c);
  c.k1 = k1;
  const double rate = ssmf::ek_rate(c, k1);
  int n_max = a.N_max;
  if (n_max <= 0) n_max = std::max(2, std::min(k1 - 1, 10000));
  const auto hrep = ssmf::hausdorff_sum_check(c, k1, n_max);
  emit(a.out, ssmf::bounds_certificate(c, k1, rate, hrep).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier decay toolkit for self-similar measures"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with default option values");

  auto* validate = app.add_subcommand("validate", "check a spec file");
  std::string v_spec, v_out;
  validate->add_option("--spec", v_spec, "spec file")->required();
  validate->add_option("--out", v_out, "output path (default stdout)");
  validate->fallthrough();
  validate->callback([&] {
    emit(v_out, ssmf::validate_to_json(load_grouped(v_spec)).dump(2) + "\n");
  });

  auto* ft = app.add_subcommand("ft", "evaluate the Fourier transform");
  FtArgs fa;
  ft->add_option("--spec", fa.spec_path, "spec file")->required();
  ft->add_option("--t", fa.t, "frequency")->required();
  ft->add_option("--tol", fa.tol, "absolute tolerance");
  ft->add_option("--method", fa.method, "lattice|bruteforce|product");
  ft->add_option("--depth", fa.depth, "bruteforce word length");
  ft->add_option("--levels", fa.levels, "product truncation (-1: from tol)");
  ft->add_option("--out", fa.out, "output path (default stdout)");
  ft->fallthrough();
  ft->callback([&] { run_ft(fa); });

  auto* decay = app.add_subcommand("decay", "sup of |ft| over frequency blocks");
  DecayArgs da;
  decay->add_option("--spec", da.spec_path, "spec file")->required();
  decay->add_option("--N0", da.N0, "first block")->required();
  decay->add_option("--N1", da.N1, "last block")->required();
  decay->add_option("--grid", da.grid, "points per block");
  decay->add_option("--tol", da.tol, "evaluation tolerance");
  decay->add_option("--threads", da.threads, "worker threads (0: auto)");
  decay->add_option("--format", da.format, "csv|json");
  decay->add_option("--out", da.out, "output path (default stdout)");
  decay->fallthrough();
  decay->callback([&] { run_decay(da); });

  auto* reduce = app.add_subcommand("reduce", "normalize and iterate an original system");
  ReduceArgs ra;
  reduce->add_option("--spec", ra.spec_path, "original spec file")->required();
  reduce->add_option("--ell", ra.ell, "iterate level (0: derive from C1, s)");
  reduce->add_option("--C1", ra.C1, "lower contraction bound parameter");
  reduce->add_option("--C2", ra.C2, "upper contraction bound parameter");
  reduce->add_option("--s", ra.s, "similarity exponent");
  reduce->add_option("--epsilon", ra.epsilon, "probability floor parameter");
  reduce->add_flag("--merge-equal-ratios", ra.merge,
                   "combine groups with coinciding ratios");
  reduce->add_option("--out", ra.out, "output path (default stdout)");
  reduce->fallthrough();
  reduce->callback([&] { run_reduce(ra); });

  auto* scan = app.add_subcommand("ek-scan", "good-track census over a frequency grid");
  ScanArgs sa;
  scan->add_option("--spec", sa.spec_path, "spec file")->required();
  scan->add_option("--N", sa.N, "word length / block index")->required();
  scan->add_option("--k1", sa.k1, "sparsity parameter (0: derive from --s)");
  scan->add_option("--s", sa.s, "similarity exponent for deriving k1");
  scan->add_option("--rho", sa.rho, "goodness margin (0: from B2)");
  scan->add_option("--grid", sa.grid, "frequency grid points");
  scan->add_option("--words", sa.words, "sampled words");
  scan->add_option("--seed", sa.seed, "sampler seed");
  scan->add_option("--threads", sa.threads, "worker threads (0: auto)");
  scan->add_option("--out", sa.out, "output path (default stdout)");
  scan->fallthrough();
  scan->callback([&] { run_scan(sa); });

  auto* diagnose = app.add_subcommand("diagnose", "drift and tail statistics for path processes");
  DiagnoseArgs ga;
  diagnose->add_option("--spec", ga.spec_path, "spec file")->required();
  diagnose->add_option("--t", ga.t, "frequency (0: mid-block at N)");
  diagnose->add_option("--N", ga.N, "word length");
  diagnose->add_option("--trials", ga.trials, "sampled words per statistic");
  diagnose->add_option("--seed", ga.seed, "sampler seed");
  diagnose->add_option("--rho", ga.rho, "goodness margin (0: from B2)");
  diagnose->add_option("--k1", ga.k1, "sparsity parameter for the tail delta");
  diagnose->add_option("--s", ga.s, "similarity exponent for deriving k1");
  diagnose->add_option("--delta", ga.delta, "tail threshold (0: from the chain)");
  diagnose->add_option("--tail-N", ga.tail_N, "word lengths for tail estimates")
      ->delimiter(',');
  diagnose->add_option("--threads", ga.threads, "worker threads (0: auto)");
  diagnose->add_option("--out", ga.out, "output path (default stdout)");
  diagnose->fallthrough();
  diagnose->callback([&] { run_diagnose(ga); });

  auto* bounds = app.add_subcommand("bounds", "constants and cover certificate");
  BoundsArgs ba;
  bounds->add_option("--spec", ba.spec_path, "spec file for B1, B2, d");
  bounds->add_option("--B1", ba.B1, "lower frequency base");
  bounds->add_option("--B2", ba.B2, "upper frequency base");
  bounds->add_option("--d", ba.d, "number of ratios");
  bounds->add_option("--s", ba.s, "similarity exponent")->required();
  bounds->add_option("--k1", ba.k1, "sparsity parameter (0: choose)");
  bounds->add_option("--N-max", ba.N_max, "terms to tabulate (0: k1-1 capped)");
  bounds->add_option("--out", ba.out, "output path (default stdout)");
  bounds->fallthrough();
  bounds->callback([&] { run_bounds(ba); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ssmf::SpecError& e) {
    std::cerr << e.what() << '\n';
    return e.numeric_guard() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 0;
}
