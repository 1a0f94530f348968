#include "ssmf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "ssmf/errors.hpp"

namespace ssmf {

namespace {

[[noreturn]] void bad_json(const std::string& context, const std::exception& e) {
  fail(Err::BadInput, context + ": " + e.what());
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Err::BadInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    bad_json("cannot parse " + path, e);
  }
}

IfsSpec ifs_from_json(const Json& j) {
  IfsSpec spec;
  try {
    for (const auto& jg : j.at("groups")) {
      RatioGroup g;
      g.ratio = jg.at("ratio").get<double>();
      for (const auto& jm : jg.at("maps"))
        g.maps.push_back({jm.at("a").get<double>(), jm.at("p").get<double>()});
      spec.groups.push_back(std::move(g));
    }
    if (j.contains("B1")) spec.B1 = j.at("B1").get<double>();
    if (j.contains("B2")) spec.B2 = j.at("B2").get<double>();
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    bad_json("malformed grouped spec", e);
  }
  return validate_ifs(spec);
}

Json ifs_to_json(const IfsSpec& spec) {
  Json j;
  j["groups"] = Json::array();
  for (const auto& g : spec.groups) {
    Json jg;
    jg["ratio"] = g.ratio;
    jg["maps"] = Json::array();
    for (const auto& m : g.maps) jg["maps"].push_back({{"a", m.a}, {"p", m.p}});
    j["groups"].push_back(std::move(jg));
  }
  j["B1"] = spec.B1;
  j["B2"] = spec.B2;
  return j;
}

OriginalIfsSpec original_from_json(const Json& j) {
  OriginalIfsSpec orig;
  try {
    orig.lambda = j.at("lambda").get<std::vector<double>>();
    orig.b = j.at("b").get<std::vector<double>>();
    if (j.contains("q")) {
      orig.q = j.at("q").get<std::vector<double>>();
    } else {
      orig.q.assign(orig.lambda.size(),
                    1.0 / static_cast<double>(orig.lambda.empty()
                                                  ? 1
                                                  : orig.lambda.size()));
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    bad_json("malformed original spec", e);
  }
  return validate_original(orig);
}

Json original_to_json(const OriginalIfsSpec& orig) {
  Json j;
  j["lambda"] = orig.lambda;
  j["b"] = orig.b;
  j["q"] = orig.q;
  return j;
}

bool is_original_spec(const Json& j) {
  return j.is_object() && j.contains("lambda") && !j.contains("groups");
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_decay_csv(std::ostream& os, const DecayCurve& curve,
                     const Json& config) {
  os << "# config: " << config.dump() << '\n';
  os << "N,t_argmax,sup_abs,alpha_hat_running\n";
  for (std::size_t i = 0; i < curve.blocks.size(); ++i) {
    DecayCurve prefix;
    prefix.B1 = curve.B1;
    prefix.blocks.assign(curve.blocks.begin(),
                         curve.blocks.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    std::string alpha = "nan";
    try {
      alpha = fmt_double(fit_alpha(prefix));
    } catch (const SpecError&) {
      // Not enough usable blocks yet.
    }
    const auto& blk = curve.blocks[i];
    os << blk.N << ',' << fmt_double(blk.argmax_t) << ','
       << fmt_double(blk.sup_abs) << ',' << alpha << '\n';
  }
}

void write_scan_jsonl(std::ostream& os, const ScanReport& rep,
                      const Json& config) {
  Json head;
  head["config"] = config;
  os << head.dump() << '\n';
  for (const auto& rec : rep.records) {
    Json line;
    line["t"] = rec.t;
    line["word"] = word_string(rec.word);
    line["good_track_count"] = rec.good_track_count;
    line["threshold"] = rec.threshold;
    line["witness"] = rec.witness;
    os << line.dump() << '\n';
  }
}

Json fourier_to_json(double t, const FourierValue& fv,
                     const std::string& method) {
  Json j;
  j["t"] = t;
  j["re"] = fv.value.real();
  j["im"] = fv.value.imag();
  j["abs"] = std::abs(fv.value);
  j["error_bound"] = fv.error_bound;
  j["method"] = method;
  return j;
}

Json decay_to_json(const DecayCurve& curve, const Json& config) {
  Json j;
  j["config"] = config;
  j["blocks"] = Json::array();
  for (const auto& blk : curve.blocks)
    j["blocks"].push_back({{"N", blk.N},
                           {"t_argmax", blk.argmax_t},
                           {"sup_abs", blk.sup_abs}});
  j["alpha_hat"] = curve.alpha_hat;
  j["fit_residual"] = curve.fit_residual;
  return j;
}

namespace {

Json stats_to_json(const StratumStats& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"se", s.se}};
}

}  // namespace

Json drift_to_json(const DriftReport& rep) {
  Json j;
  j["r"] = rep.r;
  j["case_a"] = stats_to_json(rep.case_a);
  j["case_b"] = stats_to_json(rep.case_b);
  j["per_i"] = Json::array();
  for (const auto& s : rep.per_i) j["per_i"].push_back(stats_to_json(s));
  j["support_ok"] = rep.support_ok;
  j["drift_ok"] = rep.drift_ok;
  return j;
}

Json tail_to_json(const TailReport& rep) {
  Json j;
  j["delta"] = rep.delta;
  j["points"] = Json::array();
  for (const auto& p : rep.points)
    j["points"].push_back({{"N", p.N},
                           {"t", p.t},
                           {"p_hat", p.p_hat},
                           {"ci_lo", p.ci_lo},
                           {"ci_hi", p.ci_hi}});
  j["slope_hat"] = rep.slope_hat;
  j["nonincreasing_within_ci"] = rep.nonincreasing_within_ci;
  return j;
}

Json reconstruction_to_json(const ReconstructionResult& res) {
  Json j;
  j["gamma"] = Json::array();
  for (const auto& g : res.gamma)
    j["gamma"].push_back({{"center", g.center}, {"halfwidth", g.halfwidth}});
  j["q"] = res.log.q;
  j["branching_steps"] = res.log.branching_steps;
  j["unique_steps"] = res.log.unique_steps;
  j["unique_mismatches"] = res.log.unique_mismatches;
  j["good_track_count"] = res.log.good_track_count;
  return j;
}

Json validate_to_json(const IfsSpec& spec) {
  const auto supp = support_interval(spec);
  const auto wts = aggregate_weights(spec);
  Json j;
  j["d"] = spec.d();
  j["map_count"] = spec.map_count();
  Json gammas = Json::array();
  for (std::size_t g = 0; g < spec.d(); ++g) gammas.push_back(spec.gamma(g));
  j["gammas"] = std::move(gammas);
  j["B1"] = spec.B1;
  j["B2"] = spec.B2;
  j["ek_normalized"] = spec.ek_normalized;
  j["support"] = {{"lo", supp.lo}, {"hi", supp.hi}};
  j["weights"] = {{"q", wts.p}, {"p_min", wts.p_min}, {"eps_floor", wts.eps_floor}};
  return j;
}

Json reduction_to_json(const ReducedIfs& red, const ReductionParams& params) {
  Json j;
  Json jp;
  jp["m"] = params.m;
  if (params.C1 > 0.0) jp["C1"] = params.C1;
  if (params.C2 > 0.0) jp["C2"] = params.C2;
  if (params.s > 0.0) jp["s"] = params.s;
  if (params.epsilon > 0.0) jp["epsilon"] = params.epsilon;
  jp["ell"] = params.ell;
  jp["d"] = params.d;
  j["params"] = std::move(jp);
  j["transform"] = {{"u", red.transform.u}, {"v", red.transform.v}};
  j["b"] = red.b;
  j["coords"] = red.lambda_power_coords;
  j["spec"] = ifs_to_json(red.spec);
  try {
    j["recovered_lambda"] = recover_lambda(red);
  } catch (const SpecError&) {
    // No pure-power groups survive (for example after merging); omit.
  }
  return j;
}

Json bounds_certificate(const EkConstants& c, int k1, double rate,
                        const HausdorffReport& hrep) {
  Json j;
  j["rho"] = c.rho;
  j["A"] = c.A;
  j["L1_log"] = c.L1_log;
  j["L2_log"] = c.L2_log;
  j["A1_log"] = c.A1_log;
  j["k1"] = k1;
  j["rate"] = rate;
  j["N0"] = hrep.N0;
  return j;
}

}  // namespace ssmf
