#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "ssmf/cover_bounds.hpp"
#include "ssmf/diagnostics.hpp"
#include "ssmf/ek_lattice.hpp"
#include "ssmf/fourier.hpp"
#include "ssmf/ifs.hpp"
#include "ssmf/reduction.hpp"

namespace ssmf {

// Insertion order is preserved so emitted documents are stable byte-for-byte.
using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);

// {"groups":[{"ratio":r,"maps":[{"a":x,"p":y},...]},...],"B1":...,"B2":...}
// with B1/B2 optional. The result is validated.
IfsSpec ifs_from_json(const Json& j);
Json ifs_to_json(const IfsSpec& spec);

// {"lambda":[...],"b":[...],"q":[...]} with q optional (uniform by default).
OriginalIfsSpec original_from_json(const Json& j);
Json original_to_json(const OriginalIfsSpec& orig);

bool is_original_spec(const Json& j);

// Shortest round-trip decimal form; used for CSV cells.
std::string fmt_double(double x);

// First line "# config: {...}", then a header row and one row per block.
// alpha_hat_running refits on the blocks seen so far; rows without enough
// usable blocks print nan.
void write_decay_csv(std::ostream& os, const DecayCurve& curve,
                     const Json& config);

// First line {"config":...}, then one record per line in scan order.
void write_scan_jsonl(std::ostream& os, const ScanReport& rep,
                      const Json& config);

Json fourier_to_json(double t, const FourierValue& fv, const std::string& method);
Json decay_to_json(const DecayCurve& curve, const Json& config);
Json drift_to_json(const DriftReport& rep);
Json tail_to_json(const TailReport& rep);
Json reconstruction_to_json(const ReconstructionResult& res);
Json validate_to_json(const IfsSpec& spec);
Json reduction_to_json(const ReducedIfs& red, const ReductionParams& params);

// {"rho","A","L1_log","L2_log","A1_log","k1","rate","N0"}
Json bounds_certificate(const EkConstants& c, int k1, double rate,
                        const HausdorffReport& hrep);

}  // namespace ssmf
