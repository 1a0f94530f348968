#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ssmf/ifs.hpp"
#include "ssmf/rng.hpp"

namespace ssmf {

// Letter counts per ratio group; the vertex set of the frequency lattice.
using TypeVector = std::vector<int>;

// A path in the lattice, one 0-based group index per step.
using Word = std::vector<int>;

// Letters rendered 1-based: "121" for {0,1,0}. Falls back to a comma-joined
// list when an alphabet has more than nine letters.
std::string word_string(const Word& w);

// Letter counts of a word inside a d-letter alphabet.
TypeVector type_vector(const Word& w, std::size_t d);

// Draw a word of iid letters with the aggregated group weights as law.
Word sample_word(const IfsSpec& spec, int N, Rng& rng);

struct IntegerSplit {
  long long K = 0;  // nearest integer, halves rounded up
  double eps = 0.0; // x - K, in [-1/2, 1/2)
};

// Guarded for |x| <= 2^62 so the integer part is exact in both fields.
IntegerSplit nearest_integer_split(double x);

struct FrequencyVertexRecord {
  TypeVector n;
  double value = 0.0;  // t * prod_j gamma_j^{n_j}
  long long K = 0;
  double eps = 0.0;
  bool is_good = false;
  bool on_good_track = false;
  bool out_edge_good = false;  // edges inherit goodness from their source
};

// Goodness queries for the lattice at one frequency. A vertex is good when
// its value is >= 1 and at distance >= rho from the integers. Values are
// formed as t * prod_j pow(gamma_j, n_j), which keeps power-of-two data exact
// regardless of how a vertex is reached.
//
// precompute() freezes flags for every vertex up to a level budget; after it,
// all queries on covered vertices are read-only and safe to share across
// threads. Queries outside the budget recompute from scratch without caching.
class GoodnessOracle {
 public:
  GoodnessOracle(const IfsSpec& spec, double t, double rho);

  std::size_t d() const { return gammas_.size(); }
  double t() const { return t_; }
  double rho() const { return rho_; }

  double value(const TypeVector& n) const;
  bool is_good(const TypeVector& n) const;

  // True when some vertex exactly r levels below n (n plus any r letters)
  // is good; r = 0 asks about n itself.
  bool good_desc_exact(const TypeVector& n, int r) const;

  // True when some subset-descendant n + sum_{j in G} e_j, G a subset of the
  // alphabet (including the empty one), is good.
  bool on_good_track(const TypeVector& n) const;

  FrequencyVertexRecord record(const TypeVector& n) const;

  // Tabulate good flags for all |n| <= max_level + max_r and descent flags
  // for depths r <= max_r on |n| <= max_level + (max_r - r).
  void precompute(int max_level, int max_r = 0);

 private:
  bool stored_flag(const TypeVector& n, int r, bool* found) const;

  std::vector<double> gammas_;
  double t_ = 0.0;
  double rho_ = 0.0;
  int pre_limit_ = -1;  // max_level + max_r
  int pre_r_ = -1;
  std::map<TypeVector, std::vector<char>> flags_;
};

// Integers within (A-1)/2 of K1^2/K2, clipped to be nonnegative. Contains the
// true upstream integer part whenever the three vertices sit above 1, and has
// at most A = 2(1+B2)(1+3B2)+1 elements by construction.
std::vector<long long> ek_candidates(long long K1, long long K2, double B2);

// Nearest integer to K1^2/K2; the unique admissible candidate when both ends
// of the transition are off every good track. rho is accepted for signature
// parity with the candidate enumeration; the rounding itself does not use it.
long long ek_reconstruct_unique(long long K1, long long K2, double rho);

struct GammaInterval {
  double center = 0.0;
  double halfwidth = 0.0;
  bool contains(double x) const;
};

struct ReconstructionLog {
  int q = 0;                   // deepest path index with value >= B2^d
  int branching_steps = 0;     // transitions replayed through the oracle
  int unique_steps = 0;        // transitions forced by the rounding rule
  int unique_mismatches = 0;   // forced values that disagreed with the oracle
  int good_track_count = 0;    // good-track path vertices, indices d+1..N-d-1
  std::vector<char> step_unique;  // entry i-1 describes transition i in [1..q]
};

struct ReconstructionResult {
  std::vector<GammaInterval> gamma;  // interval j traps 1/gamma_j
  ReconstructionLog log;
};

// Walk the word backwards from the deepest vertex whose value clears B2^d,
// rebuilding integer parts two steps ahead of each unknown. Off good tracks
// the step is forced; on them the oracle substitutes for candidate branching
// and the log records how often that happened.
ReconstructionResult reconstruct_along_path(const IfsSpec& spec, double t,
                                            const Word& word, double rho);

struct ScanRecord {
  double t = 0.0;
  Word word;
  int good_track_count = 0;
  double threshold = 0.0;  // N / k1
  bool witness = false;    // good_track_count <= threshold
};

struct ScanReport {
  int N = 0;
  int k1 = 0;
  double rho = 0.0;
  int t_grid = 0;
  std::size_t n_words = 0;
  std::size_t witnesses = 0;
  std::vector<ScanRecord> records;  // t-major, then word index
};

using WordSampler = std::function<Word(std::size_t)>;

// Word index k is drawn from a generator seeded by derive_seed(seed, k), so
// the sampled set does not depend on evaluation order.
WordSampler make_bernoulli_sampler(const IfsSpec& spec, int N, std::uint64_t seed);

// Sweep a log grid of t_grid frequencies over (B1^{N-1}, B1^N], counting
// good-track vertices along each sampled word inside the window [d+1, N-d-1].
// A record is a witness when the count is at most N/k1.
ScanReport exceptional_scan(const IfsSpec& spec, int N, int k1, double rho,
                            int t_grid, std::size_t n_words,
                            const WordSampler& sampler, int threads = 0);

}  // namespace ssmf
