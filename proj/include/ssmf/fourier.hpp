#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ssmf/ifs.hpp"

namespace ssmf {

struct FourierValue {
  std::complex<double> value;
  double error_bound = 0.0;
};

// Optional instrumentation for ft_lattice: total |c_n| mass per lattice level.
struct LatticeTrace {
  std::vector<double> level_mass;
  int levels = 0;
};

struct DecayBlock {
  int N = 0;
  double sup_abs = 0.0;
  double argmax_t = 0.0;
};

struct DecayCurve {
  std::vector<DecayBlock> blocks;
  double B1 = 0.0;
  double alpha_hat = 0.0;
  double fit_residual = 0.0;
};

// Phi_j(t) = sum_k p_k^{(j)} exp(i a_k^{(j)} t). |Phi_j(t)| <= p_j.
std::complex<double> phase_factor(const IfsSpec& spec, std::size_t j, double t);

// Oracle: direct sum over the depth-N discretization atoms.
FourierValue ft_bruteforce(const IfsSpec& spec, double t, int depth);

// Dynamic programming over type-vector lattice levels. Coefficients live on
// letter-count vectors, so the cost is polynomial in the stopping level
// instead of exponential in the word length. Stops at the first level L with
// gamma_max^L * |t| * R <= tol; remaining factors are replaced by the
// terminal phase exp(i s x0) whose error is |s| * R.
FourierValue ft_lattice(const IfsSpec& spec, double t, double tol,
                        int max_levels = 10000, LatticeTrace* trace = nullptr);

// Homogeneous case: single ratio, measure is an infinite convolution.
// Evaluates prod_{n=0}^{M} Phi(lambda^n t) with the digit set recentered to
// mean zero; the discarded mean re-enters as a global phase so the result
// matches ft_lattice, not just in modulus.
FourierValue ft_homogeneous_product(double lambda, const std::vector<double>& a,
                                    const std::vector<double>& p, double t,
                                    int levels);

// Sup of |mu^(t)| over a logarithmic grid of M points per frequency block
// (B1^{N-1}, B1^N], N in [N0, N1]. The grid sup is a lower bound for the
// true block sup.
DecayCurve decay_scan(const IfsSpec& spec, int N0, int N1, int grid,
                      double tol = 1e-8, int threads = 0);

// Least-squares slope of -log(sup_abs) against N log B1; stores alpha_hat
// and fit_residual on the curve and returns the slope.
double fit_alpha(DecayCurve& curve);

}  // namespace ssmf
