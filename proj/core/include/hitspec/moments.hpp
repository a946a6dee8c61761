#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hitspec/discretize.hpp"
#include "hitspec/spectral.hpp"

namespace hitspec {

// v_k(x) ~ E_x tau^k on the grid, k = 0..order().
struct MomentTable {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<std::vector<double>> moments;
  std::string model_name;
  Interval interval;
  Boundary lower = Boundary::Absorbing;
  Boundary upper = Boundary::Absorbing;

  std::size_t order() const { return moments.empty() ? 0 : moments.size() - 1; }
  std::span<const double> v(std::size_t k) const { return moments.at(k); }
  // sum_i m_i v_k(x_i), the m-integral of E_x tau^k.
  double integrated(std::size_t k) const;
  // Linear interpolation of v_k, zero at absorbing endpoints.
  double at(std::size_t k, double x) const;
};

// LDL^T factorization of -L - shift in stiffness form K - shift M, where
// K is the symmetric conductance matrix and M = diag(m). Pivots are formed
// without cancellation when shift = 0, and their signs give the inertia:
// the factor is positive definite iff shift < xi_1.
class GeneratorSolver {
 public:
  explicit GeneratorSolver(const GeneratorMatrix& gen, double shift = 0.0);

  bool positive_definite() const { return negative_pivots_ == 0 && !singular_; }
  // Number of eigenvalues of -L below the shift.
  std::size_t eigenvalues_below_shift() const { return negative_pivots_; }
  // Solves (-L - shift) u = g; throws NumericError if singular.
  std::vector<double> solve(std::span<const double> g) const;

 private:
  std::vector<double> weights_;
  std::vector<double> conductances_;
  std::vector<double> pivots_;
  std::size_t negative_pivots_ = 0;
  bool singular_ = false;
};

// Dynkin recursion (-L) v_k = k v_{k-1}, v_0 = 1, by tridiagonal elimination.
// Needs an absorbing side; K >= 1.
MomentTable moment_recursion(const GeneratorMatrix& gen, std::size_t order);

// Same recursion started from v_0 = f: v_k(x) = E_x int_0^tau k t^{k-1} f(X_t) dt.
std::vector<std::vector<double>> modulated_recursion(const GeneratorMatrix& gen,
                                                     std::span<const double> f, std::size_t order);

// (f, Lambda_r(-L) f)_m through linear solves: repeated solves for
// Constant / integer Polynomial rates, one shifted solve for Exponential
// (+inf when the shifted operator is not positive definite). Fractional
// polynomial orders have no solve route and throw InputError.
double resolvent_pairing(const GeneratorMatrix& gen, std::span<const double> f,
                         const RateFunction& rate);

// (f, Lambda_r(-L) f)_m = sum_k Lambda_r(xi_k) w_k; requires a killed decomposition.
double modulated_moment(const SpectralDecomposition& dec, std::span<const double> f,
                        const RateFunction& rate);

struct MeanModulatedMoment {
  double value = 0.0;
  std::string route;  // "recursion" or "spectral"
  std::optional<double> recursion_value;
  std::optional<double> spectral_value;
  std::string diagnostic;
};

// int v_{l+1}/(l+1) dm = E_m R(tau) with R(t) = t^{l+1}/(l+1). Integer l uses the
// recursion (and the spectral route as a cross-check when `dec` is given);
// fractional l uses the spectral route, decomposing `gen` if `dec` is null.
MeanModulatedMoment mean_modulated_moment(const GeneratorMatrix& gen, double l,
                                          const SpectralDecomposition* dec = nullptr);

}  // namespace hitspec
