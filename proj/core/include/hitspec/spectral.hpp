#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hitspec/discretize.hpp"
#include "hitspec/tridiagonal.hpp"

namespace hitspec {

// Eigenpairs of -L with eigenvectors orthonormal in (f, g)_m = sum m_i f_i g_i.
class SpectralDecomposition {
 public:
  SpectralDecomposition(std::vector<double> eigenvalues, std::vector<double> eigenvectors,
                        std::vector<double> weights, bool killed);

  std::size_t size() const { return eigenvalues_.size(); }
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  double eigenvalue(std::size_t k) const { return eigenvalues_[k]; }
  std::span<const double> eigenvector(std::size_t k) const {
    return std::span<const double>(eigenvectors_).subspan(k * size(), size());
  }
  std::span<const double> weights() const { return weights_; }
  bool killed() const { return killed_; }

  // (f, e_k)_m for every k.
  std::vector<double> coefficients(std::span<const double> f) const;
  // Inverse of coefficients(): sum_k c_k e_k.
  std::vector<double> synthesize(std::span<const double> coefficients) const;

  // max |(e_j, e_k)_m - delta_jk| over pairs j, k that are multiples of
  // `stride` (stride 1 checks every pair, O(n^3)).
  double orthonormality_residual(std::size_t stride = 1) const;

 private:
  std::vector<double> eigenvalues_;
  std::vector<double> eigenvectors_;  // vector-major
  std::vector<double> weights_;
  bool killed_;
};

// Similarity transform to symmetric form, QL eigensolve, transform back.
SpectralDecomposition eigendecompose(const GeneratorMatrix& gen,
                                     const EigenSolverOptions& options = {});

// Eigenvalues of -L only, O(n^2).
std::vector<double> generator_eigenvalues(const GeneratorMatrix& gen,
                                          const EigenSolverOptions& options = {});

// Atoms (xi_k, w_k) of d(E_xi f, f).
struct SpectralMeasure {
  std::vector<double> atoms;
  std::vector<double> masses;

  double total() const;
  std::size_t size() const { return atoms.size(); }
  // Union of the atoms of both measures (direct sum of operators).
  static SpectralMeasure merge(const SpectralMeasure& a, const SpectralMeasure& b);
  // Same atoms, masses multiplied by exp(-2 xi t): the measure of P_t f.
  SpectralMeasure evolved(double t) const;
  SpectralMeasure scaled(double factor) const;
};

SpectralMeasure spectral_weights(const SpectralDecomposition& dec, std::span<const double> f);

// Modulating function r(t) with primitive R(t) and Laplace transform.
class RateFunction {
 public:
  enum class Kind { Constant, Polynomial, Exponential };

  static RateFunction constant();
  static RateFunction polynomial(double exponent);   // t^l, l > 0
  static RateFunction exponential(double rate);      // e^{lambda t}, lambda > 0

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  std::string describe() const;

  double value(double t) const;
  double primitive(double t) const;
  // int_0^inf r(t) e^{-xi t} dt; +inf where the integral diverges.
  double laplace(double xi) const;
  // int_a^b r(t) e^{-xi t} dt in closed form (b may be +inf).
  double laplace_segment(double xi, double a, double b) const;

  // Polynomial(l) and Constant (l = 0) only.
  double polynomial_order() const;
  bool integer_order() const;

 private:
  RateFunction(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

double laplace_transform(const RateFunction& rate, double xi);

// ||P_{t/2} f||^2_m = sum_k exp(-xi_k t) w_k.
double semigroup_norm_sq(const SpectralMeasure& measure, double t);
double semigroup_norm_sq(const SpectralDecomposition& dec, std::span<const double> f, double t);

// sum_k phi(xi_k) w_k; +inf if phi is +inf at an atom with positive mass.
// Throws InputError if phi is NaN at an atom with positive mass.
double spectral_functional(const SpectralMeasure& measure, const std::function<double(double)>& phi);
double spectral_functional(const SpectralDecomposition& dec, std::span<const double> f,
                           const std::function<double(double)>& phi);

// Phi(f) = sum xi^{-(l+1)} w_k, the Nash functional of order l.
double nash_functional(const SpectralMeasure& measure, double l);

// Log-spaced grid of `count` points in [first, last].
std::vector<double> log_spaced(double first, double last, std::size_t count);

}  // namespace hitspec
