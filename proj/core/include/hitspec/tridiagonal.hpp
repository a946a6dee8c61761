#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace hitspec {

struct TridiagonalEigen {
  std::size_t n = 0;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // vector-major: vectors[k * n + i], Euclidean orthonormal
  std::size_t iterations = 0;

  std::span<const double> vector(std::size_t k) const {
    return std::span<const double>(vectors).subspan(k * n, n);
  }
};

struct EigenSolverOptions {
  bool want_vectors = true;
  // Off-diagonal e_m is deflated once |e_m| <= tolerance * sqrt(|d_m| |d_{m+1}|).
  double tolerance = std::numeric_limits<double>::epsilon();
  // Total implicit-shift sweeps allowed, as a multiple of n.
  std::size_t iteration_factor = 50;
};

// Implicit-shift QL on the symmetric tridiagonal matrix with the given
// diagonal (n) and off-diagonal (n-1). Throws NumericError when the
// iteration cap is exhausted.
TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diagonal,
                                             std::span<const double> offdiagonal,
                                             const EigenSolverOptions& options = {});

}  // namespace hitspec
