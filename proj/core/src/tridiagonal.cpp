#include "hitspec/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hitspec/error.hpp"

namespace hitspec {

namespace {

struct Rotation {
  std::size_t index;  // acts on eigenvector rows index, index + 1
  double s;
  double c;
};

constexpr std::size_t kBlockWidth = 64;

// Applies the pending rotations, in order, to the vector-major matrix z.
// The z updates never feed back into the QL iteration, so many sweeps are
// batched and streamed through cache one column block at a time.
__attribute__((target_clones("avx512f", "avx2", "default")))
void apply_rotations(std::vector<double>& z, std::size_t n, const std::vector<Rotation>& pending) {
  for (std::size_t k0 = 0; k0 < n; k0 += kBlockWidth) {
    const std::size_t width = std::min(kBlockWidth, n - k0);
    for (const Rotation& r : pending) {
      double* __restrict zi = z.data() + r.index * n + k0;
      double* __restrict zj = zi + n;
      const double s = r.s;
      const double c = r.c;
      for (std::size_t k = 0; k < width; ++k) {
        const double a = zi[k];
        const double f = zj[k];
        zj[k] = s * a + c * f;
        zi[k] = c * a - s * f;
      }
    }
  }
}

bool negligible(double e, double d0, double d1, double tolerance) {
  constexpr double tiny = std::numeric_limits<double>::min();
  return std::fabs(e) <= tolerance * std::sqrt(std::fabs(d0)) * std::sqrt(std::fabs(d1)) + tiny;
}

}  // namespace

TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diagonal,
                                             std::span<const double> offdiagonal,
                                             const EigenSolverOptions& options) {
  const std::size_t n = diagonal.size();
  if (n == 0) return {};
  if (offdiagonal.size() + 1 != n) {
    throw NumericError("tridiagonal eigensolver: off-diagonal must have n-1 entries");
  }
  std::vector<double> d(diagonal.begin(), diagonal.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiagonal.begin(), offdiagonal.end(), e.begin());
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(d[i]) || !std::isfinite(e[i])) {
      throw NumericError("tridiagonal eigensolver: non-finite matrix entry");
    }
  }

  std::vector<double> z;
  if (options.want_vectors) {
    z.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
  }

  const std::size_t cap = options.iteration_factor * n;
  std::vector<Rotation> pending;
  const std::size_t flush_at = 16 * n;
  if (options.want_vectors) pending.reserve(flush_at + n);
  std::size_t iterations = 0;

  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t m = l;
      while (m + 1 < n && !negligible(e[m], d[m], d[m + 1], options.tolerance)) ++m;
      if (m == l) break;
      if (++iterations > cap) {
        std::ostringstream os;
        os << "tridiagonal eigensolver: no convergence after " << cap
           << " sweeps (n = " << n << ", block [" << l << ", " << m << "], |e_l| = "
           << std::fabs(e[l]) << ", d_l = " << d[l] << ")";
        throw NumericError(os.str());
      }
      // Wilkinson-type implicit shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (options.want_vectors) pending.push_back({i, s, c});
      }
      if (pending.size() >= flush_at) {
        apply_rotations(z, n, pending);
        pending.clear();
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  if (!pending.empty()) apply_rotations(z, n, pending);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.n = n;
  out.iterations = iterations;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (options.want_vectors) {
    out.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t col = order[k];
      std::copy_n(z.data() + col * n, n, out.vectors.data() + k * n);
    }
  }
  return out;
}

}  // namespace hitspec
