#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hitspec::test {

// Seeded sources of random test inputs.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
  // Log-uniform on [a, b], a > 0.
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }
  std::size_t index(std::size_t a, std::size_t b) {
    return std::uniform_int_distribution<std::size_t>(a, b)(engine_);
  }
  std::vector<double> vector(std::size_t n, double a, double b) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(a, b);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hitspec::test
