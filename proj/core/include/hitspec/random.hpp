#pragma once

#include <array>
#include <cstdint>

namespace hitspec {

// Philox4x32-10 counter-based generator. Output block j of stream
// (key, stream_id) depends only on those three numbers.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block generate(std::array<std::uint32_t, 2> key, Block counter);
};

// Sequential draws from one (seed, stream) pair; stream = path index.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on (0, 1), never 0 or 1.
  double uniform();
  // Standard normal by Box-Muller; values come in cached pairs.
  double normal();

  std::uint64_t blocks_used() const { return block_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hitspec
