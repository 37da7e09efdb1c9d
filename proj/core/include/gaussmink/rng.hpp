#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace gaussmink {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Every output block is a pure function of (key, counter), so any sample can be
/// regenerated from its index alone and work can be split across threads without
/// changing the stream.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key);
};

/// Maps 64 random bits to a double in the open interval (0, 1).
double bits_to_open_unit(std::uint64_t bits);

/// Deterministic source of standard-normal and uniform variates indexed by
/// (seed, sample index, coordinate). Two streams built from the same seed and
/// tag yield identical samples, which is how common random numbers are shared.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed, std::uint32_t tag = 0) : seed_(seed), tag_(tag) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t tag() const noexcept { return tag_; }

  /// Fills `out` with the `out.size()` standard-normal coordinates of sample `index`.
  void normal_vector(std::uint64_t index, Eigen::Ref<Eigen::VectorXd> out) const;

  /// Two independent uniforms on (0,1) for (index, lane).
  std::array<double, 2> uniform_pair(std::uint64_t index, std::uint32_t lane) const;

 private:
  Philox4x32::Block block(std::uint64_t index, std::uint32_t lane) const;

  std::uint64_t seed_;
  std::uint32_t tag_;
};

/// Small sequential generator on top of Philox for test-instance generation.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint32_t tag = 0x1157) : stream_(seed, tag) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n);  // uniform in [0, n)
  double normal();

 private:
  SampleStream stream_;
  std::uint64_t counter_ = 0;
};

/// Fixed-size chunking for Monte Carlo sums. Chunk boundaries depend only on the
/// sample count, and partial results are combined in chunk order, so the result
/// is bit-identical for any number of workers.
inline constexpr std::uint64_t kSampleChunk = 8192;

struct ChunkSums {
  std::uint64_t hits = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

ChunkSums reduce_chunks(std::uint64_t n_samples, unsigned workers,
                        const std::function<ChunkSums(std::uint64_t begin, std::uint64_t end)>& body);

}  // namespace gaussmink
