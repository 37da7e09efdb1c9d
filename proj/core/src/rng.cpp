#include "gaussmink/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gaussmink/normal.hpp"

namespace gaussmink {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(Philox4x32::Block& ctr, const Philox4x32::Key& key) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
  ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
}

}  // namespace

Philox4x32::Block Philox4x32::generate(Block counter, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    philox_round(counter, key);
  }
  return counter;
}

double bits_to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

Philox4x32::Block SampleStream::block(std::uint64_t index, std::uint32_t lane) const {
  const Philox4x32::Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                              lane, tag_};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  return Philox4x32::generate(ctr, key);
}

std::array<double, 2> SampleStream::uniform_pair(std::uint64_t index, std::uint32_t lane) const {
  const auto b = block(index, lane);
  const std::uint64_t w0 = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  const std::uint64_t w1 = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
  return {bits_to_open_unit(w0), bits_to_open_unit(w1)};
}

void SampleStream::normal_vector(std::uint64_t index, Eigen::Ref<Eigen::VectorXd> out) const {
  const auto n = out.size();
  for (Eigen::Index j = 0; j < n; j += 2) {
    // Box-Muller on one Philox block per coordinate pair.
    const auto [u1, u2] = uniform_pair(index, static_cast<std::uint32_t>(j / 2));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    out[j] = r * std::cos(a);
    if (j + 1 < n) out[j + 1] = r * std::sin(a);
  }
}

double CounterRng::uniform() {
  const auto u = stream_.uniform_pair(counter_++, 0);
  return u[0];
}

std::size_t CounterRng::index(std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

double CounterRng::normal() {
  Eigen::VectorXd z(1);
  stream_.normal_vector(counter_++, z);
  return z[0];
}

ChunkSums reduce_chunks(std::uint64_t n_samples, unsigned workers,
                        const std::function<ChunkSums(std::uint64_t, std::uint64_t)>& body) {
  const std::uint64_t n_chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<ChunkSums> partial(n_chunks);
  auto run = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t c = first; c < n_chunks; c += stride) {
      const std::uint64_t begin = c * kSampleChunk;
      partial[c] = body(begin, std::min(n_samples, begin + kSampleChunk));
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(1, n_chunks))));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    for (auto& t : pool) t.join();
  }
  ChunkSums total;
  for (const auto& p : partial) {
    total.hits += p.hits;
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  return total;
}

}  // namespace gaussmink
