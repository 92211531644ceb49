#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>

namespace netresp {

// A seeded 64-bit Mersenne Twister stream. A stream is identified by a seed
// plus any number of integer keys (stream id, iteration, subject, ...); the
// same key tuple always reproduces the same sequence, and different tuples
// are decorrelated through std::seed_seq.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform();                 // [0, 1)
  double uniform_open();            // (0, 1)
  double normal();                  // N(0, 1)
  double exponential();             // Exp(1)
  double gamma(double shape, double rate);
  bool bernoulli(double p);
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);  // inclusive

  std::mt19937_64& engine() noexcept { return engine_; }

  // Text round trip of the full generator state (engine plus the cached
  // normal deviate), used by chain checkpoints.
  std::string serialize() const;
  static RngStream deserialize(const std::string& text);

 private:
  RngStream() = default;

  std::uint64_t seed_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace netresp
