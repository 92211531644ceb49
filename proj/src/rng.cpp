#include "netresp/rng.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "netresp/errors.hpp"

namespace netresp {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * keys.size());
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), engine_(seeded_engine(seed, {stream_id})) {}

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
    : seed_(seed), engine_(seeded_engine(seed, keys)) {}

double RngStream::uniform() { return std::generate_canonical<double, 53>(engine_); }

double RngStream::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::exponential() { return -std::log(uniform_open()); }

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw InvalidArgument("gamma: shape and rate must be positive");
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(engine_);
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

std::uint64_t RngStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
  return dist(engine_);
}

std::string RngStream::serialize() const {
  std::ostringstream os;
  os << seed_ << ' ' << engine_ << ' ' << normal_;
  return os.str();
}

RngStream RngStream::deserialize(const std::string& text) {
  RngStream out;
  std::istringstream is(text);
  is >> out.seed_ >> out.engine_ >> out.normal_;
  if (!is) throw ParseError("corrupt RNG state", 0);
  return out;
}

}  // namespace netresp
