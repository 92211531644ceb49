#pragma once

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netresp/network.hpp"
#include "netresp/rng.hpp"

namespace netresp::testing {

inline AdjacencyMatrix random_graph(int V, double p, RngStream& rng) {
  AdjacencyMatrix A(V);
  for (int a = 0; a < V; ++a) {
    for (int b = a + 1; b < V; ++b) A.set_edge(a, b, rng.bernoulli(p));
  }
  return A;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double se = 0.0;  // standard error of the mean
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  for (double v : x) m.variance += (v - m.mean) * (v - m.mean);
  m.variance /= static_cast<double>(x.size() - 1);
  m.se = std::sqrt(m.variance / static_cast<double>(x.size()));
  return m;
}

// Standard error of a sample variance, from the fourth central moment.
inline double variance_se(const std::vector<double>& x) {
  const Moments m = moments(x);
  double m4 = 0.0;
  for (double v : x) m4 += std::pow(v - m.mean, 4);
  m4 /= static_cast<double>(x.size());
  const double n = static_cast<double>(x.size());
  return std::sqrt((m4 - m.variance * m.variance) / n);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("netresp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static unsigned long& counter() {
    static unsigned long c = 0;
    return c;
  }
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace netresp::testing
