#include "netresp/draws_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "netresp/dataset_io.hpp"
#include "netresp/errors.hpp"

namespace netresp {

using nlohmann::json;

void to_json(json& j, const HyperParams& hp) {
  j = json{{"mu_z", hp.mu_z}, {"sigma2_z", hp.sigma2_z}, {"a", hp.a}, {"q", hp.q},
           {"kappa", hp.kappa}, {"R", hp.R}, {"K", hp.K}};
}

void from_json(const json& j, HyperParams& hp) {
  hp.mu_z = j.value("mu_z", hp.mu_z);
  hp.sigma2_z = j.value("sigma2_z", hp.sigma2_z);
  hp.a = j.value("a", hp.a);
  hp.q = j.value("q", hp.q);
  hp.kappa = j.value("kappa", hp.kappa);
  hp.R = j.value("R", hp.R);
  hp.K = j.value("K", hp.K);
}

void to_json(json& j, const ChainConfig& cc) {
  j = json{{"iterations", cc.iterations}, {"burn_in", cc.burn_in}, {"thin", cc.thin},
           {"seed", cc.seed}, {"store_latents", cc.store_latents}};
}

void from_json(const json& j, ChainConfig& cc) {
  cc.iterations = j.value("iterations", cc.iterations);
  cc.burn_in = j.value("burn_in", cc.burn_in);
  cc.thin = j.value("thin", cc.thin);
  cc.seed = j.value("seed", cc.seed);
  cc.store_latents = j.value("store_latents", cc.store_latents);
}

json metadata_json(const PosteriorDraws& draws) {
  json j;
  j["format"] = "netresp-draws-v1";
  j["subjects"] = draws.subjects;
  j["edges"] = draws.edges;
  j["draws"] = draws.draw_count;
  j["method"] = draws.meta.method;
  j["chain"] = draws.meta.chain;
  j["jitter"] = draws.meta.jitter;
  if (draws.meta.hyper) j["hyper"] = *draws.meta.hyper;
  if (draws.meta.method == "baseline") {
    j["baseline"] = {{"sigma_bar", draws.meta.sigma_bar},
                     {"kappa", draws.meta.baseline_kappa},
                     {"clamp_eps", draws.meta.clamp_eps}};
  }
  return j;
}

namespace binary {

void write_u64(std::ostream& out, std::uint64_t x) {
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(x >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw ParseError("truncated binary file", 0);
  std::uint64_t x = 0;
  for (int k = 0; k < 8; ++k) x |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return x;
}

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
  static_assert(sizeof(double) == 8);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t bits;
    std::memcpy(&bits, data + k, 8);
    write_u64(out, bits);
  }
}

void read_doubles(std::istream& in, double* data, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t bits = read_u64(in);
    std::memcpy(data + k, &bits, 8);
  }
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  write_u64(out, static_cast<std::uint64_t>(m.rows()));
  write_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double x = m(r, c);
      write_doubles(out, &x, 1);
    }
  }
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  const auto rows = static_cast<Eigen::Index>(read_u64(in));
  const auto cols = static_cast<Eigen::Index>(read_u64(in));
  if (rows > (1 << 24) || cols > (1 << 24)) throw ParseError("implausible matrix size in binary file", 0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) read_doubles(in, &m(r, c), 1);
  }
  return m;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const auto size = read_u64(in);
  if (size > (1u << 30)) throw ParseError("implausible string length in binary file", 0);
  std::string s(size, '\0');
  in.read(s.data(), static_cast<std::streamsize>(size));
  if (!in) throw ParseError("truncated binary file", 0);
  return s;
}

void write_state(std::ostream& out, const LatentState& s) {
  write_u64(out, static_cast<std::uint64_t>(s.V));
  write_u64(out, static_cast<std::uint64_t>(s.R));
  write_u64(out, static_cast<std::uint64_t>(s.K));
  write_matrix(out, s.Z);
  write_u64(out, s.Y.size());
  for (const auto& y : s.Y) write_matrix(out, y);
  write_matrix(out, s.G);
  write_u64(out, s.W.size());
  for (const auto& w : s.W) write_matrix(out, w);
  write_matrix(out, s.tau);
  write_matrix(out, s.omega);
}

LatentState read_state(std::istream& in) {
  LatentState s;
  s.V = static_cast<int>(read_u64(in));
  s.R = static_cast<int>(read_u64(in));
  s.K = static_cast<int>(read_u64(in));
  s.Z = read_matrix(in);
  s.Y.resize(read_u64(in));
  for (auto& y : s.Y) y = read_matrix(in);
  s.G = read_matrix(in);
  s.W.resize(read_u64(in));
  for (auto& w : s.W) w = read_matrix(in);
  s.tau = read_matrix(in);
  s.omega = read_matrix(in);
  return s;
}

}  // namespace binary

namespace {

constexpr char kMagic[9] = "NRDRAWS1";

bool is_csv(const std::filesystem::path& p) { return p.extension() == ".csv"; }

void write_binary_draws(const PosteriorDraws& draws, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(kMagic, 8);
  binary::write_u64(out, static_cast<std::uint64_t>(draws.subjects));
  binary::write_u64(out, draws.edges);
  binary::write_u64(out, static_cast<std::uint64_t>(draws.draw_count));
  binary::write_doubles(out, draws.probs.data(), draws.probs.size());
  if (!out) throw ValidationError("write failed for " + path.string());
}

void write_csv_draws(const PosteriorDraws& draws, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "draw,subject";
  for (std::size_t l = 1; l <= draws.edges; ++l) out << ",e" << l;
  out << '\n';
  for (int d = 0; d < draws.draw_count; ++d) {
    for (int i = 0; i < draws.subjects; ++i) {
      out << d << ',' << i;
      for (std::size_t l = 0; l < draws.edges; ++l) out << ',' << format_double(draws.at(d, i, l));
      out << '\n';
    }
  }
  if (!out) throw ValidationError("write failed for " + path.string());
}

PosteriorDraws read_binary_draws(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ParseError(path.string() + ": not a draws file", 0);
  const auto n = binary::read_u64(in);
  const auto L = binary::read_u64(in);
  const auto D = binary::read_u64(in);
  PosteriorDraws draws(static_cast<int>(n), L);
  draws.draw_count = static_cast<int>(D);
  draws.probs.resize(n * L * D);
  binary::read_doubles(in, draws.probs.data(), draws.probs.size());
  return draws;
}

PosteriorDraws read_csv_draws(const std::filesystem::path& path, int n, std::size_t L) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  PosteriorDraws draws(n, L);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string field;
    std::getline(is, field, ',');
    const int d = std::stoi(field);
    std::getline(is, field, ',');
    const int i = std::stoi(field);
    while (d >= draws.draw_count) draws.add_draw();
    if (i < 0 || i >= n) throw ParseError("subject index out of range", lineno);
    for (std::size_t l = 0; l < L; ++l) {
      if (!std::getline(is, field, ',')) throw ParseError("too few columns", lineno);
      draws.at(d, i, l) = std::stod(field);
    }
  }
  return draws;
}

void apply_metadata(PosteriorDraws& draws, const json& j) {
  draws.meta.method = j.value("method", std::string());
  if (j.contains("chain")) draws.meta.chain = j.at("chain").get<ChainConfig>();
  if (j.contains("hyper")) draws.meta.hyper = j.at("hyper").get<HyperParams>();
  draws.meta.jitter = j.value("jitter", 0.0);
  if (j.contains("baseline")) {
    const auto& b = j.at("baseline");
    draws.meta.sigma_bar = b.value("sigma_bar", 0.0);
    draws.meta.baseline_kappa = b.value("kappa", 0.0);
    draws.meta.clamp_eps = b.value("clamp_eps", 0.0);
  }
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& draws_path) {
  return std::filesystem::path(draws_path.string() + ".json");
}

void write_draws(const PosteriorDraws& draws, const std::filesystem::path& path) {
  if (is_csv(path)) write_csv_draws(draws, path);
  else write_binary_draws(draws, path);
  std::ofstream meta(sidecar_path(path), std::ios::binary);
  if (!meta) throw ValidationError("cannot write " + sidecar_path(path).string());
  meta << metadata_json(draws).dump(2) << '\n';
}

PosteriorDraws read_draws(const std::filesystem::path& path) {
  json meta;
  {
    std::ifstream in(sidecar_path(path));
    if (!in) throw ValidationError("missing metadata sidecar " + sidecar_path(path).string());
    try {
      in >> meta;
    } catch (const json::exception& e) {
      throw ParseError(sidecar_path(path).string() + ": " + e.what(), 0);
    }
  }
  PosteriorDraws draws = is_csv(path)
                             ? read_csv_draws(path, meta.at("subjects").get<int>(), meta.at("edges").get<std::size_t>())
                             : read_binary_draws(path);
  if (draws.subjects != meta.value("subjects", -1) || draws.edges != meta.value("edges", std::size_t{0}) ||
      draws.draw_count != meta.value("draws", -1)) {
    throw ParseError(path.string() + ": draw file disagrees with its metadata", 0);
  }
  apply_metadata(draws, meta);
  return draws;
}

}  // namespace netresp
