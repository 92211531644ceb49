#include "netresp/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "netresp/errors.hpp"

namespace netresp {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

double parse_real(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("expected a number, got '" + t + "'", line);
  }
  return x;
}

long parse_int(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("expected an integer, got '" + t + "'", line);
  }
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(s);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

EdgeVector parse_edges(const std::string& text, int V, std::size_t line) {
  std::vector<std::string> tokens;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) tokens.push_back(tok);

  const std::size_t L = edge_count(V);
  if (tokens.size() == L) {
    EdgeVector e{V, std::vector<EdgeState>(L)};
    for (std::size_t l = 0; l < L; ++l) {
      if (tokens[l] == "0") e.values[l] = EdgeState::Absent;
      else if (tokens[l] == "1") e.values[l] = EdgeState::Present;
      else if (tokens[l] == "?") e.values[l] = EdgeState::Missing;
      else throw ParseError("edge value must be 0, 1 or ?, got '" + tokens[l] + "'", line);
    }
    return e;
  }
  if (tokens.size() == static_cast<std::size_t>(V) * V) {
    std::vector<std::uint8_t> entries(tokens.size());
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (tokens[k] == "0") entries[k] = 0;
      else if (tokens[k] == "1") entries[k] = 1;
      else throw ParseError("matrix entry must be 0 or 1, got '" + tokens[k] + "'", line);
    }
    try {
      return vectorize(AdjacencyMatrix(V, std::move(entries)));
    } catch (const ValidationError& err) {
      throw ParseError(err.what(), line);
    }
  }
  throw ParseError("expected " + std::to_string(L) + " edge values (or " + std::to_string(V * V) +
                       " matrix entries), got " + std::to_string(tokens.size()),
                   line);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InvalidArgument("format_double failed");
  return std::string(buf, ptr);
}

NetworkDataset read_dataset(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  int V = -1;
  long n = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream hs(line);
    std::string a, b;
    hs >> a >> b;
    if (a.rfind("V=", 0) != 0 || b.rfind("n=", 0) != 0) throw ParseError("header must read 'V=<int> n=<int>'", lineno);
    V = static_cast<int>(parse_int(a.substr(2), lineno));
    n = parse_int(b.substr(2), lineno);
    if (V < 2 || n < 1) throw ParseError("header needs V >= 2 and n >= 1", lineno);
    break;
  }
  if (V < 0) throw ParseError("missing header", 0);

  std::vector<std::string> ids;
  std::vector<double> traits;
  std::vector<EdgeVector> nets;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("row must read '<id>, <trait>, <edges>'", lineno);
    const std::string id = trim(line.substr(0, c1));
    if (id.empty()) throw ParseError("empty subject id", lineno);
    const double x = parse_real(line.substr(c1 + 1, c2 - c1 - 1), lineno);
    if (!std::isfinite(x)) throw ParseError("trait must be finite", lineno);
    ids.push_back(id);
    traits.push_back(x);
    nets.push_back(parse_edges(line.substr(c2 + 1), V, lineno));
  }
  if (static_cast<long>(nets.size()) != n) {
    throw ParseError("header announces n=" + std::to_string(n) + " subjects but file has " +
                         std::to_string(nets.size()),
                     lineno);
  }
  return NetworkDataset(std::move(ids), std::move(traits), std::move(nets));
}

NetworkDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  try {
    return read_dataset(in);
  } catch (const ParseError& err) {
    throw ParseError::in_file(path.string(), err);
  }
}

void write_dataset(std::ostream& out, const NetworkDataset& ds) {
  out << "V=" << ds.nodes() << " n=" << ds.subjects() << '\n';
  for (int i = 0; i < ds.subjects(); ++i) {
    out << ds.ids()[i] << ", " << format_double(ds.traits()[i]) << ",";
    for (EdgeState s : ds.network(i).values) {
      out << ' ' << (s == EdgeState::Present ? '1' : s == EdgeState::Absent ? '0' : '?');
    }
    out << '\n';
  }
}

void save_dataset(const NetworkDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_dataset(out, ds);
  if (!out) throw ValidationError("write failed for " + path.string());
}

NetworkDataset load_edge_list(const std::filesystem::path& edges_csv, const std::filesystem::path& traits_csv,
                              int V) {
  std::ifstream tin(traits_csv);
  if (!tin) throw ValidationError("cannot open " + traits_csv.string());
  std::vector<std::string> ids;
  std::vector<double> traits;
  std::map<std::string, int> position;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(tin, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError(traits_csv.string() + ": expected 'subject_id,trait'", lineno);
    if (lineno == 1 && trim(fields[1]) == "trait") continue;
    const std::string id = trim(fields[0]);
    if (position.count(id)) throw ParseError(traits_csv.string() + ": duplicate subject '" + id + "'", lineno);
    position[id] = static_cast<int>(ids.size());
    ids.push_back(id);
    traits.push_back(parse_real(fields[1], lineno));
  }

  struct Row {
    int subject, v, u;
  };
  std::vector<Row> rows;
  int max_node = 0;
  std::ifstream ein(edges_csv);
  if (!ein) throw ValidationError("cannot open " + edges_csv.string());
  lineno = 0;
  while (std::getline(ein, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw ParseError(edges_csv.string() + ": expected 'subject_id,node_v,node_u'", lineno);
    if (lineno == 1 && trim(fields[1]) == "node_v") continue;
    const std::string id = trim(fields[0]);
    const auto it = position.find(id);
    if (it == position.end()) throw ParseError(edges_csv.string() + ": subject '" + id + "' has no trait", lineno);
    const int v = static_cast<int>(parse_int(fields[1], lineno));
    const int u = static_cast<int>(parse_int(fields[2], lineno));
    if (v < 1 || u < 1) throw ParseError(edges_csv.string() + ": node ids are 1-based", lineno);
    if (v == u) throw ParseError(edges_csv.string() + ": self loop", lineno);
    if (V > 0 && (v > V || u > V)) throw ParseError(edges_csv.string() + ": node id exceeds V", lineno);
    max_node = std::max({max_node, v, u});
    rows.push_back({it->second, v, u});
  }
  if (V <= 0) V = max_node;
  if (V < 2) throw ValidationError("edge list defines fewer than two nodes");

  std::vector<EdgeVector> nets(ids.size(), EdgeVector{V, std::vector<EdgeState>(edge_count(V), EdgeState::Absent)});
  for (const auto& r : rows) {
    const int hi = std::max(r.v, r.u), lo = std::min(r.v, r.u);
    nets[r.subject].values[pair_to_index(hi, lo, V) - 1] = EdgeState::Present;
  }
  return NetworkDataset(std::move(ids), std::move(traits), std::move(nets));
}

}  // namespace netresp
