#include "netresp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "netresp/dataset_io.hpp"
#include "netresp/errors.hpp"

namespace netresp {

using nlohmann::json;

double HoldoutMask::masked_fraction() const {
  const double cells = static_cast<double>(subjects) * static_cast<double>(edges);
  return cells > 0.0 ? static_cast<double>(entries.size()) / cells : 0.0;
}

std::vector<double> empirical_edge_probability(const NetworkDataset& ds) {
  std::vector<double> out(ds.edges(), 0.0);
  for (std::size_t l = 0; l < ds.edges(); ++l) {
    double present = 0.0, seen = 0.0;
    for (int i = 0; i < ds.subjects(); ++i) {
      const EdgeState e = ds.edge(i, l);
      if (e == EdgeState::Missing) continue;
      seen += 1.0;
      present += e == EdgeState::Present;
    }
    out[l] = seen > 0.0 ? present / seen : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

namespace {

std::vector<std::size_t> band_edges(const NetworkDataset& ds, double lower, double upper) {
  if (!(lower < upper)) throw InvalidArgument("hold-out band needs lower < upper");
  const auto pbar = empirical_edge_probability(ds);
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < pbar.size(); ++l) {
    if (pbar[l] > lower && pbar[l] < upper) out.push_back(l);
  }
  return out;
}

void fill_entries(HoldoutMask& mask, const NetworkDataset& ds) {
  std::sort(mask.held_out_subjects.begin(), mask.held_out_subjects.end());
  for (int i : mask.held_out_subjects) {
    for (std::size_t l : mask.band_edges) {
      if (ds.edge(i, l) != EdgeState::Missing) mask.entries.emplace_back(i, l);
    }
  }
  if (mask.entries.empty()) spdlog::warn("hold-out mask is empty: no edge has empirical probability in the band");
}

}  // namespace

HoldoutMask make_hard_edge_mask(const NetworkDataset& ds, double lower, double upper, double subject_fraction,
                                RngStream& rng) {
  if (!(subject_fraction > 0.0 && subject_fraction <= 1.0)) throw InvalidArgument("subject_fraction must lie in (0, 1]");
  HoldoutMask mask;
  mask.protocol = HoldoutProtocol::HardEdge;
  mask.lower = lower;
  mask.upper = upper;
  mask.subject_fraction = subject_fraction;
  mask.subjects = ds.subjects();
  mask.edges = ds.edges();
  mask.band_edges = band_edges(ds, lower, upper);
  std::vector<int> order(static_cast<std::size_t>(ds.subjects()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  const auto take = static_cast<std::size_t>(std::lround(subject_fraction * ds.subjects()));
  mask.held_out_subjects.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  fill_entries(mask, ds);
  return mask;
}

HoldoutMask make_simulation_mask(const NetworkDataset& ds, double lower, double upper, int per_trait,
                                 RngStream& rng) {
  if (per_trait < 1) throw InvalidArgument("per_trait must be positive");
  HoldoutMask mask;
  mask.protocol = HoldoutProtocol::Simulation;
  mask.lower = lower;
  mask.upper = upper;
  mask.per_trait = per_trait;
  mask.subjects = ds.subjects();
  mask.edges = ds.edges();
  mask.band_edges = band_edges(ds, lower, upper);
  std::vector<std::vector<int>> by_trait(ds.unique_traits().size());
  for (int i = 0; i < ds.subjects(); ++i) by_trait[ds.trait_index()[i]].push_back(i);
  for (auto& group : by_trait) {
    std::shuffle(group.begin(), group.end(), rng.engine());
    const auto take = std::min(group.size(), static_cast<std::size_t>(per_trait));
    mask.held_out_subjects.insert(mask.held_out_subjects.end(), group.begin(),
                                  group.begin() + static_cast<std::ptrdiff_t>(take));
  }
  fill_entries(mask, ds);
  return mask;
}

NetworkDataset apply_mask(const NetworkDataset& ds, const HoldoutMask& mask) {
  if (mask.subjects != ds.subjects() || mask.edges != ds.edges()) {
    throw StateError("mask was built for a dataset of a different shape");
  }
  std::vector<EdgeVector> nets = ds.networks();
  for (const auto& [i, l] : mask.entries) {
    if (i < 0 || i >= ds.subjects() || l >= ds.edges()) throw StateError("mask entry out of range");
    if (nets[i].values[l] == EdgeState::Missing) throw StateError("mask targets a cell that is already missing");
    nets[i].values[l] = EdgeState::Missing;
  }
  return NetworkDataset(ds.ids(), ds.traits(), std::move(nets));
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("auc: scores and labels differ in length");
  const std::size_t N = scores.size();
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positives = 0.0, rank_sum = 0.0;
  for (std::size_t k = 0; k < N;) {
    std::size_t end = k;
    while (end < N && scores[order[end]] == scores[order[k]]) ++end;
    const double midrank = 0.5 * static_cast<double>(k + 1 + end);  // ranks k+1..end
    for (std::size_t t = k; t < end; ++t) {
      if (labels[order[t]] != 0) {
        positives += 1.0;
        rank_sum += midrank;
      }
    }
    k = end;
  }
  const double negatives = static_cast<double>(N) - positives;
  if (positives == 0.0 || negatives == 0.0) throw UndefinedValue("auc: needs both positive and negative labels");
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

int calibration_bin(double score) {
  for (int b = 0; b < 9; ++b) {
    if (score <= (b + 1) / 10.0) return b;
  }
  return 9;
}

CalibrationTable calibration_table(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("calibration_table: scores and labels differ in length");
  CalibrationTable table;
  for (int b = 0; b < 10; ++b) {
    table[b].lower = b / 10.0;
    table[b].upper = (b + 1) / 10.0;
  }
  for (std::size_t k = 0; k < scores.size(); ++k) {
    auto& bin = table[calibration_bin(scores[k])];
    ++bin.count;
    bin.positives += labels[k] != 0;
  }
  for (auto& bin : table) {
    bin.proportion = bin.count ? static_cast<double>(bin.positives) / static_cast<double>(bin.count)
                               : std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<PpcRow> posterior_predictive_check(const PosteriorDraws& draws, const NetworkDataset& observed,
                                               std::span<const Statistic> statistics, const BlockPartition* blocks,
                                               RngStream& rng, double level) {
  if (draws.draw_count == 0) throw StateError("posterior_predictive_check: no retained draws");
  if (draws.subjects != observed.subjects() || draws.edges != observed.edges()) {
    throw StateError("posterior_predictive_check: draws do not match the dataset");
  }
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("posterior_predictive_check: level must lie in (0, 1)");
  const int V = observed.nodes();
  const EdgeIndexer idx(V);
  const std::uint64_t base = rng.uniform_int(0, ~std::uint64_t{0});
  std::vector<PpcRow> rows;
  for (int i = 0; i < observed.subjects(); ++i) {
    if (observed.network(i).has_missing()) {
      throw InvalidArgument("posterior_predictive_check: observed networks must be complete");
    }
    const AdjacencyMatrix Aobs = devectorize(observed.network(i));
    RngStream srng(base, static_cast<std::uint64_t>(i));
    std::vector<std::vector<double>> values(statistics.size());
    AdjacencyMatrix A(V);
    for (int d = 0; d < draws.draw_count; ++d) {
      for (std::size_t l = 0; l < idx.edges(); ++l) {
        const auto [v, u] = idx.pair(l);
        A.set_edge(v, u, srng.bernoulli(draws.at(d, i, l)));
      }
      for (std::size_t s = 0; s < statistics.size(); ++s) {
        const double x = compute_statistic(statistics[s], A, blocks);
        if (!std::isnan(x)) values[s].push_back(x);
      }
    }
    for (std::size_t s = 0; s < statistics.size(); ++s) {
      auto& vals = values[s];
      std::sort(vals.begin(), vals.end());
      PpcRow row;
      row.subject = i;
      row.statistic = statistics[s];
      row.observed = compute_statistic(statistics[s], Aobs, blocks);
      row.valid_draws = static_cast<int>(vals.size());
      if (vals.empty()) {
        row.mean = row.lower = row.upper = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
        row.lower = sorted_quantile(vals, (1.0 - level) / 2.0);
        row.upper = sorted_quantile(vals, 1.0 - (1.0 - level) / 2.0);
      }
      row.covered = row.observed >= row.lower && row.observed <= row.upper;
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

bool same_number(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

bool EvalReport::operator==(const EvalReport& o) const {
  if (method != o.method || !same_number(auc, o.auc) || scored != o.scored || ppc.size() != o.ppc.size()) return false;
  for (int b = 0; b < 10; ++b) {
    const auto &x = calibration[b], &y = o.calibration[b];
    if (x.count != y.count || x.positives != y.positives || !same_number(x.proportion, y.proportion) ||
        x.lower != y.lower || x.upper != y.upper) {
      return false;
    }
  }
  for (std::size_t k = 0; k < ppc.size(); ++k) {
    const auto &x = ppc[k], &y = o.ppc[k];
    if (x.subject != y.subject || x.statistic != y.statistic || !same_number(x.observed, y.observed) ||
        !same_number(x.mean, y.mean) || !same_number(x.lower, y.lower) || !same_number(x.upper, y.upper) ||
        x.covered != y.covered || x.valid_draws != y.valid_draws) {
      return false;
    }
  }
  return true;
}

EvalReport score_holdout(const PosteriorDraws& draws, const NetworkDataset& full, const HoldoutMask& mask,
                         const std::string& method) {
  if (draws.draw_count == 0) throw StateError(method + ": no retained draws");
  if (draws.subjects != full.subjects() || draws.edges != full.edges() || mask.subjects != full.subjects() ||
      mask.edges != full.edges()) {
    throw StateError(method + ": draws, mask and dataset do not match");
  }
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(mask.entries.size());
  labels.reserve(mask.entries.size());
  for (const auto& [i, l] : mask.entries) {
    const EdgeState truth = full.edge(i, l);
    if (truth == EdgeState::Missing) throw StateError(method + ": held-out cell has no ground truth");
    scores.push_back(predictive_mean(draws, i, l));
    labels.push_back(truth == EdgeState::Present);
  }
  EvalReport r;
  r.method = method;
  r.scored = scores.size();
  r.auc = auc(scores, labels);
  r.calibration = calibration_table(scores, labels);
  return r;
}

std::pair<EvalReport, EvalReport> evaluate(const PosteriorDraws& model, const PosteriorDraws& baseline,
                                           const NetworkDataset& full, const HoldoutMask& mask,
                                           const PpcOptions& ppc) {
  EvalReport a = score_holdout(model, full, mask, "network-response");
  EvalReport b = score_holdout(baseline, full, mask, "baseline");
  if (!ppc.statistics.empty()) {
    const BlockPartition* blocks = ppc.blocks ? &*ppc.blocks : nullptr;
    RngStream ra(ppc.seed, 0x99c0ULL), rb(ppc.seed, 0x99c1ULL);
    a.ppc = posterior_predictive_check(model, full, ppc.statistics, blocks, ra, ppc.level);
    b.ppc = posterior_predictive_check(baseline, full, ppc.statistics, blocks, rb, ppc.level);
  }
  return {std::move(a), std::move(b)};
}

namespace {

json number_or_null(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string_view protocol_name(HoldoutProtocol p) {
  return p == HoldoutProtocol::Simulation ? "simulation" : "hard-edge";
}

}  // namespace

void to_json(json& j, const HoldoutMask& m) {
  json entries = json::array();
  for (const auto& [i, l] : m.entries) entries.push_back({i, l});
  j = json{{"protocol", protocol_name(m.protocol)},
           {"lower", m.lower},
           {"upper", m.upper},
           {"subject_fraction", m.subject_fraction},
           {"per_trait", m.per_trait},
           {"subjects", m.subjects},
           {"edges", m.edges},
           {"held_out_subjects", m.held_out_subjects},
           {"band_edges", m.band_edges},
           {"masked_fraction", m.masked_fraction()},
           {"entries", entries}};
}

void from_json(const json& j, HoldoutMask& m) {
  const std::string protocol = j.at("protocol").get<std::string>();
  if (protocol == "simulation") m.protocol = HoldoutProtocol::Simulation;
  else if (protocol == "hard-edge") m.protocol = HoldoutProtocol::HardEdge;
  else throw ParseError("unknown mask protocol '" + protocol + "'", 0);
  m.lower = j.at("lower").get<double>();
  m.upper = j.at("upper").get<double>();
  m.subject_fraction = j.at("subject_fraction").get<double>();
  m.per_trait = j.at("per_trait").get<int>();
  m.subjects = j.at("subjects").get<int>();
  m.edges = j.at("edges").get<std::size_t>();
  m.held_out_subjects = j.at("held_out_subjects").get<std::vector<int>>();
  m.band_edges = j.at("band_edges").get<std::vector<std::size_t>>();
  m.entries.clear();
  for (const auto& e : j.at("entries")) m.entries.emplace_back(e.at(0).get<int>(), e.at(1).get<std::size_t>());
}

void to_json(json& j, const EvalReport& r) {
  json bins = json::array();
  for (const auto& b : r.calibration) {
    bins.push_back({{"lower", b.lower},
                    {"upper", b.upper},
                    {"count", b.count},
                    {"positives", b.positives},
                    {"proportion", number_or_null(b.proportion)}});
  }
  json ppc = json::array();
  for (const auto& p : r.ppc) {
    ppc.push_back({{"subject", p.subject},
                   {"statistic", statistic_name(p.statistic)},
                   {"observed", number_or_null(p.observed)},
                   {"mean", number_or_null(p.mean)},
                   {"lower", number_or_null(p.lower)},
                   {"upper", number_or_null(p.upper)},
                   {"covered", p.covered},
                   {"valid_draws", p.valid_draws}});
  }
  j = json{{"method", r.method}, {"auc", number_or_null(r.auc)}, {"scored", r.scored}, {"calibration", bins},
           {"ppc", ppc}};
}

void from_json(const json& j, EvalReport& r) {
  r.method = j.at("method").get<std::string>();
  r.auc = number_from(j.at("auc"));
  r.scored = j.at("scored").get<std::size_t>();
  const auto& bins = j.at("calibration");
  if (bins.size() != 10) throw ParseError("calibration table must have 10 bins", 0);
  for (int b = 0; b < 10; ++b) {
    r.calibration[b].lower = bins[b].at("lower").get<double>();
    r.calibration[b].upper = bins[b].at("upper").get<double>();
    r.calibration[b].count = bins[b].at("count").get<std::size_t>();
    r.calibration[b].positives = bins[b].at("positives").get<std::size_t>();
    r.calibration[b].proportion = number_from(bins[b].at("proportion"));
  }
  r.ppc.clear();
  for (const auto& p : j.at("ppc")) {
    PpcRow row;
    row.subject = p.at("subject").get<int>();
    row.statistic = parse_statistic(p.at("statistic").get<std::string>());
    row.observed = number_from(p.at("observed"));
    row.mean = number_from(p.at("mean"));
    row.lower = number_from(p.at("lower"));
    row.upper = number_from(p.at("upper"));
    row.covered = p.at("covered").get<bool>();
    row.valid_draws = p.at("valid_draws").get<int>();
    r.ppc.push_back(row);
  }
}

void write_calibration_csv(const CalibrationTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "bin_lower,bin_upper,count,positives,proportion\n";
  for (const auto& b : table) {
    out << format_double(b.lower) << ',' << format_double(b.upper) << ',' << b.count << ',' << b.positives << ','
        << (b.empty() ? std::string("NA") : format_double(b.proportion)) << '\n';
  }
}

void write_ppc_csv(const std::vector<PpcRow>& rows, const NetworkDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  auto num = [](double x) { return std::isnan(x) ? std::string("NA") : format_double(x); };
  out << "subject_id,trait,statistic,observed,mean,lower,upper,covered\n";
  for (const auto& r : rows) {
    out << ds.ids()[r.subject] << ',' << format_double(ds.traits()[r.subject]) << ',' << statistic_name(r.statistic)
        << ',' << num(r.observed) << ',' << num(r.mean) << ',' << num(r.lower) << ',' << num(r.upper) << ','
        << (r.covered ? 1 : 0) << '\n';
  }
}

}  // namespace netresp
