#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netresp/graph_stats.hpp"
#include "netresp/model.hpp"
#include "netresp/network.hpp"
#include "netresp/rng.hpp"

namespace netresp {

enum class HoldoutProtocol {
  Simulation,  // a fixed number of subjects per unique trait
  HardEdge,    // a random fraction of all subjects
};

struct HoldoutMask {
  HoldoutProtocol protocol = HoldoutProtocol::HardEdge;
  double lower = 0.2;
  double upper = 0.8;
  double subject_fraction = 0.5;
  int per_trait = 2;
  int subjects = 0;
  std::size_t edges = 0;
  std::vector<int> held_out_subjects;                   // sorted
  std::vector<std::size_t> band_edges;                  // edges inside (lower, upper), sorted
  std::vector<std::pair<int, std::size_t>> entries;     // (subject, edge), sorted

  bool empty() const { return entries.empty(); }
  // Masked cells over all n * L cells.
  double masked_fraction() const;
};

// Mean of each edge over the subjects where it is observed.
std::vector<double> empirical_edge_probability(const NetworkDataset& ds);

// Masks, for a random subject_fraction of subjects, exactly the edges whose
// empirical probability lies strictly inside (lower, upper). An empty band
// logs a warning and returns an empty mask.
HoldoutMask make_hard_edge_mask(const NetworkDataset& ds, double lower, double upper, double subject_fraction,
                                RngStream& rng);

// Same edge band, but held out for `per_trait` randomly chosen subjects at
// every unique trait.
HoldoutMask make_simulation_mask(const NetworkDataset& ds, double lower, double upper, int per_trait,
                                 RngStream& rng);

// Copy of ds with the masked cells set to Missing. Throws StateError if the
// mask does not fit ds or targets a cell that is already missing.
NetworkDataset apply_mask(const NetworkDataset& ds, const HoldoutMask& mask);

// Mann-Whitney AUC with half credit for ties. Throws UndefinedValue unless
// both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  std::size_t positives = 0;
  double proportion = 0.0;  // NaN for an empty bin
  bool empty() const { return count == 0; }
};

using CalibrationTable = std::array<CalibrationBin, 10>;

// Bins [0, 0.1], (0.1, 0.2], ..., (0.9, 1].
int calibration_bin(double score);
CalibrationTable calibration_table(std::span<const double> scores, std::span<const int> labels);

struct PpcRow {
  int subject = 0;
  Statistic statistic = Statistic::Density;
  double observed = 0.0;
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool covered = false;
  int valid_draws = 0;  // draws for which the statistic was defined
};

// Type-7 (linear interpolation) sample quantile of sorted values.
double sorted_quantile(std::span<const double> sorted, double p);

// For each retained draw and subject, simulates one network from independent
// Bernoulli(pi) edges and evaluates each statistic. `observed` must have no
// missing cells.
std::vector<PpcRow> posterior_predictive_check(const PosteriorDraws& draws, const NetworkDataset& observed,
                                               std::span<const Statistic> statistics, const BlockPartition* blocks,
                                               RngStream& rng, double level = 0.95);

struct EvalReport {
  std::string method;
  double auc = 0.0;
  std::size_t scored = 0;
  CalibrationTable calibration{};
  std::vector<PpcRow> ppc;

  bool operator==(const EvalReport& o) const;
};

struct PpcOptions {
  std::vector<Statistic> statistics;  // empty: no PPC block
  std::optional<BlockPartition> blocks;
  std::uint64_t seed = 1;
  double level = 0.95;
};

// Scores the masked cells with each method's predictive means (labels from
// `full`, which must have those cells observed) and optionally runs the PPC.
std::pair<EvalReport, EvalReport> evaluate(const PosteriorDraws& model, const PosteriorDraws& baseline,
                                           const NetworkDataset& full, const HoldoutMask& mask,
                                           const PpcOptions& ppc = {});

EvalReport score_holdout(const PosteriorDraws& draws, const NetworkDataset& full, const HoldoutMask& mask,
                         const std::string& method);

void to_json(nlohmann::json& j, const HoldoutMask& m);
void from_json(const nlohmann::json& j, HoldoutMask& m);
void to_json(nlohmann::json& j, const EvalReport& r);
void from_json(const nlohmann::json& j, EvalReport& r);

void write_calibration_csv(const CalibrationTable& table, const std::filesystem::path& path);
void write_ppc_csv(const std::vector<PpcRow>& rows, const NetworkDataset& ds, const std::filesystem::path& path);

}  // namespace netresp
