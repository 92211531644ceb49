#include "netresp/commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "netresp/baseline.hpp"
#include "netresp/dataset_io.hpp"
#include "netresp/draws_io.hpp"
#include "netresp/errors.hpp"
#include "netresp/evaluation.hpp"
#include "netresp/gibbs.hpp"
#include "netresp/simulation.hpp"

namespace netresp {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate", "mask",       "fit", "fit-baseline",
                                              "evaluate", "ppc", "reproduce-simulation"};
  return names;
}

json load_config(const fs::path& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  return j;
}

json effective_config(json config, const CliOverrides& o) {
  if (o.seed) config["seed"] = *o.seed;
  if (o.out) config["out"] = *o.out;
  if (o.workers) config["workers"] = *o.workers;
  if (o.rk) config["rk"] = *o.rk;
  if (o.create) config["create"] = true;
  if (o.resume) config["resume"] = true;
  return config;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<int> parse_rk(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int x = 0;
    try {
      x = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || x < 1) throw ValidationError("rk must be N or A-B with 1 <= A <= B, got '" + text + "'");
    return x;
  };
  const auto dash = text.find('-');
  if (dash == std::string::npos) return {to_int(text)};
  const int lo = to_int(text.substr(0, dash)), hi = to_int(text.substr(dash + 1));
  if (lo > hi) throw ValidationError("rk range must be increasing, got '" + text + "'");
  std::vector<int> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

namespace {

const std::set<std::string> kTopKeys{"seed",     "out",          "workers", "rk",       "create", "resume",
                                     "simulate", "mask",         "fit",     "fit_baseline", "evaluate", "ppc"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown config key '" + where + "." + key + "'");
  }
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Files are written under "<name>.tmp" and renamed into place by commit();
// anything left uncommitted is removed on destruction.
class Staging {
 public:
  explicit Staging(fs::path dir) : dir_(std::move(dir)) {}
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    for (const auto& [tmp, _] : pending_) fs::remove(tmp, ec);
  }

  fs::path stage(const std::string& name) {
    fs::path tmp = dir_ / (name + ".tmp");
    pending_.emplace_back(tmp, dir_ / name);
    return tmp;
  }
  void adopt(fs::path tmp, fs::path final_path) { pending_.emplace_back(std::move(tmp), std::move(final_path)); }

  std::vector<std::pair<std::string, std::string>> commit() {
    std::vector<std::pair<std::string, std::string>> hashes;
    for (const auto& [tmp, final_path] : pending_) {
      hashes.emplace_back(fs::relative(final_path, dir_).generic_string(), fnv1a_hex(read_bytes(tmp)));
      fs::rename(tmp, final_path);
    }
    pending_.clear();
    return hashes;
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> pending_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + p.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + p.string());
}

struct Context {
  json config;
  fs::path base;
  fs::path out;
  std::uint64_t seed = 1;
  int workers = 1;
  bool resume = false;
  std::string hash;

  const json& section(const char* name) const {
    static const json empty = json::object();
    return config.contains(name) ? config.at(name) : empty;
  }
  // Explicit path relative to the config directory, else `fallback` in out.
  fs::path input(const json& sec, const char* key, const std::string& fallback) const {
    if (sec.contains(key)) {
      fs::path p = sec.at(key).get<std::string>();
      return p.is_absolute() ? p : base / p;
    }
    return out / fallback;
  }
  std::optional<fs::path> optional_input(const json& sec, const char* key) const {
    if (!sec.contains(key) || sec.at(key).is_null()) return std::nullopt;
    fs::path p = sec.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
  }
};

void write_manifest(Staging& staging, const Context& ctx, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& files) {
  json outputs = json::object();
  for (const auto& [name, h] : files) outputs[name] = h;
  json m{{"command", command}, {"seed", ctx.seed}, {"config_hash", ctx.hash}, {"outputs", outputs}};
  const fs::path tmp = staging.stage("manifest_" + command + ".json");
  write_text(tmp, m.dump(2) + "\n");
  staging.commit();
}

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw ValidationError(std::string(what) + " not found: " + p.string());
}

NetworkDataset load_input_dataset(const fs::path& p) {
  require_file(p, "dataset");
  return load_dataset(p);
}

HoldoutMask load_mask(const fs::path& p) {
  require_file(p, "mask");
  std::ifstream in(p);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(p.string() + ": " + e.what(), 0);
  }
  return j.get<HoldoutMask>();
}

PosteriorDraws load_draws(const fs::path& p) {
  require_file(p, "draws");
  return read_draws(p);
}

ScenarioConfig scenario_from(const Context& ctx) {
  ScenarioConfig sc;
  const json& sec = ctx.section("simulate");
  check_keys(sec, {"scenario"}, "simulate");
  if (sec.contains("scenario")) {
    const json& s = sec.at("scenario");
    check_keys(s,
               {"V", "trait_min", "trait_max", "per_trait", "lobe_of_node", "assortative_within",
                "assortative_between", "ring_degree", "rewire_p", "high_inter", "high_intra"},
               "simulate.scenario");
    sc.V = s.value("V", sc.V);
    sc.trait_min = s.value("trait_min", sc.trait_min);
    sc.trait_max = s.value("trait_max", sc.trait_max);
    sc.per_trait = s.value("per_trait", sc.per_trait);
    sc.lobe_of_node = s.value("lobe_of_node", sc.lobe_of_node);
    sc.assortative_within = s.value("assortative_within", sc.assortative_within);
    sc.assortative_between = s.value("assortative_between", sc.assortative_between);
    sc.ring_degree = s.value("ring_degree", sc.ring_degree);
    sc.rewire_p = s.value("rewire_p", sc.rewire_p);
    sc.high_inter = s.value("high_inter", sc.high_inter);
    sc.high_intra = s.value("high_intra", sc.high_intra);
  }
  sc.seed = ctx.seed;
  return sc;
}

void cmd_simulate(const Context& ctx) {
  const ScenarioConfig sc = scenario_from(ctx);
  sc.validate();
  const LabeledDataset lab = generate_scenario(sc);
  Staging st(ctx.out);
  save_dataset(lab.data, st.stage("dataset.txt"));
  std::ostringstream regimes;
  regimes << "subject_id,trait,regime\n";
  for (int i = 0; i < lab.data.subjects(); ++i) {
    regimes << lab.data.ids()[i] << ',' << format_double(lab.data.traits()[i]) << ',' << lab.regimes[i] << '\n';
  }
  write_text(st.stage("regimes.csv"), regimes.str());
  std::ostringstream blocks;
  blocks << "node,lobe,hemisphere\n";
  for (int v = 0; v < sc.V; ++v) blocks << v + 1 << ',' << lab.lobes.labels[v] << ',' << lab.hemispheres.labels[v] << '\n';
  write_text(st.stage("blocks.csv"), blocks.str());
  const auto files = st.commit();
  write_manifest(st, ctx, "simulate", files);
  spdlog::info("simulate: {} subjects, V={}", lab.data.subjects(), lab.data.nodes());
}

void cmd_mask(const Context& ctx) {
  const json& sec = ctx.section("mask");
  check_keys(sec, {"dataset", "protocol", "lower", "upper", "per_trait", "subject_fraction"}, "mask");
  const NetworkDataset ds = load_input_dataset(ctx.input(sec, "dataset", "dataset.txt"));
  const std::string protocol = sec.value("protocol", std::string("simulation"));
  const double lower = sec.value("lower", 0.2), upper = sec.value("upper", 0.8);
  RngStream rng(ctx.seed, {0x3a5cULL});
  HoldoutMask mask;
  if (protocol == "simulation") {
    mask = make_simulation_mask(ds, lower, upper, sec.value("per_trait", 2), rng);
  } else if (protocol == "hard-edge") {
    mask = make_hard_edge_mask(ds, lower, upper, sec.value("subject_fraction", 0.5), rng);
  } else {
    throw ValidationError("mask.protocol must be 'simulation' or 'hard-edge', got '" + protocol + "'");
  }
  Staging st(ctx.out);
  write_text(st.stage("mask.json"), json(mask).dump() + "\n");
  const auto files = st.commit();
  write_manifest(st, ctx, "mask", files);
  spdlog::info("mask: {} cells held out ({:.1f}% of all cells)", mask.entries.size(), 100.0 * mask.masked_fraction());
}

std::vector<int> rk_values(const Context& ctx) {
  if (!ctx.config.contains("rk")) return {};
  const json& rk = ctx.config.at("rk");
  return parse_rk(rk.is_number_integer() ? std::to_string(rk.get<int>()) : rk.get<std::string>());
}

void stage_draws(Staging& st, const fs::path& dir, const std::string& name, const PosteriorDraws& draws) {
  const fs::path tmp = dir / (name + ".tmp");
  write_draws(draws, tmp);
  st.adopt(tmp, dir / name);
  st.adopt(sidecar_path(tmp), sidecar_path(dir / name));
}

double training_log_likelihood(const PosteriorDraws& draws, const NetworkDataset& train) {
  double ll = 0.0;
  for (int i = 0; i < train.subjects(); ++i) {
    for (std::size_t l = 0; l < train.edges(); ++l) {
      const EdgeState e = train.edge(i, l);
      if (e == EdgeState::Missing) continue;
      const double p = std::clamp(predictive_mean(draws, i, l), 1e-12, 1.0 - 1e-12);
      ll += e == EdgeState::Present ? std::log(p) : std::log1p(-p);
    }
  }
  return ll;
}

void cmd_fit(const Context& ctx) {
  const json& sec = ctx.section("fit");
  check_keys(sec, {"dataset", "mask", "hyper", "chain", "checkpoint_every", "halt_after", "init"}, "fit");
  const NetworkDataset full = load_input_dataset(ctx.input(sec, "dataset", "dataset.txt"));
  const auto mask_path = ctx.optional_input(sec, "mask");
  std::optional<HoldoutMask> mask;
  if (mask_path) mask = load_mask(*mask_path);
  const NetworkDataset train = mask ? apply_mask(full, *mask) : full;

  HyperParams hp;
  if (sec.contains("hyper")) {
    check_keys(sec.at("hyper"), {"mu_z", "sigma2_z", "a", "q", "kappa", "R", "K"}, "fit.hyper");
    hp = sec.at("hyper").get<HyperParams>();
  }
  ChainConfig cc;
  if (sec.contains("chain")) {
    check_keys(sec.at("chain"), {"iterations", "burn_in", "thin", "store_latents"}, "fit.chain");
    cc = sec.at("chain").get<ChainConfig>();
  }
  cc.seed = ctx.seed;
  cc.validate();
  ChainOptions opt;
  opt.workers = ctx.workers;
  opt.checkpoint_every = sec.value("checkpoint_every", 500);
  opt.halt_after = sec.value("halt_after", 0);
  opt.resume = ctx.resume;
  const std::string init = sec.value("init", std::string("prior"));
  if (init == "prior") opt.init = InitMode::Prior;
  else if (init == "zeros") opt.init = InitMode::Zeros;
  else throw ValidationError("fit.init must be 'prior' or 'zeros'");

  std::vector<int> rks = rk_values(ctx);
  const bool sweep = rks.size() > 1;
  if (rks.empty()) rks = {-1};
  std::ostringstream table;
  table << "R,K,draws,train_loglik,holdout_auc\n";
  std::vector<std::pair<std::string, std::string>> files;
  for (int rk : rks) {
    HyperParams h = hp;
    if (rk > 0) h.R = h.K = rk;
    h.validate();
    fs::path dir = ctx.out;
    if (sweep) {
      dir = ctx.out / ("rk_" + std::to_string(rk));
      fs::create_directories(dir);
    }
    opt.checkpoint = dir / "model_chain.ckpt";
    std::string log;
    opt.log = &log;
    spdlog::info("fit: R=K={} iterations={} workers={}", h.R, cc.iterations, opt.workers);
    const PosteriorDraws draws = run_chain(train, h, cc, opt);
    Staging st(ctx.out);
    stage_draws(st, dir, "model_draws.bin", draws);
    const fs::path log_tmp = dir / "model_chain.log.tmp";
    write_text(log_tmp, log);
    st.adopt(log_tmp, dir / "model_chain.log");
    auto committed = st.commit();
    files.insert(files.end(), committed.begin(), committed.end());
    std::string auc_text = "NA";
    if (mask && !mask->empty()) {
      try {
        auc_text = format_double(score_holdout(draws, full, *mask, "network-response").auc);
      } catch (const UndefinedValue&) {
      }
    }
    table << h.R << ',' << h.K << ',' << draws.draw_count << ',' << format_double(training_log_likelihood(draws, train))
          << ',' << auc_text << '\n';
  }
  Staging st(ctx.out);
  if (sweep) {
    write_text(st.stage("rk_sweep.csv"), table.str());
    auto committed = st.commit();
    files.insert(files.end(), committed.begin(), committed.end());
  }
  write_manifest(st, ctx, "fit", files);
}

void cmd_fit_baseline(const Context& ctx) {
  const json& sec = ctx.section("fit_baseline");
  check_keys(sec, {"dataset", "mask", "baseline", "chain"}, "fit_baseline");
  const NetworkDataset full = load_input_dataset(ctx.input(sec, "dataset", "dataset.txt"));
  const auto mask_path = ctx.optional_input(sec, "mask");
  const NetworkDataset train = mask_path ? apply_mask(full, load_mask(*mask_path)) : full;
  BaselineConfig bc;
  if (sec.contains("baseline")) {
    const json& b = sec.at("baseline");
    check_keys(b, {"sigma_bar", "kappa", "clamp_eps", "prior_mean"}, "fit_baseline.baseline");
    const std::string pm = b.value("prior_mean", std::string("per-edge"));
    if (pm == "per-edge") bc.prior_mean = PriorMean::PerEdge;
    else if (pm == "pooled") bc.prior_mean = PriorMean::Pooled;
    else throw ValidationError("fit_baseline.baseline.prior_mean must be 'per-edge' or 'pooled'");
    bc.sigma_bar = b.value("sigma_bar", bc.sigma_bar);
    bc.kappa = b.value("kappa", bc.kappa);
    bc.clamp_eps = b.value("clamp_eps", bc.clamp_eps);
  }
  bc.validate();
  ChainConfig cc;
  if (sec.contains("chain")) {
    check_keys(sec.at("chain"), {"iterations", "burn_in", "thin"}, "fit_baseline.chain");
    cc = sec.at("chain").get<ChainConfig>();
  }
  cc.seed = ctx.seed;
  cc.validate();
  std::vector<std::vector<bool>> fallback;
  const PosteriorDraws draws = fit_baseline(train, bc, cc, ctx.workers, &fallback);
  std::ostringstream log;
  log << "clamp_eps=" << format_double(bc.resolved_clamp(train)) << '\n';
  log << "prior_mean=" << (bc.prior_mean == PriorMean::Pooled ? "pooled" : "per-edge") << '\n';
  for (std::size_t l = 0; l < fallback.size(); ++l) {
    for (std::size_t t = 0; t < fallback[l].size(); ++t) {
      if (fallback[l][t]) log << "edge=" << l + 1 << " trait_index=" << t << " empirical_logit=fallback\n";
    }
  }
  Staging st(ctx.out);
  stage_draws(st, ctx.out, "baseline_draws.bin", draws);
  write_text(st.stage("baseline_chain.log"), log.str());
  const auto files = st.commit();
  write_manifest(st, ctx, "fit-baseline", files);
}

std::vector<Statistic> statistics_from(const json& sec, std::vector<Statistic> fallback) {
  if (!sec.contains("statistics")) return fallback;
  std::vector<Statistic> out;
  for (const auto& s : sec.at("statistics")) out.push_back(parse_statistic(s.get<std::string>()));
  return out;
}

std::optional<BlockPartition> blocks_from(const Context& ctx, const json& sec, int V) {
  const json spec = sec.contains("blocks") ? sec.at("blocks") : json("lobes");
  if (spec.is_null()) return std::nullopt;
  if (spec.is_array()) {
    BlockPartition b{spec.get<std::vector<int>>()};
    if (static_cast<int>(b.labels.size()) != V) throw ValidationError("blocks must label every node");
    return b;
  }
  ScenarioConfig sc = scenario_from(ctx);
  sc.V = V;
  const std::string name = spec.get<std::string>();
  if (name == "lobes") return sc.lobes();
  if (name == "hemispheres") return sc.hemispheres();
  throw ValidationError("blocks must be 'lobes', 'hemispheres', null or a label array");
}

void cmd_evaluate(const Context& ctx) {
  const json& sec = ctx.section("evaluate");
  check_keys(sec, {"dataset", "mask", "model_draws", "baseline_draws", "statistics", "blocks", "level"}, "evaluate");
  const NetworkDataset full = load_input_dataset(ctx.input(sec, "dataset", "dataset.txt"));
  const HoldoutMask mask = load_mask(ctx.input(sec, "mask", "mask.json"));
  const PosteriorDraws model = load_draws(ctx.input(sec, "model_draws", "model_draws.bin"));
  const PosteriorDraws base = load_draws(ctx.input(sec, "baseline_draws", "baseline_draws.bin"));
  PpcOptions ppc;
  ppc.statistics = statistics_from(sec, {});
  if (!ppc.statistics.empty()) ppc.blocks = blocks_from(ctx, sec, full.nodes());
  ppc.seed = ctx.seed;
  ppc.level = sec.value("level", 0.95);
  const auto [rm, rb] = evaluate(model, base, full, mask, ppc);
  json report{{"config_hash", ctx.hash},
              {"held_out_entries", mask.entries.size()},
              {"masked_fraction", mask.masked_fraction()},
              {"model_auc", rm.auc},
              {"baseline_auc", rb.auc},
              {"model", rm},
              {"baseline", rb}};
  Staging st(ctx.out);
  write_text(st.stage("report.json"), report.dump(2) + "\n");
  write_calibration_csv(rm.calibration, st.stage("calibration_model.csv"));
  write_calibration_csv(rb.calibration, st.stage("calibration_baseline.csv"));
  const auto files = st.commit();
  write_manifest(st, ctx, "evaluate", files);
  spdlog::info("evaluate: model AUC {:.4f}, baseline AUC {:.4f}", rm.auc, rb.auc);
}

void cmd_ppc(const Context& ctx) {
  const json& sec = ctx.section("ppc");
  check_keys(sec, {"dataset", "model_draws", "baseline_draws", "statistics", "blocks", "level"}, "ppc");
  const NetworkDataset full = load_input_dataset(ctx.input(sec, "dataset", "dataset.txt"));
  const PosteriorDraws model = load_draws(ctx.input(sec, "model_draws", "model_draws.bin"));
  std::optional<PosteriorDraws> base;
  const bool skip_baseline = sec.contains("baseline_draws") && sec.at("baseline_draws").is_null();
  if (!skip_baseline) {
    const fs::path base_path = ctx.input(sec, "baseline_draws", "baseline_draws.bin");
    if (sec.contains("baseline_draws") || fs::exists(base_path)) base = load_draws(base_path);
  }
  const std::vector<Statistic> stats = statistics_from(
      sec, {Statistic::Density, Statistic::Transitivity, Statistic::AveragePathLength, Statistic::Assortativity});
  const auto blocks = blocks_from(ctx, sec, full.nodes());
  const double level = sec.value("level", 0.95);
  RngStream rm(ctx.seed, 0x99c0ULL), rb(ctx.seed, 0x99c1ULL);
  const auto pm = posterior_predictive_check(model, full, stats, blocks ? &*blocks : nullptr, rm, level);
  std::vector<PpcRow> pb;
  if (base) pb = posterior_predictive_check(*base, full, stats, blocks ? &*blocks : nullptr, rb, level);

  auto coverage = [&](const std::vector<PpcRow>& rows) {
    json c = json::object();
    for (Statistic s : stats) {
      int covered = 0, total = 0;
      for (const auto& r : rows) {
        if (r.statistic != s || std::isnan(r.observed)) continue;
        ++total;
        covered += r.covered;
      }
      c[std::string(statistic_name(s))] = {{"covered", covered}, {"subjects", total}};
    }
    return c;
  };
  json summary{{"config_hash", ctx.hash}, {"level", level}, {"model", coverage(pm)}};
  if (base) summary["baseline"] = coverage(pb);

  auto num = [](double x) { return std::isnan(x) ? std::string("NA") : format_double(x); };
  std::ostringstream scatter;
  scatter << "subject_id,trait,statistic,observed,model_mean,model_lower,model_upper";
  if (base) scatter << ",baseline_mean,baseline_lower,baseline_upper";
  scatter << '\n';
  for (std::size_t k = 0; k < pm.size(); ++k) {
    const auto& r = pm[k];
    scatter << full.ids()[r.subject] << ',' << format_double(full.traits()[r.subject]) << ','
            << statistic_name(r.statistic) << ',' << num(r.observed) << ',' << num(r.mean) << ',' << num(r.lower)
            << ',' << num(r.upper);
    if (base) scatter << ',' << num(pb[k].mean) << ',' << num(pb[k].lower) << ',' << num(pb[k].upper);
    scatter << '\n';
  }
  Staging st(ctx.out);
  write_text(st.stage("ppc.json"), summary.dump(2) + "\n");
  write_ppc_csv(pm, full, st.stage("ppc_model.csv"));
  if (base) write_ppc_csv(pb, full, st.stage("ppc_baseline.csv"));
  write_text(st.stage("scatter.csv"), scatter.str());
  const auto files = st.commit();
  write_manifest(st, ctx, "ppc", files);
}

void cmd_reproduce(Context ctx) {
  json& c = ctx.config;
  const std::string mask_file = (ctx.out / "mask.json").string();
  for (const char* sec : {"fit", "fit_baseline"}) {
    if (!c.contains(sec)) c[sec] = json::object();
    if (!c[sec].contains("mask")) c[sec]["mask"] = mask_file;
  }
  if (!c.contains("mask")) c["mask"] = json::object();
  if (!c["mask"].contains("protocol")) c["mask"]["protocol"] = "simulation";
  if (c.contains("rk") && rk_values(ctx).size() > 1) throw ValidationError("reproduce-simulation takes a single rk value");
  cmd_simulate(ctx);
  cmd_mask(ctx);
  cmd_fit(ctx);
  cmd_fit_baseline(ctx);
  cmd_evaluate(ctx);

  // The predictive checks use fits to the complete data, kept under full/.
  Context full = ctx;
  full.out = ctx.out / "full";
  fs::create_directories(full.out);
  const std::string dataset_file = (ctx.out / "dataset.txt").string();
  for (const char* sec : {"fit", "fit_baseline"}) {
    full.config[sec].erase("mask");
    full.config[sec]["dataset"] = dataset_file;
  }
  cmd_fit(full);
  cmd_fit_baseline(full);
  if (!c.contains("ppc")) c["ppc"] = json::object();
  if (!c["ppc"].contains("model_draws")) c["ppc"]["model_draws"] = (full.out / "model_draws.bin").string();
  if (!c["ppc"].contains("baseline_draws")) c["ppc"]["baseline_draws"] = (full.out / "baseline_draws.bin").string();
  cmd_ppc(ctx);
}

json hashed_config(json config) {
  for (const char* k : {"out", "create", "resume", "workers"}) config.erase(k);
  return config;
}

}  // namespace

void run_command(const std::string& command, const json& config, const fs::path& base) {
  check_keys(config, kTopKeys, "config");
  Context ctx;
  ctx.config = config;
  ctx.base = base;
  ctx.out = config.value("out", std::string("."));
  if (ctx.out.is_relative()) ctx.out = base / ctx.out;
  ctx.seed = config.value("seed", std::uint64_t{1});
  ctx.workers = config.value("workers", 1);
  if (ctx.workers < 1) throw ValidationError("workers must be positive");
  ctx.resume = config.value("resume", false);
  ctx.hash = fnv1a_hex(hashed_config(config).dump());
  if (!fs::is_directory(ctx.out)) {
    if (!config.value("create", false)) {
      throw ValidationError("output directory does not exist: " + ctx.out.string() + " (pass --create)");
    }
    fs::create_directories(ctx.out);
  }
  if (command == "simulate") cmd_simulate(ctx);
  else if (command == "mask") cmd_mask(ctx);
  else if (command == "fit") cmd_fit(ctx);
  else if (command == "fit-baseline") cmd_fit_baseline(ctx);
  else if (command == "evaluate") cmd_evaluate(ctx);
  else if (command == "ppc") cmd_ppc(ctx);
  else if (command == "reproduce-simulation") cmd_reproduce(ctx);
  else throw ValidationError("unknown command '" + command + "'");
}

int dispatch(const std::string& command, const fs::path& config_path, const CliOverrides& o, std::ostream& err) {
  try {
    const json config = effective_config(load_config(config_path), o);
    const fs::path base = config_path.empty() ? fs::current_path() : fs::absolute(config_path).parent_path();
    run_command(command, config, base);
    return kExitOk;
  } catch (const ChainInterrupted& e) {
    err << "netresp: " << e.what() << "; rerun with --resume\n";
    return kExitFailure;
  } catch (const NumericalError& e) {
    err << "netresp: numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const StateError& e) {
    err << "netresp: input mismatch: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const ValidationError& e) {
    err << "netresp: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    err << "netresp: invalid argument: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UndefinedValue& e) {
    err << "netresp: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "netresp: config: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "netresp: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "netresp: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace netresp
