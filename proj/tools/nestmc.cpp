// nestmc command-line front end.
//
// Every subcommand that writes an output also writes <out>.manifest.json
// recording the command, the effective configuration, RNG seeds and digests
// of the input files. Failures print one JSON object to stderr:
//   error: {"category":"<ErrorCategory>","message":"..."}
// and exit with status 2.

#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nestmc/io.hpp"
#include "nestmc/nestmc.hpp"

namespace {

using namespace nestmc;
using io::json;

std::string fmt_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

Party parse_party(const std::string& s) {
  if (s == "a" || s == "A") return Party::A;
  if (s == "b" || s == "B") return Party::B;
  throw Error(ErrorCategory::InvalidConfig, "party must be 'a' or 'b', got '" + s + "'");
}

// Chosen election, or nullptr when the graph carries none.
const Election* pick_election(const DualGraph& graph, const std::string& name) {
  if (!name.empty()) return &graph.election(name);
  if (graph.elections().empty()) return nullptr;
  if (graph.elections().size() == 1) return &graph.elections().front();
  throw Error(ErrorCategory::InvalidConfig, "graph has several elections; pass --election");
}

const Election& require_election(const DualGraph& graph, const std::string& name) {
  const Election* e = pick_election(graph, name);
  if (!e) throw Error(ErrorCategory::IncompleteElection, "graph carries no election data");
  return *e;
}

Plan load_plan_warn(const std::string& path, const DualGraph& graph, std::optional<int> districts = std::nullopt) {
  std::vector<std::string> warnings;
  Plan plan = io::load_plan(path, graph, &warnings, districts);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return plan;
}

// Streams one JSONL record per retained step into an atomic output file.
class EnsembleWriter {
 public:
  EnsembleWriter(const std::string& path, const DualGraph& graph, const Election* election, std::size_t thin)
      : file_(path), graph_(graph), election_(election), thin_(thin) {
    if (thin_ < 1) throw Error(ErrorCategory::InvalidConfig, "--thin must be at least 1");
  }

  void operator()(std::size_t step, const Plan& plan) {
    if (step % thin_ != 0) return;
    EnsembleRecord r;
    if (election_) {
      r = make_record(graph_, plan, *election_, step);
    } else {
      r.step = step;
      r.plan_digest = plan_digest(plan);
    }
    file_.stream() << io::record_to_json(r, election_ != nullptr).dump() << '\n';
  }

  void commit() { file_.commit(); }

 private:
  io::AtomicFile file_;
  const DualGraph& graph_;
  const Election* election_;
  std::size_t thin_;
};

struct Common {
  std::string graph;
  std::string seed_plan;
  std::string out;
  std::string election;
  std::string party = "a";
  std::uint64_t rng = 0;
  std::size_t steps = 1000;
  std::size_t arity = 3;
  int districts = 0;
  std::size_t size = 0;
  double epsilon = 0.05;
  std::size_t thin = 1;
};

io::RunManifest manifest_for(const std::string& command, json config, std::vector<std::uint64_t> seeds,
                             std::initializer_list<std::string> inputs) {
  io::RunManifest m;
  m.command = command;
  m.config = std::move(config);
  m.rng_seeds = std::move(seeds);
  for (const auto& in : inputs)
    if (!in.empty()) m.add_input(in);
  return m;
}

int cmd_validate(const Common& o) {
  const DualGraph graph = io::load_graph(o.graph);
  json summary = {{"vertices", graph.size()},
                  {"edges", graph.edges().size()},
                  {"total_population", graph.total_population()}};
  json elections = json::array();
  for (const auto& e : graph.elections())
    elections.push_back({{"name", e.name}, {"share_a", statewide_share(graph, e, Party::A)}});
  summary["elections"] = elections;
  if (!o.seed_plan.empty()) {
    const Plan plan = load_plan_warn(o.seed_plan, graph);
    json p = {{"districts", plan.num_districts()},
              {"contiguous", is_contiguous_plan(graph, plan)},
              {"nested", is_k_nested(graph, plan, NestingSpec(o.arity))},
              {"arity", o.arity},
              {"plan_digest", digest_hex(plan_digest(plan))}};
    if (graph.total_population() > 0) p["population_deviation"] = population_deviation(graph, plan);
    if (const Election* e = pick_election(graph, o.election)) {
      const auto t = tally(graph, plan, *e);
      p["seats_a"] = seats_won(t, Party::A);
      p["seats_b"] = seats_won(t, Party::B);
    }
    summary["plan"] = p;
  }
  std::cout << summary.dump(2) << "\n";
  if (!o.out.empty()) {
    io::write_file_atomic(o.out, summary.dump(2) + "\n");
    manifest_for("validate", {{"arity", o.arity}}, {}, {o.graph, o.seed_plan}).write_for(o.out);
  }
  return 0;
}

int cmd_enumerate(const Common& o, std::size_t limit) {
  const DualGraph graph = io::load_graph(o.graph);
  int districts = o.districts;
  std::size_t size = o.size;
  if (districts == 0 && size == 0) {
    if (graph.size() % o.arity != 0)
      throw Error(ErrorCategory::NoNestingExists, std::to_string(graph.size()) + " vertices are not divisible by " +
                                                      std::to_string(o.arity));
    size = o.arity;
    districts = static_cast<int>(graph.size() / o.arity);
  } else if (districts == 0) {
    districts = size ? static_cast<int>(graph.size() / size) : 0;
  } else if (size == 0) {
    size = graph.size() / static_cast<std::size_t>(districts);
  }
  const Election* election = pick_election(graph, o.election);
  std::uint64_t count = 0;
  Histogram seats;
  for_each_balanced_partition(
      graph, districts, size,
      [&](const std::vector<DistrictId>& labels) {
        ++count;
        if (election) ++seats[seats_won(tally(graph, Plan(labels, districts), *election), Party::A)];
      },
      EnumerationLimits{limit});
  std::cout << count << "\n";
  if (!o.out.empty()) {
    json result = {{"count", count}, {"districts", districts}, {"size", size}};
    if (election) {
      json h = json::object();
      for (auto [k, c] : seats) h[std::to_string(k)] = c;
      result["election"] = election->name;
      result["seat_histogram_a"] = h;
    }
    io::write_file_atomic(o.out, result.dump(2) + "\n");
    manifest_for("enumerate", {{"districts", districts}, {"size", size}, {"limit", limit}}, {}, {o.graph})
        .write_for(o.out);
  }
  return 0;
}

int cmd_run_swap(const Common& o, std::size_t max_rejections) {
  const DualGraph graph = io::load_graph(o.graph);
  const Plan seed = load_plan_warn(o.seed_plan, graph);
  SwapConfig cfg;
  cfg.steps = o.steps;
  cfg.rng_seed = o.rng;
  cfg.max_rejections_per_step = max_rejections;
  cfg.nesting = NestingSpec(o.arity);
  const Election* election = pick_election(graph, o.election);
  EnsembleWriter writer(o.out, graph, election, o.thin);
  run_swap(graph, seed, cfg, writer);
  writer.commit();
  manifest_for("run-swap",
               {{"steps", o.steps},
                {"arity", o.arity},
                {"max_rejections", max_rejections},
                {"thin", o.thin},
                {"election", election ? election->name : ""}},
               {o.rng}, {o.graph, o.seed_plan})
      .write_for(o.out);
  return 0;
}

RecomConfig recom_config(const Common& o, const Plan& seed, std::size_t max_tree_attempts) {
  RecomConfig cfg;
  cfg.steps = o.steps;
  cfg.rng_seed = o.rng;
  cfg.epsilon = o.epsilon;
  cfg.max_tree_attempts = max_tree_attempts;
  cfg.num_districts = o.districts > 0 ? o.districts : seed.num_districts();
  return cfg;
}

int cmd_run_recom(const Common& o, std::size_t max_tree_attempts) {
  const DualGraph graph = io::load_graph(o.graph);
  const Plan seed = load_plan_warn(o.seed_plan, graph);
  const RecomConfig cfg = recom_config(o, seed, max_tree_attempts);
  const Election* election = pick_election(graph, o.election);
  EnsembleWriter writer(o.out, graph, election, o.thin);
  run_recom(graph, seed, cfg, writer);
  writer.commit();
  manifest_for("run-recom",
               {{"steps", o.steps},
                {"epsilon", o.epsilon},
                {"districts", cfg.num_districts},
                {"max_tree_attempts", max_tree_attempts},
                {"thin", o.thin},
                {"election", election ? election->name : ""}},
               {o.rng}, {o.graph, o.seed_plan})
      .write_for(o.out);
  return 0;
}

int cmd_short_burst(const Common& o, std::size_t burst_length, std::size_t bursts, std::size_t max_tree_attempts) {
  const DualGraph graph = io::load_graph(o.graph);
  const Plan seed = load_plan_warn(o.seed_plan, graph);
  BurstConfig cfg;
  cfg.burst_length = burst_length;
  cfg.num_bursts = bursts;
  cfg.target_party = parse_party(o.party);
  cfg.election = require_election(graph, o.election).name;
  cfg.inner = recom_config(o, seed, max_tree_attempts);
  const BurstResult result = run_short_bursts(graph, seed, cfg);

  io::save_plan(graph, result.best_plan, o.out);
  std::string trace = "burst,best_score\n";
  for (std::size_t i = 0; i < result.best_score_trace.size(); ++i)
    trace += std::to_string(i + 1) + "," + std::to_string(result.best_score_trace[i]) + "\n";
  io::write_file_atomic(o.out + ".trace.csv", trace);
  const int best = score(graph, result.best_plan, graph.election(cfg.election), cfg.target_party);
  std::cout << best << "\n";
  manifest_for("short-burst",
               {{"burst_length", burst_length},
                {"bursts", bursts},
                {"party", o.party},
                {"election", cfg.election},
                {"epsilon", o.epsilon},
                {"districts", cfg.inner.num_districts}},
               {o.rng}, {o.graph, o.seed_plan})
      .write_for(o.out);
  return 0;
}

int cmd_quotient(const Common& o) {
  const DualGraph graph = io::load_graph(o.graph);
  const Plan plan = load_plan_warn(o.seed_plan, graph);
  io::save_graph(quotient_graph(graph, plan), o.out);
  manifest_for("quotient", json::object(), {}, {o.graph, o.seed_plan}).write_for(o.out);
  return 0;
}

int cmd_seed(const Common& o, std::size_t restarts) {
  const DualGraph graph = io::load_graph(o.graph);
  const Plan plan = random_nested_seed(graph, NestingSpec(o.arity), o.rng, restarts);
  io::save_plan(graph, plan, o.out);
  manifest_for("seed", {{"arity", o.arity}, {"restarts", restarts}}, {o.rng}, {o.graph}).write_for(o.out);
  return 0;
}

// --stat is "seats_a" or "share:<rank>" with rank 1 = lowest share.
std::vector<double> stat_series(const std::vector<EnsembleRecord>& records, const std::string& stat) {
  std::vector<double> series;
  series.reserve(records.size());
  if (stat == "seats_a") {
    for (const auto& r : records) series.push_back(r.seats_a);
    return series;
  }
  if (stat.rfind("share:", 0) == 0) {
    const std::size_t rank = std::stoul(stat.substr(6));
    for (const auto& r : records) {
      if (rank < 1 || rank > r.ranked_shares_a.size())
        throw Error(ErrorCategory::InvalidConfig, "rank " + std::to_string(rank) + " out of range");
      series.push_back(r.ranked_shares_a[rank - 1]);
    }
    return series;
  }
  throw Error(ErrorCategory::InvalidConfig, "unknown statistic '" + stat + "'");
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "seats_a,count\n";
  for (auto [k, c] : h) out += std::to_string(k) + "," + std::to_string(c) + "\n";
  return out;
}

int emit(const std::string& out, const std::string& text, const char* command, json config,
         std::initializer_list<std::string> inputs) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  io::write_file_atomic(out, text);
  manifest_for(command, std::move(config), {}, inputs).write_for(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested and unnested districting ensembles"};
  app.set_config("--config", "", "TOML/INI file supplying any flag");
  app.require_subcommand(1);

  Common o;
  std::size_t limit = 40, max_rejections = 100'000, max_tree_attempts = 1000, burst_length = 10, bursts = 100,
              restarts = 10'000, max_lag = 100;
  std::string ensemble, ensemble2, stat = "seats_a", fractions = "0.1,0.5,1.0";

  auto graph_opt = [&](CLI::App* sub) { sub->add_option("--graph", o.graph, "Dual graph JSON")->required(); };
  auto out_opt = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--out", o.out, "Output path");
    if (required) opt->required();
  };

  auto* validate = app.add_subcommand("validate", "Load and check a graph, and optionally a plan");
  graph_opt(validate);
  validate->add_option("--seed-plan", o.seed_plan, "Plan CSV to check");
  validate->add_option("--arity", o.arity, "Nesting arity")->capture_default_str();
  validate->add_option("--election", o.election);
  out_opt(validate, false);

  auto* enumerate = app.add_subcommand("enumerate", "Count contiguous exact-size partitions");
  graph_opt(enumerate);
  enumerate->add_option("--districts", o.districts, "Number of districts");
  enumerate->add_option("--size", o.size, "Exact district size in vertices");
  enumerate->add_option("--arity", o.arity, "Nesting arity (used when --districts/--size are absent)")
      ->capture_default_str();
  enumerate->add_option("--limit", limit, "Refuse graphs with more vertices")->capture_default_str();
  enumerate->add_option("--election", o.election);
  out_opt(enumerate, false);

  auto* swap = app.add_subcommand("run-swap", "Run the Swap chain over k:1 nested plans");
  graph_opt(swap);
  swap->add_option("--seed-plan", o.seed_plan)->required();
  swap->add_option("--steps", o.steps)->capture_default_str();
  swap->add_option("--rng", o.rng)->capture_default_str();
  swap->add_option("--arity", o.arity)->capture_default_str();
  swap->add_option("--max-rejections", max_rejections)->capture_default_str();
  swap->add_option("--election", o.election);
  swap->add_option("--thin", o.thin, "Keep every n-th step")->capture_default_str();
  out_opt(swap, true);

  auto* recom = app.add_subcommand("run-recom", "Run the ReCom chain on a unit-level graph");
  graph_opt(recom);
  recom->add_option("--seed-plan", o.seed_plan)->required();
  recom->add_option("--steps", o.steps)->capture_default_str();
  recom->add_option("--rng", o.rng)->capture_default_str();
  recom->add_option("--epsilon", o.epsilon)->capture_default_str();
  recom->add_option("--districts", o.districts, "Defaults to the seed plan's count");
  recom->add_option("--max-tree-attempts", max_tree_attempts)->capture_default_str();
  recom->add_option("--election", o.election);
  recom->add_option("--thin", o.thin)->capture_default_str();
  out_opt(recom, true);

  auto* burst = app.add_subcommand("short-burst", "Bias a plan toward one party with short ReCom bursts");
  graph_opt(burst);
  burst->add_option("--seed-plan", o.seed_plan)->required();
  burst->add_option("--election", o.election);
  burst->add_option("--party", o.party, "a or b")->capture_default_str();
  burst->add_option("--burst-length", burst_length)->capture_default_str();
  burst->add_option("--bursts", bursts)->capture_default_str();
  burst->add_option("--rng", o.rng)->capture_default_str();
  burst->add_option("--epsilon", o.epsilon)->capture_default_str();
  burst->add_option("--districts", o.districts);
  burst->add_option("--max-tree-attempts", max_tree_attempts)->capture_default_str();
  out_opt(burst, true);

  auto* quotient = app.add_subcommand("quotient", "Collapse a plan's districts into a new dual graph");
  graph_opt(quotient);
  quotient->add_option("--seed-plan", o.seed_plan, "Plan whose districts become vertices")->required();
  out_opt(quotient, true);

  auto* seed = app.add_subcommand("seed", "Random k:1 nested plan");
  graph_opt(seed);
  seed->add_option("--arity", o.arity)->capture_default_str();
  seed->add_option("--rng", o.rng)->capture_default_str();
  seed->add_option("--restarts", restarts)->capture_default_str();
  out_opt(seed, true);

  auto* diagnose = app.add_subcommand("diagnose", "Statistics over an ensemble file");
  diagnose->require_subcommand(1);
  auto* autocorr = diagnose->add_subcommand("autocorr", "Lag autocorrelation curve");
  autocorr->add_option("--ensemble", ensemble)->required();
  autocorr->add_option("--stat", stat, "seats_a or share:<rank>")->capture_default_str();
  autocorr->add_option("--max-lag", max_lag)->capture_default_str();
  out_opt(autocorr, false);
  auto* partial = diagnose->add_subcommand("partial", "Ranked share quantiles over ensemble prefixes");
  partial->add_option("--ensemble", ensemble)->required();
  partial->add_option("--fractions", fractions)->capture_default_str();
  out_opt(partial, false);
  auto* histogram = diagnose->add_subcommand("histogram", "Seats-won histogram");
  histogram->add_option("--ensemble", ensemble)->required();
  out_opt(histogram, false);
  auto* distance = diagnose->add_subcommand("distance", "Total variation distance of two seat histograms");
  distance->add_option("--ensemble", ensemble)->required();
  distance->add_option("--ensemble2", ensemble2)->required();
  out_opt(distance, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(o);
    if (*enumerate) return cmd_enumerate(o, limit);
    if (*swap) return cmd_run_swap(o, max_rejections);
    if (*recom) return cmd_run_recom(o, max_tree_attempts);
    if (*burst) return cmd_short_burst(o, burst_length, bursts, max_tree_attempts);
    if (*quotient) return cmd_quotient(o);
    if (*seed) return cmd_seed(o, restarts);
    if (*autocorr) {
      const auto series = stat_series(io::load_ensemble(ensemble), stat);
      const auto curve = autocorrelation_curve(series, max_lag);
      std::string csv = "lag,autocorrelation\n";
      for (std::size_t i = 0; i < curve.size(); ++i) csv += std::to_string(i) + "," + fmt_double(curve[i]) + "\n";
      return emit(o.out, csv, "diagnose autocorr", {{"stat", stat}, {"max_lag", max_lag}}, {ensemble});
    }
    if (*partial) {
      std::vector<double> fs;
      std::stringstream ss(fractions);
      for (std::string item; std::getline(ss, item, ',');) fs.push_back(std::stod(item));
      const auto records = io::load_ensemble(ensemble);
      std::string csv = "fraction,records,rank,min,q1,median,q3,max\n";
      for (const auto& p : partial_ensemble_rank_stats(records, fs))
        for (std::size_t k = 0; k < p.ranks.size(); ++k) {
          const auto& r = p.ranks[k];
          csv += fmt_double(p.fraction) + "," + std::to_string(p.records) + "," + std::to_string(k + 1) + "," +
                 fmt_double(r.min) + "," + fmt_double(r.q1) + "," + fmt_double(r.median) + "," + fmt_double(r.q3) +
                 "," + fmt_double(r.max) + "\n";
        }
      return emit(o.out, csv, "diagnose partial", {{"fractions", fractions}}, {ensemble});
    }
    if (*histogram)
      return emit(o.out, histogram_csv(seat_histogram(io::load_ensemble(ensemble))), "diagnose histogram",
                  json::object(), {ensemble});
    if (*distance) {
      const double tv = histogram_distance(seat_histogram(io::load_ensemble(ensemble)),
                                           seat_histogram(io::load_ensemble(ensemble2)));
      return emit(o.out, "total_variation\n" + fmt_double(tv) + "\n", "diagnose distance", json::object(),
                  {ensemble, ensemble2});
    }
  } catch (const Error& e) {
    std::cerr << "error: " << json{{"category", std::string(category_name(e.category()))}, {"message", e.message()}}.dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << json{{"category", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
  return 0;
}
