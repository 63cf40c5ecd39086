#include "stratinfer_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"
#include "stratinfer/error.hpp"
#include "stratinfer/simulate.hpp"
#include "stratinfer/trajectory_io.hpp"

namespace stratinfer::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

// Thrown for flag combinations CLI11 cannot express; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::InvalidParam:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InfeasibleKappa:
      return kExitUsage;
    default:
      return kExitData;
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream file(p, std::ios::binary);
  if (!file) throw Error(ErrorCode::Parse, path + ": cannot open for writing");
  file << text;
  if (!file) throw Error(ErrorCode::Parse, path + ": write failed");
}

FillMode parse_fill(const std::string& s) {
  if (s == "none") return FillMode::None;
  if (s == "forward") return FillMode::Forward;
  throw UsageError("--fill must be 'none' or 'forward'");
}

std::vector<ThresholdVector> parse_kappa_grid(const std::vector<std::string>& specs) {
  std::vector<ThresholdVector> grid;
  for (const std::string& spec : specs) {
    std::stringstream triples(spec);
    std::string triple;
    while (std::getline(triples, triple, ';')) {
      if (triple.find_first_not_of(" \t") == std::string::npos) continue;
      std::vector<double> values;
      std::stringstream parts(triple);
      std::string part;
      while (std::getline(parts, part, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(part, &used);
        } catch (const std::exception&) {
          throw UsageError("--kappa-grid: '" + part + "' is not a number");
        }
        if (part.find_first_not_of(" \t", used) != std::string::npos) {
          throw UsageError("--kappa-grid: '" + part + "' is not a number");
        }
        values.push_back(v);
      }
      if (values.size() != 3) throw UsageError("--kappa-grid: each entry needs three comma-separated values");
      const ThresholdVector k{values[0], values[1], values[2]};
      if (!k.feasible()) {
        throw UsageError("--kappa-grid: '" + triple + "' is infeasible (bounds must lie in [0,1] and sum to at most 1)");
      }
      grid.push_back(k);
    }
  }
  if (grid.empty()) throw UsageError("--kappa-grid: no threshold vectors given");
  return grid;
}

EdgeProbability parse_edge_probability(const std::string& s) {
  if (s == "step_response") return EdgeProbability::StepResponse;
  if (s == "window_frequency") return EdgeProbability::WindowFrequency;
  throw UsageError("--edge-probability must be 'step_response' or 'window_frequency'");
}

EdgeSelection parse_edge_selection(const std::string& s) {
  if (s == "highest_ranked") return EdgeSelection::HighestRanked;
  if (s == "strongest") return EdgeSelection::Strongest;
  if (s == "all") return EdgeSelection::All;
  throw UsageError("--edge-selection must be 'highest_ranked', 'strongest' or 'all'");
}

std::string event_name(const fs::path& p) { return p.lexically_normal().generic_string(); }

struct Loaded {
  std::vector<TrajectorySet> events;
  std::vector<std::string> names;
  std::vector<std::optional<Regime>> labels;
};

Loaded load_manifests(const std::vector<std::string>& manifests, FillMode fill, std::ostream& err) {
  Loaded out;
  std::size_t filled = 0;
  for (const std::string& m : manifests) {
    const auto entries = read_manifest(m);
    std::size_t f = 0;
    auto events = load_events(entries, fill, &f);
    filled += f;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      out.names.push_back(event_name(entries[k].path));
      out.labels.push_back(entries[k].label);
      out.events.push_back(std::move(events[k]));
    }
  }
  if (fill == FillMode::Forward) err << "filled " << filled << " missing positions by carrying forward\n";
  return out;
}

ordered_json network_config(const NetworkOptions& n) {
  return {{"sigma", n.sigma},
          {"omega", n.omega},
          {"max_lag", n.max_lag > 0 ? n.max_lag : std::max<std::size_t>(1, n.omega / 4)},
          {"ranking", "incoming_weight"},
          {"edge_selection", to_string(n.selection)},
          {"edge_probability", to_string(n.probability)}};
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  std::size_t agents = 20;
  std::size_t steps = 400;
  double rho = 1.0;
  double mix_prob = 0.5;
  std::size_t events = 1;
  std::uint64_t seed = 0;
  double arena = 100.0;
  double speed = 1.0;
  std::string out;
};

int run_simulate(const SimulateArgs& a, bool has_rho, bool has_mix, std::ostream& out) {
  const auto model = parse_regime(a.model);
  if (!model) throw UsageError("--model must be one of hm, lra, hm_and_lra, mixed, random");
  if (*model == Regime::HM && !has_rho) throw UsageError("--rho is required with --model hm");
  if (*model != Regime::HM && has_rho) throw UsageError("--rho applies only to --model hm");
  if (*model != Regime::MIXED && has_mix) throw UsageError("--mix-prob applies only to --model mixed");
  if (a.events == 0) throw UsageError("--events must be at least 1");

  const fs::path dir(a.out);
  fs::create_directories(dir);
  std::vector<ManifestEntry> manifest;
  for (std::size_t k = 0; k < a.events; ++k) {
    SimSpec spec;
    spec.model = *model;
    spec.n_agents = a.agents;
    spec.n_steps = a.steps;
    spec.rho = a.rho;
    spec.mix_prob = a.mix_prob;
    spec.seed = derive_seed(a.seed, k);
    spec.arena = a.arena;
    spec.speed = a.speed;
    const TrajectorySet ts = simulate(spec);

    std::ostringstream name;
    name << "event_" << std::setw(3) << std::setfill('0') << k << ".csv";
    write_trajectory_csv(ts, dir / name.str());
    ManifestEntry entry;
    entry.path = name.str();
    for (AgentIndex i : ts.informed) entry.informed_ids.push_back(ts.agent_ids[i]);
    entry.label = *model;
    entry.seed = spec.seed;
    manifest.push_back(entry);
  }
  write_manifest(manifest, dir / "manifest.json");
  out << "wrote " << a.events << " event(s) and manifest.json to " << dir.generic_string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DetectArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> manifests;
  std::vector<int> informed;
  DetectOptions options;
  std::string fill = "none";
  std::string out;
};

int run_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  if (a.inputs.empty() && a.manifests.empty()) throw UsageError("detect needs --in or --manifest");
  if (!(a.options.sigma >= 0.0 && a.options.sigma <= 1.0)) throw UsageError("--sigma must lie in [0, 1]");
  if (!(a.options.density_percentile >= 0.0 && a.options.density_percentile <= 100.0)) {
    throw UsageError("--density-percentile must lie in [0, 100]");
  }
  if (a.options.omega < 1 || a.options.window <= a.options.omega) {
    throw UsageError("--window must exceed --omega, and --omega must be at least 1");
  }
  const FillMode fill = parse_fill(a.fill);
  Loaded data = load_manifests(a.manifests, fill, err);
  std::size_t filled = 0;
  for (const std::string& path : a.inputs) {
    ReadOptions ro;
    ro.fill = fill;
    ro.informed_ids = a.informed;
    ReadStats stats;
    data.events.push_back(read_trajectory_csv(fs::path(path), ro, &stats));
    data.names.push_back(event_name(path));
    filled += stats.filled;
  }
  if (fill == FillMode::Forward && !a.inputs.empty()) {
    err << "filled " << filled << " missing positions by carrying forward\n";
  }

  ordered_json events = ordered_json::array();
  for (std::size_t k = 0; k < data.events.size(); ++k) {
    const TrajectorySet& ts = data.events[k];
    ordered_json intervals = ordered_json::array();
    for (const CoordinationInterval& iv : detect_coordination_intervals(ts.directions, a.options)) {
      ordered_json initiators = ordered_json::array();
      for (AgentIndex i : find_initiators(ts.directions, iv, a.options.sigma, a.options.omega)) {
        initiators.push_back(ts.agent_ids[i]);
      }
      intervals.push_back({{"start", iv.start}, {"end", iv.end}, {"sigma", iv.sigma}, {"initiators", initiators}});
    }
    events.push_back({{"event", data.names[k]},
                      {"n_agents", ts.n_agents()},
                      {"n_steps", ts.n_steps()},
                      {"intervals", intervals}});
  }
  ordered_json report;
  report["config"] = {{"command", "detect"},
                      {"version", kVersion},
                      {"sigma", a.options.sigma},
                      {"omega", a.options.omega},
                      {"window", a.options.window},
                      {"density_percentile", a.options.density_percentile},
                      {"fill", a.fill},
                      {"inputs", a.inputs},
                      {"manifests", a.manifests}};
  report["events"] = events;
  emit(report.dump(2) + "\n", a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::vector<std::string> manifests;
  std::size_t folds = 10;
  std::vector<std::string> kappa_grid;
  std::size_t p_ar = kDefaultArLag;
  std::uint64_t seed = 0;
  NetworkOptions network;
  std::string edge_probability = "step_response";
  std::string edge_selection = "highest_ranked";
  double mix_threshold = kDefaultMixThreshold;
  std::string fill = "none";
  std::string per_step_csv;
  std::string out;
};

int run_fit(FitArgs a, std::ostream& out, std::ostream& err) {
  const auto grid = a.kappa_grid.empty() ? default_kappa_grid() : parse_kappa_grid(a.kappa_grid);
  a.network.probability = parse_edge_probability(a.edge_probability);
  a.network.selection = parse_edge_selection(a.edge_selection);
  if (a.folds < 2) throw UsageError("--folds must be at least 2");
  const Loaded data = load_manifests(a.manifests, parse_fill(a.fill), err);

  CrossValidationOptions cv;
  cv.folds = a.folds;
  cv.seed = a.seed;
  cv.fit.kappa_grid = grid;
  cv.fit.p_ar = a.p_ar;
  cv.fit.network = a.network;
  RiskReport report = cross_validate(data.events, cv);
  for (AgentSummary& s : report.agents) s.label = label_strategy(s.w, a.mix_threshold);

  ordered_json kappa = ordered_json::array();
  for (const ThresholdVector& k : grid) kappa.push_back({k.hm, k.lra, k.ar});
  ordered_json doc;
  doc["config"] = {{"command", "fit"},
                   {"version", kVersion},
                   {"manifests", a.manifests},
                   {"folds", a.folds},
                   {"seed", a.seed},
                   {"p_ar", a.p_ar},
                   {"kappa_grid", kappa},
                   {"mix_threshold", a.mix_threshold},
                   {"network", network_config(a.network)},
                   {"fill", a.fill}};
  const ordered_json body = to_json(report, data.names);
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();

  // Network inferred from every event, for inspection; fold fits use their own training events.
  const InferredNetwork net = infer_following_network(data.events, a.network);
  ordered_json ranking = ordered_json::array();
  for (AgentIndex i : net.ranking) ranking.push_back(data.events.front().agent_ids[i]);
  doc["network"] = {{"ranking", ranking}, {"edges", to_json(net.dag, data.events.front().agent_ids)}};

  if (!a.per_step_csv.empty()) emit(per_step_csv(report), a.per_step_csv, out);
  emit(doc.dump(2) + "\n", a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::vector<std::string> manifests;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::size_t trees = 50;
  std::size_t depth = 4;
  std::size_t p_ar = kDefaultArLag;
  std::string fill = "none";
  std::string features_csv;
  std::string out;
};

int run_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.folds < 2) throw UsageError("--folds must be at least 2");
  if (a.trees == 0 || a.depth == 0) throw UsageError("--trees and --depth must be positive");
  const Loaded data = load_manifests(a.manifests, parse_fill(a.fill), err);
  std::vector<LabeledDataset> labeled;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < data.events.size(); ++k) {
    if (!data.labels[k]) continue;
    labeled.push_back(LabeledDataset{&data.events[k], *data.labels[k]});
    names.push_back(data.names[k]);
  }
  ClassificationOptions opts;
  opts.folds = a.folds;
  opts.seed = a.seed;
  opts.forest.n_trees = a.trees;
  opts.forest.max_depth = a.depth;
  opts.p_ar = a.p_ar;
  const ClassificationReport report = classify_datasets(labeled, opts);

  ordered_json doc;
  doc["config"] = {{"command", "classify"},
                   {"version", kVersion},
                   {"manifests", a.manifests},
                   {"folds", a.folds},
                   {"seed", a.seed},
                   {"p_ar", a.p_ar},
                   {"feature", "median_w_kappa_0"},
                   {"forest", {{"trees", a.trees}, {"max_depth", a.depth}, {"mtry", opts.forest.mtry}}},
                   {"network", network_config(opts.network)},
                   {"fill", a.fill},
                   {"unlabeled_skipped", data.events.size() - labeled.size()}};
  const ordered_json body = to_json(report, names);
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  if (!a.features_csv.empty()) emit(features_csv(report, names), a.features_csv, out);
  emit(doc.dump(2) + "\n", a.out, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate coordinated movement and infer per-agent coordination strategies."};
  app.name("stratinfer");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate seeded coordination events");
  simulate_cmd->add_option("--model", sim.model, "hm, lra, hm_and_lra, mixed or random")->required();
  simulate_cmd->add_option("--agents", sim.agents, "Number of agents")->capture_default_str();
  simulate_cmd->add_option("--steps", sim.steps, "Steps per event")->capture_default_str();
  auto* rho_opt = simulate_cmd->add_option("--rho", sim.rho, "Follow probability (hm only)");
  auto* mix_opt = simulate_cmd->add_option("--mix-prob", sim.mix_prob, "Per-step HM probability (mixed only)");
  simulate_cmd->add_option("--events", sim.events, "Number of events")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate_cmd->add_option("--arena", sim.arena, "Side of the initial-position square")->capture_default_str();
  simulate_cmd->add_option("--speed", sim.speed, "Distance per step")->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "Output directory")->required();

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Find coordination intervals and initiators");
  detect_cmd->add_option("--in", det.inputs, "Trajectory CSV (repeatable)");
  detect_cmd->add_option("--manifest", det.manifests, "Manifest JSON (repeatable)");
  detect_cmd->add_option("--informed", det.informed, "Informed agent ids for --in files");
  detect_cmd->add_option("--sigma", det.options.sigma, "Following threshold")->capture_default_str();
  detect_cmd->add_option("--omega", det.options.omega, "Largest time shift")->capture_default_str();
  detect_cmd->add_option("--window", det.options.window, "Event window length")->capture_default_str();
  detect_cmd->add_option("--density-percentile", det.options.density_percentile, "Density threshold percentile")
      ->capture_default_str();
  detect_cmd->add_option("--fill", det.fill, "Gap handling: none or forward")->capture_default_str();
  detect_cmd->add_option("--out", det.out, "Output JSON (default stdout)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Cross-validated strategy fitting and evaluation");
  fit_cmd->add_option("--manifest", fit.manifests, "Manifest JSON (repeatable)")->required();
  fit_cmd->add_option("--folds", fit.folds, "Cross-validation folds")->capture_default_str();
  fit_cmd->add_option("--kappa-grid", fit.kappa_grid, "Threshold vectors 'k1,k2,k3', ';'-separated or repeated");
  fit_cmd->add_option("--p-ar", fit.p_ar, "Autoregressive lag")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Fold shuffle seed")->capture_default_str();
  fit_cmd->add_option("--sigma", fit.network.sigma, "Following threshold for the network")->capture_default_str();
  fit_cmd->add_option("--omega", fit.network.omega, "Network window length")->capture_default_str();
  fit_cmd->add_option("--edge-probability", fit.edge_probability, "step_response or window_frequency")
      ->capture_default_str();
  fit_cmd->add_option("--edge-selection", fit.edge_selection, "highest_ranked, strongest or all")
      ->capture_default_str();
  fit_cmd->add_option("--mix-threshold", fit.mix_threshold, "Runner-up weight that makes a label MIXED")
      ->capture_default_str();
  fit_cmd->add_option("--fill", fit.fill, "Gap handling: none or forward")->capture_default_str();
  fit_cmd->add_option("--per-step-csv", fit.per_step_csv, "Write per-step mean errors here");
  fit_cmd->add_option("--out", fit.out, "Output JSON (default stdout)");

  ClassifyArgs cls;
  auto* classify_cmd = app.add_subcommand("classify", "Classify events by generating regime");
  classify_cmd->add_option("--manifest", cls.manifests, "Labeled manifest JSON (repeatable)")->required();
  classify_cmd->add_option("--folds", cls.folds, "Cross-validation folds")->capture_default_str();
  classify_cmd->add_option("--seed", cls.seed, "Seed for folds and forest")->capture_default_str();
  classify_cmd->add_option("--trees", cls.trees, "Forest size")->capture_default_str();
  classify_cmd->add_option("--depth", cls.depth, "Maximum tree depth")->capture_default_str();
  classify_cmd->add_option("--p-ar", cls.p_ar, "Autoregressive lag")->capture_default_str();
  classify_cmd->add_option("--fill", cls.fill, "Gap handling: none or forward")->capture_default_str();
  classify_cmd->add_option("--features-csv", cls.features_csv, "Write per-event features here");
  classify_cmd->add_option("--out", cls.out, "Output JSON (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (*simulate_cmd) return run_simulate(sim, rho_opt->count() > 0, mix_opt->count() > 0, out);
    if (*detect_cmd) return run_detect(det, out, err);
    if (*fit_cmd) return run_fit(fit, out, err);
    if (*classify_cmd) return run_classify(cls, out, err);
  } catch (const UsageError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << one_line(e.what()) << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace stratinfer::cli
