#include "stratinfer/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "stratinfer/error.hpp"
#include "stratinfer/simulate.hpp"

namespace stratinfer {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t index_of(EvalStrategy s) { return static_cast<std::size_t>(s); }

DirectionDeg row_prediction(const PredictionMatrix& m, std::size_t r, EvalStrategy s, const SupportVector& w) {
  const PurePredictions& p = m.predictions[r];
  switch (s) {
    case EvalStrategy::HM: return p.hm;
    case EvalStrategy::LRA: return p.lra;
    case EvalStrategy::AR: return p.ar;
    case EvalStrategy::OPT: return mix_predictions(p, w, m.previous[r]);
    case EvalStrategy::INFORMED: break;
  }
  throw Error(ErrorCode::InvalidParam, "informed predictions are not stored in a prediction matrix");
}

void require_consistent_agents(std::span<const TrajectorySet> datasets) {
  for (const TrajectorySet& ts : datasets) {
    if (ts.agent_ids != datasets.front().agent_ids) {
      throw Error(ErrorCode::InconsistentAgents,
                  "event '" + ts.source + "' has a different agent id set than '" + datasets.front().source + "'");
    }
  }
}

std::vector<TrajectorySet> pick(std::span<const TrajectorySet> all, const std::vector<std::size_t>& idx) {
  std::vector<TrajectorySet> out;
  out.reserve(idx.size());
  for (std::size_t k : idx) out.push_back(all[k]);
  return out;
}

std::vector<Vec2> positions_at(const TrajectorySet& ts, std::size_t t) {
  std::vector<Vec2> out(ts.n_agents());
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = ts.positions[a][t];
  return out;
}

// Running sums of errors per strategy.
struct Tally {
  StrategyRisks sum{};
  std::array<std::size_t, kEvalStrategyCount> count{};

  void add(std::size_t s, double err) {
    sum[s] += err;
    ++count[s];
  }
  StrategyRisks mean() const {
    StrategyRisks out{};
    for (std::size_t s = 0; s < kEvalStrategyCount; ++s) out[s] = count[s] ? sum[s] / count[s] : kNaN;
    return out;
  }
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

const char* to_string(EvalStrategy s) noexcept {
  switch (s) {
    case EvalStrategy::OPT: return "OPT";
    case EvalStrategy::HM: return "HM";
    case EvalStrategy::LRA: return "LRA";
    case EvalStrategy::AR: return "AR";
    case EvalStrategy::INFORMED: return "INFORMED";
  }
  return "?";
}

double risk_dir(const TrajectorySet& ts, const Predictor& predictor, AgentIndex i, const ProbFollowNetwork* net,
                std::size_t start) {
  if (i >= ts.n_agents()) throw Error(ErrorCode::InvalidParam, "agent index out of range");
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t t = std::max<std::size_t>(start, 1); t < ts.n_steps(); ++t) {
    const std::vector<Vec2> pos = positions_at(ts, t);
    StrategyContext ctx;
    ctx.directions = &ts.directions;
    ctx.t = t;
    ctx.positions = pos;
    ctx.network = net;
    ctx.informed = ts.informed;
    total += dist_dir(ts.directions[i][t], predictor(ctx, i));
    ++count;
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

double matrix_risk(const PredictionMatrix& m, EvalStrategy s, const SupportVector& w) {
  if (m.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) total += dist_dir(m.actual[r], row_prediction(m, r, s, w));
  return total / static_cast<double>(m.rows());
}

BestFit best_fit_strategy(std::span<const TrajectorySet> test, AgentIndex i, const SupportVector& fitted,
                          const ProbFollowNetwork& net, std::size_t p_ar) {
  PredictionMatrix m;
  for (const TrajectorySet& ts : test) m.append(build_prediction_matrix(ts, net, i, p_ar));
  BestFit out;
  constexpr EvalStrategy kOrder[] = {EvalStrategy::OPT, EvalStrategy::HM, EvalStrategy::LRA, EvalStrategy::AR};
  for (std::size_t k = 0; k < 4; ++k) {
    out.risks[k] = matrix_risk(m, kOrder[k], fitted);
    if (out.risks[k] < out.risks[index_of(out.label)]) out.label = kOrder[k];
  }
  return out;
}

RiskReport cross_validate(std::span<const TrajectorySet> datasets, const CrossValidationOptions& options) {
  const std::size_t n = datasets.size();
  if (options.folds < 2) throw Error(ErrorCode::InvalidParam, "cross-validation needs at least 2 folds");
  if (n < options.folds) {
    throw Error(ErrorCode::InvalidParam,
                "cross-validation needs at least as many events as folds (" + std::to_string(n) + " < " +
                    std::to_string(options.folds) + ")");
  }
  require_consistent_agents(datasets);

  const std::size_t n_agents = datasets.front().n_agents();
  const std::size_t p_ar = options.fit.p_ar;
  std::vector<bool> informed(n_agents, false);
  for (const TrajectorySet& ts : datasets) {
    for (AgentIndex a : ts.informed) {
      if (a < n_agents) informed[a] = true;
    }
  }
  std::size_t max_steps = 0;
  for (const TrajectorySet& ts : datasets) max_steps = std::max(max_steps, ts.n_steps());
  const std::size_t first = std::max<std::size_t>(p_ar, 1);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(options.seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  RiskReport report;
  report.agents.resize(n_agents);
  for (AgentSummary& a : report.agents) a.w = SupportVector{0.0, 0.0, 0.0};
  std::vector<StrategyRisks> agent_sum(n_agents, StrategyRisks{});
  std::vector<std::array<std::size_t, kEvalStrategyCount>> agent_folds(n_agents, std::array<std::size_t, kEvalStrategyCount>{});
  std::array<std::vector<double>, kEvalStrategyCount> step_sum;
  std::array<std::vector<std::size_t>, kEvalStrategyCount> step_count;
  for (std::size_t s = 0; s < kEvalStrategyCount; ++s) {
    step_sum[s].assign(max_steps, 0.0);
    step_count[s].assign(max_steps, 0);
  }

  for (std::size_t f = 0; f < options.folds; ++f) {
    FoldSummary fold;
    const std::size_t lo = f * n / options.folds;
    const std::size_t hi = (f + 1) * n / options.folds;
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < n; ++k) (k >= lo && k < hi ? fold.test : rest).push_back(perm[k]);
    const std::size_t n_train = (rest.size() + 1) / 2;
    fold.train.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_train));
    fold.validation.assign(rest.begin() + static_cast<std::ptrdiff_t>(n_train), rest.end());
    if (fold.validation.empty()) fold.validation = fold.train;

    const auto train = pick(datasets, fold.train);
    const auto validation = pick(datasets, fold.validation);
    const auto test = pick(datasets, fold.test);

    const InferredNetwork net = infer_following_network(train, options.fit.network);
    const auto train_m = build_prediction_matrices(train, net.dag, p_ar);
    const auto val_m = build_prediction_matrices(validation, net.dag, p_ar);

    std::vector<SupportVector> chosen(n_agents);
    for (AgentIndex i = 0; i < n_agents; ++i) {
      const auto models = fit_agent_models(train_m[i], i, options.fit.kappa_grid);
      chosen[i] = select_agent_model(models, val_m[i]).w;
      const double train_risk = matrix_risk(train_m[i], EvalStrategy::OPT, chosen[i]);
      AgentSummary& summary = report.agents[i];
      summary.w.hm += chosen[i].hm / static_cast<double>(options.folds);
      summary.w.lra += chosen[i].lra / static_cast<double>(options.folds);
      summary.w.ar += chosen[i].ar / static_cast<double>(options.folds);
      summary.train_risk += train_risk / static_cast<double>(options.folds);
    }

    std::vector<Tally> agent_tally(n_agents);
    for (const TrajectorySet& ts : test) {
      const auto test_m = build_prediction_matrices(ts, net.dag, p_ar);
      for (AgentIndex i = 0; i < n_agents; ++i) {
        const PredictionMatrix& m = test_m[i];
        for (std::size_t r = 0; r < m.rows(); ++r) {
          const std::size_t t = m.steps[r];
          std::array<double, kEvalStrategyCount> err;
          err.fill(kNaN);
          for (EvalStrategy s : {EvalStrategy::OPT, EvalStrategy::HM, EvalStrategy::LRA, EvalStrategy::AR}) {
            err[index_of(s)] = dist_dir(m.actual[r], row_prediction(m, r, s, chosen[i]));
          }
          if (!ts.informed.empty()) {
            StrategyContext ctx;
            ctx.directions = &ts.directions;
            ctx.t = t;
            ctx.informed = ts.informed;
            err[index_of(EvalStrategy::INFORMED)] = dist_dir(m.actual[r], predict_informed(ctx, i));
          }
          for (std::size_t s = 0; s < kEvalStrategyCount; ++s) {
            if (std::isnan(err[s])) continue;
            agent_tally[i].add(s, err[s]);
            if (!informed[i]) {
              step_sum[s][t] += err[s];
              ++step_count[s][t];
            }
          }
        }
      }
    }

    Tally fold_tally;
    double fold_train = 0.0;
    std::size_t uninformed = 0;
    for (AgentIndex i = 0; i < n_agents; ++i) {
      const StrategyRisks r = agent_tally[i].mean();
      for (std::size_t s = 0; s < kEvalStrategyCount; ++s) {
        if (std::isnan(r[s])) continue;
        agent_sum[i][s] += r[s];
        ++agent_folds[i][s];
        if (!informed[i]) fold_tally.add(s, r[s]);
      }
      if (!informed[i]) {
        fold_train += matrix_risk(train_m[i], EvalStrategy::OPT, chosen[i]);
        ++uninformed;
      }
    }
    fold.risks = fold_tally.mean();
    fold.train_risk = uninformed ? fold_train / static_cast<double>(uninformed) : 0.0;
    report.folds.push_back(std::move(fold));
  }

  Tally overall;
  std::vector<std::vector<double>> per_agent(kEvalStrategyCount);
  double train_sum = 0.0;
  std::size_t uninformed = 0;
  for (AgentIndex i = 0; i < n_agents; ++i) {
    AgentSummary& summary = report.agents[i];
    summary.agent = i;
    summary.id = datasets.front().agent_ids[i];
    summary.informed = informed[i];
    summary.label = label_strategy(summary.w);
    for (std::size_t s = 0; s < kEvalStrategyCount; ++s) {
      summary.risks[s] = agent_folds[i][s] ? agent_sum[i][s] / static_cast<double>(agent_folds[i][s]) : kNaN;
    }
    summary.best_fit = EvalStrategy::OPT;
    for (EvalStrategy s : {EvalStrategy::HM, EvalStrategy::LRA, EvalStrategy::AR}) {
      if (summary.risks[index_of(s)] < summary.risks[index_of(summary.best_fit)]) summary.best_fit = s;
    }
    if (informed[i]) continue;
    ++uninformed;
    train_sum += summary.train_risk;
    for (std::size_t s = 0; s < kEvalStrategyCount; ++s) {
      if (std::isnan(summary.risks[s])) continue;
      overall.add(s, summary.risks[s]);
      per_agent[s].push_back(summary.risks[s]);
    }
  }
  report.mean_risk = overall.mean();
  for (std::size_t s = 0; s < kEvalStrategyCount; ++s) {
    const auto& v = per_agent[s];
    if (v.size() < 2) {
      report.std_risk[s] = v.empty() ? kNaN : 0.0;
      continue;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - report.mean_risk[s]) * (x - report.mean_risk[s]);
    report.std_risk[s] = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  report.mean_train_risk = uninformed ? train_sum / static_cast<double>(uninformed) : 0.0;

  SupportVector mean_w{0.0, 0.0, 0.0};
  for (const AgentSummary& a : report.agents) {
    if (a.informed || uninformed == 0) continue;
    for (std::size_t k = 0; k < 3; ++k) mean_w[k] += a.w[k] / static_cast<double>(uninformed);
  }
  report.mean_w = mean_w;

  report.per_step_start = first;
  for (std::size_t s = 0; s < kEvalStrategyCount; ++s) {
    for (std::size_t t = first; t < max_steps; ++t) {
      report.per_step[s].push_back(step_count[s][t] ? step_sum[s][t] / static_cast<double>(step_count[s][t]) : kNaN);
    }
  }
  return report;
}

FeatureVector dataset_features(const TrajectorySet& ts, const NetworkOptions& network, std::size_t p_ar) {
  const std::span<const TrajectorySet> events(&ts, 1);
  const InferredNetwork net = infer_following_network(events, network);
  const auto matrices = build_prediction_matrices(ts, net.dag, p_ar);
  std::array<std::vector<double>, 3> columns;
  for (AgentIndex i = 0; i < matrices.size(); ++i) {
    const SupportVector w = solve_support_qp(matrices[i], ThresholdVector{});
    for (std::size_t k = 0; k < 3; ++k) columns[k].push_back(w[k]);
  }
  FeatureVector f;
  f.median_w = SupportVector{median(columns[0]), median(columns[1]), median(columns[2])};
  return f;
}

ClassificationReport classify_features(std::span<const FeatureVector> features, std::span<const Regime> labels,
                                       const ClassificationOptions& options) {
  if (features.size() != labels.size()) throw Error(ErrorCode::InvalidParam, "features and labels differ in length");
  ClassificationReport report;
  for (Regime r : kAllRegimes) {
    if (std::find(labels.begin(), labels.end(), r) != labels.end()) report.classes.push_back(r);
  }
  if (report.classes.size() < 2) {
    throw Error(ErrorCode::SingleClass, "classification needs at least two labeled classes");
  }
  if (options.folds < 2) throw Error(ErrorCode::InvalidParam, "classification needs at least 2 folds");

  const std::size_t n = features.size();
  const std::size_t k_classes = report.classes.size();
  const std::size_t folds = std::min(options.folds, n);
  auto class_index = [&](Regime r) {
    return static_cast<std::size_t>(std::find(report.classes.begin(), report.classes.end(), r) -
                                    report.classes.begin());
  };
  std::vector<std::size_t> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = class_index(labels[k]);

  // Stratified assignment: shuffle each class, then deal round-robin.
  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> fold_of(n);
  std::size_t dealt = 0;
  for (std::size_t c = 0; c < k_classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < n; ++k) {
      if (y[k] == c) members.push_back(k);
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t m : members) fold_of[m] = dealt++ % folds;
  }

  std::vector<std::size_t> predicted(n, 0);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::vector<double>> x_train;
    std::vector<std::size_t> y_train;
    for (std::size_t k = 0; k < n; ++k) {
      if (fold_of[k] == f) continue;
      const auto v = features[k].values();
      x_train.emplace_back(v.begin(), v.end());
      y_train.push_back(y[k]);
    }
    if (x_train.empty()) continue;
    ForestOptions forest = options.forest;
    forest.seed = derive_seed(options.seed, f);
    RandomForest model;
    model.fit(x_train, y_train, k_classes, forest);
    for (std::size_t k = 0; k < n; ++k) {
      if (fold_of[k] != f) continue;
      const auto v = features[k].values();
      predicted[k] = model.predict(v);
    }
  }

  report.confusion.assign(k_classes, std::vector<std::size_t>(k_classes, 0));
  std::size_t correct = 0;
  for (std::size_t k = 0; k < n; ++k) {
    ++report.confusion[y[k]][predicted[k]];
    if (y[k] == predicted[k]) ++correct;
    report.features.push_back(features[k]);
    report.truth.push_back(labels[k]);
    report.predicted.push_back(report.classes[predicted[k]]);
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  for (std::size_t c = 0; c < k_classes; ++c) {
    ClassMetrics m;
    m.label = report.classes[c];
    for (std::size_t o = 0; o < k_classes; ++o) {
      m.support += report.confusion[c][o];
      if (o != c) {
        m.fn += report.confusion[c][o];
        m.fp += report.confusion[o][c];
      }
    }
    m.tp = report.confusion[c][c];
    m.precision = safe_ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fp));
    m.recall = safe_ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fn));
    m.f1 = safe_ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    report.per_class.push_back(m);
  }
  return report;
}

ClassificationReport classify_datasets(std::span<const LabeledDataset> labeled, const ClassificationOptions& options) {
  std::vector<FeatureVector> features;
  std::vector<Regime> labels;
  for (const LabeledDataset& d : labeled) {
    if (d.data == nullptr) throw Error(ErrorCode::InvalidParam, "labeled dataset without data");
    labels.push_back(d.label);
  }
  std::size_t distinct = 0;
  for (Regime r : kAllRegimes) distinct += std::find(labels.begin(), labels.end(), r) != labels.end();
  if (distinct < 2) throw Error(ErrorCode::SingleClass, "classification needs at least two labeled classes");
  for (const LabeledDataset& d : labeled) features.push_back(dataset_features(*d.data, options.network, options.p_ar));
  return classify_features(features, labels, options);
}

}  // namespace stratinfer
