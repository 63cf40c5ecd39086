#include "report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace stratinfer::cli {

namespace {

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json to_json(const SupportVector& w) { return ordered_json::array({number(w.hm), number(w.lra), number(w.ar)}); }

ordered_json to_json(const StrategyRisks& r) {
  ordered_json j = ordered_json::object();
  for (EvalStrategy s : kEvalStrategies) j[to_string(s)] = number(r[static_cast<std::size_t>(s)]);
  return j;
}

ordered_json to_json(const ProbFollowNetwork& net, const std::vector<int>& ids) {
  ordered_json edges = ordered_json::array();
  for (const ProbEdge& e : net.edges()) {
    edges.push_back({{"follower", ids.at(e.follower)}, {"followed", ids.at(e.followed)}, {"p", number(e.p)}});
  }
  return edges;
}

const char* to_string(EdgeProbability p) noexcept {
  return p == EdgeProbability::StepResponse ? "step_response" : "window_frequency";
}

const char* to_string(EdgeSelection s) noexcept {
  switch (s) {
    case EdgeSelection::All: return "all";
    case EdgeSelection::Strongest: return "strongest";
    case EdgeSelection::HighestRanked: return "highest_ranked";
  }
  return "?";
}

ordered_json to_json(const RiskReport& report, const std::vector<std::string>& event_names) {
  ordered_json agents = ordered_json::array();
  std::map<std::string, int> label_counts;
  std::array<std::vector<double>, 3> columns;
  for (const AgentSummary& a : report.agents) {
    agents.push_back({{"id", a.id},
                      {"informed", a.informed},
                      {"w", to_json(a.w)},
                      {"label", to_string(a.label)},
                      {"best_fit", to_string(a.best_fit)},
                      {"risks", to_json(a.risks)},
                      {"train_risk", number(a.train_risk)}});
    if (!a.informed) ++label_counts[to_string(a.label)];
    for (std::size_t k = 0; k < 3; ++k) columns[k].push_back(a.w[k]);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.empty() ? 0.0 : (v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]));
  };

  ordered_json folds = ordered_json::array();
  auto names = [&](const std::vector<std::size_t>& idx) {
    ordered_json list = ordered_json::array();
    for (std::size_t k : idx) list.push_back(event_names.at(k));
    return list;
  };
  for (const FoldSummary& f : report.folds) {
    folds.push_back({{"train", names(f.train)},
                     {"validation", names(f.validation)},
                     {"test", names(f.test)},
                     {"risks", to_json(f.risks)},
                     {"train_risk", number(f.train_risk)}});
  }

  ordered_json summary;
  summary["mean_risk"] = to_json(report.mean_risk);
  summary["std_risk"] = to_json(report.std_risk);
  summary["mean_train_risk"] = number(report.mean_train_risk);
  summary["mean_w"] = to_json(report.mean_w);
  summary["median_w"] = ordered_json::array({number(median(columns[0])), number(median(columns[1])),
                                             number(median(columns[2]))});
  summary["label_counts"] = label_counts;

  ordered_json j;
  j["summary"] = summary;
  j["agents"] = agents;
  j["folds"] = folds;
  return j;
}

ordered_json to_json(const ClassificationReport& report, const std::vector<std::string>& event_names) {
  ordered_json classes = ordered_json::array();
  for (Regime r : report.classes) classes.push_back(to_string(r));
  ordered_json metrics = ordered_json::array();
  for (const ClassMetrics& m : report.per_class) {
    metrics.push_back({{"class", to_string(m.label)},
                       {"support", m.support},
                       {"tp", m.tp},
                       {"fp", m.fp},
                       {"fn", m.fn},
                       {"precision", number(m.precision)},
                       {"recall", number(m.recall)},
                       {"f1", number(m.f1)}});
  }
  ordered_json events = ordered_json::array();
  for (std::size_t k = 0; k < report.features.size(); ++k) {
    events.push_back({{"event", event_names.at(k)},
                      {"label", to_string(report.truth[k])},
                      {"predicted", to_string(report.predicted[k])},
                      {"median_w", to_json(report.features[k].median_w)}});
  }
  ordered_json j;
  j["classes"] = classes;
  j["confusion"] = report.confusion;
  j["per_class"] = metrics;
  j["accuracy"] = number(report.accuracy);
  j["events"] = events;
  return j;
}

std::string per_step_csv(const RiskReport& report) {
  std::ostringstream out;
  out << "t";
  for (EvalStrategy s : kEvalStrategies) out << ',' << to_string(s);
  out << '\n';
  const std::size_t len = report.per_step[0].size();
  for (std::size_t k = 0; k < len; ++k) {
    out << report.per_step_start + k;
    for (std::size_t s = 0; s < kEvalStrategyCount; ++s) out << ',' << csv_number(report.per_step[s][k]);
    out << '\n';
  }
  return out.str();
}

std::string features_csv(const ClassificationReport& report, const std::vector<std::string>& event_names) {
  std::ostringstream out;
  out << "event,label,predicted,w1,w2,w3\n";
  for (std::size_t k = 0; k < report.features.size(); ++k) {
    const SupportVector& w = report.features[k].median_w;
    out << event_names.at(k) << ',' << to_string(report.truth[k]) << ',' << to_string(report.predicted[k]) << ','
        << csv_number(w.hm) << ',' << csv_number(w.lra) << ',' << csv_number(w.ar) << '\n';
  }
  return out.str();
}

}  // namespace stratinfer::cli
