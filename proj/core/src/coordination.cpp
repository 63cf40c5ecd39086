#include "stratinfer/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

constexpr double kMoveTolerance = 1e-6;  // degrees

double similarity_at(std::span<const DirectionDeg> leader, std::span<const DirectionDeg> follower,
                     std::size_t shift) {
  const std::size_t overlap = leader.size() - shift;
  double total = 0.0;
  for (std::size_t t = 0; t < overlap; ++t) {
    total += dist_dir(leader[t], follower[t + shift]);
  }
  return 1.0 - total / static_cast<double>(overlap) / 180.0;
}

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  if (values.empty()) return 0.0;
  const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::span<const DirectionDeg> slice(const DirectionSeries& s, std::size_t start, std::size_t len) {
  return std::span<const DirectionDeg>(s).subspan(start, len);
}

std::vector<std::size_t> window_starts(std::size_t total, std::size_t window) {
  std::vector<std::size_t> starts;
  const std::size_t stride = std::max<std::size_t>(1, window / 2);
  for (std::size_t s = 0; s + window <= total; s += stride) starts.push_back(s);
  if (!starts.empty() && starts.back() + window < total) starts.push_back(total - window);
  return starts;
}

void require_rectangular(const std::vector<DirectionSeries>& series) {
  for (const auto& s : series) {
    if (s.size() != series.front().size()) {
      throw Error(ErrorCode::InvalidParam, "direction series must share one length");
    }
  }
}

bool pair_related(std::span<const DirectionDeg> a, std::span<const DirectionDeg> b, double sigma,
                  std::size_t max_shift) {
  return following_relation(a, b, sigma, max_shift) != FollowRelation::None ||
         following_relation(b, a, sigma, max_shift) != FollowRelation::None;
}

}  // namespace

FollowResult sim_foll(std::span<const DirectionDeg> leader, std::span<const DirectionDeg> follower,
                      std::size_t max_shift) {
  if (leader.size() != follower.size()) {
    throw Error(ErrorCode::InvalidParam, "sim_foll: series lengths differ");
  }
  if (max_shift < 1 || leader.size() <= max_shift) {
    throw Error(ErrorCode::TooShort, "sim_foll: need length > max shift >= 1 (length " +
                                         std::to_string(leader.size()) + ", shift " +
                                         std::to_string(max_shift) + ")");
  }
  FollowResult best{similarity_at(leader, follower, 0), 0};
  for (std::size_t shift = 1; shift <= max_shift; ++shift) {
    const double s = similarity_at(leader, follower, shift);
    if (s > best.similarity + kSimilarityTieTolerance) best = {s, shift};
  }
  best.similarity = std::clamp(best.similarity, 0.0, 1.0);
  return best;
}

FollowRelation following_relation(std::span<const DirectionDeg> leader,
                                  std::span<const DirectionDeg> follower, double sigma,
                                  std::size_t max_shift) {
  const FollowResult r = sim_foll(leader, follower, max_shift);
  if (r.similarity < sigma) return FollowRelation::None;
  return r.delay > 0 ? FollowRelation::StrictlyFollows : FollowRelation::Follows;
}

bool is_coordinated(const std::vector<DirectionSeries>& series, std::size_t start, std::size_t end,
                    double sigma, std::size_t max_shift) {
  const std::size_t len = end - start + 1;
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = i + 1; j < series.size(); ++j) {
      if (!pair_related(slice(series[i], start, len), slice(series[j], start, len), sigma,
                        max_shift)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<CoordinationInterval> detect_coordination_intervals(
    const std::vector<DirectionSeries>& series, const DetectOptions& options) {
  if (series.size() < 2) {
    throw Error(ErrorCode::InvalidParam, "detect_coordination_intervals: need at least 2 agents");
  }
  require_rectangular(series);
  const std::size_t total = series.front().size();
  if (total < options.window || options.window <= options.omega) {
    throw Error(ErrorCode::TooShort, "detect_coordination_intervals: series of length " +
                                         std::to_string(total) + " cannot hold window " +
                                         std::to_string(options.window) + " with omega " +
                                         std::to_string(options.omega));
  }

  const auto starts = window_starts(total, options.window);
  const double pairs = static_cast<double>(series.size() * (series.size() - 1) / 2);
  std::vector<double> density;
  density.reserve(starts.size());
  for (std::size_t s : starts) {
    std::size_t related = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      for (std::size_t j = i + 1; j < series.size(); ++j) {
        if (pair_related(slice(series[i], s, options.window), slice(series[j], s, options.window),
                         options.sigma, options.omega)) {
          ++related;
        }
      }
    }
    density.push_back(static_cast<double>(related) / pairs);
  }
  const double threshold = percentile(density, options.density_percentile);

  std::vector<CoordinationInterval> out;
  auto verified = [&](std::size_t a, std::size_t b) {
    return is_coordinated(series, a, b, options.sigma, options.omega);
  };
  std::size_t k = 0;
  while (k < starts.size()) {
    if (!(density[k] > 0.0 && density[k] >= threshold)) {
      ++k;
      continue;
    }
    // Greedy: grow the run one window at a time while the merged span still verifies.
    std::optional<CoordinationInterval> current;
    std::size_t m = k;
    for (; m < starts.size() && density[m] > 0.0 && density[m] >= threshold; ++m) {
      const std::size_t a = current ? current->start : starts[m];
      const std::size_t b = starts[m] + options.window - 1;
      if (verified(a, b)) {
        current = CoordinationInterval{a, b, options.sigma};
      } else if (current) {
        out.push_back(*current);
        current.reset();
        if (verified(starts[m], b)) current = CoordinationInterval{starts[m], b, options.sigma};
      } else if (verified(starts[m], b)) {
        current = CoordinationInterval{starts[m], b, options.sigma};
      }
    }
    if (current) out.push_back(*current);
    k = m;
  }
  return out;
}

std::vector<AgentIndex> find_initiators(const std::vector<DirectionSeries>& series,
                                        const CoordinationInterval& interval, double sigma,
                                        std::size_t max_shift) {
  const std::size_t len = interval.end - interval.start + 1;
  std::vector<AgentIndex> out;
  for (std::size_t lead = 0; lead < series.size(); ++lead) {
    bool all = true;
    for (std::size_t other = 0; other < series.size() && all; ++other) {
      if (other == lead) continue;
      all = following_relation(slice(series[lead], interval.start, len),
                               slice(series[other], interval.start, len), sigma,
                               max_shift) == FollowRelation::StrictlyFollows;
    }
    if (all && series.size() > 1) out.push_back(lead);
  }
  return out;
}

namespace {

void add_window_edges(const std::vector<DirectionSeries>& series, std::size_t start,
                      std::size_t length, std::size_t max_lag, const NetworkOptions& options,
                      FollowWindow& window) {
  const std::size_t n = series.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<FollowEdge> strongest;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto leader = slice(series[j], start, length);
      const auto follower = slice(series[i], start, length);
      const FollowResult r = sim_foll(leader, follower, max_lag);
      if (r.similarity < options.sigma || r.delay == 0) continue;

      FollowEdge e{i, j, r.similarity, r.delay, 0, 0};
      for (std::size_t t = r.delay; t < length; ++t) {
        const DirectionDeg target = leader[t - r.delay];
        const double before = dist_dir(follower[t - 1], target);
        if (before <= kMoveTolerance) continue;
        ++e.informative_steps;
        if (dist_dir(follower[t], target) < before - kMoveTolerance) ++e.toward_steps;
      }
      if (options.selection != EdgeSelection::Strongest) {
        window.edges.push_back(e);
      } else if (!strongest || e.weight > strongest->weight) {
        strongest = e;
      }
    }
    if (strongest) window.edges.push_back(*strongest);
  }
}

}  // namespace

DynamicFollowNetwork build_dynamic_following_network(const std::vector<DirectionSeries>& series,
                                                     const NetworkOptions& options) {
  require_rectangular(series);
  const std::size_t total = series.empty() ? 0 : series.front().size();
  if (options.omega < 2 || total < 2 * options.omega) {
    throw Error(ErrorCode::TooShort, "build_dynamic_following_network: series of length " +
                                         std::to_string(total) + " is shorter than 2*omega");
  }
  const std::size_t max_lag = options.max_lag > 0 ? options.max_lag : std::max<std::size_t>(1, options.omega / 4);
  if (max_lag >= options.omega) {
    throw Error(ErrorCode::InvalidParam, "max_lag must be smaller than omega");
  }
  DynamicFollowNetwork net;
  net.n_agents = series.size();
  for (std::size_t s : window_starts(total, options.omega)) {
    FollowWindow w{s, options.omega, {}};
    add_window_edges(series, s, options.omega, max_lag, options, w);
    net.windows.push_back(std::move(w));
  }
  return net;
}

DynamicFollowNetwork build_dynamic_following_network(std::span<const TrajectorySet> events,
                                                     const NetworkOptions& options) {
  DynamicFollowNetwork net;
  for (const auto& ev : events) {
    if (net.windows.empty() && net.n_agents == 0) net.n_agents = ev.n_agents();
    if (ev.n_agents() != net.n_agents) {
      throw Error(ErrorCode::InconsistentAgents, "events disagree on agent count");
    }
    auto part = build_dynamic_following_network(ev.directions, options);
    for (auto& w : part.windows) net.windows.push_back(std::move(w));
  }
  return net;
}

std::vector<AgentIndex> leadership_ranking(const DynamicFollowNetwork& net) {
  std::vector<double> incoming(net.n_agents, 0.0);
  for (const auto& w : net.windows) {
    for (const auto& e : w.edges) incoming[e.followed] += e.weight;
  }
  std::vector<AgentIndex> order(net.n_agents);
  std::iota(order.begin(), order.end(), AgentIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](AgentIndex a, AgentIndex b) { return incoming[a] > incoming[b]; });
  return order;
}

void ProbFollowNetwork::add_edge(AgentIndex follower, AgentIndex followed, double p) {
  if (follower >= out_.size() || followed >= out_.size() || follower == followed) {
    throw Error(ErrorCode::InvalidParam, "invalid following edge");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidParam, "edge probability outside [0, 1]");
  }
  for (auto& e : out_[follower]) {
    if (e.followed == followed) {
      e.p = p;
      return;
    }
  }
  out_[follower].push_back({follower, followed, p});
}

std::vector<ProbEdge> ProbFollowNetwork::edges() const {
  std::vector<ProbEdge> all;
  for (const auto& v : out_) all.insert(all.end(), v.begin(), v.end());
  return all;
}

double ProbFollowNetwork::probability(AgentIndex follower, AgentIndex followed) const {
  for (const auto& e : out_.at(follower)) {
    if (e.followed == followed) return e.p;
  }
  return 0.0;
}

double ProbFollowNetwork::min_probability() const {
  double m = 1.0;
  bool any = false;
  for (const auto& v : out_) {
    for (const auto& e : v) {
      if (e.p > 0.0) {
        m = std::min(m, e.p);
        any = true;
      }
    }
  }
  return any ? m : 0.0;
}

bool ProbFollowNetwork::is_acyclic() const {
  // Kahn's algorithm on follower -> followed edges.
  std::vector<std::size_t> indegree(out_.size(), 0);
  for (const auto& v : out_) {
    for (const auto& e : v) ++indegree[e.followed];
  }
  std::vector<AgentIndex> ready;
  for (AgentIndex a = 0; a < out_.size(); ++a) {
    if (indegree[a] == 0) ready.push_back(a);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const AgentIndex a = ready.back();
    ready.pop_back();
    ++visited;
    for (const auto& e : out_[a]) {
      if (--indegree[e.followed] == 0) ready.push_back(e.followed);
    }
  }
  return visited == out_.size();
}

bool ProbFollowNetwork::all_reach(AgentIndex root) const {
  // Reverse BFS from the root.
  std::vector<std::vector<AgentIndex>> in(out_.size());
  for (const auto& v : out_) {
    for (const auto& e : v) in[e.followed].push_back(e.follower);
  }
  std::vector<bool> seen(out_.size(), false);
  std::vector<AgentIndex> stack{root};
  seen.at(root) = true;
  while (!stack.empty()) {
    const AgentIndex a = stack.back();
    stack.pop_back();
    for (AgentIndex b : in[a]) {
      if (!seen[b]) {
        seen[b] = true;
        stack.push_back(b);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

ProbFollowNetwork ProbFollowNetwork::star(std::size_t n_agents, AgentIndex leader, double p) {
  ProbFollowNetwork net(n_agents);
  for (AgentIndex a = 0; a < n_agents; ++a) {
    if (a != leader && p > 0.0) net.add_edge(a, leader, p);
  }
  return net;
}

ProbFollowNetwork aggregate_to_dag(const DynamicFollowNetwork& net,
                                   std::span<const AgentIndex> ranking,
                                   EdgeProbability probability, EdgeSelection selection) {
  const std::size_t n = net.n_agents;
  if (ranking.size() != n) {
    throw Error(ErrorCode::InvalidParam, "ranking must cover every agent");
  }
  std::vector<std::size_t> rank(n, n);
  for (std::size_t r = 0; r < ranking.size(); ++r) rank.at(ranking[r]) = r;
  if (std::find(rank.begin(), rank.end(), n) != rank.end()) {
    throw Error(ErrorCode::InvalidParam, "ranking is not a permutation");
  }

  struct Tally {
    std::size_t windows = 0;
    std::size_t informative = 0;
    std::size_t toward = 0;
  };
  std::vector<Tally> tally(n * n);
  std::vector<const FollowEdge*> chosen(n);
  for (const auto& w : net.windows) {
    std::vector<const FollowEdge*> kept;
    if (selection == EdgeSelection::HighestRanked) {
      std::fill(chosen.begin(), chosen.end(), nullptr);
      for (const auto& e : w.edges) {
        if (rank[e.follower] < rank[e.followed]) continue;
        const FollowEdge*& c = chosen[e.follower];
        if (c == nullptr || rank[e.followed] < rank[c->followed]) c = &e;
      }
      for (const FollowEdge* e : chosen) {
        if (e) kept.push_back(e);
      }
    } else {
      for (const auto& e : w.edges) kept.push_back(&e);
    }
    for (const FollowEdge* ep : kept) {
      const FollowEdge& e = *ep;
      auto& t = tally[e.follower * n + e.followed];
      ++t.windows;
      t.informative += e.informative_steps;
      t.toward += e.toward_steps;
    }
  }

  const double n_windows = static_cast<double>(std::max<std::size_t>(1, net.windows.size()));
  ProbFollowNetwork dag(n);
  for (AgentIndex i = 0; i < n; ++i) {
    for (AgentIndex j = 0; j < n; ++j) {
      const Tally& t = tally[i * n + j];
      if (t.windows == 0 || rank[i] < rank[j]) continue;
      double p = static_cast<double>(t.windows) / n_windows;
      if (probability == EdgeProbability::StepResponse && t.informative > 0) {
        p = static_cast<double>(t.toward) / static_cast<double>(t.informative);
      }
      if (p > 0.0) dag.add_edge(i, j, p);
    }
  }
  const AgentIndex top = ranking.front();
  for (AgentIndex i = 0; i < n; ++i) {
    if (i != top && dag.outgoing(i).empty()) dag.add_edge(i, top, 1.0 / n_windows);
  }
  return dag;
}

InferredNetwork infer_following_network(std::span<const TrajectorySet> events,
                                        const NetworkOptions& options) {
  InferredNetwork out;
  out.dynamic = build_dynamic_following_network(events, options);
  out.ranking = leadership_ranking(out.dynamic);
  out.dag = aggregate_to_dag(out.dynamic, out.ranking, options.probability, options.selection);
  return out;
}

}  // namespace stratinfer
