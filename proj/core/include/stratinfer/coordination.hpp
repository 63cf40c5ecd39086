#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stratinfer/dirmath.hpp"
#include "stratinfer/trajectory.hpp"

namespace stratinfer {

/// Two similarity values closer than this are treated as equal when picking a delay.
/// Headings re-derived from integrated positions carry ~1e-12 degree noise, which
/// must not manufacture a lag.
inline constexpr double kSimilarityTieTolerance = 1e-9;

struct FollowResult {
  double similarity = 0.0;  // in [0, 1]
  std::size_t delay = 0;    // smallest shift attaining the maximum
};

enum class FollowRelation { None, Follows, StrictlyFollows };

/// Shifted mean-circular similarity of `follower` against `leader`.
///
/// similarity = max over shift in [0, max_shift] of
///   1 - mean_t dist_dir(leader[t], follower[t + shift]) / 180
/// over the overlap. A follower lagging the leader by d steps peaks at shift d.
/// Throws Error(TooShort) unless both series have equal length T > max_shift >= 1.
FollowResult sim_foll(std::span<const DirectionDeg> leader, std::span<const DirectionDeg> follower,
                      std::size_t max_shift);

/// Whether `follower` sigma-follows `leader`.
FollowRelation following_relation(std::span<const DirectionDeg> leader,
                                  std::span<const DirectionDeg> follower, double sigma,
                                  std::size_t max_shift);

struct CoordinationInterval {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
  double sigma = 0.0;

  friend bool operator==(const CoordinationInterval&, const CoordinationInterval&) = default;
};

struct DetectOptions {
  double sigma = 0.95;
  std::size_t omega = 60;
  std::size_t window = 240;
  double density_percentile = 50.0;
};

/// True when every unordered pair is related by sigma-following (either way) on [start, end].
bool is_coordinated(const std::vector<DirectionSeries>& series, std::size_t start, std::size_t end,
                    double sigma, std::size_t max_shift);

/// Sliding-window event detection.
///
/// Windows of length `window` advance by window/2; a final window is aligned to
/// the end of the series when the stride leaves a tail. Windows whose pair
/// density reaches the requested percentile of all window densities (and is
/// nonzero) are merged into runs; each run is emitted only where the whole
/// span passes is_coordinated, splitting greedily otherwise.
std::vector<CoordinationInterval> detect_coordination_intervals(
    const std::vector<DirectionSeries>& series, const DetectOptions& options);

/// Agents strictly followed by every other agent over the interval.
std::vector<AgentIndex> find_initiators(const std::vector<DirectionSeries>& series,
                                        const CoordinationInterval& interval, double sigma,
                                        std::size_t max_shift);

/// Edge `follower` -> `followed` observed inside one window.
struct FollowEdge {
  AgentIndex follower = 0;
  AgentIndex followed = 0;
  double weight = 0.0;  // sim_foll similarity
  std::size_t delay = 0;
  /// Steps on which the follower's previous heading differed from the lagged
  /// heading of the followed agent, and how many of those moved it closer.
  std::size_t informative_steps = 0;
  std::size_t toward_steps = 0;
};

struct FollowWindow {
  std::size_t start = 0;
  std::size_t length = 0;
  std::vector<FollowEdge> edges;
};

struct DynamicFollowNetwork {
  std::size_t n_agents = 0;
  std::vector<FollowWindow> windows;
};

enum class EdgeProbability {
  /// Fraction of windows containing the edge.
  WindowFrequency,
  /// Fraction of informative steps, within windows containing the edge, on which
  /// the follower turned toward the followed agent's lagged heading.
  StepResponse,
};

/// Which strict-following edges of a window feed the aggregated network.
enum class EdgeSelection {
  All,
  /// Each follower's most similar edge per window, chosen while building.
  Strongest,
  /// Each follower's edge to its best-ranked admissible leader per window,
  /// chosen during aggregation.
  HighestRanked,
};

struct NetworkOptions {
  double sigma = 0.9;
  std::size_t omega = 60;
  /// Largest lag searched inside a window; 0 selects omega / 4.
  std::size_t max_lag = 0;
  EdgeSelection selection = EdgeSelection::HighestRanked;
  EdgeProbability probability = EdgeProbability::StepResponse;
};

DynamicFollowNetwork build_dynamic_following_network(const std::vector<DirectionSeries>& series,
                                                     const NetworkOptions& options);

/// Windows from several events pooled into one network; events never share a window.
DynamicFollowNetwork build_dynamic_following_network(std::span<const TrajectorySet> events,
                                                     const NetworkOptions& options);

/// Agents by descending total incoming follow weight, ties by ascending index.
std::vector<AgentIndex> leadership_ranking(const DynamicFollowNetwork& net);

struct ProbEdge {
  AgentIndex follower = 0;
  AgentIndex followed = 0;
  double p = 0.0;
};

/// Probabilistic following network: edge (i, j, p) means i follows j with probability p.
class ProbFollowNetwork {
 public:
  ProbFollowNetwork() = default;
  explicit ProbFollowNetwork(std::size_t n_agents) : out_(n_agents) {}

  void add_edge(AgentIndex follower, AgentIndex followed, double p);

  std::size_t n_agents() const noexcept { return out_.size(); }
  std::span<const ProbEdge> outgoing(AgentIndex i) const { return out_.at(i); }
  std::vector<ProbEdge> edges() const;
  double probability(AgentIndex follower, AgentIndex followed) const;
  double min_probability() const;

  bool is_acyclic() const;
  /// Every agent has a directed path to `root`.
  bool all_reach(AgentIndex root) const;

  /// Star network: every agent other than `leader` follows it with probability p.
  static ProbFollowNetwork star(std::size_t n_agents, AgentIndex leader, double p);

 private:
  std::vector<std::vector<ProbEdge>> out_;
};

/// Aggregates windows into a DAG consistent with `ranking` (best first).
///
/// Edges whose follower outranks the followed agent are dropped. Any agent other
/// than the top-ranked one left without an outgoing edge gets an edge to the top
/// agent with p = 1 / number of windows.
ProbFollowNetwork aggregate_to_dag(const DynamicFollowNetwork& net,
                                   std::span<const AgentIndex> ranking,
                                   EdgeProbability probability = EdgeProbability::StepResponse,
                                   EdgeSelection selection = EdgeSelection::HighestRanked);

/// build_dynamic_following_network + leadership_ranking + aggregate_to_dag.
struct InferredNetwork {
  DynamicFollowNetwork dynamic;
  std::vector<AgentIndex> ranking;
  ProbFollowNetwork dag;
};

InferredNetwork infer_following_network(std::span<const TrajectorySet> events,
                                        const NetworkOptions& options);

}  // namespace stratinfer
