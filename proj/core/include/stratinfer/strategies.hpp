#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "stratinfer/coordination.hpp"
#include "stratinfer/delaunay.hpp"
#include "stratinfer/dirmath.hpp"
#include "stratinfer/trajectory.hpp"

namespace stratinfer {

enum class StrategyKind { HM, LRA, AR, INFORMED, MIX };

const char* to_string(StrategyKind k) noexcept;

inline constexpr std::size_t kDefaultArLag = 5;

/// Support of the mixed strategy over (HM, LRA, AR).
struct SupportVector {
  double hm = 1.0 / 3.0;
  double lra = 1.0 / 3.0;
  double ar = 1.0 / 3.0;

  double operator[](std::size_t k) const { return k == 0 ? hm : (k == 1 ? lra : ar); }
  double& operator[](std::size_t k) { return k == 0 ? hm : (k == 1 ? lra : ar); }
  /// Sums to one within 1e-9 with every weight in [0, 1].
  bool on_simplex() const noexcept;

  friend bool operator==(const SupportVector&, const SupportVector&) = default;
};

/// Everything a predictor may look at when forecasting the heading taken at step t.
///
/// `directions` is agent-major and must hold entries [0, t) for every agent
/// (entry t is read only by the informed predictor). `positions` are P^t.
struct StrategyContext {
  const std::vector<DirectionSeries>* directions = nullptr;
  std::size_t t = 1;
  std::span<const Vec2> positions;
  const ProbFollowNetwork* network = nullptr;
  std::span<const AgentIndex> informed;
  std::optional<DirectionDeg> target;
  /// Triangulation of `positions`, computed once per step and shared across agents.
  const Triangulation* triangulation = nullptr;

  std::size_t n_agents() const noexcept { return directions ? directions->size() : 0; }
  DirectionDeg previous(AgentIndex a) const { return (*directions)[a][t - 1]; }
  bool is_informed(AgentIndex a) const noexcept;
};

/// Edges of one realization of `net`: each edge kept independently with its probability.
std::vector<ProbEdge> realize_network(const ProbFollowNetwork& net, std::mt19937_64& rng);

/// Simulation-side hierarchical update over a realized neighbor set (which includes i).
DirectionDeg predict_hm_sim(const StrategyContext& ctx, AgentIndex i,
                            std::span<const AgentIndex> realized_neighbors);

/// Fitting-side hierarchical update: own heading weighted 1, each followed agent by p.
DirectionDeg predict_hm_fit(const StrategyContext& ctx, AgentIndex i);

/// Delaunay neighbors of i in `positions`, including i.
std::vector<AgentIndex> delaunay_neighbors(std::span<const Vec2> positions, AgentIndex i);

/// Local agreement: equal-weight mean of the Delaunay neighbors' previous headings.
DirectionDeg predict_lra(const StrategyContext& ctx, AgentIndex i);

/// Mean of the agent's last min(lag, t) headings.
DirectionDeg predict_ar(const StrategyContext& ctx, AgentIndex i, std::size_t lag = kDefaultArLag);

/// Mean current heading of the informed agents. Throws Error(EmptyInformedSet).
DirectionDeg predict_informed(const StrategyContext& ctx, AgentIndex i);

/// The three pure predictions in HM, LRA, AR order.
struct PurePredictions {
  DirectionDeg hm;
  DirectionDeg lra;
  DirectionDeg ar;
};

PurePredictions predict_pure(const StrategyContext& ctx, AgentIndex i, std::size_t lag = kDefaultArLag);

/// Mixed strategy: angle of the support-weighted sum of the pure predictions' unit vectors.
/// Falls back to the previous heading if the sum vanishes.
DirectionDeg predict_mix(const StrategyContext& ctx, AgentIndex i, const SupportVector& w,
                         std::size_t lag = kDefaultArLag);
DirectionDeg mix_predictions(const PurePredictions& pure, const SupportVector& w,
                             DirectionDeg fallback);

}  // namespace stratinfer
