#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stratinfer/coordination.hpp"
#include "stratinfer/strategies.hpp"
#include "stratinfer/support_qp.hpp"
#include "stratinfer/trajectory.hpp"

namespace stratinfer {

enum class StrategyLabel { HM, LRA, AR, MIXED };

const char* to_string(StrategyLabel label) noexcept;

inline constexpr double kDefaultMixThreshold = 0.35;

struct FittedModel {
  AgentIndex agent = 0;
  SupportVector w;
  ThresholdVector kappa;
  /// Mean squared distance between embedded prediction and actual heading.
  double train_risk = 0.0;
};

/// Teacher-forced predictions for agent i at steps t = max(p_ar, 1) .. T-1.
///
/// The informed set is deliberately left empty: every agent, including any
/// informed one, is explained by the three candidate strategies only.
/// Throws Error(TooShort) if the event has fewer than p_ar + 2 steps and
/// Error(InconsistentAgents) if `net` covers a different number of agents.
PredictionMatrix build_prediction_matrix(const TrajectorySet& ts, const ProbFollowNetwork& net,
                                         AgentIndex i, std::size_t p_ar = kDefaultArLag);

/// Matrices for every agent, sharing one triangulation per step.
std::vector<PredictionMatrix> build_prediction_matrices(const TrajectorySet& ts,
                                                        const ProbFollowNetwork& net,
                                                        std::size_t p_ar = kDefaultArLag);

/// Per-agent matrices with the rows of every event stacked in order.
std::vector<PredictionMatrix> build_prediction_matrices(std::span<const TrajectorySet> events,
                                                        const ProbFollowNetwork& net,
                                                        std::size_t p_ar = kDefaultArLag);

struct FitOptions {
  std::vector<ThresholdVector> kappa_grid = default_kappa_grid();
  std::size_t p_ar = kDefaultArLag;
  NetworkOptions network;
};

struct FitResult {
  InferredNetwork network;
  /// models[i][k] is agent i's fit under kappa_grid[k].
  std::vector<std::vector<FittedModel>> models;
};

/// One model per threshold vector from an already built matrix.
/// Throws Error(InvalidParam) on an empty grid and Error(InfeasibleKappa) on a bad entry.
std::vector<FittedModel> fit_agent_models(const PredictionMatrix& m, AgentIndex i,
                                          std::span<const ThresholdVector> kappa_grid);

/// Infers the following network from the training events, then fits every agent.
FitResult fit_agent_models(std::span<const TrajectorySet> train, const FitOptions& options);

struct SelectedModel {
  SupportVector w;
  ThresholdVector kappa;
  double validation_risk = 0.0;
  std::size_t index = 0;
};

/// Candidate with the lowest mean embedded risk on `validation`, earliest on ties.
/// Throws Error(InvalidParam) if `models` is empty.
SelectedModel select_agent_model(std::span<const FittedModel> models, const PredictionMatrix& validation);

SelectedModel select_agent_model(std::span<const FittedModel> models, std::span<const TrajectorySet> validation,
                                 const ProbFollowNetwork& net, AgentIndex i, std::size_t p_ar = kDefaultArLag);

/// MIXED when the runner-up weight reaches `mix_threshold` or no weight reaches
/// one half; otherwise the label of the largest weight.
StrategyLabel label_strategy(const SupportVector& w, double mix_threshold = kDefaultMixThreshold);

}  // namespace stratinfer
