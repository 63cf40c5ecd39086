#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "stratinfer/fit.hpp"
#include "stratinfer/forest.hpp"
#include "stratinfer/trajectory.hpp"

namespace stratinfer {

/// Strategies compared when predicting held-out headings.
enum class EvalStrategy { OPT, HM, LRA, AR, INFORMED };

inline constexpr std::size_t kEvalStrategyCount = 5;
inline constexpr EvalStrategy kEvalStrategies[] = {EvalStrategy::OPT, EvalStrategy::HM, EvalStrategy::LRA,
                                                   EvalStrategy::AR, EvalStrategy::INFORMED};

const char* to_string(EvalStrategy s) noexcept;

using Predictor = std::function<DirectionDeg(const StrategyContext&, AgentIndex)>;
using StrategyRisks = std::array<double, kEvalStrategyCount>;

/// Mean teacher-forced angular error of `predictor` for agent i over steps start .. T-1.
/// The context exposes the event's informed set and the optional network.
double risk_dir(const TrajectorySet& ts, const Predictor& predictor, AgentIndex i,
                const ProbFollowNetwork* net = nullptr, std::size_t start = 1);

/// Mean angular error of one strategy over the rows of a prediction matrix.
/// INFORMED is not derivable from the matrix and throws Error(InvalidParam).
double matrix_risk(const PredictionMatrix& m, EvalStrategy s, const SupportVector& w = {});

struct BestFit {
  EvalStrategy label = EvalStrategy::OPT;
  /// Risks in OPT, HM, LRA, AR order.
  std::array<double, 4> risks{};
};

/// Argmin of the OPT, HM, LRA and AR risks on the test events, ties in that order.
BestFit best_fit_strategy(std::span<const TrajectorySet> test, AgentIndex i, const SupportVector& fitted,
                          const ProbFollowNetwork& net, std::size_t p_ar = kDefaultArLag);

struct CrossValidationOptions {
  std::size_t folds = 10;
  FitOptions fit;
  std::uint64_t seed = 0;
};

struct AgentSummary {
  AgentIndex agent = 0;
  int id = 0;
  bool informed = false;
  /// Selected support averaged over folds.
  SupportVector w;
  StrategyLabel label = StrategyLabel::MIXED;
  /// Test risks in degrees averaged over folds.
  StrategyRisks risks{};
  /// OPT risk on the training events, averaged over folds.
  double train_risk = 0.0;
  EvalStrategy best_fit = EvalStrategy::OPT;
};

struct FoldSummary {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  /// Means over uninformed agents.
  StrategyRisks risks{};
  double train_risk = 0.0;
};

struct RiskReport {
  std::vector<AgentSummary> agents;
  std::vector<FoldSummary> folds;
  /// Means and standard deviations over uninformed agents of the per-agent fold means.
  StrategyRisks mean_risk{};
  StrategyRisks std_risk{};
  double mean_train_risk = 0.0;
  SupportVector mean_w;
  /// per_step[s][k]: mean error at step per_step_start + k over uninformed agents and test events.
  std::size_t per_step_start = 0;
  std::array<std::vector<double>, kEvalStrategyCount> per_step;
};

/// Shuffled k-fold protocol: each fold holds out one slice for testing and splits
/// the rest evenly into training and validation. A single remaining event serves
/// as both. Throws Error(InvalidParam) for fewer than two folds or fewer events
/// than folds, and Error(InconsistentAgents) when agent ids differ across events.
RiskReport cross_validate(std::span<const TrajectorySet> datasets, const CrossValidationOptions& options);

struct FeatureVector {
  SupportVector median_w;

  std::array<double, 3> values() const { return {median_w.hm, median_w.lra, median_w.ar}; }
};

struct LabeledDataset {
  const TrajectorySet* data = nullptr;
  Regime label = Regime::HM;
};

struct ClassificationOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  ForestOptions forest{50, 4, 2, 2, 0};
  NetworkOptions network;
  std::size_t p_ar = kDefaultArLag;
};

/// Componentwise median of every agent's unbiased support, fitted on this event alone.
FeatureVector dataset_features(const TrajectorySet& ts, const NetworkOptions& network = {},
                               std::size_t p_ar = kDefaultArLag);

struct ClassMetrics {
  Regime label = Regime::HM;
  std::size_t support = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassificationReport {
  /// Classes present, in canonical regime order; indexes the confusion matrix.
  std::vector<Regime> classes;
  /// confusion[true][predicted].
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;
  std::vector<FeatureVector> features;
  std::vector<Regime> truth;
  std::vector<Regime> predicted;
};

/// Stratified k-fold random-forest classification of precomputed features.
/// Throws Error(SingleClass) unless at least two classes are present.
ClassificationReport classify_features(std::span<const FeatureVector> features, std::span<const Regime> labels,
                                       const ClassificationOptions& options);

ClassificationReport classify_datasets(std::span<const LabeledDataset> labeled, const ClassificationOptions& options);

}  // namespace stratinfer
