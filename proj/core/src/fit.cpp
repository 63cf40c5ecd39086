#include "stratinfer/fit.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "stratinfer/delaunay.hpp"
#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

std::size_t first_row(const TrajectorySet& ts, const ProbFollowNetwork& net, std::size_t p_ar) {
  if (net.n_agents() != ts.n_agents()) {
    throw Error(ErrorCode::InconsistentAgents,
                "following network covers " + std::to_string(net.n_agents()) + " agents, event has " +
                    std::to_string(ts.n_agents()));
  }
  if (ts.n_steps() < p_ar + 2) {
    throw Error(ErrorCode::TooShort, "event needs at least " + std::to_string(p_ar + 2) + " steps");
  }
  return std::max<std::size_t>(p_ar, 1);
}

std::vector<Vec2> positions_at(const TrajectorySet& ts, std::size_t t) {
  std::vector<Vec2> out(ts.n_agents());
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = ts.positions[a][t];
  return out;
}

StrategyContext fitting_context(const TrajectorySet& ts, const ProbFollowNetwork& net, std::size_t t,
                                std::span<const Vec2> positions, const Triangulation* tri) {
  StrategyContext ctx;
  ctx.directions = &ts.directions;
  ctx.t = t;
  ctx.positions = positions;
  ctx.network = &net;
  ctx.triangulation = tri;
  return ctx;
}

}  // namespace

const char* to_string(StrategyLabel label) noexcept {
  switch (label) {
    case StrategyLabel::HM: return "HM";
    case StrategyLabel::LRA: return "LRA";
    case StrategyLabel::AR: return "AR";
    case StrategyLabel::MIXED: return "MIXED";
  }
  return "?";
}

PredictionMatrix build_prediction_matrix(const TrajectorySet& ts, const ProbFollowNetwork& net,
                                         AgentIndex i, std::size_t p_ar) {
  const std::size_t start = first_row(ts, net, p_ar);
  if (i >= ts.n_agents()) throw Error(ErrorCode::InvalidParam, "agent index out of range");
  PredictionMatrix m;
  for (std::size_t t = start; t < ts.n_steps(); ++t) {
    const std::vector<Vec2> pos = positions_at(ts, t);
    const StrategyContext ctx = fitting_context(ts, net, t, pos, nullptr);
    m.push_back(predict_pure(ctx, i, p_ar), ts.directions[i][t], ts.directions[i][t - 1], t);
  }
  return m;
}

std::vector<PredictionMatrix> build_prediction_matrices(const TrajectorySet& ts, const ProbFollowNetwork& net,
                                                        std::size_t p_ar) {
  const std::size_t start = first_row(ts, net, p_ar);
  std::vector<PredictionMatrix> out(ts.n_agents());
  for (std::size_t t = start; t < ts.n_steps(); ++t) {
    const std::vector<Vec2> pos = positions_at(ts, t);
    const Triangulation tri = triangulate(pos);
    const StrategyContext ctx = fitting_context(ts, net, t, pos, &tri);
    for (AgentIndex i = 0; i < ts.n_agents(); ++i) {
      out[i].push_back(predict_pure(ctx, i, p_ar), ts.directions[i][t], ts.directions[i][t - 1], t);
    }
  }
  return out;
}

std::vector<PredictionMatrix> build_prediction_matrices(std::span<const TrajectorySet> events,
                                                        const ProbFollowNetwork& net, std::size_t p_ar) {
  std::vector<PredictionMatrix> out(net.n_agents());
  for (const TrajectorySet& ts : events) {
    const auto per_event = build_prediction_matrices(ts, net, p_ar);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].append(per_event[i]);
  }
  return out;
}

std::vector<FittedModel> fit_agent_models(const PredictionMatrix& m, AgentIndex i,
                                          std::span<const ThresholdVector> kappa_grid) {
  if (kappa_grid.empty()) throw Error(ErrorCode::InvalidParam, "kappa grid is empty");
  const QuadraticForm q = quadratic_form(m);
  const double rows = static_cast<double>(std::max<std::size_t>(m.rows(), 1));
  std::vector<FittedModel> out;
  out.reserve(kappa_grid.size());
  for (const ThresholdVector& kappa : kappa_grid) {
    FittedModel model;
    model.agent = i;
    model.kappa = kappa;
    model.w = solve_support_qp(q, kappa);
    model.train_risk = std::max(0.0, support_objective(m, model.w)) / rows;
    out.push_back(model);
  }
  return out;
}

FitResult fit_agent_models(std::span<const TrajectorySet> train, const FitOptions& options) {
  if (options.kappa_grid.empty()) throw Error(ErrorCode::InvalidParam, "kappa grid is empty");
  for (const ThresholdVector& k : options.kappa_grid) {
    if (!k.feasible()) throw Error(ErrorCode::InfeasibleKappa, "kappa grid entry sums above 1");
  }
  FitResult result;
  result.network = infer_following_network(train, options.network);
  const auto matrices = build_prediction_matrices(train, result.network.dag, options.p_ar);
  result.models.reserve(matrices.size());
  for (AgentIndex i = 0; i < matrices.size(); ++i) {
    result.models.push_back(fit_agent_models(matrices[i], i, options.kappa_grid));
  }
  return result;
}

SelectedModel select_agent_model(std::span<const FittedModel> models, const PredictionMatrix& validation) {
  if (models.empty()) throw Error(ErrorCode::InvalidParam, "no candidate models");
  const double rows = static_cast<double>(std::max<std::size_t>(validation.rows(), 1));
  SelectedModel best;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const double risk = support_objective(validation, models[k].w) / rows;
    if (k == 0 || risk < best.validation_risk) {
      best = SelectedModel{models[k].w, models[k].kappa, risk, k};
    }
  }
  return best;
}

SelectedModel select_agent_model(std::span<const FittedModel> models, std::span<const TrajectorySet> validation,
                                 const ProbFollowNetwork& net, AgentIndex i, std::size_t p_ar) {
  PredictionMatrix m;
  for (const TrajectorySet& ts : validation) m.append(build_prediction_matrix(ts, net, i, p_ar));
  return select_agent_model(models, m);
}

StrategyLabel label_strategy(const SupportVector& w, double mix_threshold) {
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  const double top = w[order[0]];
  const double second = w[order[1]];
  if (second >= mix_threshold || top < 0.5 || top == second) return StrategyLabel::MIXED;
  constexpr StrategyLabel kPure[] = {StrategyLabel::HM, StrategyLabel::LRA, StrategyLabel::AR};
  return kPure[order[0]];
}

}  // namespace stratinfer
