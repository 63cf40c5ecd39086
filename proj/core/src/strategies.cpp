#include "stratinfer/strategies.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DirectionDeg mean_or(std::span<const DirectionDeg> dirs, std::span<const double> weights,
                     DirectionDeg fallback) {
  try {
    return circular_mean(dirs, weights);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroResultant) throw;
    return fallback;
  }
}

DirectionDeg equal_mean_of(const StrategyContext& ctx, AgentIndex i,
                           std::span<const AgentIndex> agents) {
  std::vector<DirectionDeg> dirs;
  dirs.reserve(agents.size());
  for (AgentIndex a : agents) dirs.push_back(ctx.previous(a));
  const std::vector<double> ones(dirs.size(), 1.0);
  return mean_or(dirs, ones, ctx.previous(i));
}

}  // namespace

const char* to_string(StrategyKind k) noexcept {
  switch (k) {
    case StrategyKind::HM: return "HM";
    case StrategyKind::LRA: return "LRA";
    case StrategyKind::AR: return "AR";
    case StrategyKind::INFORMED: return "INFORMED";
    case StrategyKind::MIX: return "MIX";
  }
  return "?";
}

bool SupportVector::on_simplex() const noexcept {
  const double s = hm + lra + ar;
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  return std::abs(s - 1.0) <= 1e-9 && unit(hm) && unit(lra) && unit(ar);
}

bool StrategyContext::is_informed(AgentIndex a) const noexcept {
  return std::find(informed.begin(), informed.end(), a) != informed.end();
}

std::vector<ProbEdge> realize_network(const ProbFollowNetwork& net, std::mt19937_64& rng) {
  std::vector<ProbEdge> realized;
  for (AgentIndex i = 0; i < net.n_agents(); ++i) {
    for (const ProbEdge& e : net.outgoing(i)) {
      if (uniform01(rng) < e.p) realized.push_back(e);
    }
  }
  return realized;
}

DirectionDeg predict_hm_sim(const StrategyContext& ctx, AgentIndex i,
                            std::span<const AgentIndex> realized_neighbors) {
  if (ctx.target && ctx.is_informed(i)) return *ctx.target;
  return equal_mean_of(ctx, i, realized_neighbors);
}

DirectionDeg predict_hm_fit(const StrategyContext& ctx, AgentIndex i) {
  if (ctx.target && ctx.is_informed(i)) return *ctx.target;
  std::vector<DirectionDeg> dirs{ctx.previous(i)};
  std::vector<double> weights{1.0};
  if (ctx.network != nullptr) {
    for (const ProbEdge& e : ctx.network->outgoing(i)) {
      dirs.push_back(ctx.previous(e.followed));
      weights.push_back(e.p);
    }
  }
  return mean_or(dirs, weights, ctx.previous(i));
}

std::vector<AgentIndex> delaunay_neighbors(std::span<const Vec2> positions, AgentIndex i) {
  if (positions.size() < 2) {
    throw Error(ErrorCode::InvalidParam, "delaunay_neighbors: need at least 2 agents");
  }
  return triangulate(positions).neighbors.at(i);
}

DirectionDeg predict_lra(const StrategyContext& ctx, AgentIndex i) {
  if (ctx.target && ctx.is_informed(i)) return *ctx.target;
  if (ctx.triangulation != nullptr) {
    return equal_mean_of(ctx, i, ctx.triangulation->neighbors.at(i));
  }
  const Triangulation tri = triangulate(ctx.positions);
  return equal_mean_of(ctx, i, tri.neighbors.at(i));
}

DirectionDeg predict_ar(const StrategyContext& ctx, AgentIndex i, std::size_t lag) {
  const auto& series = (*ctx.directions)[i];
  const std::size_t take = std::min(std::max<std::size_t>(lag, 1), ctx.t);
  if (take == 0) throw Error(ErrorCode::TooShort, "predict_ar: empty history");
  const std::span<const DirectionDeg> history(series.data() + (ctx.t - take), take);
  const std::vector<double> ones(take, 1.0);
  return mean_or(history, ones, ctx.previous(i));
}

DirectionDeg predict_informed(const StrategyContext& ctx, AgentIndex i) {
  if (ctx.informed.empty()) {
    throw Error(ErrorCode::EmptyInformedSet, "predict_informed: no informed agents");
  }
  const auto& dirs = *ctx.directions;
  if (ctx.is_informed(i)) return dirs[i][ctx.t];
  std::vector<DirectionDeg> current;
  current.reserve(ctx.informed.size());
  for (AgentIndex a : ctx.informed) current.push_back(dirs[a][ctx.t]);
  const std::vector<double> ones(current.size(), 1.0);
  return mean_or(current, ones, ctx.previous(i));
}

PurePredictions predict_pure(const StrategyContext& ctx, AgentIndex i, std::size_t lag) {
  return {predict_hm_fit(ctx, i), predict_lra(ctx, i), predict_ar(ctx, i, lag)};
}

DirectionDeg mix_predictions(const PurePredictions& pure, const SupportVector& w,
                             DirectionDeg fallback) {
  const std::array<DirectionDeg, 3> dirs{pure.hm, pure.lra, pure.ar};
  const std::array<double, 3> weights{w.hm, w.lra, w.ar};
  return mean_or(dirs, weights, fallback);
}

DirectionDeg predict_mix(const StrategyContext& ctx, AgentIndex i, const SupportVector& w,
                         std::size_t lag) {
  return mix_predictions(predict_pure(ctx, i, lag), w, ctx.previous(i));
}

}  // namespace stratinfer
