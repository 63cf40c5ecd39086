#include "stratinfer/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "stratinfer/delaunay.hpp"
#include "stratinfer/error.hpp"
#include "stratinfer/strategies.hpp"

namespace stratinfer {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DirectionDeg uniform_direction(std::mt19937_64& rng) {
  return DirectionDeg(360.0 * uniform01(rng) - 180.0);
}

enum class Rule { Informed, Hm, Lra, Random };

}  // namespace

void validate(const SimSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
  if (spec.n_agents < 2) fail("n_agents must be at least 2");
  if (spec.n_steps < 2) fail("n_steps must be at least 2");
  if (!(spec.rho >= 0.0 && spec.rho <= 1.0)) fail("rho must lie in [0, 1]");
  if (!(spec.mix_prob >= 0.0 && spec.mix_prob <= 1.0)) fail("mix_prob must lie in [0, 1]");
  if (!(spec.arena > 0.0) || !std::isfinite(spec.arena)) fail("arena must be positive");
  if (!(spec.speed > 0.0) || !std::isfinite(spec.speed)) fail("speed must be positive");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) noexcept {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrajectorySet simulate(const SimSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n_agents;
  const std::size_t steps = spec.n_steps;
  std::mt19937_64 rng(spec.seed);

  const DirectionDeg target = uniform_direction(rng);
  const std::vector<AgentIndex> informed{0};

  std::vector<PositionSeries> pos(n);
  std::vector<DirectionSeries> dirs(n);
  for (auto& p : pos) {
    p.reserve(steps + 1);
    p.push_back({spec.arena * uniform01(rng), spec.arena * uniform01(rng)});
  }
  for (auto& d : dirs) d.reserve(steps);

  const double hm_rho = spec.model == Regime::HM ? spec.rho : 1.0;
  const ProbFollowNetwork star = ProbFollowNetwork::star(n, 0, hm_rho);

  auto fixed_rule = [&](AgentIndex a) {
    if (spec.model == Regime::RANDOM) return Rule::Random;
    if (a == 0) return Rule::Informed;
    switch (spec.model) {
      case Regime::HM: return Rule::Hm;
      case Regime::LRA: return Rule::Lra;
      case Regime::HM_AND_LRA: return a + 1 <= n / 2 ? Rule::Hm : Rule::Lra;
      default: return Rule::Lra;  // MIXED draws per step
    }
  };

  // Moves every agent along `chosen` and records the heading re-derived from the step.
  auto advance = [&](const std::vector<DirectionDeg>& chosen) {
    for (AgentIndex a = 0; a < n; ++a) {
      const UnitVec2 u = to_unit(chosen[a]);
      const Vec2 from = pos[a].back();
      const Vec2 to{from.x + spec.speed * u.x, from.y + spec.speed * u.y};
      pos[a].push_back(to);
      dirs[a].push_back(direction_of(to.x - from.x, to.y - from.y));
    }
  };

  std::vector<DirectionDeg> chosen(n);
  for (AgentIndex a = 0; a < n; ++a) {
    chosen[a] = (a == 0 && spec.model != Regime::RANDOM) ? target : uniform_direction(rng);
  }
  advance(chosen);

  std::vector<Vec2> current(n);
  std::vector<AgentIndex> neighbors;
  for (std::size_t t = 1; t < steps; ++t) {
    for (AgentIndex a = 0; a < n; ++a) current[a] = pos[a][t];

    std::vector<Rule> rules(n);
    for (AgentIndex a = 0; a < n; ++a) {
      rules[a] = fixed_rule(a);
      if (spec.model == Regime::MIXED && a != 0) {
        rules[a] = uniform01(rng) < spec.mix_prob ? Rule::Hm : Rule::Lra;
      }
    }
    const bool any_lra = std::find(rules.begin(), rules.end(), Rule::Lra) != rules.end();
    const bool any_hm = std::find(rules.begin(), rules.end(), Rule::Hm) != rules.end();

    Triangulation tri;
    if (any_lra) tri = triangulate(current);
    std::vector<ProbEdge> realized;
    if (any_hm) realized = realize_network(star, rng);

    StrategyContext ctx;
    ctx.directions = &dirs;
    ctx.t = t;
    ctx.positions = current;
    ctx.informed = informed;
    ctx.target = target;
    ctx.triangulation = any_lra ? &tri : nullptr;

    for (AgentIndex a = 0; a < n; ++a) {
      switch (rules[a]) {
        case Rule::Informed:
          chosen[a] = target;
          break;
        case Rule::Random:
          chosen[a] = uniform_direction(rng);
          break;
        case Rule::Lra:
          chosen[a] = predict_lra(ctx, a);
          break;
        case Rule::Hm: {
          neighbors.assign(1, a);
          for (const ProbEdge& e : realized) {
            if (e.follower == a) neighbors.push_back(e.followed);
          }
          chosen[a] = predict_hm_sim(ctx, a, neighbors);
          break;
        }
      }
    }
    advance(chosen);
  }

  std::vector<int> ids(n);
  for (std::size_t a = 0; a < n; ++a) ids[a] = static_cast<int>(a + 1);
  TrajectorySet ts;
  ts.agent_ids = std::move(ids);
  ts.positions = std::move(pos);
  ts.directions = std::move(dirs);
  ts.informed = informed;
  ts.spec = spec;
  ts.source = std::string("simulate:") + to_string(spec.model) + ":seed=" + std::to_string(spec.seed);
  return ts;
}

double compute_hm_bound(std::span<const DirectionDeg> initial_dirs, DirectionDeg target,
                        double epsilon, double p_star, std::size_t n) {
  if (!(p_star > 0.0) || !(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "compute_hm_bound: p_star and epsilon must be positive");
  }
  double worst = 0.0;
  for (DirectionDeg d : initial_dirs) {
    const double gap = dist_dir(d, target);
    if (gap <= 0.0) continue;
    worst = std::max(worst, std::max(0.0, std::log2(gap / epsilon)) / p_star);
  }
  return static_cast<double>(n) * worst;
}

ConvergenceReport check_convergence(const TrajectorySet& ts, double epsilon) {
  if (ts.informed.empty()) {
    throw Error(ErrorCode::NoInformedAgent, "check_convergence: trajectory has no informed agent");
  }
  ConvergenceReport report;
  report.epsilon = epsilon;
  const auto& lead = ts.directions.at(ts.informed.front());
  const std::size_t steps = ts.n_steps();
  std::optional<std::size_t> since;
  for (std::size_t t = steps; t-- > 0;) {
    double worst = 0.0;
    for (const auto& s : ts.directions) worst = std::max(worst, dist_dir(s[t], lead[t]));
    if (worst > epsilon) break;
    since = t;
  }
  report.converged_at = since;

  if (ts.spec && ts.spec->model == Regime::HM && ts.spec->rho > 0.0 && steps > 0) {
    std::vector<DirectionDeg> initial;
    for (const auto& s : ts.directions) initial.push_back(s.front());
    report.bound = compute_hm_bound(initial, lead.front(), epsilon, ts.spec->rho, ts.n_agents());
  }
  return report;
}

}  // namespace stratinfer
