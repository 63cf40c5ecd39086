#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratinfer/dirmath.hpp"

namespace stratinfer {

using AgentIndex = std::size_t;

/// Generating regime of a simulated event; also the class label set for classification.
enum class Regime { HM, LRA, HM_AND_LRA, MIXED, RANDOM };

inline constexpr Regime kAllRegimes[] = {Regime::HM, Regime::LRA, Regime::HM_AND_LRA,
                                         Regime::MIXED, Regime::RANDOM};

const char* to_string(Regime r) noexcept;
/// Accepts the canonical names (HM, LRA, HM_AND_LRA, MIXED, RANDOM) case-insensitively.
std::optional<Regime> parse_regime(const std::string& name);

struct SimSpec {
  Regime model = Regime::HM;
  std::size_t n_agents = 20;
  std::size_t n_steps = 400;
  double rho = 1.0;
  double mix_prob = 0.5;
  std::uint64_t seed = 0;
  double arena = 100.0;
  double speed = 1.0;
};

/// Positions and derived headings of every agent over one event.
///
/// positions[a] holds T+1 points, directions[a] holds T headings with
/// directions[a][t] the heading of positions[a][t+1] - positions[a][t].
/// Agents are addressed by index; agent_ids maps indices to external ids.
struct TrajectorySet {
  std::vector<int> agent_ids;
  std::vector<PositionSeries> positions;
  std::vector<DirectionSeries> directions;
  std::vector<AgentIndex> informed;
  std::optional<SimSpec> spec;
  std::string source;

  std::size_t n_agents() const noexcept { return positions.size(); }
  std::size_t n_steps() const noexcept { return directions.empty() ? 0 : directions.front().size(); }
  bool is_informed(AgentIndex a) const noexcept;

  /// Builds the set from raw positions, deriving headings. Validates shape and finiteness.
  static TrajectorySet from_positions(std::vector<int> agent_ids, std::vector<PositionSeries> positions,
                                      std::vector<AgentIndex> informed, std::string source = {});
};

}  // namespace stratinfer
