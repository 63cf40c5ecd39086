#include "stratinfer/trajectory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "stratinfer/error.hpp"

namespace stratinfer {

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::HM: return "HM";
    case Regime::LRA: return "LRA";
    case Regime::HM_AND_LRA: return "HM_AND_LRA";
    case Regime::MIXED: return "MIXED";
    case Regime::RANDOM: return "RANDOM";
  }
  return "?";
}

std::optional<Regime> parse_regime(const std::string& name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  std::replace(upper.begin(), upper.end(), '-', '_');
  for (Regime r : kAllRegimes) {
    if (upper == to_string(r)) return r;
  }
  return std::nullopt;
}

bool TrajectorySet::is_informed(AgentIndex a) const noexcept {
  return std::find(informed.begin(), informed.end(), a) != informed.end();
}

TrajectorySet TrajectorySet::from_positions(std::vector<int> agent_ids,
                                            std::vector<PositionSeries> positions,
                                            std::vector<AgentIndex> informed, std::string source) {
  if (agent_ids.size() != positions.size()) {
    throw Error(ErrorCode::InvalidParam, "agent id count does not match position series count");
  }
  for (const auto& p : positions) {
    if (p.size() != positions.front().size()) {
      throw Error(ErrorCode::InvalidParam, "position series must share one length");
    }
    for (const auto& v : p) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw Error(ErrorCode::NonFinitePosition, "non-finite coordinate in trajectory");
      }
    }
  }
  for (AgentIndex a : informed) {
    if (a >= positions.size()) throw Error(ErrorCode::InvalidParam, "informed agent out of range");
  }
  TrajectorySet ts;
  ts.directions = directions_from_positions(positions);
  ts.agent_ids = std::move(agent_ids);
  ts.positions = std::move(positions);
  ts.informed = std::move(informed);
  ts.source = std::move(source);
  return ts;
}

}  // namespace stratinfer
