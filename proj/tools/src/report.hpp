#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "stratinfer/coordination.hpp"
#include "stratinfer/evaluate.hpp"

namespace stratinfer::cli {

using nlohmann::ordered_json;

/// Finite numbers as-is, NaN and infinities as null.
ordered_json number(double v);

ordered_json to_json(const SupportVector& w);
ordered_json to_json(const StrategyRisks& r);
ordered_json to_json(const ProbFollowNetwork& net, const std::vector<int>& ids);
ordered_json to_json(const RiskReport& report, const std::vector<std::string>& event_names);
ordered_json to_json(const ClassificationReport& report, const std::vector<std::string>& event_names);

const char* to_string(EdgeProbability p) noexcept;
const char* to_string(EdgeSelection s) noexcept;

/// Per-step mean errors as CSV: t,OPT,HM,LRA,AR,INFORMED.
std::string per_step_csv(const RiskReport& report);
/// Dataset features as CSV: event,label,predicted,w1,w2,w3.
std::string features_csv(const ClassificationReport& report, const std::vector<std::string>& event_names);

}  // namespace stratinfer::cli
