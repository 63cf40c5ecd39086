#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stratinfer/trajectory.hpp"

namespace stratinfer {

enum class FillMode { None, Forward };

struct ReadOptions {
  /// None rejects gaps in the (t, agent) grid; Forward repeats an agent's last position.
  FillMode fill = FillMode::None;
  /// External ids of the informed agents.
  std::vector<int> informed_ids;
};

struct ReadStats {
  std::size_t rows = 0;
  std::size_t filled = 0;
};

/// Parses a `t,agent_id,x,y` CSV. Rows may come in any order; every agent must
/// cover t = 0..T unless forward fill is enabled. Agents are indexed by ascending id.
/// Throws Error(Parse) with "name:line: reason" on malformed input.
TrajectorySet read_trajectory_csv(std::istream& in, const std::string& name, const ReadOptions& options = {},
                                  ReadStats* stats = nullptr);
TrajectorySet read_trajectory_csv(const std::filesystem::path& path, const ReadOptions& options = {},
                                  ReadStats* stats = nullptr);

/// Writes rows sorted by (t, agent_id) with 17 significant digits.
void write_trajectory_csv(const TrajectorySet& ts, std::ostream& out);
void write_trajectory_csv(const TrajectorySet& ts, const std::filesystem::path& path);

struct ManifestEntry {
  std::filesystem::path path;
  std::vector<int> informed_ids;
  std::optional<Regime> label;
  std::optional<std::uint64_t> seed;
};

/// Reads a JSON array of {path, informed_ids, label?, seed?}, or an object whose
/// "events" member is such an array. Relative paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
/// Writes entries as a JSON array; paths are written as given.
void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

/// Loads every event of a manifest with its informed ids.
std::vector<TrajectorySet> load_events(const std::vector<ManifestEntry>& entries, FillMode fill = FillMode::None,
                                       std::size_t* filled = nullptr);

}  // namespace stratinfer
