#include "stratinfer/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                         : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& name, std::size_t line, const std::string& reason) {
  throw Error(ErrorCode::Parse, name + ":" + std::to_string(line) + ": " + reason);
}

template <typename T>
bool parse_number(const std::string& text, T& value) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && first != last;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TrajectorySet read_trajectory_csv(std::istream& in, const std::string& name, const ReadOptions& options,
                                  ReadStats* stats) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  // agent id -> t -> position
  std::map<int, std::map<std::size_t, Vec2>> grid;
  std::size_t max_t = 0;
  std::size_t rows = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto fields = split_fields(content);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"t", "agent_id", "x", "y"}) {
        parse_error(name, line_no, "expected header 't,agent_id,x,y'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) parse_error(name, line_no, "expected 4 fields, found " + std::to_string(fields.size()));
    std::size_t t = 0;
    int id = 0;
    Vec2 p;
    if (!parse_number(fields[0], t)) parse_error(name, line_no, "t must be a nonnegative integer, got '" + fields[0] + "'");
    if (!parse_number(fields[1], id) || id <= 0) {
      parse_error(name, line_no, "agent_id must be a positive integer, got '" + fields[1] + "'");
    }
    if (!parse_number(fields[2], p.x) || !std::isfinite(p.x)) parse_error(name, line_no, "x is not a finite number");
    if (!parse_number(fields[3], p.y) || !std::isfinite(p.y)) parse_error(name, line_no, "y is not a finite number");
    if (!grid[id].emplace(t, p).second) {
      parse_error(name, line_no, "duplicate row for agent " + std::to_string(id) + " at t=" + std::to_string(t));
    }
    max_t = std::max(max_t, t);
    ++rows;
  }
  if (!header_seen) parse_error(name, line_no + 1, "missing header 't,agent_id,x,y'");
  if (grid.empty()) parse_error(name, line_no + 1, "no data rows");

  std::vector<int> ids;
  std::vector<PositionSeries> positions;
  std::size_t filled = 0;
  for (const auto& [id, series] : grid) {
    PositionSeries ps;
    ps.reserve(max_t + 1);
    for (std::size_t t = 0; t <= max_t; ++t) {
      const auto it = series.find(t);
      if (it != series.end()) {
        ps.push_back(it->second);
      } else if (options.fill == FillMode::Forward && !ps.empty()) {
        ps.push_back(ps.back());
        ++filled;
      } else {
        throw Error(ErrorCode::Parse, name + ": agent " + std::to_string(id) + " has no position at t=" +
                                          std::to_string(t) + " (dense time grid required)");
      }
    }
    ids.push_back(id);
    positions.push_back(std::move(ps));
  }

  std::vector<AgentIndex> informed;
  for (int id : options.informed_ids) {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw Error(ErrorCode::Parse, name + ": informed agent " + std::to_string(id) + " not present");
    informed.push_back(static_cast<AgentIndex>(it - ids.begin()));
  }
  std::sort(informed.begin(), informed.end());
  informed.erase(std::unique(informed.begin(), informed.end()), informed.end());

  if (stats) *stats = ReadStats{rows, filled};
  return TrajectorySet::from_positions(std::move(ids), std::move(positions), std::move(informed), name);
}

TrajectorySet read_trajectory_csv(const std::filesystem::path& path, const ReadOptions& options, ReadStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, path.string() + ": cannot open file");
  return read_trajectory_csv(in, path.string(), options, stats);
}

void write_trajectory_csv(const TrajectorySet& ts, std::ostream& out) {
  std::vector<AgentIndex> order(ts.n_agents());
  for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
  std::sort(order.begin(), order.end(), [&](AgentIndex a, AgentIndex b) { return ts.agent_ids[a] < ts.agent_ids[b]; });
  out << "t,agent_id,x,y\n";
  const std::size_t points = ts.positions.empty() ? 0 : ts.positions.front().size();
  for (std::size_t t = 0; t < points; ++t) {
    for (AgentIndex a : order) {
      const Vec2 p = ts.positions[a][t];
      out << t << ',' << ts.agent_ids[a] << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
    }
  }
}

void write_trajectory_csv(const TrajectorySet& ts, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, path.string() + ": cannot open for writing");
  write_trajectory_csv(ts, out);
  if (!out) throw Error(ErrorCode::Parse, path.string() + ": write failed");
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, path.string() + ": cannot open manifest");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("events")) doc = doc["events"];
  if (!doc.is_array()) throw Error(ErrorCode::Parse, path.string() + ": manifest must be a JSON array of events");

  const auto base = path.parent_path();
  std::vector<ManifestEntry> out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& e = doc[k];
    const std::string where = path.string() + ": event " + std::to_string(k);
    if (!e.is_object() || !e.contains("path") || !e["path"].is_string()) {
      throw Error(ErrorCode::Parse, where + ": missing string field 'path'");
    }
    ManifestEntry entry;
    entry.path = e["path"].get<std::string>();
    if (entry.path.is_relative()) entry.path = base / entry.path;
    if (e.contains("informed_ids")) {
      if (!e["informed_ids"].is_array()) throw Error(ErrorCode::Parse, where + ": 'informed_ids' must be an array");
      for (const auto& id : e["informed_ids"]) {
        if (!id.is_number_integer()) throw Error(ErrorCode::Parse, where + ": informed ids must be integers");
        entry.informed_ids.push_back(id.get<int>());
      }
    }
    if (e.contains("label") && !e["label"].is_null()) {
      if (!e["label"].is_string()) throw Error(ErrorCode::Parse, where + ": 'label' must be a string");
      entry.label = parse_regime(e["label"].get<std::string>());
      if (!entry.label) throw Error(ErrorCode::Parse, where + ": unknown label '" + e["label"].get<std::string>() + "'");
    }
    if (e.contains("seed") && !e["seed"].is_null()) {
      if (!e["seed"].is_number_unsigned()) throw Error(ErrorCode::Parse, where + ": 'seed' must be a nonnegative integer");
      entry.seed = e["seed"].get<std::uint64_t>();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const ManifestEntry& e : entries) {
    nlohmann::json j;
    j["path"] = e.path.generic_string();
    j["informed_ids"] = e.informed_ids;
    if (e.label) j["label"] = to_string(*e.label);
    if (e.seed) j["seed"] = *e.seed;
    doc.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, path.string() + ": cannot open for writing");
  out << doc.dump(2) << '\n';
}

std::vector<TrajectorySet> load_events(const std::vector<ManifestEntry>& entries, FillMode fill, std::size_t* filled) {
  std::vector<TrajectorySet> out;
  std::size_t total = 0;
  for (const ManifestEntry& e : entries) {
    ReadOptions opts;
    opts.fill = fill;
    opts.informed_ids = e.informed_ids;
    ReadStats stats;
    out.push_back(read_trajectory_csv(e.path, opts, &stats));
    total += stats.filled;
  }
  if (filled) *filled = total;
  return out;
}

}  // namespace stratinfer
