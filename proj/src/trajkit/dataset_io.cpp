#include "trajkit/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace trajkit {

namespace {

using nlohmann::json;

Vec3 parse_vec3(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3) throw DataError(ctx + " must be a 3-element array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

DatasetEntry parse_entry(const json& rec) {
  if (!rec.is_object()) throw DataError("record is not an object");
  for (const char* field : {"id", "t", "pos", "split"})
    if (!rec.contains(field)) throw DataError(std::string("missing \"") + field + "\" field");

  DatasetEntry entry;
  entry.traj.id = rec.at("id").get<std::int64_t>();
  entry.split = split_from_string(rec.at("split").get<std::string>());

  const auto& t = rec.at("t");
  const auto& pos = rec.at("pos");
  if (!t.is_array() || !pos.is_array()) throw DataError("\"t\" and \"pos\" must be arrays");
  if (t.size() != pos.size()) throw DataError("\"t\" and \"pos\" lengths differ");
  entry.traj.times.reserve(t.size());
  entry.traj.positions.reserve(pos.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    entry.traj.times.push_back(t[i].get<double>());
    entry.traj.positions.push_back(parse_vec3(pos[i], "\"pos\" entry"));
  }

  if (rec.contains("valid")) {
    const auto& valid = rec.at("valid");
    if (!valid.is_array() || valid.size() != t.size())
      throw DataError("\"valid\" must match \"t\" length");
    entry.traj.valid.reserve(valid.size());
    for (const auto& v : valid) entry.traj.valid.push_back(v.get<int>() != 0 ? 1 : 0);
  }

  if (rec.contains("truth")) {
    const auto& truth = rec.at("truth");
    if (!truth.is_array() || truth.size() != t.size())
      throw DataError("\"truth\" must match \"t\" length");
    entry.truth.reserve(truth.size());
    for (const auto& p : truth) entry.truth.push_back(parse_vec3(p, "\"truth\" entry"));
  }

  validate(entry.traj);
  return entry;
}

}  // namespace

Dataset read_dataset(std::istream& in, const std::string& name) {
  Dataset ds;
  std::unordered_set<std::int64_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json rec = json::parse(line);
      DatasetEntry entry = parse_entry(rec);
      if (!seen.insert(entry.traj.id).second)
        throw DataError("duplicate id " + std::to_string(entry.traj.id));
      ds.entries.push_back(std::move(entry));
    } catch (const json::exception& e) {
      throw DataError(name + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ds;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_dataset(in, path);
}

void write_dataset(std::ostream& out, const Dataset& ds) {
  validate(ds);
  for (const auto& entry : ds.entries) {
    json rec;
    rec["id"] = entry.traj.id;
    rec["split"] = to_string(entry.split);
    rec["t"] = entry.traj.times;
    json pos = json::array();
    for (const auto& p : entry.traj.positions) pos.push_back({p.x(), p.y(), p.z()});
    rec["pos"] = std::move(pos);
    if (!entry.traj.valid.empty() && entry.traj.valid_count() != entry.traj.size()) {
      json valid = json::array();
      for (auto v : entry.traj.valid) valid.push_back(static_cast<int>(v));
      rec["valid"] = std::move(valid);
    }
    if (entry.has_truth()) {
      json truth = json::array();
      for (const auto& p : entry.truth) truth.push_back({p.x(), p.y(), p.z()});
      rec["truth"] = std::move(truth);
    }
    out << rec.dump() << '\n';
  }
}

void write_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  write_dataset(out, ds);
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace trajkit
