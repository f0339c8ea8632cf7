#include "tvae/model_io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "neuralkit/mlp_io.hpp"
#include "trajkit/errors.hpp"

namespace tvae {

using trajkit::DataError;

namespace {

constexpr int kManifestVersion = 1;
constexpr char kMagic[4] = {'T', 'V', 'A', 'E'};

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

nlohmann::json vec3_json(const Vec3& v) { return {v[0], v[1], v[2]}; }

Vec3 vec3_from(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.size() != 3)
    throw DataError(std::string("model manifest: ") + field + " must be a 3-array");
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void save_model(const std::string& path, const TvaeModel& m) {
  validate(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");
  out.write(kMagic, sizeof kMagic);

  nlohmann::json manifest;
  manifest["format_version"] = kManifestVersion;
  manifest["k"] = m.latent_dim;
  manifest["hidden"] = m.hidden;
  manifest["ci"] = m.ci;
  manifest["n_grid"] = m.grid.steps;
  manifest["dt"] = m.grid.dt;
  manifest["log_sigma_y"] = vec3_json(m.log_sigma_y);
  manifest["norm_mean"] = vec3_json(m.norm.mean);
  manifest["norm_stdev"] = vec3_json(m.norm.stdev);
  const std::string text = manifest.dump();
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  neuralkit::write_mlp_block(out, m.encoder);
  neuralkit::write_mlp_block(out, m.decoder);
  if (!out) throw DataError(path + ": write failed");
}

TvaeModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open");
  char magic[4] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw DataError(path + ": no model manifest found (expected format_version " +
                    std::to_string(kManifestVersion) + ")");
  std::uint64_t manifest_size = 0;
  in.read(reinterpret_cast<char*>(&manifest_size), sizeof manifest_size);
  if (!in || manifest_size > (1u << 20))
    throw DataError(path + ": model manifest truncated");
  std::string text(manifest_size, '\0');
  in.read(text.data(), static_cast<std::streamsize>(manifest_size));
  if (!in) throw DataError(path + ": model manifest truncated");

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": bad model manifest: " + e.what());
  }
  const int version = manifest.value("format_version", -1);
  if (version != kManifestVersion)
    throw DataError(path + ": model manifest format_version " + std::to_string(version) +
                    " unsupported (expected " + std::to_string(kManifestVersion) + ")");

  TvaeModel m;
  try {
    m.latent_dim = manifest.at("k").get<int>();
    m.hidden = manifest.at("hidden").get<int>();
    m.ci = manifest.at("ci").get<bool>();
    m.grid.steps = manifest.at("n_grid").get<int>();
    m.grid.dt = manifest.at("dt").get<double>();
    m.log_sigma_y = vec3_from(manifest.at("log_sigma_y"), "log_sigma_y");
    m.norm.mean = vec3_from(manifest.at("norm_mean"), "norm_mean");
    m.norm.stdev = vec3_from(manifest.at("norm_stdev"), "norm_stdev");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": bad model manifest: " + e.what());
  }
  m.encoder = neuralkit::read_mlp_block(in);
  m.decoder = neuralkit::read_mlp_block(in);
  validate(m);
  return m;
}

}  // namespace tvae
