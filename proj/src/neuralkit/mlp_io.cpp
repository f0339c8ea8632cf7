#include "neuralkit/mlp_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "trajkit/errors.hpp"

namespace neuralkit {

static_assert(std::numeric_limits<double>::is_iec559, "IEEE-754 doubles required");
static_assert(std::endian::native == std::endian::little, "little-endian host required");

namespace {

constexpr int kFormatVersion = 1;
constexpr char kFileMagic[] = "MLPB";

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw trajkit::DataError("parameter block: truncated header");
  return v;
}

}  // namespace

std::string activation_tag(Activation act) {
  switch (act) {
    case Activation::Identity: return "identity";
    case Activation::Tanh: return "tanh";
    case Activation::Softplus: return "softplus";
  }
  throw trajkit::DataError("parameter block: unknown activation");
}

Activation activation_from_tag(const std::string& tag) {
  if (tag == "identity") return Activation::Identity;
  if (tag == "tanh") return Activation::Tanh;
  if (tag == "softplus") return Activation::Softplus;
  throw trajkit::DataError("parameter block: unknown activation tag '" + tag + "'");
}

void write_mlp_block(std::ostream& out, const MlpParams& params) {
  nlohmann::json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["layers"] = nlohmann::json::array();
  for (const Layer& layer : params.layers) {
    nlohmann::json entry;
    entry["in"] = layer.weight.cols();
    entry["out"] = layer.weight.rows();
    entry["act"] = activation_tag(layer.act);
    entry["act_split"] = layer.act_split;
    manifest["layers"].push_back(entry);
  }
  const std::string text = manifest.dump();
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Layer& layer : params.layers) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        const double v = layer.weight(r, c);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
    out.write(reinterpret_cast<const char*>(layer.bias.data()),
              static_cast<std::streamsize>(sizeof(double) * layer.bias.size()));
  }
  if (!out) throw trajkit::DataError("parameter block: write failed");
}

MlpParams read_mlp_block(std::istream& in) {
  const std::uint64_t manifest_size = read_u64(in);
  if (manifest_size > (1u << 20)) throw trajkit::DataError("parameter block: manifest too large");
  std::string text(manifest_size, '\0');
  in.read(text.data(), static_cast<std::streamsize>(manifest_size));
  if (!in) throw trajkit::DataError("parameter block: truncated manifest");

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw trajkit::DataError(std::string("parameter block: bad manifest: ") + e.what());
  }
  if (!manifest.contains("format_version") || !manifest["format_version"].is_number_integer())
    throw trajkit::DataError("parameter block: missing format_version");
  const int version = manifest["format_version"].get<int>();
  if (version != kFormatVersion)
    throw trajkit::DataError("parameter block: unsupported format_version " + std::to_string(version));
  if (!manifest.contains("layers") || !manifest["layers"].is_array())
    throw trajkit::DataError("parameter block: missing layers");

  MlpParams params;
  for (const auto& entry : manifest["layers"]) {
    const auto rows = entry.at("out").get<Eigen::Index>();
    const auto cols = entry.at("in").get<Eigen::Index>();
    if (rows <= 0 || cols <= 0) throw trajkit::DataError("parameter block: bad layer shape");
    Layer layer;
    layer.weight.resize(rows, cols);
    layer.bias.resize(rows);
    layer.act = activation_from_tag(entry.at("act").get<std::string>());
    layer.act_split = entry.at("act_split").get<Eigen::Index>();
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        double v = 0.0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        layer.weight(r, c) = v;
      }
    in.read(reinterpret_cast<char*>(layer.bias.data()),
            static_cast<std::streamsize>(sizeof(double) * layer.bias.size()));
    if (!in) throw trajkit::DataError("parameter block: truncated payload");
    params.layers.push_back(std::move(layer));
  }
  if (params.layers.empty()) throw trajkit::DataError("parameter block: no layers");
  return params;
}

void save_mlp(const std::string& path, const MlpParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw trajkit::DataError(path + ": cannot open for writing");
  out.write(kFileMagic, 4);
  write_mlp_block(out, params);
  if (!out) throw trajkit::DataError(path + ": write failed");
}

MlpParams load_mlp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw trajkit::DataError(path + ": cannot open");
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kFileMagic, 4) != 0)
    throw trajkit::DataError(path + ": not a parameter file");
  return read_mlp_block(in);
}

}  // namespace neuralkit
