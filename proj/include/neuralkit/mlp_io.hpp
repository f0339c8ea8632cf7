#pragma once

#include <iosfwd>
#include <string>

#include "neuralkit/mlp.hpp"

namespace neuralkit {

// Binary parameter block: a little-endian uint64 manifest length, a JSON
// manifest (format version, layer shapes, activation tags), then every
// parameter as little-endian IEEE-754 f64 in declaration order (per layer:
// weight in row-major order, then bias).  Round-trips bit-exact.
void write_mlp_block(std::ostream& out, const MlpParams& params);
MlpParams read_mlp_block(std::istream& in);

// Standalone file wrapper around a single block (magic + block).
void save_mlp(const std::string& path, const MlpParams& params);
MlpParams load_mlp(const std::string& path);

std::string activation_tag(Activation act);
Activation activation_from_tag(const std::string& tag);

}  // namespace neuralkit
