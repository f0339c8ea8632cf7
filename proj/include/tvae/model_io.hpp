#pragma once

#include <string>

#include "tvae/model.hpp"

namespace tvae {

/// Model file: magic, a JSON manifest (format version, K, hidden width,
/// ci flag, grid, standardization constants, log_sigma_y), then the encoder
/// and decoder in the neuralkit parameter block format. Round-trips the
/// model bit-exact.
void save_model(const std::string& path, const TvaeModel& m);
TvaeModel load_model(const std::string& path);

}  // namespace tvae
