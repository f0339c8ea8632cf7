#pragma once

#include <iosfwd>
#include <string>

#include "trajkit/types.hpp"

namespace trajkit {

/// Newline-delimited records, one JSON object per trajectory:
///   {"id": int, "t": [s...], "pos": [[x,y,z]...], "valid": [0/1...],
///    "split": "train"|"val"|"test", "truth": [[x,y,z]...]}
/// "valid" is omitted when all samples are valid, "truth" when absent.
/// Reading rejects duplicate ids and malformed records with the offending
/// line number; unknown fields are ignored.
Dataset read_dataset(const std::string& path);
Dataset read_dataset(std::istream& in, const std::string& name = "<stream>");

void write_dataset(const std::string& path, const Dataset& ds);
void write_dataset(std::ostream& out, const Dataset& ds);

}  // namespace trajkit
