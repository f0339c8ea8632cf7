#pragma once

#include <iosfwd>
#include <string>

#include "evalkit/eval.hpp"

namespace evalkit {

/// Comma-separated curve files: an optional "# skipped = N" comment, a
/// header line "abscissa,mean,std,n", one row per point. Doubles use
/// shortest round-trip formatting, so read(write(c)) == c exactly.
void write_curve(std::ostream& out, const ErrorCurve& curve);
void write_curve(const std::string& path, const ErrorCurve& curve);
ErrorCurve read_curve(std::istream& in, const std::string& name = "<stream>");
ErrorCurve read_curve(const std::string& path);

}  // namespace evalkit
