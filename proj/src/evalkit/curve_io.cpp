#include "evalkit/curve_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "trajkit/errors.hpp"
#include "trajkit/numfmt.hpp"

namespace evalkit {

using trajkit::DataError;

namespace {

double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw DataError(where + ": not a number: '" + text + "'");
  return value;
}

}  // namespace

void write_curve(std::ostream& out, const ErrorCurve& curve) {
  if (curve.skipped > 0) out << "# skipped = " << curve.skipped << "\n";
  out << "abscissa,mean,std,n\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << trajkit::format_double(curve.abscissa[i]) << ','
        << trajkit::format_double(curve.mean[i]) << ','
        << trajkit::format_double(curve.stddev[i]) << ',' << curve.count[i] << "\n";
  }
}

void write_curve(const std::string& path, const ErrorCurve& curve) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  write_curve(out, curve);
  if (!out) throw DataError(path + ": write failed");
}

ErrorCurve read_curve(std::istream& in, const std::string& name) {
  ErrorCurve curve;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.find("skipped") != std::string::npos && eq != std::string::npos)
        curve.skipped = static_cast<int>(parse_double(line.substr(eq + 2), where));
      continue;
    }
    if (!header_seen) {
      if (line != "abscissa,mean,std,n") throw DataError(where + ": bad curve header");
      header_seen = true;
      continue;
    }
    std::stringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4) throw DataError(where + ": expected 4 fields");
    curve.abscissa.push_back(parse_double(fields[0], where));
    curve.mean.push_back(parse_double(fields[1], where));
    curve.stddev.push_back(parse_double(fields[2], where));
    curve.count.push_back(static_cast<int>(parse_double(fields[3], where)));
  }
  if (!header_seen) throw DataError(name + ": missing curve header");
  return curve;
}

ErrorCurve read_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  return read_curve(in, path);
}

}  // namespace evalkit
