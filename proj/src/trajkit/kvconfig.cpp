#include "trajkit/kvconfig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "trajkit/errors.hpp"

namespace trajkit {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KvMap parse_kv(std::istream& in, const std::string& name) {
  KvMap kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(name + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw DataError(name + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KvMap parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  return parse_kv(in, path);
}

void write_kv(std::ostream& out, const KvMap& kv) {
  for (const auto& [key, value] : kv) out << key << " = " << value << "\n";
}

double kv_double(const KvMap& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const std::string& text = it->second;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw DataError(key + ": not a number: '" + text + "'");
  return value;
}

}  // namespace trajkit
