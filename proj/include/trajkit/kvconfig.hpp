#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace trajkit {

// key = value text config.  '#' starts a comment, blank lines ignored,
// whitespace around key and value trimmed.  Later keys override earlier ones.
using KvMap = std::map<std::string, std::string>;

KvMap parse_kv(std::istream& in, const std::string& name);
KvMap parse_kv_file(const std::string& path);
void write_kv(std::ostream& out, const KvMap& kv);

double kv_double(const KvMap& kv, const std::string& key, double fallback);

}  // namespace trajkit
