#include "metareason/weights_record.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace metareason {

namespace {

constexpr const char* kHeader = "metareason-weights v1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::map<std::string, std::string>& fields, const std::string& key) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw ConfigError("weights record is missing '" + key + "'");
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("weights record field '" + key + "' is not a number: " + it->second);
  }
}

}  // namespace

std::string format_weights_record(const WeightsRecord& r) {
  std::ostringstream out;
  out << kHeader << '\n'
      << "domain " << r.domain << '\n'
      << "size " << r.size << '\n'
      << "horizon " << r.horizon << '\n'
      << "cost " << fmt(r.cost) << '\n'
      << "w1 " << fmt(r.weights.w1) << '\n'
      << "w2 " << fmt(r.weights.w2) << '\n'
      << "w3 " << fmt(r.weights.w3) << '\n'
      << "w4 " << fmt(r.weights.w4) << '\n'
      << "seed " << r.seed << '\n';
  return out.str();
}

WeightsRecord parse_weights_record(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ConfigError("not a metareason weights record (v1)");
  std::map<std::string, std::string> fields;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos) throw ConfigError("malformed weights record line: " + line);
    fields[line.substr(0, space)] = line.substr(space + 1);
  }
  if (!fields.contains("domain")) throw ConfigError("weights record is missing 'domain'");
  WeightsRecord r;
  r.domain = fields["domain"];
  r.size = static_cast<int>(to_double(fields, "size"));
  r.horizon = static_cast<int>(to_double(fields, "horizon"));
  r.cost = to_double(fields, "cost");
  r.weights = {to_double(fields, "w1"), to_double(fields, "w2"), to_double(fields, "w3"), to_double(fields, "w4")};
  if (!fields.contains("seed")) throw ConfigError("weights record is missing 'seed'");
  try {
    r.seed = std::stoull(fields["seed"]);
  } catch (const std::logic_error&) {
    throw ConfigError("weights record seed is not an integer");
  }
  try {
    r.weights.validate(r.horizon);
  } catch (const ConstraintError& e) {
    throw ConfigError(std::string("weights record violates constraints: ") + e.what());
  }
  return r;
}

void write_weights_record(const std::filesystem::path& path, const WeightsRecord& record) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write weights record " + path.string());
  out << format_weights_record(record);
  if (!out) throw IoError("failed writing weights record " + path.string());
}

WeightsRecord read_weights_record(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingArtifactError("weights record not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read weights record " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_weights_record(buf.str());
}

}  // namespace metareason
