#include "dpw/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace dpw::io {

using nlohmann::json;

std::string tool_version() { return DPW_VERSION; }

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Provenance make_provenance(int argc, const char* const* argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    std::string a = argv[i];
    if (a.find_first_of(" \t\"'") != std::string::npos) a = json(a).dump();
    if (i) cmd += ' ';
    cmd += a;
  }
  return {cmd, tool_version(), utc_timestamp()};
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string serialize_profile(const ProfileDocument& doc) {
  const WaveProfile& p = doc.profile;
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema_version\": " << doc.schema_version << ",\n";
  os << "  \"grid\": {\"kind\": " << json(to_string(p.grid.kind)).dump() << ", \"n\": " << p.grid.n
     << ", \"half_length\": " << format_double(p.grid.half_length) << "},\n";
  os << "  \"c\": " << format_double(p.c) << ",\n";
  os << "  \"a\": " << format_double(p.a) << ",\n";
  os << "  \"values\": [";
  for (std::size_t i = 0; i < p.phi.size(); ++i) os << (i ? ",\n    " : "\n    ") << format_double(p.phi[i]);
  os << "\n  ],\n";
  os << "  \"provenance\": {\"command_line\": " << json(doc.provenance.command_line).dump()
     << ", \"tool_version\": " << json(doc.provenance.tool_version).dump()
     << ", \"timestamp\": " << json(doc.provenance.timestamp).dump() << "}\n";
  os << "}\n";
  return os.str();
}

namespace {

void require_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw std::invalid_argument("unknown key '" + k + "' in " + where);
  for (const auto& k : keys)
    if (!j.contains(k)) throw std::invalid_argument("missing key '" + k + "' in " + where);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw std::invalid_argument(what + " must be a number");
  return j.get<double>();
}

}  // namespace

ProfileDocument parse_profile(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("profile is not valid JSON: ") + e.what());
  }
  require_keys(j, {"schema_version", "grid", "c", "a", "values", "provenance"}, "profile");
  ProfileDocument doc;
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion)
    throw std::invalid_argument("unsupported schema_version");
  const json& g = j["grid"];
  require_keys(g, {"kind", "n", "half_length"}, "grid");
  if (!g["kind"].is_string() || !g["n"].is_number_integer())
    throw std::invalid_argument("grid kind must be a string and n an integer");
  const Grid grid(grid_kind_from_string(g["kind"].get<std::string>()), g["n"].get<int>(),
                  number(g["half_length"], "half_length"));
  const json& vals = j["values"];
  if (!vals.is_array() || static_cast<int>(vals.size()) != grid.n)
    throw std::invalid_argument("values must be an array of n numbers");
  std::vector<double> phi;
  phi.reserve(grid.n);
  for (const auto& v : vals) phi.push_back(number(v, "value"));
  const SampledField checked(grid, phi);
  doc.profile = WaveProfile{grid, checked.values, number(j["c"], "c"), number(j["a"], "a")};
  if (!(doc.profile.c > 0.0)) throw std::invalid_argument("c must be positive");
  const json& pv = j["provenance"];
  require_keys(pv, {"command_line", "tool_version", "timestamp"}, "provenance");
  for (const char* k : {"command_line", "tool_version", "timestamp"})
    if (!pv[k].is_string()) throw std::invalid_argument(std::string("provenance ") + k + " must be a string");
  doc.provenance = {pv["command_line"].get<std::string>(), pv["tool_version"].get<std::string>(),
                    pv["timestamp"].get<std::string>()};
  return doc;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

void write_profile(const std::string& path, const ProfileDocument& doc) { write_text(path, serialize_profile(doc)); }

ProfileDocument read_profile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::invalid_argument("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_profile(ss.str());
}

json to_json(const BoundsReport& r) {
  return {{"positive", r.positive}, {"sup_below_2c", r.below_two_c}, {"sup_below_c", r.below_c},
          {"sup", r.sup},           {"argmax_x", r.argmax_x},        {"min", r.min},
          {"pass", r.pass()}};
}

json to_json(const DecayReport& r) {
  return {{"fitted_rate", r.fitted_rate},
          {"fit_window", {r.fit_window.first, r.fit_window.second}},
          {"fit_r2", r.fit_r2},
          {"weighted_sup", r.weighted_sup},
          {"weighted_variation", r.weighted_variation},
          {"points", r.points}};
}

json to_json(const SymmetryReport& r) {
  return {{"axis", r.axis},
          {"axis_node", r.axis_node},
          {"max_asymmetry", r.max_asymmetry},
          {"crest_count", r.crest_count},
          {"monotone_left", r.monotone_left},
          {"monotone_right", r.monotone_right},
          {"empty_left_of_axis", r.empty_left_of_axis},
          {"scanned_axes", r.scanned_axes}};
}

json to_json(const CrestFit& f) {
  return {{"alpha", f.alpha}, {"C1", f.C1}, {"C2", f.C2}, {"window", f.window}, {"crest_x", f.crest_x}, {"points", f.points}};
}

json to_json(const KernelReflectionReport& r) {
  return {{"pairs", r.pairs},
          {"identity_failures", r.identity_failures},
          {"positivity_failures", r.positivity_failures},
          {"bound_failures", r.bound_failures},
          {"sharp_bound_failures", r.sharp_bound_failures},
          {"worst_identity_error", r.worst_identity_error},
          {"min_difference", r.min_difference},
          {"min_bound_margin", r.min_bound_margin},
          {"min_sharp_margin", r.min_sharp_margin},
          {"pass", r.pass()}};
}

json to_json(const TouchingReport& r) {
  return {{"verdict", to_string(r.verdict)}, {"max_gap", r.max_gap}, {"min_gap", r.min_gap},
          {"max_sum_over_2c", r.max_sum_over_2c}};
}

json to_json(const Provenance& p) {
  return {{"command_line", p.command_line}, {"tool_version", p.tool_version}, {"timestamp", p.timestamp}};
}

void write_path_csv(std::ostream& os, const ContinuationPath& path) {
  os << "mu,sup_phi,crest_curvature,residual_norm\n";
  for (const auto& e : path.entries)
    os << format_double(e.mu) << ',' << format_double(e.profile.sup()) << ',' << format_double(e.crest_curvature) << ','
       << format_double(e.residual_norm) << '\n';
}

}  // namespace dpw::io
