#pragma once

#include <json.hpp>

#include <ostream>
#include <string>

#include "dpw/decay.hpp"
#include "dpw/evolution.hpp"
#include "dpw/steady.hpp"
#include "dpw/symmetry.hpp"

namespace dpw::io {

inline constexpr int kSchemaVersion = 1;

struct Provenance {
  std::string command_line;
  std::string tool_version;
  std::string timestamp;
};

struct ProfileDocument {
  int schema_version = kSchemaVersion;
  WaveProfile profile;
  Provenance provenance;
};

std::string tool_version();
std::string utc_timestamp();
Provenance make_provenance(int argc, const char* const* argv);

// %.17g, with negative zero written as 0
std::string format_double(double v);

std::string serialize_profile(const ProfileDocument& doc);
// throws std::invalid_argument on malformed documents or unknown keys
ProfileDocument parse_profile(const std::string& text);
void write_profile(const std::string& path, const ProfileDocument& doc);
ProfileDocument read_profile(const std::string& path);

void write_text(const std::string& path, const std::string& text);

nlohmann::json to_json(const BoundsReport& r);
nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const SymmetryReport& r);
nlohmann::json to_json(const CrestFit& f);
nlohmann::json to_json(const KernelReflectionReport& r);
nlohmann::json to_json(const TouchingReport& r);
nlohmann::json to_json(const Provenance& p);

void write_path_csv(std::ostream& os, const ContinuationPath& path);

}  // namespace dpw::io
