#pragma once

// File formats: voter CSV, instance JSON, atomic output writes.

#include "policygame/model.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace policygame {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// One voter per row, k columns, header dim_0,...,dim_{k-1}.
PreferenceSet read_preferences_csv(const std::filesystem::path& path, Party party);
PreferenceSet parse_preferences_csv(const std::string& text, Party party);

// {k, q_a, q_b, q, rho_a, rho_b, degenerate_flags}
json to_json(const GameInstance& inst);

// Accepts {"q_a": [...], "q_b": [...]} or {"voters_a": [[...]], "voters_b": [[...]]}.
GameInstance instance_from_json(const json& j, bool rescale = false);
// A single instance object, an array of them, or {"instances": [...]}.
std::vector<GameInstance> instances_from_json(const json& j, bool rescale = false);

json read_json_file(const std::filesystem::path& path);

Vector vector_from_json(const json& j, const char* field);
json vector_to_json(const Vector& v);

// %.17g; enough digits to round-trip any double.
std::string format_double(double x);

// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace policygame
