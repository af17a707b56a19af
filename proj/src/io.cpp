#include "policygame/io.hpp"

#include "policygame/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace policygame {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PreferenceSet parse_preferences_csv(const std::string& text, Party party) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("voter CSV is empty");
  const auto header = split_csv_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != "dim_" + std::to_string(i)) {
      throw ValidationError("voter CSV header column " + std::to_string(i) + " must be 'dim_" +
                            std::to_string(i) + "', got '" + header[i] + "'");
    }
  }
  const std::size_t k = header.size();
  if (k == 0) throw ValidationError("voter CSV header has no columns");

  PreferenceSet prefs;
  prefs.party = party;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != k) {
      throw ValidationError("voter CSV row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " columns, expected " + std::to_string(k));
    }
    Vector q(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
      try {
        std::size_t used = 0;
        q[static_cast<Eigen::Index>(i)] = std::stod(cells[i], &used);
        if (used != cells[i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ValidationError("voter CSV row " + std::to_string(row) + " column " +
                              std::to_string(i) + " is not a number: '" + cells[i] + "'");
      }
    }
    prefs.voters.push_back(std::move(q));
  }
  validate(prefs);
  return prefs;
}

PreferenceSet read_preferences_csv(const std::filesystem::path& path, Party party) {
  return parse_preferences_csv(read_text(path), party);
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw ValidationError(std::string("field '") + field + "' must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ValidationError(std::string("field '") + field + "' entry " + std::to_string(i) +
                            " is not a number");
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json to_json(const GameInstance& inst) {
  return json{
      {"k", inst.k()},
      {"q_a", vector_to_json(inst.q_a())},
      {"q_b", vector_to_json(inst.q_b())},
      {"q", vector_to_json(inst.q())},
      {"rho_a", inst.rho_a()},
      {"rho_b", inst.rho_b()},
      {"degenerate_flags",
       {{"zero_q_a", inst.degenerate().zero_q_a},
        {"zero_q_b", inst.degenerate().zero_q_b},
        {"zero_q", inst.degenerate().zero_q}}},
  };
}

GameInstance instance_from_json(const json& j, bool rescale) {
  if (!j.is_object()) throw ValidationError("instance must be a JSON object");
  if (j.contains("q_a") || j.contains("q_b")) {
    if (!j.contains("q_a") || !j.contains("q_b")) {
      throw ValidationError("instance needs both 'q_a' and 'q_b'");
    }
    return GameInstance::from_aggregates(vector_from_json(j.at("q_a"), "q_a"),
                                         vector_from_json(j.at("q_b"), "q_b"), rescale);
  }
  if (j.contains("voters_a") && j.contains("voters_b")) {
    auto load = [](const json& arr, Party party, const char* field) {
      if (!arr.is_array()) throw ValidationError(std::string("field '") + field + "' must be an array");
      PreferenceSet prefs;
      prefs.party = party;
      for (const auto& v : arr) prefs.voters.push_back(vector_from_json(v, field));
      return prefs;
    };
    return aggregate(load(j.at("voters_a"), Party::A, "voters_a"),
                     load(j.at("voters_b"), Party::B, "voters_b"), rescale);
  }
  throw ValidationError("instance needs 'q_a'/'q_b' or 'voters_a'/'voters_b'");
}

std::vector<GameInstance> instances_from_json(const json& j, bool rescale) {
  std::vector<GameInstance> out;
  const json* arr = &j;
  if (j.is_object() && j.contains("instances")) arr = &j.at("instances");
  if (arr->is_array()) {
    for (const auto& item : *arr) out.push_back(instance_from_json(item, rescale));
  } else {
    out.push_back(instance_from_json(*arr, rescale));
  }
  if (out.empty()) throw ValidationError("instance file contains no instances");
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename output into '" + path.string() + "': " + ec.message());
  }
}

}  // namespace policygame
