#pragma once

// Internal helpers shared by the JSON writers. Not installed.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sdeclass/scores.hpp"

namespace sdeclass {

nlohmann::json score_params_json(const ScoreParams& params);
ScoreParams score_params_from(const nlohmann::json& doc);

inline void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + file.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sdeclass
