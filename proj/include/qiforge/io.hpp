#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "qiforge/errors.hpp"

namespace qiforge {

/// Quotes a CSV field when it contains a comma, quote or newline.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw spec_error("cannot open " + path.string() + " for writing");
  out << contents;
}

}  // namespace qiforge
