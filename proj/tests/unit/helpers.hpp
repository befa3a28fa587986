#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "instrument.hpp"
#include "interp.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "sema.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

inline std::vector<std::string> fixture_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(FIXTURES_DIR))
    if (e.path().extension() == ".mf") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline driftlens::SourceUnit analyzed(const std::string& text) {
  driftlens::SourceUnit u = driftlens::parse_source(text);
  driftlens::analyze(u);
  return u;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(f)),
                std::istreambuf_iterator<char>());
  return s;
}

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace testutil
