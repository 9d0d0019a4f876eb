#pragma once

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>

// Builds the mining fixture repository once per name under the work
// directory.
inline std::filesystem::path fixture_repo(const std::string& name = "fixture_repo") {
  const auto dir = std::filesystem::path(CCDRIFT_WORK_DIR) / name;
  static std::string built;
  if (built.find("|" + name + "|") == std::string::npos) {
    const std::string cmd = "sh '" CCDRIFT_FIXTURE_DIR "/make_repo.sh' '" + dir.string() + "' >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) throw std::runtime_error("fixture script failed");
    built += "|" + name + "|";
  }
  return dir;
}
