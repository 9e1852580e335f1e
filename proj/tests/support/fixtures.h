#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef IPM_FIXTURE_DIR
#error "IPM_FIXTURE_DIR must be defined"
#endif

namespace ipm::testing {

inline std::string fixture_path(const std::string& name) { return std::string(IPM_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ipm::testing
