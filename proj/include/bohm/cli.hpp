#pragma once
#include <ostream>
#include <string>

namespace bohm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_nonconvergence = 3;

struct Options {
  std::string config;  // path to the JSON run config
  std::string out;     // output directory, created if missing
  bool quick = false;  // merge the config's "quick" block over it
  unsigned threads = 1;
};

// Runs one of modes, explode, nearnr, spin. Returns the process exit code;
// diagnostics and warnings go to err.
int run(const std::string& command, const Options& opt, std::ostream& err);

}  // namespace bohm::cli
