#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nhk/suites.hpp"

namespace nhk {

struct RunConfig {
  std::string command;
  std::string system;
  std::string system_file;
  std::string config_file;
  Params params;
  std::string out_dir = "nhk-out";
  std::uint64_t seed = 1;
  int samples = 200;
  int fiber_draws = 20;
  IntegratorConfig integrator{Scheme::RK4, 1e-3, 5.0};
  std::string mode = "full";  // full | reduced | hamiltonized
  std::optional<double> energy;
  Constants constants;
  int branch = +1;
  std::optional<Vec> q0;
  std::optional<Vec> p0;  // reduced momentum

  nlohmann::json to_json() const;
};

/// Parses argv (and the --config file it names). Throws Error(Configuration).
RunConfig parse_args(int argc, const char* const* argv);

/// Executes a configured run. Returns 0 when every check passes, 1 on a check
/// failure or runtime error, 2 on a configuration error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhk
