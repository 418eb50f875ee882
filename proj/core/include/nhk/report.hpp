#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhk/full_dynamics.hpp"

namespace nhk {

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string grid_spec;
};

struct Report {
  std::vector<Check> checks;

  /// Records residual <= tolerance; a non-finite residual fails.
  Check& add(std::string name, double residual, double tolerance, std::string grid_spec = {});
  void append(const Report& other);
  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Shortest decimal form that round-trips; keeps exported files byte-stable.
std::string format_double(double x);

/// Header: t, q…, p…, H, λ…, constraint residuals.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& momentum_names = {});

/// Hex SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(const std::string& content);

}  // namespace nhk
