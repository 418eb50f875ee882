#include "nhk/report.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace nhk {

Check& Report::add(std::string name, double residual, double tolerance, std::string grid_spec) {
  const bool pass = std::isfinite(residual) && residual <= tolerance;
  checks.push_back({std::move(name), residual, tolerance, pass, std::move(grid_spec)});
  return checks.back();
}

void Report::append(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j;
    j["check"] = c.name;
    j["residual"] = std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json(nullptr);
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    j["grid_spec"] = c.grid_spec;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& momentum_names) {
  const auto& names = traj.coord_names;
  const std::size_t m = traj.lambda.empty() ? 0 : static_cast<std::size_t>(traj.lambda.front().size());
  const std::size_t c = traj.constraint.empty() ? 0 : static_cast<std::size_t>(traj.constraint.front().size());
  out << "t";
  for (const auto& n : names) out << ',' << n;
  if (momentum_names.empty())
    for (const auto& n : names) out << ",p_" << n;
  else
    for (const auto& n : momentum_names) out << ',' << n;
  out << ",H";
  for (std::size_t s = 0; s < m; ++s) out << ",lambda_" << s + 1;
  for (std::size_t s = 0; s < c; ++s) out << ",omega_" << s + 1;
  out << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < traj.states[k].q.size(); ++i) out << ',' << format_double(traj.states[k].q[i]);
    for (Eigen::Index i = 0; i < traj.states[k].p.size(); ++i) out << ',' << format_double(traj.states[k].p[i]);
    out << ',' << format_double(traj.energy[k]);
    for (Eigen::Index i = 0; i < traj.lambda[k].size(); ++i) out << ',' << format_double(traj.lambda[k][i]);
    for (Eigen::Index i = 0; i < traj.constraint[k].size(); ++i) out << ',' << format_double(traj.constraint[k][i]);
    out << '\n';
  }
}

std::string git_blob_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1)
    fail(ErrorKind::Configuration, "SHA-1 digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace nhk
