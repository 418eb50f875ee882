#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nhk/sampling.hpp"
#include "nhk/second_stage.hpp"

namespace nhk {

using Params = std::map<std::string, double>;
using Constants = std::map<std::string, double>;

/// Closed forms transcribed from the worked examples, for cross-checking the
/// numerically assembled objects. Momentum arguments are in the example's own
/// fiber coordinates; see SystemBundle::display_scale.
struct Oracles {
  std::function<Vec(const Vec& q, const Vec& pbar)> hl_m;
  std::function<double(const Vec& qbar, const Vec& pbar)> reduced_hamiltonian;
  std::function<Mat(const Vec& qbar, const Vec& pbar)> xi;
  std::function<double(const Vec& qbar, const Vec& pbar)> chaplygin_hamiltonian;
  std::function<Vec(const Vec& q, const Vec& v)> connection;
  std::function<Vec(const Vec& qbar, const Vec& vbar)> mechanical_connection;
  std::function<Vec(const Vec& qbar)> alpha_mu;
  std::function<double(const Vec& qt, const Vec& pt)> tilde_hamiltonian;
  std::function<Mat(const Vec& qt, const Vec& pt)> tilde_xi;
  std::function<double(const Vec& qt, const Vec& pt)> second_chaplygin_hamiltonian;
  std::function<Vec(const Vec& q, double energy, const Constants& c)> gamma;
};

struct SystemBundle {
  std::string name;
  Params params;
  ChartSystem system;
  ReducedSystem reduced;
  std::optional<Multiplier> multiplier;
  std::optional<TildeSystem> tilde;
  DomainBox domain;        // over q
  DomainBox tilde_domain;  // over q̃, when a second stage exists
  double momentum_bound = 2.0;
  /// Maps the example's displayed reduced momenta to the reduced momenta of
  /// the construction (identity unless the example rescales the fiber).
  std::function<Mat(const Vec& qbar)> display_scale;
  Oracles oracles;

  DomainBox reduced_domain() const;
};

const std::vector<std::string>& builtin_names();
Params default_params(const std::string& name);

/// Builds a registered system; unknown parameter keys or non-physical values
/// raise InvalidParameters.
SystemBundle build(const std::string& name, const Params& overrides = {});

}  // namespace nhk
