#include "nhk/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nhk/system_io.hpp"

namespace nhk {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::Configuration, what); }

Vec parse_list(const std::string& text) {
  std::vector<double> xs;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      config_error("not a number: '" + item + "'");
    }
  }
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string scheme_name(Scheme s) { return s == Scheme::RK4 ? "rk4" : "rk45"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4") return Scheme::RK4;
  if (s == "rk45") return Scheme::RK45;
  config_error("unknown scheme '" + s + "' (rk4 | rk45)");
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    config_error(std::string("config file is not valid JSON: ") + e.what());
  }
  try {
    if (j.contains("system")) c.system = j["system"].get<std::string>();
    if (j.contains("system_file")) c.system_file = j["system_file"].get<std::string>();
    if (j.contains("params")) c.params = j["params"].get<Params>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("samples")) c.samples = j["samples"].get<int>();
    if (j.contains("fiber_draws")) c.fiber_draws = j["fiber_draws"].get<int>();
    if (j.contains("t_end")) c.integrator.t_end = j["t_end"].get<double>();
    if (j.contains("dt")) c.integrator.dt = j["dt"].get<double>();
    if (j.contains("scheme")) c.integrator.scheme = parse_scheme(j["scheme"].get<std::string>());
    if (j.contains("projection")) c.integrator.projection = j["projection"].get<bool>();
    if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
    if (j.contains("energy")) c.energy = j["energy"].get<double>();
    if (j.contains("constants")) c.constants = j["constants"].get<Constants>();
    if (j.contains("branch")) c.branch = j["branch"].get<int>();
    // q0/p0 may be arrays or comma-separated strings like on the command line
    auto list = [](const json& v) -> Vec {
      if (v.is_string()) return parse_list(v.get<std::string>());
      const auto xs = v.get<std::vector<double>>();
      return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    };
    if (j.contains("q0")) c.q0 = list(j["q0"]);
    if (j.contains("p0")) c.p0 = list(j["p0"]);
  } catch (const json::exception& e) {
    config_error(std::string("config file: ") + e.what());
  }
}

void validate(const RunConfig& c) {
  if (c.system.empty() == c.system_file.empty())
    config_error("exactly one of --system and --system-file is required");
  if (c.samples < 1 || c.fiber_draws < 1) config_error("samples and fiber draws must be positive");
  if (!(c.integrator.dt > 0.0)) config_error("dt must be positive");
  if (!(c.integrator.t_end >= 0.0)) config_error("t_end must be non-negative");
  if (c.mode != "full" && c.mode != "reduced" && c.mode != "hamiltonized")
    config_error("mode must be full, reduced or hamiltonized");
  if (c.branch != 1 && c.branch != -1) config_error("branch must be +1 or -1");
}

SystemBundle load(const RunConfig& c) {
  if (!c.system_file.empty()) return load_system_file(c.system_file, c.params);
  return build(c.system, c.params);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Configuration, "cannot write '" + path.string() + "'");
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json manifest(const RunConfig& c, const SystemBundle& b, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "nhk 0.1.0";
  m["command"] = c.command;
  m["system"] = b.name;
  m["params"] = b.params;
  m["config"] = c.to_json();
  std::string inputs = m["config"].dump() + json(b.params).dump();
  if (!c.system_file.empty()) inputs += read_file(c.system_file);
  m["input_hash"] = git_blob_hash(inputs);
  m["outputs"] = outputs;
  if (b.name == "snakeboard")
    m["notes"] = "default inertia parameters chosen to satisfy J + J0 + 2 J1 = m r^2";
  return m;
}

PhasePoint initial_state(const RunConfig& c, const SystemBundle& b) {
  PhasePoint x = default_initial_state(b);
  if (c.q0) {
    if (c.q0->size() != b.system.dim()) config_error("q0 must have one entry per coordinate");
    x.q = *c.q0;
  }
  Vec pbar = default_reduced_momentum(b);
  if (c.p0) {
    if (c.p0->size() != b.reduced.dim()) config_error("p0 is the reduced momentum (one entry per reduced coordinate)");
    pbar = *c.p0;
  }
  if (c.q0 || c.p0) x.p = hl_m(b.reduced, x.q, pbar);
  return x;
}

Trajectory reduced_run(const RunConfig& c, const SystemBundle& b, const PhasePoint& x0, Report& rep) {
  const ReducedSystem& r = b.reduced;
  const int nb = r.dim();
  Vec qb = r.project(x0.q);
  Vec pb = reduce_momentum(r, x0.q, x0.p);
  Trajectory traj;
  OdeRhs rhs;
  std::function<double(const Vec&)> energy;
  std::vector<std::string> names;

  if (c.mode == "reduced") {
    traj.coord_names = r.coords();
    rhs = [&](const Vec& z) { return stack(reduced_vector_field(r, z.head(nb), z.tail(nb))); };
    energy = [&](const Vec& z) { return reduced_hamiltonian(r, z.head(nb), z.tail(nb)); };
  } else if (b.tilde) {
    const TildeSystem& t = *b.tilde;
    const TildePoint tp = phi_mu(t.setup, qb, pb);
    const int nt = t.setup.tilde_dim();
    traj.coord_names = t.setup.tilde_coords();
    qb = tp.q;
    pb = tp.p * t.f_mu(tp.q);
    auto hc = [&t](const Vec& q, const Vec& p) { return second_chaplygin_hamiltonian(t, q, p); };
    rhs = [hc, nt](const Vec& z) { return stack(canonical_field(hc, z.head(nt), z.tail(nt))); };
    energy = [hc, nt](const Vec& z) { return hc(z.head(nt), z.tail(nt)); };
  } else {
    if (!b.multiplier) config_error(b.name + " has no Hamiltonizing multiplier");
    const Multiplier& f = *b.multiplier;
    traj.coord_names = r.coords();
    pb = psi_f(f, qb, pb, Direction::Forward);
    rhs = [&r, &f, nb](const Vec& z) { return stack(hamiltonized_field(r, f, z.head(nb), z.tail(nb))); };
    energy = [&r, &f, nb](const Vec& z) { return chaplygin_hamiltonian(r, f, z.head(nb), z.tail(nb)); };
  }

  const int d = static_cast<int>(qb.size());
  Vec z0(2 * d);
  z0 << qb, pb;
  solve_ode(rhs, z0, c.integrator.ode(), [&](double t, const Vec& z) {
    traj.times.push_back(t);
    traj.states.push_back({z.head(d), z.tail(d)});
    traj.energy.push_back(energy(z));
    traj.lambda.push_back(Vec(0));
    traj.constraint.push_back(Vec(0));
  });
  double drift = 0.0;
  for (double e : traj.energy) drift = std::max(drift, std::abs(e - traj.energy.front()));
  std::ostringstream spec;
  spec << c.mode << " run, t_end " << c.integrator.t_end << ", dt " << c.integrator.dt;
  rep.add("energy_drift", drift, 1e-7, spec.str());
  if (c.mode == "reduced" && b.tilde) {
    double jk = 0.0;
    const auto& s = b.tilde->setup;
    for (const auto& st : traj.states)
      jk = std::max(jk, (k_momentum(s, st.q, st.p) - k_momentum(s, qb, pb)).cwiseAbs().maxCoeff());
    rep.add("k_momentum_drift", jk, 1e-8, spec.str());
  }
  return traj;
}

int simulate(const RunConfig& c, const SystemBundle& b, std::ostream& out) {
  const PhasePoint x0 = initial_state(c, b);
  Report rep;
  Trajectory traj;
  if (c.mode == "full") {
    traj = integrate(b.system, x0, c.integrator);
    const Drift d = monitor(traj, b.system);
    std::ostringstream spec;
    spec << "full run, t_end " << c.integrator.t_end << ", dt " << c.integrator.dt;
    rep.add("energy_drift", d.energy, 1e-7, spec.str());
    rep.add("constraint_drift", d.constraint, 1e-7, spec.str());
    rep.add("m_membership_drift", d.m_membership, 1e-7, spec.str());
  } else {
    traj = reduced_run(c, b, x0, rep);
  }
  const fs::path dir(c.out_dir);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_file(dir / "trajectory.csv", csv.str());
  json r{{"command", "simulate"}, {"system", b.name}, {"mode", c.mode}, {"samples", traj.times.size()},
         {"checks", rep.to_json()}, {"pass", rep.all_pass()}};
  if (c.mode == "hamiltonized") r["time"] = "reparameterized (dt/dtau = 1/f)";
  write_file(dir / "report.json", r.dump(2) + "\n");
  write_file(dir / "manifest.json", manifest(c, b, {"trajectory.csv", "report.json"}).dump(2) + "\n");
  out << r.dump(2) << "\n";
  return rep.all_pass() ? 0 : 1;
}

SuiteConfig suite_config(const RunConfig& c) { return {c.seed, c.samples, c.fiber_draws}; }

int verify(const RunConfig& c, const SystemBundle& b, std::ostream& out) {
  const Report rep = verify_suite(b, suite_config(c));
  json r{{"command", "verify"}, {"system", b.name}, {"seed", c.seed}, {"checks", rep.to_json()},
         {"pass", rep.all_pass()}};
  const fs::path dir(c.out_dir);
  write_file(dir / "report.json", r.dump(2) + "\n");
  write_file(dir / "manifest.json", manifest(c, b, {"report.json"}).dump(2) + "\n");
  out << r.dump(2) << "\n";
  return rep.all_pass() ? 0 : 1;
}

json hj_json(const SystemBundle& b, const HJOutcome& h) {
  return {{"system", b.name},
          {"energy", h.solution.energy},
          {"constants", h.solution.constants},
          {"checks", h.report.to_json()},
          {"pass", h.report.all_pass()}};
}

int hj(const RunConfig& c, const SystemBundle& b, std::ostream& out) {
  const HJOutcome h = hj_suite(b, HJRequest{c.energy, c.constants, c.branch}, suite_config(c));
  json r = hj_json(b, h);
  r["command"] = "hj";

  std::ostringstream csv;
  for (const auto& n : b.system.coords) csv << n << ',';
  for (std::size_t i = 0; i < b.system.coords.size(); ++i)
    csv << "gamma_" << b.system.coords[i] << (i + 1 < b.system.coords.size() ? "," : "\n");
  Sampler rng(c.seed);
  for (const Vec& q : b.domain.sample(rng, c.samples)) {
    const Vec g = h.gamma(q);
    for (Eigen::Index i = 0; i < q.size(); ++i) csv << format_double(q[i]) << ',';
    for (Eigen::Index i = 0; i < g.size(); ++i) csv << format_double(g[i]) << (i + 1 < g.size() ? "," : "\n");
  }
  const fs::path dir(c.out_dir);
  write_file(dir / "hj_report.json", r.dump(2) + "\n");
  write_file(dir / "gamma.csv", csv.str());
  write_file(dir / "manifest.json", manifest(c, b, {"hj_report.json", "gamma.csv"}).dump(2) + "\n");
  out << r.dump(2) << "\n";
  return h.report.all_pass() ? 0 : 1;
}

int aggregate(const RunConfig& c, const SystemBundle& b, std::ostream& out) {
  const SuiteConfig sc = suite_config(c);
  const Report v = verify_suite(b, sc);
  json r{{"command", "report"}, {"system", b.name}, {"seed", c.seed}};
  r["verify"] = {{"checks", v.to_json()}, {"pass", v.all_pass()}};
  bool pass = v.all_pass();
  if (b.tilde || b.multiplier) {
    try {
      const HJOutcome h = hj_suite(b, HJRequest{c.energy, c.constants, c.branch}, sc);
      r["hj"] = hj_json(b, h);
      pass = pass && h.report.all_pass();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidConstants) throw;
      r["hj"] = {{"skipped", e.what()}};
    }
  }
  const Report cons = conservation_suite(b, initial_state(c, b), c.integrator);
  r["conservation"] = {{"checks", cons.to_json()}, {"pass", cons.all_pass()}};
  pass = pass && cons.all_pass();
  r["pass"] = pass;
  const fs::path dir(c.out_dir);
  write_file(dir / "report.json", r.dump(2) + "\n");
  write_file(dir / "manifest.json", manifest(c, b, {"report.json"}).dump(2) + "\n");
  out << r.dump(2) << "\n";
  return pass ? 0 : 1;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Configuration:
    case ErrorKind::InvalidParameters:
    case ErrorKind::InvalidConstants:
      return 2;
    default:
      return 1;
  }
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["command"] = command;
  if (!system.empty()) j["system"] = system;
  if (!system_file.empty()) j["system_file"] = system_file;
  j["params"] = params;
  j["seed"] = seed;
  j["samples"] = samples;
  j["fiber_draws"] = fiber_draws;
  j["t_end"] = integrator.t_end;
  j["dt"] = integrator.dt;
  j["scheme"] = scheme_name(integrator.scheme);
  j["projection"] = integrator.projection;
  j["mode"] = mode;
  if (energy) j["energy"] = *energy;
  j["constants"] = constants;
  j["branch"] = branch;
  if (q0) j["q0"] = vec_json(*q0);
  if (p0) j["p0"] = vec_json(*p0);
  return j;
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Chaplygin reduction, Hamiltonization and Hamilton-Jacobi checks", "nhk"};
  app.require_subcommand(1);
  RunConfig c;
  std::vector<std::string> params;
  std::string scheme = "rk4", q0, p0;
  double gamma_phi0 = 0, gamma_psi0 = 0, mu_psi = 0, energy = 0;

  for (const char* name : {"simulate", "verify", "hj", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--system", c.system, "built-in system: vrd | knife-edge | snakeboard");
    sub->add_option("--system-file", c.system_file, "JSON system definition");
    sub->add_option("--param", params, "parameter override k=v (repeatable)");
    sub->add_option("--config", c.config_file, "JSON run configuration");
    sub->add_option("--out", c.out_dir, "output directory");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--samples", c.samples, "base sample points");
    sub->add_option("--fiber-draws", c.fiber_draws, "momentum/tangent draws per point");
    sub->add_option("--t-end", c.integrator.t_end, "integration end time");
    sub->add_option("--dt", c.integrator.dt, "time step");
    sub->add_option("--scheme", scheme, "rk4 | rk45");
    sub->add_flag("--project", c.integrator.projection, "re-project momenta onto M after each step");
    sub->add_option("--mode", c.mode, "full | reduced | hamiltonized");
    sub->add_option("--q0", q0, "initial configuration, comma separated");
    sub->add_option("--p0", p0, "initial reduced momentum, comma separated");
    sub->add_option("--energy", energy, "energy level E");
    sub->add_option("--gamma-phi0", gamma_phi0, "separation constant gamma_phi^0");
    sub->add_option("--gamma-psi0", gamma_psi0, "separation constant gamma_psi^0");
    sub->add_option("--mu-psi", mu_psi, "second-stage momentum level");
    sub->add_option("--branch", c.branch, "square-root branch, +1 or -1");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) throw;  // --help
    config_error(e.what());
  }
  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();

  if (!c.config_file.empty()) {
    RunConfig file = c;
    apply_config_file(file, c.config_file);
    // Flags given on the command line win over the file.
    auto given = [&](const char* opt) { return sub->count(opt) > 0; };
    if (!given("--system")) c.system = file.system;
    if (!given("--system-file")) c.system_file = file.system_file;
    if (!given("--out")) c.out_dir = file.out_dir;
    if (!given("--seed")) c.seed = file.seed;
    if (!given("--samples")) c.samples = file.samples;
    if (!given("--fiber-draws")) c.fiber_draws = file.fiber_draws;
    if (!given("--t-end")) c.integrator.t_end = file.integrator.t_end;
    if (!given("--dt")) c.integrator.dt = file.integrator.dt;
    if (!given("--scheme")) scheme = scheme_name(file.integrator.scheme);
    if (!given("--project")) c.integrator.projection = file.integrator.projection;
    if (!given("--mode")) c.mode = file.mode;
    if (!given("--branch")) c.branch = file.branch;
    c.params = file.params;
    c.constants = file.constants;
    c.energy = file.energy;
    c.q0 = file.q0;
    c.p0 = file.p0;
  }
  c.integrator.scheme = parse_scheme(scheme);
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) config_error("--param expects k=v, got '" + kv + "'");
    const Vec v = parse_list(kv.substr(eq + 1));
    if (v.size() != 1) config_error("--param expects a single number");
    c.params[kv.substr(0, eq)] = v[0];
  }
  if (sub->count("--energy")) c.energy = energy;
  if (sub->count("--gamma-phi0")) c.constants["gamma_phi0"] = gamma_phi0;
  if (sub->count("--gamma-psi0")) c.constants["gamma_psi0"] = gamma_psi0;
  if (sub->count("--mu-psi")) {
    c.constants["mu_psi"] = mu_psi;
    c.params["mu"] = mu_psi;
  }
  if (sub->count("--q0")) c.q0 = parse_list(q0);
  if (sub->count("--p0")) c.p0 = parse_list(p0);
  validate(c);
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    const SystemBundle b = load(c);
    fs::create_directories(c.out_dir);
    if (c.command == "simulate") return simulate(c, b, out);
    if (c.command == "verify") return verify(c, b, out);
    if (c.command == "hj") return hj(c, b, out);
    if (c.command == "report") return aggregate(c, b, out);
    config_error("unknown command '" + c.command + "'");
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.kind())), e.what());
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    report_error(err, "Configuration", e.what());
    return 2;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_args(argc, argv);
  } catch (const CLI::ParseError& e) {
    out << "usage: nhk <simulate|verify|hj|report> --system NAME [--param k=v]... [--config FILE] "
           "[--out DIR] [--seed N]\n";
    return 0;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.kind())), e.what());
    return exit_code(e.kind());
  }
  return run(c, out, err);
}

}  // namespace nhk
