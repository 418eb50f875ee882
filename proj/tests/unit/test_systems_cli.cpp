#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nhk/cli.hpp"
#include "nhk/system_io.hpp"
#include "support.hpp"

using namespace nhk;
using namespace nhk::test;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("NHK_TEST_TMP");
  fs::path dir = fs::path(env ? env : fs::temp_directory_path().string()) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nhk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Configuration;
}

json term(double coef, std::vector<json> factors = {}) { return {{"coef", coef}, {"factors", factors}}; }
json fac(const char* fn, const char* coord) { return {{"fn", fn}, {"coord", coord}}; }

// The knife edge written out as a term table.
json custom_knife() {
  json j;
  j["name"] = "custom-knife";
  j["coords"] = {"phi", "x", "y"};
  j["metric"] = {{{"i", "phi"}, {"j", "phi"}, {"terms", 1.0}},
                 {{"i", "x"}, {"j", "x"}, {"terms", 1.0}},
                 {{"i", "y"}, {"j", "y"}, {"terms", 1.0}}};
  j["potential"] = json::array({term(-9.81 * 0.5, {fac("id", "x")})});
  j["constraints"] = {{{{"j", "x"}, {"terms", json::array({term(-1, {fac("sin", "phi")})})}},
                       {{"j", "y"}, {"terms", json::array({term(1, {fac("cos", "phi")})})}}}};
  j["group"] = {{"translated", {"y"}}, {"labels", {"y"}}};
  j["multiplier"] = json::array({term(1, {fac("cos", "phi")})});
  j["domain"] = {{"lo", {0.15, 0.0, -1.0}}, {"hi", {pi / 2 - 0.15, 2.0, 1.0}}};
  return j;
}

}  // namespace

TEST_CASE("registry and parameter validation") {
  CHECK(builtin_names() == std::vector<std::string>{"vrd", "knife-edge", "snakeboard"});
  for (const auto& name : builtin_names()) CHECK(build(name).name == name);
  CHECK(kind_of([] { build("vrd", {{"nope", 1.0}}); }) == ErrorKind::InvalidParameters);
  CHECK(kind_of([] { build("vrd", {{"m", -1.0}}); }) == ErrorKind::InvalidParameters);
  CHECK(kind_of([] { build("vrd", {{"R", std::nan("")}}); }) == ErrorKind::InvalidParameters);
  CHECK(kind_of([] { build("snakeboard", {{"J", 1.0}}); }) == ErrorKind::InvalidParameters);
  CHECK_THROWS_AS(build("unicycle"), Error);
  // the relation holds again when every inertia moves together
  CHECK_NOTHROW(build("snakeboard", {{"m", 3.0}, {"J", 1.5}}));
}

TEST_CASE("format_double and git blob hash") {
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678, 0.0}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("trajectory csv header") {
  const auto b = build("vrd");
  const Trajectory t = integrate(b.system, default_initial_state(b), IntegratorConfig{Scheme::RK4, 0.1, 0.2});
  std::ostringstream s;
  write_trajectory_csv(s, t);
  std::istringstream in(s.str());
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "t,phi,x,y,psi,p_phi,p_x,p_y,p_psi,H,lambda_1,lambda_2,omega_1,omega_2");
  int rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("report json") {
  Report r;
  r.add("small", 1e-12, 1e-10, "grid");
  r.add("nan", std::nan(""), 1.0);
  CHECK_FALSE(r.all_pass());
  const json j = r.to_json();
  CHECK(j.dump().find("small") != std::string::npos);
  Report ok;
  ok.add("a", 0.0, 0.0);
  CHECK(ok.all_pass());
}

TEST_CASE("system loader") {
  SUBCASE("builtin reference") {
    const SystemBundle b = load_system(json{{"builtin", "knife-edge"}, {"params", {{"m", 2.0}}}});
    CHECK(b.params.at("m") == 2.0);
    CHECK(load_system(json{{"builtin", "vrd"}}, {{"R", 3.0}}).params.at("R") == 3.0);
  }
  SUBCASE("custom knife edge agrees with the built-in one") {
    const SystemBundle c = load_system(custom_knife());
    const SystemBundle b = build("knife-edge");
    Gen gen(1);
    Sup h, x, f;
    for (int i = 0; i < 50; ++i) {
      const Vec qb = v({gen.real(0.2, 1.3), gen.real(0, 2)});
      const Vec pb = gen.vec(2, -2, 2);
      h(reduced_hamiltonian(c.reduced, qb, pb) - reduced_hamiltonian(b.reduced, qb, pb));
      x(max_abs(Mat(c.reduced.xi_matrix(qb, pb) - b.reduced.xi_matrix(qb, pb))));
      f(max_abs(Vec(stack(reduced_vector_field(c.reduced, qb, pb)) - stack(reduced_vector_field(b.reduced, qb, pb)))));
      CHECK((*c.multiplier)(qb) == doctest::Approx(std::cos(qb[0])).epsilon(1e-14));
    }
    CHECK(h.value < 1e-12);
    CHECK(x.value < 1e-7);
    CHECK(f.value < 1e-7);
  }
  SUBCASE("bad definitions") {
    CHECK(kind_of([] { load_system(json{{"coords", json::array()}}); }) == ErrorKind::Configuration);
    json j = custom_knife();
    j["group"]["translated"] = json::array();
    CHECK(kind_of([&] { load_system(j); }) == ErrorKind::Configuration);
    json k = custom_knife();
    k.erase("metric");
    CHECK(kind_of([&] { load_system(k); }) == ErrorKind::Configuration);
    CHECK(kind_of([] { load_system(json{{"builtin", "vrd"}, {"params", {{"zzz", 1.0}}}}); }) ==
          ErrorKind::InvalidParameters);
    CHECK(kind_of([&] { load_system(custom_knife(), {{"m", 1.0}}); }) == ErrorKind::Configuration);
    CHECK(kind_of([] { load_system_file("/nonexistent/system.json"); }) == ErrorKind::Configuration);
  }
}

TEST_CASE("argument parsing") {
  const char* argv[] = {"nhk", "simulate", "--system", "vrd", "--param", "m=2", "--t-end", "1.5", "--q0", "0,1,2,3"};
  const RunConfig c = parse_args(10, argv);
  CHECK(c.command == "simulate");
  CHECK(c.params.at("m") == 2.0);
  CHECK(c.integrator.t_end == 1.5);
  REQUIRE(c.q0);
  CHECK(max_abs(Vec(*c.q0 - v({0, 1, 2, 3}))) == 0.0);

  const char* bad[] = {"nhk", "verify", "--system", "vrd", "--param", "m"};
  CHECK(kind_of([&] { parse_args(6, bad); }) == ErrorKind::Configuration);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(cli({"verify", "--system", "knife-edge", "--samples", "10", "--fiber-draws", "3", "--out", (dir / "a").string()})
            .code == 0);
  const Outcome bad_param = cli({"verify", "--system", "vrd", "--param", "nope=1", "--out", (dir / "b").string()});
  CHECK(bad_param.code == 2);
  CHECK(json::parse(bad_param.err).dump().find("InvalidParameters") != std::string::npos);
  CHECK(cli({"verify", "--out", (dir / "c").string()}).code == 2);
  CHECK(cli({"hj", "--system", "vrd", "--energy", "7", "--out", (dir / "d").string()}).code == 2);
  // starting on the knife edge's singular heading is a runtime failure
  CHECK(cli({"simulate", "--system", "knife-edge", "--q0", "1.5707963267948966,0,0", "--out", (dir / "e").string()})
            .code == 1);
}

TEST_CASE("simulate with t_end = 0 writes one row") {
  const fs::path dir = scratch("t0");
  REQUIRE(cli({"simulate", "--system", "vrd", "--t-end", "0", "--out", dir.string()}).code == 0);
  std::istringstream in(slurp(dir / "trajectory.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path dir = scratch("determinism");
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"trajectory.csv", {"simulate", "--system", "snakeboard", "--t-end", "0.5"}},
      {"report.json", {"verify", "--system", "knife-edge", "--samples", "15", "--fiber-draws", "3"}},
      {"gamma.csv", {"hj", "--system", "snakeboard", "--samples", "15"}},
  };
  for (const auto& [file, args] : runs) {
    CAPTURE(file);
    auto with_out = args;
    with_out.push_back("--out");
    with_out.push_back(dir.string());
    REQUIRE(cli(with_out).code == 0);
    const std::string first = slurp(dir / file), manifest = slurp(dir / "manifest.json");
    REQUIRE(cli(with_out).code == 0);
    CHECK(slurp(dir / file) == first);
    CHECK(slurp(dir / "manifest.json") == manifest);
    CHECK(!first.empty());
  }
}

TEST_CASE("config file with command-line overrides") {
  const fs::path dir = scratch("config");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << json{{"system", "knife-edge"}, {"t_end", 0.3}, {"dt", 0.01}, {"q0", "0.5,1,0"},
                             {"p0", {0.1, 0.2}}, {"seed", 9}}
                            .dump();
  const std::string cfgs = cfg.string();
  const char* argv[] = {"nhk", "simulate", "--config", cfgs.c_str(), "--dt", "0.05"};
  const RunConfig c = parse_args(6, argv);
  CHECK(c.system == "knife-edge");
  CHECK(c.integrator.t_end == 0.3);
  CHECK(c.integrator.dt == 0.05);
  CHECK(c.seed == 9);
  REQUIRE(c.q0);
  REQUIRE(c.p0);
  CHECK(max_abs(Vec(*c.q0 - v({0.5, 1, 0}))) == 0.0);
  CHECK(max_abs(Vec(*c.p0 - v({0.1, 0.2}))) == 0.0);

  std::ofstream(dir / "broken.json") << "{ not json";
  const std::string broken = (dir / "broken.json").string();
  const char* bad[] = {"nhk", "simulate", "--config", broken.c_str()};
  CHECK(kind_of([&] { parse_args(4, bad); }) == ErrorKind::Configuration);
}

TEST_CASE("custom system file through the CLI") {
  const fs::path dir = scratch("custom");
  std::ofstream(dir / "knife.json") << custom_knife().dump(2);
  const Outcome o = cli({"simulate", "--system-file", (dir / "knife.json").string(), "--q0", "0.5,1,0", "--p0",
                         "0.1,0.2", "--t-end", "0.5", "--out", (dir / "out").string()});
  CHECK(o.code == 0);
  CHECK(fs::exists(dir / "out" / "trajectory.csv"));
}
