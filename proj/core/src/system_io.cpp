#include "nhk/system_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace nhk {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::Configuration, "system file: " + what); }

int resolve_coord(const json& c, const std::vector<std::string>& coords) {
  if (c.is_number_integer()) {
    const int i = c.get<int>();
    if (i < 0 || i >= static_cast<int>(coords.size())) bad("coordinate index out of range");
    return i;
  }
  const auto name = c.get<std::string>();
  const auto it = std::find(coords.begin(), coords.end(), name);
  if (it == coords.end()) bad("unknown coordinate '" + name + "'");
  return static_cast<int>(it - coords.begin());
}

Vec vector_of(const json& j) {
  const auto xs = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

DomainBox parse_box(const json& j, int dim, const std::string& what) {
  DomainBox b{vector_of(j.at("lo")), vector_of(j.at("hi")), {}, what};
  if (b.lo.size() != dim || b.hi.size() != dim) bad(what + " bounds have the wrong length");
  if ((b.hi - b.lo).minCoeff() < 0) bad(what + " has lo > hi");
  return b;
}

}  // namespace

Expression Expression::parse(const json& j, const std::vector<std::string>& coords) {
  if (j.is_number()) return Expression({Term{j.get<double>(), {}}});
  if (!j.is_array()) bad("expression must be a number or a list of terms");
  std::vector<Term> terms;
  for (const auto& t : j) {
    Term term;
    term.coef = t.value("coef", 1.0);
    for (const auto& f : t.value("factors", json::array())) {
      Factor fac;
      fac.pow = f.value("pow", 1.0);
      if (f.contains("expr")) {
        fac.fn = Factor::Fn::Nested;
        fac.nested = parse(f.at("expr"), coords);
      } else {
        const auto fn = f.value("fn", std::string("id"));
        if (fn == "id") fac.fn = Factor::Fn::Id;
        else if (fn == "sin") fac.fn = Factor::Fn::Sin;
        else if (fn == "cos") fac.fn = Factor::Fn::Cos;
        else if (fn == "tan") fac.fn = Factor::Fn::Tan;
        else if (fn == "cot") fac.fn = Factor::Fn::Cot;
        else bad("unknown function '" + fn + "'");
        fac.coord = resolve_coord(f.at("coord"), coords);
      }
      term.factors.push_back(std::move(fac));
    }
    terms.push_back(std::move(term));
  }
  return Expression(std::move(terms));
}

double Expression::operator()(const Vec& q) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (const auto& f : t.factors) {
      double base = 0.0;
      switch (f.fn) {
        case Factor::Fn::Id: base = q[f.coord]; break;
        case Factor::Fn::Sin: base = std::sin(q[f.coord]); break;
        case Factor::Fn::Cos: base = std::cos(q[f.coord]); break;
        case Factor::Fn::Tan: base = std::tan(q[f.coord]); break;
        case Factor::Fn::Cot: base = 1.0 / std::tan(q[f.coord]); break;
        case Factor::Fn::Nested: base = f.nested(q); break;
      }
      v *= f.pow == 1.0 ? base : std::pow(base, f.pow);
    }
    total += v;
  }
  return total;
}

SystemBundle load_system(const json& j, const Params& overrides) {
  try {
    if (j.contains("builtin")) {
      Params p = j.value("params", Params{});
      for (const auto& [k, v] : overrides) p[k] = v;
      return build(j.at("builtin").get<std::string>(), p);
    }
    if (!overrides.empty()) bad("--param applies to builtin systems only");

    const auto coords = j.at("coords").get<std::vector<std::string>>();
    const int n = static_cast<int>(coords.size());
    if (n == 0) bad("no coordinates");
    if (j.contains("dim") && j.at("dim").get<int>() != n) bad("dim does not match coords");

    ChartSystem s;
    s.name = j.value("name", std::string("custom"));
    s.coords = coords;
    s.periodic = j.value("periodic", std::vector<bool>(n, false));
    if (static_cast<int>(s.periodic.size()) != n) bad("periodic has the wrong length");

    struct Entry { int i, j; Expression e; };
    std::vector<Entry> metric;
    for (const auto& e : j.at("metric"))
      metric.push_back({resolve_coord(e.at("i"), coords), resolve_coord(e.at("j"), coords),
                        Expression::parse(e.at("terms"), coords)});
    s.metric = [metric, n](const Vec& q) {
      Mat g = Mat::Zero(n, n);
      for (const auto& e : metric) g(e.i, e.j) = g(e.j, e.i) = e.e(q);
      return g;
    };
    const Expression pot = j.contains("potential") ? Expression::parse(j.at("potential"), coords) : Expression();
    s.potential = [pot](const Vec& q) { return pot.empty() ? 0.0 : pot(q); };

    std::vector<std::vector<Entry>> rows;
    for (const auto& row : j.value("constraints", json::array())) {
      std::vector<Entry> r;
      for (const auto& e : row)
        r.push_back({0, resolve_coord(e.at("j"), coords), Expression::parse(e.at("terms"), coords)});
      rows.push_back(std::move(r));
    }
    s.num_constraints = static_cast<int>(rows.size());
    s.constraints = [rows, n](const Vec& q) {
      Mat w = Mat::Zero(static_cast<Eigen::Index>(rows.size()), n);
      for (std::size_t s = 0; s < rows.size(); ++s)
        for (const auto& e : rows[s]) w(static_cast<Eigen::Index>(s), e.j) = e.e(q);
      return w;
    };

    if (j.contains("group")) {
      for (const auto& c : j.at("group").at("translated")) s.group.translated.push_back(resolve_coord(c, coords));
      s.group.labels = j.at("group").value("labels", std::vector<std::string>{});
    }
    if (s.group.dim() != s.num_constraints) bad("group dimension must equal the number of constraints");
    if (s.group.labels.size() != s.group.translated.size())
      s.group.labels.resize(s.group.translated.size(), "g");

    ReducedSystem rs(s);
    std::optional<Multiplier> f;
    if (j.contains("multiplier")) {
      const Expression e = Expression::parse(j.at("multiplier"), rs.coords());
      f = numeric_multiplier([e](const Vec& q) { return e(q); }, "custom");
    }

    DomainBox box = j.contains("domain")
                        ? parse_box(j.at("domain"), n, "domain")
                        : DomainBox{Vec::Constant(n, -1.0), Vec::Constant(n, 1.0), {}, "default box [-1, 1]^n"};

    std::optional<TildeSystem> tilde;
    DomainBox tbox;
    if (j.contains("second_stage")) {
      const auto& ss = j.at("second_stage");
      const auto rc = rs.coords();
      std::vector<int> k;
      for (const auto& c : ss.at("translated")) k.push_back(resolve_coord(c, rc));
      const auto labels = ss.value("labels", std::vector<std::string>(k.size(), "k"));
      SecondStageSetup setup(rs, k, labels, vector_of(ss.at("mu")));
      const auto tc = setup.tilde_coords();
      Multiplier fm = constant_multiplier(1.0, setup.tilde_dim());
      if (ss.contains("f_mu")) {
        const Expression e = Expression::parse(ss.at("f_mu"), tc);
        fm = numeric_multiplier([e](const Vec& q) { return e(q); }, "custom");
      }
      tilde = tilde_assemble(setup, fm);
      tbox = ss.contains("domain") ? parse_box(ss.at("domain"), setup.tilde_dim(), "second-stage domain")
                                   : DomainBox{Vec::Constant(setup.tilde_dim(), -1.0),
                                               Vec::Constant(setup.tilde_dim(), 1.0), {}, "default box"};
    }

    SystemBundle b{s.name, {}, s, rs, f, tilde, box, tbox, 2.0, {}, {}};
    b.display_scale = [](const Vec& qb) { return Mat(Mat::Identity(qb.size(), qb.size())); };
    return b;
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

SystemBundle load_system_file(const std::string& path, const Params& overrides) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Configuration, "cannot open system file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::Configuration, std::string("system file is not valid JSON: ") + e.what());
  }
  return load_system(j, overrides);
}

}  // namespace nhk
