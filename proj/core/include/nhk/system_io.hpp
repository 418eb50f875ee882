#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhk/systems.hpp"

namespace nhk {

/// Sum of terms coef · Π factor, factor = fn(coord)^pow or (expr)^pow,
/// fn ∈ {id, sin, cos, tan, cot}.
class Expression {
 public:
  struct Factor;
  struct Term {
    double coef = 1.0;
    std::vector<Factor> factors;
  };

  Expression() = default;
  explicit Expression(std::vector<Term> terms) : terms_(std::move(terms)) {}

  /// Coordinates are resolved by name against `coords` (or given as indices).
  static Expression parse(const nlohmann::json& j, const std::vector<std::string>& coords);

  double operator()(const Vec& q) const;
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<Term> terms_;
};

struct Expression::Factor {
  enum class Fn { Id, Sin, Cos, Tan, Cot, Nested } fn = Fn::Id;
  int coord = 0;
  double pow = 1.0;
  Expression nested;
};

/// Either {"builtin": name, "params": {...}} or a custom term-table system.
SystemBundle load_system(const nlohmann::json& j, const Params& overrides = {});
SystemBundle load_system_file(const std::string& path, const Params& overrides = {});

}  // namespace nhk
