#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "confluo/analysis.hpp"
#include "confluo/system.hpp"

namespace confluo {

enum class Theorem { Thm3_1, Thm3_2, Thm4_1, Thm4_2, Thm5 };
const char* to_string(Theorem t);

struct CriteriaReport {
  bool left_linear = false;
  bool semi_closed = false;
  bool right_applicative = false;
  bool right_algebraic = false;
  bool applicative = false;
  bool algebraic = false;
  bool almost_arity_compliant = false;
  bool arity_compliant = false;
  OrthonormalVerdict orthonormal;
  std::vector<Theorem> applicable_theorems;
};

CriteriaReport check_criteria(const RewriteSystem& sys);

std::string format_report(const CriteriaReport& r, const Signature* sig = nullptr);
nlohmann::json to_json(const CriteriaReport& r, const Signature* sig = nullptr);

}  // namespace confluo
