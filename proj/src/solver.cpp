#include "ggs/solver.hpp"

#include <algorithm>
#include <cctype>

namespace ggs {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::GGS: return "GGS";
    case Method::GGS_RANDOMIZED: return "GGS_RANDOMIZED";
    case Method::GRCD: return "GRCD";
    case Method::RGS: return "RGS";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (key == "ggs") return Method::GGS;
  if (key == "ggs-randomized" || key == "rggs") return Method::GGS_RANDOMIZED;
  if (key == "grcd") return Method::GRCD;
  if (key == "rgs") return Method::RGS;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::RES_REACHED: return "RES_REACHED";
    case StopReason::GRADIENT_REACHED: return "GRADIENT_REACHED";
    case StopReason::ITERATION_CAP: return "ITERATION_CAP";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (!(res_tolerance > 0)) throw Error(ErrorCode::InvalidArgument, "res_tolerance must be > 0");
  if (!(tie_tolerance_rel >= 0 && tie_tolerance_rel < 1)) {
    throw Error(ErrorCode::InvalidArgument, "tie_tolerance_rel must lie in [0, 1)");
  }
}

}  // namespace ggs
