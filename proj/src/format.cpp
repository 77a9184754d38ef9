#include "stratalloc/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace stratalloc {

std::string format_number(double value, int significant) {
  if (value == 0.0) return "0";  // also folds -0
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", significant, value);
  return buffer;
}

double round_significant(double value, int significant) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value, significant).c_str(), nullptr);
}

}  // namespace stratalloc
