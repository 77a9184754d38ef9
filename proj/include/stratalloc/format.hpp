#pragma once

#include <string>

namespace stratalloc {

/// Shortest %g rendering with `significant` digits; trailing zeros dropped.
/// Exact ties round half to even under the default rounding mode.
std::string format_number(double value, int significant = 6);

/// The double nearest to format_number(value, significant).
double round_significant(double value, int significant = 6);

}  // namespace stratalloc
