#pragma once

#include <string>
#include <string_view>

namespace wattmark {

/// Shortest decimal form that parses back to the same double.
std::string format_roundtrip(double value);

/// Value rounded to `digits` significant digits (printf %.{digits}g).
std::string format_significant(double value, int digits);
double round_significant(double value, int digits);

/// Fixed-point with `decimals` places.
std::string format_fixed(double value, int decimals);

/// p value for tables: "<0.001" below the threshold, else 4 decimals.
std::string format_p(double p);

/// Strict full-string parse; throws std::invalid_argument on trailing junk.
double parse_double(std::string_view text);

}  // namespace wattmark
