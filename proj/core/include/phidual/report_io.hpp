#pragma once

#include <iosfwd>
#include <string>

#include "phidual/duality.hpp"
#include "phidual/minimax.hpp"

namespace phidual {

// JSON text for reports. Infinite values are the strings "+inf" / "-inf".
// Output is deterministic for identical inputs.
std::string to_json(const DualityReport& report);
std::string to_json(const WitnessSearchResult& result, double alpha);

// CSV: y1..ym, V.
void write_value_function_csv(std::ostream& os, const ValueFunctionTable& table);

// Shortest decimal text that round-trips a double.
std::string format_number(double v);
std::string format_number(ExtendedValue v);

}  // namespace phidual
