#pragma once

#include <string>

#include "hwdb/evaluator.hpp"

namespace hwdb {

// "Result = {...}" followed by the session equations that are not inlined.
// Session names referenced once and not on a cycle are inlined; {} and {X:{}} always print as {} and "X".
std::string render_result(const EquationSystem& sys, const QueryResult& r);

}  // namespace hwdb
