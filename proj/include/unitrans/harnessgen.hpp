#pragma once

#include <string>
#include <vector>

#include "unitrans/language.hpp"
#include "unitrans/testcase.hpp"

namespace unitrans {

// Renders a value as an argument expression for a call in `lang` (lists need
// constructor syntax in Java and C++, e.g. new int[]{1, 2}).
std::string call_argument(const Value& v, Language lang);

// Test block for the {{TESTS}} slot: calls `function_name` on each case and
// prints one "#CASE <i> <PASS|FAIL> expected=<lit> actual=<lit>" line per
// case, flushed, in order. Floating point comparisons use relative tolerance
// 1e-6 (with an absolute floor of 1e-6 near zero). Every case must be
// renderable for `lang`.
std::string build_case_harness(Language lang, const std::string& function_name,
                               const std::vector<TestCase>& cases);

// Validation driver for the {{TESTS}} slot: the program is run once per
// candidate with the candidate's index as argv[1], calls `function_name` on
// those arguments, and prints "#RESULT <json>" for the returned value.
// Isolated runs keep one crashing candidate from hiding the others.
std::string build_probe_driver(Language lang, const std::string& function_name,
                               const std::vector<std::vector<Value>>& candidates);

}  // namespace unitrans
