#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitrans/executor.hpp"
#include "unitrans/language.hpp"
#include "unitrans/value.hpp"

namespace unitrans {

// One validated execution example: calling the focal function on `inputs`
// produced `output`.
struct TestCase {
    std::vector<Value> inputs;
    Value output;

    // Canonical form of the inputs, used to deduplicate candidates.
    std::string key() const;

    // True when every input and the output can be spelled as a literal (and,
    // for typed languages, given a type) in `lang`.
    bool renderable_for(Language lang) const;

    nlohmann::json to_json() const;
    static TestCase from_json(const nlohmann::json& j);

    bool operator==(const TestCase& other) const = default;
};

// Prompt block for one case. Dynamically typed target:
//   Inputs:\n3\n5\nOutputs:\n8
// Statically typed target, each input prefixed by its type and the output
// type in the header:
//   Inputs:\nint: 3\nint: 5\nOutputs (int):\n8
// No trailing newline. Throws UnsupportedTypeError when unrenderable.
std::string render_case(const TestCase& c, Language lang);

// Scans a raw completion for [Input_k] blocks and parses each block as a
// comma-separated argument list. Tolerates missing brackets, stray colons,
// spacing, and case differences in the marker; Python and JSON literal
// spellings are both accepted. Malformed blocks are skipped, never fatal.
std::vector<std::vector<Value>> parse_candidate_inputs(const std::string& text);

// Picks k cases with a seeded partial shuffle; returns the whole pool in
// order when it has at most k members.
std::vector<TestCase> select_cases(const std::vector<TestCase>& pool, std::size_t k,
                                   std::uint64_t seed);

struct ValidationOutcome {
    std::vector<TestCase> cases;              // validated, deduplicated, in order
    std::vector<std::string> diagnostics;     // one line per rejected candidate
};

// Runs the source program on every candidate argument list and keeps the
// ones that execute cleanly, pairing them with the observed output.
// Rejections (inexpressible arguments, crashes, timeouts, out-of-domain
// outputs, duplicates) land in diagnostics. For typed languages a batch
// probe that fails to compile falls back to per-candidate builds so one
// ill-typed candidate cannot sink the rest.
ValidationOutcome validate_inputs(const Executor& exec, const Toolchain& tc,
                                  const ExecTemplate& tmpl, const std::string& program,
                                  const std::string& function_name,
                                  const std::vector<std::vector<Value>>& candidates);

}  // namespace unitrans
