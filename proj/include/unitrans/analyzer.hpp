#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "unitrans/executor.hpp"
#include "unitrans/language.hpp"
#include "unitrans/testcase.hpp"

namespace unitrans {

enum class ErrorKind { compile, runtime, logic };

std::string error_kind_tag(ErrorKind k);
ErrorKind error_kind_from_tag(std::string_view tag);

// What the repair loop learns from one failed run.
struct ErrorInfo {
    ErrorKind kind = ErrorKind::runtime;
    std::optional<std::size_t> program_line;  // 1-based, program-relative
    std::string message;
    std::optional<std::size_t> failing_case_index;

    bool operator==(const ErrorInfo&) const = default;
};

// One inventory entry. Patterns are ECMAScript regexes searched over a
// bounded stderr window; group 0 in either slot means "this entry does not
// yield that piece". Compile-kind entries take their first match, so a
// deepest-frame rule must be encoded in the pattern (greedy prefix).
struct ErrorPattern {
    Language language = Language::python;
    ErrorKind kind = ErrorKind::compile;  // compile or runtime
    std::string pattern;
    int line_group = 0;
    int message_group = 0;

    bool operator==(const ErrorPattern&) const = default;
};

// Built-in inventory, identical to the shipped asset file.
const std::vector<ErrorPattern>& default_error_patterns();

// Parses an inventory asset: {"version": 1, "patterns": [{language, kind,
// pattern, line_group, message_group}, ...]}. Throws ParseError on bad
// shape or an uncompilable regex, PathError when the file is missing.
std::vector<ErrorPattern> load_error_patterns(const std::filesystem::path& file);

class Analyzer {
public:
    Analyzer();
    explicit Analyzer(std::vector<ErrorPattern> patterns);

    static Analyzer from_file(const std::filesystem::path& file);

    // Distills a failed run into kind, program-relative line, and message.
    // Never throws on garbage stderr: unmatched output degrades to
    // line=none with the stderr tail as the message. `cases` (the cases the
    // harness ran, in order) lets logic messages quote the failing input.
    ErrorInfo extract_error(const CaseRunReport& report, Language lang,
                            const std::vector<TestCase>& cases = {}) const;

    const std::vector<ErrorPattern>& patterns() const { return patterns_; }

private:
    std::vector<ErrorPattern> patterns_;
    std::vector<std::regex> compiled_;
};

// Appends ` <comment symbol> <Buggy Line>` to exactly the given 1-based
// line. Throws ArgumentError when the line is out of range.
std::string annotate_buggy_line(const std::string& program, std::size_t line, Language lang);

// Removes the marker annotate_buggy_line added; identity when absent.
std::string strip_buggy_marker(const std::string& program, Language lang);

// "On input <input_render>: expected <expected> but got <actual>."
std::string format_logic_message(std::size_t case_index, const std::string& expected,
                                 const std::string& actual, const std::string& input_render);

}  // namespace unitrans
