#include "unitrans/analyzer.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "unitrans/errors.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

constexpr std::size_t kMessageCap = 512;
constexpr std::size_t kWindowChars = 16'384;

std::string cap_message(std::string msg) {
    if (msg.size() > kMessageCap) msg.resize(kMessageCap);
    return msg;
}

// Compile diagnostics lead; runtime diagnostics (tracebacks, aborts) trail.
std::string stderr_window(const std::string& text, ErrorKind kind) {
    if (text.size() <= kWindowChars) return text;
    if (kind == ErrorKind::compile) return text.substr(0, kWindowChars);
    return text.substr(text.size() - kWindowChars);
}

ErrorKind kind_from_tag(const std::string& tag) {
    if (tag == "compile") return ErrorKind::compile;
    if (tag == "runtime") return ErrorKind::runtime;
    if (tag == "logic") return ErrorKind::logic;
    throw ParseError("unknown error kind: " + tag);
}

std::vector<std::regex> compile_patterns(const std::vector<ErrorPattern>& patterns) {
    std::vector<std::regex> compiled;
    compiled.reserve(patterns.size());
    for (const ErrorPattern& p : patterns) {
        try {
            compiled.emplace_back(p.pattern, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw ParseError("bad error pattern \"" + p.pattern + "\": " + e.what());
        }
    }
    return compiled;
}

}  // namespace

std::string error_kind_tag(ErrorKind k) {
    switch (k) {
        case ErrorKind::compile: return "compile";
        case ErrorKind::runtime: return "runtime";
        case ErrorKind::logic: return "logic";
    }
    throw ArgumentError("unknown error kind");
}

ErrorKind error_kind_from_tag(std::string_view tag) {
    for (ErrorKind k : {ErrorKind::compile, ErrorKind::runtime, ErrorKind::logic}) {
        if (error_kind_tag(k) == tag) return k;
    }
    throw ArgumentError("unknown error kind tag: " + std::string(tag));
}

const std::vector<ErrorPattern>& default_error_patterns() {
    static const std::vector<ErrorPattern> patterns = {
        // Python compile diagnostics come in two shapes: the SyntaxError frame
        // display and the one-line "Sorry: ...Error: ... (tmp.py, line N)"
        // summary. Runtime frames may carry an absolute path, and the deepest
        // frame prints last, so that line pattern forces the final occurrence
        // via greedy prefix.
        {Language::python, ErrorKind::compile,
         R"re(File "(?:[^"\n]*/)?tmp\.py", line (\d+))re", 1, 0},
        {Language::python, ErrorKind::compile,
         R"re(\((?:[^()\n]*/)?tmp\.py, line (\d+)\))re", 1, 0},
        {Language::python, ErrorKind::compile,
         R"re((?:^|\n)(?:Sorry: )?([A-Za-z]\w*Error\b:?[^\n]*))re", 0, 1},
        {Language::python, ErrorKind::runtime,
         R"re([\s\S]*File "(?:[^"\n]*/)?tmp\.py", line (\d+))re", 1, 0},
        {Language::python, ErrorKind::runtime,
         R"re([\s\S]*\n([A-Za-z_][\w.]*(?:Error|Exception|Exit|Interrupt|Iteration|Warning)\b[^\n]*))re",
         0, 1},
        {Language::python, ErrorKind::runtime, R"re(#SIGNAL ([A-Z0-9]+))re", 0, 1},

        // javac reports one error per line; the first is the one we repair.
        // Java stack traces print the deepest frame first.
        {Language::java, ErrorKind::compile, R"re(tmp\.java:(\d+): error: ([^\n]*))re", 1, 2},
        {Language::java, ErrorKind::runtime,
         R"re(at tmp\.[\w$.<>]*\(tmp\.java:(\d+)\))re", 1, 0},
        {Language::java, ErrorKind::runtime,
         R"re(((?:[A-Za-z_$][\w$]*\.)+[A-Za-z_$][\w$]*(?:Exception|Error)\b(?::[^\n]*)?))re", 0,
         1},
        {Language::java, ErrorKind::runtime,
         R"re(Exception in thread "[^"\n]*" ([^\n]*))re", 0, 1},
        {Language::java, ErrorKind::runtime, R"re(#SIGNAL ([A-Z0-9]+))re", 0, 1},

        // g++ file:line:col diagnostics, then linker complaints without lines.
        {Language::cpp, ErrorKind::compile,
         R"re(tmp\.cpp:(\d+):(?:\d+:)?\s*(?:fatal )?error: ([^\n]*))re", 1, 2},
        {Language::cpp, ErrorKind::compile, R"re((undefined reference to [^\n]*))re", 0, 1},
        // Assertion failures carry a usable line; aborts and raw signals do not.
        {Language::cpp, ErrorKind::runtime,
         R"re(tmp\.cpp:(\d+): [^\n]*?(Assertion[^\n]*))re", 1, 2},
        {Language::cpp, ErrorKind::runtime, R"re(what\(\):\s*([^\n]*))re", 0, 1},
        {Language::cpp, ErrorKind::runtime,
         R"re(terminate called after throwing an instance of '([^'\n]+)')re", 0, 1},
        {Language::cpp, ErrorKind::runtime,
         R"re((stack smashing detected[^\n]*|double free or corruption[^\n]*|free\(\): [^\n]*|malloc\(\): [^\n]*))re",
         0, 1},
        {Language::cpp, ErrorKind::runtime, R"re(#SIGNAL ([A-Z0-9]+))re", 0, 1},
    };
    return patterns;
}

std::vector<ErrorPattern> load_error_patterns(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw PathError("cannot open error pattern inventory: " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad error pattern inventory " + file.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("patterns") || !doc["patterns"].is_array()) {
        throw ParseError("error pattern inventory needs a top-level patterns array");
    }
    std::vector<ErrorPattern> patterns;
    for (const auto& entry : doc["patterns"]) {
        try {
            ErrorPattern p;
            p.language = language_from_tag(entry.at("language").get<std::string>());
            p.kind = kind_from_tag(entry.at("kind").get<std::string>());
            p.pattern = entry.at("pattern").get<std::string>();
            p.line_group = entry.at("line_group").get<int>();
            p.message_group = entry.at("message_group").get<int>();
            if (p.kind == ErrorKind::logic) {
                throw ParseError("logic errors are formatted, not pattern-matched");
            }
            if (p.line_group < 0 || p.message_group < 0) {
                throw ParseError("capture group indices must be nonnegative");
            }
            patterns.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("bad error pattern entry: " + std::string(e.what()));
        }
    }
    compile_patterns(patterns);  // reject uncompilable regexes up front
    return patterns;
}

Analyzer::Analyzer() : Analyzer(default_error_patterns()) {}

Analyzer::Analyzer(std::vector<ErrorPattern> patterns)
    : patterns_(std::move(patterns)), compiled_(compile_patterns(patterns_)) {}

Analyzer Analyzer::from_file(const std::filesystem::path& file) {
    return Analyzer(load_error_patterns(file));
}

ErrorInfo Analyzer::extract_error(const CaseRunReport& report, Language lang,
                                  const std::vector<TestCase>& cases) const {
    if (report.exec_status == ExecStatus::ok) {
        const CaseOutcome* failing = nullptr;
        for (const CaseOutcome& c : report.cases) {
            if (c.status == CaseStatus::fail) {
                failing = &c;
                break;
            }
        }
        if (failing != nullptr) {
            std::string render = "case " + std::to_string(failing->index);
            if (failing->index < cases.size()) {
                try {
                    std::string joined;
                    for (const Value& v : cases[failing->index].inputs) {
                        if (!joined.empty()) joined += ", ";
                        joined += v.render_literal(lang);
                    }
                    if (!joined.empty()) render = joined;
                } catch (const UnsupportedTypeError&) {
                    // keep the index fallback
                }
            }
            ErrorInfo info;
            info.kind = ErrorKind::logic;
            info.failing_case_index = failing->index;
            info.message = cap_message(
                format_logic_message(failing->index, failing->expected, failing->actual, render));
            return info;
        }
        if (report.all_passed()) {
            throw ArgumentError("nothing to extract from a fully passing report");
        }
        // Fall through: ok exit but incomplete verdicts, treated as runtime.
    }

    ErrorKind kind = report.exec_status == ExecStatus::compile_error ? ErrorKind::compile
                                                                     : ErrorKind::runtime;
    std::string window = stderr_window(report.error_text, kind);

    std::optional<std::size_t> raw_line;
    std::string message;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
        const ErrorPattern& p = patterns_[i];
        if (p.language != lang || p.kind != kind) continue;
        bool wants_line = p.line_group > 0 && !raw_line.has_value();
        bool wants_message = p.message_group > 0 && message.empty();
        if (!wants_line && !wants_message) continue;
        std::smatch m;
        if (!std::regex_search(window, m, compiled_[i])) continue;
        if (wants_line && p.line_group < static_cast<int>(m.size()) &&
            m[p.line_group].matched) {
            try {
                raw_line = std::stoull(m[p.line_group].str());
            } catch (const std::exception&) {
                // absurd number, keep looking
            }
        }
        if (wants_message && p.message_group < static_cast<int>(m.size()) &&
            m[p.message_group].matched) {
            message = trim(m[p.message_group].str());
        }
        if (raw_line.has_value() && !message.empty()) break;
    }

    ErrorInfo info;
    info.kind = kind;
    if (raw_line.has_value() && *raw_line > report.prefix_line_count) {
        std::size_t rel = *raw_line - report.prefix_line_count;
        if (report.program_line_count == 0 || rel <= report.program_line_count) {
            info.program_line = rel;
        }
    }
    if (message.empty()) {
        std::string tail = report.error_text.size() > kMessageCap
                               ? report.error_text.substr(report.error_text.size() - kMessageCap)
                               : report.error_text;
        message = trim(tail);
    }
    if (message.empty()) {
        message = report.exec_status == ExecStatus::timeout ? "time limit exceeded"
                                                            : exec_status_tag(report.exec_status);
    }
    info.message = cap_message(std::move(message));
    return info;
}

std::string annotate_buggy_line(const std::string& program, std::size_t line, Language lang) {
    std::vector<std::string> lines = split_lines(program);
    if (line < 1 || line > lines.size()) {
        throw ArgumentError("buggy line " + std::to_string(line) + " outside program of " +
                            std::to_string(lines.size()) + " lines");
    }
    std::string& target = lines[line - 1];
    target += ' ';
    target += comment_symbol(lang);
    target += " <Buggy Line>";
    std::string out = join_lines(lines);
    if (!program.empty() && program.back() == '\n') out += '\n';
    return out;
}

std::string strip_buggy_marker(const std::string& program, Language lang) {
    std::string marker = " ";
    marker += comment_symbol(lang);
    marker += " <Buggy Line>";
    std::vector<std::string> lines = split_lines(program);
    for (std::string& l : lines) {
        if (l.size() >= marker.size() &&
            l.compare(l.size() - marker.size(), marker.size(), marker) == 0) {
            l.resize(l.size() - marker.size());
        }
    }
    std::string out = join_lines(lines);
    if (!program.empty() && program.back() == '\n') out += '\n';
    return out;
}

std::string format_logic_message(std::size_t case_index, const std::string& expected,
                                 const std::string& actual, const std::string& input_render) {
    std::string render = input_render.empty() ? "case " + std::to_string(case_index)
                                              : input_render;
    std::string msg = "On input ";
    msg += render;
    msg += ": expected ";
    msg += expected.empty() ? "?" : expected;
    msg += " but got ";
    msg += actual.empty() ? "?" : actual;
    msg += '.';
    return msg;
}

}  // namespace unitrans
