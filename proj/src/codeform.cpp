#include "unitrans/codeform.hpp"

#include <cctype>
#include <optional>
#include <regex>
#include <unordered_set>

#include "unitrans/harness.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

constexpr const char* kStopMarker = "END_OF_CASE";

bool is_fence_line(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return line.compare(i, 3, "```") == 0;
}

// Java / C++ source with comment and string-literal interiors removed. `pos`
// maps each kept character back to its index in the original text; comments
// shrink to one space so token boundaries survive.
struct FilteredCode {
    std::string text;
    std::vector<std::size_t> pos;
};

FilteredCode filter_c_code(const std::string& s) {
    FilteredCode out;
    enum class State { code, line_comment, block_comment, dquote, squote };
    State state = State::code;
    auto keep = [&](std::size_t i) {
        out.text += s[i];
        out.pos.push_back(i);
    };
    auto keep_as = [&](std::size_t i, char c) {
        out.text += c;
        out.pos.push_back(i);
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        char next = i + 1 < s.size() ? s[i + 1] : '\0';
        switch (state) {
            case State::code:
                if (c == '/' && next == '/') {
                    state = State::line_comment;
                    keep_as(i, ' ');
                    ++i;
                } else if (c == '/' && next == '*') {
                    state = State::block_comment;
                    keep_as(i, ' ');
                    ++i;
                } else if (c == '"') {
                    state = State::dquote;
                    keep(i);
                } else if (c == '\'') {
                    state = State::squote;
                    keep(i);
                } else {
                    keep(i);
                }
                break;
            case State::line_comment:
                if (c == '\n') {
                    state = State::code;
                    keep(i);
                }
                break;
            case State::block_comment:
                if (c == '*' && next == '/') {
                    state = State::code;
                    ++i;
                }
                break;
            case State::dquote:
                if (c == '\\') {
                    ++i;
                } else if (c == '"') {
                    state = State::code;
                    keep(i);
                } else if (c == '\n') {
                    state = State::code;  // unterminated literal, resync
                    keep(i);
                }
                break;
            case State::squote:
                if (c == '\\') {
                    ++i;
                } else if (c == '\'') {
                    state = State::code;
                    keep(i);
                } else if (c == '\n') {
                    state = State::code;
                    keep(i);
                }
                break;
        }
    }
    return out;
}

const std::regex kPackageLine{R"(^\s*package\s+[A-Za-z_$][\w.$]*\s*;\s*$)"};
const std::regex kImportLine{R"(^\s*import\s+(static\s+)?([A-Za-z_$][\w.$]*?(\.\*)?)\s*;\s*$)"};
const std::regex kIncludeLine{R"(^\s*#\s*include\s*[<"]([^>"]+)[>"]\s*$)"};
const std::regex kUsingStdLine{R"(^\s*using\s+namespace\s+std\s*;\s*$)"};
const std::regex kClassHeader{
    R"(^\s*(?:(?:public|final|abstract|strictfp)\s+)*class\s+[A-Za-z_$][\w$]*)"};

std::string import_package(const std::string& qualified) {
    std::string name = qualified;
    if (name.size() >= 2 && name.ends_with(".*")) return name.substr(0, name.size() - 2);
    auto dot = name.rfind('.');
    return dot == std::string::npos ? std::string() : name.substr(0, dot);
}

// Wildcard packages provided by the Java execution template.
const std::unordered_set<std::string>& template_java_packages() {
    static const std::unordered_set<std::string> packages = [] {
        std::unordered_set<std::string> out;
        for (const std::string& line : harness_prefix_lines(Language::java)) {
            std::smatch m;
            if (std::regex_match(line, m, kImportLine) && !m[1].matched &&
                m[3].matched) {
                out.insert(import_package(m[2].str()));
            }
        }
        return out;
    }();
    return packages;
}

const std::unordered_set<std::string>& template_cpp_headers() {
    static const std::unordered_set<std::string> headers = [] {
        std::unordered_set<std::string> out;
        for (const std::string& line : harness_prefix_lines(Language::cpp)) {
            std::smatch m;
            if (std::regex_match(line, m, kIncludeLine)) out.insert(m[1].str());
        }
        return out;
    }();
    return headers;
}

bool template_cpp_uses_std() {
    for (const std::string& line : harness_prefix_lines(Language::cpp)) {
        if (std::regex_match(line, kUsingStdLine)) return true;
    }
    return false;
}

bool java_import_covered(const std::smatch& m) {
    if (m[1].matched) return false;  // static imports are never provided
    return template_java_packages().count(import_package(m[2].str())) > 0;
}

std::string dedent(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    std::string prefix;
    bool first = true;
    for (const std::string& line : lines) {
        if (is_blank(line)) continue;
        std::size_t ws = 0;
        while (ws < line.size() && (line[ws] == ' ' || line[ws] == '\t')) ++ws;
        std::string lead = line.substr(0, ws);
        if (first) {
            prefix = lead;
            first = false;
        } else {
            std::size_t k = 0;
            while (k < prefix.size() && k < lead.size() && prefix[k] == lead[k]) ++k;
            prefix.resize(k);
        }
        if (prefix.empty()) break;
    }
    for (std::string& line : lines) {
        if (is_blank(line)) {
            line.clear();
        } else {
            line.erase(0, prefix.size());
        }
    }
    while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return join_lines(lines);
}

// Unwraps `public class X { ... }` when the class is the only top-level
// construct, so bare methods slot into the execution template's own class.
std::optional<std::string> try_unwrap_java_class(const std::string& body) {
    FilteredCode filtered = filter_c_code(body);
    std::smatch m;
    if (!std::regex_search(filtered.text, m, kClassHeader,
                           std::regex_constants::match_continuous)) {
        return std::nullopt;
    }
    std::size_t i = static_cast<std::size_t>(m[0].length());
    while (i < filtered.text.size() && filtered.text[i] != '{') {
        if (filtered.text[i] == ';' || filtered.text[i] == '}') return std::nullopt;
        ++i;
    }
    if (i >= filtered.text.size()) return std::nullopt;
    std::size_t open = i;
    int depth = 0;
    std::size_t close = std::string::npos;
    for (std::size_t j = open; j < filtered.text.size(); ++j) {
        if (filtered.text[j] == '{') ++depth;
        if (filtered.text[j] == '}' && --depth == 0) {
            close = j;
            break;
        }
    }
    if (close == std::string::npos) return std::nullopt;
    for (std::size_t j = close + 1; j < filtered.text.size(); ++j) {
        if (!std::isspace(static_cast<unsigned char>(filtered.text[j]))) {
            return std::nullopt;  // more than one top-level construct
        }
    }
    std::size_t begin = filtered.pos[open] + 1;
    std::size_t end = filtered.pos[close];
    return dedent(body.substr(begin, end - begin));
}

std::string normalize_java(const std::string& code) {
    std::vector<std::string> kept_imports;
    std::vector<std::string> body;
    for (const std::string& line : split_lines(code)) {
        std::smatch m;
        if (std::regex_match(line, kPackageLine)) continue;
        if (std::regex_match(line, m, kImportLine)) {
            if (!java_import_covered(m)) kept_imports.push_back(line);
            continue;
        }
        body.push_back(line);
    }
    std::string body_text = join_lines(body);
    if (auto unwrapped = try_unwrap_java_class(body_text)) body_text = *unwrapped;
    std::vector<std::string> out = std::move(kept_imports);
    for (std::string& line : split_lines(body_text)) out.push_back(std::move(line));
    return trim(join_lines(out));
}

std::string normalize_cpp(const std::string& code) {
    std::vector<std::string> out;
    bool drop_using_std = template_cpp_uses_std();
    for (const std::string& line : split_lines(code)) {
        std::smatch m;
        if (std::regex_match(line, m, kIncludeLine) &&
            template_cpp_headers().count(m[1].str())) {
            continue;
        }
        if (drop_using_std && std::regex_match(line, kUsingStdLine)) continue;
        out.push_back(line);
    }
    return trim(join_lines(out));
}

std::string strip_comments_python(const std::string& s) {
    std::string out;
    enum class State { code, squote, dquote, triple_s, triple_d, comment };
    State state = State::code;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        auto at = [&](const char* lit) { return s.compare(i, 3, lit) == 0; };
        switch (state) {
            case State::code:
                if (c == '#') {
                    state = State::comment;
                } else if (at("'''")) {
                    state = State::triple_s;
                    out += "'''";
                    i += 2;
                } else if (at("\"\"\"")) {
                    state = State::triple_d;
                    out += "\"\"\"";
                    i += 2;
                } else {
                    if (c == '\'') state = State::squote;
                    if (c == '"') state = State::dquote;
                    out += c;
                }
                break;
            case State::squote:
            case State::dquote:
                out += c;
                if (c == '\\' && i + 1 < s.size()) {
                    out += s[++i];
                } else if ((c == '\'' && state == State::squote) ||
                           (c == '"' && state == State::dquote) || c == '\n') {
                    state = State::code;
                }
                break;
            case State::triple_s:
            case State::triple_d:
                if ((state == State::triple_s && at("'''")) ||
                    (state == State::triple_d && at("\"\"\""))) {
                    out += s.substr(i, 3);
                    i += 2;
                    state = State::code;
                } else {
                    out += c;
                    if (c == '\\' && i + 1 < s.size()) out += s[++i];
                }
                break;
            case State::comment:
                if (c == '\n') {
                    out += '\n';
                    state = State::code;
                }
                break;
        }
    }
    return out;
}

std::string strip_comments_c(const std::string& s) {
    std::string out;
    enum class State { code, line_comment, block_comment, dquote, squote };
    State state = State::code;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        char next = i + 1 < s.size() ? s[i + 1] : '\0';
        switch (state) {
            case State::code:
                if (c == '/' && next == '/') {
                    state = State::line_comment;
                    ++i;
                } else if (c == '/' && next == '*') {
                    state = State::block_comment;
                    ++i;
                } else {
                    if (c == '"') state = State::dquote;
                    if (c == '\'') state = State::squote;
                    out += c;
                }
                break;
            case State::line_comment:
                if (c == '\n') {
                    out += '\n';
                    state = State::code;
                }
                break;
            case State::block_comment:
                if (c == '*' && next == '/') {
                    out += ' ';
                    ++i;
                    state = State::code;
                }
                break;
            case State::dquote:
            case State::squote:
                out += c;
                if (c == '\\' && i + 1 < s.size()) {
                    out += s[++i];
                } else if ((c == '"' && state == State::dquote) ||
                           (c == '\'' && state == State::squote) || c == '\n') {
                    state = State::code;
                }
                break;
        }
    }
    return out;
}

std::string collapse_whitespace(const std::string& s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = true;
        } else {
            if (pending && !out.empty()) out += ' ';
            pending = false;
            out += c;
        }
    }
    return out;
}

}  // namespace

std::string extract_answer(const std::string& raw) {
    std::string text = raw;
    if (auto stop = text.find(kStopMarker); stop != std::string::npos) {
        text.erase(stop);
    }
    std::vector<std::string> lines = split_lines(text);
    std::size_t fence = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_fence_line(lines[i])) {
            fence = i;
            break;
        }
    }
    if (fence < lines.size()) {
        std::vector<std::string> interior;
        for (std::size_t i = fence + 1; i < lines.size(); ++i) {
            if (is_fence_line(lines[i])) break;
            interior.push_back(lines[i]);
        }
        text = join_lines(interior);
    } else {
        text = join_lines(lines);
    }
    text = trim(text);
    if (text.empty()) throw EmptyAnswerError("completion contains no code");
    return text;
}

std::string normalize_target(const std::string& code, Language target) {
    std::string trimmed = trim(code);
    if (trimmed.empty()) return trimmed;
    std::string out;
    switch (target) {
        case Language::python: out = trimmed; break;
        case Language::java: out = normalize_java(trimmed); break;
        case Language::cpp: out = normalize_cpp(trimmed); break;
    }
    return out.empty() ? trimmed : out;
}

std::string em_normalize(const std::string& code, Language lang) {
    std::string stripped = lang == Language::python ? strip_comments_python(code)
                                                    : strip_comments_c(code);
    return collapse_whitespace(stripped);
}

}  // namespace unitrans
