#include "unitrans/testcase.hpp"

#include <numeric>
#include <optional>
#include <random>
#include <regex>
#include <set>

#include "unitrans/errors.hpp"
#include "unitrans/harnessgen.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

// Splits on commas at nesting depth zero, outside quotes.
std::vector<std::string> split_arguments(const std::string& s) {
    std::vector<std::string> parts;
    std::string current;
    int depth = 0;
    char quote = '\0';
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (quote != '\0') {
            current += c;
            if (c == '\\' && i + 1 < s.size()) {
                current += s[++i];
            } else if (c == quote) {
                quote = '\0';
            }
            continue;
        }
        if (c == '\'' || c == '"') {
            quote = c;
            current += c;
        } else if (c == '[' || c == '(' || c == '{') {
            ++depth;
            current += c;
        } else if (c == ']' || c == ')' || c == '}') {
            --depth;
            current += c;
        } else if (c == ',' && depth == 0) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

std::optional<std::string> unescape_quoted(const std::string& tok) {
    if (tok.size() < 2) return std::nullopt;
    char q = tok.front();
    if ((q != '\'' && q != '"') || tok.back() != q) return std::nullopt;
    std::string out;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
        char c = tok[i];
        if (c == q) return std::nullopt;  // early close: not one literal
        if (c == '\\' && i + 1 < tok.size() - 1) {
            char e = tok[++i];
            switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default: out += e; break;
            }
        } else {
            out += c;
        }
    }
    return out;
}

const std::regex kIntToken{R"(^[+-]?\d+$)"};
const std::regex kRealToken{R"(^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$)"};

std::optional<Value> parse_literal(const std::string& raw);

std::optional<Value> parse_list_literal(const std::string& interior) {
    std::string body = trim(interior);
    std::vector<Value> items;
    if (!body.empty()) {
        bool any_int = false;
        bool any_real = false;
        for (const std::string& part : split_arguments(body)) {
            auto v = parse_literal(part);
            if (!v) return std::nullopt;
            any_int = any_int || v->kind() == Value::Kind::integer;
            any_real = any_real || v->kind() == Value::Kind::real;
            items.push_back(std::move(*v));
        }
        if (any_int && any_real) {
            for (Value& v : items) {
                if (v.kind() == Value::Kind::integer) {
                    v = Value::of_real(static_cast<double>(v.as_int()));
                }
            }
        }
        for (const Value& v : items) {
            if (v.kind() != items.front().kind()) return std::nullopt;
        }
    }
    try {
        return Value::of_list(std::move(items));
    } catch (const ArgumentError&) {
        return std::nullopt;
    }
}

std::optional<Value> parse_literal(const std::string& raw) {
    std::string tok = trim(raw);
    if (tok.empty()) return std::nullopt;
    if (tok == "True" || tok == "true") return Value::of_bool(true);
    if (tok == "False" || tok == "false") return Value::of_bool(false);
    if (tok == "None" || tok == "null") return Value::none();
    if (tok.front() == '[' && tok.back() == ']') {
        return parse_list_literal(tok.substr(1, tok.size() - 2));
    }
    if (auto s = unescape_quoted(tok)) return Value::of_string(std::move(*s));
    if (std::regex_match(tok, kIntToken)) {
        try {
            return Value::of_int(std::stoll(tok));
        } catch (const std::out_of_range&) {
            return std::nullopt;
        }
    }
    if (std::regex_match(tok, kRealToken)) {
        try {
            return Value::of_real(std::stod(tok));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// Strips one pair of parentheses wrapping the whole argument list.
std::string strip_wrapping_parens(const std::string& s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') return s;
    int depth = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')' && --depth == 0) return s;
    }
    return trim(s.substr(1, s.size() - 2));
}

const std::regex kInputMarker{R"(^\s*\[?\s*input[ _-]*(\d+)\s*\]?\s*:?\s*(.*)$)",
                              std::regex_constants::icase};

}  // namespace

std::string TestCase::key() const {
    std::string out = "[";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i) out += ',';
        out += inputs[i].canonical();
    }
    out += ']';
    return out;
}

bool TestCase::renderable_for(Language lang) const {
    try {
        render_case(*this, lang);
        return true;
    } catch (const UnsupportedTypeError&) {
        return false;
    }
}

nlohmann::json TestCase::to_json() const {
    nlohmann::json ins = nlohmann::json::array();
    for (const Value& v : inputs) ins.push_back(v.to_json());
    return nlohmann::json{{"inputs", std::move(ins)}, {"output", output.to_json()}};
}

TestCase TestCase::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("inputs") || !j.contains("output") ||
        !j["inputs"].is_array()) {
        throw ParseError("test case must be {inputs: [...], output: ...}");
    }
    TestCase c;
    for (const auto& el : j["inputs"]) c.inputs.push_back(Value::from_json(el));
    c.output = Value::from_json(j["output"]);
    return c;
}

std::string render_case(const TestCase& c, Language lang) {
    std::string out = "Inputs:";
    for (const Value& v : c.inputs) {
        out += '\n';
        if (statically_typed(lang)) {
            out += v.type_name(lang);
            out += ": ";
        }
        out += v.render_literal(lang);
    }
    if (statically_typed(lang)) {
        out += "\nOutputs (" + c.output.type_name(lang) + "):";
    } else {
        out += "\nOutputs:";
    }
    out += '\n';
    out += c.output.render_literal(lang);
    return out;
}

std::vector<std::vector<Value>> parse_candidate_inputs(const std::string& text) {
    std::vector<std::string> blocks;
    bool in_block = false;
    for (const std::string& line : split_lines(text)) {
        if (line.find("END_OF_CASE") != std::string::npos) break;
        std::smatch m;
        if (std::regex_match(line, m, kInputMarker)) {
            blocks.emplace_back(trim(m[2].str()));
            in_block = true;
        } else if (in_block) {
            std::string& block = blocks.back();
            if (!block.empty()) block += ' ';
            block += trim(line);
        }
    }
    std::vector<std::vector<Value>> candidates;
    for (const std::string& raw_block : blocks) {
        std::string block = strip_wrapping_parens(trim(raw_block));
        if (block.empty()) continue;
        std::vector<Value> args;
        bool ok = true;
        for (const std::string& part : split_arguments(block)) {
            auto v = parse_literal(part);
            if (!v) {
                ok = false;
                break;
            }
            args.push_back(std::move(*v));
        }
        if (ok && !args.empty()) candidates.push_back(std::move(args));
    }
    return candidates;
}

std::vector<TestCase> select_cases(const std::vector<TestCase>& pool, std::size_t k,
                                   std::uint64_t seed) {
    if (pool.size() <= k) return pool;
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::vector<TestCase> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
        std::swap(idx[i], idx[j]);
        out.push_back(pool[idx[i]]);
    }
    return out;
}

namespace {

bool arguments_expressible(const std::vector<Value>& args, Language lang) {
    try {
        for (const Value& v : args) call_argument(v, lang);
        return true;
    } catch (const UnsupportedTypeError&) {
        return false;
    }
}

std::string brief(const std::string& text, bool last_line) {
    std::vector<std::string> lines = split_lines(text);
    std::string picked;
    for (const std::string& line : lines) {
        if (is_blank(line) || trim(line).starts_with("#SIGNAL")) continue;
        picked = trim(line);
        if (!last_line) break;
    }
    if (picked.size() > 200) picked = picked.substr(0, 200) + "...";
    return picked;
}

}  // namespace

ValidationOutcome validate_inputs(const Executor& exec, const Toolchain& tc,
                                  const ExecTemplate& tmpl, const std::string& program,
                                  const std::string& function_name,
                                  const std::vector<std::vector<Value>>& candidates) {
    const Language lang = tmpl.language();
    ValidationOutcome out;
    auto reject = [&](std::size_t i, const std::string& why) {
        out.diagnostics.push_back("candidate " + std::to_string(i + 1) + ": " + why);
    };

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (arguments_expressible(candidates[i], lang)) {
            kept.push_back(i);
        } else {
            reject(i, std::string("arguments not expressible in ") +
                          std::string(display_name(lang)));
        }
    }
    if (kept.empty()) return out;

    std::set<std::string> seen;
    auto consume_run = [&](const ProcessResult& run, std::size_t orig) {
        ExecStatus status = classify_run(run);
        if (status != ExecStatus::ok) {
            std::string why = exec_status_tag(status);
            std::string detail = brief(run.stderr_text, true);
            if (!detail.empty()) why += " (" + detail + ")";
            reject(orig, why);
            return;
        }
        std::string result_line;
        for (const std::string& line : split_lines(run.stdout_text)) {
            if (line.starts_with("#RESULT ")) result_line = line.substr(8);
        }
        if (result_line.empty()) {
            reject(orig, "probe printed no result");
            return;
        }
        TestCase c;
        c.inputs = candidates[orig];
        try {
            c.output = Value::from_json(nlohmann::json::parse(result_line));
        } catch (const std::exception&) {
            reject(orig, "output outside the value domain: " + brief(result_line, false));
            return;
        }
        if (c.output.is_none()) {
            reject(orig, "output has no literal form");
            return;
        }
        if (!seen.insert(c.key()).second) {
            reject(orig, "duplicate inputs");
            return;
        }
        out.cases.push_back(std::move(c));
    };

    std::vector<std::vector<Value>> kept_args;
    for (std::size_t orig : kept) kept_args.push_back(candidates[orig]);
    PreparedProgram batch = exec.prepare(
        tc, tmpl.materialize(program, build_probe_driver(lang, function_name, kept_args)));

    if (batch.build_status() == ExecStatus::ok) {
        for (std::size_t j = 0; j < kept.size(); ++j) {
            consume_run(batch.run({std::to_string(j)}), kept[j]);
        }
        return out;
    }

    bool retry_solo = statically_typed(lang) && kept.size() > 1 &&
                      batch.build_status() == ExecStatus::compile_error;
    if (!retry_solo) {
        std::string why = "probe build failed (" + exec_status_tag(batch.build_status()) +
                          ")";
        std::string detail = brief(batch.compile_result().stderr_text, false);
        if (!detail.empty()) why += ": " + detail;
        for (std::size_t orig : kept) reject(orig, why);
        return out;
    }

    // One ill-typed candidate fails the shared build; retry each alone.
    for (std::size_t orig : kept) {
        PreparedProgram solo = exec.prepare(
            tc, tmpl.materialize(program,
                                 build_probe_driver(lang, function_name, {candidates[orig]})));
        if (solo.build_status() != ExecStatus::ok) {
            std::string why = "does not type-check";
            std::string detail = brief(solo.compile_result().stderr_text, false);
            if (!detail.empty()) why += ": " + detail;
            reject(orig, why);
            continue;
        }
        consume_run(solo.run({"0"}), orig);
    }
    return out;
}

}  // namespace unitrans
