#include "unitrans/harnessgen.hpp"

#include "unitrans/errors.hpp"

namespace unitrans {

namespace {

// Shared Python helpers: compact JSON-style formatting plus tolerant
// comparison. bool checks come first because bool is an int subtype.
constexpr const char* kPythonHelpers = R"PY(def _fmt_value(v):
    if v is True:
        return 'true'
    if v is False:
        return 'false'
    if v is None:
        return 'null'
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return '[' + ','.join(_fmt_value(x) for x in v) + ']'
    return str(v)
)PY";

constexpr const char* kPythonCompare = R"PY(
def _values_close(a, b):
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return abs(a - b) <= 1e-6 * max(1.0, abs(a), abs(b))
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(_values_close(x, y) for x, y in zip(a, b))
    return a == b


def _report_case(i, expected, actual):
    verdict = 'PASS' if _values_close(expected, actual) else 'FAIL'
    print('#CASE %d %s expected=%s actual=%s'
          % (i, verdict, _fmt_value(expected), _fmt_value(actual)), flush=True)
)PY";

constexpr const char* kJavaHelpers = R"JAVA(static String fmtValue(long v) { return Long.toString(v); }
static String fmtValue(double v) { return Double.toString(v); }
static String fmtValue(boolean v) { return v ? "true" : "false"; }
static String fmtValue(String v) {
    StringBuilder b = new StringBuilder("\"");
    for (int i = 0; i < v.length(); i++) {
        char c = v.charAt(i);
        if (c == '\\' || c == '"') b.append('\\').append(c);
        else if (c == '\n') b.append("\\n");
        else if (c == '\t') b.append("\\t");
        else if (c == '\r') b.append("\\r");
        else b.append(c);
    }
    return b.append('"').toString();
}
static String fmtValue(int[] v) {
    StringBuilder b = new StringBuilder("[");
    for (int i = 0; i < v.length; i++) { if (i > 0) b.append(','); b.append(v[i]); }
    return b.append(']').toString();
}
static String fmtValue(long[] v) {
    StringBuilder b = new StringBuilder("[");
    for (int i = 0; i < v.length; i++) { if (i > 0) b.append(','); b.append(v[i]); }
    return b.append(']').toString();
}
static String fmtValue(double[] v) {
    StringBuilder b = new StringBuilder("[");
    for (int i = 0; i < v.length; i++) { if (i > 0) b.append(','); b.append(Double.toString(v[i])); }
    return b.append(']').toString();
}
static String fmtValue(String[] v) {
    StringBuilder b = new StringBuilder("[");
    for (int i = 0; i < v.length; i++) { if (i > 0) b.append(','); b.append(fmtValue(v[i])); }
    return b.append(']').toString();
}
)JAVA";

constexpr const char* kJavaCompare = R"JAVA(static boolean eqValue(long a, long b) { return a == b; }
static boolean eqValue(double a, double b) {
    return Math.abs(a - b) <= 1e-6 * Math.max(1.0, Math.max(Math.abs(a), Math.abs(b)));
}
static boolean eqValue(boolean a, boolean b) { return a == b; }
static boolean eqValue(String a, String b) { return a.equals(b); }
static boolean eqValue(int[] a, int[] b) {
    if (a.length != b.length) return false;
    for (int i = 0; i < a.length; i++) if (a[i] != b[i]) return false;
    return true;
}
static boolean eqValue(long[] a, long[] b) {
    if (a.length != b.length) return false;
    for (int i = 0; i < a.length; i++) if (a[i] != b[i]) return false;
    return true;
}
static boolean eqValue(double[] a, double[] b) {
    if (a.length != b.length) return false;
    for (int i = 0; i < a.length; i++) if (!eqValue(a[i], b[i])) return false;
    return true;
}
static boolean eqValue(String[] a, String[] b) {
    if (a.length != b.length) return false;
    for (int i = 0; i < a.length; i++) if (!a[i].equals(b[i])) return false;
    return true;
}
)JAVA";

// C++ helpers are templates so int/long long/double mixes coming back from a
// translated function never hit overload ambiguity.
constexpr const char* kCppHelpers = R"CPP(#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <type_traits>

static std::string fmt_real_value(double v) {
    std::ostringstream o;
    o << std::setprecision(17) << v;
    std::string s = o.str();
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}
template <class T>
static std::string fmt_value(const T& v) {
    if constexpr (std::is_same<T, bool>::value) {
        return v ? "true" : "false";
    } else if constexpr (std::is_floating_point<T>::value) {
        return fmt_real_value(v);
    } else if constexpr (std::is_arithmetic<T>::value) {
        return std::to_string((long long)v);
    } else {
        std::string s = "\"";
        for (char c : std::string(v)) {
            if (c == '\\' || c == '"') { s += '\\'; s += c; }
            else if (c == '\n') s += "\\n";
            else if (c == '\t') s += "\\t";
            else if (c == '\r') s += "\\r";
            else s += c;
        }
        return s + "\"";
    }
}
template <class T>
static std::string fmt_value(const std::vector<T>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_value(v[i]);
    }
    return s + "]";
}
)CPP";

constexpr const char* kCppCompare = R"CPP(template <class A, class B>
static bool eq_value(const A& a, const B& b) {
    if constexpr (std::is_arithmetic<A>::value && std::is_arithmetic<B>::value) {
        if constexpr (std::is_floating_point<A>::value || std::is_floating_point<B>::value) {
            double x = (double)a, y = (double)b;
            return std::fabs(x - y) <= 1e-6 * std::max(1.0, std::max(std::fabs(x), std::fabs(y)));
        } else {
            return (long long)a == (long long)b;
        }
    } else {
        return a == b;
    }
}
template <class A, class B>
static bool eq_value(const std::vector<A>& a, const std::vector<B>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!eq_value(a[i], b[i])) return false;
    }
    return true;
}
)CPP";

std::string call_expression(const std::string& function_name,
                            const std::vector<Value>& args, Language lang) {
    std::string out = function_name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += call_argument(args[i], lang);
    }
    out += ")";
    return out;
}

std::string python_case_harness(const std::string& fn, const std::vector<TestCase>& cases) {
    std::string out = kPythonHelpers;
    out += kPythonCompare;
    out += "\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
        out += "_report_case(" + std::to_string(i) + ", " +
               cases[i].output.render_literal(Language::python) + ", " +
               call_expression(fn, cases[i].inputs, Language::python) + ")\n";
    }
    return out;
}

std::string java_case_harness(const std::string& fn, const std::vector<TestCase>& cases) {
    std::string out = kJavaHelpers;
    out += kJavaCompare;
    out += "public static void main(String[] args) {\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const TestCase& c = cases[i];
        std::string idx = std::to_string(i);
        out += "    {\n";
        out += "        " + c.output.type_name(Language::java) + " expected = " +
               c.output.render_literal(Language::java) + ";\n";
        out += "        var actual = " + call_expression(fn, c.inputs, Language::java) +
               ";\n";
        out += "        System.out.println(\"#CASE " + idx +
               " \" + (eqValue(expected, actual) ? \"PASS\" : \"FAIL\")\n";
        out += "            + \" expected=\" + fmtValue(expected) + \" actual=\" + "
               "fmtValue(actual));\n";
        out += "    }\n";
    }
    out += "}";
    return out;
}

std::string cpp_case_harness(const std::string& fn, const std::vector<TestCase>& cases) {
    std::string out = kCppHelpers;
    out += kCppCompare;
    out += "\nint main() {\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const TestCase& c = cases[i];
        std::string idx = std::to_string(i);
        out += "    {\n";
        out += "        " + c.output.type_name(Language::cpp) + " expected = " +
               c.output.render_literal(Language::cpp) + ";\n";
        out += "        auto actual = " + call_expression(fn, c.inputs, Language::cpp) +
               ";\n";
        out += "        std::cout << \"#CASE " + idx +
               " \" << (eq_value(expected, actual) ? \"PASS\" : \"FAIL\")\n";
        out += "                  << \" expected=\" << fmt_value(expected)\n";
        out += "                  << \" actual=\" << fmt_value(actual) << std::endl;\n";
        out += "    }\n";
    }
    out += "    return 0;\n}";
    return out;
}

std::string python_probe_driver(const std::string& fn,
                                const std::vector<std::vector<Value>>& candidates) {
    std::string out = kPythonHelpers;
    out += "\n_candidates = [\n";
    for (const auto& args : candidates) {
        out += "    lambda: " + call_expression(fn, args, Language::python) + ",\n";
    }
    out += "]\n";
    out += "print('#RESULT ' + _fmt_value(_candidates[int(sys.argv[1])]()), flush=True)\n";
    return out;
}

std::string java_probe_driver(const std::string& fn,
                              const std::vector<std::vector<Value>>& candidates) {
    std::string out = kJavaHelpers;
    out += "public static void main(String[] args) {\n";
    out += "    int which = Integer.parseInt(args[0]);\n";
    out += "    switch (which) {\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out += "        case " + std::to_string(i) + ": System.out.println(\"#RESULT \" + fmtValue(" +
               call_expression(fn, candidates[i], Language::java) + ")); return;\n";
    }
    out += "    }\n";
    out += "    System.exit(3);\n";
    out += "}";
    return out;
}

std::string cpp_probe_driver(const std::string& fn,
                             const std::vector<std::vector<Value>>& candidates) {
    std::string out = kCppHelpers;
    out += "\nint main(int argc, char** argv) {\n";
    out += "    if (argc < 2) return 3;\n";
    out += "    int which = std::atoi(argv[1]);\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out += "    if (which == " + std::to_string(i) + ") {\n";
        out += "        std::cout << \"#RESULT \" << fmt_value(" +
               call_expression(fn, candidates[i], Language::cpp) + ") << std::endl;\n";
        out += "        return 0;\n    }\n";
    }
    out += "    return 3;\n}";
    return out;
}

}  // namespace

std::string call_argument(const Value& v, Language lang) {
    std::string lit = v.render_literal(lang);
    if (v.kind() == Value::Kind::list && lang != Language::python) {
        if (lang == Language::java) return "new " + v.type_name(Language::java) + lit;
        return v.type_name(Language::cpp) + lit;
    }
    return lit;
}

std::string build_case_harness(Language lang, const std::string& function_name,
                               const std::vector<TestCase>& cases) {
    if (function_name.empty()) throw ArgumentError("function name required");
    switch (lang) {
        case Language::python: return python_case_harness(function_name, cases);
        case Language::java: return java_case_harness(function_name, cases);
        case Language::cpp: return cpp_case_harness(function_name, cases);
    }
    throw ArgumentError("unknown language");
}

std::string build_probe_driver(Language lang, const std::string& function_name,
                               const std::vector<std::vector<Value>>& candidates) {
    if (function_name.empty()) throw ArgumentError("function name required");
    switch (lang) {
        case Language::python: return python_probe_driver(function_name, candidates);
        case Language::java: return java_probe_driver(function_name, candidates);
        case Language::cpp: return cpp_probe_driver(function_name, candidates);
    }
    throw ArgumentError("unknown language");
}

}  // namespace unitrans
