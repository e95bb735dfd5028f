#include "unitrans/language.hpp"

namespace unitrans {

std::string_view display_name(Language lang) {
    switch (lang) {
        case Language::python: return "Python";
        case Language::java: return "Java";
        case Language::cpp: return "C++";
    }
    throw ArgumentError("unknown language value");
}

std::string_view tag(Language lang) {
    switch (lang) {
        case Language::python: return "python";
        case Language::java: return "java";
        case Language::cpp: return "cpp";
    }
    throw ArgumentError("unknown language value");
}

std::string_view comment_symbol(Language lang) {
    return lang == Language::python ? "#" : "//";
}

bool statically_typed(Language lang) {
    return lang != Language::python;
}

std::string_view file_extension(Language lang) {
    switch (lang) {
        case Language::python: return "py";
        case Language::java: return "java";
        case Language::cpp: return "cpp";
    }
    throw ArgumentError("unknown language value");
}

Language language_from_tag(std::string_view text) {
    if (text == "python") return Language::python;
    if (text == "java") return Language::java;
    if (text == "cpp") return Language::cpp;
    throw ArgumentError("unknown language tag: '" + std::string(text) +
                        "' (expected python, java, or cpp)");
}

}  // namespace unitrans
