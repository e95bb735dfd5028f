#include "unitrans/harness.hpp"

namespace unitrans {

const std::vector<std::string>& harness_prefix_lines(Language lang) {
    static const std::vector<std::string> python = {
        "import json",
        "import math",
        "import sys",
        "",
    };
    static const std::vector<std::string> java = {
        "import java.util.*;",
        "import java.util.stream.*;",
        "import java.lang.*;",
        "import java.math.*;",
        "",
        "public class tmp {",
    };
    static const std::vector<std::string> cpp = {
        "#include <algorithm>",
        "#include <climits>",
        "#include <cmath>",
        "#include <cstdint>",
        "#include <iostream>",
        "#include <string>",
        "#include <vector>",
        "using namespace std;",
        "",
    };
    switch (lang) {
        case Language::python: return python;
        case Language::java: return java;
        case Language::cpp: return cpp;
    }
    return cpp;
}

}  // namespace unitrans
