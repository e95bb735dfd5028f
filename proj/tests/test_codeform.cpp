#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unitrans/codeform.hpp"

using namespace unitrans;

TEST_CASE("extract_answer pulls code out of chatty completions") {
    std::string raw =
        "Sure, here is the translation:\n"
        "```cpp\n"
        "int add(int a, int b) {\n"
        "    return a + b;\n"
        "}\n"
        "```\n"
        "END_OF_CASE\n"
        "Anything after the marker is noise.";
    CHECK(extract_answer(raw) == "int add(int a, int b) {\n    return a + b;\n}");

    SUBCASE("marker cut happens before fence scanning") {
        CHECK(extract_answer("x = 1\nEND_OF_CASE\n```py\ny = 2\n```") == "x = 1");
    }
    SUBCASE("bare answers pass through trimmed") {
        CHECK(extract_answer("  def f(x):\n    return x\nEND_OF_CASE") ==
              "def f(x):\n    return x");
    }
    SUBCASE("only the first fenced block counts") {
        CHECK(extract_answer("```\na\n```\ntext\n```\nb\n```") == "a");
    }
    SUBCASE("an unterminated fence runs to the end") {
        CHECK(extract_answer("```java\nint x = 1;") == "int x = 1;");
    }
    SUBCASE("nothing left is an error") {
        CHECK_THROWS_AS(extract_answer(""), EmptyAnswerError);
        CHECK_THROWS_AS(extract_answer("END_OF_CASE junk"), EmptyAnswerError);
        CHECK_THROWS_AS(extract_answer("```\n```\nEND_OF_CASE"), EmptyAnswerError);
    }
    SUBCASE("idempotent") {
        for (const std::string& s :
             {raw, std::string("a = 1\nEND_OF_CASE"), std::string("```\nf()\n```")}) {
            std::string once = extract_answer(s);
            CHECK(extract_answer(once) == once);
        }
    }
}

TEST_CASE("normalize_target for Java") {
    SUBCASE("template-covered imports and package lines vanish") {
        std::string code =
            "package org.example;\n"
            "import java.util.ArrayList;\n"
            "import java.util.stream.Collectors;\n"
            "import java.io.BufferedReader;\n"
            "static int f() { return 1; }";
        CHECK(normalize_target(code, Language::java) ==
              "import java.io.BufferedReader;\nstatic int f() { return 1; }");
    }
    SUBCASE("a lone class wrapper unwraps with dedent") {
        std::string code =
            "public class Solution {\n"
            "    static int add(int a, int b) {\n"
            "        return a + b;\n"
            "    }\n"
            "}";
        CHECK(normalize_target(code, Language::java) ==
              "static int add(int a, int b) {\n    return a + b;\n}");
    }
    SUBCASE("wildcard duplicates of the template are removed") {
        CHECK(normalize_target("import java.util.*;\nint f() { return 0; }",
                               Language::java) == "int f() { return 0; }");
    }
    SUBCASE("static imports are kept") {
        std::string code = "import static java.util.Arrays.asList;\nint f() { return 0; }";
        CHECK(normalize_target(code, Language::java) == code);
    }
    SUBCASE("two top-level classes stay wrapped") {
        std::string code = "class A { }\nclass B { }";
        CHECK(normalize_target(code, Language::java) == code);
    }
    SUBCASE("braces inside literals do not confuse the unwrap") {
        std::string code =
            "public class T {\n"
            "    static String f() { return \"}{\"; }  // tricky }\n"
            "}";
        CHECK(normalize_target(code, Language::java) ==
              "static String f() { return \"}{\"; }  // tricky }");
    }
}

TEST_CASE("normalize_target for C++") {
    std::string code =
        "#include <vector>\n"
        "#include <map>\n"
        "using namespace std;\n"
        "int f(vector<int> v) { return (int)v.size(); }";
    CHECK(normalize_target(code, Language::cpp) ==
          "#include <map>\nint f(vector<int> v) { return (int)v.size(); }");

    SUBCASE("stripping never empties a non-empty answer") {
        CHECK(normalize_target("#include <vector>", Language::cpp) == "#include <vector>");
        CHECK(normalize_target("using namespace std;", Language::cpp) ==
              "using namespace std;");
    }
}

TEST_CASE("normalize_target for Python trims and nothing else") {
    CHECK(normalize_target("  import math\n\ndef f(x):\n    return x\n", Language::python) ==
          "import math\n\ndef f(x):\n    return x");
}

TEST_CASE("em_normalize canonicalizes for exact match") {
    SUBCASE("C++ comments and layout do not matter") {
        std::string a = "int add(int a, int b) {\n    return a + b;  // sum\n}";
        std::string b = "int add(int a,\n        int b) { /* args */ return a+b; }";
        CHECK(em_normalize(a, Language::cpp) == "int add(int a, int b) { return a + b; }");
        CHECK(em_normalize(b, Language::cpp) == "int add(int a, int b) { return a+b; }");
        CHECK(em_normalize(a, Language::cpp) != em_normalize(b, Language::cpp));
    }
    SUBCASE("comment markers inside string literals survive") {
        CHECK(em_normalize("string u = \"http://x\"; // real comment", Language::cpp) ==
              "string u = \"http://x\";");
        CHECK(em_normalize("s = 'a # b'  # strip me", Language::python) == "s = 'a # b'");
    }
    SUBCASE("Python floor division is not a comment") {
        CHECK(em_normalize("q = a // b", Language::python) == "q = a // b");
    }
    SUBCASE("preprocessor lines are code, not comments") {
        CHECK(em_normalize("#include <map>\nint x;", Language::cpp) == "#include <map> int x;");
    }
    SUBCASE("triple-quoted strings keep their hash marks") {
        CHECK(em_normalize("s = \"\"\"a # b\"\"\"", Language::python) ==
              "s = \"\"\"a # b\"\"\"");
    }
    SUBCASE("idempotent") {
        for (const std::string& s : {std::string("int f() { return 1; } // x"),
                                     std::string("a /* b */ c"), std::string("  x\t\ny ")}) {
            std::string once = em_normalize(s, Language::cpp);
            CHECK(em_normalize(once, Language::cpp) == once);
        }
    }
    SUBCASE("equality is the intended use") {
        std::string truth = "def f(x):\n    return x * 2";
        std::string pred = "def f(x):  # doubles\n    return x * 2\n";
        CHECK(em_normalize(truth, Language::python) == em_normalize(pred, Language::python));
    }
}
