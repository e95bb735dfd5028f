#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "unitrans/corpus.hpp"
#include "unitrans/errors.hpp"

using namespace unitrans;
using testsupport::TempDir;
using testsupport::write_file;

namespace {

void write_sample(const std::filesystem::path& root, const std::string& id,
                  bool with_python = true, bool with_cpp = true) {
    if (with_python) {
        write_file(root / id / "program.py", "def add(a, b):\n    return a + b\n");
        write_file(root / id / "suite.py", "{{PROGRAM}}\nassert add(1, 2) == 3\n");
    }
    if (with_cpp) {
        write_file(root / id / "program.cpp", "int add(int a, int b) { return a + b; }\n");
        write_file(root / id / "suite.cpp",
                   "#include <cassert>\n{{PROGRAM}}\nint main() { assert(add(1, 2) == 3); }\n");
    }
}

}  // namespace

TEST_CASE("well-formed samples load cleanly and in id order") {
    TempDir tmp;
    write_sample(tmp.path(), "s2_mul");
    write_sample(tmp.path(), "s1_add");
    write_file(tmp.path() / "manifest.json",
               R"({"samples": [{"id": "s2_mul", "function_name": "mul"},
                               {"id": "s1_add", "function_name": "add"}]})");

    Corpus corpus = load_corpus(tmp.path());
    REQUIRE(corpus.size() == 2);
    CHECK(corpus.diagnostics().empty());
    CHECK(corpus.samples()[0].id == "s1_add");
    CHECK(corpus.samples()[1].id == "s2_mul");
    CHECK(corpus.samples()[0].function_name == "add");
    CHECK(corpus.samples()[1].function_name == "mul");
    CHECK(corpus.samples()[0].programs.at(Language::python) ==
          "def add(a, b):\n    return a + b\n");
    REQUIRE(corpus.find("s1_add") != nullptr);
    CHECK(corpus.find("nope") == nullptr);

    SUBCASE("loading twice yields identical corpora") {
        Corpus again = load_corpus(tmp.path());
        REQUIRE(again.size() == corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            CHECK(again.samples()[i].id == corpus.samples()[i].id);
            CHECK(again.samples()[i].programs == corpus.samples()[i].programs);
            CHECK(again.samples()[i].eval_suites == corpus.samples()[i].eval_suites);
        }
    }
    SUBCASE("without a manifest the directory name doubles as function name") {
        std::filesystem::remove(tmp.path() / "manifest.json");
        Corpus bare = load_corpus(tmp.path());
        REQUIRE(bare.size() == 2);
        CHECK(bare.samples()[0].function_name == "s1_add");
    }
}

TEST_CASE("samples violating invariants are skipped with diagnostics") {
    TempDir tmp;

    SUBCASE("an empty program text sinks the sample") {
        write_file(tmp.path() / "bad" / "program.py", "   \n");
        write_file(tmp.path() / "bad" / "suite.py", "{{PROGRAM}}\nassert True\n");
        Corpus corpus = load_corpus(tmp.path());
        CHECK(corpus.size() == 0);
        REQUIRE(!corpus.diagnostics().empty());
        CHECK(corpus.diagnostics()[0].find("empty program.py") != std::string::npos);
    }
    SUBCASE("a program with no same-language suite is not runnable") {
        write_file(tmp.path() / "lonely" / "program.py", "def f():\n    return 1\n");
        Corpus corpus = load_corpus(tmp.path());
        CHECK(corpus.size() == 0);
        REQUIRE(corpus.diagnostics().size() == 1);
        CHECK(corpus.diagnostics()[0].find("lonely") != std::string::npos);
    }
    SUBCASE("a suite without the program marker is dropped, not fatal") {
        write_sample(tmp.path(), "ok");
        write_file(tmp.path() / "ok" / "suite.java", "public class t {}\n");
        Corpus corpus = load_corpus(tmp.path());
        REQUIRE(corpus.size() == 1);
        CHECK(corpus.samples()[0].eval_suites.count(Language::java) == 0);
        REQUIRE(corpus.diagnostics().size() == 1);
        CHECK(corpus.diagnostics()[0].find("suite.java") != std::string::npos);
    }
    SUBCASE("manifest entries without directories are diagnosed") {
        write_sample(tmp.path(), "real");
        write_file(tmp.path() / "manifest.json",
                   R"({"samples": [{"id": "real", "function_name": "add"},
                                   {"id": "ghost", "function_name": "gone"}]})");
        Corpus corpus = load_corpus(tmp.path());
        CHECK(corpus.size() == 1);
        REQUIRE(corpus.diagnostics().size() == 1);
        CHECK(corpus.diagnostics()[0].find("ghost") != std::string::npos);
    }
}

TEST_CASE("fatal corpus conditions") {
    TempDir tmp;
    CHECK_THROWS_AS(load_corpus(tmp.path() / "missing"), PathError);

    write_sample(tmp.path(), "a");
    write_file(tmp.path() / "manifest.json",
               R"({"samples": [{"id": "a", "function_name": "f"},
                               {"id": "a", "function_name": "g"}]})");
    CHECK_THROWS_AS(load_corpus(tmp.path()), ParseError);

    write_file(tmp.path() / "manifest.json", "{broken");
    CHECK_THROWS_AS(load_corpus(tmp.path()), ParseError);
}

TEST_CASE("tasks pair a source program with a target eval suite") {
    TempDir tmp;
    write_sample(tmp.path(), "both");               // python + cpp
    write_sample(tmp.path(), "py_only", true, false);
    Corpus corpus = load_corpus(tmp.path());
    REQUIRE(corpus.size() == 2);

    auto py_to_cpp = tasks_for_pair(corpus, Language::python, Language::cpp);
    REQUIRE(py_to_cpp.size() == 1);
    CHECK(py_to_cpp[0] == TranslationTask{"both", Language::python, Language::cpp});

    auto cpp_to_py = tasks_for_pair(corpus, Language::cpp, Language::python);
    REQUIRE(cpp_to_py.size() == 1);
    CHECK(cpp_to_py[0].sample_id == "both");

    CHECK(tasks_for_pair(corpus, Language::python, Language::java).empty());
    CHECK_THROWS_AS(tasks_for_pair(corpus, Language::cpp, Language::cpp), ArgumentError);

    SUBCASE("tasks come back sorted by id") {
        write_sample(tmp.path(), "aardvark");
        Corpus bigger = load_corpus(tmp.path());
        auto tasks = tasks_for_pair(bigger, Language::python, Language::cpp);
        REQUIRE(tasks.size() == 2);
        CHECK(tasks[0].sample_id == "aardvark");
        CHECK(tasks[1].sample_id == "both");
    }
}
