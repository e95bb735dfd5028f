#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "support.hpp"
#include "unitrans/analyzer.hpp"
#include "unitrans/errors.hpp"
#include "unitrans/text.hpp"

using namespace unitrans;

namespace {

ExecStatus status_from_tag(const std::string& tag) {
    if (tag == "compile_error") return ExecStatus::compile_error;
    if (tag == "runtime_error") return ExecStatus::runtime_error;
    if (tag == "timeout") return ExecStatus::timeout;
    throw std::runtime_error("fixture uses unknown status " + tag);
}

ErrorKind kind_from_tag(const std::string& tag) {
    if (tag == "compile") return ErrorKind::compile;
    if (tag == "runtime") return ErrorKind::runtime;
    return ErrorKind::logic;
}

CaseRunReport failed_report(ExecStatus status, std::string stderr_text, std::size_t prefix,
                            std::size_t program_lines) {
    CaseRunReport r;
    r.exec_status = status;
    r.error_text = std::move(stderr_text);
    r.prefix_line_count = prefix;
    r.program_line_count = program_lines;
    return r;
}

}  // namespace

TEST_CASE("stderr fixture corpus distills to kind, line, and message") {
    auto manifest = nlohmann::json::parse(
        testsupport::read_file(testsupport::fixture_dir() / "stderr" / "expected.json"));
    Analyzer analyzer;
    REQUIRE(manifest["cases"].size() >= 12);
    for (const auto& entry : manifest["cases"]) {
        std::string file = entry["file"].get<std::string>();
        CAPTURE(file);
        auto report = failed_report(
            status_from_tag(entry["exec_status"].get<std::string>()),
            testsupport::read_file(testsupport::fixture_dir() / "stderr" / file),
            entry["prefix"].get<std::size_t>(), entry["program_lines"].get<std::size_t>());
        ErrorInfo info =
            analyzer.extract_error(report, language_from_tag(entry["language"].get<std::string>()));
        CHECK(info.kind == kind_from_tag(entry["kind"].get<std::string>()));
        if (entry["line"].is_null()) {
            CHECK(!info.program_line.has_value());
        } else {
            REQUIRE(info.program_line.has_value());
            CHECK(*info.program_line == entry["line"].get<std::size_t>());
        }
        CHECK(!info.message.empty());
        CHECK(info.message.size() <= 512);
        CHECK(info.message.find(entry["message_contains"].get<std::string>()) !=
              std::string::npos);
    }
}

TEST_CASE("line offsets subtract the template prefix and stay inside the program") {
    Analyzer analyzer;
    std::string diag = "tmp.java:11: error: cannot find symbol\n";

    auto info = analyzer.extract_error(
        failed_report(ExecStatus::compile_error, diag, 6, 8), Language::java);
    CHECK(info.kind == ErrorKind::compile);
    CHECK(info.program_line == 5);
    CHECK(info.message == "cannot find symbol");

    SUBCASE("raw line below the program downgrades to none") {
        auto low = analyzer.extract_error(
            failed_report(ExecStatus::compile_error, diag, 11, 8), Language::java);
        CHECK(!low.program_line.has_value());
        CHECK(low.message == "cannot find symbol");
    }
    SUBCASE("raw line past the program downgrades to none") {
        auto high = analyzer.extract_error(
            failed_report(ExecStatus::compile_error, diag, 6, 4), Language::java);
        CHECK(!high.program_line.has_value());
    }
    SUBCASE("unknown program length skips the upper bound only") {
        auto open = analyzer.extract_error(
            failed_report(ExecStatus::compile_error, diag, 6, 0), Language::java);
        CHECK(open.program_line == 5);
    }
}

TEST_CASE("logic failures quote the first failing case") {
    Analyzer analyzer;
    CaseRunReport report;
    report.exec_status = ExecStatus::ok;
    report.cases = {
        {0, CaseStatus::pass, "1", "1"},
        {1, CaseStatus::fail, "6", "5"},
        {2, CaseStatus::fail, "9", "0"},
    };
    std::vector<TestCase> cases = {
        {{Value::of_int(1)}, Value::of_int(1)},
        {{Value::of_int(3), Value::of_int(3)}, Value::of_int(6)},
        {{Value::of_int(9)}, Value::of_int(9)},
    };

    auto info = analyzer.extract_error(report, Language::java, cases);
    CHECK(info.kind == ErrorKind::logic);
    CHECK(!info.program_line.has_value());
    CHECK(info.failing_case_index == 1);
    CHECK(info.message == "On input 3, 3: expected 6 but got 5.");

    SUBCASE("without case inputs the index stands in") {
        auto bare = analyzer.extract_error(report, Language::java);
        CHECK(bare.message == "On input case 1: expected 6 but got 5.");
    }
    SUBCASE("a fully passing report is a caller bug") {
        CaseRunReport green;
        green.exec_status = ExecStatus::ok;
        green.cases = {{0, CaseStatus::pass, "1", "1"}};
        CHECK_THROWS_AS(analyzer.extract_error(green, Language::java), ArgumentError);
    }
}

TEST_CASE("extraction never fails on garbage and caps the message") {
    Analyzer analyzer;
    std::string noise(2'000, 'x');
    auto info = analyzer.extract_error(
        failed_report(ExecStatus::runtime_error, noise, 4, 10), Language::python);
    CHECK(info.kind == ErrorKind::runtime);
    CHECK(!info.program_line.has_value());
    CHECK(info.message.size() == 512);

    auto silent = analyzer.extract_error(failed_report(ExecStatus::runtime_error, "", 4, 10),
                                         Language::python);
    CHECK(silent.message == "runtime_error");
}

TEST_CASE("buggy line annotation") {
    CHECK(annotate_buggy_line("a\nb\nc", 2, Language::java) == "a\nb // <Buggy Line>\nc");
    CHECK(annotate_buggy_line("x=1", 1, Language::python) == "x=1 # <Buggy Line>");
    CHECK(annotate_buggy_line("int x;\n", 1, Language::cpp) == "int x; // <Buggy Line>\n");
    CHECK_THROWS_AS(annotate_buggy_line("a\nb", 0, Language::java), ArgumentError);
    CHECK_THROWS_AS(annotate_buggy_line("a\nb", 3, Language::java), ArgumentError);

    SUBCASE("annotate then strip is the identity") {
        const std::string programs[] = {"a\nb\nc", "x=1", "def f():\n    return 1\n"};
        for (const std::string& p : programs) {
            for (Language lang : kAllLanguages) {
                std::size_t lines = split_lines(p).size();
                for (std::size_t ln = 1; ln <= lines; ++ln) {
                    CHECK(strip_buggy_marker(annotate_buggy_line(p, ln, lang), lang) == p);
                }
            }
        }
    }
}

TEST_CASE("logic message format") {
    CHECK(format_logic_message(1, "6", "5", "3") == "On input 3: expected 6 but got 5.");
    CHECK(format_logic_message(0, "4", "4", "2") == "On input 2: expected 4 but got 4.");
    CHECK(format_logic_message(2, "[1, 2]", "[1]", "[3, 4], 7") ==
          "On input [3, 4], 7: expected [1, 2] but got [1].");
    CHECK(format_logic_message(3, "6", "5", "") == "On input case 3: expected 6 but got 5.");
}

TEST_CASE("the shipped pattern inventory matches the built-in one") {
    auto shipped = load_error_patterns(testsupport::asset_dir() / "analyzer_regexes.json");
    CHECK(shipped == default_error_patterns());

    testsupport::TempDir tmp;
    CHECK_THROWS_AS(load_error_patterns(tmp.path() / "missing.json"), PathError);

    auto bad = tmp.path() / "bad.json";
    testsupport::write_file(bad, "{\"patterns\": [{\"language\": \"python\", \"kind\": "
                                 "\"compile\", \"pattern\": \"(unclosed\", \"line_group\": 1, "
                                 "\"message_group\": 0}]}");
    CHECK_THROWS_AS(load_error_patterns(bad), ParseError);

    auto junk = tmp.path() / "junk.json";
    testsupport::write_file(junk, "not json at all");
    CHECK_THROWS_AS(load_error_patterns(junk), ParseError);
}
