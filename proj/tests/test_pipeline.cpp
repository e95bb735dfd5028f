#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include <unitrans/errors.hpp>
#include <unitrans/pipeline.hpp>

#include "support.hpp"

using namespace unitrans;

namespace {

const char* kPythonAdd = "def add(a, b):\n    return a + b\n";

const char* kGenInputs = "[Input_1]\n3, 4\n[Input_2]\n10, 20\n";

const char* kCppAdd = "int add(int a, int b) {\n    return a + b;\n}";

const char* kCppAddBroken = "int add(int a, int b) {\n    return a + b\n}";

// Right on 3, 4 only; the second generated case catches it.
const char* kCppAddPartial =
    "int add(int a, int b) {\n    if (a == 3) {\n        return 7;\n    }\n    return 0;\n}";

const char* kCppAddWrong = "int add(int a, int b) {\n    return 0;\n}";

const char* kCppEvalSuite =
    "#include <iostream>\n"
    "\n"
    "{{PROGRAM}}\n"
    "\n"
    "int main() {\n"
    "    {\n"
    "        int expected = 7;\n"
    "        int actual = add(3, 4);\n"
    "        std::cout << \"#CASE 0 \" << (actual == expected ? \"PASS\" : \"FAIL\")\n"
    "                  << \" expected=\" << expected << \" actual=\" << actual << std::endl;\n"
    "    }\n"
    "    {\n"
    "        int expected = 30;\n"
    "        int actual = add(10, 20);\n"
    "        std::cout << \"#CASE 1 \" << (actual == expected ? \"PASS\" : \"FAIL\")\n"
    "                  << \" expected=\" << expected << \" actual=\" << actual << std::endl;\n"
    "    }\n"
    "    return 0;\n"
    "}\n";

Sample add_sample() {
    Sample s;
    s.id = "add";
    s.function_name = "add";
    s.programs[Language::python] = kPythonAdd;
    s.programs[Language::cpp] = kCppAdd;
    s.eval_suites[Language::cpp] = kCppEvalSuite;
    return s;
}

TranslationTask py_to_cpp(const std::string& id = "add") {
    return {id, Language::python, Language::cpp};
}

struct Rig {
    std::shared_ptr<ScriptedBackend> backend = std::make_shared<ScriptedBackend>();
    std::unique_ptr<Client> client;
    Executor executor;
    Analyzer analyzer;
    PipelineConfig cfg;
    PipelineDeps deps;

    Rig() {
        client = std::make_unique<Client>(backend);
        cfg.sampling.n_samples = 2;
        deps.client = client.get();
        deps.executor = &executor;
        deps.analyzer = &analyzer;
    }
};

std::vector<Phase> phases(const RunRecord& r) {
    std::vector<Phase> out;
    for (const PhaseEntry& e : r.phase_trace) out.push_back(e.phase);
    return out;
}

}  // namespace

TEST_CASE("correct first translation needs no repair") {
    Rig rig;
    rig.backend->script("ten groups", {kGenInputs});
    rig.backend->script("Translate given Python", {std::string(kCppAdd) + "\nEND_OF_CASE"});

    RunRecord r = run_task(add_sample(), py_to_cpp(), rig.cfg, rig.deps);

    CHECK(!r.infra_failed);
    CHECK(phases(r) == std::vector<Phase>{Phase::gen, Phase::augment, Phase::inspect});
    CHECK(r.preliminary_verdict == PreliminaryVerdict::passed_generated_cases);
    CHECK(r.repair_count() == 0);
    CHECK(r.function_name == "add");
    REQUIRE(r.generated_cases.size() == 2);
    CHECK(r.generated_cases[0].output.to_json() == nlohmann::json(7));
    CHECK(r.generated_cases[1].output.to_json() == nlohmann::json(30));

    CHECK(r.phase_trace[0].prompt.find("ten groups of differentiated valid inputs") !=
          std::string::npos);
    CHECK(r.phase_trace[1].prompt.find("ensure the translated C++ code can pass") !=
          std::string::npos);
    CHECK(r.phase_trace[1].prompt.find("Inputs:") != std::string::npos);
    REQUIRE(r.phase_trace[2].report.has_value());
    CHECK(r.phase_trace[2].report->all_passed());
    CHECK(r.phase_trace[2].report->prefix_line_count > 0);
    CHECK(r.phase_trace[2].report->program_line_count == 3);
    CHECK(r.final_program == kCppAdd);
    CHECK(r.phase_trace[1].completions.size() == 2);
}

TEST_CASE("compile error is repaired through the annotated-line prompt") {
    Rig rig;
    rig.backend->script("ten groups", {kGenInputs});
    rig.backend->script("Translate given Python", {kCppAddBroken});
    rig.backend->script("Fix the buggy", {kCppAdd});

    RunRecord r = run_task(add_sample(), py_to_cpp(), rig.cfg, rig.deps);

    CHECK(phases(r) == std::vector<Phase>{Phase::gen, Phase::augment, Phase::inspect,
                                          Phase::repair});
    REQUIRE(r.repair_count() == 1);
    const PhaseEntry& repair = r.phase_trace[3];
    CHECK(repair.prompt.find("Fix the buggy line (marked") != std::string::npos);
    CHECK(repair.prompt.find("<Buggy Line>") != std::string::npos);
    REQUIRE(repair.error.has_value());
    CHECK(repair.error->kind == ErrorKind::compile);
    CHECK(repair.error->program_line.has_value());
    CHECK(repair.adopted);
    REQUIRE(repair.report.has_value());
    CHECK(repair.report->all_passed());
    CHECK(r.preliminary_verdict == PreliminaryVerdict::passed_generated_cases);
    CHECK(r.final_program == kCppAdd);
}

TEST_CASE("repair rounds stop at the configured bound") {
    Rig rig;
    rig.backend->script("ten groups", {kGenInputs});
    rig.backend->script("Translate given Python", {kCppAddWrong});
    rig.backend->script("Fix the buggy", {kCppAddWrong});
    rig.cfg.max_repair_iters = 2;

    RunRecord r = run_task(add_sample(), py_to_cpp(), rig.cfg, rig.deps);
    CHECK(r.repair_count() == 2);
    CHECK(r.preliminary_verdict == PreliminaryVerdict::failed_generated_cases);
    // 1 generation + 1 translation + 2 repairs
    CHECK(rig.backend->request_count() == 4);

    Rig frozen;
    frozen.backend->script("ten groups", {kGenInputs});
    frozen.backend->script("Translate given Python", {kCppAddWrong});
    frozen.cfg.max_repair_iters = 0;
    RunRecord none = run_task(add_sample(), py_to_cpp(), frozen.cfg, frozen.deps);
    CHECK(none.repair_count() == 0);
    CHECK(none.preliminary_verdict == PreliminaryVerdict::failed_generated_cases);
    CHECK(frozen.backend->request_count() == 2);
}

TEST_CASE("adoption guard keeps the better predecessor") {
    auto scripted = [](bool guard) {
        Rig rig;
        rig.backend->script("ten groups", {kGenInputs});
        rig.backend->script("Translate given Python", {kCppAddPartial});
        rig.backend->script("Fix the buggy", {kCppAddWrong});
        rig.cfg.adoption_guard = guard;
        return run_task(add_sample(), py_to_cpp(), rig.cfg, rig.deps);
    };

    RunRecord guarded = scripted(true);
    REQUIRE(guarded.repair_count() == 1);
    const PhaseEntry& rejected = guarded.phase_trace.back();
    CHECK(rejected.phase == Phase::repair);
    CHECK(!rejected.adopted);
    REQUIRE(rejected.error.has_value());
    CHECK(rejected.error->kind == ErrorKind::logic);
    CHECK(rejected.error->message.find("expected 30 but got 0") != std::string::npos);
    CHECK(guarded.final_program == kCppAddPartial);
    CHECK(guarded.preliminary_verdict == PreliminaryVerdict::failed_generated_cases);

    RunRecord unguarded = scripted(false);
    REQUIRE(unguarded.repair_count() == 1);
    CHECK(unguarded.phase_trace.back().adopted);
    CHECK(unguarded.final_program == kCppAddWrong);
}

TEST_CASE("no valid case falls back to the plain prompt") {
    Rig rig;
    rig.backend->script("ten groups", {"I could not think of any inputs."});
    rig.backend->script("Translate given Python", {kCppAdd});

    RunRecord r = run_task(add_sample(), py_to_cpp(), rig.cfg, rig.deps);

    CHECK(r.generated_cases.empty());
    CHECK(r.preliminary_verdict == PreliminaryVerdict::no_cases_available);
    CHECK(phases(r) == std::vector<Phase>{Phase::gen, Phase::gen, Phase::gen, Phase::augment});
    CHECK(r.phase_trace.back().prompt.find("Given test cases:") == std::string::npos);
    CHECK(r.phase_trace.back().prompt.find("Translate given Python code to C++ code.") !=
          std::string::npos);
    CHECK(r.repair_count() == 0);
    CHECK(r.final_program == kCppAdd);
    CHECK(!r.infra_failed);
}

TEST_CASE("backend failure marks the record instead of throwing") {
    Rig rig;
    rig.backend->script("ten groups", {kGenInputs});
    // No rule matches the translation prompt.

    RunRecord r = run_task(add_sample(), py_to_cpp(), rig.cfg, rig.deps);
    CHECK(r.infra_failed);
    CHECK(r.infra_reason.find("replay miss") != std::string::npos);
    CHECK(phases(r) == std::vector<Phase>{Phase::gen});
    CHECK(r.final_program.empty());
}

TEST_CASE("config ceilings are enforced") {
    Rig rig;
    rig.cfg.k_cases = 0;
    CHECK_THROWS_AS((void)run_task(add_sample(), py_to_cpp(), rig.cfg, rig.deps), ArgumentError);
    rig.cfg.k_cases = kMaxCasesPerPrompt + 1;
    CHECK_THROWS_AS(validate_pipeline_config(rig.cfg), ArgumentError);
    rig.cfg.k_cases = 3;
    rig.cfg.max_repair_iters = kMaxRepairRounds + 1;
    CHECK_THROWS_AS(validate_pipeline_config(rig.cfg), ArgumentError);
    rig.cfg.max_repair_iters = 0;
    CHECK_NOTHROW(validate_pipeline_config(rig.cfg));
    rig.cfg.input_gen_attempts = 0;
    CHECK_THROWS_AS(validate_pipeline_config(rig.cfg), ArgumentError);
    rig.cfg.input_gen_attempts = 3;
    rig.cfg.workers = 0;
    CHECK_THROWS_AS(validate_pipeline_config(rig.cfg), ArgumentError);
}

TEST_CASE("evaluation runs the suite, not the generated cases") {
    Executor exec;
    Sample sample = add_sample();

    RunRecord identical;
    identical.task = py_to_cpp();
    identical.final_program = kCppAdd;
    RunRecord evaluated = evaluate_record(identical, sample, exec);
    REQUIRE(evaluated.eval_verdict.has_value());
    CHECK(evaluated.eval_verdict->ca_pass);
    REQUIRE(evaluated.eval_verdict->em_match.has_value());
    CHECK(*evaluated.eval_verdict->em_match);
    CHECK(evaluated.eval_verdict->pass_fraction == doctest::Approx(1.0));

    RunRecord reordered = identical;
    reordered.final_program = "int add(int a, int b) {\n    return b + a;\n}";
    reordered = evaluate_record(reordered, sample, exec);
    REQUIRE(reordered.eval_verdict.has_value());
    CHECK(reordered.eval_verdict->ca_pass);
    CHECK(!*reordered.eval_verdict->em_match);

    RunRecord partial = identical;
    partial.final_program = kCppAddPartial;
    partial = evaluate_record(partial, sample, exec);
    REQUIRE(partial.eval_verdict.has_value());
    CHECK(!partial.eval_verdict->ca_pass);
    CHECK(partial.eval_verdict->pass_fraction == doctest::Approx(0.5));

    Sample truthless = sample;
    truthless.programs.erase(Language::cpp);
    RunRecord no_truth = evaluate_record(identical, truthless, exec);
    REQUIRE(no_truth.eval_verdict.has_value());
    CHECK(no_truth.eval_verdict->ca_pass);
    CHECK(!no_truth.eval_verdict->em_match.has_value());

    Sample suiteless = sample;
    suiteless.eval_suites.erase(Language::cpp);
    RunRecord skipped = evaluate_record(identical, suiteless, exec);
    CHECK(skipped.eval_skipped);
    CHECK(skipped.eval_skip_reason.find("C++") != std::string::npos);
    CHECK(!skipped.eval_verdict.has_value());

    Sample caseless = sample;
    caseless.eval_suites[Language::cpp] = "{{PROGRAM}}\nint main() { return 0; }\n";
    RunRecord empty_suite = evaluate_record(identical, caseless, exec);
    CHECK(empty_suite.eval_skipped);
    CHECK(empty_suite.eval_skip_reason.find("no cases") != std::string::npos);

    RunRecord infra;
    infra.task = py_to_cpp();
    infra.infra_failed = true;
    infra.infra_reason = "backend failure";
    RunRecord untouched = evaluate_record(infra, sample, exec);
    CHECK(untouched.infra_failed);
    CHECK(!untouched.eval_verdict.has_value());
    CHECK(!untouched.eval_skipped);
}

TEST_CASE("suite case counting sees only literal markers") {
    CHECK(eval_suite_case_count(kCppEvalSuite) == 2);
    CHECK(eval_suite_case_count("") == 0);
    CHECK(eval_suite_case_count("print('#CASE 0 PASS expected=1 actual=1')") == 1);
    CHECK(eval_suite_case_count("#CASEY") == 0);
}

TEST_CASE("batch keeps task order and absorbs per-task failures") {
    testsupport::TempDir dir;
    auto put = [&](const std::string& id, const std::string& py) {
        testsupport::write_file(dir.path() / id / "program.py", py);
        testsupport::write_file(dir.path() / id / "program.cpp", kCppAdd);
        testsupport::write_file(dir.path() / id / "suite.cpp", kCppEvalSuite);
    };
    put("t1", kPythonAdd);
    put("t2", kPythonAdd);
    testsupport::write_file(dir.path() / "manifest.json",
                            R"({"samples": [{"id": "t1", "function_name": "add"},)"
                            R"( {"id": "t2", "function_name": "add"}]})");
    Corpus corpus = load_corpus(dir.path());
    REQUIRE(corpus.size() == 2);

    Rig rig;
    rig.backend->script("ten groups", {kGenInputs});
    rig.backend->script("Translate given Python", {kCppAdd});

    std::vector<TranslationTask> tasks = {py_to_cpp("t1"), py_to_cpp("ghost"), py_to_cpp("t2")};
    BatchResult result = run_batch(corpus, tasks, rig.cfg, rig.deps);

    REQUIRE(result.records.size() == 3);
    CHECK(result.records[0].task.sample_id == "t1");
    CHECK(result.records[1].task.sample_id == "ghost");
    CHECK(result.records[2].task.sample_id == "t2");
    CHECK(result.records[1].infra_failed);
    CHECK(result.records[1].infra_reason.find("not in corpus") != std::string::npos);
    CHECK(!result.records[0].infra_failed);
    CHECK(!result.records[2].infra_failed);

    CHECK(result.summary.n_tasks == 3);
    CHECK(result.summary.n_infra_failures == 1);
    CHECK(result.summary.n_with_cases == 2);
    CHECK(result.summary.n_cases_generated == 4);
    CHECK(result.summary.n_passed_preliminary == 2);
    CHECK(result.summary.n_repairs_attempted == 0);

    BatchResult empty = run_batch(corpus, {}, rig.cfg, rig.deps);
    CHECK(empty.records.empty());
    CHECK(empty.summary == BatchSummary{});
}

TEST_CASE("replayed batches are byte-identical") {
    const char* python_sub = "def sub(a, b):\n    return a - b\n";
    const char* cpp_sub_broken = "int sub(int a, int b) {\n    return a - b\n}";
    const char* cpp_sub = "int sub(int a, int b) {\n    return a - b;\n}";

    testsupport::TempDir dir;
    testsupport::write_file(dir.path() / "add" / "program.py", kPythonAdd);
    testsupport::write_file(dir.path() / "add" / "program.cpp", kCppAdd);
    testsupport::write_file(dir.path() / "add" / "suite.cpp", kCppEvalSuite);
    testsupport::write_file(dir.path() / "sub" / "program.py", python_sub);
    testsupport::write_file(dir.path() / "sub" / "program.cpp", cpp_sub);
    testsupport::write_file(dir.path() / "sub" / "suite.cpp",
                            "{{PROGRAM}}\n#include <cstdio>\nint main() {\n"
                            "    std::printf(\"#CASE 0 %s expected=-1 actual=%d\\n\","
                            " sub(3, 4) == -1 ? \"PASS\" : \"FAIL\", sub(3, 4));\n"
                            "    return 0;\n}\n");
    Corpus corpus = load_corpus(dir.path());
    std::vector<TranslationTask> tasks = tasks_for_pair(corpus, Language::python, Language::cpp);
    REQUIRE(tasks.size() == 2);

    std::filesystem::path replay_file = dir.path() / "replay.jsonl";
    PipelineConfig cfg;
    cfg.sampling.n_samples = 2;
    Executor executor;
    Analyzer analyzer;

    {
        auto scripted = std::make_shared<ScriptedBackend>();
        scripted->script("ten groups", {kGenInputs});
        // "add" translates cleanly; "sub" needs one repair. The two tasks'
        // prompts differ by program text, so replay keys stay distinct.
        scripted->script("def add", {kCppAdd});
        scripted->script("def sub", {cpp_sub_broken});
        scripted->script("Fix the buggy", {cpp_sub});
        Client client(scripted);
        client.record_to(std::make_shared<ReplayRecorder>(replay_file));
        PipelineDeps deps{&client, &executor, &analyzer, std::nullopt};
        BatchResult recorded = run_batch(corpus, tasks, cfg, deps);
        CHECK(recorded.summary.n_repairs_attempted == 1);
        CHECK(recorded.summary.n_repairs_adopted == 1);
    }

    auto run_replayed = [&](std::size_t workers) {
        Client client(std::make_shared<ReplayBackend>(replay_file));
        PipelineDeps deps{&client, &executor, &analyzer, std::nullopt};
        PipelineConfig run_cfg = cfg;
        run_cfg.workers = workers;
        return run_batch(corpus, tasks, run_cfg, deps);
    };

    BatchResult first = run_replayed(1);
    BatchResult second = run_replayed(1);
    BatchResult parallel = run_replayed(2);

    std::string a = records_to_jsonl(first.records);
    CHECK(a == records_to_jsonl(second.records));
    CHECK(a == records_to_jsonl(parallel.records));
    CHECK(first.summary == second.summary);
    CHECK(first.summary.n_repairs_attempted == 1);
    CHECK(a.find("\"wall_seconds\"") == std::string::npos);
    CHECK(a.find("/tmp/") == std::string::npos);
}
