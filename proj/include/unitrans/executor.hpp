#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "unitrans/language.hpp"

namespace unitrans {

// Complete source file text awaiting two substitutions. Both markers must sit
// alone on their own line, exactly once each.
class ExecTemplate {
public:
    ExecTemplate(Language lang, std::string text);

    Language language() const { return lang_; }
    const std::string& text() const { return text_; }

    // Lines strictly above the {{PROGRAM}} marker; the program's line k lands
    // on raw line prefix_line_count() + k.
    std::size_t prefix_line_count() const { return prefix_lines_; }

    std::string materialize(const std::string& program, const std::string& tests) const;

private:
    Language lang_;
    std::string text_;
    std::size_t prefix_lines_ = 0;
};

// Built-in template for each language (tmp.py / tmp.java / tmp.cpp bodies).
const ExecTemplate& default_template(Language lang);

// Substitutes a program into suite text that carries only a {{PROGRAM}}
// marker, its tests already written out.
std::string materialize_eval(const std::string& suite_text, const std::string& program);

// How one language is compiled and run. argv entries may use the
// placeholders {source} and {exe}; commands run inside the scratch dir.
struct Toolchain {
    Language language = Language::python;
    std::string source_filename;
    std::vector<std::string> compile_argv;  // empty: no compile stage
    std::vector<std::string> run_argv;
    bool rlimit_memory = true;  // JVM languages cap memory via flags instead
};

Toolchain default_toolchain(Language lang);

struct ExecLimits {
    int wall_timeout_ms = 10'000;
    int compile_timeout_ms = 30'000;
    std::uint64_t memory_bytes = 512ull * 1024 * 1024;
};

struct ProcessResult {
    int exit_code = -1;       // -1 when terminated by a signal
    std::string term_signal;  // "SIGSEGV" etc., empty when exited normally
    bool timed_out = false;
    bool spawn_failed = false;
    std::string stdout_text;
    std::string stderr_text;
    double wall_seconds = 0.0;
};

enum class ExecStatus { ok, compile_error, runtime_error, timeout, infra_error };

std::string exec_status_tag(ExecStatus s);
ExecStatus exec_status_from_tag(std::string_view tag);

ExecStatus classify_run(const ProcessResult& r);
ExecStatus classify_compile(const ProcessResult& r);

// A materialized program in its own scratch directory, compiled once and
// runnable many times. Removes the scratch dir on destruction.
class PreparedProgram {
public:
    PreparedProgram(PreparedProgram&&) noexcept;
    PreparedProgram& operator=(PreparedProgram&&) noexcept;
    PreparedProgram(const PreparedProgram&) = delete;
    PreparedProgram& operator=(const PreparedProgram&) = delete;
    ~PreparedProgram();

    // Compile-stage outcome; ok when the toolchain has no compile stage.
    ExecStatus build_status() const { return build_status_; }
    const ProcessResult& compile_result() const { return compile_; }

    // Runs the program once. Callers must not run a program whose
    // build_status() is not ok.
    ProcessResult run(const std::vector<std::string>& extra_args = {}) const;

    const std::filesystem::path& scratch_dir() const { return dir_; }

private:
    friend class Executor;
    PreparedProgram() = default;

    Toolchain toolchain_;
    ExecLimits limits_;
    std::filesystem::path dir_;
    ProcessResult compile_;
    ExecStatus build_status_ = ExecStatus::infra_error;
    bool owns_dir_ = false;
};

class Executor {
public:
    explicit Executor(ExecLimits limits = {}) : limits_(limits) {}

    const ExecLimits& limits() const { return limits_; }

    // Writes `file_content` under the toolchain's source filename in a fresh
    // scratch dir and runs the compile stage if there is one.
    PreparedProgram prepare(const Toolchain& tc, const std::string& file_content) const;

private:
    ExecLimits limits_;
};

// One verdict line of the case protocol:
//   #CASE <i> <PASS|FAIL> expected=<literal> actual=<literal>
enum class CaseStatus { pass, fail, compile_error, runtime_error, timeout, infra_error };

std::string case_status_tag(CaseStatus s);
CaseStatus case_status_from_tag(std::string_view tag);

struct CaseOutcome {
    std::size_t index = 0;
    CaseStatus status = CaseStatus::infra_error;
    std::string expected;  // compact literal text, empty when never reached
    std::string actual;

    bool operator==(const CaseOutcome&) const = default;
};

// Pulls every well-formed verdict line out of a stdout capture. Literals are
// scanned quote-aware, so strings may contain spaces.
std::vector<CaseOutcome> parse_verdict_lines(const std::string& stdout_text);

struct CaseRunReport {
    ExecStatus exec_status = ExecStatus::infra_error;
    std::vector<CaseOutcome> cases;  // one entry per expected case index
    std::string error_text;          // stderr of the failing stage
    double wall_seconds = 0.0;
    // Line accounting for error extraction: template lines above the program
    // in the materialized file, and the program's own line count. Zero means
    // unknown; run_case_file cannot see the split, so whoever materialized
    // the file fills these in.
    std::size_t prefix_line_count = 0;
    std::size_t program_line_count = 0;

    std::size_t passed() const;
    double pass_fraction() const;
    bool all_passed() const;
};

// Prepares and runs a file speaking the case protocol, then reconciles the
// printed verdicts against `case_count`: cases missing after a timeout are
// timeouts, after a crash runtime errors, after a clean exit infra errors.
CaseRunReport run_case_file(const Executor& exec, const Toolchain& tc,
                            const std::string& file_content, std::size_t case_count);

struct ToolchainAvailability {
    bool available = false;
    std::string detail;  // version line or failure note
};

// Checks python3, g++, and javac+java on PATH by running their version
// commands.
std::map<Language, ToolchainAvailability> probe_toolchains();

}  // namespace unitrans
