#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitrans/analyzer.hpp"
#include "unitrans/corpus.hpp"
#include "unitrans/executor.hpp"
#include "unitrans/testcase.hpp"

namespace unitrans {

inline constexpr int kRecordSchemaVersion = 1;

// One step of a pipeline run. `gen` covers the test-case generation calls,
// `augment` the translation call (also the basic-prompt fallback), `inspect`
// the first run against the generated cases, `repair` each fix attempt.
enum class Phase { gen, augment, inspect, repair };

std::string phase_tag(Phase p);
Phase phase_from_tag(std::string_view tag);

enum class PreliminaryVerdict { passed_generated_cases, failed_generated_cases, no_cases_available };

std::string preliminary_verdict_tag(PreliminaryVerdict v);
PreliminaryVerdict preliminary_verdict_from_tag(std::string_view tag);

// One phase_trace element. `completion` is the adopted first output; the
// remaining samples stay in `completions` for offline analysis. Repair
// entries carry the error that drove them, the inspection report of the
// candidate, and whether the candidate was adopted or rejected by the
// monotonicity guard.
struct PhaseEntry {
    Phase phase = Phase::gen;
    std::string prompt;
    std::string completion;
    std::vector<std::string> completions;
    std::string program;
    std::optional<CaseRunReport> report;
    std::optional<ErrorInfo> error;
    bool adopted = true;
};

struct EvalVerdict {
    bool ca_pass = false;
    std::optional<bool> em_match;  // absent when no ground truth exists
    double pass_fraction = 0.0;

    bool operator==(const EvalVerdict&) const = default;
};

// Everything one task produced. Serialized records contain no timestamps or
// wall-clock durations, so identical runs serialize byte-identically.
struct RunRecord {
    int schema_version = kRecordSchemaVersion;
    TranslationTask task;
    std::string function_name;
    std::vector<TestCase> generated_cases;
    std::vector<std::string> case_diagnostics;
    std::vector<PhaseEntry> phase_trace;
    std::string final_program;
    PreliminaryVerdict preliminary_verdict = PreliminaryVerdict::no_cases_available;
    bool infra_failed = false;        // LLM or spawn failure, excluded from metrics
    std::string infra_reason;
    bool eval_skipped = false;        // no evaluation suite for the target language
    std::string eval_skip_reason;
    std::optional<EvalVerdict> eval_verdict;

    std::size_t repair_count() const;

    nlohmann::json to_json() const;
    static RunRecord from_json(const nlohmann::json& j);
};

// Piecewise converters, shared with the CLI. Reports serialize without
// wall_seconds: a round-tripped report reads it back as zero.
nlohmann::json task_to_json(const TranslationTask& t);
TranslationTask task_from_json(const nlohmann::json& j);
nlohmann::json error_info_to_json(const ErrorInfo& e);
ErrorInfo error_info_from_json(const nlohmann::json& j);
nlohmann::json case_run_report_to_json(const CaseRunReport& r);
CaseRunReport case_run_report_from_json(const nlohmann::json& j);

// JSONL: one sorted-key JSON object per line, newline-terminated.
std::string records_to_jsonl(const std::vector<RunRecord>& records);
void write_records(const std::filesystem::path& path, const std::vector<RunRecord>& records);

// Throws PathError when the file is missing, ParseError on malformed JSON
// or a schema version this reader does not understand.
std::vector<RunRecord> read_records(const std::filesystem::path& path);

}  // namespace unitrans
