#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unitrans/analyzer.hpp"
#include "unitrans/corpus.hpp"
#include "unitrans/executor.hpp"
#include "unitrans/llm.hpp"
#include "unitrans/records.hpp"

namespace unitrans {

// Ceilings the config validator enforces, protecting the executor and the
// LLM budget from runaway settings.
inline constexpr std::size_t kMaxCasesPerPrompt = 50;
inline constexpr std::size_t kMaxRepairRounds = 10;
inline constexpr std::size_t kMaxGenAttempts = 10;
inline constexpr std::size_t kMaxPipelineWorkers = 32;

struct PipelineConfig {
    std::size_t k_cases = 3;
    std::size_t max_repair_iters = 1;
    std::size_t input_gen_attempts = 3;
    SamplingConfig sampling;
    std::uint64_t seed = 0;
    ExecLimits limits;
    // Keep a repaired program only when it passes at least as many generated
    // cases as its predecessor; off reproduces unguarded repair.
    bool adoption_guard = true;
    std::size_t workers = 1;
};

// Throws ArgumentError when a count is zero where it must not be or exceeds
// its hard cap (k_cases and input_gen_attempts are positive; max_repair_iters
// may be zero).
void validate_pipeline_config(const PipelineConfig& cfg);

// Shared handles, all borrowed and required except the exemplar directory.
struct PipelineDeps {
    Client* client = nullptr;
    const Executor* executor = nullptr;
    const Analyzer* analyzer = nullptr;
    std::optional<std::filesystem::path> exemplar_dir;
    // Progress hook, called once per finished task; run_batch serializes the
    // calls, so the callback itself needs no locking.
    std::function<void(std::size_t index, const RunRecord&)> on_record;
};

struct GenAttempt {
    std::string prompt;
    std::string completion;
    std::vector<std::string> completions;
};

struct CaseGeneration {
    std::vector<GenAttempt> attempts;
    std::vector<TestCase> cases;  // validated, deduplicated across attempts
    std::vector<std::string> diagnostics;
    std::optional<std::string> backend_error;  // set when an LLM call failed
};

// The test-case generation phase alone: prompt for inputs, validate each
// candidate by executing the source program, and resample until one case
// survives or the attempt budget runs out.
CaseGeneration generate_cases(const Sample& sample, Language source_lang,
                              const PipelineConfig& cfg, const PipelineDeps& deps);

// Runs one translation end to end: generate and validate test inputs against
// the source program, translate with the selected cases in the prompt (basic
// prompt when no case survived), inspect the translation against the
// generated cases, then repair failures up to max_repair_iters times. The
// returned record carries the full phase trace; eval_verdict stays empty
// until evaluate_record. LLM failures mark the record infrastructure-failed
// instead of throwing.
RunRecord run_task(const Sample& sample, const TranslationTask& task, const PipelineConfig& cfg,
                   const PipelineDeps& deps);

struct BatchSummary {
    std::size_t n_tasks = 0;
    std::size_t n_infra_failures = 0;
    std::size_t n_with_cases = 0;       // tasks with at least one validated case
    std::size_t n_cases_generated = 0;  // validated cases across all tasks
    std::size_t n_passed_preliminary = 0;
    std::size_t n_repairs_attempted = 0;
    std::size_t n_repairs_adopted = 0;

    bool operator==(const BatchSummary&) const = default;
};

struct BatchResult {
    std::vector<RunRecord> records;  // parallel to the task list
    BatchSummary summary;
};

// Runs every task, up to cfg.workers at a time. A task whose sample is
// missing or that throws becomes an infrastructure-failure record; nothing
// aborts the batch. Record order always matches task order.
BatchResult run_batch(const Corpus& corpus, const std::vector<TranslationTask>& tasks,
                      const PipelineConfig& cfg, const PipelineDeps& deps);

// Number of verdict emissions ("#CASE " markers) in an evaluation suite,
// counted before the program is substituted in.
std::size_t eval_suite_case_count(const std::string& suite_text);

// Runs final_program inside the sample's target-language evaluation suite
// and fills eval_verdict: ca_pass when every suite case passes, em_match
// against the sample's target-language program when present, pass_fraction
// = passed / total. Missing suite (or one declaring no cases) sets the
// skip marker instead; infrastructure-failed records pass through untouched.
RunRecord evaluate_record(RunRecord record, const Sample& sample, const Executor& exec);

}  // namespace unitrans
