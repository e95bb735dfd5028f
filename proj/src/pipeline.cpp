#include "unitrans/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "unitrans/codeform.hpp"
#include "unitrans/errors.hpp"
#include "unitrans/harnessgen.hpp"
#include "unitrans/prompting.hpp"
#include "unitrans/testcase.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

// Spawn failures tag their stderr; every other infra-looking report (compile
// timeout, garbage output) stays attributable to the candidate program.
bool spawn_infrastructure_failure(const CaseRunReport& report) {
    return report.exec_status == ExecStatus::infra_error &&
           report.error_text.rfind("unitrans-exec:", 0) == 0;
}

void mark_infra(RunRecord& record, std::string reason) {
    record.infra_failed = true;
    record.infra_reason = std::move(reason);
}

std::vector<std::string> completion_texts(const std::vector<Completion>& completions) {
    std::vector<std::string> out;
    out.reserve(completions.size());
    for (const Completion& c : completions) out.push_back(c.text);
    return out;
}

std::optional<std::vector<Completion>> complete_or_mark(RunRecord& record, Client& client,
                                                        const std::string& prompt,
                                                        const SamplingConfig& sampling) {
    try {
        return client.complete(prompt, sampling);
    } catch (const ContextOverflowError& e) {
        mark_infra(record, std::string("context overflow: ") + e.what());
    } catch (const ConfigError& e) {
        mark_infra(record, std::string("backend configuration: ") + e.what());
    } catch (const ReplayMissError& e) {
        mark_infra(record, std::string("replay miss: ") + e.what());
    } catch (const BackendError& e) {
        mark_infra(record, std::string("backend failure: ") + e.what());
    }
    return std::nullopt;
}

// An unanswerable completion is the model's failure, not the pipeline's:
// the empty program simply fails inspection.
std::string program_from_completion(const std::string& raw, Language target) {
    try {
        return normalize_target(strip_buggy_marker(extract_answer(raw), target), target);
    } catch (const EmptyAnswerError&) {
        return "";
    }
}

CaseRunReport inspect_against_cases(const Executor& exec, Language target,
                                    const std::string& function_name, const std::string& program,
                                    const std::vector<TestCase>& cases) {
    const ExecTemplate& tmpl = default_template(target);
    std::string harness = build_case_harness(target, function_name, cases);
    std::string content = tmpl.materialize(program, harness);
    CaseRunReport report = run_case_file(exec, default_toolchain(target), content, cases.size());
    report.prefix_line_count = tmpl.prefix_line_count();
    report.program_line_count = split_lines(program).size();
    return report;
}

// The case shown in a repair prompt: the analyzer's pick when it names one,
// the first selected case for compile errors (nothing ran), otherwise the
// first case the report shows not passing.
const TestCase& repair_case(const ErrorInfo& err, const CaseRunReport& report,
                            const std::vector<TestCase>& selected) {
    if (err.failing_case_index && *err.failing_case_index < selected.size()) {
        return selected[*err.failing_case_index];
    }
    if (err.kind != ErrorKind::compile) {
        for (const CaseOutcome& c : report.cases) {
            if (c.status != CaseStatus::pass && c.index < selected.size()) {
                return selected[c.index];
            }
        }
    }
    return selected.front();
}

std::optional<OneShotExemplar> exemplar_for(const PipelineDeps& deps, PromptKind kind,
                                            Language src, std::optional<Language> tgt) {
    if (!deps.exemplar_dir) return std::nullopt;
    return load_exemplar(*deps.exemplar_dir, kind, src, tgt);
}

}  // namespace

void validate_pipeline_config(const PipelineConfig& cfg) {
    if (cfg.k_cases == 0 || cfg.k_cases > kMaxCasesPerPrompt) {
        throw ArgumentError("k_cases must be in [1, " + std::to_string(kMaxCasesPerPrompt) + "]");
    }
    if (cfg.max_repair_iters > kMaxRepairRounds) {
        throw ArgumentError("max_repair_iters must be at most " +
                            std::to_string(kMaxRepairRounds));
    }
    if (cfg.input_gen_attempts == 0 || cfg.input_gen_attempts > kMaxGenAttempts) {
        throw ArgumentError("input_gen_attempts must be in [1, " +
                            std::to_string(kMaxGenAttempts) + "]");
    }
    if (cfg.workers == 0 || cfg.workers > kMaxPipelineWorkers) {
        throw ArgumentError("workers must be in [1, " + std::to_string(kMaxPipelineWorkers) + "]");
    }
    if (cfg.sampling.n_samples < 1) throw ArgumentError("n_samples must be positive");
}

CaseGeneration generate_cases(const Sample& sample, Language source_lang,
                              const PipelineConfig& cfg, const PipelineDeps& deps) {
    validate_pipeline_config(cfg);
    if (!deps.client || !deps.executor) {
        throw ArgumentError("pipeline dependencies are incomplete");
    }
    auto source_it = sample.programs.find(source_lang);
    if (source_it == sample.programs.end()) {
        std::string msg = "sample " + sample.id + " has no ";
        msg += display_name(source_lang);
        msg += " program";
        throw ArgumentError(msg);
    }
    const std::string& source_program = source_it->second;

    CaseGeneration out;
    std::string gen_prompt =
        with_exemplar(exemplar_for(deps, PromptKind::input_gen, source_lang, {}),
                      render_input_gen_prompt(source_lang, source_program));
    std::set<std::string> seen_keys;
    for (std::size_t attempt = 0; attempt < cfg.input_gen_attempts && out.cases.empty();
         ++attempt) {
        std::vector<Completion> completions;
        try {
            completions = deps.client->complete(gen_prompt, cfg.sampling);
        } catch (const ContextOverflowError& e) {
            out.backend_error = std::string("context overflow: ") + e.what();
            return out;
        } catch (const ConfigError& e) {
            out.backend_error = std::string("backend configuration: ") + e.what();
            return out;
        } catch (const ReplayMissError& e) {
            out.backend_error = std::string("replay miss: ") + e.what();
            return out;
        } catch (const BackendError& e) {
            out.backend_error = std::string("backend failure: ") + e.what();
            return out;
        }

        GenAttempt gen;
        gen.prompt = gen_prompt;
        gen.completion = first_output(completions);
        gen.completions = completion_texts(completions);
        out.attempts.push_back(std::move(gen));

        ValidationOutcome outcome;
        try {
            outcome = validate_inputs(*deps.executor, default_toolchain(source_lang),
                                      default_template(source_lang), source_program,
                                      sample.function_name,
                                      parse_candidate_inputs(out.attempts.back().completion));
        } catch (const SourceDefectError& e) {
            out.diagnostics.push_back(std::string("source defect: ") + e.what());
            break;
        }
        for (std::string& d : outcome.diagnostics) out.diagnostics.push_back(std::move(d));
        for (TestCase& c : outcome.cases) {
            if (seen_keys.insert(c.key()).second) out.cases.push_back(std::move(c));
        }
    }
    return out;
}

RunRecord run_task(const Sample& sample, const TranslationTask& task, const PipelineConfig& cfg,
                   const PipelineDeps& deps) {
    validate_pipeline_config(cfg);
    if (!deps.client || !deps.executor || !deps.analyzer) {
        throw ArgumentError("pipeline dependencies are incomplete");
    }
    const Language src = task.source_lang;
    const Language tgt = task.target_lang;

    RunRecord record;
    record.task = task;
    record.function_name = sample.function_name;

    // Test-case generation: resample until one input survives validation
    // against the source program, accumulating across attempts. Throws when
    // the sample lacks a source-language program.
    CaseGeneration generation = generate_cases(sample, src, cfg, deps);
    const std::string& source_program = sample.programs.at(src);
    for (GenAttempt& attempt : generation.attempts) {
        PhaseEntry gen;
        gen.phase = Phase::gen;
        gen.prompt = std::move(attempt.prompt);
        gen.completion = std::move(attempt.completion);
        gen.completions = std::move(attempt.completions);
        record.phase_trace.push_back(std::move(gen));
    }
    record.case_diagnostics = std::move(generation.diagnostics);
    record.generated_cases = std::move(generation.cases);
    if (generation.backend_error) {
        mark_infra(record, *generation.backend_error);
        return record;
    }

    // Translation: augment with k selected cases when any are renderable in
    // the target language, otherwise fall back to the plain prompt.
    std::vector<TestCase> renderable;
    for (const TestCase& c : record.generated_cases) {
        if (c.renderable_for(tgt)) renderable.push_back(c);
    }
    std::vector<TestCase> selected = select_cases(renderable, cfg.k_cases, cfg.seed);

    std::string translate_prompt;
    if (selected.empty()) {
        record.preliminary_verdict = PreliminaryVerdict::no_cases_available;
        translate_prompt = with_exemplar(exemplar_for(deps, PromptKind::basic, src, tgt),
                                         render_basic_prompt(src, tgt, source_program));
    } else {
        translate_prompt =
            with_exemplar(exemplar_for(deps, PromptKind::augment, src, tgt),
                          render_augment_prompt(src, tgt, source_program, selected));
    }
    auto completions = complete_or_mark(record, *deps.client, translate_prompt, cfg.sampling);
    if (!completions) return record;

    PhaseEntry augment;
    augment.phase = Phase::augment;
    augment.prompt = translate_prompt;
    augment.completion = first_output(*completions);
    augment.completions = completion_texts(*completions);
    augment.program = program_from_completion(augment.completion, tgt);
    record.phase_trace.push_back(augment);
    record.final_program = augment.program;

    // Without cases there is no inspection oracle and no repair loop.
    if (selected.empty()) return record;

    std::string current_program = augment.program;
    CaseRunReport current_report = inspect_against_cases(*deps.executor, tgt,
                                                         sample.function_name, current_program,
                                                         selected);
    PhaseEntry inspect;
    inspect.phase = Phase::inspect;
    inspect.program = current_program;
    inspect.report = current_report;
    record.phase_trace.push_back(std::move(inspect));
    if (spawn_infrastructure_failure(current_report)) {
        mark_infra(record, "inspection could not run: " + current_report.error_text);
        record.preliminary_verdict = PreliminaryVerdict::failed_generated_cases;
        return record;
    }

    for (std::size_t round = 0;
         round < cfg.max_repair_iters && !current_report.all_passed(); ++round) {
        ErrorInfo err = deps.analyzer->extract_error(current_report, tgt, selected);
        const TestCase& failing = repair_case(err, current_report, selected);

        std::string repair_prompt;
        bool line_repair = (err.kind == ErrorKind::compile || err.kind == ErrorKind::runtime) &&
                           err.program_line.has_value();
        if (line_repair) {
            std::string annotated;
            try {
                annotated = annotate_buggy_line(current_program, *err.program_line, tgt);
            } catch (const ArgumentError&) {
                line_repair = false;  // stale line, fall back to the whole-program variant
            }
            if (line_repair) {
                repair_prompt = with_exemplar(
                    exemplar_for(deps, PromptKind::repair_compile_runtime, src, tgt),
                    render_compile_runtime_repair_prompt(tgt, annotated, failing, err.message));
            }
        }
        if (!line_repair) {
            repair_prompt =
                with_exemplar(exemplar_for(deps, PromptKind::repair_logic, src, tgt),
                              render_logic_repair_prompt(tgt, current_program, failing,
                                                         err.message));
        }

        auto repair_completions = complete_or_mark(record, *deps.client, repair_prompt,
                                                   cfg.sampling);
        if (!repair_completions) break;

        PhaseEntry repair;
        repair.phase = Phase::repair;
        repair.prompt = repair_prompt;
        repair.completion = first_output(*repair_completions);
        repair.completions = completion_texts(*repair_completions);
        repair.program = program_from_completion(repair.completion, tgt);
        repair.error = err;
        CaseRunReport candidate_report = inspect_against_cases(*deps.executor, tgt,
                                                               sample.function_name,
                                                               repair.program, selected);
        repair.report = candidate_report;
        if (spawn_infrastructure_failure(candidate_report)) {
            repair.adopted = false;
            record.phase_trace.push_back(std::move(repair));
            mark_infra(record, "repair inspection could not run: " + candidate_report.error_text);
            break;
        }
        repair.adopted = !cfg.adoption_guard ||
                         candidate_report.passed() >= current_report.passed();
        bool adopted = repair.adopted;
        record.phase_trace.push_back(std::move(repair));
        if (!adopted) break;  // a rejected candidate would only be regenerated verbatim
        current_program = record.phase_trace.back().program;
        current_report = candidate_report;
    }

    record.final_program = current_program;
    record.preliminary_verdict = current_report.all_passed()
                                     ? PreliminaryVerdict::passed_generated_cases
                                     : PreliminaryVerdict::failed_generated_cases;
    return record;
}

BatchResult run_batch(const Corpus& corpus, const std::vector<TranslationTask>& tasks,
                      const PipelineConfig& cfg, const PipelineDeps& deps) {
    validate_pipeline_config(cfg);
    BatchResult result;
    result.records.resize(tasks.size());
    result.summary.n_tasks = tasks.size();

    std::mutex progress_mutex;
    auto run_one = [&](std::size_t i) {
        const TranslationTask& task = tasks[i];
        try {
            const Sample* sample = corpus.find(task.sample_id);
            if (!sample) throw ArgumentError("sample not in corpus: " + task.sample_id);
            result.records[i] = run_task(*sample, task, cfg, deps);
        } catch (const std::exception& e) {
            RunRecord record;
            record.task = task;
            mark_infra(record, std::string("task aborted: ") + e.what());
            result.records[i] = std::move(record);
        }
        if (deps.on_record) {
            std::lock_guard<std::mutex> lock(progress_mutex);
            deps.on_record(i, result.records[i]);
        }
    };

    std::size_t workers = std::min(cfg.workers, tasks.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1)) {
                    run_one(i);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    for (const RunRecord& r : result.records) {
        if (r.infra_failed) ++result.summary.n_infra_failures;
        if (!r.generated_cases.empty()) ++result.summary.n_with_cases;
        result.summary.n_cases_generated += r.generated_cases.size();
        if (r.preliminary_verdict == PreliminaryVerdict::passed_generated_cases) {
            ++result.summary.n_passed_preliminary;
        }
        for (const PhaseEntry& e : r.phase_trace) {
            if (e.phase != Phase::repair) continue;
            ++result.summary.n_repairs_attempted;
            if (e.adopted) ++result.summary.n_repairs_adopted;
        }
    }
    return result;
}

std::size_t eval_suite_case_count(const std::string& suite_text) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = suite_text.find("#CASE ", pos)) != std::string::npos) {
        ++count;
        pos += 6;
    }
    return count;
}

RunRecord evaluate_record(RunRecord record, const Sample& sample, const Executor& exec) {
    if (record.infra_failed) return record;
    const Language tgt = record.task.target_lang;

    auto suite_it = sample.eval_suites.find(tgt);
    if (suite_it == sample.eval_suites.end()) {
        record.eval_skipped = true;
        record.eval_skip_reason = "no ";
        record.eval_skip_reason += display_name(tgt);
        record.eval_skip_reason += " evaluation suite";
        return record;
    }
    const std::string& suite = suite_it->second;
    std::size_t total = eval_suite_case_count(suite);
    if (total == 0) {
        record.eval_skipped = true;
        record.eval_skip_reason = "evaluation suite declares no cases";
        return record;
    }

    std::string content = materialize_eval(suite, record.final_program);
    CaseRunReport report = run_case_file(exec, default_toolchain(tgt), content, total);
    if (spawn_infrastructure_failure(report)) {
        mark_infra(record, "evaluation could not run: " + report.error_text);
        return record;
    }

    EvalVerdict verdict;
    verdict.ca_pass = report.all_passed();
    verdict.pass_fraction = report.pass_fraction();
    auto truth_it = sample.programs.find(tgt);
    if (truth_it != sample.programs.end()) {
        verdict.em_match =
            em_normalize(record.final_program, tgt) == em_normalize(truth_it->second, tgt);
    }
    record.eval_verdict = verdict;
    return record;
}

}  // namespace unitrans
