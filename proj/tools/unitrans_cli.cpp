// unitrans: translate programs between Python, Java, and C++ with an LLM
// backend, validating and repairing the output by executing generated test
// cases. Four subcommands: probe, gen-tests, translate, evaluate.
//
// Every knob resolves as flag > config file > built-in default; the resolved
// value and its origin are printed in a run header on stderr. Progress goes
// to stderr, data to files and stdout. Exit codes: 0 success, 1 operational
// failure, 2 usage error. The API key is read only from the UNITRANS_API_KEY
// environment variable.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unitrans/corpus.hpp"
#include "unitrans/errors.hpp"
#include "unitrans/executor.hpp"
#include "unitrans/language.hpp"
#include "unitrans/llm.hpp"
#include "unitrans/metrics.hpp"
#include "unitrans/pipeline.hpp"
#include "unitrans/records.hpp"
#include "unitrans/testcase.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace unitrans;

namespace {

// Semantic usage problems CLI11 cannot express (src == tgt, malformed pair
// lists); mapped to exit code 2 like flag parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string display_value(const std::string& v) { return v.empty() ? "(empty)" : v; }
std::string display_value(bool v) { return v ? "true" : "false"; }
std::string display_value(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}
template <typename T>
std::string display_value(T v) {
    return std::to_string(v);
}

// Walks a dotted key ("sampling.top_p") through nested config objects.
const json* config_node(const json& cfg, std::string_view dotted) {
    const json* node = &cfg;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = dotted.find('.', start);
        std::string key(dotted.substr(start, dot == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : dot - start));
        if (!node->is_object()) return nullptr;
        auto it = node->find(key);
        if (it == node->end()) return nullptr;
        node = &*it;
        if (dot == std::string_view::npos) return node;
        start = dot + 1;
    }
}

// Loads the --config file (when given) and resolves every knob with
// flag > config > default precedence, collecting the run-header lines.
class Resolver {
public:
    Resolver(std::string command, const std::string& config_path) : command_(std::move(command)) {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw PathError("cannot read config file: " + config_path);
        try {
            in >> config_;
        } catch (const json::exception& e) {
            throw ParseError(config_path + ": " + e.what());
        }
        if (!config_.is_object()) throw ParseError(config_path + ": config must be a JSON object");
        config_path_ = config_path;
    }

    // Flag-only values (paths, language selections) still appear in the
    // header for a complete picture of the run.
    template <typename T>
    void note(const char* name, const T& value) {
        lines_.push_back(line(name, display_value(value), "flag"));
    }

    template <typename T>
    T resolve(const CLI::Option* opt, const T& flag_value, const char* key, T fallback) {
        if (opt != nullptr && opt->count() > 0) {
            lines_.push_back(line(key, display_value(flag_value), "flag"));
            return flag_value;
        }
        if (const json* node = config_node(config_, key)) {
            T value{};
            try {
                value = node->get<T>();
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config key '") + key + "': " + e.what());
            }
            lines_.push_back(line(key, display_value(value), "config"));
            return value;
        }
        lines_.push_back(line(key, display_value(fallback), "default"));
        return fallback;
    }

    const json& config() const { return config_; }

    void print_header(std::ostream& err) const {
        err << "run header: " << command_ << "\n";
        err << "  config file = " << (config_path_.empty() ? "(none)" : config_path_) << "\n";
        for (const std::string& l : lines_) err << l << "\n";
        err.flush();
    }

private:
    static std::string line(std::string_view name, const std::string& value, const char* source) {
        std::string out = "  ";
        out += name;
        out += " = ";
        out += value;
        out += " (";
        out += source;
        out += ")";
        return out;
    }

    std::string command_;
    std::string config_path_;
    json config_ = json::object();
    std::vector<std::string> lines_;
};

// Pipeline knobs shared by gen-tests and translate; evaluate reuses the
// executor-limit subset. Each value sits next to its CLI option handle so the
// resolver can tell an explicit flag from the default.
struct KnobOptions {
    std::size_t k_cases = 3;
    std::size_t max_repair = 1;
    std::size_t gen_attempts = 3;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    bool no_adoption_guard = false;
    double top_p = 0.95;
    double temperature = 0.8;
    int n_samples = 10;
    int max_tokens = 1024;
    int wall_timeout_ms = 10'000;
    int compile_timeout_ms = 30'000;
    std::uint64_t memory_bytes = 512ull * 1024 * 1024;
    std::string exemplar_dir;

    CLI::Option* k_cases_opt = nullptr;
    CLI::Option* max_repair_opt = nullptr;
    CLI::Option* gen_attempts_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
    CLI::Option* guard_opt = nullptr;
    CLI::Option* top_p_opt = nullptr;
    CLI::Option* temperature_opt = nullptr;
    CLI::Option* n_samples_opt = nullptr;
    CLI::Option* max_tokens_opt = nullptr;
    CLI::Option* wall_timeout_opt = nullptr;
    CLI::Option* compile_timeout_opt = nullptr;
    CLI::Option* memory_opt = nullptr;
    CLI::Option* exemplar_opt = nullptr;
};

void add_limit_flags(CLI::App* cmd, KnobOptions& k) {
    k.wall_timeout_opt = cmd->add_option("--wall-timeout-ms", k.wall_timeout_ms,
                                         "Per-run wall-clock timeout in milliseconds");
    k.compile_timeout_opt = cmd->add_option("--compile-timeout-ms", k.compile_timeout_ms,
                                            "Compile-stage timeout in milliseconds");
    k.memory_opt = cmd->add_option("--memory-bytes", k.memory_bytes,
                                   "Address-space cap for executed programs");
}

void add_pipeline_flags(CLI::App* cmd, KnobOptions& k, bool with_translation_knobs) {
    if (with_translation_knobs) {
        k.k_cases_opt =
            cmd->add_option("--k-cases", k.k_cases, "Test cases embedded in the prompt");
        k.max_repair_opt =
            cmd->add_option("--max-repair", k.max_repair, "Maximum repair iterations");
        k.workers_opt = cmd->add_option("--workers", k.workers, "Parallel tasks");
        k.guard_opt = cmd->add_flag("--no-adoption-guard", k.no_adoption_guard,
                                    "Adopt every repair candidate, even regressions");
        k.exemplar_opt = cmd->add_option("--exemplar-dir", k.exemplar_dir,
                                         "Directory of one-shot exemplar files");
    }
    k.gen_attempts_opt = cmd->add_option("--gen-attempts", k.gen_attempts,
                                         "Input-generation attempts per sample");
    k.seed_opt = cmd->add_option("--seed", k.seed, "Case-selection seed");
    k.top_p_opt = cmd->add_option("--top-p", k.top_p, "Nucleus sampling mass");
    k.temperature_opt = cmd->add_option("--temperature", k.temperature, "Sampling temperature");
    k.n_samples_opt = cmd->add_option("--n-samples", k.n_samples, "Completions per request");
    k.max_tokens_opt = cmd->add_option("--max-tokens", k.max_tokens, "Completion token budget");
    add_limit_flags(cmd, k);
}

ExecLimits resolve_limits(const KnobOptions& k, Resolver& r) {
    ExecLimits limits;
    limits.wall_timeout_ms =
        r.resolve(k.wall_timeout_opt, k.wall_timeout_ms, "limits.wall_timeout_ms", 10'000);
    limits.compile_timeout_ms = r.resolve(k.compile_timeout_opt, k.compile_timeout_ms,
                                          "limits.compile_timeout_ms", 30'000);
    limits.memory_bytes = r.resolve(k.memory_opt, k.memory_bytes, "limits.memory_bytes",
                                    std::uint64_t{512ull * 1024 * 1024});
    return limits;
}

PipelineConfig resolve_pipeline(const KnobOptions& k, Resolver& r, bool with_translation_knobs) {
    PipelineConfig cfg;
    if (with_translation_knobs) {
        cfg.k_cases = r.resolve(k.k_cases_opt, k.k_cases, "k_cases", std::size_t{3});
        cfg.max_repair_iters =
            r.resolve(k.max_repair_opt, k.max_repair, "max_repair_iters", std::size_t{1});
        cfg.workers = r.resolve(k.workers_opt, k.workers, "workers", std::size_t{1});
        // The flag turns the guard off; the config key states it directly.
        if (k.guard_opt != nullptr && k.guard_opt->count() > 0) {
            cfg.adoption_guard = !k.no_adoption_guard;
            r.note("adoption_guard", cfg.adoption_guard);
        } else {
            cfg.adoption_guard =
                r.resolve<bool>(nullptr, true, "adoption_guard", true);
        }
    }
    cfg.input_gen_attempts =
        r.resolve(k.gen_attempts_opt, k.gen_attempts, "input_gen_attempts", std::size_t{3});
    cfg.seed = r.resolve(k.seed_opt, k.seed, "seed", std::uint64_t{0});
    cfg.sampling.top_p = r.resolve(k.top_p_opt, k.top_p, "sampling.top_p", 0.95);
    cfg.sampling.temperature =
        r.resolve(k.temperature_opt, k.temperature, "sampling.temperature", 0.8);
    cfg.sampling.n_samples = r.resolve(k.n_samples_opt, k.n_samples, "sampling.n_samples", 10);
    cfg.sampling.max_tokens = r.resolve(k.max_tokens_opt, k.max_tokens, "sampling.max_tokens", 1024);
    cfg.limits = resolve_limits(k, r);
    validate_pipeline_config(cfg);
    return cfg;
}

std::optional<fs::path> resolve_exemplar_dir(const KnobOptions& k, Resolver& r) {
    std::string dir = r.resolve(k.exemplar_opt, k.exemplar_dir, "exemplar_dir", std::string{});
    if (dir.empty()) return std::nullopt;
    if (!fs::is_directory(dir)) {
        std::cerr << "warning: exemplar directory does not exist: " << dir << "\n";
    }
    return fs::path(dir);
}

struct BackendOptions {
    std::string kind = "http";
    std::string base_url = "https://api.openai.com";
    std::string model = "gpt-3.5-turbo";
    std::string replay_file;
    std::string record_file;

    CLI::Option* kind_opt = nullptr;
    CLI::Option* base_url_opt = nullptr;
    CLI::Option* model_opt = nullptr;
    CLI::Option* replay_opt = nullptr;
    CLI::Option* record_opt = nullptr;
};

void add_backend_flags(CLI::App* cmd, BackendOptions& b) {
    b.kind_opt = cmd->add_option("--backend", b.kind, "LLM backend: http or replay")
                     ->check(CLI::IsMember({"http", "replay"}));
    b.base_url_opt = cmd->add_option("--base-url", b.base_url, "Chat-completions endpoint base URL");
    b.model_opt = cmd->add_option("--model", b.model, "Model name for http requests");
    b.replay_opt = cmd->add_option("--replay-file", b.replay_file, "Recorded completions JSONL");
    b.record_opt =
        cmd->add_option("--record-file", b.record_file, "Record completions to this JSONL");
}

struct ResolvedBackend {
    std::string kind;
    std::string base_url;
    std::string model;
    std::string replay_file;
    std::string record_file;
};

ResolvedBackend resolve_backend(const BackendOptions& b, Resolver& r) {
    ResolvedBackend out;
    out.kind = r.resolve(b.kind_opt, b.kind, "backend.kind", std::string{"http"});
    out.base_url =
        r.resolve(b.base_url_opt, b.base_url, "backend.base_url", std::string{"https://api.openai.com"});
    out.model = r.resolve(b.model_opt, b.model, "backend.model", std::string{"gpt-3.5-turbo"});
    out.replay_file = r.resolve(b.replay_opt, b.replay_file, "backend.replay_file", std::string{});
    out.record_file = r.resolve(b.record_opt, b.record_file, "backend.record_file", std::string{});
    return out;
}

struct ClientBundle {
    std::shared_ptr<Backend> backend;
    std::unique_ptr<Client> client;
};

ClientBundle make_client(const ResolvedBackend& b, std::size_t workers) {
    ClientBundle out;
    if (b.kind == "replay") {
        if (b.replay_file.empty()) {
            throw ConfigError(
                "backend 'replay' needs --replay-file (or backend.replay_file in the config)");
        }
        out.backend = std::make_shared<ReplayBackend>(b.replay_file);
    } else if (b.kind == "http") {
        out.backend = std::make_shared<HttpBackend>(HttpBackendConfig::from_environment(b.base_url, b.model));
    } else {
        throw ConfigError("unknown backend kind: " + b.kind);
    }
    int in_flight = static_cast<int>(std::max<std::size_t>(4, workers));
    out.client = std::make_unique<Client>(out.backend, in_flight);
    if (!b.record_file.empty()) {
        fs::path p(b.record_file);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        out.client->record_to(std::make_shared<ReplayRecorder>(p));
    }
    return out;
}

Language parse_language(const std::string& text) {
    try {
        return language_from_tag(text);
    } catch (const ArgumentError& e) {
        throw UsageError(e.what());
    }
}

// "python:cpp,cpp:python" into ordered pairs; both sides must differ.
std::vector<std::pair<Language, Language>> parse_pairs(const std::string& text) {
    std::vector<std::pair<Language, Language>> pairs;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        std::size_t colon = item.find(':');
        if (colon == std::string::npos) {
            throw UsageError("pair '" + item + "' must look like src:tgt");
        }
        Language src = parse_language(item.substr(0, colon));
        Language tgt = parse_language(item.substr(colon + 1));
        if (src == tgt) throw UsageError("pair '" + item + "' translates a language to itself");
        pairs.emplace_back(src, tgt);
    }
    if (pairs.empty()) throw UsageError("no pairs given");
    return pairs;
}

std::vector<std::pair<Language, Language>> all_pairs() {
    std::vector<std::pair<Language, Language>> pairs;
    for (Language src : kAllLanguages) {
        for (Language tgt : kAllLanguages) {
            if (src != tgt) pairs.emplace_back(src, tgt);
        }
    }
    return pairs;
}

std::string pairs_display(const std::vector<std::pair<Language, Language>>& pairs) {
    std::string out;
    for (const auto& [src, tgt] : pairs) {
        if (!out.empty()) out += ",";
        out += tag(src);
        out += ":";
        out += tag(tgt);
    }
    return out;
}

std::string single_line(std::string text, std::size_t cap = 160) {
    for (char& c : text) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
    }
    if (text.size() > cap) {
        text.resize(cap);
        text += "...";
    }
    return text;
}

std::string percent(std::size_t hits, std::size_t total) {
    double value = total == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(total);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", value);
    return buf;
}

void ensure_parent_dir(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::string pair_label(const MetricSummary& s) {
    std::string out{tag(s.source_lang)};
    out += "->";
    out += tag(s.target_lang);
    return out;
}

Corpus load_corpus_reporting(const std::string& root, const std::string& manifest) {
    std::optional<fs::path> manifest_path;
    if (!manifest.empty()) manifest_path = fs::path(manifest);
    Corpus corpus = load_corpus(root, manifest_path);
    for (const std::string& d : corpus.diagnostics()) {
        std::cerr << "corpus: " << d << "\n";
    }
    return corpus;
}

void warn_missing_toolchains(const std::set<Language>& needed) {
    auto availability = probe_toolchains();
    for (Language lang : needed) {
        const auto& avail = availability.at(lang);
        if (!avail.available) {
            std::cerr << "warning: " << tag(lang)
                      << " toolchain unavailable, executions will fail: " << avail.detail << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// probe

struct ProbeArgs {
    std::string config_path;
    std::string pairs_text;
    CLI::Option* pairs_opt = nullptr;
};

int run_probe(const ProbeArgs& args) {
    Resolver resolver("probe", args.config_path);
    std::string pairs_text =
        resolver.resolve(args.pairs_opt, args.pairs_text, "pairs", std::string{});
    resolver.print_header(std::cerr);

    std::vector<std::pair<Language, Language>> pairs =
        pairs_text.empty() ? all_pairs() : parse_pairs(pairs_text);

    std::set<Language> required;
    for (const auto& [src, tgt] : pairs) {
        required.insert(src);
        required.insert(tgt);
    }

    auto availability = probe_toolchains();
    std::cout << "toolchains\n";
    bool all_required_present = true;
    for (Language lang : kAllLanguages) {
        const auto& avail = availability.at(lang);
        bool needed = required.count(lang) > 0;
        if (needed && !avail.available) all_required_present = false;
        std::string name{tag(lang)};
        name.resize(8, ' ');
        std::cout << "  " << name << (avail.available ? "ok      " : "missing ")
                  << (needed ? "[required] " : "[unused]   ") << single_line(avail.detail) << "\n";
    }

    const char* key = std::getenv("UNITRANS_API_KEY");
    bool key_set = key != nullptr && *key != '\0';
    std::cout << "backend\n  UNITRANS_API_KEY "
              << (key_set ? "set (http backend usable)" : "unset (only the replay backend will work)")
              << "\n";
    std::cout << "pairs: " << pairs_display(pairs) << "\n";
    std::cout << "required toolchains " << (all_required_present ? "present" : "missing") << "\n";
    return all_required_present ? 0 : 1;
}

// ---------------------------------------------------------------------------
// gen-tests

struct GenTestsArgs {
    std::string config_path;
    std::string corpus_path;
    std::string manifest_path;
    std::string lang_text;
    std::string out_dir;
    KnobOptions knobs;
    BackendOptions backend;
};

int run_gen_tests(const GenTestsArgs& args) {
    Resolver resolver("gen-tests", args.config_path);
    resolver.note("corpus", args.corpus_path);
    resolver.note("lang", args.lang_text);
    resolver.note("out", args.out_dir);
    PipelineConfig cfg = resolve_pipeline(args.knobs, resolver, /*with_translation_knobs=*/false);
    std::optional<fs::path> exemplar_dir = resolve_exemplar_dir(args.knobs, resolver);
    ResolvedBackend backend = resolve_backend(args.backend, resolver);
    resolver.print_header(std::cerr);

    Language lang = parse_language(args.lang_text);
    Corpus corpus = load_corpus_reporting(args.corpus_path, args.manifest_path);
    warn_missing_toolchains({lang});

    fs::create_directories(args.out_dir);
    ClientBundle bundle = make_client(backend, cfg.workers);
    Executor executor(cfg.limits);
    PipelineDeps deps{bundle.client.get(), &executor, nullptr, exemplar_dir, {}};

    std::size_t processed = 0;
    std::size_t at_least_1 = 0;
    std::size_t at_least_3 = 0;
    std::size_t at_least_5 = 0;
    std::size_t index = 0;
    for (const Sample& sample : corpus.samples()) {
        ++index;
        if (sample.programs.find(lang) == sample.programs.end()) {
            std::cerr << "[" << index << "/" << corpus.size() << "] " << sample.id << ": no "
                      << tag(lang) << " program, skipped\n";
            continue;
        }
        CaseGeneration gen = generate_cases(sample, lang, cfg, deps);
        ++processed;
        if (gen.cases.size() >= 1) ++at_least_1;
        if (gen.cases.size() >= 3) ++at_least_3;
        if (gen.cases.size() >= 5) ++at_least_5;

        json cases = json::array();
        for (const TestCase& tc : gen.cases) cases.push_back(tc.to_json());
        json j;
        j["sample_id"] = sample.id;
        j["function_name"] = sample.function_name;
        j["source_lang"] = std::string(tag(lang));
        j["cases"] = std::move(cases);
        j["diagnostics"] = gen.diagnostics;
        j["attempts_used"] = gen.attempts.size();
        j["backend_error"] = gen.backend_error ? json(*gen.backend_error) : json(nullptr);

        fs::path out_file = fs::path(args.out_dir) / (sample.id + ".json");
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw PathError("cannot write " + out_file.string());
        out << j.dump(2) << "\n";
        if (!out) throw PathError("cannot write " + out_file.string());

        std::cerr << "[" << index << "/" << corpus.size() << "] " << sample.id << ": "
                  << gen.cases.size() << " cases in " << gen.attempts.size() << " attempts";
        if (gen.backend_error) std::cerr << " (backend error: " << single_line(*gen.backend_error) << ")";
        std::cerr << "\n";
    }

    std::cout << "samples processed: " << processed << "\n";
    std::cout << "≥1 valid input: " << percent(at_least_1, processed) << "\n";
    std::cout << "≥3 valid inputs: " << percent(at_least_3, processed) << "\n";
    std::cout << "≥5 valid inputs: " << percent(at_least_5, processed) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// translate

struct TranslateArgs {
    std::string config_path;
    std::string corpus_path;
    std::string manifest_path;
    std::string src_text;
    std::string tgt_text;
    std::string out_file;
    KnobOptions knobs;
    BackendOptions backend;
};

int run_translate(const TranslateArgs& args) {
    if (args.src_text == args.tgt_text) throw UsageError("--src and --tgt must differ");

    Resolver resolver("translate", args.config_path);
    resolver.note("corpus", args.corpus_path);
    resolver.note("src", args.src_text);
    resolver.note("tgt", args.tgt_text);
    resolver.note("out", args.out_file);
    PipelineConfig cfg = resolve_pipeline(args.knobs, resolver, /*with_translation_knobs=*/true);
    std::optional<fs::path> exemplar_dir = resolve_exemplar_dir(args.knobs, resolver);
    ResolvedBackend backend = resolve_backend(args.backend, resolver);
    resolver.print_header(std::cerr);

    Language src = parse_language(args.src_text);
    Language tgt = parse_language(args.tgt_text);
    Corpus corpus = load_corpus_reporting(args.corpus_path, args.manifest_path);
    std::vector<TranslationTask> tasks = tasks_for_pair(corpus, src, tgt);
    if (tasks.empty()) {
        std::cerr << "no tasks: no sample pairs a " << tag(src) << " program with a " << tag(tgt)
                  << " evaluation suite\n";
    }
    warn_missing_toolchains({src, tgt});

    ClientBundle bundle = make_client(backend, cfg.workers);
    Executor executor(cfg.limits);
    Analyzer analyzer;
    PipelineDeps deps{bundle.client.get(), &executor, &analyzer, exemplar_dir, {}};

    std::size_t done = 0;
    deps.on_record = [&](std::size_t, const RunRecord& record) {
        ++done;
        std::cerr << "[" << done << "/" << tasks.size() << "] " << record.task.sample_id << " "
                  << tag(record.task.source_lang) << "->" << tag(record.task.target_lang);
        if (record.infra_failed) {
            std::cerr << " infra failure: " << single_line(record.infra_reason);
        } else {
            std::cerr << " cases=" << record.generated_cases.size()
                      << " repairs=" << record.repair_count() << " "
                      << preliminary_verdict_tag(record.preliminary_verdict);
        }
        std::cerr << "\n";
    };

    BatchResult result = run_batch(corpus, tasks, cfg, deps);
    ensure_parent_dir(args.out_file);
    write_records(args.out_file, result.records);

    const BatchSummary& s = result.summary;
    std::cerr << "tasks: " << s.n_tasks << "  infra failures: " << s.n_infra_failures
              << "  with cases: " << s.n_with_cases << "  cases generated: " << s.n_cases_generated
              << "  preliminary passes: " << s.n_passed_preliminary
              << "  repairs attempted: " << s.n_repairs_attempted
              << "  repairs adopted: " << s.n_repairs_adopted << "\n";
    std::cerr << "wrote " << result.records.size() << " records to " << args.out_file << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string config_path;
    std::string records_path;
    std::string corpus_path;
    std::string manifest_path;
    std::string baseline_path;
    std::string out_file;
    std::string csv_file;
    bool repaired_only = false;
    KnobOptions knobs;
};

std::vector<RunRecord> evaluate_all(const std::string& records_path, const Corpus& corpus,
                                    const Executor& executor) {
    std::vector<RunRecord> records = read_records(records_path);
    std::size_t index = 0;
    for (RunRecord& record : records) {
        ++index;
        const Sample* sample = corpus.find(record.task.sample_id);
        if (sample == nullptr) {
            if (!record.infra_failed) {
                record.eval_skipped = true;
                record.eval_skip_reason = "sample not in corpus: " + record.task.sample_id;
                record.eval_verdict.reset();
            }
        } else {
            record = evaluate_record(std::move(record), *sample, executor);
        }
        std::cerr << "[" << index << "/" << records.size() << "] " << record.task.sample_id;
        if (record.infra_failed) {
            std::cerr << " infra failure";
        } else if (record.eval_skipped) {
            std::cerr << " skipped: " << single_line(record.eval_skip_reason);
        } else if (record.eval_verdict) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", record.eval_verdict->pass_fraction);
            std::cerr << " ca=" << (record.eval_verdict->ca_pass ? "pass" : "fail")
                      << " pass_fraction=" << buf;
            if (record.eval_verdict->em_match) {
                std::cerr << " em=" << (*record.eval_verdict->em_match ? "match" : "differ");
            }
        }
        std::cerr << "\n";
    }
    return records;
}

int run_evaluate(const EvaluateArgs& args) {
    Resolver resolver("evaluate", args.config_path);
    resolver.note("records", args.records_path);
    resolver.note("corpus", args.corpus_path);
    if (!args.baseline_path.empty()) resolver.note("baseline", args.baseline_path);
    resolver.note("scope", std::string(args.repaired_only ? "repaired-only" : "all"));
    ExecLimits limits = resolve_limits(args.knobs, resolver);
    resolver.print_header(std::cerr);

    Corpus corpus = load_corpus_reporting(args.corpus_path, args.manifest_path);
    Executor executor(limits);
    MetricScope scope = args.repaired_only ? MetricScope::repaired_only : MetricScope::all;

    std::vector<RunRecord> records = evaluate_all(args.records_path, corpus, executor);
    if (!args.out_file.empty()) {
        ensure_parent_dir(args.out_file);
        write_records(args.out_file, records);
        std::cerr << "wrote " << records.size() << " evaluated records to " << args.out_file << "\n";
    }

    std::vector<MetricSummary> summaries = summarize_by_pair(records, scope);
    if (summaries.empty()) {
        std::cout << "no records to evaluate\n";
    }
    for (const MetricSummary& s : summaries) {
        std::cout << summary_table(s) << "\n";
    }

    if (!args.csv_file.empty()) {
        ensure_parent_dir(args.csv_file);
        std::ofstream csv(args.csv_file, std::ios::binary);
        if (!csv) throw PathError("cannot write " + args.csv_file);
        csv << summary_csv_header();
        for (const MetricSummary& s : summaries) csv << summary_csv_row(s);
        if (!csv) throw PathError("cannot write " + args.csv_file);
        std::cerr << "wrote CSV summary to " << args.csv_file << "\n";
    }

    if (!args.baseline_path.empty()) {
        std::vector<RunRecord> baseline_records = evaluate_all(args.baseline_path, corpus, executor);
        std::vector<MetricSummary> baseline_summaries = summarize_by_pair(baseline_records, scope);
        std::map<std::string, const MetricSummary*> by_pair;
        for (const MetricSummary& s : baseline_summaries) by_pair[pair_label(s)] = &s;
        for (const MetricSummary& current : summaries) {
            auto it = by_pair.find(pair_label(current));
            if (it == by_pair.end()) {
                std::cerr << "baseline has no records for " << pair_label(current) << "\n";
                continue;
            }
            std::cout << "improvement over baseline for " << pair_label(current) << ":\n";
            std::cout << delta_table(compare_summaries(*it->second, current)) << "\n";
        }
    }

    json out = json::array();
    for (const MetricSummary& s : summaries) out.push_back(summary_to_json(s));
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "unitrans: translate programs between Python, Java, and C++ with an LLM backend,\n"
        "validating translations against execution-backed generated test cases and\n"
        "repairing failures from execution feedback."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "unitrans 0.1.0");

    ProbeArgs probe_args;
    CLI::App* probe_cmd =
        app.add_subcommand("probe", "Check toolchain and backend availability");
    probe_cmd->add_option("--config", probe_args.config_path, "JSON config file");
    probe_args.pairs_opt = probe_cmd->add_option(
        "--pairs", probe_args.pairs_text,
        "Comma-separated src:tgt pairs the run needs (default: all pairs)");

    GenTestsArgs gen_args;
    CLI::App* gen_cmd =
        app.add_subcommand("gen-tests", "Generate and validate test cases for a corpus");
    gen_cmd->add_option("--config", gen_args.config_path, "JSON config file");
    gen_cmd->add_option("--corpus", gen_args.corpus_path, "Corpus root directory")->required();
    gen_cmd->add_option("--manifest", gen_args.manifest_path, "Explicit manifest path");
    gen_cmd->add_option("--lang", gen_args.lang_text, "Source language")
        ->required()
        ->check(CLI::IsMember({"python", "java", "cpp"}));
    gen_cmd->add_option("--out", gen_args.out_dir, "Directory for per-sample case JSON")->required();
    add_pipeline_flags(gen_cmd, gen_args.knobs, /*with_translation_knobs=*/false);
    gen_cmd->add_option("--exemplar-dir", gen_args.knobs.exemplar_dir,
                        "Directory of one-shot exemplar files");
    gen_args.knobs.exemplar_opt = gen_cmd->get_option("--exemplar-dir");
    add_backend_flags(gen_cmd, gen_args.backend);

    TranslateArgs translate_args;
    CLI::App* translate_cmd =
        app.add_subcommand("translate", "Translate a corpus and persist run records");
    translate_cmd->add_option("--config", translate_args.config_path, "JSON config file");
    translate_cmd->add_option("--corpus", translate_args.corpus_path, "Corpus root directory")
        ->required();
    translate_cmd->add_option("--manifest", translate_args.manifest_path, "Explicit manifest path");
    translate_cmd->add_option("--src", translate_args.src_text, "Source language")
        ->required()
        ->check(CLI::IsMember({"python", "java", "cpp"}));
    translate_cmd->add_option("--tgt", translate_args.tgt_text, "Target language")
        ->required()
        ->check(CLI::IsMember({"python", "java", "cpp"}));
    translate_cmd->add_option("--out", translate_args.out_file, "Run-record JSONL output path")
        ->required();
    add_pipeline_flags(translate_cmd, translate_args.knobs, /*with_translation_knobs=*/true);
    add_backend_flags(translate_cmd, translate_args.backend);

    EvaluateArgs evaluate_args;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "Score run records against evaluation suites");
    evaluate_cmd->add_option("--config", evaluate_args.config_path, "JSON config file");
    evaluate_cmd->add_option("--records", evaluate_args.records_path, "Run-record JSONL")
        ->required();
    evaluate_cmd->add_option("--corpus", evaluate_args.corpus_path, "Corpus root directory")
        ->required();
    evaluate_cmd->add_option("--manifest", evaluate_args.manifest_path, "Explicit manifest path");
    evaluate_cmd->add_option("--baseline", evaluate_args.baseline_path,
                             "Baseline run-record JSONL for delta tables");
    evaluate_cmd->add_option("--out", evaluate_args.out_file, "Write evaluated records here");
    evaluate_cmd->add_option("--csv", evaluate_args.csv_file, "Write per-pair CSV summary here");
    evaluate_cmd->add_flag("--repaired-only", evaluate_args.repaired_only,
                           "Restrict metrics to records with at least one repair");
    add_limit_flags(evaluate_cmd, evaluate_args.knobs);

    int rc = 0;
    probe_cmd->callback([&] { rc = run_probe(probe_args); });
    gen_cmd->callback([&] { rc = run_gen_tests(gen_args); });
    translate_cmd->callback([&] { rc = run_translate(translate_args); });
    evaluate_cmd->callback([&] { rc = run_evaluate(evaluate_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unitrans: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
