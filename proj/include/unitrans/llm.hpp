#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

namespace unitrans {

struct SamplingConfig {
    double top_p = 0.95;
    double temperature = 0.8;
    int n_samples = 10;
    int max_tokens = 1024;
    std::vector<std::string> stop_sequences = {"END_OF_CASE"};

    // Copy with the END_OF_CASE stop sequence guaranteed present.
    SamplingConfig normalized() const;

    bool operator==(const SamplingConfig&) const = default;
};

enum class FinishReason { stop, length, other };

std::string finish_reason_tag(FinishReason r);
FinishReason finish_reason_from_tag(const std::string& tag);

struct Completion {
    std::string text;
    std::size_t index = 0;
    FinishReason finish_reason = FinishReason::other;

    bool operator==(const Completion&) const = default;
};

// Text of the index-0 completion; throws ArgumentError on an empty list.
std::string first_output(const std::vector<Completion>& completions);

// Stable request identity: FNV-1a 64 over the prompt and the canonical JSON
// of the normalized config. Replay files are keyed by this.
std::string replay_key(const std::string& prompt, const SamplingConfig& cfg);

class Backend {
public:
    virtual ~Backend() = default;

    // Returns completions for the prompt, ordered by index. Implementations
    // must produce at least cfg.n_samples entries or throw.
    virtual std::vector<Completion> request(const std::string& prompt,
                                            const SamplingConfig& cfg) = 0;
};

// Appends {key, completions} JSONL entries; pairs with ReplayBackend so a
// recorded run replays byte-for-byte.
class ReplayRecorder {
public:
    explicit ReplayRecorder(const std::filesystem::path& file);

    void record(const std::string& key, const std::vector<Completion>& completions);

private:
    std::ofstream out_;
    std::mutex mutex_;
};

// Serves completions from a recorded JSONL file. Unknown (prompt, cfg) keys
// raise ReplayMissError; a duplicated key keeps the latest entry.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const std::filesystem::path& file);

    std::vector<Completion> request(const std::string& prompt,
                                    const SamplingConfig& cfg) override;

    std::size_t entry_count() const { return entries_.size(); }

private:
    std::map<std::string, std::vector<Completion>> entries_;
};

// Hand-scripted backend for tests: responses are matched by prompt
// substring, served in order, repeating the final one once drained. Keeps a
// transcript of every prompt it saw.
class ScriptedBackend : public Backend {
public:
    void script(std::string needle, std::vector<std::string> responses);
    void script_default(std::vector<std::string> responses);

    std::vector<Completion> request(const std::string& prompt,
                                    const SamplingConfig& cfg) override;

    std::vector<std::string> prompts() const;
    std::size_t request_count() const;

private:
    struct Rule {
        std::string needle;
        std::vector<std::string> responses;
        std::size_t served = 0;
    };

    std::vector<Completion> serve(Rule& rule, const SamplingConfig& cfg);

    std::vector<Rule> rules_;
    std::optional<Rule> fallback_;
    std::vector<std::string> transcript_;
    mutable std::mutex mutex_;
};

struct HttpBackendConfig {
    std::string base_url;  // scheme://host[:port], no trailing path
    std::string model;
    std::string api_key;
    std::string path = "/v1/chat/completions";
    int max_attempts = 3;
    int connect_timeout_s = 10;
    int read_timeout_s = 120;
    int backoff_base_ms = 250;  // doubles per retry

    // Reads the key from the UNITRANS_API_KEY environment variable; throws
    // ConfigError when unset or empty.
    static HttpBackendConfig from_environment(std::string base_url, std::string model);
};

// OpenAI-compatible chat-completions transport. Retries transient failures
// with exponential backoff; authentication failures (401/403) raise
// ConfigError immediately and context-window overflows raise
// ContextOverflowError.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig cfg);

    std::vector<Completion> request(const std::string& prompt,
                                    const SamplingConfig& cfg) override;

    const HttpBackendConfig& config() const { return cfg_; }

private:
    HttpBackendConfig cfg_;
};

// Front door: normalizes the config, limits in-flight requests, enforces
// stop sequences client-side (backends differ in stop handling), trims the
// completion list to exactly n_samples, and optionally records for replay.
class Client {
public:
    explicit Client(std::shared_ptr<Backend> backend, int max_in_flight = 4);

    std::vector<Completion> complete(const std::string& prompt,
                                     const SamplingConfig& cfg = {});

    void record_to(std::shared_ptr<ReplayRecorder> recorder) { recorder_ = std::move(recorder); }

private:
    std::shared_ptr<Backend> backend_;
    std::shared_ptr<ReplayRecorder> recorder_;
    std::counting_semaphore<4096> slots_;
};

}  // namespace unitrans
