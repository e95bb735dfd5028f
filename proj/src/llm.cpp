#include "unitrans/llm.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "unitrans/errors.hpp"

namespace unitrans {

namespace {

constexpr std::string_view kStopSentinel = "END_OF_CASE";

std::string prompt_head(const std::string& prompt) {
    std::string head = prompt.substr(0, 80);
    for (char& c : head) {
        if (c == '\n') c = ' ';
    }
    if (prompt.size() > 80) head += "...";
    return head;
}

nlohmann::json completions_to_json(const std::vector<Completion>& completions) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Completion& c : completions) {
        arr.push_back({{"text", c.text},
                       {"index", c.index},
                       {"finish_reason", finish_reason_tag(c.finish_reason)}});
    }
    return arr;
}

std::vector<Completion> completions_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw ParseError("completions must be an array");
    std::vector<Completion> out;
    for (const auto& e : arr) {
        Completion c;
        c.text = e.at("text").get<std::string>();
        c.index = e.at("index").get<std::size_t>();
        c.finish_reason = finish_reason_from_tag(e.at("finish_reason").get<std::string>());
        out.push_back(std::move(c));
    }
    return out;
}

void validate_config(const SamplingConfig& cfg) {
    if (cfg.n_samples < 1) throw ArgumentError("n_samples must be positive");
    if (cfg.max_tokens < 1) throw ArgumentError("max_tokens must be positive");
    if (!(cfg.top_p > 0.0) || cfg.top_p > 1.0) throw ArgumentError("top_p must be in (0, 1]");
    if (cfg.temperature < 0.0) throw ArgumentError("temperature must be nonnegative");
}

}  // namespace

SamplingConfig SamplingConfig::normalized() const {
    SamplingConfig out = *this;
    if (std::find(out.stop_sequences.begin(), out.stop_sequences.end(), kStopSentinel) ==
        out.stop_sequences.end()) {
        out.stop_sequences.emplace_back(kStopSentinel);
    }
    return out;
}

std::string finish_reason_tag(FinishReason r) {
    switch (r) {
        case FinishReason::stop: return "stop";
        case FinishReason::length: return "length";
        case FinishReason::other: return "other";
    }
    throw ArgumentError("unknown finish reason");
}

FinishReason finish_reason_from_tag(const std::string& tag) {
    if (tag == "stop") return FinishReason::stop;
    if (tag == "length") return FinishReason::length;
    return FinishReason::other;
}

std::string first_output(const std::vector<Completion>& completions) {
    if (completions.empty()) throw ArgumentError("no completions to take the first output from");
    for (const Completion& c : completions) {
        if (c.index == 0) return c.text;
    }
    return completions.front().text;
}

std::string replay_key(const std::string& prompt, const SamplingConfig& cfg) {
    SamplingConfig n = cfg.normalized();
    nlohmann::json canon = {{"max_tokens", n.max_tokens},
                            {"n_samples", n.n_samples},
                            {"stop", n.stop_sequences},
                            {"temperature", n.temperature},
                            {"top_p", n.top_p}};
    std::string material = prompt;
    material += '\x1f';
    material += canon.dump();

    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char byte : material) {
        hash ^= byte;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a64:") + buf;
}

ReplayRecorder::ReplayRecorder(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    out_.open(file, std::ios::binary | std::ios::app);
    if (!out_) throw PathError("cannot open replay file for writing: " + file.string());
}

void ReplayRecorder::record(const std::string& key, const std::vector<Completion>& completions) {
    nlohmann::json line = {{"key", key}, {"completions", completions_to_json(completions)}};
    std::lock_guard lock(mutex_);
    out_ << line.dump() << '\n';
    out_.flush();
}

ReplayBackend::ReplayBackend(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw PathError("cannot open replay file: " + file.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            nlohmann::json entry = nlohmann::json::parse(line);
            entries_[entry.at("key").get<std::string>()] =
                completions_from_json(entry.at("completions"));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("bad replay entry at " + file.string() + ":" +
                             std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::vector<Completion> ReplayBackend::request(const std::string& prompt,
                                               const SamplingConfig& cfg) {
    std::string key = replay_key(prompt, cfg);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ReplayMissError("no replay entry for " + key + " (prompt: " + prompt_head(prompt) +
                              ")");
    }
    return it->second;
}

void ScriptedBackend::script(std::string needle, std::vector<std::string> responses) {
    std::lock_guard lock(mutex_);
    rules_.push_back({std::move(needle), std::move(responses), 0});
}

void ScriptedBackend::script_default(std::vector<std::string> responses) {
    std::lock_guard lock(mutex_);
    fallback_ = Rule{"", std::move(responses), 0};
}

std::vector<Completion> ScriptedBackend::serve(Rule& rule, const SamplingConfig& cfg) {
    if (rule.responses.empty()) throw ReplayMissError("scripted rule has no responses");
    const std::string& text =
        rule.responses[std::min(rule.served, rule.responses.size() - 1)];
    ++rule.served;
    std::vector<Completion> out;
    for (int i = 0; i < cfg.n_samples; ++i) {
        out.push_back({text, static_cast<std::size_t>(i), FinishReason::stop});
    }
    return out;
}

std::vector<Completion> ScriptedBackend::request(const std::string& prompt,
                                                 const SamplingConfig& cfg) {
    std::lock_guard lock(mutex_);
    transcript_.push_back(prompt);
    for (Rule& rule : rules_) {
        if (prompt.find(rule.needle) != std::string::npos) return serve(rule, cfg);
    }
    if (fallback_.has_value()) return serve(*fallback_, cfg);
    throw ReplayMissError("no scripted response for prompt: " + prompt_head(prompt));
}

std::vector<std::string> ScriptedBackend::prompts() const {
    std::lock_guard lock(mutex_);
    return transcript_;
}

std::size_t ScriptedBackend::request_count() const {
    std::lock_guard lock(mutex_);
    return transcript_.size();
}

HttpBackendConfig HttpBackendConfig::from_environment(std::string base_url, std::string model) {
    const char* key = std::getenv("UNITRANS_API_KEY");
    if (key == nullptr || *key == '\0') {
        throw ConfigError("UNITRANS_API_KEY is not set");
    }
    HttpBackendConfig cfg;
    cfg.base_url = std::move(base_url);
    cfg.model = std::move(model);
    cfg.api_key = key;
    return cfg;
}

HttpBackend::HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty()) throw ConfigError("http backend needs a base URL");
    if (cfg_.max_attempts < 1) throw ConfigError("max_attempts must be positive");
}

std::vector<Completion> HttpBackend::request(const std::string& prompt,
                                             const SamplingConfig& cfg) {
    nlohmann::json body = {
        {"model", cfg_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", cfg.temperature},
        {"top_p", cfg.top_p},
        {"n", cfg.n_samples},
        {"max_tokens", cfg.max_tokens},
        {"stop", cfg.stop_sequences},
    };
    const std::string payload = body.dump();

    std::string last_failure = "no attempt made";
    for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg_.backoff_base_ms << (attempt - 2)));
        }
        httplib::Client http(cfg_.base_url);
        http.set_connection_timeout(cfg_.connect_timeout_s, 0);
        http.set_read_timeout(cfg_.read_timeout_s, 0);
        httplib::Headers headers = {{"Authorization", "Bearer " + cfg_.api_key}};

        auto res = http.Post(cfg_.path, headers, payload, "application/json");
        if (!res) {
            last_failure = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        std::string snippet = res->body.substr(0, 200);
        if (res->status == 401 || res->status == 403) {
            throw ConfigError("authentication rejected (HTTP " + std::to_string(res->status) +
                              "): " + snippet);
        }
        if (res->body.find("context_length_exceeded") != std::string::npos ||
            res->body.find("maximum context length") != std::string::npos) {
            throw ContextOverflowError("prompt exceeds the model context window: " + snippet);
        }
        if (res->status == 429 || res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status) + ": " + snippet;
            continue;
        }
        if (res->status != 200) {
            throw BackendError("HTTP " + std::to_string(res->status) + ": " + snippet, attempt);
        }

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            last_failure = std::string("unparseable response body: ") + e.what();
            continue;
        }
        if (!doc.contains("choices") || !doc["choices"].is_array()) {
            throw BackendError("response carries no choices: " + snippet, attempt);
        }
        std::vector<Completion> out;
        std::size_t position = 0;
        for (const auto& choice : doc["choices"]) {
            Completion c;
            c.index = choice.value("index", position);
            if (choice.contains("message")) {
                c.text = choice["message"].value("content", "");
            } else {
                c.text = choice.value("text", "");
            }
            c.finish_reason = finish_reason_from_tag(choice.value("finish_reason", "other"));
            out.push_back(std::move(c));
            ++position;
        }
        std::sort(out.begin(), out.end(),
                  [](const Completion& a, const Completion& b) { return a.index < b.index; });
        return out;
    }
    throw BackendError("request failed after " + std::to_string(cfg_.max_attempts) +
                           " attempts; last: " + last_failure,
                       cfg_.max_attempts);
}

Client::Client(std::shared_ptr<Backend> backend, int max_in_flight)
    : backend_(std::move(backend)), slots_(max_in_flight) {
    if (backend_ == nullptr) throw ArgumentError("client needs a backend");
    if (max_in_flight < 1 || max_in_flight > 4096) {
        throw ArgumentError("max_in_flight must be in [1, 4096]");
    }
}

std::vector<Completion> Client::complete(const std::string& prompt, const SamplingConfig& cfg) {
    if (prompt.empty()) throw ArgumentError("prompt must be non-empty");
    SamplingConfig effective = cfg.normalized();
    validate_config(effective);

    struct Slot {
        std::counting_semaphore<4096>& sem;
        ~Slot() { sem.release(); }
    };
    slots_.acquire();
    Slot slot{slots_};

    std::vector<Completion> raw = backend_->request(prompt, effective);
    if (raw.size() < static_cast<std::size_t>(effective.n_samples)) {
        throw BackendError("backend returned " + std::to_string(raw.size()) + " of " +
                               std::to_string(effective.n_samples) + " completions",
                           1);
    }
    std::sort(raw.begin(), raw.end(),
              [](const Completion& a, const Completion& b) { return a.index < b.index; });
    raw.resize(static_cast<std::size_t>(effective.n_samples));

    for (std::size_t i = 0; i < raw.size(); ++i) {
        Completion& c = raw[i];
        c.index = i;
        std::size_t cut = std::string::npos;
        for (const std::string& stop : effective.stop_sequences) {
            if (stop.empty()) continue;
            std::size_t at = c.text.find(stop);
            if (at < cut) cut = at;
        }
        if (cut != std::string::npos) {
            c.text.resize(cut);
            c.finish_reason = FinishReason::stop;
        }
    }

    if (recorder_ != nullptr) {
        recorder_->record(replay_key(prompt, effective), raw);
    }
    return raw;
}

}  // namespace unitrans
