#include "unitrans/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "unitrans/errors.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

std::optional<std::string> read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buf.str();
}

// id → function name, in manifest order.
std::vector<std::pair<std::string, std::string>> read_manifest(
    const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw PathError("cannot open corpus manifest: " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad corpus manifest " + file.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array()) {
        throw ParseError("corpus manifest needs a top-level samples array");
    }
    std::vector<std::pair<std::string, std::string>> entries;
    std::set<std::string> seen;
    for (const auto& s : doc["samples"]) {
        try {
            std::string id = s.at("id").get<std::string>();
            std::string fn = s.at("function_name").get<std::string>();
            if (id.empty() || fn.empty()) {
                throw ParseError("manifest ids and function names must be non-empty");
            }
            if (!seen.insert(id).second) {
                throw ParseError("duplicate sample id in manifest: " + id);
            }
            entries.emplace_back(std::move(id), std::move(fn));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("bad corpus manifest entry: " + std::string(e.what()));
        }
    }
    return entries;
}

// Exactly one line must be the {{PROGRAM}} marker for a suite to be usable.
bool suite_has_single_marker(const std::string& suite) {
    std::size_t markers = 0;
    for (const std::string& line : split_lines(suite)) {
        if (trim(line) == "{{PROGRAM}}") ++markers;
    }
    return markers == 1;
}

}  // namespace

Corpus::Corpus(std::vector<Sample> samples, std::vector<std::string> diagnostics)
    : samples_(std::move(samples)), diagnostics_(std::move(diagnostics)) {
    std::sort(samples_.begin(), samples_.end(),
              [](const Sample& a, const Sample& b) { return a.id < b.id; });
}

const Sample* Corpus::find(const std::string& id) const {
    auto it = std::lower_bound(
        samples_.begin(), samples_.end(), id,
        [](const Sample& s, const std::string& key) { return s.id < key; });
    if (it == samples_.end() || it->id != id) return nullptr;
    return &*it;
}

Corpus load_corpus(const std::filesystem::path& root,
                   std::optional<std::filesystem::path> manifest) {
    if (!std::filesystem::is_directory(root)) {
        throw PathError("corpus root does not exist: " + root.string());
    }
    if (!manifest.has_value()) {
        auto implicit = root / "manifest.json";
        if (std::filesystem::exists(implicit)) manifest = implicit;
    }

    std::vector<std::pair<std::string, std::string>> wanted;
    if (manifest.has_value()) {
        wanted = read_manifest(*manifest);
    } else {
        for (const auto& entry : std::filesystem::directory_iterator(root)) {
            if (entry.is_directory()) {
                std::string id = entry.path().filename().string();
                wanted.emplace_back(id, id);
            }
        }
        std::sort(wanted.begin(), wanted.end());
    }

    std::vector<Sample> samples;
    std::vector<std::string> diagnostics;
    for (const auto& [id, function_name] : wanted) {
        auto dir = root / id;
        if (!std::filesystem::is_directory(dir)) {
            diagnostics.push_back(id + ": listed in manifest but directory is missing");
            continue;
        }
        Sample sample;
        sample.id = id;
        sample.function_name = function_name;
        bool invariant_broken = false;
        for (Language lang : kAllLanguages) {
            std::string ext = std::string(file_extension(lang));
            auto program_path = dir / ("program." + ext);
            if (std::filesystem::exists(program_path)) {
                auto text = read_text_file(program_path);
                if (!text.has_value()) {
                    diagnostics.push_back(id + ": unreadable " + program_path.filename().string());
                } else if (is_blank(*text)) {
                    diagnostics.push_back(id + ": empty program." + ext + ", sample skipped");
                    invariant_broken = true;
                } else {
                    sample.programs[lang] = std::move(*text);
                }
            }
            auto suite_path = dir / ("suite." + ext);
            if (std::filesystem::exists(suite_path)) {
                auto text = read_text_file(suite_path);
                if (!text.has_value()) {
                    diagnostics.push_back(id + ": unreadable " + suite_path.filename().string());
                } else if (!suite_has_single_marker(*text)) {
                    diagnostics.push_back(id + ": suite." + ext +
                                          " lacks a single {{PROGRAM}} marker line, dropped");
                } else {
                    sample.eval_suites[lang] = std::move(*text);
                }
            }
        }
        if (invariant_broken) continue;
        bool runnable = false;
        for (Language lang : kAllLanguages) {
            if (sample.programs.count(lang) != 0 && sample.eval_suites.count(lang) != 0) {
                runnable = true;
                break;
            }
        }
        if (!runnable) {
            diagnostics.push_back(id +
                                  ": no language has both a program and an eval suite, skipped");
            continue;
        }
        samples.push_back(std::move(sample));
    }
    return Corpus(std::move(samples), std::move(diagnostics));
}

std::vector<TranslationTask> tasks_for_pair(const Corpus& corpus, Language source_lang,
                                            Language target_lang) {
    if (source_lang == target_lang) {
        throw ArgumentError("translation needs two distinct languages");
    }
    std::vector<TranslationTask> tasks;
    for (const Sample& s : corpus.samples()) {
        if (s.programs.count(source_lang) != 0 && s.eval_suites.count(target_lang) != 0) {
            tasks.push_back({s.id, source_lang, target_lang});
        }
    }
    return tasks;
}

}  // namespace unitrans
