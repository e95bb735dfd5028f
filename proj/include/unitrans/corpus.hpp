#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unitrans/language.hpp"

namespace unitrans {

// One parallel function: focal-function sources and evaluation suites for
// whatever subset of languages the dataset provides. Eval suites are full
// scripts with a {{PROGRAM}} marker line and their own fixed unit tests.
struct Sample {
    std::string id;
    std::map<Language, std::string> programs;
    std::map<Language, std::string> eval_suites;
    std::string function_name;
};

struct TranslationTask {
    std::string sample_id;
    Language source_lang = Language::python;
    Language target_lang = Language::java;

    bool operator==(const TranslationTask&) const = default;
};

class Corpus {
public:
    Corpus(std::vector<Sample> samples, std::vector<std::string> diagnostics);

    // Sorted by id.
    const std::vector<Sample>& samples() const { return samples_; }
    // One line per skipped sample or dropped file.
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

    std::size_t size() const { return samples_.size(); }
    const Sample* find(const std::string& id) const;

private:
    std::vector<Sample> samples_;
    std::vector<std::string> diagnostics_;
};

// Loads `<root>/<sample_id>/{program,suite}.{py,java,cpp}`. A manifest
// (explicit path, or `<root>/manifest.json` when present) restricts the load
// to its listed ids and supplies function names; without one, every
// subdirectory is taken and the function name defaults to the sample id.
// Samples violating invariants are skipped with a diagnostic; a missing root
// or a duplicate manifest id is fatal.
Corpus load_corpus(const std::filesystem::path& root,
                   std::optional<std::filesystem::path> manifest = std::nullopt);

// One task per sample holding a source-language program and a
// target-language eval suite, sorted by id.
std::vector<TranslationTask> tasks_for_pair(const Corpus& corpus, Language source_lang,
                                            Language target_lang);

}  // namespace unitrans
