#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "unitrans/language.hpp"
#include "unitrans/testcase.hpp"

namespace unitrans {

enum class PromptKind {
    basic,
    input_gen,
    augment,
    repair_compile_runtime,
    repair_logic,
};

std::string prompt_kind_tag(PromptKind kind);

// A worked example prepended to a prompt for one-shot use.
struct OneShotExemplar {
    std::string text;
};

// Plain translation request.
std::string render_basic_prompt(Language src, Language tgt, const std::string& program);

// Asks for ten groups of inputs for the focal method of `program`.
std::string render_input_gen_prompt(Language src, const std::string& program);

// Translation request carrying test cases the target code must pass. Cases
// are rendered in the target language's format.
std::string render_augment_prompt(Language src, Language tgt, const std::string& program,
                                  const std::vector<TestCase>& cases);

// Repair request for compile and runtime errors: `annotated_program` carries
// the buggy-line marker, `failing_case` is the case whose run produced
// `error_message`.
std::string render_compile_runtime_repair_prompt(Language tgt,
                                                 const std::string& annotated_program,
                                                 const TestCase& failing_case,
                                                 const std::string& error_message);

// Repair request when no line can be blamed (wrong output, unlocatable
// errors): whole-program fix.
std::string render_logic_repair_prompt(Language tgt, const std::string& program,
                                       const TestCase& failing_case,
                                       const std::string& error_message);

std::string with_exemplar(const std::optional<OneShotExemplar>& exemplar,
                          const std::string& prompt);

// Looks up exemplar_<kind>_<src>_<tgt>.txt in `dir` (input generation is
// source-only: exemplar_input_gen_<src>.txt). Missing file yields nullopt;
// a kind that needs a target but got none is an ArgumentError.
std::optional<OneShotExemplar> load_exemplar(const std::filesystem::path& dir,
                                             PromptKind kind, Language src,
                                             std::optional<Language> tgt);

}  // namespace unitrans
