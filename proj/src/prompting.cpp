#include "unitrans/prompting.hpp"

#include <fstream>
#include <sstream>

#include "unitrans/errors.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

std::string cases_block(const std::vector<TestCase>& cases, Language lang) {
    std::string out;
    for (const TestCase& c : cases) {
        out += '\n';
        out += render_case(c, lang);
    }
    return out;
}

std::string repair_preamble(Language tgt, const std::string& program,
                            const TestCase& failing_case, const std::string& error_message) {
    std::string out = "Given buggy ";
    out += display_name(tgt);
    out += " code:\n";
    out += program;
    out += "\nGiven test case:\n";
    out += render_case(failing_case, tgt);
    out += "\nError message: ";
    out += error_message;
    out += '\n';
    return out;
}

}  // namespace

std::string prompt_kind_tag(PromptKind kind) {
    switch (kind) {
        case PromptKind::basic: return "basic";
        case PromptKind::input_gen: return "input_gen";
        case PromptKind::augment: return "augment";
        case PromptKind::repair_compile_runtime: return "repair_compile_runtime";
        case PromptKind::repair_logic: return "repair_logic";
    }
    return "?";
}

std::string render_basic_prompt(Language src, Language tgt, const std::string& program) {
    std::string out = "Given ";
    out += display_name(src);
    out += " code:\n";
    out += program;
    out += "\nTranslate given ";
    out += display_name(src);
    out += " code to ";
    out += display_name(tgt);
    out += " code. Use END_OF_CASE to finish your answer.";
    return out;
}

std::string render_input_gen_prompt(Language src, const std::string& program) {
    std::string out = program;
    out += "\nPlease generate ten groups of differentiated valid inputs for the above focal "
           "method of ";
    out += display_name(src);
    out += " language, in the format of [Input_1]\\n[Input_2]\\n...[Input_10]. Finally, use "
           "END_OF_CASE to finish your answer.";
    return out;
}

std::string render_augment_prompt(Language src, Language tgt, const std::string& program,
                                  const std::vector<TestCase>& cases) {
    std::string out = "Given ";
    out += display_name(src);
    out += " code:\n";
    out += program;
    out += "\nGiven test cases:";
    out += cases_block(cases, tgt);
    out += "\nTranslate given ";
    out += display_name(src);
    out += " code to ";
    out += display_name(tgt);
    out += " code, and ensure the translated ";
    out += display_name(tgt);
    out += " code can pass all given test cases. Use END_OF_CASE to finish your answer.";
    return out;
}

std::string render_compile_runtime_repair_prompt(Language tgt,
                                                 const std::string& annotated_program,
                                                 const TestCase& failing_case,
                                                 const std::string& error_message) {
    std::string out = repair_preamble(tgt, annotated_program, failing_case, error_message);
    out += "Fix the buggy line (marked ";
    out += comment_symbol(tgt);
    out += " <Buggy Line>) in the buggy ";
    out += display_name(tgt);
    out += " code according to the given error message. Use END_OF_CASE to finish your answer.";
    return out;
}

std::string render_logic_repair_prompt(Language tgt, const std::string& program,
                                       const TestCase& failing_case,
                                       const std::string& error_message) {
    std::string out = repair_preamble(tgt, program, failing_case, error_message);
    out += "Fix the buggy ";
    out += display_name(tgt);
    out += " code according to the given error message. Use END_OF_CASE to finish your answer.";
    return out;
}

std::string with_exemplar(const std::optional<OneShotExemplar>& exemplar,
                          const std::string& prompt) {
    if (!exemplar) return prompt;
    return exemplar->text + "\n" + prompt;
}

std::optional<OneShotExemplar> load_exemplar(const std::filesystem::path& dir,
                                             PromptKind kind, Language src,
                                             std::optional<Language> tgt) {
    std::string name = "exemplar_" + prompt_kind_tag(kind) + "_";
    name += tag(src);
    if (kind != PromptKind::input_gen) {
        if (!tgt) throw ArgumentError("prompt kind needs a target language");
        name += '_';
        name += tag(*tgt);
    }
    name += ".txt";
    std::ifstream in(dir / name);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return OneShotExemplar{trim(buf.str())};
}

}  // namespace unitrans
