#include "unitrans/records.hpp"

#include <fstream>
#include <sstream>

#include "unitrans/errors.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

nlohmann::json opt_size(const std::optional<std::size_t>& v) {
    if (!v) return nullptr;
    return *v;
}

std::optional<std::size_t> size_from(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<std::size_t>();
}

nlohmann::json phase_entry_to_json(const PhaseEntry& e) {
    nlohmann::json j;
    j["phase"] = phase_tag(e.phase);
    j["prompt"] = e.prompt;
    j["completion"] = e.completion;
    j["completions"] = e.completions;
    j["program"] = e.program;
    j["report"] = e.report ? case_run_report_to_json(*e.report) : nlohmann::json(nullptr);
    j["error"] = e.error ? error_info_to_json(*e.error) : nlohmann::json(nullptr);
    j["adopted"] = e.adopted;
    return j;
}

PhaseEntry phase_entry_from_json(const nlohmann::json& j) {
    PhaseEntry e;
    e.phase = phase_from_tag(j.at("phase").get<std::string>());
    e.prompt = j.at("prompt").get<std::string>();
    e.completion = j.at("completion").get<std::string>();
    e.completions = j.at("completions").get<std::vector<std::string>>();
    e.program = j.at("program").get<std::string>();
    if (!j.at("report").is_null()) e.report = case_run_report_from_json(j.at("report"));
    if (!j.at("error").is_null()) e.error = error_info_from_json(j.at("error"));
    e.adopted = j.at("adopted").get<bool>();
    return e;
}

nlohmann::json eval_verdict_to_json(const EvalVerdict& v) {
    nlohmann::json j;
    j["ca_pass"] = v.ca_pass;
    j["em_match"] = v.em_match ? nlohmann::json(*v.em_match) : nlohmann::json(nullptr);
    j["pass_fraction"] = v.pass_fraction;
    return j;
}

EvalVerdict eval_verdict_from_json(const nlohmann::json& j) {
    EvalVerdict v;
    v.ca_pass = j.at("ca_pass").get<bool>();
    if (!j.at("em_match").is_null()) v.em_match = j.at("em_match").get<bool>();
    v.pass_fraction = j.at("pass_fraction").get<double>();
    return v;
}

}  // namespace

std::string phase_tag(Phase p) {
    switch (p) {
        case Phase::gen: return "gen";
        case Phase::augment: return "augment";
        case Phase::inspect: return "inspect";
        case Phase::repair: return "repair";
    }
    throw ArgumentError("unknown phase");
}

Phase phase_from_tag(std::string_view tag) {
    for (Phase p : {Phase::gen, Phase::augment, Phase::inspect, Phase::repair}) {
        if (phase_tag(p) == tag) return p;
    }
    throw ArgumentError("unknown phase tag: " + std::string(tag));
}

std::string preliminary_verdict_tag(PreliminaryVerdict v) {
    switch (v) {
        case PreliminaryVerdict::passed_generated_cases: return "passed_generated_cases";
        case PreliminaryVerdict::failed_generated_cases: return "failed_generated_cases";
        case PreliminaryVerdict::no_cases_available: return "no_cases_available";
    }
    throw ArgumentError("unknown preliminary verdict");
}

PreliminaryVerdict preliminary_verdict_from_tag(std::string_view tag) {
    for (PreliminaryVerdict v :
         {PreliminaryVerdict::passed_generated_cases, PreliminaryVerdict::failed_generated_cases,
          PreliminaryVerdict::no_cases_available}) {
        if (preliminary_verdict_tag(v) == tag) return v;
    }
    throw ArgumentError("unknown preliminary verdict tag: " + std::string(tag));
}

nlohmann::json task_to_json(const TranslationTask& t) {
    nlohmann::json j;
    j["sample_id"] = t.sample_id;
    j["source_lang"] = tag(t.source_lang);
    j["target_lang"] = tag(t.target_lang);
    return j;
}

TranslationTask task_from_json(const nlohmann::json& j) {
    TranslationTask t;
    t.sample_id = j.at("sample_id").get<std::string>();
    t.source_lang = language_from_tag(j.at("source_lang").get<std::string>());
    t.target_lang = language_from_tag(j.at("target_lang").get<std::string>());
    return t;
}

nlohmann::json error_info_to_json(const ErrorInfo& e) {
    nlohmann::json j;
    j["kind"] = error_kind_tag(e.kind);
    j["program_line"] = opt_size(e.program_line);
    j["message"] = e.message;
    j["failing_case_index"] = opt_size(e.failing_case_index);
    return j;
}

ErrorInfo error_info_from_json(const nlohmann::json& j) {
    ErrorInfo e;
    e.kind = error_kind_from_tag(j.at("kind").get<std::string>());
    e.program_line = size_from(j.at("program_line"));
    e.message = j.at("message").get<std::string>();
    e.failing_case_index = size_from(j.at("failing_case_index"));
    return e;
}

nlohmann::json case_run_report_to_json(const CaseRunReport& r) {
    nlohmann::json j;
    j["exec_status"] = exec_status_tag(r.exec_status);
    nlohmann::json cases = nlohmann::json::array();
    for (const CaseOutcome& c : r.cases) {
        nlohmann::json cj;
        cj["index"] = c.index;
        cj["status"] = case_status_tag(c.status);
        cj["expected"] = c.expected;
        cj["actual"] = c.actual;
        cases.push_back(std::move(cj));
    }
    j["cases"] = std::move(cases);
    j["error_text"] = r.error_text;
    j["prefix_line_count"] = r.prefix_line_count;
    j["program_line_count"] = r.program_line_count;
    return j;
}

CaseRunReport case_run_report_from_json(const nlohmann::json& j) {
    CaseRunReport r;
    r.exec_status = exec_status_from_tag(j.at("exec_status").get<std::string>());
    for (const nlohmann::json& cj : j.at("cases")) {
        CaseOutcome c;
        c.index = cj.at("index").get<std::size_t>();
        c.status = case_status_from_tag(cj.at("status").get<std::string>());
        c.expected = cj.at("expected").get<std::string>();
        c.actual = cj.at("actual").get<std::string>();
        r.cases.push_back(std::move(c));
    }
    r.error_text = j.at("error_text").get<std::string>();
    r.prefix_line_count = j.at("prefix_line_count").get<std::size_t>();
    r.program_line_count = j.at("program_line_count").get<std::size_t>();
    return r;
}

std::size_t RunRecord::repair_count() const {
    std::size_t n = 0;
    for (const PhaseEntry& e : phase_trace) {
        if (e.phase == Phase::repair) ++n;
    }
    return n;
}

nlohmann::json RunRecord::to_json() const {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["task"] = task_to_json(task);
    j["function_name"] = function_name;
    nlohmann::json cases = nlohmann::json::array();
    for (const TestCase& c : generated_cases) cases.push_back(c.to_json());
    j["generated_cases"] = std::move(cases);
    j["case_diagnostics"] = case_diagnostics;
    nlohmann::json trace = nlohmann::json::array();
    for (const PhaseEntry& e : phase_trace) trace.push_back(phase_entry_to_json(e));
    j["phase_trace"] = std::move(trace);
    j["final_program"] = final_program;
    j["preliminary_verdict"] = preliminary_verdict_tag(preliminary_verdict);
    j["infra_failed"] = infra_failed;
    j["infra_reason"] = infra_reason;
    j["eval_skipped"] = eval_skipped;
    j["eval_skip_reason"] = eval_skip_reason;
    j["eval_verdict"] = eval_verdict ? eval_verdict_to_json(*eval_verdict) : nlohmann::json(nullptr);
    return j;
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
    RunRecord r;
    try {
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kRecordSchemaVersion) {
            throw ParseError("unsupported record schema version " +
                             std::to_string(r.schema_version));
        }
        r.task = task_from_json(j.at("task"));
        r.function_name = j.at("function_name").get<std::string>();
        for (const nlohmann::json& cj : j.at("generated_cases")) {
            r.generated_cases.push_back(TestCase::from_json(cj));
        }
        r.case_diagnostics = j.at("case_diagnostics").get<std::vector<std::string>>();
        for (const nlohmann::json& ej : j.at("phase_trace")) {
            r.phase_trace.push_back(phase_entry_from_json(ej));
        }
        r.final_program = j.at("final_program").get<std::string>();
        r.preliminary_verdict =
            preliminary_verdict_from_tag(j.at("preliminary_verdict").get<std::string>());
        r.infra_failed = j.at("infra_failed").get<bool>();
        r.infra_reason = j.at("infra_reason").get<std::string>();
        r.eval_skipped = j.at("eval_skipped").get<bool>();
        r.eval_skip_reason = j.at("eval_skip_reason").get<std::string>();
        if (!j.at("eval_verdict").is_null()) {
            r.eval_verdict = eval_verdict_from_json(j.at("eval_verdict"));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed run record: ") + e.what());
    }
    return r;
}

std::string records_to_jsonl(const std::vector<RunRecord>& records) {
    std::string out;
    for (const RunRecord& r : records) {
        out += r.to_json().dump();
        out += '\n';
    }
    return out;
}

void write_records(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PathError("cannot open for writing: " + path.string());
    out << records_to_jsonl(records);
    if (!out.flush()) throw PathError("write failed: " + path.string());
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PathError("cannot open record file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::vector<RunRecord> records;
    std::size_t line_no = 0;
    for (const std::string& line : split_lines(buf.str())) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        records.push_back(RunRecord::from_json(j));
    }
    return records;
}

}  // namespace unitrans
