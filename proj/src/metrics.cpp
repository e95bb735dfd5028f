#include "unitrans/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "unitrans/errors.hpp"

namespace unitrans {

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string pair_label(const MetricSummary& s) {
    std::string out(tag(s.source_lang));
    out += "->";
    out += tag(s.target_lang);
    return out;
}

}  // namespace

MetricSummary summarize(const std::vector<RunRecord>& records, Language source_lang,
                        Language target_lang, MetricScope scope) {
    MetricSummary s;
    s.source_lang = source_lang;
    s.target_lang = target_lang;

    std::size_t ca_hits = 0;
    std::size_t em_hits = 0;
    std::vector<double> pass_fractions;
    for (const RunRecord& r : records) {
        if (r.task.source_lang != source_lang || r.task.target_lang != target_lang) continue;
        if (scope == MetricScope::repaired_only && r.repair_count() == 0) continue;
        if (r.infra_failed) {
            ++s.n_infra_failures;
            continue;
        }
        if (r.eval_skipped || !r.eval_verdict) {
            ++s.n_eval_skipped;
            continue;
        }
        ++s.n_total;
        if (r.eval_verdict->ca_pass) ++ca_hits;
        if (r.eval_verdict->em_match) {
            ++s.n_em_eligible;
            if (*r.eval_verdict->em_match) ++em_hits;
        }
        pass_fractions.push_back(r.eval_verdict->pass_fraction);
    }

    if (s.n_total > 0) {
        s.ca = static_cast<double>(ca_hits) / static_cast<double>(s.n_total);
        // Summing in sorted order keeps the mean identical under any
        // permutation of the input records.
        std::sort(pass_fractions.begin(), pass_fractions.end());
        double sum = 0.0;
        for (double f : pass_fractions) sum += f;
        s.pass_rate = sum / static_cast<double>(s.n_total);
    }
    if (s.n_em_eligible > 0) {
        s.em_acc = static_cast<double>(em_hits) / static_cast<double>(s.n_em_eligible);
    }
    return s;
}

std::vector<MetricSummary> summarize_by_pair(const std::vector<RunRecord>& records,
                                             MetricScope scope) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const RunRecord& r : records) {
        pairs.insert({std::string(tag(r.task.source_lang)), std::string(tag(r.task.target_lang))});
    }
    std::vector<MetricSummary> out;
    for (const auto& [src, tgt] : pairs) {
        out.push_back(summarize(records, language_from_tag(src), language_from_tag(tgt), scope));
    }
    return out;
}

std::vector<MetricDelta> compare_summaries(const MetricSummary& before,
                                           const MetricSummary& after) {
    if (before.source_lang != after.source_lang || before.target_lang != after.target_lang) {
        throw ArgumentError("cannot compare summaries of different language pairs");
    }
    auto delta = [](std::string name, double a, double b) {
        MetricDelta d;
        d.metric = std::move(name);
        d.before = a;
        d.after = b;
        d.absolute = b - a;
        if (a > 0.0) d.relative = (b - a) / a;
        return d;
    };
    return {delta("ca", before.ca, after.ca), delta("em_acc", before.em_acc, after.em_acc),
            delta("pass_rate", before.pass_rate, after.pass_rate)};
}

nlohmann::json summary_to_json(const MetricSummary& s) {
    nlohmann::json j;
    j["source_lang"] = tag(s.source_lang);
    j["target_lang"] = tag(s.target_lang);
    j["n_total"] = s.n_total;
    j["n_em_eligible"] = s.n_em_eligible;
    j["ca"] = s.ca;
    j["em_acc"] = s.em_acc;
    j["pass_rate"] = s.pass_rate;
    j["n_infra_failures"] = s.n_infra_failures;
    j["n_eval_skipped"] = s.n_eval_skipped;
    return j;
}

std::string summary_table(const MetricSummary& s) {
    auto row = [](std::string_view key, const std::string& value) {
        std::string line(key);
        line.resize(16, ' ');
        line += value;
        line += '\n';
        return line;
    };
    std::string out;
    out += row("pair", pair_label(s));
    out += row("records", std::to_string(s.n_total));
    out += row("em eligible", std::to_string(s.n_em_eligible));
    out += row("ca", fixed4(s.ca));
    out += row("em acc", fixed4(s.em_acc));
    out += row("pass rate", fixed4(s.pass_rate));
    out += row("infra failures", std::to_string(s.n_infra_failures));
    out += row("eval skipped", std::to_string(s.n_eval_skipped));
    return out;
}

std::string summary_csv_header() {
    return "source_lang,target_lang,n_total,n_em_eligible,ca,em_acc,pass_rate,"
           "n_infra_failures,n_eval_skipped\n";
}

std::string summary_csv_row(const MetricSummary& s) {
    std::string out(tag(s.source_lang));
    out += ',';
    out += tag(s.target_lang);
    out += ',' + std::to_string(s.n_total);
    out += ',' + std::to_string(s.n_em_eligible);
    out += ',' + fixed4(s.ca);
    out += ',' + fixed4(s.em_acc);
    out += ',' + fixed4(s.pass_rate);
    out += ',' + std::to_string(s.n_infra_failures);
    out += ',' + std::to_string(s.n_eval_skipped);
    out += '\n';
    return out;
}

std::string delta_table(const std::vector<MetricDelta>& deltas) {
    auto cell = [](std::string text, std::size_t width) {
        if (text.size() < width) text.resize(width, ' ');
        else text += ' ';
        return text;
    };
    auto signed4 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%+.4f", v);
        return std::string(buf);
    };
    std::string out = cell("metric", 11) + cell("before", 9) + cell("after", 9) +
                      cell("delta", 9) + "improvement\n";
    for (const MetricDelta& d : deltas) {
        std::string rel = "n/a";
        if (d.relative) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%+.1f%%", *d.relative * 100.0);
            rel = buf;
        }
        out += cell(d.metric, 11) + cell(fixed4(d.before), 9) + cell(fixed4(d.after), 9) +
               cell(signed4(d.absolute), 9) + rel + '\n';
    }
    return out;
}

}  // namespace unitrans
