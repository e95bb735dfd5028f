#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitrans/language.hpp"
#include "unitrans/records.hpp"

namespace unitrans {

// `repaired_only` restricts the summary to records that went through at
// least one repair round, for pass-rate analysis of the repair phase.
enum class MetricScope { all, repaired_only };

struct MetricSummary {
    Language source_lang = Language::python;
    Language target_lang = Language::java;
    std::size_t n_total = 0;        // evaluated records behind ca and pass_rate
    std::size_t n_em_eligible = 0;  // subset with a ground truth to match
    double ca = 0.0;
    double em_acc = 0.0;
    double pass_rate = 0.0;
    std::size_t n_infra_failures = 0;
    std::size_t n_eval_skipped = 0;

    bool operator==(const MetricSummary&) const = default;
};

// Aggregates the records of one language pair; records of other pairs are
// ignored. Infrastructure failures and unevaluated records never enter a
// denominator, they are counted separately. Zero eligible records yield a
// zeroed summary, never NaN.
MetricSummary summarize(const std::vector<RunRecord>& records, Language source_lang,
                        Language target_lang, MetricScope scope = MetricScope::all);

// One summary per language pair present in `records`, sorted by pair tags.
std::vector<MetricSummary> summarize_by_pair(const std::vector<RunRecord>& records,
                                             MetricScope scope = MetricScope::all);

struct MetricDelta {
    std::string metric;
    double before = 0.0;
    double after = 0.0;
    double absolute = 0.0;
    std::optional<double> relative;  // (after - before) / before; absent when before = 0

    bool operator==(const MetricDelta&) const = default;
};

// Deltas for ca, em_acc, and pass_rate, in that order. Both summaries must
// describe the same language pair.
std::vector<MetricDelta> compare_summaries(const MetricSummary& before,
                                           const MetricSummary& after);

nlohmann::json summary_to_json(const MetricSummary& s);
std::string summary_table(const MetricSummary& s);
std::string summary_csv_header();
std::string summary_csv_row(const MetricSummary& s);
std::string delta_table(const std::vector<MetricDelta>& deltas);

}  // namespace unitrans
