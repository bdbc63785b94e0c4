#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deplen/analysis.hpp"

namespace deplen {

// CSV and JSON writers for analysis products. Output depends only on the
// arguments, so reruns are byte-identical.

/// "***" when p < 0.001, else empty.
std::string significance_stars(double p);

void write_count_histogram_csv(std::ostream& out, const CountHistogram& h);
void write_length_profile_csv(std::ostream& out, const std::map<std::size_t, std::vector<double>>& profiles);
void write_strategy_curves_csv(std::ostream& out, const std::vector<StrategyCurvePoint>& curves,
                               const std::vector<Strategy>& strategies);
/// Rows of `suite` belonging to `table` ("dl" or "length").
void write_accuracy_csv(std::ostream& out, const ClassificationSuite& suite, const std::string& table);

nlohmann::json fit_json(const RegressionFit& fit);
nlohmann::json regression_table_json(const RegressionTable& table);
nlohmann::json counts_json(const CorpusCounts& counts);

/// One JSON object per line: sentence_id, k, verb_index, constituents, suffix.
void write_plans_jsonl(std::ostream& out, const PreparedCorpus& corpus);
/// One JSON object per variant: sentence_id, permutation, main_verb_dl,
/// total_dl, tokens.
void write_variants_jsonl(std::ostream& out, const PreparedCorpus& corpus,
                          DistanceConvention conv = DistanceConvention::intervening);

}  // namespace deplen
