#include "deplen/report.hpp"

#include <ostream>

#include <fmt/format.h>

namespace deplen {

namespace {

std::string num(double v) { return fmt::format("{:.6f}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string significance_stars(double p) { return p < 0.001 ? "***" : ""; }

void write_count_histogram_csv(std::ostream& out, const CountHistogram& h) {
  out << "k,reference_count,reference_pct,variant_count,variant_pct\n";
  for (const auto& [k, count] : h.reference_counts) {
    const auto vc = h.variant_counts.count(k) ? h.variant_counts.at(k) : 0;
    const auto vp = h.variant_pct.count(k) ? h.variant_pct.at(k) : 0.0;
    out << k << ',' << count << ',' << num(h.reference_pct.at(k)) << ',' << vc << ',' << num(vp) << '\n';
  }
}

void write_length_profile_csv(std::ostream& out, const std::map<std::size_t, std::vector<double>>& profiles) {
  out << "k,position,mean_length\n";
  for (const auto& [k, profile] : profiles) {
    for (std::size_t i = 0; i < profile.size(); ++i) out << k << ',' << i + 1 << ',' << num(profile[i]) << '\n';
  }
}

void write_strategy_curves_csv(std::ostream& out, const std::vector<StrategyCurvePoint>& curves,
                               const std::vector<Strategy>& strategies) {
  out << "k,sentences";
  for (auto s : strategies) out << ',' << strategy_name(s);
  out << '\n';
  for (const auto& p : curves) {
    out << p.k << ',' << p.sentences;
    for (auto s : strategies) out << ',' << num(p.mean.get(s));
    out << '\n';
  }
}

void write_accuracy_csv(std::ostream& out, const ClassificationSuite& suite, const std::string& table) {
  out << "predictors,accuracy_pct,mcnemar_statistic,mcnemar_p,n01,n10,significance\n";
  for (const auto& row : suite.rows) {
    if (row.table != table) continue;
    out << csv_field(row.label) << ',' << fmt::format("{:.2f}", 100.0 * row.accuracy);
    if (row.vs_previous) {
      const auto& m = *row.vs_previous;
      out << ',' << num(m.statistic) << ',' << fmt::format("{:.6g}", m.p_two_tailed) << ',' << m.n01 << ','
          << m.n10 << ',' << significance_stars(m.p_two_tailed);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
}

nlohmann::json fit_json(const RegressionFit& fit) {
  nlohmann::json rows = nlohmann::json::array();
  const auto p = fit.p_values();
  for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i) {
    rows.push_back({{"predictor", fit.names.at(static_cast<std::size_t>(i))},
                    {"estimate", fit.coefficients(i)},
                    {"std_error", fit.std_errors(i)},
                    {"z_value", fit.z_values(i)},
                    {"p_value", p(i)},
                    {"stars", significance_stars(p(i))}});
  }
  return {{"coefficients", rows},
          {"converged", fit.converged},
          {"iterations", fit.iterations},
          {"log_likelihood", fit.log_likelihood},
          {"ridge", fit.ridge},
          {"separation", fit.separation},
          {"collinear", fit.collinear}};
}

nlohmann::json regression_table_json(const RegressionTable& table) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : table.cells) {
    nlohmann::json c{{"k", cell.k}, {"pairs", cell.pairs}, {"candidates", cell.candidates}};
    if (!cell.sufficient) {
      c["status"] = "insufficient data";
      cells.push_back(std::move(c));
      continue;
    }
    c["status"] = "ok";
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& step : cell.selection.curve) {
      std::vector<std::string> names;
      for (auto f : step.features) names.push_back(cell.candidates[static_cast<std::size_t>(f)]);
      curve.push_back({{"features", names}, {"cv_accuracy", step.mean_accuracy}});
    }
    std::vector<std::string> eliminated;
    for (auto f : cell.selection.elimination) eliminated.push_back(cell.candidates[static_cast<std::size_t>(f)]);
    c["rfecv_curve"] = std::move(curve);
    c["eliminated"] = eliminated;
    c["selected"] = cell.selected;
    c["fit"] = fit_json(cell.fit);
    cells.push_back(std::move(c));
  }
  return {{"predictors", table.kind == FeatureRef::Kind::dl ? "constituent dependency length" : "constituent length"},
          {"cells", cells}};
}

nlohmann::json counts_json(const CorpusCounts& counts) {
  nlohmann::json ineligible = nlohmann::json::object();
  for (const auto& [reason, n] : counts.ineligible) ineligible[reason] = n;
  return {{"trees", counts.trees},
          {"non_projective", counts.non_projective},
          {"ineligible", ineligible},
          {"eligible", counts.eligible},
          {"variants", counts.variants}};
}

void write_plans_jsonl(std::ostream& out, const PreparedCorpus& corpus) {
  for (const auto& s : corpus.sentences) {
    nlohmann::json constituents = nlohmann::json::array();
    for (const auto& c : s.plan.preverbal) {
      constituents.push_back({{"head", c.head_index},
                              {"first", c.span.first},
                              {"last", c.span.last},
                              {"length", c.length()},
                              {"head_right_offset", c.head_right_offset()},
                              {"deprel", c.deprel}});
    }
    nlohmann::json line{{"sentence_id", s.id},
                        {"k", s.plan.k()},
                        {"verb_index", s.plan.verb_index},
                        {"constituents", constituents},
                        {"suffix", s.plan.postverbal_suffix}};
    out << line.dump() << '\n';
  }
}

void write_variants_jsonl(std::ostream& out, const PreparedCorpus& corpus, DistanceConvention conv) {
  for (const auto& s : corpus.sentences) {
    for (const auto& v : s.variants.sampled_variants) {
      nlohmann::json line{{"sentence_id", s.id},
                          {"permutation", v},
                          {"main_verb_dl", main_verb_dl(s.plan, v, conv)},
                          {"total_dl", total_dependency_length(s.plan, v, conv)},
                          {"tokens", forms(s.plan, linearize(s.plan, v))}};
      out << line.dump() << '\n';
    }
  }
}

}  // namespace deplen
