#include "deplen/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "deplen/analysis.hpp"
#include "deplen/report.hpp"
#include "deplen/rng.hpp"

namespace deplen {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kVersion = "1.0.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = spdlog::stderr_logger_mt("deplen");
    l->set_pattern("[deplen] [%l] %v");
    const char* env = std::getenv("DEPLEN_LOG");
    l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
    return l;
  }();
  return log;
}

struct Settings {
  std::string corpus;
  std::string format = "conllu";
  std::size_t cap = kDefaultVariantCap;
  std::uint64_t seed = 0;
  int k_min = 2;
  int k_max = 6;
  int folds = 10;
  std::string zscore = "fold";
  int random_draws = 10;
  unsigned jobs = 1;
  std::string out = "deplen-out";
  bool exclude_punct = false;
  std::string distance = "intervening";
  std::string strategies = "reference,ascending,descending,random,least_effort";
  std::size_t min_regression_pairs = 500;
  // synth
  std::size_t sentences = 2000;
  double p_least_effort = 1.0;
  double noise_temperature = 0.0;
  double mean_length = 2.5;
  int max_length = 12;
  std::string k_weights;
};

struct LoadedCorpus {
  std::vector<DependencyTree> trees;
  std::vector<Diagnostic> diagnostics;
  std::uint64_t hash = 0;
  std::size_t bytes = 0;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ExperimentConfig to_config(const Settings& s) {
  ExperimentConfig c;
  c.corpus_path = s.corpus;
  c.format = parse_format(s.format);
  c.cap = s.cap;
  c.seed = s.seed;
  c.k_min = s.k_min;
  c.k_max = s.k_max;
  c.folds = s.folds;
  c.zscore = parse_zscore_mode(s.zscore);
  c.random_draws = s.random_draws;
  c.jobs = s.jobs;
  c.out_dir = s.out;
  c.exclude_punct = s.exclude_punct;
  c.distance = parse_distance(s.distance);
  c.min_regression_pairs = s.min_regression_pairs;
  c.strategies.clear();
  for (const auto& name : split_list(s.strategies)) c.strategies.push_back(parse_strategy(name));
  c.validate();
  return c;
}

json config_json(const ExperimentConfig& c) {
  std::vector<std::string> strategies;
  for (auto s : c.strategies) strategies.push_back(strategy_name(s));
  return {{"corpus", c.corpus_path},
          {"format", std::string(format_name(c.format))},
          {"cap", c.cap},
          {"seed", c.seed},
          {"k_min", c.k_min},
          {"k_max", c.k_max},
          {"folds", c.folds},
          {"zscore", zscore_mode_name(c.zscore)},
          {"random_draws", c.random_draws},
          {"jobs", c.jobs},
          {"exclude_punct", c.exclude_punct},
          {"distance", c.distance == DistanceConvention::intervening ? "intervening" : "positional"},
          {"strategies", strategies},
          {"min_regression_pairs", c.min_regression_pairs}};
}

LoadedCorpus load_corpus(const ExperimentConfig& c) {
  if (c.corpus_path.empty()) throw UsageError("--corpus is required");
  std::ifstream in(c.corpus_path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus '" + c.corpus_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  std::istringstream stream(bytes);
  auto parsed = parse_corpus(stream, c.format);
  logger()->info("read {} trees from {} ({} diagnostics)", parsed.trees.size(), c.corpus_path,
                 parsed.diagnostics.size());
  for (const auto& d : parsed.diagnostics) logger()->debug("line {}: {}", d.line, d.reason);
  return {std::move(parsed.trees), std::move(parsed.diagnostics), fnv1a(bytes), bytes.size()};
}

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    files_.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw IoError("cannot write '" + (dir_ / name).string() + "'");
    return out;
  }

  void write_json(const std::string& name, const json& value) { open(name) << value.dump(2) << '\n'; }

  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

json manifest_base(const std::string& subcommand, const ExperimentConfig& c) {
  return {{"tool", "deplen"}, {"version", kVersion}, {"subcommand", subcommand}, {"config", config_json(c)},
          {"seed", c.seed}};
}

void attach_corpus(json& manifest, const LoadedCorpus& corpus) {
  manifest["corpus"] = {{"path", manifest["config"]["corpus"]},
                        {"fnv1a64", fmt::format("{:016x}", corpus.hash)},
                        {"bytes", corpus.bytes},
                        {"trees", corpus.trees.size()},
                        {"parse_diagnostics", corpus.diagnostics.size()}};
}

void finish(Output& out, json manifest) {
  auto files = out.files();
  files.push_back("manifest.json");
  manifest["outputs"] = files;
  out.write_json("manifest.json", manifest);
}

PreparedCorpus prepare(const LoadedCorpus& corpus, const ExperimentConfig& c, json& manifest) {
  auto prepared = prepare_corpus(corpus.trees, c);
  logger()->info("{} eligible sentences, {} variants, {} non-projective skipped", prepared.counts.eligible,
                 prepared.counts.variants, prepared.counts.non_projective);
  manifest["counts"] = counts_json(prepared.counts);
  return prepared;
}

std::map<std::size_t, std::vector<double>> profiles(const PreparedCorpus& corpus, const ExperimentConfig& c) {
  std::map<std::size_t, std::vector<double>> out;
  for (int k = c.k_min; k <= c.k_max; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = position_length_profile(corpus, static_cast<std::size_t>(k));
    } catch (const InsufficientData&) {
      logger()->debug("no references with k={}", k);
    }
  }
  return out;
}

std::vector<StrategyCurvePoint> curves_in_range(const PreparedCorpus& corpus, const ExperimentConfig& c) {
  auto all = strategy_curves(corpus, c.random_draws, c.seed, c.distance, c.jobs);
  std::vector<StrategyCurvePoint> out;
  for (auto& p : all) {
    if (p.k >= static_cast<std::size_t>(c.k_min) && p.k <= static_cast<std::size_t>(c.k_max)) out.push_back(p);
  }
  return out;
}

void write_regressions(Output& out, const PairwiseDataset& data, const ExperimentConfig& c) {
  out.write_json("table1_regression.json", regression_table_json(run_regression_table(data, FeatureRef::Kind::dl, c)));
  out.write_json("table2_regression.json",
                 regression_table_json(run_regression_table(data, FeatureRef::Kind::length, c)));
}

void write_classification(Output& out, const PairwiseDataset& data, const ExperimentConfig& c) {
  const auto suite = run_classification_suite(data, c);
  for (const auto& row : suite.rows) logger()->info("{}: {:.2f}%", row.label, 100.0 * row.accuracy);
  auto t3 = out.open("table3_accuracy.csv");
  write_accuracy_csv(t3, suite, "dl");
  auto t4 = out.open("table4_accuracy.csv");
  write_accuracy_csv(t4, suite, "length");
}

int cmd_parse(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("parse", c);
  attach_corpus(manifest, corpus);
  {
    auto f = out.open(c.format == CorpusFormat::conllu ? "corpus.conllu" : "corpus.tsv");
    write_corpus(f, corpus.trees, c.format);
  }
  std::size_t projective = 0;
  for (const auto& t : corpus.trees) projective += t.projective() ? 1 : 0;
  json diags = json::array();
  for (const auto& d : corpus.diagnostics) diags.push_back({{"line", d.line}, {"reason", d.reason}});
  out.write_json("parse_report.json", {{"trees", corpus.trees.size()},
                                       {"projective", projective},
                                       {"non_projective", corpus.trees.size() - projective},
                                       {"diagnostics", diags}});
  finish(out, manifest);
  return kExitOk;
}

int cmd_decompose(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("decompose", c);
  attach_corpus(manifest, corpus);
  const auto prepared = prepare(corpus, c, manifest);
  auto f = out.open("plans.jsonl");
  write_plans_jsonl(f, prepared);
  f.close();
  finish(out, manifest);
  return kExitOk;
}

int cmd_variants(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("variants", c);
  attach_corpus(manifest, corpus);
  const auto prepared = prepare(corpus, c, manifest);
  auto f = out.open("variants.jsonl");
  write_variants_jsonl(f, prepared, c.distance);
  f.close();
  finish(out, manifest);
  return kExitOk;
}

int cmd_strategies(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("strategies", c);
  attach_corpus(manifest, corpus);
  const auto prepared = prepare(corpus, c, manifest);
  auto f = out.open("fig4_curves.csv");
  write_strategy_curves_csv(f, curves_in_range(prepared, c), c.strategies);
  f.close();
  finish(out, manifest);
  return kExitOk;
}

int cmd_features(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("features", c);
  attach_corpus(manifest, corpus);
  const auto prepared = prepare(corpus, c, manifest);
  const auto data = build_pairwise_dataset(prepared, c.distance);
  std::map<std::size_t, std::vector<PairwiseExample>> by_k;
  for (const auto& ex : data.examples) by_k[ex.k()].push_back(ex);
  for (const auto& [k, rows] : by_k) {
    auto f = out.open("features_k" + std::to_string(k) + ".csv");
    write_feature_csv(f, rows);
  }
  manifest["pairs"] = data.examples.size();
  finish(out, manifest);
  return kExitOk;
}

int cmd_fit(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("fit", c);
  attach_corpus(manifest, corpus);
  const auto prepared = prepare(corpus, c, manifest);
  const auto data = build_pairwise_dataset(prepared, c.distance);
  write_regressions(out, data, c);
  finish(out, manifest);
  return kExitOk;
}

int cmd_classify(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("classify", c);
  attach_corpus(manifest, corpus);
  const auto prepared = prepare(corpus, c, manifest);
  const auto data = build_pairwise_dataset(prepared, c.distance);
  write_classification(out, data, c);
  manifest["pairs"] = data.examples.size();
  finish(out, manifest);
  return kExitOk;
}

int cmd_report_all(const ExperimentConfig& c) {
  const auto corpus = load_corpus(c);
  Output out(c.out_dir);
  auto manifest = manifest_base("report-all", c);
  attach_corpus(manifest, corpus);
  const auto prepared = prepare(corpus, c, manifest);
  {
    auto f = out.open("fig1_counts.csv");
    write_count_histogram_csv(f, constituent_count_histogram(prepared));
  }
  {
    auto f = out.open("fig2_profile.csv");
    write_length_profile_csv(f, profiles(prepared, c));
  }
  {
    auto f = out.open("fig4_curves.csv");
    write_strategy_curves_csv(f, curves_in_range(prepared, c), c.strategies);
  }
  json stats{{"references", prepared.sentences.size()}};
  try {
    stats["pearson_sentence_length_vs_constituents"] = length_constituent_correlation(prepared);
  } catch (const std::exception& e) {
    stats["pearson_sentence_length_vs_constituents"] = nullptr;
    stats["pearson_note"] = e.what();
  }
  out.write_json("corpus_stats.json", stats);

  const auto data = build_pairwise_dataset(prepared, c.distance);
  manifest["pairs"] = data.examples.size();
  write_regressions(out, data, c);
  try {
    write_classification(out, data, c);
    manifest["classification"] = "ok";
  } catch (const InsufficientData& e) {
    logger()->warn("{}", e.what());
    manifest["classification"] = e.what();
  }
  finish(out, manifest);
  return kExitOk;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> w;
  for (const auto& item : split_list(text)) {
    try {
      w.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad k weight '" + item + "'");
    }
  }
  return w;
}

int cmd_synth(const Settings& s) {
  SyntheticSpec spec;
  spec.sentences = s.sentences;
  spec.p_least_effort = s.p_least_effort;
  spec.noise_temperature = s.noise_temperature;
  spec.mean_length = s.mean_length;
  spec.max_length = s.max_length;
  if (!s.k_weights.empty()) spec.k_weights = parse_weights(s.k_weights);
  const auto format = parse_format(s.format);
  const auto trees = generate_synthetic_corpus(spec, s.seed);
  Output out(s.out);
  {
    auto f = out.open(format == CorpusFormat::conllu ? "synthetic.conllu" : "synthetic.tsv");
    write_corpus(f, trees, format);
  }
  json manifest{{"tool", "deplen"},
                {"version", kVersion},
                {"subcommand", "synth"},
                {"seed", s.seed},
                {"spec",
                 {{"sentences", spec.sentences},
                  {"k_weights", spec.k_weights},
                  {"mean_length", spec.mean_length},
                  {"max_length", spec.max_length},
                  {"p_least_effort", spec.p_least_effort},
                  {"noise_temperature", spec.noise_temperature},
                  {"p_aux", spec.p_aux},
                  {"p_final_punct", spec.p_final_punct}}}};
  logger()->info("wrote {} synthetic sentences to {}", trees.size(), s.out);
  finish(out, manifest);
  return kExitOk;
}

void add_experiment_options(CLI::App& cmd, Settings& s) {
  cmd.add_option("--corpus", s.corpus, "Input corpus file");
  cmd.add_option("--format", s.format, "Corpus format")->check(CLI::IsMember({"conllu", "tsv-minimal"}));
  cmd.add_option("--cap", s.cap, "Variant cap per sentence")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  cmd.add_option("--seed", s.seed, "Global random seed");
  cmd.add_option("--k-min", s.k_min, "Smallest constituent count reported");
  cmd.add_option("--k-max", s.k_max, "Largest constituent count reported");
  cmd.add_option("--folds", s.folds, "Cross-validation folds");
  cmd.add_option("--zscore", s.zscore, "Standardization scope")->check(CLI::IsMember({"fold", "global"}));
  cmd.add_option("--random-draws", s.random_draws, "Random / least-effort draws per sentence");
  cmd.add_option("--jobs", s.jobs, "Worker threads");
  cmd.add_option("--out", s.out, "Output directory");
  cmd.add_flag("--exclude-punct", s.exclude_punct, "Drop punctuation tokens before measuring");
  cmd.add_option("--distance", s.distance, "Distance convention")
      ->check(CLI::IsMember({"intervening", "positional"}));
  cmd.add_option("--strategies", s.strategies, "Comma-separated ordering strategies for fig4");
  cmd.add_option("--min-regression-pairs", s.min_regression_pairs, "Pairs needed for a per-k regression");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  Settings s;
  CLI::App app{"Dependency-length analysis of constituent orderings"};
  app.name(args.empty() ? "deplen" : fs::path(args[0]).filename().string());
  app.set_config("--config", "", "Flat key=value file mirroring the flags");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const ExperimentConfig&);
  };
  const Entry entries[] = {
      {"parse", "Validate a corpus and write it back normalized", cmd_parse},
      {"decompose", "Split sentences into preverbal constituents", cmd_decompose},
      {"variants", "Dump counterfactual variants as JSON lines", cmd_variants},
      {"strategies", "Mean normalized DL per ordering strategy", cmd_strategies},
      {"features", "Pairwise feature matrices as CSV", cmd_features},
      {"fit", "Per-k positional regressions with RFECV", cmd_fit},
      {"classify", "Cross-validated classification suite", cmd_classify},
      {"report-all", "Every figure and table dataset plus a manifest", cmd_report_all},
  };
  // Shared options live on the top-level app so a config file can set them;
  // subcommands fall through so flags may follow the subcommand name.
  add_experiment_options(app, s);
  std::vector<std::pair<CLI::App*, const Entry*>> commands;
  for (const auto& e : entries) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    cmd->fallthrough();
    commands.emplace_back(cmd, &e);
  }
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--sentences", s.sentences, "Number of sentences");
  synth->add_option("--p-least-effort", s.p_least_effort, "Probability the reference gets the least-effort move")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--noise-temperature", s.noise_temperature, "Softness of the shortest-constituent choice");
  synth->add_option("--mean-length", s.mean_length, "Mean constituent length");
  synth->add_option("--max-length", s.max_length, "Longest constituent");
  synth->add_option("--k-weights", s.k_weights, "Comma-separated probabilities for k = 0, 1, 2, ...");
  synth->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(s);
    for (const auto& [cmd, entry] : commands) {
      if (!cmd->parsed()) continue;
      const auto config = to_config(s);
      if (config.corpus_path.empty()) {
        std::cerr << "error: --corpus is required\n\n" << app.help();
        return kExitUsage;
      }
      return entry->run(config);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    logger()->error("{}", e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace deplen
