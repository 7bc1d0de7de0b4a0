#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "clts/corpus_io.hpp"
#include "clts/cotrain.hpp"
#include "clts/evaluation.hpp"
#include "clts/noise.hpp"
#include "clts/sparse_logreg.hpp"
#include "clts/synth.hpp"

namespace clts {

struct LambdaGridSpec {
  double min = 0.1;
  double max = 1e7;
  int steps = 50;
  std::vector<double> values() const;  // log-even, ascending
};

struct PipelineConfig {
  // Either file-backed corpora ...
  std::string source_corpus;
  std::string target_unlabeled;
  std::string target_test;
  std::string dictionary;
  CorpusFormat corpus_format = CorpusFormat::jsonl;
  std::vector<std::string> class_names;
  // ... or a generated task (takes precedence when set).
  std::optional<SynthTaskSpec> synth;

  int budget = 30;
  LambdaGridSpec lambda_grid;
  int rounds = 2;
  bool early_stop = false;
  double student_lambda_l2 = 1.0;
  TeacherInput teacher_input = TeacherInput::binary;
  TokenizerConfig tokenizer;
  int source_min_df = 1;
  int student_min_df = 2;
  bool update_teacher = false;
  bool strip_seeds = false;
  std::optional<NoiseSpec> noise;  // spec.seed is ignored; the run seed is used
  uint64_t seed = 42;

  void validate() const;  // budget >= K, rounds >= 1, grid sane, ...
  nlohmann::json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig from_json_file(const std::string& path);
  std::string digest() const;  // 16 hex digits over the canonical JSON form
};

struct PipelineData {
  Corpus source;
  Corpus unlabeled;
  Corpus test;
  ClassLabelSpace classes;
  BilingualDictionary dict;
};

PipelineData load_pipeline_data(const PipelineConfig& config);

// Sub-seeds derived from the run seed, one stream per purpose, so the staged
// subcommands and the end-to-end run draw identical random streams.
uint64_t noise_seed_for(uint64_t run_seed);
uint64_t cotrain_seed_for(uint64_t run_seed);

struct SourceModel {
  Vocabulary vocab;
  RegPath path;
};

// tf-idf unigram features on the source corpus, then the full grid.
SourceModel fit_source(const PipelineConfig& config, const Corpus& source);

struct TargetFeatures {
  Vocabulary teacher_vocab;   // unigrams over the unlabeled corpus
  Vocabulary student_vocab;   // 1-2 grams, min_df = student_min_df
  DocTermMatrix student_matrix;  // tf-idf rows for the unlabeled corpus
};

TargetFeatures build_target_features(const PipelineConfig& config, const Corpus& unlabeled);

struct RunReport {
  uint64_t seed = 0;
  std::string config_digest;
  double lambda = 0;
  bool lambda_fallback = false;
  std::vector<std::vector<std::string>> seeds_per_class;
  int translated_entries = 0;
  int identity_entries = 0;
  int dropped_terms = 0;
  double coverage_unlabeled = 0;
  CoTrainReport cotrain;
  Metrics teacher_test;
  double teacher_test_coverage = 0;
  Metrics student_test;

  nlohmann::json to_json() const;
  std::string digest() const;  // over the canonical JSON form
};

nlohmann::json to_json(const CoTrainReport& r);

// Full run: select lambda, extract and translate seeds, apply noise if
// configured, build the teacher, co-train, evaluate both models on the test
// corpus. Reuses previously fitted stages so sweeps can share them.
RunReport run_with(const PipelineConfig& config, const PipelineData& data,
                   const SourceModel& source_model, const TargetFeatures& target);

RunReport run_pipeline(const PipelineConfig& config);

struct MultiSeedReport {
  std::vector<RunReport> runs;
  std::map<std::string, SeedStat> stats;  // teacher/student accuracy and macro-F1
  nlohmann::json to_json() const;
};

// Runs the pipeline once per seed (a generated task is regenerated with each
// seed) and aggregates mean and population standard deviation per metric.
MultiSeedReport multi_seed_run(const PipelineConfig& config, const std::vector<uint64_t>& seeds);

}  // namespace clts
