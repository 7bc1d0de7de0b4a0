#include "clts/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "clts/mathutil.hpp"
#include "clts/rng.hpp"
#include "clts/seed_transfer.hpp"
#include "clts/teacher.hpp"

namespace clts {
namespace {

using nlohmann::json;

// Stream tags for per-run sub-seeds, so noise draws and co-training draws
// never share an RNG stream even though both derive from the run seed.
constexpr uint64_t kNoiseStream = 1;
constexpr uint64_t kCoTrainStream = 2;

std::string format_to_string(CorpusFormat f) { return f == CorpusFormat::jsonl ? "jsonl" : "tsv"; }

CorpusFormat format_from_string(const std::string& s) {
  if (s == "jsonl") return CorpusFormat::jsonl;
  if (s == "tsv") return CorpusFormat::tsv;
  throw std::runtime_error("unknown corpus format '" + s + "' (expected jsonl or tsv)");
}

std::string input_to_string(TeacherInput t) { return t == TeacherInput::binary ? "binary" : "tfidf"; }

TeacherInput input_from_string(const std::string& s) {
  if (s == "binary") return TeacherInput::binary;
  if (s == "tfidf") return TeacherInput::tfidf;
  throw std::runtime_error("unknown teacher input '" + s + "' (expected binary or tfidf)");
}

json synth_to_json(const SynthTaskSpec& s) {
  json j;
  j["num_classes"] = s.num_classes;
  j["source_vocab"] = s.source_vocab;
  j["target_vocab"] = s.target_vocab;
  j["indicative_per_class"] = s.indicative_per_class;
  j["indicative_prob"] = s.indicative_prob;
  j["leak_prob"] = s.leak_prob;
  j["pool_zipf"] = s.pool_zipf;
  j["background_zipf"] = s.background_zipf;
  j["doc_len_min"] = s.doc_len_min;
  j["doc_len_max"] = s.doc_len_max;
  j["source_docs"] = s.source_docs;
  j["unlabeled_docs"] = s.unlabeled_docs;
  j["test_docs"] = s.test_docs;
  j["dict_coverage"] = s.dict_coverage;
  return j;
}

SynthTaskSpec synth_from_json(const json& j) {
  SynthTaskSpec s;
  static const std::set<std::string> known = {
      "num_classes", "source_vocab",    "target_vocab", "indicative_per_class",
      "indicative_prob", "leak_prob",   "pool_zipf",    "background_zipf",
      "doc_len_min", "doc_len_max",     "source_docs",  "unlabeled_docs",
      "test_docs",   "dict_coverage"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::runtime_error("unknown synth config key '" + it.key() + "'");
  s.num_classes = j.value("num_classes", s.num_classes);
  s.source_vocab = j.value("source_vocab", s.source_vocab);
  s.target_vocab = j.value("target_vocab", s.target_vocab);
  s.indicative_per_class = j.value("indicative_per_class", s.indicative_per_class);
  s.indicative_prob = j.value("indicative_prob", s.indicative_prob);
  s.leak_prob = j.value("leak_prob", s.leak_prob);
  s.pool_zipf = j.value("pool_zipf", s.pool_zipf);
  s.background_zipf = j.value("background_zipf", s.background_zipf);
  s.doc_len_min = j.value("doc_len_min", s.doc_len_min);
  s.doc_len_max = j.value("doc_len_max", s.doc_len_max);
  s.source_docs = j.value("source_docs", s.source_docs);
  s.unlabeled_docs = j.value("unlabeled_docs", s.unlabeled_docs);
  s.test_docs = j.value("test_docs", s.test_docs);
  s.dict_coverage = j.value("dict_coverage", s.dict_coverage);
  return s;
}

int config_num_classes(const PipelineConfig& c) {
  return c.synth ? c.synth->num_classes : static_cast<int>(c.class_names.size());
}

json metrics_to_json(const Metrics& m) {
  return json{{"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}};
}

}  // namespace

std::vector<double> LambdaGridSpec::values() const {
  if (min <= 0 || max < min || steps < 1)
    throw std::runtime_error("lambda grid requires 0 < min <= max and steps >= 1");
  if (steps == 1) return {min};
  std::vector<double> out(steps);
  const double lo = std::log10(min), hi = std::log10(max);
  for (int i = 0; i < steps; ++i)
    out[i] = std::pow(10.0, lo + (hi - lo) * i / (steps - 1));
  return out;
}

void PipelineConfig::validate() const {
  if (synth) {
    synth->validate();
  } else {
    if (source_corpus.empty() || target_unlabeled.empty() || target_test.empty() ||
        dictionary.empty())
      throw std::runtime_error(
          "config needs either a synth block or all four corpus/dictionary paths");
    ClassLabelSpace{class_names}.validate();
  }
  const int k = config_num_classes(*this);
  if (budget < k)
    throw std::runtime_error("budget " + std::to_string(budget) + " is below the class count " +
                             std::to_string(k));
  lambda_grid.values();  // throws on a bad grid
  if (rounds < 1) throw std::runtime_error("rounds must be at least 1");
  if (student_lambda_l2 < 0) throw std::runtime_error("student_lambda_l2 must be >= 0");
  if (source_min_df < 1 || student_min_df < 1)
    throw std::runtime_error("min_df values must be at least 1");
  if (noise && (noise->rate < 0 || noise->rate > 1))
    throw std::runtime_error("noise rate must lie in [0, 1]");
}

nlohmann::json PipelineConfig::to_json() const {
  json j;
  j["source_corpus"] = source_corpus;
  j["target_unlabeled"] = target_unlabeled;
  j["target_test"] = target_test;
  j["dictionary"] = dictionary;
  j["corpus_format"] = format_to_string(corpus_format);
  j["class_names"] = class_names;
  j["synth"] = synth ? synth_to_json(*synth) : json(nullptr);
  j["budget"] = budget;
  j["lambda_min"] = lambda_grid.min;
  j["lambda_max"] = lambda_grid.max;
  j["lambda_steps"] = lambda_grid.steps;
  j["rounds"] = rounds;
  j["early_stop"] = early_stop;
  j["student_lambda_l2"] = student_lambda_l2;
  j["teacher_input"] = input_to_string(teacher_input);
  j["lowercase"] = tokenizer.lowercase;
  j["strip_punct"] = tokenizer.strip_punct;
  j["source_min_df"] = source_min_df;
  j["student_min_df"] = student_min_df;
  j["update_teacher"] = update_teacher;
  j["strip_seeds"] = strip_seeds;
  j["noise"] = noise ? json{{"kind", to_string(noise->kind)}, {"rate", noise->rate}}
                     : json(nullptr);
  j["seed"] = seed;
  return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "source_corpus", "target_unlabeled", "target_test",   "dictionary",
      "corpus_format", "class_names",      "synth",         "budget",
      "lambda_min",    "lambda_max",       "lambda_steps",  "rounds",
      "early_stop",    "student_lambda_l2", "teacher_input", "lowercase",
      "strip_punct",   "source_min_df",    "student_min_df", "update_teacher",
      "strip_seeds",   "noise",            "seed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::runtime_error("unknown config key '" + it.key() + "'");

  PipelineConfig c;
  c.source_corpus = j.value("source_corpus", c.source_corpus);
  c.target_unlabeled = j.value("target_unlabeled", c.target_unlabeled);
  c.target_test = j.value("target_test", c.target_test);
  c.dictionary = j.value("dictionary", c.dictionary);
  if (j.contains("corpus_format"))
    c.corpus_format = format_from_string(j.at("corpus_format").get<std::string>());
  c.class_names = j.value("class_names", c.class_names);
  if (j.contains("synth") && !j.at("synth").is_null()) c.synth = synth_from_json(j.at("synth"));
  c.budget = j.value("budget", c.budget);
  c.lambda_grid.min = j.value("lambda_min", c.lambda_grid.min);
  c.lambda_grid.max = j.value("lambda_max", c.lambda_grid.max);
  c.lambda_grid.steps = j.value("lambda_steps", c.lambda_grid.steps);
  c.rounds = j.value("rounds", c.rounds);
  c.early_stop = j.value("early_stop", c.early_stop);
  c.student_lambda_l2 = j.value("student_lambda_l2", c.student_lambda_l2);
  if (j.contains("teacher_input"))
    c.teacher_input = input_from_string(j.at("teacher_input").get<std::string>());
  c.tokenizer.lowercase = j.value("lowercase", c.tokenizer.lowercase);
  c.tokenizer.strip_punct = j.value("strip_punct", c.tokenizer.strip_punct);
  c.source_min_df = j.value("source_min_df", c.source_min_df);
  c.student_min_df = j.value("student_min_df", c.student_min_df);
  c.update_teacher = j.value("update_teacher", c.update_teacher);
  c.strip_seeds = j.value("strip_seeds", c.strip_seeds);
  if (j.contains("noise") && !j.at("noise").is_null()) {
    const json& n = j.at("noise");
    NoiseSpec spec;
    spec.kind = noise_kind_from_string(n.at("kind").get<std::string>());
    spec.rate = n.at("rate").get<double>();
    c.noise = spec;
  }
  c.seed = j.value("seed", c.seed);
  return c;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return from_json(j);
}

std::string PipelineConfig::digest() const { return hex64(fnv1a64(to_json().dump())); }

uint64_t noise_seed_for(uint64_t run_seed) { return Rng(run_seed).fork(kNoiseStream).seed(); }

uint64_t cotrain_seed_for(uint64_t run_seed) { return Rng(run_seed).fork(kCoTrainStream).seed(); }

PipelineData load_pipeline_data(const PipelineConfig& config) {
  config.validate();
  if (config.synth) {
    // The run seed drives generation, so sweeping seeds sweeps tasks too.
    SynthTaskSpec spec = *config.synth;
    spec.seed = config.seed;
    SynthTask task = generate_synth_task(spec);
    return {std::move(task.source_labeled), std::move(task.target_unlabeled),
            std::move(task.target_test), std::move(task.classes), std::move(task.dictionary)};
  }
  PipelineData data;
  data.classes = ClassLabelSpace{config.class_names};
  data.source = load_corpus(config.source_corpus, config.corpus_format, CorpusKind::labeled,
                            data.classes, config.tokenizer);
  data.unlabeled = load_corpus(config.target_unlabeled, config.corpus_format,
                               CorpusKind::unlabeled, data.classes, config.tokenizer);
  data.test = load_corpus(config.target_test, config.corpus_format, CorpusKind::labeled,
                          data.classes, config.tokenizer);
  data.dict = load_dictionary(config.dictionary, config.tokenizer);
  return data;
}

SourceModel fit_source(const PipelineConfig& config, const Corpus& source) {
  SourceModel m;
  m.vocab = fit_vocabulary(source, {1, 1}, config.source_min_df);
  DocTermMatrix X = transform_tfidf(source, m.vocab);
  m.path = regularization_path(X, source.labels(), config_num_classes(config),
                               config.lambda_grid.values());
  return m;
}

TargetFeatures build_target_features(const PipelineConfig& config, const Corpus& unlabeled) {
  TargetFeatures t;
  t.teacher_vocab = fit_vocabulary(unlabeled, {1, 1}, 1);
  t.student_vocab = fit_vocabulary(unlabeled, {1, 2}, config.student_min_df);
  t.student_matrix = transform_tfidf(unlabeled, t.student_vocab);
  return t;
}

nlohmann::json to_json(const CoTrainReport& r) {
  json rounds = json::array();
  for (const RoundReport& rr : r.rounds)
    rounds.push_back(json{{"pool_size", rr.pool_size},
                          {"balanced_size", rr.balanced_size},
                          {"disagreement", rr.disagreement},
                          {"train_loss", rr.train_loss},
                          {"train_iters", rr.train_iters}});
  return json{{"rounds", std::move(rounds)}, {"early_stopped", r.early_stopped}};
}

nlohmann::json RunReport::to_json() const {
  json j;
  j["seed"] = seed;
  j["config_digest"] = config_digest;
  j["lambda"] = lambda;
  j["lambda_fallback"] = lambda_fallback;
  j["seeds_per_class"] = seeds_per_class;
  j["translated_entries"] = translated_entries;
  j["identity_entries"] = identity_entries;
  j["dropped_terms"] = dropped_terms;
  j["coverage_unlabeled"] = coverage_unlabeled;
  j["cotrain"] = clts::to_json(cotrain);
  j["teacher_test"] = metrics_to_json(teacher_test);
  j["teacher_test_coverage"] = teacher_test_coverage;
  j["student_test"] = metrics_to_json(student_test);
  return j;
}

std::string RunReport::digest() const { return hex64(fnv1a64(to_json().dump())); }

RunReport run_with(const PipelineConfig& config, const PipelineData& data,
                   const SourceModel& source_model, const TargetFeatures& target) {
  config.validate();
  const int k = data.classes.num_classes();

  LambdaSelection sel = select_lambda(source_model.path, config.budget, k);
  SeedSet seeds = extract_seeds(sel.weights, source_model.vocab, config.budget, k);
  TranslatedSeedSet tset = translate_seeds(seeds, data.dict);

  NoiseSpec noise;
  if (config.noise) {
    noise = *config.noise;
    noise.seed = noise_seed_for(config.seed);
    if (noise.kind == NoiseKind::unif)
      tset = perturb_unif(tset, target.teacher_vocab, noise);
    else if (noise.kind == NoiseKind::freq)
      tset = perturb_freq(tset, target.teacher_vocab, data.unlabeled, noise);
  }

  TeacherMatrix teacher = build_teacher_matrix(tset, target.teacher_vocab);
  if (config.noise && config.noise->kind == NoiseKind::adv)
    teacher = perturb_adv(teacher, noise);

  CoTrainConfig cc;
  cc.rounds = config.rounds;
  cc.early_stop = config.early_stop;
  cc.seed = cotrain_seed_for(config.seed);
  cc.teacher_input = config.teacher_input;
  cc.update_teacher = config.update_teacher;
  cc.strip_seeds = config.strip_seeds;
  cc.student.lambda_l2 = config.student_lambda_l2;
  CoTrainResult result = cotrain(teacher, data.unlabeled, target.teacher_vocab,
                                 target.student_vocab, target.student_matrix, cc);

  RunReport report;
  report.seed = config.seed;
  report.config_digest = config.digest();
  report.lambda = sel.lambda;
  report.lambda_fallback = sel.fallback;
  for (const auto& class_seeds : seeds.per_class_seeds) {
    std::vector<std::string> terms;
    for (const SeedEntry& e : class_seeds) terms.push_back(e.term);
    report.seeds_per_class.push_back(std::move(terms));
  }
  report.identity_entries = tset.identity_count();
  report.translated_entries = static_cast<int>(tset.entries.size()) - report.identity_entries;
  report.dropped_terms = teacher.dropped_terms;
  report.coverage_unlabeled = teacher_coverage(teacher, data.unlabeled, target.teacher_vocab);
  report.cotrain = result.report;
  TeacherEval te = evaluate_teacher(teacher, data.test, target.teacher_vocab, config.teacher_input);
  report.teacher_test = te.metrics;
  report.teacher_test_coverage = te.coverage;
  report.student_test = evaluate_student(result.student, data.test);
  return report;
}

RunReport run_pipeline(const PipelineConfig& config) {
  PipelineData data = load_pipeline_data(config);
  SourceModel source_model = fit_source(config, data.source);
  TargetFeatures target = build_target_features(config, data.unlabeled);
  return run_with(config, data, source_model, target);
}

nlohmann::json MultiSeedReport::to_json() const {
  json j;
  json run_list = json::array();
  for (const RunReport& r : runs) run_list.push_back(r.to_json());
  j["runs"] = std::move(run_list);
  json stat_obj;
  for (const auto& [name, stat] : stats)
    stat_obj[name] = json{{"mean", stat.mean}, {"stddev", stat.stddev}};
  j["stats"] = std::move(stat_obj);
  return j;
}

MultiSeedReport multi_seed_run(const PipelineConfig& config, const std::vector<uint64_t>& seeds) {
  if (seeds.empty()) throw std::runtime_error("multi_seed_run needs at least one seed");
  MultiSeedReport out;
  if (config.synth) {
    // Each seed regenerates the task, so everything refits per run.
    for (uint64_t s : seeds) {
      PipelineConfig c = config;
      c.seed = s;
      out.runs.push_back(run_pipeline(c));
    }
  } else {
    // File-backed corpora and the source fit are seed-independent; share them.
    PipelineData data = load_pipeline_data(config);
    SourceModel source_model = fit_source(config, data.source);
    TargetFeatures target = build_target_features(config, data.unlabeled);
    for (uint64_t s : seeds) {
      PipelineConfig c = config;
      c.seed = s;
      out.runs.push_back(run_with(c, data, source_model, target));
    }
  }
  auto collect = [&](const char* name, auto get) {
    std::vector<double> v;
    for (const RunReport& r : out.runs) v.push_back(get(r));
    out.stats[name] = mean_stddev(v);
  };
  collect("teacher_accuracy", [](const RunReport& r) { return r.teacher_test.accuracy; });
  collect("teacher_macro_f1", [](const RunReport& r) { return r.teacher_test.macro_f1; });
  collect("student_accuracy", [](const RunReport& r) { return r.student_test.accuracy; });
  collect("student_macro_f1", [](const RunReport& r) { return r.student_test.macro_f1; });
  return out;
}

}  // namespace clts
