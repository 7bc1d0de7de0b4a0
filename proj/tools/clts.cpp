#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "clts/corpus_io.hpp"
#include "clts/cotrain.hpp"
#include "clts/evaluation.hpp"
#include "clts/noise.hpp"
#include "clts/pipeline.hpp"
#include "clts/seed_transfer.hpp"
#include "clts/serialize.hpp"
#include "clts/synth.hpp"
#include "clts/teacher.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace clts;

namespace {

// Every subcommand resolves its configuration the same way: start from the
// JSON config file (or an empty one), then apply whichever flags were given.
struct ConfigArgs {
  CLI::App* sub = nullptr;
  std::string config_path;
  std::string out_dir;

  std::string source_corpus, target_unlabeled, target_test, dictionary;
  std::string corpus_format, teacher_input, noise_kind;
  std::vector<std::string> class_names;
  bool use_synth = false, update_teacher = false, strip_seeds = false, early_stop = false;
  int budget = 0, rounds = 0, lambda_steps = 0;
  double student_l2 = 0, noise_rate = 0, lambda_min = 0, lambda_max = 0;
  uint64_t seed = 0;

  void attach(CLI::App* s) {
    sub = s;
    s->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    s->add_option("--out", out_dir, "artifacts directory (default artifacts/<config digest>)");
    s->add_option("--source-corpus", source_corpus, "labeled source corpus");
    s->add_option("--target-unlabeled", target_unlabeled, "unlabeled target corpus");
    s->add_option("--target-test", target_test, "labeled target test corpus");
    s->add_option("--dictionary", dictionary, "bilingual dictionary (two-column)");
    s->add_option("--corpus-format", corpus_format, "jsonl or tsv");
    s->add_option("--classes", class_names, "class names, comma separated")->delimiter(',');
    s->add_flag("--synth", use_synth, "use a generated task (defaults unless the config has a synth block)");
    s->add_option("--budget", budget, "translation budget B");
    s->add_option("--seed", seed, "run seed");
    s->add_option("--rounds", rounds, "co-training rounds");
    s->add_flag("--early-stop", early_stop, "stop when disagreement stops decreasing");
    s->add_option("--student-l2", student_l2, "student L2 strength");
    s->add_option("--teacher-input", teacher_input, "binary or tfidf");
    s->add_flag("--update-teacher", update_teacher, "re-estimate the teacher between rounds");
    s->add_flag("--strip-seeds", strip_seeds, "zero seed-word columns in the student features");
    s->add_option("--noise-kind", noise_kind, "unif, freq, or adv");
    s->add_option("--noise-rate", noise_rate, "noise rate in [0, 1]");
    s->add_option("--lambda-min", lambda_min, "smallest grid lambda");
    s->add_option("--lambda-max", lambda_max, "largest grid lambda");
    s->add_option("--lambda-steps", lambda_steps, "grid size");
  }

  PipelineConfig resolve() const {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      in >> j;
      if (!j.is_object()) throw std::runtime_error(config_path + ": config must be a JSON object");
    }
    auto set = [&](const char* flag, const char* key, const auto& value) {
      if (sub->count(flag)) j[key] = value;
    };
    set("--source-corpus", "source_corpus", source_corpus);
    set("--target-unlabeled", "target_unlabeled", target_unlabeled);
    set("--target-test", "target_test", target_test);
    set("--dictionary", "dictionary", dictionary);
    set("--corpus-format", "corpus_format", corpus_format);
    set("--classes", "class_names", class_names);
    set("--budget", "budget", budget);
    set("--seed", "seed", seed);
    set("--rounds", "rounds", rounds);
    set("--early-stop", "early_stop", early_stop);
    set("--student-l2", "student_lambda_l2", student_l2);
    set("--teacher-input", "teacher_input", teacher_input);
    set("--update-teacher", "update_teacher", update_teacher);
    set("--strip-seeds", "strip_seeds", strip_seeds);
    set("--lambda-min", "lambda_min", lambda_min);
    set("--lambda-max", "lambda_max", lambda_max);
    set("--lambda-steps", "lambda_steps", lambda_steps);
    if (sub->count("--noise-kind")) {
      json n = j.contains("noise") && j["noise"].is_object() ? j["noise"] : json::object();
      n["kind"] = noise_kind;
      if (sub->count("--noise-rate")) n["rate"] = noise_rate;
      if (!n.contains("rate")) n["rate"] = 0.0;
      j["noise"] = n;
    } else if (sub->count("--noise-rate")) {
      if (!j.contains("noise") || !j["noise"].is_object())
        throw std::runtime_error("--noise-rate needs --noise-kind or a noise block in the config");
      j["noise"]["rate"] = noise_rate;
    }
    if (use_synth && (!j.contains("synth") || j["synth"].is_null())) j["synth"] = json::object();
    return PipelineConfig::from_json(j);
  }
};

std::vector<std::string> class_names_of(const PipelineConfig& config) {
  if (!config.synth) return config.class_names;
  std::vector<std::string> names;
  for (int k = 0; k < config.synth->num_classes; ++k) names.push_back("class" + std::to_string(k));
  return names;
}

fs::path artifacts_dir(const ConfigArgs& args, const PipelineConfig& config) {
  fs::path dir = args.out_dir.empty() ? fs::path("artifacts") / config.digest()
                                      : fs::path(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_config(const PipelineConfig& config, const fs::path& dir) {
  std::ofstream out(dir / "config.json");
  out << config.to_json().dump(2) << '\n';
}

std::string require_artifact(const fs::path& dir, const char* name, const char* producer) {
  fs::path p = dir / name;
  if (!fs::exists(p))
    throw std::runtime_error("missing " + p.string() + "; run `clts " + producer + "` first");
  return p.string();
}

void print_metrics(const char* who, const Metrics& m) {
  std::cout << who << ": accuracy " << std::fixed << std::setprecision(4) << m.accuracy
            << ", macro-F1 " << m.macro_f1 << '\n';
}

void cmd_train_source(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  config.validate();
  fs::path dir = artifacts_dir(args, config);
  write_config(config, dir);

  PipelineData data = load_pipeline_data(config);
  SourceModel model = fit_source(config, data.source);
  LambdaSelection sel = select_lambda(model.path, config.budget, data.classes.num_classes());
  save_model(model.vocab, (dir / "source_vocab.json").string());
  save_model(sel.weights, (dir / "source_model.json").string());

  std::cout << "source vocabulary: " << model.vocab.size() << " terms over "
            << data.source.size() << " documents\n";
  std::cout << "selected lambda " << sel.lambda << " (grid of " << model.path.points.size()
            << ")" << (sel.fallback ? " [fallback: no grid point admits the budget]" : "")
            << '\n';
  for (int k = 0; k < data.classes.num_classes(); ++k)
    std::cout << "  " << data.classes.names[k] << ": " << sel.weights.positive_count(k)
              << " positive terms\n";
  std::cout << "artifacts -> " << dir.string() << '\n';
}

void cmd_extract_seeds(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  config.validate();
  fs::path dir = artifacts_dir(args, config);

  Vocabulary vocab = load_vocabulary(require_artifact(dir, "source_vocab.json", "train-source"));
  WeightMatrix w = load_weight_matrix(require_artifact(dir, "source_model.json", "train-source"));
  SeedSet seeds = extract_seeds(w, vocab, config.budget, w.num_classes);
  save_model(seeds, (dir / "seeds.json").string());

  std::vector<std::string> names = class_names_of(config);
  std::ofstream tsv(dir / "seeds.tsv");
  for (int k = 0; k < seeds.num_classes(); ++k)
    for (const SeedEntry& e : seeds.per_class_seeds[k])
      tsv << names[k] << '\t' << e.term << '\t' << e.weights[k] << '\n';

  std::cout << "budget " << seeds.budget << " -> " << seeds.per_class << " seeds per class, "
            << seeds.distinct_terms().size() << " distinct terms\n";
  std::cout << "artifacts -> " << dir.string() << '\n';
}

void cmd_translate(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  config.validate();
  fs::path dir = artifacts_dir(args, config);

  SeedSet seeds = load_seed_set(require_artifact(dir, "seeds.json", "extract-seeds"));
  PipelineData data = load_pipeline_data(config);
  TranslatedSeedSet tset = translate_seeds(seeds, data.dict);
  save_model(tset, (dir / "translations.json").string());
  std::ofstream tsv(dir / "translations.tsv");
  export_translations_tsv(tset, tsv);

  int identity = tset.identity_count();
  std::cout << tset.entries.size() << " seed entries: "
            << tset.entries.size() - identity << " via dictionary, " << identity
            << " identity fallback\n";
  std::cout << "artifacts -> " << dir.string() << '\n';
}

void cmd_build_teacher(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  config.validate();
  fs::path dir = artifacts_dir(args, config);

  TranslatedSeedSet tset =
      load_translated_seed_set(require_artifact(dir, "translations.json", "translate"));
  PipelineData data = load_pipeline_data(config);
  Vocabulary teacher_vocab = fit_vocabulary(data.unlabeled, {1, 1}, 1);

  NoiseSpec noise;
  if (config.noise) {
    noise = *config.noise;
    noise.seed = noise_seed_for(config.seed);
    PerturbStats stats;
    if (noise.kind == NoiseKind::unif)
      tset = perturb_unif(tset, teacher_vocab, noise, &stats);
    else if (noise.kind == NoiseKind::freq)
      tset = perturb_freq(tset, teacher_vocab, data.unlabeled, noise, &stats);
    if (noise.kind != NoiseKind::adv)
      std::cout << "noise " << to_string(noise.kind) << " rate " << noise.rate << ": replaced "
                << stats.replaced << " of " << stats.considered << " terms\n";
  }
  TeacherMatrix teacher = build_teacher_matrix(tset, teacher_vocab);
  if (config.noise && config.noise->kind == NoiseKind::adv) {
    PerturbStats stats;
    teacher = perturb_adv(teacher, noise, &stats);
    std::cout << "noise adv rate " << noise.rate << ": swapped " << stats.replaced << " of "
              << stats.considered << " columns\n";
  }
  save_model(teacher_vocab, (dir / "teacher_vocab.json").string());
  save_model(teacher, (dir / "teacher.json").string());

  std::cout << "teacher matrix: " << teacher.columns.size() << " seed columns over "
            << teacher.num_cols << " vocabulary terms, " << teacher.dropped_terms
            << " translations dropped\n";
  std::cout << "coverage on unlabeled: " << std::fixed << std::setprecision(4)
            << teacher_coverage(teacher, data.unlabeled, teacher_vocab) << '\n';
  std::cout << "artifacts -> " << dir.string() << '\n';
}

void cmd_cotrain(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  config.validate();
  fs::path dir = artifacts_dir(args, config);

  Vocabulary teacher_vocab =
      load_vocabulary(require_artifact(dir, "teacher_vocab.json", "build-teacher"));
  TeacherMatrix teacher =
      load_teacher_matrix(require_artifact(dir, "teacher.json", "build-teacher"));
  PipelineData data = load_pipeline_data(config);
  Vocabulary student_vocab = fit_vocabulary(data.unlabeled, {1, 2}, config.student_min_df);
  DocTermMatrix features = transform_tfidf(data.unlabeled, student_vocab);

  {
    std::ofstream out(dir / "pseudo_labels.jsonl");
    export_pseudo_labels_jsonl(
        label_covered(teacher, data.unlabeled, teacher_vocab, config.teacher_input), out);
  }

  CoTrainConfig cc;
  cc.rounds = config.rounds;
  cc.early_stop = config.early_stop;
  cc.seed = cotrain_seed_for(config.seed);
  cc.teacher_input = config.teacher_input;
  cc.update_teacher = config.update_teacher;
  cc.strip_seeds = config.strip_seeds;
  cc.student.lambda_l2 = config.student_lambda_l2;
  CoTrainResult result = cotrain(teacher, data.unlabeled, teacher_vocab, student_vocab,
                                 features, cc);
  save_model(result.student, (dir / "student.json").string());

  for (std::size_t r = 0; r < result.report.rounds.size(); ++r) {
    const RoundReport& rr = result.report.rounds[r];
    std::cout << "round " << r + 1 << ": pool " << rr.pool_size << ", balanced "
              << rr.balanced_size << ", disagreement " << std::fixed << std::setprecision(4)
              << rr.disagreement << ", loss " << rr.train_loss << " (" << rr.train_iters
              << " iters)\n";
  }
  if (result.report.early_stopped) std::cout << "stopped early: disagreement stopped decreasing\n";
  std::cout << "artifacts -> " << dir.string() << '\n';
}

void cmd_evaluate(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  config.validate();
  fs::path dir = artifacts_dir(args, config);
  PipelineData data = load_pipeline_data(config);

  json report;
  bool any = false;
  if (fs::exists(dir / "teacher.json") && fs::exists(dir / "teacher_vocab.json")) {
    Vocabulary vocab = load_vocabulary((dir / "teacher_vocab.json").string());
    TeacherMatrix teacher = load_teacher_matrix((dir / "teacher.json").string());
    TeacherEval te = evaluate_teacher(teacher, data.test, vocab, config.teacher_input);
    print_metrics("teacher", te.metrics);
    std::cout << "teacher coverage on test: " << std::fixed << std::setprecision(4)
              << te.coverage << '\n';
    report["teacher"] = {{"accuracy", te.metrics.accuracy},
                         {"macro_f1", te.metrics.macro_f1},
                         {"coverage", te.coverage}};
    any = true;
  }
  if (fs::exists(dir / "student.json")) {
    StudentModel student = load_student_model((dir / "student.json").string());
    Metrics m = evaluate_student(student, data.test);
    print_metrics("student", m);
    report["student"] = {{"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}};
    any = true;
  }
  if (!any)
    throw std::runtime_error("nothing to evaluate in " + dir.string() +
                             "; run `clts build-teacher` or `clts cotrain` first");
  std::ofstream out(dir / "eval.json");
  out << report.dump(2) << '\n';
  std::cout << "artifacts -> " << dir.string() << '\n';
}

void cmd_run(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  config.validate();
  fs::path dir = artifacts_dir(args, config);
  write_config(config, dir);

  RunReport report = run_pipeline(config);
  {
    std::ofstream out(dir / "report.json");
    out << report.to_json().dump(2) << '\n';
  }

  std::cout << "lambda " << report.lambda
            << (report.lambda_fallback ? " [fallback]" : "") << ", "
            << report.translated_entries << " dictionary + " << report.identity_entries
            << " identity seeds, coverage " << std::fixed << std::setprecision(4)
            << report.coverage_unlabeled << '\n';
  std::cout << "rounds executed: " << report.cotrain.rounds_executed()
            << (report.cotrain.early_stopped ? " (early stop)" : "") << '\n';
  print_metrics("teacher", report.teacher_test);
  print_metrics("student", report.student_test);
  std::cout << "report digest " << report.digest() << '\n';
  std::cout << "artifacts -> " << dir.string() << '\n';
}

void cmd_noise_sweep(const ConfigArgs& args, const std::string& kind,
                     const std::vector<double>& rates, const std::vector<uint64_t>& seed_list,
                     const std::string& csv_path) {
  PipelineConfig base = args.resolve();
  base.noise = NoiseSpec{noise_kind_from_string(kind), 0.0, 0};
  base.validate();
  fs::path dir = artifacts_dir(args, base);
  std::vector<uint64_t> seeds = seed_list.empty() ? default_eval_seeds() : seed_list;
  std::vector<double> rate_list = rates.empty()
      ? std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}
      : rates;

  fs::path csv = csv_path.empty() ? dir / "noise_sweep.csv" : fs::path(csv_path);
  std::ofstream out(csv);
  if (!out) throw std::runtime_error("cannot write " + csv.string());
  out << "kind,rate,seed,teacher_acc,student_acc\n";

  for (uint64_t s : seeds) {
    PipelineConfig cfg = base;
    cfg.seed = s;
    // One data load and source fit per seed; only the noise rate varies inside.
    PipelineData data = load_pipeline_data(cfg);
    SourceModel source_model = fit_source(cfg, data.source);
    TargetFeatures target = build_target_features(cfg, data.unlabeled);
    for (double rate : rate_list) {
      cfg.noise->rate = rate;
      RunReport r = run_with(cfg, data, source_model, target);
      out << kind << ',' << rate << ',' << s << ',' << r.teacher_test.accuracy << ','
          << r.student_test.accuracy << '\n';
      std::cout << kind << " rate " << rate << " seed " << s << ": teacher "
                << std::fixed << std::setprecision(4) << r.teacher_test.accuracy
                << ", student " << r.student_test.accuracy << '\n';
    }
  }
  std::cout << "csv -> " << csv.string() << '\n';
}

void cmd_synth_gen(const ConfigArgs& args) {
  PipelineConfig config = args.resolve();
  if (!config.synth) config.synth = SynthTaskSpec{};
  config.validate();
  fs::path dir = artifacts_dir(args, config);

  SynthTaskSpec spec = *config.synth;
  spec.seed = config.seed;
  SynthTask task = generate_synth_task(spec);
  save_corpus_jsonl(task.source_labeled, task.classes, (dir / "source.jsonl").string());
  save_corpus_jsonl(task.target_unlabeled, task.classes, (dir / "unlabeled.jsonl").string());
  save_corpus_jsonl(task.target_test, task.classes, (dir / "test.jsonl").string());
  save_dictionary(task.dictionary, (dir / "dict.tsv").string());

  std::vector<int> preds;
  for (const Document& doc : task.target_test.docs) preds.push_back(task.oracle.predict(doc));
  std::cout << "generated " << task.source_labeled.size() << " source / "
            << task.target_unlabeled.size() << " unlabeled / " << task.target_test.size()
            << " test documents, dictionary " << task.dictionary.size() << " entries\n";
  std::cout << "oracle test accuracy: " << std::fixed << std::setprecision(4)
            << accuracy(preds, task.target_test.labels()) << '\n';
  std::cout << "artifacts -> " << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-lingual teacher-student text classification"};
  app.require_subcommand(1);

  ConfigArgs train_args, seeds_args, translate_args, teacher_args, cotrain_args, eval_args,
      run_args, sweep_args, synth_args;

  train_args.attach(app.add_subcommand("train-source", "fit the source classifier path"));
  seeds_args.attach(app.add_subcommand("extract-seeds", "pick top positive terms per class"));
  translate_args.attach(app.add_subcommand("translate", "translate seeds through the dictionary"));
  teacher_args.attach(app.add_subcommand("build-teacher", "assemble the target-side teacher"));
  cotrain_args.attach(app.add_subcommand("cotrain", "pseudo-label and train the student"));
  eval_args.attach(app.add_subcommand("evaluate", "score saved models on the test corpus"));
  run_args.attach(app.add_subcommand("run", "end-to-end pipeline"));

  CLI::App* sweep = app.add_subcommand("noise-sweep", "grid of noise rates x seeds, CSV out");
  sweep_args.attach(sweep);
  std::string sweep_kind;
  std::vector<double> sweep_rates;
  std::vector<uint64_t> sweep_seeds;
  std::string sweep_csv;
  sweep->add_option("--kind", sweep_kind, "unif, freq, or adv")->required();
  sweep->add_option("--rates", sweep_rates, "rates, comma separated (default 0..0.7)")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "seeds, comma separated (default built-in five)")
      ->delimiter(',');
  sweep->add_option("--csv", sweep_csv, "CSV output path (default <artifacts>/noise_sweep.csv)");

  synth_args.attach(app.add_subcommand("synth-gen", "write a generated task to disk"));

  train_args.sub->callback([&] { cmd_train_source(train_args); });
  seeds_args.sub->callback([&] { cmd_extract_seeds(seeds_args); });
  translate_args.sub->callback([&] { cmd_translate(translate_args); });
  teacher_args.sub->callback([&] { cmd_build_teacher(teacher_args); });
  cotrain_args.sub->callback([&] { cmd_cotrain(cotrain_args); });
  eval_args.sub->callback([&] { cmd_evaluate(eval_args); });
  run_args.sub->callback([&] { cmd_run(run_args); });
  sweep->callback([&] { cmd_noise_sweep(sweep_args, sweep_kind, sweep_rates, sweep_seeds, sweep_csv); });
  synth_args.sub->callback([&] { cmd_synth_gen(synth_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
