#include "clts/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "clts/mathutil.hpp"

namespace clts {
namespace {

using nlohmann::json;

constexpr const char* kMagic = "clts-artifact";
constexpr int kVersion = 1;

void write_artifact(const std::string& kind, json body, const std::string& path) {
  body["magic"] = kMagic;
  body["version"] = kVersion;
  body["kind"] = kind;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body.dump() << '\n';
}

json read_artifact(const std::string& kind, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": corrupt artifact: " + e.what());
  }
  if (!j.is_object() || j.value("magic", "") != kMagic)
    throw std::runtime_error(path + ": not a clts artifact");
  if (j.value("version", -1) != kVersion)
    throw std::runtime_error(path + ": unsupported artifact version " +
                             std::to_string(j.value("version", -1)));
  if (j.value("kind", "") != kind)
    throw std::runtime_error(path + ": expected a " + kind + " artifact, found '" +
                             j.value("kind", "?") + "'");
  return j;
}

// (class, column, value) triplets, zeros omitted.
json triplets(const std::vector<SparseRow>& rows) {
  json t = json::array();
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (auto& [c, v] : rows[k]) t.push_back(json::array({k, c, v}));
  return t;
}

std::vector<SparseRow> from_triplets(const json& t, int num_classes, const std::string& path) {
  std::vector<SparseRow> rows(num_classes);
  for (const json& e : t) {
    if (!e.is_array() || e.size() != 3)
      throw std::runtime_error(path + ": malformed weight triplet");
    int k = e[0].get<int>();
    if (k < 0 || k >= num_classes) throw std::runtime_error(path + ": triplet class out of range");
    rows[k].emplace_back(e[1].get<int>(), e[2].get<double>());
  }
  return rows;
}

json vocab_body(const Vocabulary& v) {
  json j;
  j["terms"] = v.terms;
  j["df"] = v.df;
  j["ngram"] = json::array({v.ngram_lo, v.ngram_hi});
  j["fitted_docs"] = v.fitted_docs;
  return j;
}

Vocabulary vocab_from(const json& j) {
  return Vocabulary::from_terms(j.at("terms").get<std::vector<std::string>>(),
                                j.at("df").get<std::vector<int>>(),
                                {j.at("ngram")[0].get<int>(), j.at("ngram")[1].get<int>()},
                                j.at("fitted_docs").get<int>());
}

}  // namespace

void save_model(const Vocabulary& v, const std::string& path) {
  write_artifact("vocabulary", vocab_body(v), path);
}

Vocabulary load_vocabulary(const std::string& path) {
  return vocab_from(read_artifact("vocabulary", path));
}

void save_model(const WeightMatrix& w, const std::string& path) {
  json j;
  j["num_classes"] = w.num_classes;
  j["num_cols"] = w.num_cols;
  j["lambda"] = w.lambda;
  j["bias"] = w.bias;
  j["weights"] = triplets(w.rows);
  write_artifact("weight_matrix", std::move(j), path);
}

WeightMatrix load_weight_matrix(const std::string& path) {
  json j = read_artifact("weight_matrix", path);
  WeightMatrix w;
  w.num_classes = j.at("num_classes").get<int>();
  w.num_cols = j.at("num_cols").get<int>();
  w.lambda = j.at("lambda").get<double>();
  w.bias = j.at("bias").get<std::vector<double>>();
  w.rows = from_triplets(j.at("weights"), w.num_classes, path);
  return w;
}

void save_model(const SeedSet& s, const std::string& path) {
  json j;
  j["budget"] = s.budget;
  j["per_class"] = s.per_class;
  j["budget_not_divisible"] = s.budget_not_divisible;
  j["classes_short"] = s.classes_short;
  json classes = json::array();
  for (const auto& list : s.per_class_seeds) {
    json seeds = json::array();
    for (const SeedEntry& e : list) seeds.push_back(json{{"term", e.term}, {"weights", e.weights}});
    classes.push_back(std::move(seeds));
  }
  j["seeds"] = std::move(classes);
  write_artifact("seed_set", std::move(j), path);
}

SeedSet load_seed_set(const std::string& path) {
  json j = read_artifact("seed_set", path);
  SeedSet s;
  s.budget = j.at("budget").get<int>();
  s.per_class = j.at("per_class").get<int>();
  s.budget_not_divisible = j.at("budget_not_divisible").get<bool>();
  s.classes_short = j.at("classes_short").get<int>();
  for (const json& list : j.at("seeds")) {
    std::vector<SeedEntry> seeds;
    for (const json& e : list)
      seeds.push_back({e.at("term").get<std::string>(), e.at("weights").get<std::vector<double>>()});
    s.per_class_seeds.push_back(std::move(seeds));
  }
  return s;
}

void save_model(const TranslatedSeedSet& t, const std::string& path) {
  json entries = json::array();
  for (const TranslatedSeed& e : t.entries) {
    entries.push_back(json{{"source", e.source},
                           {"targets", e.targets},
                           {"weights", e.weights},
                           {"provenance", e.provenance == Provenance::dictionary ? "dictionary"
                                                                                 : "identity"}});
  }
  write_artifact("translated_seed_set", json{{"entries", std::move(entries)}}, path);
}

TranslatedSeedSet load_translated_seed_set(const std::string& path) {
  json j = read_artifact("translated_seed_set", path);
  TranslatedSeedSet t;
  for (const json& e : j.at("entries")) {
    TranslatedSeed s;
    s.source = e.at("source").get<std::string>();
    s.targets = e.at("targets").get<std::vector<std::string>>();
    s.weights = e.at("weights").get<std::vector<double>>();
    std::string prov = e.at("provenance").get<std::string>();
    if (prov != "dictionary" && prov != "identity")
      throw std::runtime_error(path + ": unknown provenance '" + prov + "'");
    s.provenance = prov == "dictionary" ? Provenance::dictionary : Provenance::identity;
    t.entries.push_back(std::move(s));
  }
  return t;
}

void save_model(const TeacherMatrix& z, const std::string& path) {
  json j;
  j["num_classes"] = z.num_classes;
  j["num_cols"] = z.num_cols;
  j["dropped_terms"] = z.dropped_terms;
  json cols = json::array();
  for (const auto& [c, w] : z.columns) cols.push_back(json::array({c, w}));
  j["columns"] = std::move(cols);
  write_artifact("teacher_matrix", std::move(j), path);
}

TeacherMatrix load_teacher_matrix(const std::string& path) {
  json j = read_artifact("teacher_matrix", path);
  TeacherMatrix z;
  z.num_classes = j.at("num_classes").get<int>();
  z.num_cols = j.at("num_cols").get<int>();
  z.dropped_terms = j.at("dropped_terms").get<int>();
  for (const json& e : j.at("columns"))
    z.columns.emplace(e[0].get<int>(), e[1].get<std::vector<double>>());
  return z;
}

void save_model(const StudentModel& m, const std::string& path) {
  json j;
  j["num_classes"] = m.num_classes();
  j["bias"] = m.bias;
  j["vocab"] = vocab_body(m.vocab);
  std::vector<SparseRow> sparse(m.weights.size());
  for (std::size_t k = 0; k < m.weights.size(); ++k)
    for (std::size_t c = 0; c < m.weights[k].size(); ++c)
      if (m.weights[k][c] != 0.0) sparse[k].emplace_back(static_cast<int>(c), m.weights[k][c]);
  j["weights"] = triplets(sparse);
  write_artifact("student_model", std::move(j), path);
}

StudentModel load_student_model(const std::string& path) {
  json j = read_artifact("student_model", path);
  StudentModel m;
  m.bias = j.at("bias").get<std::vector<double>>();
  m.vocab = vocab_from(j.at("vocab"));
  const int K = j.at("num_classes").get<int>();
  if (K != static_cast<int>(m.bias.size()))
    throw std::runtime_error(path + ": bias length does not match num_classes");
  m.weights.assign(K, std::vector<double>(m.vocab.size(), 0.0));
  std::vector<SparseRow> rows = from_triplets(j.at("weights"), K, path);
  for (int k = 0; k < K; ++k)
    for (auto& [c, v] : rows[k]) {
      if (c < 0 || c >= m.vocab.size()) throw std::runtime_error(path + ": column out of range");
      m.weights[k][c] = v;
    }
  return m;
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hex64(fnv1a64(ss.str()));
}

}  // namespace clts
