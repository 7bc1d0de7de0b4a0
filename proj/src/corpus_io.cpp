#include "clts/corpus_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace clts {
namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::string line_err(const std::string& path, std::size_t line, const std::string& what) {
  return path + ":" + std::to_string(line) + ": " + what;
}

int resolve_label(const std::string& name, const ClassLabelSpace& classes,
                  const std::string& path, std::size_t line) {
  auto idx = classes.index_of(name);
  if (!idx) throw std::runtime_error(line_err(path, line, "unknown label '" + name + "'"));
  return *idx;
}

}  // namespace

Corpus load_corpus(const std::string& path, CorpusFormat format, CorpusKind kind,
                   const ClassLabelSpace& classes, const TokenizerConfig& tok) {
  classes.validate();
  std::ifstream in = open_input(path);

  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  std::size_t empty_docs = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;

    Document doc;
    doc.id = "doc" + std::to_string(lineno);
    std::string text;

    if (format == CorpusFormat::jsonl) {
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::parse_error& e) {
        throw std::runtime_error(line_err(path, lineno, std::string("bad JSON: ") + e.what()));
      }
      if (!rec.is_object() || !rec.contains("text") || !rec["text"].is_string())
        throw std::runtime_error(line_err(path, lineno, "record needs a string \"text\" field"));
      text = rec["text"].get<std::string>();
      if (rec.contains("id")) {
        if (rec["id"].is_string())
          doc.id = rec["id"].get<std::string>();
        else
          doc.id = rec["id"].dump();
      }
      if (kind == CorpusKind::labeled) {
        if (!rec.contains("label") || !rec["label"].is_string())
          throw std::runtime_error(line_err(path, lineno, "labeled record has no string label"));
        doc.label = resolve_label(rec["label"].get<std::string>(), classes, path, lineno);
      }
    } else {  // tsv
      if (kind == CorpusKind::labeled) {
        auto tab = line.find('\t');
        if (tab == std::string::npos)
          throw std::runtime_error(line_err(path, lineno, "expected label<TAB>text"));
        doc.label = resolve_label(line.substr(0, tab), classes, path, lineno);
        text = line.substr(tab + 1);
      } else {
        text = line;
      }
    }

    doc.tokens = tokenize(text, tok);
    if (doc.tokens.empty()) ++empty_docs;
    corpus.docs.push_back(std::move(doc));
  }

  if (empty_docs > 0)
    std::cerr << "warning: " << path << ": " << empty_docs
              << " document(s) have no tokens after tokenization\n";
  return corpus;
}

BilingualDictionary load_dictionary(const std::string& path, const TokenizerConfig& tok) {
  std::ifstream in = open_input(path);
  BilingualDictionary dict;
  std::string line;
  std::size_t lineno = 0;
  std::size_t skipped = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string src, tgt, extra;
    if (!(fields >> src >> tgt) || (fields >> extra))
      throw std::runtime_error(line_err(path, lineno, "expected two columns 'source target'"));
    std::string nsrc = normalize_token(src, tok);
    std::string ntgt = normalize_token(tgt, tok);
    if (nsrc.empty() || ntgt.empty()) {  // pure punctuation on either side
      ++skipped;
      continue;
    }
    dict.add(nsrc, ntgt);
  }

  if (skipped > 0)
    std::cerr << "warning: " << path << ": skipped " << skipped
              << " pair(s) that normalized to empty\n";
  return dict;
}

void save_corpus_jsonl(const Corpus& corpus, const ClassLabelSpace& classes,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const Document& d : corpus.docs) {
    json rec;
    rec["id"] = d.id;
    std::string text;
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) text += ' ';
      text += d.tokens[i];
    }
    rec["text"] = text;
    if (d.label) rec["label"] = classes.names.at(*d.label);
    out << rec.dump() << '\n';
  }
}

void save_dictionary(const BilingualDictionary& dict, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [src, targets] : dict.entries)
    for (const std::string& tgt : targets) out << src << '\t' << tgt << '\n';
}

}  // namespace clts
