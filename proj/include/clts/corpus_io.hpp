#pragma once

#include <string>

#include "clts/corpus.hpp"
#include "clts/tokenizer.hpp"

namespace clts {

enum class CorpusFormat { jsonl, tsv };
enum class CorpusKind { labeled, unlabeled };

// JSONL records: {"text": "...", "label": "<class name>"?, "id": "..."?}.
// TSV records:   label<TAB>text when labeled; one raw text line per document
// when unlabeled. A labeled load with a missing or unknown label fails with
// the offending line number. Unlabeled loads drop any labels present.
// Documents with no tokens after tokenization are kept but counted in a
// warning on stderr.
Corpus load_corpus(const std::string& path, CorpusFormat format, CorpusKind kind,
                   const ClassLabelSpace& classes, const TokenizerConfig& tok = {});

// Two-column "source target" lines, tab- or space-separated (MUSE layout).
// Both columns are normalized with the same rules the tokenizer applies.
// A line without exactly two columns fails with its line number.
BilingualDictionary load_dictionary(const std::string& path, const TokenizerConfig& tok = {});

void save_corpus_jsonl(const Corpus& corpus, const ClassLabelSpace& classes,
                       const std::string& path);
void save_dictionary(const BilingualDictionary& dict, const std::string& path);

}  // namespace clts
