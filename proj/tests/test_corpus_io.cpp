#include "doctest.h"

#include <algorithm>

#include "clts/corpus_io.hpp"
#include "clts/tokenizer.hpp"
#include "test_util.hpp"

using namespace clts;
using testutil::contains;
using testutil::thrown_message;
using testutil::write_file;

TEST_SUITE("corpus_io") {

TEST_CASE("tokenize lowercases and strips edge punctuation") {
  CHECK(tokenize("Wonderful movie!") == std::vector<std::string>{"wonderful", "movie"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("A a A") == std::vector<std::string>{"a", "a", "a"});
}

TEST_CASE("tokenize config toggles") {
  TokenizerConfig keep_case;
  keep_case.lowercase = false;
  CHECK(tokenize("Wonderful movie!", keep_case) ==
        std::vector<std::string>{"Wonderful", "movie"});

  TokenizerConfig keep_punct;
  keep_punct.strip_punct = false;
  CHECK(tokenize("Wonderful movie!", keep_punct) ==
        std::vector<std::string>{"wonderful", "movie!"});
}

TEST_CASE("tokenize handles unicode whitespace and drops punct-only tokens") {
  // U+00A0 no-break space and U+3000 ideographic space both separate tokens.
  CHECK(tokenize("bonjour\xc2\xa0le\xe3\x80\x80monde") ==
        std::vector<std::string>{"bonjour", "le", "monde"});
  CHECK(tokenize("well -- said ...") == std::vector<std::string>{"well", "said"});
  // Interior punctuation is preserved, only the edges are stripped.
  CHECK(tokenize("(l'avis)") == std::vector<std::string>{"l'avis"});
}

TEST_CASE("tokenize is a pure function of text and config") {
  const std::string text = "Some TEXT, with 'quotes' and trailing spaces   ";
  CHECK(tokenize(text) == tokenize(text));
}

TEST_CASE("jsonl labeled load maps labels through the class space") {
  ClassLabelSpace classes{{"neg", "pos"}};
  std::string path = write_file("labeled.jsonl", R"({"text":"good","label":"pos"})"
                                                 "\n");
  Corpus c = load_corpus(path, CorpusFormat::jsonl, CorpusKind::labeled, classes);
  REQUIRE(c.size() == 1);
  CHECK(c.docs[0].tokens == std::vector<std::string>{"good"});
  CHECK(c.docs[0].label == 1);
  CHECK(c.docs[0].id == "doc1");
}

TEST_CASE("jsonl load keeps explicit ids and line-number defaults") {
  ClassLabelSpace classes{{"neg", "pos"}};
  std::string path = write_file("ids.jsonl",
                                R"({"text":"a","label":"neg","id":"first"})"
                                "\n"
                                R"({"text":"b","label":"pos"})"
                                "\n");
  Corpus c = load_corpus(path, CorpusFormat::jsonl, CorpusKind::labeled, classes);
  REQUIRE(c.size() == 2);
  CHECK(c.docs[0].id == "first");
  CHECK(c.docs[1].id == "doc2");
}

TEST_CASE("unknown label errors name the label and the line") {
  ClassLabelSpace classes{{"neg", "pos"}};
  std::string path = write_file("bad_label.jsonl",
                                R"({"text":"a","label":"pos"})"
                                "\n"
                                R"({"text":"b","label":"meh"})"
                                "\n");
  std::string msg = thrown_message(
      [&] { load_corpus(path, CorpusFormat::jsonl, CorpusKind::labeled, classes); });
  CHECK(contains(msg, "meh"));
  CHECK(contains(msg, ":2"));
}

TEST_CASE("labeled load without a label is an error") {
  ClassLabelSpace classes{{"neg", "pos"}};
  std::string path = write_file("no_label.jsonl", R"({"text":"a"})"
                                                  "\n");
  std::string msg = thrown_message(
      [&] { load_corpus(path, CorpusFormat::jsonl, CorpusKind::labeled, classes); });
  CHECK(contains(msg, "label"));
  CHECK(contains(msg, ":1"));
}

TEST_CASE("unlabeled load drops labels that are present") {
  ClassLabelSpace classes{{"neg", "pos"}};
  std::string path = write_file("drop.jsonl", R"({"text":"a","label":"pos"})"
                                              "\n");
  Corpus c = load_corpus(path, CorpusFormat::jsonl, CorpusKind::unlabeled, classes);
  REQUIRE(c.size() == 1);
  CHECK_FALSE(c.docs[0].label.has_value());
}

TEST_CASE("tsv formats: label tab text when labeled, raw lines otherwise") {
  ClassLabelSpace classes{{"neg", "pos"}};
  std::string labeled = write_file("l.tsv", "pos\tGood stuff\nneg\tvery bad\n");
  Corpus lc = load_corpus(labeled, CorpusFormat::tsv, CorpusKind::labeled, classes);
  REQUIRE(lc.size() == 2);
  CHECK(lc.docs[0].label == 1);
  CHECK(lc.docs[0].tokens == std::vector<std::string>{"good", "stuff"});
  CHECK(lc.docs[1].label == 0);

  std::string unl = write_file("u.tsv", "just a line\n");
  Corpus uc = load_corpus(unl, CorpusFormat::tsv, CorpusKind::unlabeled, classes);
  REQUIRE(uc.size() == 1);
  CHECK(uc.docs[0].tokens == std::vector<std::string>{"just", "a", "line"});

  std::string bad = write_file("bad.tsv", "no tab here\n");
  CHECK(contains(
      thrown_message([&] { load_corpus(bad, CorpusFormat::tsv, CorpusKind::labeled, classes); }),
      ":1"));
}

TEST_CASE("missing corpus file is an error naming the path") {
  ClassLabelSpace classes{{"neg", "pos"}};
  CHECK(contains(thrown_message([&] {
          load_corpus("/nonexistent/corpus.jsonl", CorpusFormat::jsonl, CorpusKind::labeled,
                      classes);
        }),
        "/nonexistent/corpus.jsonl"));
}

TEST_CASE("documents that tokenize to nothing are kept") {
  ClassLabelSpace classes{{"neg", "pos"}};
  std::string path = write_file("empty_doc.jsonl", R"({"text":"...","label":"neg"})"
                                                   "\n");
  Corpus c = load_corpus(path, CorpusFormat::jsonl, CorpusKind::labeled, classes);
  REQUIRE(c.size() == 1);
  CHECK(c.docs[0].tokens.empty());
}

TEST_CASE("dictionary single pair") {
  std::string path = write_file("d1.txt", "wonderful magnifique\n");
  BilingualDictionary d = load_dictionary(path);
  REQUIRE(d.lookup("wonderful") != nullptr);
  CHECK(*d.lookup("wonderful") == std::vector<std::string>{"magnifique"});
  CHECK(d.lookup("unknown") == nullptr);
}

TEST_CASE("dictionary accumulates multiple translations per source") {
  std::string path = write_file("d2.txt", "shares comparte\nshares acciones\n");
  BilingualDictionary d = load_dictionary(path);
  REQUIRE(d.lookup("shares") != nullptr);
  CHECK(*d.lookup("shares") == std::vector<std::string>{"acciones", "comparte"});
}

TEST_CASE("empty dictionary file loads as an empty dictionary") {
  std::string path = write_file("d_empty.txt", "");
  CHECK(load_dictionary(path).size() == 0);
}

TEST_CASE("dictionary is insensitive to input line order") {
  std::string a = write_file("da.txt", "x u\ny v\nx w\n");
  std::string b = write_file("db.txt", "x w\nx u\ny v\n");
  CHECK(load_dictionary(a) == load_dictionary(b));
}

TEST_CASE("dictionary column-count violations carry the line number") {
  std::string path = write_file("d_bad.txt", "fine pair\none two three\n");
  std::string msg = thrown_message([&] { load_dictionary(path); });
  CHECK(contains(msg, ":2"));
  CHECK(contains(msg, "two columns"));
}

TEST_CASE("dictionary entries are normalized like corpus tokens") {
  std::string path = write_file("d_norm.txt", "Wonderful! magnifique,\n");
  BilingualDictionary d = load_dictionary(path);
  REQUIRE(d.lookup("wonderful") != nullptr);
  CHECK(*d.lookup("wonderful") == std::vector<std::string>{"magnifique"});
}

TEST_CASE("corpus jsonl round trip preserves tokens, labels, and ids") {
  ClassLabelSpace classes{{"neg", "pos"}};
  Corpus c;
  c.docs.push_back({"a1", {"tres", "bon"}, 1});
  c.docs.push_back({"a2", {"mauvais"}, 0});
  auto path = (testutil::scratch_dir() / "roundtrip.jsonl").string();
  save_corpus_jsonl(c, classes, path);
  Corpus back = load_corpus(path, CorpusFormat::jsonl, CorpusKind::labeled, classes);
  REQUIRE(back.size() == 2);
  CHECK(back.docs[0].id == "a1");
  CHECK(back.docs[0].tokens == c.docs[0].tokens);
  CHECK(back.docs[0].label == c.docs[0].label);
  CHECK(back.docs[1].label == c.docs[1].label);
}

TEST_CASE("dictionary round trip preserves the multimap") {
  BilingualDictionary d;
  d.add("x", "u");
  d.add("x", "w");
  d.add("y", "v");
  auto path = (testutil::scratch_dir() / "dict_roundtrip.tsv").string();
  save_dictionary(d, path);
  CHECK(load_dictionary(path) == d);
}

}  // TEST_SUITE
