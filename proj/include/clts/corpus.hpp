#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clts {

struct Document {
  std::string id;
  std::vector<std::string> tokens;  // may be empty (legal, but loaders flag it)
  std::optional<int> label;
};

struct Corpus {
  std::vector<Document> docs;

  std::size_t size() const { return docs.size(); }
  bool empty() const { return docs.empty(); }
  bool fully_labeled() const;
  std::vector<int> labels() const;  // throws if any document lacks a label
};

struct ClassLabelSpace {
  std::vector<std::string> names;

  int num_classes() const { return static_cast<int>(names.size()); }
  std::optional<int> index_of(const std::string& name) const;
  void validate() const;  // at least 2 classes, names unique and non-empty
  bool operator==(const ClassLabelSpace&) const = default;
};

// Source -> target translations. Target lists stay sorted and deduplicated,
// which makes the structure insensitive to input line order.
struct BilingualDictionary {
  std::map<std::string, std::vector<std::string>> entries;

  void add(const std::string& source, const std::string& target);
  // nullptr when the source term has no entry.
  const std::vector<std::string>* lookup(const std::string& source) const;
  std::size_t size() const { return entries.size(); }
  bool operator==(const BilingualDictionary&) const = default;
};

}  // namespace clts
