#include "clts/corpus.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace clts {

bool Corpus::fully_labeled() const {
  return std::all_of(docs.begin(), docs.end(),
                     [](const Document& d) { return d.label.has_value(); });
}

std::vector<int> Corpus::labels() const {
  std::vector<int> y;
  y.reserve(docs.size());
  for (const Document& d : docs) {
    if (!d.label) throw std::runtime_error("corpus: document '" + d.id + "' has no label");
    y.push_back(*d.label);
  }
  return y;
}

std::optional<int> ClassLabelSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

void ClassLabelSpace::validate() const {
  if (names.size() < 2) throw std::invalid_argument("class space: need at least 2 classes");
  std::unordered_set<std::string> seen;
  for (const std::string& n : names) {
    if (n.empty()) throw std::invalid_argument("class space: empty class name");
    if (!seen.insert(n).second)
      throw std::invalid_argument("class space: duplicate class name '" + n + "'");
  }
}

void BilingualDictionary::add(const std::string& source, const std::string& target) {
  std::vector<std::string>& ts = entries[source];
  auto it = std::lower_bound(ts.begin(), ts.end(), target);
  if (it == ts.end() || *it != target) ts.insert(it, target);
}

const std::vector<std::string>* BilingualDictionary::lookup(const std::string& source) const {
  auto it = entries.find(source);
  return it == entries.end() ? nullptr : &it->second;
}

}  // namespace clts
