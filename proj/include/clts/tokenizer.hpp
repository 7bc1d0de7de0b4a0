#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace clts {

struct TokenizerConfig {
  bool lowercase = true;    // ASCII case folding only
  bool strip_punct = true;  // strip leading/trailing punctuation per token
  bool operator==(const TokenizerConfig&) const = default;
};

// Splits on unicode whitespace, then normalizes each token. Tokens that
// normalize away (pure punctuation) are dropped. Pure function of its inputs.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

// Same normalization tokenize() applies to a single token; returns "" when the
// token normalizes away. Dictionary keys and values go through this so corpus
// tokens and dictionary entries compare consistently.
std::string normalize_token(std::string_view token, const TokenizerConfig& config = {});

}  // namespace clts
