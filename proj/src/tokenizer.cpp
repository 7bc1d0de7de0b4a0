#include "clts/tokenizer.hpp"

#include <cstdint>

namespace clts {
namespace {

// Decodes one UTF-8 codepoint at i, advancing i. Invalid bytes are passed
// through one at a time so malformed input degrades instead of throwing.
uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char c = s[i];
  std::size_t len = 1;
  uint32_t cp = c;
  if (c >= 0xF0)
    len = 4, cp = c & 0x07;
  else if (c >= 0xE0)
    len = 3, cp = c & 0x0F;
  else if (c >= 0xC0)
    len = 2, cp = c & 0x1F;
  if (i + len > s.size()) len = 1, cp = c;
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char cc = s[i + k];
    if ((cc & 0xC0) != 0x80) {  // truncated sequence
      len = 1;
      cp = c;
      break;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += len;
  return cp;
}

void encode_utf8(uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space_cp(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_ascii_punct(uint32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

// Punctuation worth stripping from token edges: ASCII plus the common general
// punctuation, guillemets, and CJK marks. Emoji and letters pass through.
bool is_strip_punct_cp(uint32_t cp) {
  if (is_ascii_punct(cp)) return true;
  if (cp == 0xA1 || cp == 0xBF || cp == 0xAB || cp == 0xBB || cp == 0xB7) return true;
  if (cp >= 0x2010 && cp <= 0x2027) return true;  // dashes, quotes, daggers, bullets
  if (cp >= 0x2030 && cp <= 0x205E) return true;  // permille .. general punctuation
  switch (cp) {
    case 0x3001: case 0x3002: case 0x3008: case 0x3009: case 0x300A: case 0x300B:
    case 0x300C: case 0x300D: case 0x300E: case 0x300F: case 0x3010: case 0x3011:
    case 0xFF01: case 0xFF08: case 0xFF09: case 0xFF0C: case 0xFF0E: case 0xFF1A:
    case 0xFF1B: case 0xFF1F:
      return true;
    default:
      return false;
  }
}

std::string finish_token(const std::vector<uint32_t>& cps, const TokenizerConfig& config) {
  std::size_t lo = 0, hi = cps.size();
  if (config.strip_punct) {
    while (lo < hi && is_strip_punct_cp(cps[lo])) ++lo;
    while (hi > lo && is_strip_punct_cp(cps[hi - 1])) --hi;
  }
  std::string out;
  for (std::size_t i = lo; i < hi; ++i) {
    uint32_t cp = cps[i];
    if (config.lowercase && cp >= 'A' && cp <= 'Z') cp += 32;
    encode_utf8(cp, out);
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::vector<uint32_t> current;
  std::size_t i = 0;
  while (i < text.size()) {
    uint32_t cp = decode_utf8(text, i);
    if (is_space_cp(cp)) {
      if (!current.empty()) {
        std::string tok = finish_token(current, config);
        if (!tok.empty()) tokens.push_back(std::move(tok));
        current.clear();
      }
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) {
    std::string tok = finish_token(current, config);
    if (!tok.empty()) tokens.push_back(std::move(tok));
  }
  return tokens;
}

std::string normalize_token(std::string_view token, const TokenizerConfig& config) {
  std::vector<uint32_t> cps;
  std::size_t i = 0;
  while (i < token.size()) cps.push_back(decode_utf8(token, i));
  return finish_token(cps, config);
}

}  // namespace clts
