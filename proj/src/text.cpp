#include "rnlu/text.hpp"

namespace rnlu {

namespace {

// Decodes one UTF-8 code point starting at text[i]. Invalid sequences decode
// as U+FFFD one byte at a time so the scan always makes progress.
uint32_t decode_cp(const std::string& text, size_t& i) {
  const auto byte = [&](size_t k) { return static_cast<unsigned char>(text[k]); };
  unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  auto cont = [&](size_t k) { return k < text.size() && (byte(k) & 0xC0) == 0x80; };
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    uint32_t cp = (uint32_t(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
    i += 2;
    return cp < 0x80 ? 0xFFFD : cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    uint32_t cp = (uint32_t(b0 & 0x0F) << 12) | (uint32_t(byte(i + 1) & 0x3F) << 6) |
                  (byte(i + 2) & 0x3F);
    i += 3;
    return cp < 0x800 ? 0xFFFD : cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    uint32_t cp = (uint32_t(b0 & 0x07) << 18) | (uint32_t(byte(i + 1) & 0x3F) << 12) |
                  (uint32_t(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
    i += 4;
    return cp < 0x10000 || cp > 0x10FFFF ? 0xFFFD : cp;
  }
  i += 1;
  return 0xFFFD;
}

void encode_cp(uint32_t cp, std::string& out) {
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

// Latin-1 letters: ordinal indicators, micro sign, and the accented block
// minus the multiplication/division signs.
bool is_letter(uint32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0xFF) return cp != 0xD7 && cp != 0xF7;
  return cp >= 0x100 && cp != 0xFFFD;
}

bool is_digit(uint32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_word_cp(uint32_t cp) { return is_letter(cp) || is_digit(cp); }

bool is_upper_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return true;
  return cp >= 0xC0 && cp <= 0xDE && cp != 0xD7;
}

bool is_lower_cp(uint32_t cp) {
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  return cp >= 0xDF && cp <= 0xFF && cp != 0xF7;
}

uint32_t lower_cp(uint32_t cp) { return is_upper_cp(cp) ? cp + 0x20 : cp; }

uint32_t upper_cp(uint32_t cp) {
  if (cp >= 'a' && cp <= 'z') return cp - 0x20;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 0x20;
  return cp;
}

std::vector<uint32_t> decode(const std::string& text) {
  std::vector<uint32_t> cps;
  cps.reserve(text.size());
  for (size_t i = 0; i < text.size();) cps.push_back(decode_cp(text, i));
  return cps;
}

}  // namespace

std::vector<std::string> tokenize_preserving(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (uint32_t cp : decode(text)) {
    if (is_word_cp(cp)) {
      encode_cp(cp, current);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string normalize_token(const std::string& token) {
  std::vector<uint32_t> cps = decode(token);
  bool has_letter = false, has_upper = false, has_lower = false;
  for (uint32_t cp : cps) {
    has_letter = has_letter || is_letter(cp);
    has_upper = has_upper || is_upper_cp(cp);
    has_lower = has_lower || is_lower_cp(cp);
  }
  if (cps.size() >= 2 && has_letter && has_upper && !has_lower) return token;
  std::string out;
  out.reserve(token.size());
  for (uint32_t cp : cps) encode_cp(lower_cp(cp), out);
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens = tokenize_preserving(text);
  for (std::string& t : tokens) t = normalize_token(t);
  return tokens;
}

std::string fold_case(const std::string& token) {
  std::string out;
  out.reserve(token.size());
  for (uint32_t cp : decode(token)) encode_cp(lower_cp(cp), out);
  return out;
}

std::string upper_case(const std::string& token) {
  std::string out;
  out.reserve(token.size());
  for (uint32_t cp : decode(token)) encode_cp(upper_cp(cp), out);
  return out;
}

std::string normalize_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace rnlu
