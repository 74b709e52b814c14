#include "rnlu/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rnlu/error.hpp"
#include "rnlu/text.hpp"

namespace rnlu {

size_t Corpus::utterance_count() const {
  size_t n = 0;
  for (const auto& ia : interactions) n += ia.utterances.size();
  return n;
}

namespace {

// Minimal XML reader for the fixed corpus element set. No namespaces, no
// external entities; attributes are parsed and ignored. Tracks line numbers
// for error reporting.
class XmlScanner {
 public:
  explicit XmlScanner(const std::string& text) : text_(text) {}

  struct Tag {
    std::string name;
    bool closing = false;
    bool self_closing = false;
  };

  // Consumes text up to the next tag and returns the tag. Returns false at
  // end of input. Character data seen on the way is appended to *cdata.
  bool next_tag(Tag& tag, std::string* cdata) {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c != '<') {
        if (c == '&') {
          append_entity(cdata);
        } else {
          if (c == '\n') ++line_;
          if (cdata) cdata->push_back(c);
          ++pos_;
        }
        continue;
      }
      if (starts_with("<!--")) {
        skip_comment();
        continue;
      }
      if (starts_with("<?")) {
        skip_until("?>");
        continue;
      }
      if (starts_with("<!")) {
        skip_doctype();
        continue;
      }
      read_tag(tag);
      return true;
    }
    return false;
  }

  int line() const { return line_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_); }

 private:
  bool starts_with(const char* s) const { return text_.compare(pos_, strlen_(s), s) == 0; }

  static size_t strlen_(const char* s) {
    size_t n = 0;
    while (s[n]) ++n;
    return n;
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_)
      if (text_[pos_] == '\n') ++line_;
  }

  void skip_until(const std::string& end) {
    size_t found = text_.find(end, pos_);
    if (found == std::string::npos) fail("unterminated '" + end + "' construct");
    advance(found + end.size() - pos_);
  }

  void skip_comment() {
    size_t found = text_.find("-->", pos_ + 4);
    if (found == std::string::npos) fail("unterminated comment");
    advance(found + 3 - pos_);
  }

  // <!DOCTYPE ...> possibly with an internal subset in brackets.
  void skip_doctype() {
    int depth = 0;
    size_t i = pos_;
    for (; i < text_.size(); ++i) {
      char c = text_[i];
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth <= 0) break;
    }
    if (i >= text_.size()) fail("unterminated '<!' declaration");
    advance(i + 1 - pos_);
  }

  void append_entity(std::string* cdata) {
    size_t semi = text_.find(';', pos_);
    if (semi == std::string::npos || semi - pos_ > 10) fail("unterminated entity reference");
    std::string name = text_.substr(pos_ + 1, semi - pos_ - 1);
    std::string repl;
    if (name == "amp") repl = "&";
    else if (name == "lt") repl = "<";
    else if (name == "gt") repl = ">";
    else if (name == "quot") repl = "\"";
    else if (name == "apos") repl = "'";
    else if (!name.empty() && name[0] == '#') repl = decode_char_ref(name);
    else fail("unknown entity '&" + name + ";'");
    if (cdata) *cdata += repl;
    pos_ = semi + 1;
  }

  std::string decode_char_ref(const std::string& name) {
    uint32_t cp = 0;
    bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
    size_t start = hex ? 2 : 1;
    if (start >= name.size()) fail("empty character reference");
    for (size_t i = start; i < name.size(); ++i) {
      char c = name[i];
      int digit;
      if (c >= '0' && c <= '9') digit = c - '0';
      else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
      else { fail("bad character reference '&" + name + ";'"); }
      cp = cp * (hex ? 16 : 10) + static_cast<uint32_t>(digit);
      if (cp > 0x10FFFF) fail("character reference out of range");
    }
    // Re-encode as UTF-8.
    std::string out;
    if (cp < 0x80) out.push_back(static_cast<char>(cp));
    else if (cp < 0x800) {
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
    return out;
  }

  static bool name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool name_char(char c) {
    return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
  }

  void read_tag(Tag& tag) {
    tag = Tag{};
    ++pos_;  // consume '<'
    if (pos_ < text_.size() && text_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !name_start(text_[pos_])) fail("malformed tag");
    size_t start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    tag.name = text_.substr(start, pos_ - start);
    // Skip attributes up to '>' while respecting quoted values.
    char quote = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') ++line_;
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '/' && !tag.closing) {
        tag.self_closing = true;
      } else if (c == '>') {
        ++pos_;
        return;
      } else if (c == '<') {
        fail("'<' inside tag");
      }
      ++pos_;
    }
    fail("unterminated tag '<" + tag.name + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
};

[[noreturn]] void unknown_element(XmlScanner& xml, const std::string& name,
                                  const std::string& context) {
  throw ValidationError("line " + std::to_string(xml.line()) + ": unknown element <" + name +
                        "> inside <" + context + ">");
}

void require_no_text(XmlScanner& xml, const std::string& cdata, const std::string& context) {
  if (cdata.find_first_not_of(" \t\r\n") != std::string::npos)
    throw ValidationError("line " + std::to_string(xml.line()) + ": stray text inside <" +
                          context + ">");
}

// Reads the children of <utterances>/<answers>: a run of <u>/<a> leaf
// elements until the matching close tag.
std::vector<std::string> parse_leaf_list(XmlScanner& xml, const std::string& parent,
                                         const std::string& leaf) {
  std::vector<std::string> items;
  for (;;) {
    XmlScanner::Tag tag;
    std::string cdata;
    if (!xml.next_tag(tag, &cdata)) xml.fail("unexpected end of file inside <" + parent + ">");
    require_no_text(xml, cdata, parent);
    if (tag.closing) {
      if (tag.name != parent) xml.fail("mismatched </" + tag.name + ">");
      return items;
    }
    if (tag.name != leaf) unknown_element(xml, tag.name, parent);
    if (tag.self_closing) {
      items.emplace_back();
      continue;
    }
    std::string text;
    XmlScanner::Tag end;
    if (!xml.next_tag(end, &text)) xml.fail("unexpected end of file inside <" + leaf + ">");
    if (!end.closing) unknown_element(xml, end.name, leaf);
    if (end.name != leaf) xml.fail("mismatched </" + end.name + ">");
    items.push_back(normalize_whitespace(text));
  }
}

Interaction parse_interaction(XmlScanner& xml, size_t index) {
  Interaction ia;
  bool saw_utterances = false, saw_answers = false;
  for (;;) {
    XmlScanner::Tag tag;
    std::string cdata;
    if (!xml.next_tag(tag, &cdata)) xml.fail("unexpected end of file inside <interaction>");
    require_no_text(xml, cdata, "interaction");
    if (tag.closing) {
      if (tag.name != "interaction") xml.fail("mismatched </" + tag.name + ">");
      break;
    }
    if (tag.name == "utterances" && !tag.self_closing) {
      if (saw_utterances)
        throw ValidationError("interaction " + std::to_string(index) +
                              ": duplicate <utterances>");
      ia.utterances = parse_leaf_list(xml, "utterances", "u");
      saw_utterances = true;
    } else if (tag.name == "answers" && !tag.self_closing) {
      if (saw_answers)
        throw ValidationError("interaction " + std::to_string(index) + ": duplicate <answers>");
      ia.answers = parse_leaf_list(xml, "answers", "a");
      saw_answers = true;
    } else if (tag.name == "utterances" || tag.name == "answers") {
      // self-closing <utterances/> is an empty list; report below
      if (tag.name == "utterances") saw_utterances = true;
      else saw_answers = true;
    } else {
      unknown_element(xml, tag.name, "interaction");
    }
  }
  if (!saw_utterances || ia.utterances.empty())
    throw ValidationError("interaction " + std::to_string(index) +
                          ": <utterances> must contain at least one <u>");
  if (!saw_answers || ia.answers.empty())
    throw ValidationError("interaction " + std::to_string(index) +
                          ": <answers> must contain at least one <a>");
  for (const std::string& u : ia.utterances)
    if (u.empty())
      throw ValidationError("interaction " + std::to_string(index) + ": empty utterance");
  return ia;
}

void escape_xml(const std::string& text, std::string& out) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> parts;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) parts.push_back(tok);
  return parts;
}

}  // namespace

Corpus parse_corpus(const std::string& xml_text) {
  XmlScanner xml(xml_text);
  XmlScanner::Tag tag;
  std::string cdata;
  if (!xml.next_tag(tag, &cdata)) xml.fail("no root element");
  require_no_text(xml, cdata, "document");
  if (tag.closing || tag.name != "corpus")
    throw ValidationError("root element must be <corpus>, found <" + tag.name + ">");
  if (tag.self_closing) throw ValidationError("corpus must contain at least one interaction");

  Corpus corpus;
  for (;;) {
    if (!xml.next_tag(tag, &cdata)) xml.fail("unexpected end of file inside <corpus>");
    require_no_text(xml, cdata, "corpus");
    if (tag.closing) {
      if (tag.name != "corpus") xml.fail("mismatched </" + tag.name + ">");
      break;
    }
    if (tag.name != "interaction") unknown_element(xml, tag.name, "corpus");
    if (tag.self_closing)
      throw ValidationError("interaction " + std::to_string(corpus.interactions.size()) +
                            ": <utterances> must contain at least one <u>");
    corpus.interactions.push_back(parse_interaction(xml, corpus.interactions.size()));
  }
  // Trailing content after the root close tag.
  cdata.clear();
  if (xml.next_tag(tag, &cdata)) xml.fail("content after </corpus>");
  require_no_text(xml, cdata, "document");
  if (corpus.interactions.empty())
    throw ValidationError("corpus must contain at least one interaction");
  return corpus;
}

std::string corpus_to_xml(const Corpus& corpus) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<corpus>\n";
  for (const Interaction& ia : corpus.interactions) {
    out += "  <interaction>\n    <utterances>\n";
    for (const std::string& u : ia.utterances) {
      out += "      <u>";
      escape_xml(u, out);
      out += "</u>\n";
    }
    out += "    </utterances>\n    <answers>\n";
    for (const std::string& a : ia.answers) {
      out += "      <a>";
      escape_xml(a, out);
      out += "</a>\n";
    }
    out += "    </answers>\n  </interaction>\n";
  }
  out += "</corpus>\n";
  return out;
}

std::vector<GazetteerEntry> parse_dictionary(const std::string& text) {
  std::vector<GazetteerEntry> entries;
  std::set<std::string> seen;  // tag + folded surface
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> parts = split_ws(line);
    if (parts.size() < 2)
      throw ParseError("dictionary entry needs a tag and at least one term", line_no);
    GazetteerEntry entry;
    entry.tag = upper_case(parts[0]);
    entry.surface.assign(parts.begin() + 1, parts.end());
    std::string key = entry.tag;
    for (const std::string& term : entry.surface) key += "\x1f" + fold_case(term);
    if (seen.insert(key).second) entries.push_back(std::move(entry));
  }
  return entries;
}

CategoryId category_for_index(const std::string& prefix, size_t index) {
  return prefix + "_" + std::to_string(index);
}

namespace {

AnswerTable parse_answers_impl(const std::string& text, const std::set<std::string>& valid) {
  AnswerTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    size_t sep = line.find_first_of(" \t", first);
    if (sep == std::string::npos)
      throw ParseError("answer line has a category but no answer text", line_no);
    std::string category = line.substr(first, sep - first);
    std::string answer = normalize_whitespace(line.substr(sep));
    if (answer.empty())
      throw ParseError("answer line has a category but no answer text", line_no);
    if (!valid.count(category))
      throw ValidationError("line " + std::to_string(line_no) + ": category '" + category +
                            "' does not exist in the corpus");
    table.rows[category].push_back(std::move(answer));
  }
  return table;
}

}  // namespace

AnswerTable parse_answers(const std::string& text, const Corpus& corpus,
                          const std::string& prefix) {
  std::set<std::string> valid;
  for (size_t i = 0; i < corpus.interactions.size(); ++i)
    valid.insert(category_for_index(prefix, i));
  return parse_answers_impl(text, valid);
}

AnswerTable parse_answers_for(const std::string& text,
                              const std::vector<CategoryId>& valid_categories) {
  return parse_answers_impl(text, {valid_categories.begin(), valid_categories.end()});
}

std::vector<std::pair<std::string, CategoryId>> assign_categories(const Corpus& corpus,
                                                                  const std::string& prefix) {
  std::vector<std::pair<std::string, CategoryId>> labeled;
  labeled.reserve(corpus.utterance_count());
  for (size_t i = 0; i < corpus.interactions.size(); ++i) {
    CategoryId category = category_for_index(prefix, i);
    for (const std::string& u : corpus.interactions[i].utterances)
      labeled.emplace_back(u, category);
  }
  return labeled;
}

}  // namespace rnlu
