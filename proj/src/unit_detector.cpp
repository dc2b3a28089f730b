// Copyright 2026 The stopgen Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stopgen/unit_detector.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <unordered_set>

namespace stopgen {
namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }
bool is_space(char c) { return is_blank(c) || c == '\n'; }

std::string_view trim_left(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_blank(s[i])) ++i;
  return s.substr(i);
}

std::string_view trim(std::string_view s) {
  s = trim_left(s);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// A line that is, or may still grow into, a markdown fence.
bool is_fence_line(std::string_view line, bool terminated) {
  std::string_view content = trim_left(line);
  while (!content.empty() && is_space(content.back())) content.remove_suffix(1);
  if (content.starts_with("```")) return true;
  if (terminated) return false;
  // Unterminated: whitespace-only or a run of fewer than three backticks.
  return std::all_of(content.begin(), content.end(), [](char c) { return c == '`'; });
}

struct Line {
  std::size_t begin;
  std::size_t content_end;  // excludes '\n'
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back({pos, text.size()});
      break;
    }
    lines.push_back({pos, nl});
    pos = nl + 1;
  }
  return lines;
}

// ---------------------------------------------------------------------------
// Python

// Tracks brackets, strings, comments and backslash joins so that line starts
// inside a logical line are not mistaken for dedents.
class PyScanner {
 public:
  explicit PyScanner(std::string_view text) : t_(text) {}

  // Consumes the lexical element starting at i; returns the next position.
  std::size_t advance(std::size_t i) {
    const char c = t_[i];
    if (in_comment_) {
      if (c == '\n') {
        in_comment_ = false;
        joined_ = false;
      }
      return i + 1;
    }
    if (quote_ != 0) {
      if (c == '\\') return std::min(i + 2, t_.size());
      if (triple_) {
        if (is_triple_at(i, quote_)) {
          quote_ = 0;
          return i + 3;
        }
        return i + 1;
      }
      if (c == quote_ || c == '\n') quote_ = 0;
      return i + 1;
    }
    switch (c) {
      case '#':
        in_comment_ = true;
        break;
      case '\'':
      case '"':
        quote_ = c;
        if (is_triple_at(i, c)) {
          triple_ = true;
          return i + 3;
        }
        triple_ = false;
        break;
      case '(':
      case '[':
      case '{':
        ++depth_;
        break;
      case ')':
      case ']':
      case '}':
        if (depth_ > 0) --depth_;
        break;
      case '\\':
        if (i + 1 < t_.size() && t_[i + 1] == '\n') {
          joined_ = true;
          return i + 2;
        }
        break;
      case '\n':
        joined_ = false;
        break;
      default:
        break;
    }
    return i + 1;
  }

  // True at a line start that begins a new logical line.
  bool at_logical_line_start() const { return depth_ == 0 && quote_ == 0 && !joined_; }
  void clear_join() { joined_ = false; }

  int depth() const { return depth_; }
  bool in_string() const { return quote_ != 0; }
  bool in_comment() const { return in_comment_; }

 private:
  bool is_triple_at(std::size_t i, char q) const {
    return i + 2 < t_.size() && t_[i] == q && t_[i + 1] == q && t_[i + 2] == q;
  }

  std::string_view t_;
  int depth_ = 0;
  char quote_ = 0;
  bool triple_ = false;
  bool in_comment_ = false;
  bool joined_ = false;
};

enum class ScanStatus { kComplete, kIncomplete, kInvalid };

struct SignatureScan {
  ScanStatus status = ScanStatus::kInvalid;
  std::size_t colon = 0;
};

// From the '(' of `def name(` to the colon that opens the body.
SignatureScan scan_python_signature(std::string_view t, std::size_t open_paren) {
  PyScanner sc(t);
  std::size_t i = sc.advance(open_paren);
  while (i < t.size() && (sc.depth() > 0 || sc.in_string() || sc.in_comment())) {
    i = sc.advance(i);
  }
  if (sc.depth() > 0 || sc.in_string()) return {ScanStatus::kIncomplete, 0};
  while (i < t.size() && is_blank(t[i])) ++i;
  if (i >= t.size()) return {ScanStatus::kIncomplete, 0};
  if (t[i] == ':') return {ScanStatus::kComplete, i};
  if (t[i] != '-') return {ScanStatus::kInvalid, 0};
  if (i + 1 >= t.size()) return {ScanStatus::kIncomplete, 0};
  if (t[i + 1] != '>') return {ScanStatus::kInvalid, 0};
  i += 2;
  while (i < t.size()) {
    const bool bare = sc.depth() == 0 && !sc.in_string() && !sc.in_comment();
    if (bare && t[i] == ':') return {ScanStatus::kComplete, i};
    if (bare && t[i] == '\n') return {ScanStatus::kInvalid, 0};
    i = sc.advance(i);
  }
  return {ScanStatus::kIncomplete, 0};
}

struct BodyScan {
  bool terminated = false;
  std::size_t terminator = 0;  // start of the dedented line
  std::size_t last_significant_end = 0;
};

BodyScan scan_python_body(std::string_view t, std::size_t colon) {
  PyScanner sc(t);
  BodyScan out;
  out.last_significant_end = colon + 1;
  std::size_t i = colon + 1;
  bool significant = true;  // the rest of the signature line
  while (i < t.size()) {
    const bool line_start = t[i - 1] == '\n';
    if (line_start) {
      significant = true;
      if (sc.at_logical_line_start()) {
        std::size_t end = t.find('\n', i);
        if (end == std::string_view::npos) end = t.size();
        std::string_view content = t.substr(i, end - i);
        std::string_view stripped = trim_left(content);
        bool only_space = std::all_of(stripped.begin(), stripped.end(), is_space);
        if (only_space || stripped.front() == '#') {
          significant = false;
        } else if (!is_blank(content.front())) {
          out.terminated = true;
          out.terminator = i;
          return out;
        }
      }
      sc.clear_join();
    }
    std::size_t next = sc.advance(i);
    if (significant) {
      for (std::size_t k = i; k < next; ++k) {
        if (!is_space(t[k])) out.last_significant_end = k + 1;
      }
    }
    i = next;
  }
  return out;
}

const std::regex& python_def_regex() {
  static const std::regex re(R"(^(?:async[ \t]+)?def[ \t]+([A-Za-z_][A-Za-z0-9_]*)[ \t]*\()");
  return re;
}

CheckingUnit make_unit(Language lang, std::string_view text, Span span, std::string name,
                       std::size_t signature_end) {
  CheckingUnit u;
  u.language = lang;
  u.span = span;
  u.name = std::move(name);
  u.canonical_text = std::string(text.substr(span.begin, span.size()));
  std::size_t sig_len = std::min(signature_end, span.end) - span.begin;
  u.signature_text = u.canonical_text.substr(0, sig_len);
  u.body_text = u.canonical_text.substr(sig_len);
  return u;
}

void detect_python(std::string_view t, Detection& out) {
  const std::vector<Line> lines = split_lines(t);
  std::size_t floor = 0;  // decorators may not reach into the previous unit
  std::size_t li = 0;
  while (li < lines.size()) {
    const Line& line = lines[li];
    std::match_results<std::string_view::const_iterator> m;
    std::string_view content = t.substr(line.begin, line.content_end - line.begin);
    if (!std::regex_search(content.begin(), content.end(), m, python_def_regex())) {
      ++li;
      continue;
    }
    std::size_t start = line.begin;
    for (std::size_t k = li; k-- > 0;) {
      if (lines[k].begin < floor || lines[k].begin == lines[k].content_end ||
          t[lines[k].begin] != '@') {
        break;
      }
      start = lines[k].begin;
    }
    const std::size_t open_paren = line.begin + static_cast<std::size_t>(m.length(0)) - 1;
    SignatureScan sig = scan_python_signature(t, open_paren);
    if (sig.status == ScanStatus::kIncomplete) {
      out.in_progress = OpenUnitMarker{start, false};
      return;
    }
    if (sig.status == ScanStatus::kInvalid) {
      ++li;
      continue;
    }
    BodyScan body = scan_python_body(t, sig.colon);
    CheckingUnit unit = make_unit(Language::kPython, t, {start, body.last_significant_end},
                                  m[1].str(), sig.colon + 1);
    if (!body.terminated) {
      out.in_progress = OpenUnitMarker{start, true};
      unit.open = true;
      out.trailing = std::move(unit);
      return;
    }
    out.complete.push_back(std::move(unit));
    floor = body.terminator;
    while (li < lines.size() && lines[li].begin < body.terminator) ++li;
  }
}

// ---------------------------------------------------------------------------
// Java

struct JToken {
  enum Kind { kIdent, kPunct, kLiteral, kNumber } kind;
  std::size_t begin;
  std::size_t end;
  bool first_on_line;
};

struct JLex {
  std::vector<JToken> tokens;
  bool truncated = false;  // text ends inside a comment or text block
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

JLex lex_java(std::string_view t) {
  JLex out;
  std::size_t i = 0;
  bool line_fresh = true;
  while (i < t.size()) {
    const char c = t[i];
    if (c == '\n') {
      line_fresh = true;
      ++i;
      continue;
    }
    if (is_blank(c)) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < t.size() && t[i + 1] == '/') {
      while (i < t.size() && t[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < t.size() && t[i + 1] == '*') {
      std::size_t close = t.find("*/", i + 2);
      if (close == std::string_view::npos) {
        out.truncated = true;
        return out;
      }
      for (std::size_t k = i; k < close; ++k) {
        if (t[k] == '\n') line_fresh = true;
      }
      i = close + 2;
      continue;
    }
    JToken tok{JToken::kPunct, i, i + 1, line_fresh};
    line_fresh = false;
    if (t.substr(i, 3) == "\"\"\"") {
      std::size_t close = t.find("\"\"\"", i + 3);
      if (close == std::string_view::npos) {
        out.truncated = true;
        return out;
      }
      tok.kind = JToken::kLiteral;
      tok.end = close + 3;
    } else if (c == '"' || c == '\'') {
      // Literals cannot span lines; an unterminated one ends at the newline.
      std::size_t k = i + 1;
      while (k < t.size() && t[k] != c && t[k] != '\n') {
        if (t[k] == '\\' && k + 1 < t.size() && t[k + 1] != '\n') ++k;
        ++k;
      }
      tok.kind = JToken::kLiteral;
      tok.end = (k < t.size() && t[k] == c) ? k + 1 : k;
    } else if (is_ident_start(c)) {
      std::size_t k = i + 1;
      while (k < t.size() && is_ident_char(t[k])) ++k;
      tok.kind = JToken::kIdent;
      tok.end = k;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t k = i + 1;
      while (k < t.size() && (is_ident_char(t[k]) || t[k] == '.')) ++k;
      tok.kind = JToken::kNumber;
      tok.end = k;
    }
    out.tokens.push_back(tok);
    i = tok.end;
  }
  return out;
}

const std::unordered_set<std::string_view>& java_keywords() {
  static const std::unordered_set<std::string_view> kw = {
      "abstract", "assert",     "boolean",   "break",     "byte",       "case",
      "catch",    "char",       "class",     "const",     "continue",   "default",
      "do",       "double",     "else",      "enum",      "extends",    "final",
      "finally",  "float",      "for",       "goto",      "if",         "implements",
      "import",   "instanceof", "int",       "interface", "long",       "native",
      "new",      "package",    "private",   "protected", "public",     "return",
      "short",    "static",     "strictfp",  "super",     "switch",     "synchronized",
      "this",     "throw",      "throws",    "transient", "try",        "void",
      "volatile", "while",      "true",      "false",     "null",       "record"};
  return kw;
}

bool is_java_modifier(std::string_view s) {
  static const std::array<std::string_view, 12> mods = {
      "public",       "private", "protected", "static",   "final",     "abstract",
      "synchronized", "native",  "strictfp",  "default",  "transient", "volatile"};
  return std::find(mods.begin(), mods.end(), s) != mods.end();
}

bool is_java_primitive(std::string_view s) {
  static const std::array<std::string_view, 9> prims = {
      "boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};
  return std::find(prims.begin(), prims.end(), s) != prims.end();
}

enum class HeaderStatus { kMatched, kNoMatch, kTruncated };

struct JavaHeader {
  HeaderStatus status = HeaderStatus::kNoMatch;
  std::size_t first = 0;        // first token of the unit (after annotations)
  std::size_t type_params = 0;  // token index of '<' or npos
  std::size_t type_begin = 0;
  std::size_t name = 0;
  std::size_t open_paren = 0;
  std::size_t close_paren = 0;
  std::size_t open_brace = 0;
};

class JavaHeaderParser {
 public:
  JavaHeaderParser(std::string_view text, const std::vector<JToken>& toks)
      : t_(text), toks_(toks) {}

  JavaHeader parse(std::size_t i) const {
    JavaHeader h;
    h.type_params = std::string_view::npos;
    std::size_t j = i;
    bool truncated = false;
    // Annotations are left out of the unit: the harness class has no
    // supertype, so @Override and friends would not compile there.
    while (is(j, "@") && ident(j + 1)) {
      j += 2;
      while (is(j, ".") && ident(j + 1)) j += 2;
      if (is(j, "(")) {
        j = skip_balanced(j, "(", ")", truncated);
        if (truncated) return h;
      }
    }
    h.first = j;
    while (j < toks_.size() && is_java_modifier(text(j))) ++j;
    if (is(j, "<")) {
      h.type_params = j;
      j = skip_balanced(j, "<", ">", truncated);
      if (truncated) return h;
    }
    h.type_begin = j;
    if (j >= toks_.size()) return h;
    if (toks_[j].kind == JToken::kIdent && is_java_primitive(text(j))) {
      ++j;
    } else if (ident(j)) {
      ++j;
      while (is(j, ".") && ident(j + 1)) j += 2;
      if (is(j, "<")) {
        j = skip_balanced(j, "<", ">", truncated);
        if (truncated) return h;
      }
    } else {
      return h;
    }
    while (is(j, "[") && is(j + 1, "]")) j += 2;
    if (!ident(j)) return h;
    h.name = j++;
    if (j >= toks_.size()) return h;
    if (!is(j, "(")) return h;
    h.open_paren = j;
    j = skip_balanced(j, "(", ")", truncated);
    if (truncated) {
      h.status = HeaderStatus::kTruncated;
      return h;
    }
    h.close_paren = j - 1;
    while (is(j, "[") && is(j + 1, "]")) j += 2;
    if (is(j, "throws")) {
      ++j;
      for (;;) {
        if (!ident(j)) {
          if (j >= toks_.size()) h.status = HeaderStatus::kTruncated;
          return h;
        }
        ++j;
        while (is(j, ".") && ident(j + 1)) j += 2;
        if (is(j, "<")) {
          j = skip_balanced(j, "<", ">", truncated);
          if (truncated) {
            h.status = HeaderStatus::kTruncated;
            return h;
          }
        }
        if (!is(j, ",")) break;
        ++j;
      }
    }
    if (j >= toks_.size()) {
      h.status = HeaderStatus::kTruncated;
      return h;
    }
    if (!is(j, "{")) return h;
    h.open_brace = j;
    h.status = HeaderStatus::kMatched;
    return h;
  }

  std::string_view text(std::size_t j) const {
    return t_.substr(toks_[j].begin, toks_[j].end - toks_[j].begin);
  }

 private:
  bool is(std::size_t j, std::string_view s) const { return j < toks_.size() && text(j) == s; }
  bool ident(std::size_t j) const {
    return j < toks_.size() && toks_[j].kind == JToken::kIdent &&
           !java_keywords().contains(text(j));
  }

  // Returns the index after the matching close token.
  std::size_t skip_balanced(std::size_t j, std::string_view open, std::string_view close,
                            bool& truncated) const {
    int depth = 0;
    for (; j < toks_.size(); ++j) {
      if (text(j) == open) ++depth;
      if (text(j) == close && --depth == 0) return j + 1;
      // Generic argument lists never contain these; bail out early on prose.
      if (open == "<" && (text(j) == "{" || text(j) == ";" || text(j) == "(")) return j;
    }
    truncated = true;
    return j;
  }

  std::string_view t_;
  const std::vector<JToken>& toks_;
};

void detect_java(std::string_view t, Detection& out) {
  const JLex lex = lex_java(t);
  const auto& toks = lex.tokens;
  JavaHeaderParser parser(t, toks);
  std::size_t i = 0;
  while (i < toks.size()) {
    const bool boundary = i == 0 || toks[i].first_on_line || parser.text(i - 1) == ";" ||
                          parser.text(i - 1) == "{" || parser.text(i - 1) == "}";
    if (!boundary) {
      ++i;
      continue;
    }
    JavaHeader h = parser.parse(i);
    if (h.status == HeaderStatus::kTruncated) {
      out.in_progress = OpenUnitMarker{toks[h.first].begin, false};
      return;
    }
    if (h.status == HeaderStatus::kNoMatch) {
      ++i;
      continue;
    }
    int depth = 0;
    std::size_t j = h.open_brace;
    for (; j < toks.size(); ++j) {
      if (parser.text(j) == "{") ++depth;
      if (parser.text(j) == "}" && --depth == 0) break;
    }
    const std::size_t begin = toks[h.first].begin;
    if (j >= toks.size()) {
      out.in_progress = OpenUnitMarker{begin, true};
      return;
    }
    std::size_t sig_end = toks[h.open_brace].begin;
    while (sig_end > begin && is_space(t[sig_end - 1])) --sig_end;
    out.complete.push_back(make_unit(Language::kJava, t, {begin, toks[j].end},
                                     std::string(parser.text(h.name)), sig_end));
    i = j + 1;
  }
  (void)lex.truncated;
}

}  // namespace

// ---------------------------------------------------------------------------

FencelessText::FencelessText(std::string_view raw) {
  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    const bool terminated = nl != std::string_view::npos;
    const std::size_t end = terminated ? nl + 1 : raw.size();
    std::string_view line = raw.substr(pos, end - pos);
    if (!is_fence_line(line, terminated)) {
      if (!segments_.empty() && segments_.back().raw_begin + segments_.back().length == pos) {
        segments_.back().length += line.size();
      } else {
        segments_.push_back({text_.size(), pos, line.size()});
      }
      text_.append(line);
    }
    pos = end;
  }
}

std::size_t FencelessText::to_raw(std::size_t offset) const {
  if (segments_.empty()) return 0;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), offset,
                             [](std::size_t off, const Segment& s) { return off < s.stripped_begin; });
  if (it != segments_.begin()) --it;
  if (offset >= it->stripped_begin + it->length) return it->raw_begin + it->length;
  return it->raw_begin + (offset - it->stripped_begin);
}

Detection detect_complete_units(std::string_view text, Language lang) {
  Detection out;
  out.source = FencelessText(text);
  const std::string& t = out.source.text();
  if (lang == Language::kPython) {
    detect_python(t, out);
  } else {
    detect_java(t, out);
  }
  const auto statements = find_preamble_statements(t, lang);
  auto attach = [&](CheckingUnit& u) {
    for (const auto& s : statements) {
      if (s.offset < u.span.begin) u.preamble_refs.push_back(s.offset);
    }
  };
  for (auto& u : out.complete) attach(u);
  if (out.trailing) attach(*out.trailing);
  return out;
}

std::vector<CheckingUnit> candidate_units(const Detection& detection) {
  std::vector<CheckingUnit> units = detection.complete;
  if (detection.trailing) units.push_back(*detection.trailing);
  return units;
}

std::vector<PreambleStatement> find_preamble_statements(std::string_view t, Language lang) {
  std::vector<PreambleStatement> out;
  const std::vector<Line> lines = split_lines(t);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const Line& line = lines[li];
    std::string_view content = t.substr(line.begin, line.content_end - line.begin);
    const bool terminated = line.content_end < t.size();
    if (lang == Language::kPython) {
      // Column zero only: indented imports belong to a function body.
      if (!(content.starts_with("import ") || content.starts_with("from "))) continue;
      if (content.starts_with("from ") && content.find(" import ") == std::string_view::npos) {
        continue;
      }
      std::string stmt(trim(content));
      if (stmt.find('(') != std::string::npos && stmt.find(')') == std::string::npos) {
        std::size_t k = li + 1;
        for (; k < lines.size(); ++k) {
          std::string_view more = t.substr(lines[k].begin, lines[k].content_end - lines[k].begin);
          stmt += '\n';
          stmt += std::string(trim(more));
          if (more.find(')') != std::string_view::npos) break;
        }
        if (k >= lines.size() || (k == lines.size() - 1 && lines[k].content_end == t.size())) {
          break;  // still being generated
        }
        li = k;
      } else if (!terminated) {
        break;  // last line may still grow
      }
      out.push_back({line.begin, std::move(stmt)});
    } else {
      std::string_view s = trim(content);
      if (!(s.starts_with("import ") || s.starts_with("package "))) continue;
      if (!s.ends_with(";")) continue;
      out.push_back({line.begin + static_cast<std::size_t>(s.data() - content.data()),
                     std::string(s)});
    }
  }
  return out;
}

std::string extract_preamble(std::string_view text, Language lang) {
  FencelessText source(text);
  std::vector<std::string> ordered;
  std::unordered_set<std::string> seen;
  for (auto& s : find_preamble_statements(source.text(), lang)) {
    if (seen.insert(s.text).second) ordered.push_back(std::move(s.text));
  }
  if (lang == Language::kPython) {
    // `from __future__` must precede every other statement.
    std::stable_partition(ordered.begin(), ordered.end(), [](const std::string& s) {
      return s.starts_with("from __future__ ");
    });
  }
  std::string out;
  for (const auto& s : ordered) {
    if (!out.empty()) out += '\n';
    out += s;
  }
  return out;
}

std::optional<JavaSignature> parse_java_signature(std::string_view signature_text) {
  std::string text(signature_text);
  text += " {";
  const JLex lex = lex_java(text);
  JavaHeaderParser parser(text, lex.tokens);
  JavaHeader h = parser.parse(0);
  if (h.status != HeaderStatus::kMatched) return std::nullopt;
  const auto& toks = lex.tokens;
  auto slice = [&](std::size_t a, std::size_t b) {  // tokens [a, b)
    if (a >= b) return std::string();
    return std::string(trim(std::string_view(text).substr(toks[a].begin, toks[b - 1].end - toks[a].begin)));
  };
  JavaSignature sig;
  if (h.type_params != std::string_view::npos) sig.type_parameters = slice(h.type_params, h.type_begin);
  sig.return_type = slice(h.type_begin, h.name);
  sig.name = std::string(parser.text(h.name));
  sig.parameters = slice(h.open_paren + 1, h.close_paren);
  // Split parameters at top-level commas; the name is the last identifier.
  int depth = 0;
  std::string last_ident;
  for (std::size_t j = h.open_paren + 1; j <= h.close_paren; ++j) {
    std::string_view tk = parser.text(j);
    if (tk == "<" || tk == "(") ++depth;
    if (tk == ">" || tk == ")") --depth;
    if ((tk == "," && depth == 0) || j == h.close_paren) {
      if (!last_ident.empty()) sig.parameter_names.push_back(last_ident);
      last_ident.clear();
      continue;
    }
    if (toks[j].kind == JToken::kIdent && !java_keywords().contains(tk)) last_ident = tk;
  }
  return sig;
}

}  // namespace stopgen
