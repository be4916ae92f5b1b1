#include "plr/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace plr {

GrammarError::GrammarError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                  : message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { ident, quoted, variable, arrow, semi, bar, lbracket, rbracket, equals, comma, star, plus, at, end };

struct Token {
  Tok kind;
  std::string text;
  SourceLocation loc;
};

bool ident_char(char c) {
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  switch (c) {
    case '[': case ']': case '=': case ',': case ';': case '*': case '+':
    case '\'': case '|': case '#': case '@': case '%': case '?':
      return false;
    default:
      return true;
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  SourceLocation location() const { return {line_, col_}; }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t off = 0) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }

  void advance() {
    if (peek() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  /// Skips blanks and comments. Stops at a newline when `stop_at_newline`.
  void skip(bool stop_at_newline) {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '\n' && stop_at_newline) {
        return;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  /// Reads whitespace-separated words up to the end of the line.
  std::vector<Token> line_words() {
    std::vector<Token> words;
    for (;;) {
      skip(true);
      if (at_end() || peek() == '\n') break;
      Token t{Tok::ident, "", location()};
      while (!at_end() && !std::isspace(static_cast<unsigned char>(peek()))) {
        if (peek() == '#') break;
        t.text += peek();
        advance();
      }
      if (t.text.size() >= 2 && t.text.front() == '\'' && t.text.back() == '\'')
        t.text = t.text.substr(1, t.text.size() - 2);
      if (!t.text.empty()) words.push_back(std::move(t));
    }
    return words;
  }

  /// Directive name following `%`, or nullopt if the next token is not one.
  std::optional<Token> directive() {
    skip(false);
    if (peek() != '%') return std::nullopt;
    Token t{Tok::ident, "", location()};
    advance();
    while (std::isalpha(static_cast<unsigned char>(peek()))) {
      t.text += peek();
      advance();
    }
    return t;
  }

  Token next() {
    skip(false);
    SourceLocation loc = location();
    if (at_end()) return {Tok::end, "", loc};
    char c = peek();
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), loc};
    };
    switch (c) {
      case ';': return single(Tok::semi);
      case '|': return single(Tok::bar);
      case '[': return single(Tok::lbracket);
      case ']': return single(Tok::rbracket);
      case '=': return single(Tok::equals);
      case ',': return single(Tok::comma);
      case '*': return single(Tok::star);
      case '+': return single(Tok::plus);
      case '@': return single(Tok::at);
      default: break;
    }
    if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      return {Tok::arrow, "->", loc};
    }
    if (c == '\'') {
      advance();
      std::string s;
      while (!at_end() && peek() != '\'' && peek() != '\n') {
        s += peek();
        advance();
      }
      if (peek() != '\'') throw GrammarError("unterminated quoted terminal", loc.line, loc.column);
      advance();
      if (s.empty()) throw GrammarError("empty quoted terminal", loc.line, loc.column);
      return {Tok::quoted, s, loc};
    }
    Tok kind = Tok::ident;
    std::string s;
    if (c == '?') {
      kind = Tok::variable;
      advance();
    }
    while (!at_end() && ident_char(peek()) && !(peek() == '-' && peek(1) == '>')) {
      s += peek();
      advance();
    }
    if (s.empty())
      throw GrammarError(std::string("unexpected character '") + c + "'", loc.line, loc.column);
    return {kind, s, loc};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Grammar run() {
    Grammar g;
    RuleSource source = RuleSource::syntactic;
    std::optional<SourceLocation> start_loc;
    for (;;) {
      if (auto d = lex_.directive()) {
        if (d->text == "start") {
          auto words = lex_.line_words();
          if (words.size() != 1)
            throw GrammarError("%start takes exactly one symbol", d->loc.line, d->loc.column);
          g.start = words.front().text;
          start_loc = d->loc;
        } else if (d->text == "terminals") {
          for (auto& w : lex_.line_words()) g.terminals.insert(w.text);
        } else if (d->text == "textual") {
          source = RuleSource::textual;
        } else if (d->text == "end" || d->text == "syntactic") {
          source = RuleSource::syntactic;
        } else {
          throw GrammarError("unknown directive %" + d->text, d->loc.line, d->loc.column);
        }
        continue;
      }
      Token t = lex_.next();
      if (t.kind == Tok::end) break;
      parse_rule(t, source, g);
    }
    if (g.start.empty() && !g.rules.empty()) g.start = g.rules.front().mother.name;
    for (auto& r : g.rules)
      for (auto& d : r.daughters)
        if (g.terminals.count(d.category.name)) d.terminal = true;
    g.validate();
    return g;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw GrammarError(msg, t.loc.line, t.loc.column);
  }

  FeatureMap parse_features() {
    FeatureMap m;
    Token t = lex_.next();
    if (t.kind == Tok::rbracket) return m;
    for (;;) {
      if (t.kind != Tok::ident) fail(t, "expected feature name");
      std::string name = t.text;
      Token eq = lex_.next();
      if (eq.kind != Tok::equals) fail(eq, "expected '=' after feature name '" + name + "'");
      Token v = lex_.next();
      FeatureValue value;
      if (v.kind == Tok::variable)
        value = FeatureValue::variable(v.text);
      else if (v.kind == Tok::ident || v.kind == Tok::quoted)
        value = FeatureValue::atom(v.text);
      else
        fail(v, "expected feature value");
      if (!m.emplace(name, value).second) fail(t, "duplicate feature '" + name + "'");
      Token sep = lex_.next();
      if (sep.kind == Tok::rbracket) return m;
      if (sep.kind != Tok::comma) fail(sep, "expected ',' or ']' in feature list");
      t = lex_.next();
    }
  }

  /// Parses `Name[features]` starting at `t`; returns the lookahead token.
  Token parse_category(Token t, Category& cat) {
    cat.name = t.text;
    Token next = lex_.next();
    if (next.kind == Tok::lbracket) {
      cat.features = parse_features();
      next = lex_.next();
    }
    return next;
  }

  void parse_rule(Token t, RuleSource source, Grammar& g) {
    std::string explicit_id;
    if (t.kind == Tok::at) {
      Token id = lex_.next();
      if (id.kind != Tok::ident) fail(id, "expected rule name after '@'");
      explicit_id = id.text;
      t = lex_.next();
    }
    if (t.kind != Tok::ident) fail(t, "expected rule mother symbol");
    SourceLocation loc = t.loc;
    Category mother;
    Token arrow = parse_category(t, mother);
    if (arrow.kind != Tok::arrow) fail(arrow, "expected '->'");

    int alternative = 0;
    Token d = lex_.next();
    for (;;) {
      Rule rule;
      rule.mother = mother;
      rule.source = source;
      rule.location = loc;
      ++alternative;
      if (!explicit_id.empty())
        rule.id = alternative == 1 ? explicit_id : explicit_id + "/" + std::to_string(alternative);
      else
        rule.id = "r" + std::to_string(g.rules.size() + 1);

      while (d.kind == Tok::ident || d.kind == Tok::quoted) {
        Daughter dau;
        dau.terminal = d.kind == Tok::quoted;
        Token next = lex_.next();
        dau.category.name = d.text;
        auto mark = [&](Token& tok) {
          if (tok.kind == Tok::star || tok.kind == Tok::plus) {
            if (dau.repeat != Repeat::one) fail(tok, "repeated Kleene mark");
            dau.repeat = tok.kind == Tok::star ? Repeat::star : Repeat::plus;
            tok = lex_.next();
          }
        };
        mark(next);
        if (next.kind == Tok::lbracket) {
          dau.category.features = parse_features();
          next = lex_.next();
        }
        mark(next);
        if (dau.terminal) g.terminals.insert(dau.category.name);
        rule.daughters.push_back(std::move(dau));
        d = next;
      }
      if (rule.daughters.empty()) fail(d, "rule '" + rule.id + "' has no daughters");
      g.rules.push_back(std::move(rule));
      if (d.kind == Tok::semi) return;
      if (d.kind != Tok::bar) fail(d, "expected ';' or '|' after daughters");
      d = lex_.next();
    }
  }

  Lexer lex_;
};

}  // namespace

Grammar parse_grammar_file(std::string_view text) { return Parser(text).run(); }

bool Grammar::has_kleene() const {
  for (const auto& r : rules)
    for (const auto& d : r.daughters)
      if (d.repeat != Repeat::one) return true;
  return false;
}

std::set<std::string> feature_names(const Grammar& g, RuleSource source) {
  std::set<std::string> names;
  for (const auto& r : g.rules) {
    if (r.source != source || r.auxiliary) continue;
    for (const auto& [n, v] : r.mother.features) names.insert(n);
    for (const auto& d : r.daughters) {
      if (d.category.name.find('@') != std::string::npos) continue;  // Kleene auxiliary
      for (const auto& [n, v] : d.category.features) names.insert(n);
    }
  }
  return names;
}

void Grammar::validate() const {
  std::set<std::string> mothers;
  std::map<std::string, const Rule*> ids;
  for (const auto& r : rules) {
    if (!ids.emplace(r.id, &r).second)
      throw GrammarError("duplicate rule id '" + r.id + "'", r.location.line, r.location.column);
    if (r.daughters.empty() && !r.auxiliary)
      throw GrammarError("rule '" + r.id + "' has no daughters", r.location.line, r.location.column);
    if (terminals.count(r.mother.name))
      throw GrammarError("terminal '" + r.mother.name + "' used as a rule mother", r.location.line,
                         r.location.column);
    mothers.insert(r.mother.name);
  }
  for (const auto& r : rules)
    for (const auto& d : r.daughters)
      if (!d.terminal && !mothers.count(d.category.name))
        throw GrammarError("undefined symbol '" + d.category.name + "' in rule '" + r.id + "'",
                           r.location.line, r.location.column);
  if (start.empty()) throw GrammarError("grammar has no rules and no start symbol");
  if (!mothers.count(start)) throw GrammarError("start symbol '" + start + "' is not the mother of any rule");

  auto textual = feature_names(*this, RuleSource::textual);
  auto syntactic = feature_names(*this, RuleSource::syntactic);
  std::vector<std::string> shared;
  std::set_intersection(textual.begin(), textual.end(), syntactic.begin(), syntactic.end(),
                        std::back_inserter(shared));
  if (!shared.empty()) {
    std::string list;
    for (const auto& s : shared) list += (list.empty() ? "" : ", ") + s;
    const Rule* where = nullptr;
    for (const auto& r : rules)
      if (r.source == RuleSource::textual) {
        where = &r;
        break;
      }
    throw GrammarError("textual and syntactic rules share features: " + list, where->location.line,
                       where->location.column);
  }
}

}  // namespace plr
