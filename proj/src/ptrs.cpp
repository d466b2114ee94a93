#include "ptrs.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ptast {

PTRS::PTRS(std::shared_ptr<Signature> sig, std::vector<ProbRule> rules, std::string name,
           bool classify)
    : sig_(std::move(sig)), rules_(std::move(rules)), name_(std::move(name)) {
  for (const ProbRule& r : rules_) {
    if (r.lhs.is_var()) throw std::invalid_argument("rule left-hand side is a variable");
    std::set<int> lv;
    for (int v : term_vars(r.lhs)) lv.insert(v);
    for (const auto& [p, t] : r.rhs.entries()) {
      (void)p;
      for (int v : term_vars(t))
        if (!lv.count(v))
          throw std::invalid_argument("right-hand side variable '" + sig_->var_name(v) +
                                      "' does not occur on the left");
    }
    lhss_.push_back(r.lhs);
  }
  if (classify) {
    // kind(f) = Defined iff f is the root of some lhs
    for (size_t i = 0; i < sig_->symbol_count(); ++i) {
      SymbolInfo& s = sig_->symbol_mut(static_cast<int>(i));
      if (s.kind == SymbolKind::Tuple || s.kind == SymbolKind::Compound) continue;
      s.kind = SymbolKind::Constructor;
    }
    for (const ProbRule& r : rules_) sig_->symbol_mut(r.lhs.sym()).kind = SymbolKind::Defined;
  }
}

std::vector<int> PTRS::defined_symbols() const {
  std::vector<int> out;
  for (size_t i = 0; i < sig_->symbol_count(); ++i)
    if (sig_->symbol(static_cast<int>(i)).kind == SymbolKind::Defined)
      out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> PTRS::constructor_symbols() const {
  std::vector<int> out;
  for (size_t i = 0; i < sig_->symbol_count(); ++i)
    if (sig_->symbol(static_cast<int>(i)).kind == SymbolKind::Constructor)
      out.push_back(static_cast<int>(i));
  return out;
}

bool PTRS::deterministic() const {
  return std::all_of(rules_.begin(), rules_.end(),
                     [](const ProbRule& r) { return r.deterministic(); });
}

PTRS PTRS::with_rules(std::vector<ProbRule> rules) const {
  return PTRS(sig_, std::move(rules), name_, /*classify=*/false);
}

std::vector<NonProbRule> np_rules(const std::vector<ProbRule>& rules) {
  std::vector<NonProbRule> out;
  for (const ProbRule& r : rules)
    for (const auto& [p, t] : r.rhs.entries()) {
      (void)p;
      out.push_back(NonProbRule{r.lhs, t});
    }
  return out;
}

std::vector<NonProbRule> np(const PTRS& s) { return np_rules(s.rules()); }

namespace {

struct Token {
  enum Kind { Ident, Number, LParen, RParen, LBrace, RBrace, Comma, Colon, Slash, Arrow, End };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    skip_ws();
    int l = line_, c = col_;
    if (pos_ >= s_.size()) return {Token::End, "", l, c};
    char ch = s_[pos_];
    if (ch == '(') return take(Token::LParen, l, c);
    if (ch == ')') return take(Token::RParen, l, c);
    if (ch == '{') return take(Token::LBrace, l, c);
    if (ch == '}') return take(Token::RBrace, l, c);
    if (ch == ',') return take(Token::Comma, l, c);
    if (ch == ':') return take(Token::Colon, l, c);
    if (ch == '/') return take(Token::Slash, l, c);
    if (ch == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
      advance();
      advance();
      return {Token::Arrow, "->", l, c};
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string t;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        t += s_[pos_];
        advance();
      }
      // digits followed by ident chars form an identifier like 0xs? keep digits-only as Number
      if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        while (pos_ < s_.size() && ident_char(s_[pos_])) {
          t += s_[pos_];
          advance();
        }
        return {Token::Ident, t, l, c};
      }
      return {Token::Number, t, l, c};
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string t;
      while (pos_ < s_.size() && ident_char(s_[pos_])) {
        t += s_[pos_];
        advance();
      }
      return {Token::Ident, t, l, c};
    }
    throw parse_error(std::string("unexpected character '") + ch + "'", l, c);
  }

 private:
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }
  void skip_ws() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
        continue;
      }
      break;
    }
  }
  Token take(Token::Kind k, int l, int c) {
    std::string t(1, s_[pos_]);
    advance();
    return {k, t, l, c};
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

bool reserved_compound_name(const std::string& n) {
  if (n.size() < 2 || n[0] != 'c') return false;
  return std::all_of(n.begin() + 1, n.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  Parser(const std::string& text, std::string name)
      : lex_(text), name_(std::move(name)), sig_(std::make_shared<Signature>()) {
    tok_ = lex_.next();
  }

  PTRS run() {
    expect(Token::LParen, "(");
    if (tok_.kind == Token::Ident && tok_.text == "VAR") {
      eat();
      while (tok_.kind == Token::Ident || tok_.kind == Token::Number) {
        declare_var(tok_.text);
        eat();
      }
      expect(Token::RParen, ")");
      expect(Token::LParen, "(");
    }
    if (!(tok_.kind == Token::Ident && tok_.text == "RULES"))
      throw parse_error("expected RULES block", tok_.line, tok_.col);
    eat();
    std::vector<ProbRule> rules;
    while (tok_.kind != Token::RParen) rules.push_back(parse_rule());
    eat();
    if (tok_.kind != Token::End) throw parse_error("trailing input", tok_.line, tok_.col);
    try {
      return PTRS(sig_, std::move(rules), name_);
    } catch (const std::invalid_argument& e) {
      throw parse_error(e.what(), 1, 1);
    }
  }

 private:
  void declare_var(const std::string& n) { sig_->add_var(n); }

  ProbRule parse_rule() {
    Token at = tok_;
    Term lhs = parse_term();
    if (lhs.is_var()) throw parse_error("rule left-hand side is a variable", at.line, at.col);
    expect(Token::Arrow, "->");
    std::vector<std::pair<Rational, Term>> entries;
    if (tok_.kind == Token::LBrace) {
      Token brace = tok_;
      eat();
      for (;;) {
        Rational p = parse_prob();
        expect(Token::Colon, ":");
        entries.emplace_back(p, parse_term());
        if (tok_.kind == Token::Comma) {
          eat();
          continue;
        }
        break;
      }
      expect(Token::RBrace, "}");
      try {
        return ProbRule{lhs, MultiDistribution<Term>(std::move(entries))};
      } catch (const distribution_error& e) {
        throw parse_error(e.what(), brace.line, brace.col);
      }
    }
    Term rhs = parse_term();
    return ProbRule{lhs, MultiDistribution<Term>::singleton(rhs)};
  }

  Rational parse_prob() {
    if (tok_.kind != Token::Number)
      throw parse_error("expected probability", tok_.line, tok_.col);
    BigInt num(tok_.text);
    eat();
    if (tok_.kind == Token::Slash) {
      eat();
      if (tok_.kind != Token::Number)
        throw parse_error("expected denominator", tok_.line, tok_.col);
      BigInt den(tok_.text);
      eat();
      if (den == 0) throw parse_error("zero denominator", tok_.line, tok_.col);
      return Rational(num, den);
    }
    return Rational(num);
  }

  Term parse_term() {
    if (tok_.kind != Token::Ident && tok_.kind != Token::Number)
      throw parse_error("expected term", tok_.line, tok_.col);
    Token head = tok_;
    eat();
    if (sig_->find_var(head.text) >= 0) return Term::var(sig_->find_var(head.text));
    if (reserved_compound_name(head.text))
      throw parse_error("'" + head.text + "' is a reserved compound symbol name", head.line,
                        head.col);
    Terms args;
    if (tok_.kind == Token::LParen) {
      eat();
      if (tok_.kind != Token::RParen) {
        for (;;) {
          args.push_back(parse_term());
          if (tok_.kind == Token::Comma) {
            eat();
            continue;
          }
          break;
        }
      }
      expect(Token::RParen, ")");
    }
    int id;
    try {
      id = sig_->add_symbol(head.text, static_cast<int>(args.size()), SymbolKind::Constructor);
    } catch (const std::invalid_argument& e) {
      throw parse_error(e.what(), head.line, head.col);
    }
    return Term::app(id, std::move(args));
  }

  void expect(Token::Kind k, const std::string& what) {
    if (tok_.kind != k)
      throw parse_error("expected '" + what + "'", tok_.line, tok_.col);
    eat();
  }
  void eat() { tok_ = lex_.next(); }

  Lexer lex_;
  Token tok_;
  std::string name_;
  std::shared_ptr<Signature> sig_;
};

}  // namespace

PTRS parse_ptrs(const std::string& text, const std::string& name) {
  return Parser(text, name).run();
}

Term parse_term_over(const std::string& text, Signature& sig) {
  Lexer lex(text);
  struct Rec {
    Lexer& lex;
    Signature& sig;
    Token tok;
    Term parse() {
      if (tok.kind != Token::Ident && tok.kind != Token::Number)
        throw parse_error("expected term", tok.line, tok.col);
      Token head = tok;
      tok = lex.next();
      if (sig.find_var(head.text) >= 0) return Term::var(sig.find_var(head.text));
      Terms args;
      if (tok.kind == Token::LParen) {
        tok = lex.next();
        if (tok.kind != Token::RParen) {
          for (;;) {
            args.push_back(parse());
            if (tok.kind == Token::Comma) {
              tok = lex.next();
              continue;
            }
            break;
          }
        }
        if (tok.kind != Token::RParen) throw parse_error("expected ')'", tok.line, tok.col);
        tok = lex.next();
      }
      int id = sig.find_symbol(head.text);
      if (id < 0) {
        if (!args.empty() || reserved_compound_name(head.text))
          throw parse_error("unknown symbol '" + head.text + "'", head.line, head.col);
        id = sig.add_symbol(head.text, 0, SymbolKind::Constructor);
      }
      if (sig.symbol(id).arity != static_cast<int>(args.size()))
        throw parse_error("arity mismatch for '" + head.text + "'", head.line, head.col);
      return Term::app(id, std::move(args));
    }
  } rec{lex, sig, lex.next()};
  Term t = rec.parse();
  if (rec.tok.kind != Token::End) throw parse_error("trailing input", rec.tok.line, rec.tok.col);
  return t;
}

std::string print_rule(const ProbRule& r, const Signature& sig) {
  std::ostringstream os;
  os << term_str(r.lhs, sig) << " -> ";
  if (r.deterministic()) {
    os << term_str(r.rhs.entries()[0].second, sig);
  } else {
    os << "{";
    for (size_t i = 0; i < r.rhs.size(); ++i) {
      if (i) os << ", ";
      os << rat_str(r.rhs.entries()[i].first) << " : "
         << term_str(r.rhs.entries()[i].second, sig);
    }
    os << "}";
  }
  return os.str();
}

std::string print_ptrs(const PTRS& r) {
  std::ostringstream os;
  std::vector<int> vars;
  std::set<int> seen;
  for (const ProbRule& rule : r.rules())
    for (int v : term_vars(rule.lhs))
      if (seen.insert(v).second) vars.push_back(v);
  if (!vars.empty()) {
    os << "(VAR";
    for (int v : vars) os << " " << r.sig().var_name(v);
    os << ")\n";
  }
  os << "(RULES\n";
  for (const ProbRule& rule : r.rules()) os << "  " << print_rule(rule, r.sig()) << "\n";
  os << ")\n";
  return os.str();
}

}  // namespace ptast
