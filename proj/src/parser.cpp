#include <cctype>

#include "nfw/formula.hpp"

namespace nfw {
namespace {

enum class Tok {
  Ident, Forall, Exists, In, Not, And, Or, Implies, Iff, Eq, LParen, RParen,
  Dot, Caret, Int, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Tok::End, "", start};
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string word = text_.substr(start, pos_ - start);
      if (word == "forall") return {Tok::Forall, word, start};
      if (word == "exists") return {Tok::Exists, word, start};
      if (word == "in") return {Tok::In, word, start};
      return {Tok::Ident, word, start};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      return {Tok::Int, text_.substr(start, pos_ - start), start};
    }
    auto starts = [&](const char* s) { return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0; };
    if (starts("<->")) { pos_ += 3; return {Tok::Iff, "<->", start}; }
    if (starts("->")) { pos_ += 2; return {Tok::Implies, "->", start}; }
    ++pos_;
    switch (c) {
      case '~': return {Tok::Not, "~", start};
      case '&': return {Tok::And, "&", start};
      case '|': return {Tok::Or, "|", start};
      case '=': return {Tok::Eq, "=", start};
      case '(': return {Tok::LParen, "(", start};
      case ')': return {Tok::RParen, ")", start};
      case '.': return {Tok::Dot, ".", start};
      case '^': return {Tok::Caret, "^", start};
      default: break;
    }
    throw SyntaxError(start, std::string("unexpected character '") + c + "'");
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { advance(); }

  Formula parse_all() {
    Formula f = parse_iff();
    if (cur_.kind != Tok::End) fail("trailing input '" + cur_.text + "'");
    return f;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(cur_.offset, what);
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (cur_.kind == Tok::Iff) {
      advance();
      return make_iff(lhs, parse_iff());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (cur_.kind == Tok::Implies) {
      advance();
      return make_implies(lhs, parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (cur_.kind == Tok::Or) {
      advance();
      lhs = make_or(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (cur_.kind == Tok::And) {
      advance();
      lhs = make_and(lhs, parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    switch (cur_.kind) {
      case Tok::Not:
        advance();
        return make_not(parse_unary());
      case Tok::Forall:
      case Tok::Exists: {
        const Op op = cur_.kind == Tok::Forall ? Op::Forall : Op::Exists;
        advance();
        Var v = parse_var();
        if (cur_.kind == Tok::Dot) {
          advance();
          return Formula::quantifier(op, v, parse_iff());
        }
        if (cur_.kind == Tok::Forall || cur_.kind == Tok::Exists)
          return Formula::quantifier(op, v, parse_unary());
        fail("expected '.' after quantified variable");
      }
      case Tok::LParen: {
        advance();
        Formula f = parse_iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: {
        Var lhs = parse_var();
        if (cur_.kind == Tok::Eq) {
          advance();
          return Formula::equal(lhs, parse_var());
        }
        if (cur_.kind == Tok::In) {
          advance();
          return Formula::member(lhs, parse_var());
        }
        fail("expected '=' or 'in'");
      }
      default:
        fail(cur_.kind == Tok::End ? "unexpected end of input"
                                   : "unexpected token '" + cur_.text + "'");
    }
  }

  Var parse_var() {
    if (cur_.kind != Tok::Ident) fail("expected identifier");
    Var v{cur_.text, std::nullopt};
    advance();
    if (cur_.kind == Tok::Caret) {
      advance();
      if (cur_.kind != Tok::Int) fail("expected integer type after '^'");
      v.type = std::stoi(cur_.text);
      advance();
    }
    return v;
  }

  Lexer lexer_;
  Token cur_{Tok::End, "", 0};
};

}  // namespace

Formula parse(const std::string& text) {
  Formula raw = Parser(text).parse_all();
  try {
    return normalize(raw);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidInput) throw SyntaxError(0, e.what());
    throw;
  }
}

}  // namespace nfw
