#include <cctype>
#include <set>

#include "mvl/error.hpp"
#include "mvl/textio.hpp"

namespace mvl {

namespace {

enum class Tok { Ident, LBrace, RBrace, LParen, RParen, Comma, Semi, Newline, Less, Equals, Colon, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

bool ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '.' || c == '\'' || c >= 0x80;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::string text, int at_col) { out.push_back(Token{kind, std::move(text), line, at_col}); };
  while (i < src.size()) {
    unsigned char ch = static_cast<unsigned char>(src[i]);
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (ch == '\n') {
      push(Tok::Newline, "\n", col);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (ident_char(ch)) {
      std::size_t start = i;
      int start_col = col;
      // Inner hyphens are allowed ("hybrid-energy-map"), arrows are not.
      auto continues = [&](std::size_t at) {
        if (at >= src.size()) return false;
        unsigned char c = static_cast<unsigned char>(src[at]);
        if (c == '-') return at + 1 < src.size() && ident_char(static_cast<unsigned char>(src[at + 1]));
        return ident_char(c);
      };
      while (continues(i)) {
        ++i;
        ++col;
      }
      push(Tok::Ident, std::string(src.substr(start, i - start)), start_col);
      continue;
    }
    if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      push(Tok::Arrow, "->", col);
      i += 2;
      col += 2;
      continue;
    }
    Tok kind;
    switch (ch) {
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case '<': kind = Tok::Less; break;
      case '=': kind = Tok::Equals; break;
      case ':': kind = Tok::Colon; break;
      default: throw SyntaxError(line, col, "a token, found '" + std::string(1, static_cast<char>(ch)) + "'");
    }
    push(kind, std::string(1, static_cast<char>(ch)), col);
    ++i;
    ++col;
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Newline: return "end of line";
    default: return "'" + t.text + "'";
  }
}

struct Reference {
  std::string name;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  Document document() {
    Document doc;
    while (true) {
      skip_separators();
      if (peek().kind == Tok::End) break;
      const Token& kw = expect(Tok::Ident, "'lattice', 'term', 'set', 'mvset' or 'map'");
      if (kw.text == "lattice") {
        doc.lattices.push_back(lattice());
      } else if (kw.text == "term") {
        doc.terms.push_back(term());
      } else if (kw.text == "set") {
        doc.sets.push_back(set());
      } else if (kw.text == "mvset") {
        doc.mvsets.push_back(mvset());
      } else if (kw.text == "map") {
        doc.maps.push_back(map());
      } else {
        fail(kw, "'lattice', 'term', 'set', 'mvset' or 'map'");
      }
    }
    std::set<std::string> lattices;
    for (const auto& l : doc.lattices) lattices.insert(l.name);
    for (const auto& ref : lattice_refs_)
      if (!lattices.count(ref.name))
        throw Error(ErrorCode::UnresolvedReference, "line " + std::to_string(ref.line) + ", column " +
                                                        std::to_string(ref.column) + ": no lattice named '" +
                                                        ref.name + "'");
    return doc;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& at, const std::string& expected) const {
    throw SyntaxError(at.line, at.column, expected + ", found " + describe(at));
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), what);
    return next();
  }

  void expect_word(const std::string& word) {
    if (peek().kind != Tok::Ident || peek().text != word) fail(peek(), "'" + word + "'");
    next();
  }

  bool at_separator() const { return peek().kind == Tok::Newline || peek().kind == Tok::Semi; }

  void skip_separators() {
    while (at_separator()) next();
  }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) next();
  }

  std::string block_name() {
    const Token& t = expect(Tok::Ident, "a block name");
    if (!names_.insert(t.text).second) fail(t, "a unique block name (duplicate)");
    return t.text;
  }

  std::string lattice_ref() {
    const Token& t = expect(Tok::Ident, "a lattice name");
    lattice_refs_.push_back({t.text, t.line, t.column});
    return t.text;
  }

  void end_statement() {
    if (peek().kind == Tok::RBrace || at_separator()) return;
    fail(peek(), "end of statement");
  }

  LatticeDecl lattice() {
    LatticeDecl decl;
    decl.name = block_name();
    if (peek().kind == Tok::Equals) {
      next();
      expect_word("product");
      std::string a = lattice_ref();
      std::string b = lattice_ref();
      decl.product = std::make_pair(a, b);
      return decl;
    }
    expect(Tok::LBrace, "'{' or '= product'");
    bool meet_mult = false;
    bool table_mult = false;
    while (true) {
      skip_separators();
      if (peek().kind == Tok::RBrace) {
        next();
        break;
      }
      const Token& kw = expect(Tok::Ident, "'elems', 'covers', 'mult', 'unit' or 'mul'");
      if (kw.text == "elems") {
        if (peek().kind != Tok::Ident) fail(peek(), "an element label");
        while (peek().kind == Tok::Ident) decl.spec.elements.push_back(next().text);
      } else if (kw.text == "covers") {
        if (peek().kind != Tok::Ident) fail(peek(), "a cover chain such as a<b");
        while (peek().kind == Tok::Ident) {
          std::string lower = next().text;
          expect(Tok::Less, "'<'");
          std::string upper = expect(Tok::Ident, "an element label").text;
          decl.spec.covers.emplace_back(lower, upper);
          while (peek().kind == Tok::Less) {
            next();
            lower = upper;
            upper = expect(Tok::Ident, "an element label").text;
            decl.spec.covers.emplace_back(lower, upper);
          }
        }
      } else if (kw.text == "mult") {
        expect_word("meet");
        meet_mult = true;
      } else if (kw.text == "unit") {
        table_mult = true;
        ensure_table(decl).unit = expect(Tok::Ident, "the unit label").text;
      } else if (kw.text == "mul") {
        table_mult = true;
        MultSpec::Product p;
        p.lhs = expect(Tok::Ident, "a factor label").text;
        p.rhs = expect(Tok::Ident, "a factor label").text;
        expect(Tok::Equals, "'='");
        p.result = expect(Tok::Ident, "a product label").text;
        ensure_table(decl).table.push_back(std::move(p));
      } else {
        fail(kw, "'elems', 'covers', 'mult', 'unit' or 'mul'");
      }
      if (meet_mult && table_mult) fail(kw, "either 'mult meet' or a 'unit'/'mul' table, not both");
      if (meet_mult && !decl.spec.mult) decl.spec.mult = MultSpec{MultSpec::Kind::Meet, {}, {}};
      end_statement();
    }
    return decl;
  }

  static MultSpec& ensure_table(LatticeDecl& decl) {
    if (!decl.spec.mult) decl.spec.mult = MultSpec{MultSpec::Kind::Table, {}, {}};
    return *decl.spec.mult;
  }

  TermDecl term() {
    TermDecl decl;
    decl.name = block_name();
    expect(Tok::LParen, "'('");
    std::set<std::string> seen;
    while (true) {
      const Token& p = expect(Tok::Ident, "a parameter name");
      if (is_operator(p.text)) fail(p, "a parameter name");
      if (!seen.insert(p.text).second) fail(p, "a distinct parameter name");
      decl.params.push_back(p.text);
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::RParen, "',' or ')'");
      break;
    }
    expect(Tok::Equals, "'='");
    decl.body = expr(seen);
    return decl;
  }

  static bool is_operator(const std::string& w) {
    return w == "or" || w == "and" || w == "mul" || w == "imp" || w == "xor";
  }

  TermPtr expr(const std::set<std::string>& params, int depth = 0) {
    skip_newlines();
    if (depth > kMaxDepth) fail(peek(), "a term nested at most " + std::to_string(kMaxDepth) + " levels deep");
    if (peek().kind == Tok::LParen) {
      next();
      TermPtr inner = expr(params, depth + 1);
      skip_newlines();
      expect(Tok::RParen, "')'");
      return inner;
    }
    const Token& t = expect(Tok::Ident, "an operator, variable or constant");
    if (t.text == "or" || t.text == "and" || t.text == "mul" || t.text == "imp" || t.text == "xor") {
      TermOp op = t.text == "or"    ? TermOp::Join
                  : t.text == "and" ? TermOp::Meet
                  : t.text == "mul" ? TermOp::Mult
                  : t.text == "imp" ? TermOp::Implies
                                    : TermOp::RingSum;
      TermPtr lhs = expr(params, depth + 1);
      TermPtr rhs = expr(params, depth + 1);
      return binary(op, lhs, rhs);
    }
    return params.count(t.text) ? var(t.text) : constant(t.text);
  }

  LabelPairs pairs() {
    expect(Tok::LBrace, "'{'");
    LabelPairs out;
    while (true) {
      skip_separators();
      if (peek().kind == Tok::RBrace) {
        next();
        return out;
      }
      expect(Tok::LParen, "'(' or '}'");
      std::string x = expect(Tok::Ident, "an element label").text;
      expect(Tok::Comma, "','");
      std::string m = expect(Tok::Ident, "a confidence label").text;
      expect(Tok::RParen, "')'");
      out.emplace_back(std::move(x), std::move(m));
    }
  }

  SetDecl set() {
    SetDecl decl;
    decl.name = block_name();
    expect_word("over");
    decl.carrier = lattice_ref();
    expect(Tok::LBrace, "'{'");
    while (true) {
      skip_separators();
      if (peek().kind == Tok::RBrace) {
        next();
        break;
      }
      decl.elems.push_back(expect(Tok::Ident, "an element label or '}'").text);
    }
    return decl;
  }

  MVSetDecl mvset() {
    MVSetDecl decl;
    decl.name = block_name();
    expect_word("over");
    decl.carrier = lattice_ref();
    decl.scale = lattice_ref();
    decl.pairs = pairs();
    return decl;
  }

  MapDecl map() {
    MapDecl decl;
    decl.name = block_name();
    expect_word("over");
    decl.carrier = lattice_ref();
    decl.scale = lattice_ref();
    expect(Tok::LBrace, "'{'");
    std::vector<Reference> concept_refs;
    auto concept_ref = [&]() {
      const Token& t = expect(Tok::Ident, "a concept name");
      concept_refs.push_back({t.text, t.line, t.column});
      return t.text;
    };
    while (true) {
      skip_separators();
      if (peek().kind == Tok::RBrace) {
        next();
        break;
      }
      const Token& kw = expect(Tok::Ident, "'concepts', 'initial', 'feedback' or 'matrix'");
      if (kw.text == "concepts") {
        if (peek().kind != Tok::Ident) fail(peek(), "a concept name");
        while (peek().kind == Tok::Ident) decl.concepts.push_back(next().text);
      } else if (kw.text == "initial" || kw.text == "feedback") {
        std::string c = concept_ref();
        expect(Tok::Equals, "'='");
        (kw.text == "initial" ? decl.initial : decl.feedback).emplace_back(c, pairs());
      } else if (kw.text == "matrix") {
        MatrixDecl m;
        m.name = peek().kind == Tok::Ident ? next().text : "m" + std::to_string(decl.matrices.size() + 1);
        expect(Tok::LBrace, "'{'");
        while (true) {
          skip_separators();
          if (peek().kind == Tok::RBrace) {
            next();
            break;
          }
          CellDecl cell;
          cell.from = concept_ref();
          expect(Tok::Arrow, "'->'");
          cell.to = concept_ref();
          expect(Tok::Colon, "':'");
          cell.pairs = pairs();
          m.cells.push_back(std::move(cell));
          end_statement();
        }
        decl.matrices.push_back(std::move(m));
      } else {
        fail(kw, "'concepts', 'initial', 'feedback' or 'matrix'");
      }
      end_statement();
    }
    std::set<std::string> declared(decl.concepts.begin(), decl.concepts.end());
    for (const auto& ref : concept_refs)
      if (!declared.count(ref.name))
        throw Error(ErrorCode::UnresolvedReference, "line " + std::to_string(ref.line) + ", column " +
                                                        std::to_string(ref.column) + ": no concept named '" +
                                                        ref.name + "' in map '" + decl.name + "'");
    return decl;
  }

  static constexpr int kMaxDepth = 512;

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> names_;
  std::vector<Reference> lattice_refs_;
};

}  // namespace

bool Document::empty() const {
  return lattices.empty() && terms.empty() && sets.empty() && mvsets.empty() && maps.empty();
}

Document parse(std::string_view text) { return Parser(text).document(); }

}  // namespace mvl
