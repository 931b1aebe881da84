#include "speclite/parser.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <set>
#include <utility>
#include <vector>

namespace speclite {
namespace {

enum class Tok { Ident, UIdent, TyVar, Int, Keyword, Symbol, SpecOpen, SpecClose, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
  bool space_before = true;
};

const std::set<std::string, std::less<>> kKeywords = {
    "type",     "val",    "exception", "of",    "mutable", "model",   "with",
    "invariant", "requires", "ensures", "modifies", "raises", "checks", "old",
    "forall",   "exists", "exists_",  "if",    "then",    "else",    "let",
    "in",       "not",    "true",     "false", "predicate", "function", "mod"};

// Longest match first.
constexpr std::array<std::string_view, 30> kSymbols = {
    "<->", "->", "<=", ">=", "<>", "&&", "||", "/\\", "\\/", "::", "(", ")", "[", "]", ",",
    ";",   ":",  ".",  "=",  "<",  ">",  "@",  "+",   "-",   "*",  "/", "?", "~", "|", "!"};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  Lexer(std::string_view src, std::string file) : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool in_spec = false;
    while (true) {
      bool space = skip_space(in_spec);
      if (pos_ >= src_.size()) {
        if (in_spec) throw ParseError(here(), "unterminated spec comment");
        out.push_back(Token{Tok::End, "<end of input>", here(), space});
        return out;
      }
      Span span = here();
      if (!in_spec && starts_with("(*@")) {
        advance(3);
        in_spec = true;
        out.push_back(Token{Tok::SpecOpen, "(*@", span, space});
        continue;
      }
      if (in_spec && starts_with("*)")) {
        advance(2);
        in_spec = false;
        out.push_back(Token{Tok::SpecClose, "*)", span, space});
        continue;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance(1);
        out.push_back(Token{Tok::Int, std::string(src_.substr(start, pos_ - start)), span, space});
        continue;
      }
      if (c == '\'' && pos_ + 1 < src_.size() &&
          (std::islower(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '_')) {
        std::size_t start = pos_;
        advance(1);
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance(1);
        out.push_back(
            Token{Tok::TyVar, std::string(src_.substr(start, pos_ - start)), span, space});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance(1);
        std::string text(src_.substr(start, pos_ - start));
        Tok kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::UIdent : Tok::Ident;
        if (kind == Tok::Ident && kKeywords.count(text)) kind = Tok::Keyword;
        out.push_back(Token{kind, std::move(text), span, space});
        continue;
      }
      bool matched = false;
      for (std::string_view sym : kSymbols) {
        if (starts_with(sym)) {
          advance(sym.size());
          out.push_back(Token{Tok::Symbol, std::string(sym), span, space});
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(span, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  Span here() const { return Span{file_, line_, col_}; }

  // Skips whitespace and ordinary (nested) comments. Returns true when
  // anything was skipped or at the start of input.
  bool skip_space(bool in_spec) {
    bool skipped = pos_ == 0;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        skipped = true;
      } else if (starts_with("(*") && (in_spec || !starts_with("(*@"))) {
        skip_comment();
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  void skip_comment() {
    int depth = 0;
    while (pos_ < src_.size()) {
      if (starts_with("(*")) {
        ++depth;
        advance(2);
      } else if (starts_with("*)")) {
        advance(2);
        if (--depth == 0) return;
      } else {
        advance(1);
      }
    }
    throw ParseError(here(), "unterminated comment");
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SpecInterface interface() {
    SpecInterface spec;
    while (!at_end()) {
      if (is_keyword("type")) {
        spec.order.push_back({DeclKind::Type, spec.type_decls.size()});
        spec.type_decls.push_back(type_decl());
      } else if (is_keyword("val")) {
        spec.order.push_back({DeclKind::Val, spec.val_decls.size()});
        spec.val_decls.push_back(val_decl());
      } else if (is_keyword("exception")) {
        spec.order.push_back({DeclKind::Exception, spec.exn_decls.size()});
        spec.exn_decls.push_back(exn_decl());
      } else if (peek().kind == Tok::SpecOpen) {
        next();
        if (!is_keyword("predicate") && !is_keyword("function"))
          fail("expected 'predicate' or 'function' (other spec comments must follow the "
               "declaration they annotate)");
        while (peek().kind != Tok::SpecClose) {
          spec.order.push_back({DeclKind::Logic, spec.logic_decls.size()});
          spec.logic_decls.push_back(logic_decl());
        }
        next();
      } else {
        fail("expected a declaration ('type', 'val', 'exception' or a spec comment)");
      }
    }
    return spec;
  }

  TermPtr standalone_term() {
    TermPtr t = term();
    if (!at_end()) fail("expected end of term");
    return t;
  }

  LogicalType standalone_type() {
    LogicalType t = type_expr();
    if (!at_end()) fail("expected end of type");
    return t;
  }

 private:
  // ---- token helpers -------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_symbol(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Symbol && peek(k).text == s;
  }
  bool is_keyword(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Keyword && peek(k).text == s;
  }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.span, expected + ", found '" + t.text + "'");
  }

  Token expect_symbol(std::string_view s) {
    if (!is_symbol(s)) fail("expected '" + std::string(s) + "'");
    return next();
  }
  Token expect_keyword(std::string_view s) {
    if (!is_keyword(s)) fail("expected '" + std::string(s) + "'");
    return next();
  }
  Token expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next();
  }
  Token expect_uident(const char* what) {
    if (peek().kind != Tok::UIdent) fail(std::string("expected ") + what);
    return next();
  }

  bool starts_logic_comment() const {
    return peek().kind == Tok::SpecOpen &&
           (is_keyword("predicate", 1) || is_keyword("function", 1));
  }

  // ---- declarations --------------------------------------------------

  TypeDecl type_decl() {
    TypeDecl decl;
    decl.span = expect_keyword("type").span;
    if (peek().kind == Tok::TyVar || is_symbol("!")) {
      decl.params.push_back(type_param());
    } else if (is_symbol("(")) {
      next();
      decl.params.push_back(type_param());
      while (accept_symbol(",")) decl.params.push_back(type_param());
      expect_symbol(")");
    }
    decl.name = expect_ident("a type name").text;
    if (is_symbol("=")) fail("type definitions are not supported in interfaces; expected a spec comment or declaration");
    while (peek().kind == Tok::SpecOpen && !starts_logic_comment()) {
      next();
      while (peek().kind != Tok::SpecClose) type_spec_item(decl);
      next();
    }
    return decl;
  }

  TypeParam type_param() {
    TypeParam p;
    p.injective = accept_symbol("!");
    if (peek().kind != Tok::TyVar) fail("expected a type variable");
    p.name = next().text;
    return p;
  }

  void type_spec_item(TypeDecl& decl) {
    if (is_keyword("mutable") || is_keyword("model")) {
      ModelField m;
      m.span = peek().span;
      if (is_keyword("mutable")) {
        next();
        m.is_mutable = true;
      }
      expect_keyword("model");
      m.name = expect_ident("a model field name").text;
      expect_symbol(":");
      m.type = type_expr();
      decl.models.push_back(std::move(m));
      return;
    }
    if (is_keyword("with")) {
      next();
      std::string binder = expect_ident("an invariant binder").text;
      expect_keyword("invariant");
      if (decl.invariant) fail("only one invariant per type is supported");
      decl.invariant = TypeInvariant{binder, term()};
      return;
    }
    fail("expected 'model', 'mutable model' or 'with ... invariant'");
  }

  ValDecl val_decl() {
    ValDecl decl;
    decl.span = expect_keyword("val").span;
    decl.name = expect_ident("a value name").text;
    expect_symbol(":");
    while (true) {
      Param p;
      if ((is_symbol("?") || is_symbol("~")) && peek(1).kind == Tok::Ident && is_symbol(":", 2)) {
        p.label = next().text == "?" ? ParamLabel::Optional : ParamLabel::Labeled;
        p.label_name = next().text;
        next();
      } else if (peek().kind == Tok::Ident && is_symbol(":", 1)) {
        p.label = ParamLabel::Labeled;
        p.label_name = next().text;
        next();
      }
      LogicalType t = product_type();
      if (accept_symbol("->")) {
        p.type = std::move(t);
        decl.params.push_back(std::move(p));
        continue;
      }
      if (p.label != ParamLabel::None) fail("expected '->' after a labeled parameter");
      decl.result = std::move(t);
      break;
    }
    if (peek().kind == Tok::SpecOpen && !starts_logic_comment()) decl.contract = contract();
    return decl;
  }

  ExnDecl exn_decl() {
    ExnDecl decl;
    decl.span = expect_keyword("exception").span;
    decl.name = expect_uident("an exception name").text;
    if (is_keyword("of")) {
      next();
      decl.payload = type_expr();
    }
    return decl;
  }

  LogicDecl logic_decl() {
    LogicDecl decl;
    decl.span = peek().span;
    if (is_keyword("predicate")) {
      decl.is_predicate = true;
    } else if (is_keyword("function")) {
      decl.is_predicate = false;
    } else {
      fail("expected 'predicate' or 'function'");
    }
    next();
    decl.name = expect_ident("a predicate or function name").text;
    while (is_symbol("(")) {
      next();
      std::vector<std::string> names;
      do {
        names.push_back(expect_ident("a parameter name").text);
      } while (peek().kind == Tok::Ident);
      expect_symbol(":");
      LogicalType t = type_expr();
      expect_symbol(")");
      for (auto& n : names) decl.params.push_back(LogicParam{n, t});
    }
    if (!decl.is_predicate) {
      expect_symbol(":");
      decl.result = type_expr();
    }
    if (accept_symbol("=")) decl.body = term();
    return decl;
  }

  Contract contract() {
    Contract c;
    c.span = next().span;  // (*@
    c.header = header();
    while (peek().kind != Tok::SpecClose) {
      if (is_keyword("requires")) {
        next();
        c.preconditions.push_back(term());
      } else if (is_keyword("ensures")) {
        next();
        c.postconditions.push_back(term());
      } else if (is_keyword("modifies")) {
        next();
        do {
          c.modifies.push_back(modifies_target());
        } while (accept_symbol(","));
      } else if (is_keyword("raises")) {
        next();
        accept_symbol("|");
        do {
          RaisesClause r;
          r.span = peek().span;
          r.exception = expect_uident("an exception name").text;
          if (accept_symbol("->")) r.condition = term();
          c.raises.push_back(std::move(r));
        } while (accept_symbol("|"));
      } else {
        fail("expected a contract clause ('requires', 'ensures', 'modifies' or 'raises')");
      }
    }
    next();
    return c;
  }

  ContractHeader header() {
    ContractHeader h;
    if (peek().kind == Tok::Ident && is_symbol("=", 1)) {
      h.results.push_back(next().text);
      next();
    } else if (is_symbol("(") && peek(1).kind == Tok::Ident) {
      next();
      h.results.push_back(expect_ident("a result name").text);
      while (accept_symbol(",")) h.results.push_back(expect_ident("a result name").text);
      expect_symbol(")");
      expect_symbol("=");
    }
    h.function = expect_ident("the function name in the contract header").text;
    while (true) {
      if (is_symbol("(") && is_symbol(")", 1)) {
        next();
        next();
        h.args.push_back({HeaderArg::Kind::Unit, {}});
      } else if (is_symbol("?") || is_symbol("~")) {
        auto kind = next().text == "?" ? HeaderArg::Kind::Optional : HeaderArg::Kind::Labeled;
        h.args.push_back({kind, expect_ident("a parameter name").text});
      } else if (peek().kind == Tok::Ident) {
        h.args.push_back({HeaderArg::Kind::Named, next().text});
      } else {
        break;
      }
    }
    return h;
  }

  ModifiesTarget modifies_target() {
    ModifiesTarget t;
    t.span = peek().span;
    t.name = expect_ident("a modifies target").text;
    if (accept_symbol(".")) {
      t.field = expect_ident("a model field").text;
      if (is_symbol(".")) fail("only 'x' and 'x.field' modifies targets are supported");
    }
    return t;
  }

  // ---- types ---------------------------------------------------------

  LogicalType type_expr() {
    LogicalType t = product_type();
    if (accept_symbol("->")) return LogicalType::arrow(std::move(t), type_expr());
    return t;
  }

  LogicalType product_type() {
    std::vector<LogicalType> items{applied_type()};
    while (accept_symbol("*")) items.push_back(applied_type());
    if (items.size() == 1) return std::move(items.front());
    return LogicalType::tuple(std::move(items));
  }

  bool at_type_name() const { return peek().kind == Tok::Ident || peek().kind == Tok::UIdent; }

  std::string type_name() {
    std::string name;
    while (peek().kind == Tok::UIdent) {
      name += next().text;
      name += expect_symbol(".").text;
    }
    name += expect_ident("a type constructor").text;
    return name;
  }

  LogicalType construct(const std::string& name, std::vector<LogicalType> args) {
    auto want = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError(peek().span, "type constructor '" + name + "' expects " +
                                          std::to_string(n) + " argument(s)");
    };
    if (name == "int") return want(0), LogicalType::integer();
    if (name == "bool") return want(0), LogicalType::boolean();
    if (name == "unit") return want(0), LogicalType::unit();
    if (name == "list") return want(1), LogicalType::list(std::move(args[0]));
    if (name == "seq") return want(1), LogicalType::seq(std::move(args[0]));
    if (name == "fset") return want(1), LogicalType::fset(std::move(args[0]));
    return LogicalType::named(name, std::move(args));
  }

  LogicalType applied_type() {
    LogicalType t;
    if (is_symbol("(")) {
      next();
      std::vector<LogicalType> items{type_expr()};
      while (accept_symbol(",")) items.push_back(type_expr());
      expect_symbol(")");
      if (items.size() > 1) {
        if (!at_type_name()) fail("expected a type constructor after a parameter list");
        t = construct(type_name(), std::move(items));
      } else {
        t = std::move(items.front());
      }
    } else if (peek().kind == Tok::TyVar) {
      t = LogicalType::var(next().text);
    } else if (at_type_name()) {
      t = construct(type_name(), {});
    } else {
      fail("expected a type");
    }
    while (at_type_name()) t = construct(type_name(), {std::move(t)});
    return t;
  }

  // ---- terms ---------------------------------------------------------

  TermPtr term() {
    if (is_keyword("forall") || is_keyword("exists") || is_keyword("exists_")) return quantifier();
    return implication();
  }

  TermPtr quantifier() {
    Token kw = next();
    node::Quantifier q;
    q.kind = kw.text == "forall" ? Quant::Forall : Quant::Exists;
    do {
      node::Binder b;
      b.name = expect_ident("a quantified variable").text;
      if (accept_symbol(":")) b.type = type_expr();
      q.binders.push_back(std::move(b));
      accept_symbol(",");
    } while (peek().kind == Tok::Ident);
    expect_symbol(".");
    q.body = term();
    return make_term(kw.span, std::move(q));
  }

  TermPtr binary_right(TermPtr (Parser::*operand)(), TermPtr (Parser::*self)(),
                       std::initializer_list<std::pair<std::string_view, BinOp>> ops) {
    TermPtr lhs = (this->*operand)();
    for (auto& [sym, op] : ops) {
      if (is_symbol(sym)) {
        next();
        TermPtr rhs = (this->*self)();
        Span span = lhs->span;
        return make_term(span, node::Binary{op, std::move(lhs), std::move(rhs)});
      }
    }
    return lhs;
  }

  TermPtr implication() {
    return binary_right(&Parser::disjunction, &Parser::implication_rhs,
                        {{"->", BinOp::Implies}, {"<->", BinOp::Iff}});
  }
  TermPtr implication_rhs() { return term(); }

  TermPtr disjunction() {
    return binary_right(&Parser::conjunction, &Parser::disjunction_rhs,
                        {{"||", BinOp::Or}, {"\\/", BinOp::Or}});
  }
  TermPtr disjunction_rhs() { return prefix_or(&Parser::disjunction); }

  TermPtr conjunction() {
    return binary_right(&Parser::negation, &Parser::conjunction_rhs,
                        {{"&&", BinOp::And}, {"/\\", BinOp::And}});
  }
  TermPtr conjunction_rhs() { return prefix_or(&Parser::conjunction); }

  // A right operand may be a quantifier, which then extends to the end.
  TermPtr prefix_or(TermPtr (Parser::*level)()) {
    if (is_keyword("forall") || is_keyword("exists") || is_keyword("exists_")) return quantifier();
    return (this->*level)();
  }

  TermPtr negation() {
    if (is_keyword("not")) {
      Span span = next().span;
      return make_term(span, node::Not{prefix_or(&Parser::negation)});
    }
    return relation();
  }

  static bool rel_op(const Token& t, RelOp& out) {
    if (t.kind != Tok::Symbol) return false;
    static const std::array<std::pair<std::string_view, RelOp>, 6> table = {{
        {"=", RelOp::Eq}, {"<>", RelOp::Neq}, {"<", RelOp::Lt},
        {"<=", RelOp::Le}, {">", RelOp::Gt}, {">=", RelOp::Ge}}};
    for (auto& [s, op] : table) {
      if (t.text == s) {
        out = op;
        return true;
      }
    }
    return false;
  }

  TermPtr relation() {
    TermPtr first = append();
    node::Chain chain;
    RelOp op;
    while (rel_op(peek(), op)) {
      next();
      if (chain.operands.empty()) chain.operands.push_back(first);
      chain.ops.push_back(op);
      chain.operands.push_back(append());
    }
    if (chain.ops.empty()) return first;
    Span span = first->span;
    return make_term(span, std::move(chain));
  }

  TermPtr append() {
    return binary_right(&Parser::cons, &Parser::append, {{"@", BinOp::Append}});
  }

  TermPtr cons() { return binary_right(&Parser::additive, &Parser::cons, {{"::", BinOp::Cons}}); }

  TermPtr additive() {
    TermPtr lhs = multiplicative();
    while (is_symbol("+") || is_symbol("-")) {
      BinOp op = next().text == "+" ? BinOp::Add : BinOp::Sub;
      TermPtr rhs = multiplicative();
      Span span = lhs->span;
      lhs = make_term(span, node::Binary{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  TermPtr multiplicative() {
    TermPtr lhs = unary();
    while (is_symbol("*") || is_symbol("/") || is_keyword("mod")) {
      Token t = next();
      BinOp op = t.text == "*" ? BinOp::Mul : t.text == "/" ? BinOp::Div : BinOp::Mod;
      TermPtr rhs = unary();
      Span span = lhs->span;
      lhs = make_term(span, node::Binary{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  TermPtr unary() {
    if (is_symbol("-")) {
      Span span = next().span;
      return make_term(span, node::Neg{unary()});
    }
    return application();
  }

  bool starts_argument() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Ident:
      case Tok::UIdent:
        return true;
      case Tok::Keyword:
        return t.text == "true" || t.text == "false";
      case Tok::Symbol:
        return t.text == "(" || (t.text == "[" && t.space_before);
      default:
        return false;
    }
  }

  bool at_prefix_construct() const {
    return is_keyword("if") || is_keyword("let") || is_keyword("forall") ||
           is_keyword("exists") || is_keyword("exists_");
  }

  TermPtr application() {
    if (is_keyword("old")) {
      Span span = next().span;
      return make_term(span, node::Old{postfix()});
    }
    if (at_prefix_construct()) return prefix_construct();
    TermPtr head = postfix();
    std::vector<TermPtr> args;
    while (starts_argument()) args.push_back(postfix());
    if (args.empty()) return head;
    Span span = head->span;
    return make_term(span, node::Apply{std::move(head), std::move(args)});
  }

  TermPtr prefix_construct() {
    if (is_keyword("if")) {
      Span span = next().span;
      TermPtr c = term();
      expect_keyword("then");
      TermPtr a = term();
      expect_keyword("else");
      TermPtr b = term();
      return make_term(span, node::If{std::move(c), std::move(a), std::move(b)});
    }
    if (is_keyword("let")) {
      Span span = next().span;
      std::string name = expect_ident("a let-bound name").text;
      expect_symbol("=");
      TermPtr bound = term();
      expect_keyword("in");
      TermPtr body = term();
      return make_term(span, node::Let{std::move(name), std::move(bound), std::move(body)});
    }
    return quantifier();
  }

  TermPtr postfix() {
    TermPtr t = atom();
    while (true) {
      if (is_symbol(".") && (peek(1).kind == Tok::Ident || peek(1).kind == Tok::UIdent)) {
        next();
        std::string qualifier;
        while (peek().kind == Tok::UIdent) {
          if (!qualifier.empty()) qualifier += ".";
          qualifier += next().text;
          expect_symbol(".");
        }
        std::string field = expect_ident("a model field").text;
        Span span = t->span;
        t = make_term(span, node::Field{std::move(t), std::move(qualifier), std::move(field)});
      } else if (is_symbol("[") && !peek().space_before) {
        next();
        TermPtr idx = term();
        expect_symbol("]");
        Span span = t->span;
        t = make_term(span, node::Index{std::move(t), std::move(idx)});
      } else {
        return t;
      }
    }
  }

  TermPtr atom() {
    const Token& t = peek();
    Span span = t.span;
    switch (t.kind) {
      case Tok::Int: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) fail("integer literal out of range");
        next();
        return make_term(span, node::IntLit{v});
      }
      case Tok::Ident:
        return make_term(span, node::Var{next().text});
      case Tok::UIdent: {
        std::string name;
        while (peek().kind == Tok::UIdent) {
          name += next().text;
          name += expect_symbol(".").text;
        }
        name += expect_ident("a qualified identifier").text;
        return make_term(span, node::Var{std::move(name)});
      }
      case Tok::Keyword:
        if (t.text == "true" || t.text == "false") {
          bool v = next().text == "true";
          return make_term(span, node::BoolLit{v});
        }
        if (at_prefix_construct()) return prefix_construct();
        break;
      case Tok::Symbol:
        if (t.text == "(") {
          next();
          if (accept_symbol(")")) return make_term(span, node::UnitLit{});
          std::vector<TermPtr> items{term()};
          while (accept_symbol(",")) items.push_back(term());
          expect_symbol(")");
          if (items.size() == 1) return std::move(items.front());
          return make_term(span, node::Tuple{std::move(items)});
        }
        if (t.text == "[") {
          next();
          node::ListLit lit;
          if (!accept_symbol("]")) {
            lit.items.push_back(term());
            while (accept_symbol(";")) {
              if (is_symbol("]")) break;
              lit.items.push_back(term());
            }
            expect_symbol("]");
          }
          return make_term(span, std::move(lit));
        }
        break;
      default:
        break;
    }
    fail("expected a term");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SpecInterface parse_interface(std::string_view source, std::string file) {
  Parser p(Lexer(source, std::move(file)).run());
  return p.interface();
}

TermPtr parse_term(std::string_view source, std::string file) {
  Parser p(Lexer(source, std::move(file)).run());
  return p.standalone_term();
}

LogicalType parse_type(std::string_view source, std::string file) {
  Parser p(Lexer(source, std::move(file)).run());
  return p.standalone_type();
}

}  // namespace speclite
