#include <gtest/gtest.h>

#include <cctype>

#include "speclite/parser.hpp"
#include "speclite/printer.hpp"
#include "test_support.hpp"

using namespace speclite;
using speclite::testing::corpus_files;
using speclite::testing::read_spec;

namespace {

template <class N>
const N& as(const TermPtr& t) {
  const N* n = std::get_if<N>(&t->node);
  if (!n) throw std::runtime_error("unexpected node kind in " + print_term(t));
  return *n;
}

}  // namespace

TEST(Parse, QueueInterfaceShape) {
  SpecInterface s = parse_interface(read_spec("queue.mli.spec"));
  ASSERT_EQ(s.type_decls.size(), 1u);
  ASSERT_EQ(s.type_decls[0].models.size(), 1u);
  EXPECT_EQ(s.type_decls[0].models[0].name, "elems");
  EXPECT_TRUE(s.type_decls[0].models[0].is_mutable);
  EXPECT_EQ(s.type_decls[0].models[0].type, LogicalType::list(LogicalType::var("'a")));
  EXPECT_EQ(s.val_decls.size(), 5u);
  ASSERT_EQ(s.exn_decls.size(), 1u);
  EXPECT_EQ(s.exn_decls[0].name, "Empty");
  const ValDecl* pop = s.find_val("pop");
  ASSERT_TRUE(pop && pop->contract);
  EXPECT_EQ(pop->contract->header.results, std::vector<std::string>{"x"});
  ASSERT_EQ(pop->contract->raises.size(), 1u);
  EXPECT_EQ(pop->contract->raises[0].exception, "Empty");
  const ValDecl* transfer = s.find_val("transfer");
  ASSERT_TRUE(transfer && transfer->contract);
  ASSERT_EQ(transfer->contract->modifies.size(), 2u);
  EXPECT_EQ(transfer->contract->modifies[1].name, "q2");
}

TEST(Parse, EmptyInput) {
  EXPECT_TRUE(parse_interface("").empty());
  EXPECT_TRUE(parse_interface("  (* just a comment *)\n").empty());
  EXPECT_EQ(pretty_print(SpecInterface{}), "");
}

TEST(Parse, SplitPopContract) {
  SpecInterface s = parse_interface(read_spec("queue_ortac.mli.spec"));
  const ValDecl* pop = s.find_val("pop");
  ASSERT_TRUE(pop && pop->contract);
  EXPECT_EQ(pop->contract->postconditions.size(), 2u);
  EXPECT_EQ(pop->contract->raises.size(), 1u);
  ASSERT_EQ(pop->contract->modifies.size(), 1u);
  EXPECT_EQ(pop->contract->modifies[0].field, std::optional<std::string>("elems"));
  // t.elems = if ... then [] else List.tl (old t.elems)
  const auto& chain = as<node::Chain>(pop->contract->postconditions[0]);
  ASSERT_EQ(chain.operands.size(), 2u);
  const auto& ite = as<node::If>(chain.operands[1]);
  const auto& tl = as<node::Apply>(ite.else_branch);
  EXPECT_EQ(as<node::Var>(tl.fn).name, "List.tl");
  EXPECT_NO_THROW(as<node::Old>(tl.args.at(0)));
}

TEST(Parse, OptionalParameterMarker) {
  SpecInterface s = parse_interface(read_spec("hashtbl.mli.spec"));
  const ValDecl* create = s.find_val("create");
  ASSERT_TRUE(create);
  ASSERT_EQ(create->params.size(), 2u);
  EXPECT_EQ(create->params[0].label, ParamLabel::Optional);
  EXPECT_EQ(create->params[0].label_name, "random");
  EXPECT_EQ(create->params[0].type, LogicalType::boolean());
  ASSERT_EQ(create->contract->header.args.size(), 2u);
  EXPECT_EQ(create->contract->header.args[0].kind, HeaderArg::Kind::Optional);
  SpecInterface again = parse_interface(pretty_print(s));
  EXPECT_EQ(again.find_val("create")->params[0].label, ParamLabel::Optional);
  EXPECT_EQ(s, again);
  ASSERT_EQ(s.type_decls[0].params.size(), 2u);
  EXPECT_TRUE(s.type_decls[0].params[0].injective);
}

TEST(Parse, GraphPredicates) {
  SpecInterface s = parse_interface(read_spec("graph.mli.spec"));
  ASSERT_EQ(s.logic_decls.size(), 3u);
  const LogicDecl* is_path = s.find_logic("is_path");
  ASSERT_TRUE(is_path && is_path->body);
  EXPECT_EQ(is_path->params.size(), 4u);
  EXPECT_EQ(is_path->params[2].type, LogicalType::seq(LogicalType::named("V.t")));
  const TypeDecl* gt = s.find_type("gt");
  ASSERT_TRUE(gt && gt->invariant);
  EXPECT_EQ(gt->find_model("succ")->type,
            LogicalType::arrow(LogicalType::named("V.t"),
                               LogicalType::fset(LogicalType::named("V.t"))));
  const auto& q = as<node::Quantifier>(gt->invariant->body);
  EXPECT_EQ(q.binders.size(), 2u);
  const auto& has_path = as<node::Quantifier>(*s.find_logic("has_path")->body);
  EXPECT_EQ(has_path.kind, Quant::Exists);
}

TEST(Parse, RoundTripCorpus) {
  for (const auto& f : corpus_files()) {
    SCOPED_TRACE(f);
    SpecInterface a = parse_interface(read_spec(f), f);
    std::string text = pretty_print(a);
    SpecInterface b = parse_interface(text);
    EXPECT_EQ(a, b) << text;
    EXPECT_EQ(pretty_print(b), text);
  }
}

TEST(Parse, Deterministic) {
  for (const auto& f : corpus_files()) {
    std::string src = read_spec(f);
    EXPECT_EQ(parse_interface(src), parse_interface(src));
  }
}

TEST(Parse, Precedence) {
  auto t = parse_term("a -> b || c && not d = e :: f @ g");
  const auto& imp = as<node::Binary>(t);
  EXPECT_EQ(imp.op, BinOp::Implies);
  const auto& disj = as<node::Binary>(imp.rhs);
  EXPECT_EQ(disj.op, BinOp::Or);
  const auto& conj = as<node::Binary>(disj.rhs);
  EXPECT_EQ(conj.op, BinOp::And);
  const auto& neg = as<node::Not>(conj.rhs);
  const auto& eq = as<node::Chain>(neg.body);
  const auto& app = as<node::Binary>(eq.operands[1]);
  EXPECT_EQ(app.op, BinOp::Append);
  EXPECT_EQ(as<node::Binary>(app.lhs).op, BinOp::Cons);

  TermPtr t1 = parse_term("1 - 2 - 3 * 4");
  const auto& arith = as<node::Binary>(t1);
  EXPECT_EQ(arith.op, BinOp::Sub);
  EXPECT_EQ(as<node::Binary>(arith.lhs).op, BinOp::Sub);
  EXPECT_EQ(as<node::Binary>(arith.rhs).op, BinOp::Mul);

  TermPtr t2 = parse_term("a -> b -> c");
  const auto& right = as<node::Binary>(t2);
  EXPECT_EQ(as<node::Var>(right.lhs).name, "a");
  EXPECT_EQ(as<node::Binary>(right.rhs).op, BinOp::Implies);
}

TEST(Parse, IndexNeedsAdjacentBracket) {
  TermPtr t3 = parse_term("edge l[i] l[i+1] g");
  const auto& idx = as<node::Apply>(t3);
  ASSERT_EQ(idx.args.size(), 3u);
  EXPECT_NO_THROW(as<node::Index>(idx.args[0]));
  TermPtr t4 = parse_term("f [x]");
  const auto& lst = as<node::Apply>(t4);
  EXPECT_NO_THROW(as<node::ListLit>(lst.args[0]));
}

TEST(Parse, QualifiedFieldAndOld) {
  TermPtr t5 = parse_term("g.G.dom");
  const auto& f = as<node::Field>(t5);
  EXPECT_EQ(f.qualifier, "G");
  EXPECT_EQ(f.field, "dom");
  TermPtr t6 = parse_term("old (q2.elems @ q1.elems)");
  const auto& old = as<node::Old>(t6);
  EXPECT_EQ(as<node::Binary>(old.body).op, BinOp::Append);
  TermPtr t7 = parse_term("old q.elems");
  const auto& oq = as<node::Old>(t7);
  EXPECT_NO_THROW(as<node::Field>(oq.body));
}

TEST(Parse, TermRoundTrip) {
  const char* terms[] = {
      "forall i. 0 <= i < len - 1 -> edge l[i] l[i+1] g",
      "(forall x. p x) && q",
      "if a then (forall x: int. x = x) else false",
      "let n = Seq.length l in n + 1 = 2 * n",
      "not (a = b) || - x < 3",
      "(a, b) :: [c; (d, e)]",
      "f (g x) y.m [1; 2] l[0]",
      "x :: (a @ b) = (c :: d) @ e",
      "(a -> b) -> c <-> d",
      "exists w. Seq.mem w q.Queue.elems /\\ reachable w v2 graph",
      "old t.elems = [] = t.elems",
      "(a = b) = c",
      "- - 3 mod 2",
  };
  for (const char* src : terms) {
    SCOPED_TRACE(src);
    TermPtr a = parse_term(src);
    std::string printed = print_term(a);
    TermPtr b = parse_term(printed);
    EXPECT_TRUE(a == b) << printed;
  }
}

TEST(Parse, TypeSyntax) {
  EXPECT_EQ(parse_type("('a * 'b) list").to_string(), "('a * 'b) list");
  EXPECT_EQ(parse_type("V.t -> V.t fset").to_string(), "V.t -> V.t fset");
  EXPECT_EQ(parse_type("(int -> int) -> int").to_string(), "(int -> int) -> int");
  EXPECT_EQ(parse_type("('a, 'b) t"), LogicalType::named("t", {LogicalType::var("'a"), LogicalType::var("'b")}));
  EXPECT_THROW(parse_type("list"), ParseError);
}

TEST(ParseErrors, ReportPosition) {
  try {
    parse_interface("type 'a t\n(*@ mutable model elems 'a list *)\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 2);
    EXPECT_EQ(e.span().column, 25);
    EXPECT_NE(e.message().find("expected ':'"), std::string::npos) << e.message();
  }
  EXPECT_THROW(parse_interface("val f : int\n(*@ f x"), ParseError);
  EXPECT_THROW(parse_interface("val f : int -> int\n(*@ r = f x modifies x.a.b *)"), ParseError);
  EXPECT_THROW(parse_interface("(*@ ensures true *)"), ParseError);
  EXPECT_THROW(parse_interface("val f : int $"), ParseError);
  EXPECT_THROW(parse_term("a +"), ParseError);
}

namespace {

struct Chunk {
  std::size_t offset;
  std::size_t length;
  int line;
  int column;
};

std::vector<Chunk> chunks(const std::string& src) {
  std::vector<Chunk> out;
  int line = 1, col = 1;
  for (std::size_t i = 0; i < src.size();) {
    if (std::isspace(static_cast<unsigned char>(src[i]))) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < src.size() && !std::isspace(static_cast<unsigned char>(src[j]))) ++j;
    out.push_back({i, j - i, line, col});
    col += static_cast<int>(j - i);
    i = j;
  }
  return out;
}

bool at_or_after(const Span& s, const Chunk& c) {
  return s.line > c.line || (s.line == c.line && s.column >= c.column);
}

}  // namespace

// Corrupting one whitespace-separated chunk never produces an error that
// points before the corruption.
TEST(ParseErrors, Locality) {
  const char* replacements[] = {"", ")", "val", "*)", "(*@", "->", "=", "["};
  int errors_seen = 0;
  for (const auto& f : corpus_files()) {
    std::string src = read_spec(f);
    for (const Chunk& c : chunks(src)) {
      for (const char* r : replacements) {
        std::string corrupted = src.substr(0, c.offset) + r + src.substr(c.offset + c.length);
        try {
          parse_interface(corrupted, f);
        } catch (const ParseError& e) {
          ++errors_seen;
          EXPECT_TRUE(at_or_after(e.span(), c))
              << f << ": replacing chunk at " << c.line << ":" << c.column << " with '" << r
              << "' reported " << e.what();
        }
      }
    }
  }
  EXPECT_GT(errors_seen, 500);
}
