#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "msflow/acceptance.hpp"
#include "msflow/manifold.hpp"

using namespace msflow;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::MalformedSpec;
}

const char* kTwoPieces = R"({"pieces":[{"genus":0,"boundary":1,"fibers":[]},{"genus":0,"boundary":1,"fibers":[]}],
  "edges":[[0,0,1,0,[[0,1],[1,0]]]]})";

}  // namespace

TEST_CASE("parse_seifert examples") {
  const auto m = parse_seifert("g=2,e=3,fibers=5/2");
  CHECK(m.genus() == 2);
  CHECK(m.euler() == 3);
  REQUIRE(m.exceptional_count() == 1);
  CHECK(m.exceptional()[0] == SurgeryCoefficient(5, 2));

  const auto lens = parse_seifert("g=0,e=1");
  CHECK(lens.genus() == 0);
  CHECK(lens.euler() == 1);
  CHECK(lens.exceptional().empty());

  CHECK(kind_of([] { parse_seifert("g=1,e=0,fibers=1/2"); }) == ErrorKind::InvalidCoefficient);
  CHECK(kind_of([] { parse_seifert("g=1,e=0,fibers=0/1"); }) == ErrorKind::InvalidCoefficient);
  CHECK(kind_of([] { parse_seifert("g=1,e=0,fibers=4/2"); }) == ErrorKind::InvalidCoefficient);
  CHECK(kind_of([] { parse_seifert("g=1,e=0,fibers=3/0"); }) == ErrorKind::InvalidCoefficient);
  CHECK(kind_of([] { parse_seifert("genus=1,e=0"); }) == ErrorKind::MalformedSpec);
  CHECK(kind_of([] { parse_seifert("g=x,e=0"); }) == ErrorKind::MalformedSpec);
  CHECK(kind_of([] { parse_seifert("g=-1,e=0"); }) == ErrorKind::MalformedSpec);
  CHECK(kind_of([] { parse_seifert("g=1"); }) == ErrorKind::MalformedSpec);
}

TEST_CASE("parse_seifert and print_seifert round-trip") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> g(0, 6), e(-9, 9), n(0, 5), pq(-40, 40);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SurgeryCoefficient> fibers;
    const int count = n(rng);
    while (static_cast<int>(fibers.size()) < count) {
      const int p = pq(rng), q = pq(rng);
      try {
        fibers.emplace_back(p, q);
      } catch (const Error&) {
      }
    }
    const SeifertClosed m(g(rng), e(rng), fibers);
    const auto text = print_seifert(m);
    CHECK(parse_seifert(text) == m);
    CHECK(print_seifert(parse_seifert(text)) == text);
  }
}

TEST_CASE("parse_graph examples") {
  const auto g = parse_graph(kTwoPieces);
  CHECK(g.piece_count() == 2);
  CHECK(g.edges().size() == 1);
  CHECK(g.cycle_rank() == 0);

  CHECK(kind_of([] {
          parse_graph(R"({"pieces":[{"genus":0,"boundary":1},{"genus":0,"boundary":1}],
                          "edges":[[0,0,1,0,[[2,0],[0,1]]]]})");
        }) == ErrorKind::BadGluingMatrix);
  CHECK(kind_of([] {
          parse_graph(R"({"pieces":[{"genus":0,"boundary":2},{"genus":0,"boundary":1}],
                          "edges":[[0,0,1,0,[[0,1],[1,0]]]]})");
        }) == ErrorKind::UnmatchedBoundary);
  CHECK(kind_of([] {
          parse_graph(R"({"pieces":[{"genus":0,"boundary":2},{"genus":0,"boundary":2}],
                          "edges":[[0,0,0,1,[[0,1],[1,0]]],[1,0,1,1,[[0,1],[1,0]]]]})");
        }) == ErrorKind::DisconnectedGraph);
  CHECK(kind_of([] {
          parse_graph(R"({"pieces":[{"genus":0,"boundary":1},{"genus":0,"boundary":1}],
                          "edges":[[0,0,1,3,[[0,1],[1,0]]]]})");
        }) == ErrorKind::UnmatchedBoundary);
  CHECK(kind_of([] { parse_graph("{not json"); }) == ErrorKind::MalformedSpec);
  CHECK(kind_of([] { parse_graph(R"({"pieces":[{"genus":0,"boundary":0}],"edges":[]})"); }) ==
        ErrorKind::MalformedSpec);
}

TEST_CASE("graph manifolds: slot count and JSON round-trip") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_graph(rng);
    int slots = 0;
    for (const auto& p : g.pieces()) slots += p.boundary_count();
    CHECK(slots % 2 == 0);
    CHECK(slots == 2 * static_cast<int>(g.edges().size()));
    CHECK(parse_graph(print_graph(g)) == g);
    CHECK(graph_from_json(graph_to_json(g)) == g);
  }
}

TEST_CASE("validate_class examples") {
  const SeifertClosed m(1, 2);
  HomologyClassExpr c{CoeffVector::Constant(1, 3), CoeffVector::Constant(1, 2), CoeffVector(0)};
  CHECK_NOTHROW(validate_class(m, c));

  const SeifertClosed unit(0, 1);
  const HomologyClassExpr bad{CoeffVector(0), CoeffVector::Constant(1, 5), CoeffVector(0)};
  CHECK(kind_of([&] { validate_class(unit, bad); }) == ErrorKind::Alpha0NotAllowed);

  HomologyClassExpr wide{CoeffVector::Constant(2, 3), CoeffVector::Constant(1, 2), CoeffVector(0)};
  CHECK(kind_of([&] { validate_class(m, wide); }) == ErrorKind::DimensionMismatch);

  const SeifertPiece piece(0, 3, {{2, 1}});
  const auto pc = parse_class("alpha=2,3;tau=4,5");
  CHECK_NOTHROW(validate_class(piece, pc));
  CHECK(kind_of([&] { validate_class(piece, parse_class("alpha=2,3;tau=4")); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("class specs") {
  const auto c = parse_class("lambda=2,3;alpha=2,5;tau=4");
  CHECK(c.lambda == (CoeffVector(2) << 2, 3).finished());
  CHECK(c.alpha == (CoeffVector(2) << 2, 5).finished());
  CHECK(c.tau == (CoeffVector(1) << 4).finished());
  CHECK(parse_class(print_class(c)) == c);
  CHECK(class_from_json(class_to_json(c)) == c);
  CHECK(kind_of([] { parse_class("beta=1"); }) == ErrorKind::MalformedSpec);
  CHECK(kind_of([] { parse_class("alpha=1;alpha=2"); }) == ErrorKind::MalformedSpec);

  const auto gc = parse_graph_class("alpha=2|lambda=3;alpha=2|cycle=1,0");
  CHECK(gc.pieces.size() == 2);
  CHECK(gc.cycle == (CoeffVector(2) << 1, 0).finished());
  CHECK(kind_of([] { parse_graph_class("cycle=1|alpha=2"); }) == ErrorKind::MalformedSpec);

  const auto sum = c + c;
  CHECK(sum == 2 * c);
  CHECK((c + -c).is_zero());
}
