#include <catch_amalgamated.hpp>

#include "nbsat/cnf.hpp"

using namespace nbsat;

TEST_CASE("Lit basics") {
  const Lit a(3), na(-3);
  CHECK(a.var() == 3);
  CHECK(a.positive());
  CHECK(na.var() == 3);
  CHECK_FALSE(na.positive());
  CHECK(-a == na);
  CHECK_THROWS_AS(Lit(0), std::invalid_argument);
}

TEST_CASE("Formula validates its clauses") {
  CHECK_NOTHROW(Formula(3, {{Lit(1), Lit(-2)}, {Lit(3)}}));
  CHECK_THROWS_AS(Formula(2, {{Lit(3)}}), std::invalid_argument);
  CHECK_THROWS_AS(Formula(2, {{Lit(1), Lit(1)}}), std::invalid_argument);
  CHECK_THROWS_AS(Formula(2, {{Lit(1), Lit(-1)}}), std::invalid_argument);
  CHECK_NOTHROW(Formula(2, {Clause{}}));  // empty clause is legal, just UNSAT
}

TEST_CASE("parse_dimacs round trip") {
  const std::string text = "c a comment\np cnf 4 2\n1 2 -3 0\n-2 3 4 0\n";
  const Formula f = parse_dimacs(text);
  CHECK(f.num_vars() == 4);
  REQUIRE(f.clauses().size() == 2);
  CHECK(f.clauses()[0] == Clause{Lit(1), Lit(2), Lit(-3)});
  CHECK(f.clauses()[1] == Clause{Lit(-2), Lit(3), Lit(4)});
  CHECK(parse_dimacs(write_dimacs(f)) == f);
}

TEST_CASE("parse_dimacs tolerates layout variety") {
  // clauses split across lines and sharing lines
  const Formula f = parse_dimacs("p cnf 3 2\n1\n2 0 -1\n-2 3 0\n");
  REQUIRE(f.clauses().size() == 2);
  CHECK(f.clauses()[0].size() == 2);
  CHECK(f.clauses()[1].size() == 3);

  // '%' trailer used by some archives
  const Formula g = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n");
  CHECK(g.clauses().size() == 1);
}

TEST_CASE("parse_dimacs cleans duplicates and tautologies") {
  ParseStats stats;
  const Formula f =
      parse_dimacs("p cnf 3 3\n1 1 2 0\n1 -1 3 0\n2 3 0\n", &stats);
  CHECK(f.clauses().size() == 2);  // tautology dropped
  CHECK(f.clauses()[0] == Clause{Lit(1), Lit(2)});
  CHECK(stats.duplicate_literals_removed == 1);
  CHECK(stats.tautologies_dropped == 1);
}

TEST_CASE("parse_dimacs rejects malformed input") {
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);              // no header
  CHECK_THROWS_AS(parse_dimacs("p cnf x 2\n"), ParseError);          // bad header
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1 junk\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);     // missing 0
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), ParseError);     // count mismatch
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);   // out of range
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 two 0\n"), ParseError); // bad token
}

TEST_CASE("write_dimacs includes comments") {
  const Formula f(2, {{Lit(1), Lit(-2)}});
  const std::string out = write_dimacs(f, {"hello"});
  CHECK(out == "c hello\np cnf 2 1\n1 -2 0\n");
}

TEST_CASE("satisfies checks a 1-based model") {
  const Formula f(3, {{Lit(1), Lit(2)}, {Lit(-3)}});
  CHECK(satisfies(f, {false, true, false, false}));
  CHECK_FALSE(satisfies(f, {false, false, false, false}));
  CHECK_FALSE(satisfies(f, {false, true, false, true}));
}
