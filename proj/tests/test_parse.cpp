#include "arbordyn/poly_parse.hpp"
#include "doctest.h"

using namespace arbordyn;
using namespace arbordyn::exactalg;

TEST_SUITE_BEGIN("parse");

TEST_CASE("expression grammar") {
    CHECK(parse_poly("1 - x^3") == PolyQ({Rat(1), Rat(0), Rat(0), Rat(-1)}));
    CHECK(parse_poly("(x^2-2)*(x-1)^3 + 5") ==
          PolyQ({Rat(-2), Rat(0), Rat(1)}) *
                  poly_pow(PolyQ({Rat(-1), Rat(1)}), 3) +
              PolyQ::constant(Rat(5)));
    CHECK(parse_poly("x") == PolyQ::variable());
    CHECK(parse_poly("  -x ^ 2 ") == -PolyQ::monomial(Rat(1), 2));
    CHECK(parse_poly("3x^2") == PolyQ::monomial(Rat(3), 2));
    CHECK(parse_poly("2(x+1)") == PolyQ({Rat(2), Rat(2)}));
    CHECK(parse_poly("x/2 + 1/2") == PolyQ({Rat(1, 2), Rat(1, 2)}));
    CHECK(parse_poly("x^2/3") == PolyQ({Rat(0), Rat(0), Rat(1, 3)}));
    CHECK(parse_poly("0") == PolyQ());
}

TEST_CASE("grammar errors") {
    CHECK_THROWS_AS(parse_poly("x +"), ParseError);
    CHECK_THROWS_AS(parse_poly("(x"), ParseError);
    CHECK_THROWS_AS(parse_poly("y + 1"), ParseError);
    CHECK_THROWS_AS(parse_poly("x/x"), ParseError);
    CHECK_THROWS_AS(parse_poly("1/0"), ParseError);
    CHECK_THROWS_AS(parse_poly(""), ParseError);
}

TEST_CASE("json coefficient arrays") {
    CHECK(parse_poly("[1, 0, 1]") == PolyQ({Rat(1), Rat(0), Rat(1)}));
    CHECK(parse_poly("[0, \"-3/2\", 1]") ==
          PolyQ({Rat(0), Rat(-3, 2), Rat(1)}));
    CHECK(parse_poly(" [1,0,0,-1]") ==
          PolyQ({Rat(1), Rat(0), Rat(0), Rat(-1)}));
    CHECK_THROWS_AS(parse_poly("[1, 0.5]"), ParseError);
    CHECK_THROWS_AS(parse_poly("[1, "), ParseError);
}

TEST_CASE("rational literals") {
    CHECK(parse_rational("-1/7") == Rat(-1, 7));
    CHECK(parse_rational("5") == Rat(5));
    CHECK(parse_rational("4/6") == Rat(2, 3));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("round trip through str") {
    for (const char* text : {"1 - x^3", "(x^2-2)*(x-1)^3 + 5", "x^2/3 + 1/2",
                             "x^17 - 3x^5 + 2x - 9"}) {
        PolyQ f = parse_poly(text);
        CHECK(parse_poly(f.str()) == f);
    }
}

TEST_SUITE_END();
