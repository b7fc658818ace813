#include "doctest.h"
#include "support.hpp"
#include "tmc/decomposition.hpp"
#include "tmc/ir.hpp"
#include "tmc/parser.hpp"

using namespace tmc;
using tmc::test::flat;

TEST_CASE("path rendering") {
    CHECK(to_string(Path{}) == "/");
    CHECK(to_string(Path{1, 2}) == "/1/2");
}

TEST_CASE("structural equality ignores spans") {
    auto a = parse_expr("(constr Cons x (call map f xs))");
    auto b = constr("Cons", {var("x"), call("map", {var("f"), var("xs")})});
    CHECK(equal(a, b));
    CHECK_FALSE(equal(a, constr("Cons", {var("x"), call("map", {var("f"), var("ys")})})));
    CHECK_FALSE(equal(call("f", {}, true), call("f", {}, false)));
}

TEST_CASE("subterm follows child numbering") {
    auto e = parse_expr("(match xs (case Nil (int 0)) (case (Cons y ys) (let z (int 1) (seq z y))))");
    REQUIRE(subterm(*e, {0}) != nullptr);
    CHECK(subterm(*e, {0})->as<Var>()->name == "xs");
    CHECK(subterm(*e, {1})->as<Int>()->value == 0);
    CHECK(subterm(*e, {2, 1, 1})->as<Var>()->name == "y");
    CHECK(subterm(*e, {3}) == nullptr);

    auto r = parse_expr("(letrec (fun g (x) x) (fun h (y) y) (call g (int 1)))");
    CHECK(subterm(*r, {1})->as<Var>()->name == "y");
    CHECK(subterm(*r, {2})->is<Call>());
}

TEST_CASE("pattern binders in order") {
    auto p = pconstr("Tuple", {pconstr("Cons", {pvar("h1"), pvar("t1")}), pwild(), pvar("l")});
    CHECK(pattern_binders(p) == std::vector<std::string>{"h1", "t1", "l"});
}

TEST_CASE("plain tail leaves stop at local function bodies") {
    auto e = parse_expr(
        "(let a (call f x) (match a (case Nil (call g a)) (case _ (letrec (fun k (z) (call g z)) (seq a (call k a))))))");
    auto calls = plain_tail_calls(*e);
    REQUIRE(calls.size() == 2);
    CHECK(calls[0]->as<Call>()->callee == "g");
    CHECK(calls[1]->as<Call>()->callee == "k");
}

TEST_CASE("identifiers cover names but not tags") {
    auto p = parse_program("(program (letrec (fun f (x) (let y x (constr K y)))) (main (call f (int 1))))");
    auto ids = identifiers(p);
    for (const char* n : {"f", "x", "y"}) CHECK(std::find(ids.begin(), ids.end(), n) != ids.end());
    CHECK(std::find(ids.begin(), ids.end(), "K") == ids.end());
}

TEST_CASE("plug: single hole is the identity") {
    Context c{CtxHole{}, {}};
    ExprPtr three = integer(3);
    CHECK(equal(plug(c, std::vector<ExprPtr>{three}), integer(3)));
}

TEST_CASE("plug: constructor context around a call") {
    auto inner = std::make_shared<const Context>(Context{CtxHole{}, {}});
    Context c{CtxConstr{"Cons", {var("y")}, inner, {}}, {}};
    ExprPtr filler = call("map", {var("f"), var("xs")});
    CHECK(flat(*plug(c, std::vector<ExprPtr>{filler})) == "(constr Cons y (call map f xs))");
}

TEST_CASE("plug: arity mismatch is an internal error") {
    auto hole_ctx = std::make_shared<const Context>(Context{CtxHole{}, {}});
    Context c{CtxMatch{var("x"), {CtxClause{pwild(), hole_ctx}, CtxClause{pwild(), hole_ctx}}}, {}};
    CHECK(hole_count(c) == 2);
    CHECK_THROWS_AS(plug(c, std::vector<ExprPtr>{integer(1)}), std::logic_error);
    CHECK_THROWS_AS(plug(c, std::vector<ExprPtr>{integer(1), integer(2), integer(3)}), std::logic_error);
    CHECK_NOTHROW(plug(c, std::vector<ExprPtr>{integer(1), integer(2)}));
}

TEST_CASE("constructor context plugs outermost first") {
    ConstrContext cc;
    cc.frames.push_back(ConstrFrame{"Cons", {var("y1")}, {}});
    cc.frames.push_back(ConstrFrame{"Cons", {var("y2")}, {}});
    CHECK(cc.frames[1].hole_index() == 2);
    CHECK(flat(*cc.plug(var("d"))) == "(constr Cons y1 (constr Cons y2 d))");
    CHECK(ConstrContext{}.empty());
}
