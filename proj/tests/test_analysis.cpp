#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "tmc/analysis.hpp"

using namespace tmc;
using tmc::test::load_corpus;

namespace {

const Diagnostic* find(const Analysis& a, DiagCode code) {
    for (const auto& d : a.diagnostics)
        if (d.code == code) return &d;
    return nullptr;
}

const Expr* find_call(const Expr& e, const std::string& callee) {
    if (auto* c = e.as<Call>(); c && c->callee == callee) return &e;
    for (std::uint32_t i = 0;; ++i) {
        const Expr* s = subterm(e, {i});
        if (!s) return nullptr;
        if (const Expr* r = find_call(*s, callee)) return r;
    }
}

}  // namespace

TEST_CASE("marks and companion names") {
    auto p = parse_program(
        "(program (letrec (fun (@ tail_mod_cons) f (x) x) (fun g (x) x)) (letrec (fun h_dps (a) a) "
        "(fun (@ tail_mod_cons) h (x) x)) (main 0))");
    MarkSet m = collect_marks(p);
    CHECK(m.is_marked("f"));
    CHECK_FALSE(m.is_marked("g"));
    CHECK(m.dps_of("f") == "f_dps");
    CHECK(m.dps_of("h") == "h_dps2");
}

TEST_CASE("map decomposes into a match with one strict hole") {
    Program p = load_corpus("map.tmc");
    Analysis a = analyze(p);
    CHECK_FALSE(has_errors(a.diagnostics));
    REQUIRE(a.decompositions.count("map"));
    const Decomposition& d = a.decompositions.at("map");
    CHECK(d.context->as<CtxMatch>());
    REQUIRE(d.holes.size() == 2);
    CHECK(d.holes[0].kind == HoleKind::PlainTail);
    CHECK(d.holes[1].kind == HoleKind::StrictModCons);
    CHECK(d.holes[1].path == Path{2, 1, 1});
    CHECK(d.chosen_constructor_paths == std::vector<Path>{Path{2, 1}});
    CHECK(equal(plug(d), p.groups[0][0].body));
}

TEST_CASE("calls from main are out of scope") {
    Program p = load_corpus("scope_main.tmc");
    Analysis a = analyze(p);
    const Expr* c = find_call(*p.main, "map");
    REQUIRE(c);
    CHECK(a.scope.at(c) == Eligibility::NotEligible);
    const Expr* inner = find_call(*p.groups[0][0].body, "map");
    REQUIRE(inner);
    CHECK(a.scope.at(inner) == Eligibility::RewriteEligible);
}

TEST_CASE("nested group call inside a marked body is in scope") {
    Program p = load_corpus("flatten_nested.tmc");
    Analysis a = analyze(p);
    CHECK_FALSE(has_errors(a.diagnostics));
    const Expr* body = p.groups[0][0].body.get();
    const Expr* post = subterm(*body, {2, 1});
    REQUIRE(post);
    REQUIRE(post->as<Call>());
    CHECK(post->as<Call>()->callee == "append_flatten");
    CHECK(a.scope.at(post) == Eligibility::RewriteEligible);
    CHECK(a.decompositions.count("append_flatten"));
}

TEST_CASE("unmarked caller outside the group is not eligible") {
    auto p = parse_program(
        "(program (letrec (fun (@ tail_mod_cons) f (x) (constr K (call f x)))) "
        "(letrec (fun g (x) (constr K (call f x)))) (main 0))");
    Analysis a = analyze(p);
    const Expr* c = find_call(*p.groups[1][0].body, "f");
    REQUIRE(c);
    CHECK(a.scope.at(c) == Eligibility::NotEligible);
}

TEST_CASE("ambiguous constructor lists both candidates") {
    Analysis a = analyze(load_corpus("tree_map_ambiguous.tmc"));
    const Diagnostic* d = find(a, DiagCode::AmbiguousTmc);
    REQUIRE(d);
    CHECK(d->severity == Severity::Error);
    CHECK(d->root == "tree_map");
    CHECK(d->candidate_paths == std::vector<Path>{Path{2, 0}, Path{2, 2}});
}

TEST_CASE("annotation resolves the ambiguity") {
    Analysis a = analyze(load_corpus("tree_map.tmc"));
    CHECK_FALSE(has_errors(a.diagnostics));
    const Decomposition& d = a.decompositions.at("tree_map");
    REQUIRE(d.holes.size() == 2);
    CHECK(d.holes[1].path == Path{2, 2});
    CHECK(d.holes[1].kind == HoleKind::StrictModCons);
}

TEST_CASE("unsatisfiable tailcall annotations") {
    auto inside = analyze(parse_program(
        "(program (letrec (fun (@ tail_mod_cons) f (x) (constr K (call (@ tailcall) f x) (call add1 x)))) "
        "(letrec (fun g (x) (let y (call (@ tailcall) g x) y))) (main 0))"));
    const Diagnostic* d = find(inside, DiagCode::TailcallNotSatisfiable);
    REQUIRE(d);
    CHECK(d->severity == Severity::Warning);
    CHECK(d->root == "g");

    auto marked = analyze(parse_program(
        "(program (letrec (fun (@ tail_mod_cons) f (x) (constr K (call f x) (let z (call (@ tailcall) add1 x) z)))) "
        "(main 0))"));
    const Diagnostic* e = find(marked, DiagCode::TailcallNotSatisfiable);
    REQUIRE(e);
    CHECK(e->severity == Severity::Error);
}

TEST_CASE("useless mark is a warning") {
    Analysis a = analyze(load_corpus("useless_mark.tmc"));
    const Diagnostic* d = find(a, DiagCode::UselessMark);
    REQUIRE(d);
    CHECK(d->severity == Severity::Warning);
    CHECK_FALSE(has_errors(a.diagnostics));
}

TEST_CASE("mark shared across a group is not useless") {
    auto a = analyze(parse_program(
        "(program (letrec (fun (@ tail_mod_cons) even (n) (match n (case 0 (constr Nil)) (case _ (call odd (call sub n 1))))) "
        "(fun (@ tail_mod_cons) odd (n) (constr Cons n (call even (call sub n 1))))) (main 0))"));
    CHECK(find(a, DiagCode::UselessMark) == nullptr);
}

TEST_CASE("two marked functions may not share a name") {
    auto a = analyze(parse_program(
        "(program (letrec (fun (@ tail_mod_cons) f (x) (seq (letrec (fun (@ tail_mod_cons) g (y) y) (call g x)) "
        "(letrec (fun (@ tail_mod_cons) g (y) y) (call g x))))) (main 0))"));
    CHECK(find(a, DiagCode::DuplicateFunction) != nullptr);
}
