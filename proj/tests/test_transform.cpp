#include "doctest.h"
#include "support.hpp"
#include "tmc/runtime.hpp"
#include "tmc/transform.hpp"

using namespace tmc;
using tmc::test::flat;
using tmc::test::load_corpus;
using tmc::test::read_text;
using tmc::test::tests_path;

namespace {

Program transform_ok(const Program& p, const TransformOptions& options = {}) {
    auto r = transform_program(p, options);
    REQUIRE(r.program.has_value());
    return *r.program;
}

const FunDef& fun(const Program& p, const std::string& name) {
    for (const auto& g : p.groups)
        for (const auto& f : g)
            if (f.name == name) return f;
    throw std::out_of_range(name);
}

}  // namespace

TEST_CASE("fresh names count per base and skip used identifiers") {
    FreshNamer n({"y0", "dst"});
    CHECK(fresh("dst", n) == "dst0");
    CHECK(fresh("dst", n) == "dst1");
    CHECK(fresh("y", n) == "y1");
    CHECK(fresh("y", n) == "y2");
    CHECK(fresh("idx", n) == "idx0");
}

TEST_CASE("map matches the frozen golden") {
    Program t = transform_ok(load_corpus("map.tmc"));
    CHECK(print_program(t) + "\n" == read_text(tests_path("golden/map_transformed.tmc")));
}

TEST_CASE("map rule trace") {
    std::vector<std::string> trace;
    TransformOptions options;
    options.rule_trace = &trace;
    transform_ok(load_corpus("map.tmc"), options);
    CHECK(trace == std::vector<std::string>{
                       "Direct-Match map:/",
                       "Direct-Hole map:/1",
                       "Direct-Let map:/2",
                       "Direct-Constr map:/2/1",
                       "DPS-Constr-Opt map:/2/1",
                       "DPS-Reify map:/2/1/1",
                       "DPS-Hole-Call map:/2/1/1",
                       "DPS-Match map_dps:/",
                       "DPS-Hole-Opt map_dps:/1",
                       "DPS-Let map_dps:/2",
                       "DPS-Constr-Opt map_dps:/2/1",
                       "DPS-Reify map_dps:/2/1/1",
                       "DPS-Hole-Call map_dps:/2/1/1",
                   });
}

TEST_CASE("umap writes both cells with one setref") {
    Program t = transform_ok(load_corpus("umap.tmc"));
    std::string dps = flat(*fun(t, "umap_dps").body);
    CHECK(dps.find("(let dst1 (constr Cons y2 (hole)) (seq (setref dst0 idx0 (constr Cons y1 dst1)) "
                   "(call umap_dps dst1 (int 2) f xs)))") != std::string::npos);
}

TEST_CASE("umap without compression writes every cell") {
    TransformOptions options;
    options.compression = false;
    Program t = transform_ok(load_corpus("umap.tmc"), options);
    std::string dps = flat(*fun(t, "umap_dps").body);
    CHECK(dps.find("(constr Cons y1 (hole))") != std::string::npos);
    CHECK(dps.find("(constr Cons y2 (hole))") != std::string::npos);
    CHECK(dps.find("(setref dst0 idx0 (constr Nil))") != std::string::npos);
}

TEST_CASE("annotated tree map makes the right child a tail call") {
    Program t = transform_ok(load_corpus("tree_map.tmc"));
    const FunDef& dps = fun(t, "tree_map_dps");
    CHECK(dps.params == std::vector<std::string>{"dst0", "idx0", "f", "t"});
    bool found = false;
    for (const Expr* c : plain_tail_calls(*dps.body)) {
        auto* call = c->as<Call>();
        if (call->callee == "tree_map_dps" && call->args.at(1)->as<Int>() && call->args[1]->as<Int>()->value == 3)
            found = true;
    }
    CHECK(found);
}

TEST_CASE("outputs carry no attributes") {
    for (const char* name : {"map.tmc", "tree_map.tmc", "flatten_nested.tmc", "map_tail.tmc"}) {
        CAPTURE(name);
        std::string text = print_program(transform_ok(load_corpus(name)));
        CHECK(text.find("(@") == std::string::npos);
    }
}

TEST_CASE("programs without marks are unchanged") {
    const char* text =
        "(program\n  (letrec\n    (fun len (xs)\n      (match xs (case Nil (int 0)) (case (Cons x r) (call add (int 1) "
        "(call len r))))))\n  (main (call len (constr Nil))))";
    Program p = parse_program(text);
    Program t = transform_ok(p);
    CHECK(print_program(t) == print_program(p));
}

TEST_CASE("call from main keeps the direct call") {
    Program p = load_corpus("scope_main.tmc");
    Program t = transform_ok(p);
    CHECK(equal(t.main, p.main));
}

TEST_CASE("nested marked group gets a companion in both bodies") {
    Program t = transform_ok(load_corpus("flatten_nested.tmc"));
    std::string direct = flat(*fun(t, "flatten").body);
    std::string dps = flat(*fun(t, "flatten_dps").body);
    CHECK(direct.find("(fun append_flatten_dps (") != std::string::npos);
    CHECK(dps.find("(fun append_flatten_dps (") != std::string::npos);
    CHECK(dps.find("(call append_flatten_dps dst0 idx0 xs rest)") != std::string::npos);
}

TEST_CASE("companions are dps-shaped") {
    for (const char* name : {"map.tmc", "filter.tmc", "merge.tmc", "umap.tmc", "tree_map.tmc", "map_tail.tmc",
                             "flatten_nested.tmc", "flatten_mutual.tmc", "effects.tmc"}) {
        CAPTURE(name);
        Program p = load_corpus(name);
        Program t = transform_ok(p);
        MarkSet marks = collect_marks(p);
        std::set<std::string> dps;
        for (const auto& [f, d] : marks.dps_name) dps.insert(d);
        for (const auto& g : t.groups)
            for (const auto& f : g)
                if (dps.count(f.name)) CHECK(is_dps_shaped(*f.body, dps));
    }
}

TEST_CASE("is_dps_shaped") {
    std::set<std::string> names{"f_dps"};
    CHECK(is_dps_shaped(*parse_expr("(match x (case A (setref d i 1)) (case _ (call f_dps d i x)))"), names));
    CHECK_FALSE(is_dps_shaped(*parse_expr("(let y 1 y)"), names));
    CHECK_FALSE(is_dps_shaped(*parse_expr("(call g d i x)"), names));
}

TEST_CASE("analysis errors yield no program") {
    auto r = transform_program(load_corpus("tree_map_ambiguous.tmc"));
    CHECK_FALSE(r.program.has_value());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].code == DiagCode::AmbiguousTmc);
}

TEST_CASE("warnings still yield a program") {
    auto r = transform_program(load_corpus("useless_mark.tmc"));
    CHECK(r.program.has_value());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].severity == Severity::Warning);
}

TEST_CASE("constructor siblings shadowed by an inner binder are hoisted") {
    Program p = parse_program(
        "(program (letrec (fun (@ tail_mod_cons) f (n x) (constr K x (let x (int 1) (call f (call sub n x) x))))) "
        "(main 0))");
    Program t = transform_ok(p);
    std::string dps = flat(*fun(t, "f_dps").body);
    CHECK(dps.find("(let y0 x") != std::string::npos);
    CHECK(dps.find("(constr K y0 (hole))") != std::string::npos);
}
