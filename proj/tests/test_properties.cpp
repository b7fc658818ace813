// Randomized properties over hand-rolled generators. Each case runs a fixed
// range of seeds so failures are reproducible.

#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "tmc/analysis.hpp"
#include "tmc/runtime.hpp"
#include "tmc/transform.hpp"
#include "tmc/well_formed.hpp"

using namespace tmc;
using tmc::test::ExprGen;
using tmc::test::TmcProgramGen;

namespace {

bool is_proper_prefix(const Path& a, const Path& b) {
    return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
}

Program transform_ok(const Program& p) {
    auto r = transform_program(p);
    REQUIRE_MESSAGE(r.program.has_value(), print_program(p));
    return *r.program;
}

std::vector<Value> int_args(std::int64_t n, std::int64_t a) { return {Value::integer(n), Value::integer(a)}; }

}  // namespace

TEST_CASE("printing then parsing is the identity") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        CAPTURE(seed);
        Program p = ExprGen(seed).program(4);
        std::string text = print_program(p);
        Program q = parse_program(text);
        CHECK(p == q);
        CHECK(print_program(q) == text);
    }
}

TEST_CASE("expression printing round trips") {
    for (std::uint64_t seed = 1000; seed < 1300; ++seed) {
        CAPTURE(seed);
        ExprPtr e = ExprGen(seed).expr(5);
        CHECK(equal(parse_expr(print_expr(*e)), e));
    }
}

TEST_CASE("generated programs are well formed") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        CAPTURE(seed);
        Program p = TmcProgramGen(seed, seed % 2 == 1).program();
        CHECK(well_formed(p).empty());
    }
}

TEST_CASE("decompositions plug back and classify holes") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        CAPTURE(seed);
        Program p = TmcProgramGen(seed, seed % 2 == 1).program();
        Analysis a = analyze(p);
        REQUIRE_FALSE(has_errors(a.diagnostics));
        for (const auto& f : p.groups[0]) {
            CAPTURE(f.name);
            auto it = a.decompositions.find(f.name);
            if (it == a.decompositions.end()) continue;
            const Decomposition& d = it->second;
            CHECK(equal(plug(d), f.body));
            CHECK(hole_count(*d.context) == d.holes.size());

            std::size_t candidates_in_holes = 0;
            for (const auto& h : d.holes) {
                const Expr* at = subterm(*f.body, h.path);
                REQUIRE(at);
                CHECK(at == h.expr.get());
                bool under_constr = std::any_of(d.chosen_constructor_paths.begin(), d.chosen_constructor_paths.end(),
                                                [&](const Path& c) { return is_proper_prefix(c, h.path); });
                CHECK((h.kind == HoleKind::StrictModCons) == under_constr);
                // Maximal: a hole is a candidate call or holds no candidate at all.
                if (is_candidate_call(*h.expr, a.marks, a.scope))
                    ++candidates_in_holes;
                else
                    CHECK_FALSE(has_candidate(*h.expr, a.marks, a.scope));
            }
            if (!candidate_calls(*f.body, a.marks, a.scope).empty()) CHECK(candidates_in_holes > 0);
        }
    }
}

TEST_CASE("transformed programs are well formed and stable") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        CAPTURE(seed);
        Program p = TmcProgramGen(seed, seed % 2 == 1).program();
        Program t = transform_ok(p);
        CHECK(well_formed(t).empty());
        // The output has no marks left, so a second pass changes nothing.
        CHECK(transform_ok(t) == t);
        CHECK(print_program(t).find("(@") == std::string::npos);
    }
}

TEST_CASE("transformation preserves values and effect order") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        CAPTURE(seed);
        Program p = TmcProgramGen(seed, false).program();
        Program t = transform_ok(p);
        for (std::int64_t n = 0; n <= 6; n += 3) {
            Machine ma(p), mb(t), mc(t);
            Outcome a = eval(ma, "walk", int_args(n, 2));
            Outcome b = eval(mb, "walk", int_args(n, 2));
            REQUIRE_FALSE(a.error);
            REQUIRE_FALSE(b.error);
            CHECK(struct_eq(ma.store(), *a.value, mb.store(), *b.value));
            CHECK(a.metrics.effect_trace == b.metrics.effect_trace);

            Value c = mc.call_into_scratch("walk_dps", int_args(n, 2));
            CHECK(struct_eq(ma.store(), *a.value, mc.store(), c));
        }
    }
}

TEST_CASE("constructor effects may reorder but are all kept") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        CAPTURE(seed);
        Program p = TmcProgramGen(seed, true).program();
        Program t = transform_ok(p);
        for (std::int64_t n = 0; n <= 6; n += 3) {
            Machine ma(p), mb(t);
            Outcome a = eval(ma, "walk", int_args(n, -1));
            Outcome b = eval(mb, "walk", int_args(n, -1));
            REQUIRE_FALSE(a.error);
            REQUIRE_FALSE(b.error);
            CHECK(struct_eq(ma.store(), *a.value, mb.store(), *b.value));
            auto x = a.metrics.effect_trace;
            auto y = b.metrics.effect_trace;
            std::sort(x.begin(), x.end());
            std::sort(y.begin(), y.end());
            CHECK(x == y);
        }
    }
}

TEST_CASE("transformed calls never leave or overwrite holes") {
    std::size_t hole_errors = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Program t = transform_ok(TmcProgramGen(seed, seed % 2 == 0).program());
        for (const char* entry : {"walk", "hop"}) {
            Machine m(t);
            Outcome o = eval(m, entry, int_args(5, 1));
            if (o.error && (o.error->code() == RuntimeErrorCode::HoleEscape ||
                            o.error->code() == RuntimeErrorCode::NonHoleOverwrite ||
                            o.error->code() == RuntimeErrorCode::HoleInspected))
                ++hole_errors;
            CHECK_FALSE(o.error);
        }
    }
    CHECK(hole_errors == 0);
}

TEST_CASE("companions run in bounded stack on linear chains") {
    // walk/hop bodies that only recurse through constructors use O(1) frames.
    Program p = parse_program(
        "(program (letrec (fun (@ tail_mod_cons) walk (n a) (match (call leq n 0) (case True (constr Nil)) "
        "(case False (constr K a (call hop (call sub n 1) a))))) (fun (@ tail_mod_cons) hop (n a) "
        "(seq (call print n) (constr Box (call walk n a))))) (main 0))");
    Program t = transform_ok(p);
    std::uint64_t depth_small = 0;
    for (std::int64_t n : {10, 5000}) {
        Machine m(t);
        Outcome o = eval(m, "walk", int_args(n, 1));
        REQUIRE_FALSE(o.error);
        if (n == 10)
            depth_small = o.metrics.max_stack_depth;
        else
            CHECK(o.metrics.max_stack_depth == depth_small);
    }
}
