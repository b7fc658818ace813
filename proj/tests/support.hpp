// Shared helpers for the test binaries: corpus access and hand-rolled
// random generators for expressions and TMC-shaped programs.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tmc/generate.hpp"
#include "tmc/ir.hpp"
#include "tmc/parser.hpp"

namespace tmc::test {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus_path(const std::string& name) { return std::string(TMC_CORPUS_DIR) + "/" + name; }
inline std::string tests_path(const std::string& name) { return std::string(TMC_TESTS_DIR) + "/" + name; }

inline Program load_corpus(const std::string& name) { return parse_program(read_text(corpus_path(name))); }

// print_expr on one line: layout newlines and indentation become one space.
inline std::string flat(const Expr& e) {
    std::string out;
    for (char c : print_expr(e)) {
        bool space = c == ' ' || c == '\n';
        if (space && (out.empty() || out.back() == ' ')) continue;
        out += space ? ' ' : c;
    }
    return out;
}

template <typename T>
const T& pick(Lcg& rng, const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(xs.size()) - 1))];
}

// Arbitrary syntax trees over small name pools. Not necessarily well formed;
// used for printer/parser round trips.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    Pattern pattern(int depth) {
        switch (rng_.range(0, depth > 0 ? 3 : 2)) {
            case 0: return pvar(pick(rng_, vars_));
            case 1: return pwild();
            case 2: return pint(rng_.range(-5, 5));
            default: {
                std::vector<Pattern> args;
                for (auto n = rng_.range(0, 2); n > 0; --n) args.push_back(pattern(depth - 1));
                return pconstr(pick(rng_, tags_), std::move(args));
            }
        }
    }

    FunDef fundef(int depth) {
        FunDef f;
        f.name = pick(rng_, funs_);
        for (auto n = rng_.range(1, 3); n > 0; --n) f.params.push_back(pick(rng_, vars_));
        f.tail_mod_cons = rng_.range(0, 1) == 1;
        f.body = expr(depth - 1);
        return f;
    }

    ExprPtr expr(int depth) {
        if (depth <= 0) return leaf();
        switch (rng_.range(0, 10)) {
            case 0:
            case 1: return leaf();
            case 2: {
                std::vector<ExprPtr> args;
                for (auto n = rng_.range(0, 3); n > 0; --n) args.push_back(expr(depth - 1));
                return call(pick(rng_, funs_), std::move(args), rng_.range(0, 3) == 0);
            }
            case 3: return let(pick(rng_, vars_), expr(depth - 1), expr(depth - 1));
            case 4: return seq(expr(depth - 1), expr(depth - 1));
            case 5: {
                std::vector<ExprPtr> args;
                for (auto n = rng_.range(0, 3); n > 0; --n)
                    args.push_back(rng_.range(0, 5) == 0 ? hole() : expr(depth - 1));
                return constr(pick(rng_, tags_), std::move(args));
            }
            case 6: {
                std::vector<Clause> clauses;
                for (auto n = rng_.range(1, 3); n > 0; --n) clauses.push_back(Clause{pattern(2), expr(depth - 1)});
                return match(expr(depth - 1), std::move(clauses));
            }
            case 7: return setref(expr(depth - 1), expr(depth - 1), expr(depth - 1));
            case 8: {
                FunGroup g;
                for (auto n = rng_.range(1, 2); n > 0; --n) g.push_back(fundef(depth - 1));
                return letrec(std::move(g), expr(depth - 1));
            }
            default: return integer(rng_.range(-1000, 1000));
        }
    }

    Program program(int depth) {
        Program p;
        for (auto n = rng_.range(0, 2); n > 0; --n) {
            FunGroup g;
            for (auto k = rng_.range(1, 2); k > 0; --k) g.push_back(fundef(depth));
            p.groups.push_back(std::move(g));
        }
        p.main = expr(depth);
        return p;
    }

private:
    ExprPtr leaf() { return rng_.range(0, 1) ? var(pick(rng_, vars_)) : integer(rng_.range(-50, 50)); }

    Lcg rng_;
    std::vector<std::string> vars_{"a", "b", "x", "xs", "acc", "y1"};
    std::vector<std::string> tags_{"Nil", "Cons", "Leaf", "Node", "Tuple", "K"};
    std::vector<std::string> funs_{"f", "g", "map", "add", "go_2"};
};

// Terminating, well-formed programs with a marked group {walk, hop}, both
// taking (n a) with integer arguments and recursing on (sub n 1). Bodies are
// random tail-modulo-cons shapes; constructors with two recursive arguments
// annotate exactly one of them. With `effects_in_constr`, print calls may
// also appear in constructor arguments and either recursive argument of a
// Node may be annotated.
class TmcProgramGen {
public:
    TmcProgramGen(std::uint64_t seed, bool effects_in_constr) : rng_(seed), effects_in_constr_(effects_in_constr) {}

    Program program() {
        Program p;
        FunGroup g;
        for (const char* name : {"walk", "hop"}) {
            FunDef f;
            f.name = name;
            f.params = {"n", "a"};
            f.tail_mod_cons = true;
            f.body = match(call("leq", {var("n"), integer(0)}),
                           {Clause{pconstr("True"), base()}, Clause{pconstr("False"), body(3)}});
            g.push_back(std::move(f));
        }
        p.groups.push_back(std::move(g));
        p.main = call("walk", {integer(3), integer(1)});
        return p;
    }

private:
    ExprPtr simple() {
        std::vector<std::string> names = locals_;
        names.push_back("n");
        names.push_back("a");
        switch (rng_.range(0, 3)) {
            case 0: return integer(rng_.range(-9, 9));
            case 1: return var(pick(rng_, names));
            case 2: return call("add", {var(pick(rng_, names)), integer(rng_.range(-3, 3))});
            default: return call("sub", {var("a"), var("n")});
        }
    }

    // An argument of a constructor that is not the recursive one.
    ExprPtr sibling() {
        if (effects_in_constr_ && rng_.range(0, 2) == 0) {
            ExprPtr v = simple();
            return seq(call("print", {v}), v);
        }
        return simple();
    }

    ExprPtr rec_call(bool tailcall) {
        return call(rng_.range(0, 1) ? "walk" : "hop", {call("sub", {var("n"), integer(1)}), simple()}, tailcall);
    }

    ExprPtr base() {
        switch (rng_.range(0, 2)) {
            case 0: return constr("Nil");
            case 1: return constr("Leaf", {simple()});
            default: return simple();
        }
    }

    ExprPtr body(int depth) {
        if (depth <= 0) return rng_.range(0, 2) ? rec_call(false) : base();
        switch (rng_.range(0, 7)) {
            case 0: {
                std::string v = "v" + std::to_string(next_local_++);
                if (rng_.range(0, 3) == 0) return let(v, rec_call(false), body(depth - 1));  // v unused
                ExprPtr bound = simple();
                locals_.push_back(v);
                ExprPtr b = body(depth - 1);
                locals_.pop_back();
                return let(v, bound, b);
            }
            case 1: return seq(call("print", {simple()}), body(depth - 1));
            case 2:
            case 3: {
                // K(s.., U, s..) with the recursive argument somewhere.
                std::vector<ExprPtr> args;
                auto left = rng_.range(0, 2);
                auto right = rng_.range(0, 2);
                for (auto i = left; i > 0; --i) args.push_back(sibling());
                args.push_back(body(depth - 1));
                for (auto i = right; i > 0; --i) args.push_back(sibling());
                return constr(pick(rng_, tags_), std::move(args));
            }
            case 4: {
                // Two recursive arguments; the annotated one is chosen. Without
                // constructor effects the last one is annotated so that the
                // effect order of the two calls is preserved.
                bool first = effects_in_constr_ && rng_.range(0, 1) == 0;
                return constr("Node", {rec_call(first), sibling(), rec_call(!first)});
            }
            case 5: {
                std::vector<Clause> clauses;
                clauses.push_back(Clause{pconstr("True"), body(depth - 1)});
                clauses.push_back(Clause{pconstr("False"), body(depth - 1)});
                return match(call("leq", {var("a"), integer(rng_.range(-5, 5))}), std::move(clauses));
            }
            case 6: {
                std::vector<Clause> clauses;
                clauses.push_back(Clause{pwild(), body(depth - 1)});
                return match(simple(), std::move(clauses));
            }
            default: return rec_call(false);
        }
    }

    Lcg rng_;
    bool effects_in_constr_;
    std::vector<std::string> locals_;
    int next_local_ = 0;
    std::vector<std::string> tags_{"K", "Pair", "Cons", "Box"};
};

}  // namespace tmc::test
