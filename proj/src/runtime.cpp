#include "tmc/runtime.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>

#include "tmc/well_formed.hpp"

namespace tmc {

const char* to_string(RuntimeErrorCode c) {
    switch (c) {
        case RuntimeErrorCode::MatchFailure: return "MatchFailure";
        case RuntimeErrorCode::UnboundName: return "UnboundName";
        case RuntimeErrorCode::StackLimit: return "StackLimit";
        case RuntimeErrorCode::StepLimit: return "StepLimit";
        case RuntimeErrorCode::HoleEscape: return "HoleEscape";
        case RuntimeErrorCode::NonHoleOverwrite: return "NonHoleOverwrite";
        case RuntimeErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case RuntimeErrorCode::TypeError: return "TypeError";
        case RuntimeErrorCode::HoleInspected: return "HoleInspected";
    }
    return "?";
}

RuntimeError::RuntimeError(RuntimeErrorCode code, std::string where, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + (where.empty() ? "" : " at " + where) + ": " + detail),
      code_(code),
      where_(std::move(where)),
      detail_(detail) {}

// ---------------------------------------------------------------- store

Store::Store() {
    blocks_.push_back(Block{"Tuple", {}});
    blocks_.push_back(Block{"True", {}});
    blocks_.push_back(Block{"False", {}});
}

std::int64_t Store::alloc(std::string tag, std::vector<Value> fields) {
    blocks_.push_back(Block{std::move(tag), std::move(fields)});
    return static_cast<std::int64_t>(blocks_.size()) - 1;
}

const Block& Store::at(std::int64_t addr) const {
    if (addr < 0 || static_cast<std::size_t>(addr) >= blocks_.size())
        throw RuntimeError(RuntimeErrorCode::TypeError, "", "no block at address " + std::to_string(addr));
    return blocks_[static_cast<std::size_t>(addr)];
}

void Store::poke(std::int64_t addr, std::size_t index, Value v) {
    at(addr);
    blocks_[static_cast<std::size_t>(addr)].fields.at(index - 1) = v;
}

void Store::set_field(std::int64_t addr, std::int64_t index, Value v) {
    const Block& b = at(addr);
    if (index < 1 || static_cast<std::size_t>(index) > b.fields.size())
        throw RuntimeError(RuntimeErrorCode::IndexOutOfRange, "",
                           "field " + std::to_string(index) + " of " + std::to_string(b.fields.size()) + "-field " +
                               b.tag);
    Value& slot = blocks_[static_cast<std::size_t>(addr)].fields[static_cast<std::size_t>(index - 1)];
    if (!slot.is_hole())
        throw RuntimeError(RuntimeErrorCode::NonHoleOverwrite, "",
                           "field " + std::to_string(index) + " of " + b.tag + " is already initialized");
    slot = v;
}

void assert_no_holes(const Store& s, Value v) {
    if (v.is_hole()) throw RuntimeError(RuntimeErrorCode::HoleEscape, "/", "result is a hole");
    if (v.kind != Value::Kind::Block) return;

    struct Entry {
        std::int64_t addr;
        std::size_t parent;
        std::uint32_t field;
    };
    std::vector<Entry> entries{{v.payload, 0, 0}};
    std::unordered_set<std::int64_t> visited{v.payload};
    std::vector<std::size_t> work{0};
    while (!work.empty()) {
        std::size_t cur = work.back();
        work.pop_back();
        const Block& b = s.at(entries[cur].addr);
        for (std::size_t i = 0; i < b.fields.size(); ++i) {
            Value f = b.fields[i];
            if (f.is_hole()) {
                std::vector<std::uint32_t> chain{static_cast<std::uint32_t>(i + 1)};
                for (std::size_t e = cur; e != 0; e = entries[e].parent) chain.push_back(entries[e].field);
                Path path(chain.rbegin(), chain.rend());
                throw RuntimeError(RuntimeErrorCode::HoleEscape, to_string(path),
                                   "hole reachable from result in " + b.tag);
            }
            if (f.kind == Value::Kind::Block && visited.insert(f.payload).second) {
                entries.push_back(Entry{f.payload, cur, static_cast<std::uint32_t>(i + 1)});
                work.push_back(entries.size() - 1);
            }
        }
    }
}

bool struct_eq(const Store& sa, Value a, const Store& sb, Value b) {
    std::set<std::pair<std::int64_t, std::int64_t>> assumed;
    std::vector<std::pair<Value, Value>> work{{a, b}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        if (x.kind != y.kind) return false;
        if (x.kind != Value::Kind::Block) {
            if (x.payload != y.payload) return false;
            continue;
        }
        if (!assumed.insert({x.payload, y.payload}).second) continue;
        const Block& bx = sa.at(x.payload);
        const Block& by = sb.at(y.payload);
        if (bx.tag != by.tag || bx.fields.size() != by.fields.size()) return false;
        for (std::size_t i = bx.fields.size(); i-- > 0;) work.emplace_back(bx.fields[i], by.fields[i]);
    }
    return true;
}

std::string render_value(const Store& s, Value v, const std::vector<std::string>* closure_names) {
    std::string out;
    // A task renders a value, or closes the block at `addr` when `close`.
    struct Task {
        Value v;
        bool close;
    };
    std::vector<Task> work{{v, false}};
    std::unordered_set<std::int64_t> open;
    while (!work.empty()) {
        Task t = work.back();
        work.pop_back();
        if (t.close) {
            out += ')';
            open.erase(t.v.payload);
        } else switch (t.v.kind) {
            case Value::Kind::Int: out += std::to_string(t.v.payload); break;
            case Value::Kind::Hole: out += "<hole>"; break;
            case Value::Kind::Fun:
                if (closure_names && static_cast<std::size_t>(t.v.payload) < closure_names->size())
                    out += "<fun " + (*closure_names)[static_cast<std::size_t>(t.v.payload)] + ">";
                else
                    out += "<fun #" + std::to_string(t.v.payload) + ">";
                break;
            case Value::Kind::Block: {
                const Block& b = s.at(t.v.payload);
                if (b.fields.empty()) {
                    out += b.tag;
                    break;
                }
                if (open.count(t.v.payload)) {
                    out += "<cycle>";
                    break;
                }
                open.insert(t.v.payload);
                out += '(';
                out += b.tag;
                work.push_back({t.v, true});
                for (std::size_t i = b.fields.size(); i-- > 0;) work.push_back({b.fields[i], false});
                break;
            }
        }
        // Separate a rendered item from a following sibling.
        if (!work.empty() && !work.back().close) out += ' ';
    }
    return out;
}

namespace {

class LiteralParser {
public:
    LiteralParser(const std::string& text, Store& s) : text_(text), s_(s) {}

    Value parse() {
        Value v = value();
        skip();
        if (pos_ != text_.size()) fail("trailing input");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("bad value literal at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string atom() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')')
            ++pos_;
        if (start == pos_) fail("expected a value");
        return text_.substr(start, pos_ - start);
    }

    Value value() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end");
        if (text_[pos_] == '(') {
            ++pos_;
            skip();
            std::string tag = atom();
            if (!std::isupper(static_cast<unsigned char>(tag[0]))) fail("constructor expected, got '" + tag + "'");
            std::vector<Value> fields;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) fail("unclosed parenthesis");
                if (text_[pos_] == ')') break;
                fields.push_back(value());
            }
            ++pos_;
            return Value::block(s_.alloc(tag, std::move(fields)));
        }
        std::string a = atom();
        if (std::isupper(static_cast<unsigned char>(a[0]))) return Value::block(s_.alloc(a, {}));
        std::int64_t n = 0;
        auto [p, ec] = std::from_chars(a.data(), a.data() + a.size(), n);
        if (ec != std::errc() || p != a.data() + a.size()) fail("not an integer: '" + a + "'");
        return Value::integer(n);
    }

    const std::string& text_;
    Store& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Value parse_value_literal(const std::string& text, Store& s) { return LiteralParser(text, s).parse(); }

std::string Metrics::render() const {
    std::ostringstream out;
    out << "max_stack_depth=" << max_stack_depth << '\n';
    out << "allocations=" << allocations << '\n';
    out << "dest_writes=" << dest_writes << '\n';
    out << "effect_trace=[";
    for (std::size_t i = 0; i < effect_trace.size(); ++i) out << (i ? ", " : "") << effect_trace[i];
    out << "]\n";
    out << "steps=" << steps << '\n';
    return out.str();
}

// -------------------------------------------------------------- machine

namespace {

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
    const std::string* name;
    Value value;
    Env next;
};

Env extend(Env env, const std::string& name, Value v) {
    return std::make_shared<const EnvNode>(EnvNode{&name, v, std::move(env)});
}

enum class Builtin { None, Add, Sub, Leq, Eq, Print, Add1 };

Builtin builtin_of(const std::string& name) {
    if (name == "add") return Builtin::Add;
    if (name == "sub") return Builtin::Sub;
    if (name == "leq") return Builtin::Leq;
    if (name == "eq") return Builtin::Eq;
    if (name == "print") return Builtin::Print;
    if (name == "add1") return Builtin::Add1;
    return Builtin::None;
}

struct Closure {
    const FunDef* def = nullptr;
    Env env;
    Builtin builtin = Builtin::None;
};

// Continuation frames.
struct KArgs {  // operands of a Call, Constr or SetRef
    const Expr* node;
    Env env;
    std::vector<Value> vals;
};
struct KLet {
    const Let* let;
    Env env;
};
struct KSeq {
    const Seq* seq;
    Env env;
};
struct KMatch {
    const Match* match;
    Env env;
};
struct KReturn {  // function frame boundary
    const std::string* caller;
};
using Frame = std::variant<KArgs, KLet, KSeq, KMatch, KReturn>;

std::size_t operand_count(const Expr& e) {
    if (auto* c = e.as<Call>()) return c->args.size();
    if (auto* k = e.as<Constr>()) return k->args.size();
    return 3;
}

const Expr* operand(const Expr& e, std::size_t i) {
    if (auto* c = e.as<Call>()) return c->args[i].get();
    if (auto* k = e.as<Constr>()) return k->args[i].get();
    const auto& s = *e.as<SetRef>();
    return (i == 0 ? s.dest : i == 1 ? s.index : s.value).get();
}

const std::string kMain = "main";

}  // namespace

struct Machine::Impl {
    Machine& m;
    std::vector<Closure> closures;
    std::vector<std::string> names;  // parallel to closures
    std::unordered_map<std::string, std::int64_t> globals;
    std::vector<Frame> stack;
    std::uint64_t depth = 0;
    const std::string* current = nullptr;

    explicit Impl(Machine& machine) : m(machine) {
        for (const auto& g : m.program_.groups)
            for (const auto& f : g) {
                globals[f.name] = static_cast<std::int64_t>(closures.size());
                closures.push_back(Closure{&f, nullptr, Builtin::None});
                names.push_back(f.name);
            }
        for (const char* b : {"add", "sub", "leq", "eq", "print", "add1"}) {
            if (globals.count(b)) continue;
            globals[b] = static_cast<std::int64_t>(closures.size());
            closures.push_back(Closure{nullptr, nullptr, builtin_of(b)});
            names.push_back(b);
        }
    }

    std::string where() const { return current ? *current : std::string(); }

    [[noreturn]] void fail(RuntimeErrorCode c, const std::string& detail) const { throw RuntimeError(c, where(), detail); }

    Value lookup(const std::string& name, const Env& env) const {
        for (const EnvNode* n = env.get(); n; n = n->next.get())
            if (*n->name == name) return n->value;
        auto it = globals.find(name);
        if (it != globals.end()) return Value::fun(it->second);
        fail(RuntimeErrorCode::UnboundName, "'" + name + "'");
    }

    std::int64_t as_int(Value v, const char* op) const {
        if (v.kind != Value::Kind::Int) fail(RuntimeErrorCode::TypeError, std::string(op) + " expects integers");
        return v.payload;
    }

    Value apply_builtin(Builtin b, const std::vector<Value>& args) {
        auto want = [&](std::size_t n, const char* op) {
            if (args.size() != n) fail(RuntimeErrorCode::TypeError, std::string(op) + " arity mismatch");
        };
        switch (b) {
            case Builtin::Add: want(2, "add"); return Value::integer(as_int(args[0], "add") + as_int(args[1], "add"));
            case Builtin::Sub: want(2, "sub"); return Value::integer(as_int(args[0], "sub") - as_int(args[1], "sub"));
            case Builtin::Leq:
                want(2, "leq");
                return Value::block(as_int(args[0], "leq") <= as_int(args[1], "leq") ? Store::kTrue : Store::kFalse);
            case Builtin::Eq:
                want(2, "eq");
                return Value::block(as_int(args[0], "eq") == as_int(args[1], "eq") ? Store::kTrue : Store::kFalse);
            case Builtin::Add1: want(1, "add1"); return Value::integer(as_int(args[0], "add1") + 1);
            case Builtin::Print:
                want(1, "print");
                m.metrics_.effect_trace.push_back(render_value(m.store_, args[0], &names));
                return Value::block(Store::kUnit);
            case Builtin::None: break;
        }
        fail(RuntimeErrorCode::TypeError, "not a builtin");
    }

    bool bind(const Pattern& p, Value v, Env& env) const {
        return std::visit(
            [&](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, PWild>) {
                    return true;
                } else {
                    if (v.is_hole()) fail(RuntimeErrorCode::HoleInspected, "pattern match on a hole");
                    if constexpr (std::is_same_v<T, PVar>) {
                        env = extend(env, n.name, v);
                        return true;
                    } else if constexpr (std::is_same_v<T, PInt>) {
                        return v.kind == Value::Kind::Int && v.payload == n.value;
                    } else {
                        if (v.kind != Value::Kind::Block) return false;
                        const Block& b = m.store_.at(v.payload);
                        if (b.tag != n.tag || b.fields.size() != n.args.size()) return false;
                        for (std::size_t i = 0; i < n.args.size(); ++i)
                            if (!bind(n.args[i], b.fields[i], env)) return false;
                        return true;
                    }
                }
            },
            p.node);
    }

    Env bind_group(const FunGroup& group, const Env& env) {
        Env out = env;
        std::vector<std::size_t> made;
        for (const auto& f : group) {
            made.push_back(closures.size());
            out = extend(out, f.name, Value::fun(static_cast<std::int64_t>(closures.size())));
            closures.push_back(Closure{&f, nullptr, Builtin::None});
            names.push_back(f.name);
        }
        for (auto i : made) closures[i].env = out;
        return out;
    }

    void push_frame() {
        stack.emplace_back(KReturn{current});
        ++depth;
        if (depth > m.limits_.max_stack)
            fail(RuntimeErrorCode::StackLimit, "more than " + std::to_string(m.limits_.max_stack) + " frames");
        if (depth > m.metrics_.max_stack_depth) m.metrics_.max_stack_depth = depth;
    }

    // Runs `body` in `env` as the single function frame on the stack.
    Value run(const Expr* expr, Env env, const std::string* fn) {
        stack.clear();
        depth = 0;
        current = nullptr;
        push_frame();
        current = fn;

        Value val;
        bool returning = false;

        // Enters the callee of a completed call. Leaves either a returned
        // value (builtins) or a body to evaluate.
        auto apply = [&](const Call& c, const Env& call_env, std::vector<Value> args) {
            Value f = lookup(c.callee, call_env);
            if (f.kind != Value::Kind::Fun) fail(RuntimeErrorCode::TypeError, "'" + c.callee + "' is not a function");
            const Closure& clo = closures[static_cast<std::size_t>(f.payload)];
            if (clo.builtin != Builtin::None) {
                val = apply_builtin(clo.builtin, args);
                returning = true;
                return;
            }
            const FunDef& def = *clo.def;
            if (def.params.size() != args.size())
                fail(RuntimeErrorCode::TypeError, "'" + def.name + "' expects " + std::to_string(def.params.size()) +
                                                      " arguments, got " + std::to_string(args.size()));
            Env callee_env = clo.env;
            for (std::size_t i = 0; i < args.size(); ++i) callee_env = extend(std::move(callee_env), def.params[i], args[i]);
            if (!std::holds_alternative<KReturn>(stack.back())) push_frame();
            current = &def.name;
            expr = def.body.get();
            env = std::move(callee_env);
            returning = false;
        };

        auto complete = [&](const Expr& node, const Env& node_env, std::vector<Value> vals) {
            if (auto* k = node.as<Constr>()) {
                ++m.metrics_.allocations;
                val = Value::block(m.store_.alloc(k->tag, std::move(vals)));
                returning = true;
            } else if (auto* c = node.as<Call>()) {
                apply(*c, node_env, std::move(vals));
            } else {
                if (vals[0].kind != Value::Kind::Block) fail(RuntimeErrorCode::TypeError, "setref on a non-block");
                if (vals[1].kind != Value::Kind::Int) fail(RuntimeErrorCode::TypeError, "setref index is not an integer");
                try {
                    m.store_.set_field(vals[0].payload, vals[1].payload, vals[2]);
                } catch (const RuntimeError& e) {
                    throw RuntimeError(e.code(), where(), e.detail());
                }
                ++m.metrics_.dest_writes;
                val = Value::block(Store::kUnit);
                returning = true;
            }
        };

        // Moves to the next operand of the KArgs frame on top, or completes it.
        auto advance = [&] {
            auto& k = std::get<KArgs>(stack.back());
            std::size_t n = operand_count(*k.node);
            bool is_constr = k.node->is<Constr>();
            while (k.vals.size() < n) {
                const Expr* op = operand(*k.node, k.vals.size());
                if (is_constr && op->is<Hole>()) {
                    k.vals.push_back(Value::hole());
                    continue;
                }
                expr = op;
                env = k.env;
                returning = false;
                return;
            }
            KArgs done = std::move(k);
            stack.pop_back();
            complete(*done.node, done.env, std::move(done.vals));
        };

        for (;;) {
            if (!returning) {
                if (++m.metrics_.steps > m.limits_.max_steps)
                    fail(RuntimeErrorCode::StepLimit, "more than " + std::to_string(m.limits_.max_steps) + " steps");
                const Expr& e = *expr;
                std::visit(
                    [&](const auto& n) {
                        using T = std::decay_t<decltype(n)>;
                        if constexpr (std::is_same_v<T, Int>) {
                            val = Value::integer(n.value);
                            returning = true;
                        } else if constexpr (std::is_same_v<T, Var>) {
                            val = lookup(n.name, env);
                            returning = true;
                        } else if constexpr (std::is_same_v<T, Hole>) {
                            fail(RuntimeErrorCode::HoleEscape, "hole evaluated outside a constructor");
                        } else if constexpr (std::is_same_v<T, Call> || std::is_same_v<T, Constr> ||
                                             std::is_same_v<T, SetRef>) {
                            stack.emplace_back(KArgs{&e, env, {}});
                            std::get<KArgs>(stack.back()).vals.reserve(operand_count(e));
                            advance();
                        } else if constexpr (std::is_same_v<T, Let>) {
                            stack.emplace_back(KLet{&n, env});
                            expr = n.bound.get();
                        } else if constexpr (std::is_same_v<T, Seq>) {
                            stack.emplace_back(KSeq{&n, env});
                            expr = n.first.get();
                        } else if constexpr (std::is_same_v<T, Match>) {
                            stack.emplace_back(KMatch{&n, env});
                            expr = n.scrutinee.get();
                        } else if constexpr (std::is_same_v<T, Letrec>) {
                            env = bind_group(n.group, env);
                            expr = n.body.get();
                        }
                    },
                    e.node);
                continue;
            }

            Frame& top = stack.back();
            if (auto* r = std::get_if<KReturn>(&top)) {
                current = r->caller;
                stack.pop_back();
                --depth;
                if (stack.empty()) return val;
            } else if (auto* l = std::get_if<KLet>(&top)) {
                const Let* let = l->let;
                env = extend(std::move(l->env), let->binder, val);
                stack.pop_back();
                expr = let->body.get();
                returning = false;
            } else if (auto* s = std::get_if<KSeq>(&top)) {
                const Seq* sq = s->seq;
                env = std::move(s->env);
                stack.pop_back();
                expr = sq->second.get();
                returning = false;
            } else if (auto* mt = std::get_if<KMatch>(&top)) {
                const Match* match = mt->match;
                Env base = std::move(mt->env);
                stack.pop_back();
                const Clause* chosen = nullptr;
                for (const auto& cl : match->clauses) {
                    Env trial = base;
                    if (bind(cl.pattern, val, trial)) {
                        chosen = &cl;
                        env = std::move(trial);
                        break;
                    }
                }
                if (!chosen)
                    fail(RuntimeErrorCode::MatchFailure, "no clause matches " + render_value(m.store_, val, &names));
                expr = chosen->body.get();
                returning = false;
            } else {
                std::get<KArgs>(top).vals.push_back(val);
                advance();
            }
        }
    }

    Value run_entry(const std::string& entry, const std::vector<Value>& args) {
        auto it = globals.find(entry);
        if (it == globals.end()) throw RuntimeError(RuntimeErrorCode::UnboundName, "", "no function '" + entry + "'");
        const Closure& clo = closures[static_cast<std::size_t>(it->second)];
        if (!clo.def) throw RuntimeError(RuntimeErrorCode::TypeError, "", "'" + entry + "' is a builtin");
        const FunDef& def = *clo.def;
        if (def.params.size() != args.size())
            throw RuntimeError(RuntimeErrorCode::TypeError, entry,
                               "expects " + std::to_string(def.params.size()) + " arguments, got " +
                                   std::to_string(args.size()));
        Env env;
        for (std::size_t i = 0; i < args.size(); ++i) env = extend(std::move(env), def.params[i], args[i]);
        return run(def.body.get(), std::move(env), &def.name);
    }
};

Machine::Machine(const Program& p, Limits limits)
    : program_(p), limits_(limits), impl_(std::make_unique<Impl>(*this)) {}

Machine::~Machine() = default;

Value Machine::call(const std::string& entry, const std::vector<Value>& args) {
    metrics_ = Metrics{};
    Value v = impl_->run_entry(entry, args);
    assert_no_holes(store_, v);
    return v;
}

Value Machine::call_into_scratch(const std::string& entry, const std::vector<Value>& args) {
    std::int64_t scratch = store_.alloc("Scratch", {Value::hole()});
    std::vector<Value> full{Value::block(scratch), Value::integer(1)};
    full.insert(full.end(), args.begin(), args.end());
    metrics_ = Metrics{};
    impl_->run_entry(entry, full);
    Value v = store_.at(scratch).fields[0];
    if (v.is_hole()) throw RuntimeError(RuntimeErrorCode::HoleEscape, "/1", entry + " left its destination empty");
    assert_no_holes(store_, v);
    return v;
}

Value Machine::eval_main() {
    metrics_ = Metrics{};
    Value v = impl_->run(program_.main.get(), nullptr, &kMain);
    assert_no_holes(store_, v);
    return v;
}

bool Machine::has_function(const std::string& name) const {
    auto it = impl_->globals.find(name);
    return it != impl_->globals.end() && impl_->closures[static_cast<std::size_t>(it->second)].def;
}

std::optional<Value> Machine::function_value(const std::string& name) const {
    auto it = impl_->globals.find(name);
    if (it == impl_->globals.end()) return std::nullopt;
    return Value::fun(it->second);
}

std::size_t Machine::arity(const std::string& name) const {
    auto it = impl_->globals.find(name);
    if (it == impl_->globals.end()) return 0;
    const Closure& c = impl_->closures[static_cast<std::size_t>(it->second)];
    return c.def ? c.def->params.size() : builtin_arity(name).value_or(0);
}

std::string Machine::render(Value v) const { return render_value(store_, v, &impl_->names); }

Outcome eval(Machine& m, const std::string& entry, const std::vector<Value>& args) {
    Outcome out;
    try {
        out.value = m.call(entry, args);
    } catch (const RuntimeError& e) {
        out.error = e;
    }
    out.metrics = m.metrics();
    return out;
}

}  // namespace tmc
