#include "tmc/well_formed.hpp"

#include <array>
#include <map>
#include <set>
#include <type_traits>

namespace tmc {

namespace {

struct BuiltinInfo {
    std::string_view name;
    std::size_t arity;
};

constexpr std::array<BuiltinInfo, 6> kBuiltins{{
    {"add", 2},
    {"sub", 2},
    {"leq", 2},
    {"eq", 2},
    {"print", 1},
    {"add1", 1},
}};

enum class BindingKind { Local, Function };

struct Binding {
    BindingKind kind;
    std::size_t arity = 0;
};

class Checker {
public:
    explicit Checker(std::vector<Diagnostic>& out) : out_(out) {}

    void run(const Program& p) {
        std::map<std::string, Binding> globals;
        std::set<std::string> seen_functions;
        for (const auto& g : p.groups)
            for (const auto& f : g) note_function(f, seen_functions, globals);

        scopes_.push_back(globals);
        for (const auto& g : p.groups)
            for (const auto& f : g) check_fun(f, f.name);
        root_ = "main";
        path_.clear();
        if (p.main) check(*p.main, false);
        scopes_.pop_back();
    }

private:
    std::vector<Diagnostic>& out_;
    std::vector<std::map<std::string, Binding>> scopes_;
    std::string root_;
    Path path_;

    void report(DiagCode code, const SourceSpan& span, std::string message) {
        out_.push_back(Diagnostic{Severity::Error, code, span, root_, path_, std::move(message), {}});
    }

    void note_function(const FunDef& f, std::set<std::string>& seen,
                       std::map<std::string, Binding>& scope) {
        if (!seen.insert(f.name).second) {
            out_.push_back(Diagnostic{Severity::Error, DiagCode::DuplicateFunction, f.span, f.name, {},
                                      "function `" + f.name + "` is defined more than once", {}});
        }
        scope[f.name] = Binding{BindingKind::Function, f.params.size()};
    }

    const Binding* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

    void check_fun(const FunDef& f, const std::string& root) {
        std::string saved_root = root_;
        Path saved_path = path_;
        if (!root.empty()) {
            root_ = root;
            path_.clear();
        }
        std::map<std::string, Binding> params;
        for (const auto& p : f.params) {
            if (params.count(p)) {
                report(DiagCode::DuplicateParam, f.span,
                       "parameter `" + p + "` of `" + f.name + "` is bound twice");
            }
            params[p] = Binding{BindingKind::Local};
        }
        scopes_.push_back(std::move(params));
        check(*f.body, false);
        scopes_.pop_back();
        root_ = std::move(saved_root);
        path_ = std::move(saved_path);
    }

    void child(const Expr& e, std::uint32_t step, bool in_constr_arg) {
        path_.push_back(step);
        check(e, in_constr_arg);
        path_.pop_back();
    }

    void check(const Expr& e, bool in_constr_arg) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Var>) {
                    if (!lookup(n.name) && !is_builtin(n.name))
                        report(DiagCode::UnboundName, e.span, "unbound variable `" + n.name + "`");
                } else if constexpr (std::is_same_v<T, Int>) {
                } else if constexpr (std::is_same_v<T, Call>) {
                    check_call(e, n);
                    for (std::uint32_t i = 0; i < n.args.size(); ++i) child(*n.args[i], i, false);
                } else if constexpr (std::is_same_v<T, Let>) {
                    child(*n.bound, 0, false);
                    scopes_.push_back({{n.binder, Binding{BindingKind::Local}}});
                    child(*n.body, 1, false);
                    scopes_.pop_back();
                } else if constexpr (std::is_same_v<T, Seq>) {
                    child(*n.first, 0, false);
                    child(*n.second, 1, false);
                } else if constexpr (std::is_same_v<T, Constr>) {
                    for (std::uint32_t i = 0; i < n.args.size(); ++i) child(*n.args[i], i, true);
                } else if constexpr (std::is_same_v<T, Match>) {
                    if (n.clauses.empty()) report(DiagCode::EmptyMatch, e.span, "match has no clauses");
                    child(*n.scrutinee, 0, false);
                    for (std::uint32_t k = 0; k < n.clauses.size(); ++k) {
                        std::map<std::string, Binding> bound;
                        for (const auto& b : pattern_binders(n.clauses[k].pattern)) {
                            if (bound.count(b)) {
                                report(DiagCode::DuplicateBinder, n.clauses[k].body->span,
                                       "pattern binds `" + b + "` twice");
                            }
                            bound[b] = Binding{BindingKind::Local};
                        }
                        scopes_.push_back(std::move(bound));
                        child(*n.clauses[k].body, k + 1, false);
                        scopes_.pop_back();
                    }
                } else if constexpr (std::is_same_v<T, SetRef>) {
                    if (auto* lit = n.index->template as<Int>(); lit && lit->value < 1) {
                        report(DiagCode::BadIndex, n.index->span,
                               "setref index must be >= 1, got " + std::to_string(lit->value));
                    }
                    child(*n.dest, 0, false);
                    child(*n.index, 1, false);
                    child(*n.value, 2, false);
                } else if constexpr (std::is_same_v<T, Hole>) {
                    if (!in_constr_arg)
                        report(DiagCode::MisplacedHole, e.span,
                               "(hole) may only appear as a constructor argument");
                } else if constexpr (std::is_same_v<T, Letrec>) {
                    std::map<std::string, Binding> group;
                    for (const auto& f : n.group) {
                        const Binding* outer = lookup(f.name);
                        if (group.count(f.name) || (outer && outer->kind == BindingKind::Function))
                            out_.push_back(Diagnostic{Severity::Error, DiagCode::DuplicateFunction, f.span, root_,
                                                      path_, "function `" + f.name + "` is already defined in scope",
                                                      {}});
                        group[f.name] = Binding{BindingKind::Function, f.params.size()};
                    }
                    scopes_.push_back(std::move(group));
                    for (std::uint32_t k = 0; k < n.group.size(); ++k) {
                        path_.push_back(k);
                        check_fun(n.group[k], "");
                        path_.pop_back();
                    }
                    child(*n.body, static_cast<std::uint32_t>(n.group.size()), false);
                    scopes_.pop_back();
                }
            },
            e.node);
    }

    void check_call(const Expr& e, const Call& c) {
        if (const Binding* b = lookup(c.callee)) {
            if (b->kind == BindingKind::Function && b->arity != c.args.size()) {
                report(DiagCode::ArityMismatch, e.span,
                       "`" + c.callee + "` expects " + std::to_string(b->arity) + " argument(s), got " +
                           std::to_string(c.args.size()));
            }
            return;
        }
        if (auto arity = builtin_arity(c.callee)) {
            if (*arity != c.args.size()) {
                report(DiagCode::ArityMismatch, e.span,
                       "builtin `" + c.callee + "` expects " + std::to_string(*arity) +
                           " argument(s), got " + std::to_string(c.args.size()));
            }
            return;
        }
        report(DiagCode::UnboundName, e.span, "call to unknown function `" + c.callee + "`");
    }
};

}  // namespace

bool is_builtin(std::string_view name) { return builtin_arity(name).has_value(); }

std::optional<std::size_t> builtin_arity(std::string_view name) {
    for (const auto& b : kBuiltins)
        if (b.name == name) return b.arity;
    return std::nullopt;
}

std::vector<Diagnostic> well_formed(const Program& p) {
    std::vector<Diagnostic> out;
    Checker(out).run(p);
    return out;
}

}  // namespace tmc
