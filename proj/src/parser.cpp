#include "tmc/parser.hpp"

#include <cctype>
#include <charconv>
#include <deque>
#include <optional>

namespace tmc {

ParseError::ParseError(SourceSpan span, std::string message, std::vector<std::string> expected)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
      span_(span),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { LParen, RParen, Int, Sym, Eof };

struct Token {
    Tok kind;
    std::string_view text;
    SourceSpan span;
    std::int64_t value = 0;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::LParen: return "`(`";
        case Tok::RParen: return "`)`";
        case Tok::Eof: return "end of input";
        default: return "`" + std::string(t.text) + "`";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    const Token& peek(std::size_t k = 0) {
        while (buffer_.size() <= k) buffer_.push_back(scan());
        return buffer_[k];
    }

    Token next() {
        Token t = peek();
        buffer_.pop_front();
        return t;
    }

    std::string_view text() const { return text_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    std::deque<Token> buffer_;

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    static bool delimiter(char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';';
    }

    Token scan() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
            if (pos_ < text_.size() && text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            break;
        }
        SourceSpan span{pos_, pos_, line_, col_};
        if (pos_ >= text_.size()) {
            // End-of-input errors point at the final byte of the text.
            if (!text_.empty()) {
                span.byte_start = text_.size() - 1;
                span.byte_end = text_.size();
            }
            return Token{Tok::Eof, {}, span};
        }
        char c = text_[pos_];
        if (c == '(' || c == ')') {
            advance();
            span.byte_end = pos_;
            return Token{c == '(' ? Tok::LParen : Tok::RParen, text_.substr(span.byte_start, 1), span};
        }
        while (pos_ < text_.size() && !delimiter(text_[pos_])) advance();
        span.byte_end = pos_;
        std::string_view word = text_.substr(span.byte_start, span.byte_end - span.byte_start);
        bool numeric = std::isdigit(static_cast<unsigned char>(word[0])) ||
                       (word.size() > 1 && word[0] == '-' && std::isdigit(static_cast<unsigned char>(word[1])));
        if (numeric) {
            std::int64_t value = 0;
            auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
            if (ec != std::errc{} || ptr != word.data() + word.size())
                throw ParseError(span, "malformed integer literal `" + std::string(word) + "`", {"integer"});
            return Token{Tok::Int, word, span, value};
        }
        return Token{Tok::Sym, word, span};
    }
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    Program program() {
        Token open = expect(Tok::LParen, "`(`");
        (void)open;
        expect_keyword("program");
        Program p;
        while (at_form("letrec")) {
            lex_.next();
            lex_.next();
            p.groups.push_back(fundefs());
            expect(Tok::RParen, "`)`");
        }
        if (!at_form("main")) fail(lex_.peek(), "expected `(main ...)`", {"(letrec", "(main"});
        lex_.next();
        lex_.next();
        p.main = expr();
        expect(Tok::RParen, "`)`");
        expect(Tok::RParen, "`)`");
        expect(Tok::Eof, "end of input");
        return p;
    }

    ExprPtr single_expr() {
        ExprPtr e = expr();
        expect(Tok::Eof, "end of input");
        return e;
    }

private:
    Lexer lex_;

    [[noreturn]] void fail(const Token& t, std::string message, std::vector<std::string> expected) {
        throw ParseError(t.span, message + ", found " + describe(t), std::move(expected));
    }

    Token expect(Tok kind, const char* what) {
        const Token& t = lex_.peek();
        if (t.kind != kind) fail(t, std::string("expected ") + what, {what});
        return lex_.next();
    }

    Token expect_symbol() {
        const Token& t = lex_.peek();
        if (t.kind != Tok::Sym) fail(t, "expected a symbol", {"symbol"});
        return lex_.next();
    }

    void expect_keyword(std::string_view kw) {
        const Token& t = lex_.peek();
        if (t.kind != Tok::Sym || t.text != kw)
            fail(t, "expected `" + std::string(kw) + "`", {std::string(kw)});
        lex_.next();
    }

    bool at_form(std::string_view head) {
        return lex_.peek().kind == Tok::LParen && lex_.peek(1).kind == Tok::Sym && lex_.peek(1).text == head;
    }

    static SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
        return SourceSpan{a.byte_start, b.byte_end, a.line, a.column};
    }

    FunGroup fundefs() {
        FunGroup group;
        if (!at_form("fun")) fail(lex_.peek(), "expected `(fun ...)`", {"(fun"});
        while (at_form("fun")) group.push_back(fundef());
        return group;
    }

    FunDef fundef() {
        Token open = lex_.next();
        lex_.next();  // fun
        FunDef f;
        if (lex_.peek().kind == Tok::LParen && lex_.peek(1).kind == Tok::RParen) {
            lex_.next();  // `()` is an empty attribute list
            lex_.next();
        } else if (lex_.peek().kind == Tok::LParen && lex_.peek(1).kind == Tok::Sym && lex_.peek(1).text == "@") {
            lex_.next();
            lex_.next();
            while (lex_.peek().kind == Tok::Sym) {
                Token a = lex_.next();
                if (a.text != "tail_mod_cons")
                    throw ParseError(a.span, "unknown function attribute `" + std::string(a.text) + "`",
                                     {"tail_mod_cons"});
                f.tail_mod_cons = true;
            }
            expect(Tok::RParen, "`)`");
        }
        f.name = std::string(expect_symbol().text);
        expect(Tok::LParen, "`(`");
        if (lex_.peek().kind != Tok::Sym) fail(lex_.peek(), "expected at least one parameter", {"symbol"});
        while (lex_.peek().kind == Tok::Sym) f.params.emplace_back(lex_.next().text);
        expect(Tok::RParen, "`)`");
        f.body = expr();
        Token close = expect(Tok::RParen, "`)`");
        f.span = join(open.span, close.span);
        return f;
    }

    ExprPtr expr() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Int) {
            Token n = lex_.next();
            return make(Int{n.value}, n.span);
        }
        if (t.kind == Tok::Sym) {
            Token s = lex_.next();
            return make(Var{std::string(s.text)}, s.span);
        }
        if (t.kind != Tok::LParen) fail(t, "expected an expression", {"expression"});
        Token open = lex_.next();
        Token head = lex_.peek();
        if (head.kind != Tok::Sym) fail(head, "expected a form name", {"form name"});
        lex_.next();
        std::string_view h = head.text;

        Expr::Node node;
        if (h == "int") {
            node = Int{expect(Tok::Int, "integer").value};
        } else if (h == "var") {
            node = Var{std::string(expect_symbol().text)};
        } else if (h == "call") {
            Call c;
            if (lex_.peek().kind == Tok::LParen && lex_.peek(1).kind == Tok::Sym && lex_.peek(1).text == "@") {
                lex_.next();
                lex_.next();
                while (lex_.peek().kind == Tok::Sym) {
                    Token a = lex_.next();
                    if (a.text != "tailcall")
                        throw ParseError(a.span, "unknown call attribute `" + std::string(a.text) + "`",
                                         {"tailcall"});
                    c.tailcall = true;
                }
                expect(Tok::RParen, "`)`");
            }
            c.callee = std::string(expect_symbol().text);
            while (lex_.peek().kind != Tok::RParen) c.args.push_back(expr());
            node = std::move(c);
        } else if (h == "let") {
            std::string binder(expect_symbol().text);
            ExprPtr bound = expr();
            ExprPtr body = expr();
            node = Let{std::move(binder), std::move(bound), std::move(body)};
        } else if (h == "seq") {
            ExprPtr first = expr();
            ExprPtr second = expr();
            node = Seq{std::move(first), std::move(second)};
        } else if (h == "constr" || h == "tuple") {
            Constr c;
            c.tag = h == "tuple" ? "Tuple" : std::string(expect_symbol().text);
            while (lex_.peek().kind != Tok::RParen) c.args.push_back(expr());
            node = std::move(c);
        } else if (h == "match") {
            Match m;
            m.scrutinee = expr();
            if (!at_form("case")) fail(lex_.peek(), "expected `(case ...)`", {"(case"});
            while (at_form("case")) m.clauses.push_back(clause());
            node = std::move(m);
        } else if (h == "if") {
            ExprPtr cond = expr();
            ExprPtr then_branch = expr();
            ExprPtr else_branch = expr();
            std::vector<Clause> clauses;
            clauses.push_back(Clause{pconstr("True"), std::move(then_branch)});
            clauses.push_back(Clause{pconstr("False"), std::move(else_branch)});
            node = Match{std::move(cond), std::move(clauses)};
        } else if (h == "setref") {
            ExprPtr d = expr();
            ExprPtr i = expr();
            ExprPtr v = expr();
            node = SetRef{std::move(d), std::move(i), std::move(v)};
        } else if (h == "hole") {
            node = Hole{};
        } else if (h == "letrec") {
            FunGroup group = fundefs();
            ExprPtr body = expr();
            node = Letrec{std::move(group), std::move(body)};
        } else {
            fail(head, "unknown form", {"int", "var", "call", "let", "seq", "constr", "match", "setref", "hole",
                                        "letrec", "if", "tuple"});
        }
        Token close = expect(Tok::RParen, "`)`");
        return make(std::move(node), join(open.span, close.span));
    }

    Clause clause() {
        lex_.next();
        lex_.next();  // case
        Pattern p = pattern();
        ExprPtr body = expr();
        expect(Tok::RParen, "`)`");
        return Clause{std::move(p), std::move(body)};
    }

    Pattern pattern() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Int) return pint(lex_.next().value);
        if (t.kind == Tok::Sym) {
            Token s = lex_.next();
            if (s.text == "_") return pwild();
            if (std::isupper(static_cast<unsigned char>(s.text[0]))) return pconstr(std::string(s.text));
            return pvar(std::string(s.text));
        }
        if (t.kind != Tok::LParen) fail(t, "expected a pattern", {"pattern"});
        lex_.next();
        std::string tag(expect_symbol().text);
        std::vector<Pattern> args;
        while (lex_.peek().kind != Tok::RParen) args.push_back(pattern());
        lex_.next();
        return pconstr(std::move(tag), std::move(args));
    }
};

// ---------------------------------------------------------------------------
// Printing

constexpr std::size_t kWidth = 80;

std::string spaces(std::size_t n) { return std::string(n, ' '); }

bool always_breaks(const Expr& e) { return e.is<Match>() || e.is<Letrec>(); }

std::string flat(const Expr& e);

std::string flat_args(const std::vector<ExprPtr>& args) {
    std::string out;
    for (const auto& a : args) {
        out += ' ';
        out += flat(*a);
    }
    return out;
}

std::string flat(const Expr& e) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Int>) {
                return "(int " + std::to_string(n.value) + ")";
            } else if constexpr (std::is_same_v<T, Call>) {
                return std::string("(call ") + (n.tailcall ? "(@ tailcall) " : "") + n.callee + flat_args(n.args) +
                       ")";
            } else if constexpr (std::is_same_v<T, Let>) {
                return "(let " + n.binder + " " + flat(*n.bound) + " " + flat(*n.body) + ")";
            } else if constexpr (std::is_same_v<T, Seq>) {
                return "(seq " + flat(*n.first) + " " + flat(*n.second) + ")";
            } else if constexpr (std::is_same_v<T, Constr>) {
                return "(constr " + n.tag + flat_args(n.args) + ")";
            } else if constexpr (std::is_same_v<T, SetRef>) {
                return "(setref " + flat(*n.dest) + " " + flat(*n.index) + " " + flat(*n.value) + ")";
            } else if constexpr (std::is_same_v<T, Hole>) {
                return "(hole)";
            } else {
                // Match and Letrec never print flat.
                return {};
            }
        },
        e.node);
}

bool contains_breaking(const Expr& e) {
    if (always_breaks(e)) return true;
    bool found = false;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Call> || std::is_same_v<T, Constr>) {
                for (const auto& a : n.args) found = found || contains_breaking(*a);
            } else if constexpr (std::is_same_v<T, Let>) {
                found = contains_breaking(*n.bound) || contains_breaking(*n.body);
            } else if constexpr (std::is_same_v<T, Seq>) {
                found = contains_breaking(*n.first) || contains_breaking(*n.second);
            } else if constexpr (std::is_same_v<T, SetRef>) {
                found = contains_breaking(*n.dest) || contains_breaking(*n.index) || contains_breaking(*n.value);
            }
        },
        e.node);
    return found;
}

class Printer {
public:
    std::string program(const Program& p) {
        std::string out = "(program";
        for (const auto& g : p.groups) {
            out += "\n  (letrec";
            for (const auto& f : g) out += "\n    " + fundef(f, 4);
            out += ")";
        }
        std::string one_line = contains_breaking(*p.main) ? std::string() : flat(*p.main);
        if (!one_line.empty() && 8 + one_line.size() + 2 <= kWidth)
            out += "\n  (main " + one_line + "))";
        else
            out += "\n  (main\n    " + expr(*p.main, 4, 4) + "))";
        return out;
    }

    // `indent` is the column for continuation lines of this node; `col` is
    // the column where the node's first character lands.
    std::string expr(const Expr& e, std::size_t indent, std::size_t col) {
        if (!contains_breaking(e)) {
            std::string f = flat(e);
            if (col + f.size() + 1 <= kWidth) return f;
        }
        const std::string nl = "\n" + spaces(indent + 2);
        return std::visit(
            [&](const auto& n) -> std::string {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Var> || std::is_same_v<T, Int> || std::is_same_v<T, Hole>) {
                    return flat(e);
                } else if constexpr (std::is_same_v<T, Call>) {
                    std::string head = std::string("(call ") + (n.tailcall ? "(@ tailcall) " : "") + n.callee;
                    return head + children(n.args, indent) + ")";
                } else if constexpr (std::is_same_v<T, Constr>) {
                    return "(constr " + n.tag + children(n.args, indent) + ")";
                } else if constexpr (std::is_same_v<T, Let>) {
                    std::string head = "(let " + n.binder;
                    std::string out = head;
                    std::size_t bound_col = col + head.size() + 1;
                    if (!contains_breaking(*n.bound) && bound_col + flat(*n.bound).size() <= kWidth) {
                        out += " " + flat(*n.bound);
                    } else {
                        out += nl + expr(*n.bound, indent + 2, indent + 2);
                    }
                    return out + nl + expr(*n.body, indent + 2, indent + 2) + ")";
                } else if constexpr (std::is_same_v<T, Seq>) {
                    return "(seq" + nl + expr(*n.first, indent + 2, indent + 2) + nl +
                           expr(*n.second, indent + 2, indent + 2) + ")";
                } else if constexpr (std::is_same_v<T, SetRef>) {
                    return "(setref" + nl + expr(*n.dest, indent + 2, indent + 2) + nl +
                           expr(*n.index, indent + 2, indent + 2) + nl + expr(*n.value, indent + 2, indent + 2) +
                           ")";
                } else if constexpr (std::is_same_v<T, Match>) {
                    std::string out = "(match";
                    std::size_t scrut_col = col + out.size() + 1;
                    if (!contains_breaking(*n.scrutinee) &&
                        scrut_col + flat(*n.scrutinee).size() <= kWidth) {
                        out += " " + flat(*n.scrutinee);
                    } else {
                        out += nl + expr(*n.scrutinee, indent + 2, indent + 2);
                    }
                    for (const auto& c : n.clauses) out += nl + clause(c, indent + 2);
                    return out + ")";
                } else {
                    std::string out = "(letrec";
                    for (const auto& f : n.group) out += nl + fundef(f, indent + 2);
                    return out + nl + expr(*n.body, indent + 2, indent + 2) + ")";
                }
            },
            e.node);
    }

    std::string fundef(const FunDef& f, std::size_t indent) {
        std::string out = "(fun ";
        if (f.tail_mod_cons) out += "(@ tail_mod_cons) ";
        out += f.name + " (";
        for (std::size_t i = 0; i < f.params.size(); ++i) {
            if (i) out += ' ';
            out += f.params[i];
        }
        out += ")\n" + spaces(indent + 2) + expr(*f.body, indent + 2, indent + 2) + ")";
        return out;
    }

private:
    std::string children(const std::vector<ExprPtr>& args, std::size_t indent) {
        std::string out;
        for (const auto& a : args) out += "\n" + spaces(indent + 2) + expr(*a, indent + 2, indent + 2);
        return out;
    }

    std::string clause(const Clause& c, std::size_t indent) {
        std::string head = "(case " + print_pattern(c.pattern);
        if (!contains_breaking(*c.body)) {
            std::string f = flat(*c.body);
            if (indent + head.size() + 1 + f.size() + 1 <= kWidth) return head + " " + f + ")";
        }
        return head + "\n" + spaces(indent + 2) + expr(*c.body, indent + 2, indent + 2) + ")";
    }
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

ExprPtr parse_expr(std::string_view text) { return Parser(text).single_expr(); }

std::string print_pattern(const Pattern& p) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, PVar>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, PWild>) {
                return "_";
            } else if constexpr (std::is_same_v<T, PInt>) {
                return std::to_string(n.value);
            } else {
                if (n.args.empty() && std::isupper(static_cast<unsigned char>(n.tag[0]))) return n.tag;
                std::string out = "(" + n.tag;
                for (const auto& a : n.args) out += " " + print_pattern(a);
                return out + ")";
            }
        },
        p.node);
}

std::string print_expr(const Expr& e) { return Printer().expr(e, 0, 0); }

std::string print_program(const Program& p) { return Printer().program(p); }

}  // namespace tmc
