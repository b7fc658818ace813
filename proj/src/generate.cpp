#include "tmc/generate.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <vector>

namespace tmc {

namespace {

std::uint64_t parse_count(const std::string& text, const std::string& spec) {
    std::uint64_t n = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (text.empty() || ec != std::errc() || p != text.data() + text.size())
        throw UsageError("bad generator spec '" + spec + "': '" + text + "' is not a count");
    return n;
}

// `N` or `A..B`, drawing the length from the generator in the range case.
std::uint64_t parse_length(const std::string& arg, const std::string& spec, Lcg& rng) {
    auto dots = arg.find("..");
    if (dots == std::string::npos) return parse_count(arg, spec);
    std::uint64_t lo = parse_count(arg.substr(0, dots), spec);
    std::uint64_t hi = parse_count(arg.substr(dots + 2), spec);
    if (lo > hi) throw UsageError("bad generator spec '" + spec + "': empty range");
    return static_cast<std::uint64_t>(rng.range(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

Value build_list(const std::vector<Value>& items, Store& s) {
    Value cur = Value::block(s.alloc("Nil", {}));
    for (auto it = items.rbegin(); it != items.rend(); ++it) cur = Value::block(s.alloc("Cons", {*it, cur}));
    return cur;
}

std::vector<Value> random_ints(std::uint64_t n, Lcg& rng) {
    std::vector<Value> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(Value::integer(rng.range(0, 99)));
    return out;
}

Value cmm_leaf(Lcg& rng, Store& s) {
    switch (rng.range(0, 2)) {
        case 0: return Value::block(s.alloc("Cconst_int", {Value::integer(rng.range(0, 99))}));
        case 1: return Value::block(s.alloc("Cvar", {Value::integer(rng.range(0, 9))}));
        default: return Value::block(s.alloc("Cexit", {}));
    }
}

Value cmm_chain(std::uint64_t n, bool then_direction, Lcg& rng, Store& s) {
    // Choose node kinds outermost first, then build innermost first.
    std::vector<int> kinds;
    kinds.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) kinds.push_back(then_direction ? 2 : static_cast<int>(rng.range(0, 2)));
    Value cur = cmm_leaf(rng, s);
    for (auto it = kinds.rbegin(); it != kinds.rend(); ++it) {
        switch (*it) {
            case 0:
                cur = Value::block(s.alloc("Clet", {Value::integer(rng.range(0, 9)), cmm_leaf(rng, s), cur}));
                break;
            case 1: cur = Value::block(s.alloc("Csequence", {cmm_leaf(rng, s), cur})); break;
            default: {
                Value cond = cmm_leaf(rng, s);
                Value other = cmm_leaf(rng, s);
                cur = then_direction ? Value::block(s.alloc("Cifthenelse", {cond, cur, other}))
                                     : Value::block(s.alloc("Cifthenelse", {cond, other, cur}));
            }
        }
    }
    return cur;
}

Value tree(std::uint64_t depth, Lcg& rng, Store& s) {
    if (depth == 0 || rng.range(0, 3) == 0) return Value::block(s.alloc("Leaf", {}));
    Value l = tree(depth - 1, rng, s);
    Value x = Value::integer(rng.range(0, 99));
    Value r = tree(depth - 1, rng, s);
    return Value::block(s.alloc("Node", {l, x, r}));
}

const char* const kSized[] = {"list", "sortedlist", "lists", "tree", "cmmlike", "cmmthen"};

}  // namespace

bool is_sized_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) return false;
    std::string kind = spec.substr(0, colon);
    return std::find(std::begin(kSized), std::end(kSized), kind) != std::end(kSized);
}

std::string with_size(const std::string& spec, std::uint64_t size) {
    if (!is_sized_spec(spec)) return spec;
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    if (kind == "lists") {
        auto x = rest.find('x');
        return kind + ":" + std::to_string(size) + (x == std::string::npos ? "" : rest.substr(x));
    }
    return kind + ":" + std::to_string(size);
}

Value gen_value(const std::string& spec, std::uint64_t seed, Store& store) {
    Lcg rng(seed);
    if (spec == "int") return Value::integer(rng.range(-100, 100));
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        try {
            return parse_value_literal(spec, store);
        } catch (const std::invalid_argument& e) {
            throw UsageError("bad argument '" + spec + "': " + e.what());
        }
    }
    std::string kind = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    if (kind == "list") return build_list(random_ints(parse_length(arg, spec, rng), rng), store);
    if (kind == "sortedlist") {
        std::uint64_t n = parse_length(arg, spec, rng);
        std::vector<Value> items;
        std::int64_t cur = rng.range(0, 9);
        for (std::uint64_t i = 0; i < n; ++i) {
            items.push_back(Value::integer(cur));
            cur += rng.range(0, 9);
        }
        return build_list(items, store);
    }
    if (kind == "lists") {
        auto x = arg.find('x');
        if (x == std::string::npos) throw UsageError("bad generator spec '" + spec + "': expected lists:NxM");
        std::uint64_t outer = parse_length(arg.substr(0, x), spec, rng);
        std::string inner_spec = arg.substr(x + 1);
        std::vector<Value> rows;
        for (std::uint64_t i = 0; i < outer; ++i)
            rows.push_back(build_list(random_ints(parse_length(inner_spec, spec, rng), rng), store));
        return build_list(rows, store);
    }
    if (kind == "tree") return tree(parse_count(arg, spec), rng, store);
    if (kind == "cmmlike") return cmm_chain(parse_length(arg, spec, rng), false, rng, store);
    if (kind == "cmmthen") return cmm_chain(parse_length(arg, spec, rng), true, rng, store);
    throw UsageError("unknown generator '" + kind + "' in '" + spec + "'");
}

}  // namespace tmc
