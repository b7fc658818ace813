// Evaluator with proper tail calls, a mutable block store and metrics.
//
// Evaluation is call-by-value and left to right. The machine keeps its
// continuation on the heap, so deep non-tail recursion is bounded by
// `Limits::max_stack` rather than by the native stack. A call whose
// continuation is the end of the current function body reuses the frame.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmc/ir.hpp"

namespace tmc {

struct Value {
    enum class Kind : std::uint8_t { Int, Block, Fun, Hole };
    Kind kind = Kind::Int;
    std::int64_t payload = 0;  // integer, block address or closure index

    static Value integer(std::int64_t n) { return {Kind::Int, n}; }
    static Value block(std::int64_t addr) { return {Kind::Block, addr}; }
    static Value fun(std::int64_t closure) { return {Kind::Fun, closure}; }
    static Value hole() { return {Kind::Hole, 0}; }

    bool is_hole() const { return kind == Kind::Hole; }
    friend bool operator==(const Value&, const Value&) = default;
};

enum class RuntimeErrorCode {
    MatchFailure,
    UnboundName,
    StackLimit,
    StepLimit,
    HoleEscape,
    NonHoleOverwrite,
    IndexOutOfRange,
    TypeError,
    HoleInspected,
};

const char* to_string(RuntimeErrorCode c);

class RuntimeError : public std::runtime_error {
public:
    RuntimeError(RuntimeErrorCode code, std::string where, const std::string& detail);

    RuntimeErrorCode code() const { return code_; }
    /// Function the error surfaced in, or the field chain for HoleEscape.
    const std::string& where() const { return where_; }
    const std::string& detail() const { return detail_; }

private:
    RuntimeErrorCode code_;
    std::string where_;
    std::string detail_;
};

struct Block {
    std::string tag;
    std::vector<Value> fields;
};

/// Blocks addressed from 0; field indices are 1-based. The first three
/// blocks are the shared immutable `Tuple`, `True` and `False` returned by
/// builtins.
class Store {
public:
    static constexpr std::int64_t kUnit = 0;
    static constexpr std::int64_t kTrue = 1;
    static constexpr std::int64_t kFalse = 2;

    Store();

    std::int64_t alloc(std::string tag, std::vector<Value> fields);
    const Block& at(std::int64_t addr) const;
    std::size_t size() const { return blocks_.size(); }

    /// Raw write used to build test fixtures; no single-write check.
    void poke(std::int64_t addr, std::size_t index, Value v);

    /// Initializing write. Throws IndexOutOfRange or NonHoleOverwrite.
    void set_field(std::int64_t addr, std::int64_t index, Value v);

private:
    std::vector<Block> blocks_;
};

/// Throws HoleEscape naming the first field chain (e.g. `/2/2`) that leads
/// to a hole. Terminates on cyclic graphs.
void assert_no_holes(const Store& s, Value v);

/// Structural equality of two hole-free values that may live in different
/// stores. Cyclic graphs are compared up to bisimulation.
bool struct_eq(const Store& sa, Value a, const Store& sb, Value b);

/// `(Cons 1 (Cons 2 Nil))`; nullary constructors print bare.
std::string render_value(const Store& s, Value v, const std::vector<std::string>* closure_names = nullptr);

/// Parses the rendering syntax back: an integer, a bare constructor name or
/// `(Tag v...)`. Throws std::invalid_argument.
Value parse_value_literal(const std::string& text, Store& s);

struct Limits {
    std::uint64_t max_stack = 1'000'000;
    std::uint64_t max_steps = 1'000'000'000;
};

struct Metrics {
    std::uint64_t max_stack_depth = 0;
    std::uint64_t allocations = 0;
    std::uint64_t dest_writes = 0;
    std::vector<std::string> effect_trace;
    std::uint64_t steps = 0;

    /// One `key=value` per line in a fixed order.
    std::string render() const;
};

class Machine {
public:
    explicit Machine(const Program& p, Limits limits = {});
    ~Machine();
    Machine(const Machine&) = delete;
    Machine& operator=(const Machine&) = delete;

    Store& store() { return store_; }
    const Store& store() const { return store_; }

    /// Calls a toplevel function. Metrics are reset first. The result is
    /// checked to be hole-free.
    Value call(const std::string& entry, const std::vector<Value>& args);

    /// Calls DPS function `entry` with a fresh one-slot scratch block as
    /// destination and returns what it wrote there.
    Value call_into_scratch(const std::string& entry, const std::vector<Value>& args);

    /// Evaluates the program's main expression.
    Value eval_main();

    const Metrics& metrics() const { return metrics_; }
    bool has_function(const std::string& name) const;
    /// First-class value of a toplevel function or builtin.
    std::optional<Value> function_value(const std::string& name) const;
    std::size_t arity(const std::string& name) const;

    std::string render(Value v) const;

private:
    struct Impl;

    const Program& program_;
    Limits limits_;
    Store store_;
    Metrics metrics_;
    std::unique_ptr<Impl> impl_;
};

struct Outcome {
    std::optional<Value> value;
    std::optional<RuntimeError> error;
    Metrics metrics;
};

/// Machine::call that captures runtime errors instead of throwing.
Outcome eval(Machine& m, const std::string& entry, const std::vector<Value>& args);

}  // namespace tmc
