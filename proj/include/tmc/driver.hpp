// Command implementations behind the tmc-forge executable.
//
// Each command writes to the given streams and returns the process exit
// code: 0 on success (warnings allowed), 1 on usage, parse or analysis
// errors, 2 on runtime errors or behavioural differences.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tmc/ir.hpp"
#include "tmc/runtime.hpp"
#include "tmc/transform.hpp"

namespace tmc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitStatic = 1;
inline constexpr int kExitRuntime = 2;

struct Io {
    std::ostream& out;
    std::ostream& err;
    bool color = false;
};

/// Default arguments for an entry point, read from `; @entry NAME SPEC...`
/// comment lines.
struct EntryDirective {
    std::string name;
    std::vector<std::string> args;
};

std::vector<EntryDirective> read_entry_directives(const std::string& text);

/// Seed used for argument `index` of a trial seeded with `seed`.
std::uint64_t arg_seed(std::uint64_t seed, std::size_t index);

/// Builds argument values in `m`'s store: function names become function
/// values, everything else goes through gen_value. Throws UsageError.
std::vector<Value> make_args(Machine& m, const std::vector<std::string>& specs, std::uint64_t seed);

int cmd_parse(const std::string& path, Io io);

struct TransformCmd {
    std::string path;
    std::optional<std::string> out_path;
    bool trace_rules = false;
};
int cmd_transform(const TransformCmd& cmd, Io io);

struct RunCmd {
    std::string path;
    std::optional<std::string> entry;  // main when absent
    std::vector<std::string> args;     // defaults to the entry's directive
    bool transform = false;            // run the TMC-transformed program
    bool metrics = false;
    std::uint64_t seed = 0;
    Limits limits;
};
int cmd_run(const RunCmd& cmd, Io io);

struct DiffFailure {
    std::uint64_t seed = 0;
    std::string input;
    std::string lhs;
    std::string rhs;
};

struct TraceDivergence {
    std::uint64_t seed = 0;
    std::size_t position = 0;  // first differing trace index
};

struct DiffReport {
    std::string entry;
    std::uint64_t trials = 0;
    std::vector<DiffFailure> failures;
    std::vector<TraceDivergence> trace_divergences;
    std::uint64_t hole_errors = 0;  // HoleEscape / NonHoleOverwrite on either side
};

/// Runs `entry` of both programs on `trials` inputs seeded `seed`,
/// `seed + 1`, ... Outcomes agree when both values are structurally equal
/// or both runs fail with the same error. When the transformed program has
/// a DPS companion for `entry`, it is also run into a scratch destination
/// and compared.
DiffReport diff_programs(const Program& original, const Program& transformed, const std::string& entry,
                         const std::vector<std::string>& arg_specs, std::uint64_t trials, std::uint64_t seed,
                         Limits limits = {});

struct DiffCmd {
    std::string path;
    std::optional<std::string> entry;         // every @entry when absent
    std::vector<std::string> args;            // defaults to the directive
    std::optional<std::string> transformed;   // compare against this file
    std::uint64_t trials = 100;
    std::uint64_t seed = 0;
    Limits limits;
};
int cmd_diff(const DiffCmd& cmd, Io io, std::vector<DiffReport>* reports = nullptr);

struct BenchRow {
    std::string variant;
    std::uint64_t size = 0;
    std::uint64_t max_stack_depth = 0;
    std::uint64_t allocations = 0;
    std::uint64_t dest_writes = 0;
    std::uint64_t steps = 0;
    std::optional<std::string> error;  // runtime error name
};

/// One row per (entry, size). Sized generator specs in the arguments take
/// the row's size. Runtime errors are recorded in the row.
std::vector<BenchRow> bench_program(const Program& p, const std::vector<EntryDirective>& entries,
                                    const std::vector<std::uint64_t>& sizes, std::uint64_t seed, Limits limits = {});

std::string bench_table(const std::vector<BenchRow>& rows);
std::string bench_csv(const std::vector<BenchRow>& rows);

struct BenchCmd {
    std::string path;
    std::vector<std::string> entries;  // every @entry when empty
    std::vector<std::uint64_t> sizes{10, 100, 1000, 10000};
    bool original = false;             // bench the untransformed program
    std::uint64_t seed = 0;
    std::optional<std::string> csv_path;
    Limits limits;
};
int cmd_bench(const BenchCmd& cmd, Io io, std::vector<BenchRow>* rows = nullptr);

}  // namespace tmc
