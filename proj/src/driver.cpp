#include "tmc/driver.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tmc/analysis.hpp"
#include "tmc/generate.hpp"
#include "tmc/parser.hpp"
#include "tmc/well_formed.hpp"

namespace tmc {

namespace {

const char* kRed = "\x1b[31m";
const char* kYellow = "\x1b[33m";
const char* kReset = "\x1b[0m";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags, const std::string& file, Io& io) {
    for (const auto& d : diags) {
        if (io.color) io.err << (d.severity == Severity::Error ? kRed : kYellow);
        io.err << render(d, file);
        if (io.color) io.err << kReset;
        io.err << '\n';
        for (const auto& p : d.candidate_paths) io.err << "  candidate " << d.root << ':' << to_string(p) << '\n';
    }
}

void print_runtime_error(const RuntimeError& e, Io& io) {
    if (io.color) io.err << kRed;
    io.err << "runtime " << to_string(e.code()) << ' ' << (e.where().empty() ? "-" : e.where()) << ' ' << e.detail();
    if (io.color) io.err << kReset;
    io.err << '\n';
}

// Parses and checks a file. Prints diagnostics; returns nullopt on errors.
std::optional<Program> load(const std::string& path, Io& io) {
    std::string text = read_file(path);
    Program p;
    try {
        p = parse_program(text);
    } catch (const ParseError& e) {
        io.err << "error ParseError " << path << ':' << e.span().line << ':' << e.span().column << ' ' << e.message()
               << '\n';
        return std::nullopt;
    }
    auto diags = well_formed(p);
    if (has_errors(diags)) {
        print_diagnostics(diags, path, io);
        return std::nullopt;
    }
    return p;
}

std::optional<Program> transformed(const Program& p, const std::string& path, Io& io,
                                   const TransformOptions& options = {}) {
    auto r = transform_program(p, options);
    print_diagnostics(r.diagnostics, path, io);
    return r.program;
}

const EntryDirective* find_entry(const std::vector<EntryDirective>& ds, const std::string& name) {
    for (const auto& d : ds)
        if (d.name == name) return &d;
    return nullptr;
}

std::string render_args(Machine& m, const std::vector<Value>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? " " : "") + m.render(args[i]);
    return out;
}

bool is_hole_error(const std::optional<RuntimeError>& e) {
    return e && (e->code() == RuntimeErrorCode::HoleEscape || e->code() == RuntimeErrorCode::NonHoleOverwrite);
}

std::string describe(const Outcome& o, Machine& m) {
    if (o.error) return std::string("error ") + to_string(o.error->code());
    return m.render(*o.value);
}

bool same_outcome(const Outcome& a, const Machine& ma, const Outcome& b, const Machine& mb) {
    if (a.error || b.error) return a.error && b.error && a.error->code() == b.error->code();
    return struct_eq(ma.store(), *a.value, mb.store(), *b.value);
}

}  // namespace

std::vector<EntryDirective> read_entry_directives(const std::string& text) {
    std::vector<EntryDirective> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream words(line);
        std::string semi, tag;
        if (!(words >> semi >> tag) || semi != ";" || tag != "@entry") continue;
        EntryDirective d;
        if (!(words >> d.name)) continue;
        for (std::string w; words >> w;) d.args.push_back(w);
        out.push_back(std::move(d));
    }
    return out;
}

std::uint64_t arg_seed(std::uint64_t seed, std::size_t index) { return seed + 1'000'003ULL * index; }

std::vector<Value> make_args(Machine& m, const std::vector<std::string>& specs, std::uint64_t seed) {
    std::vector<Value> out;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (auto f = m.function_value(specs[i])) {
            out.push_back(*f);
            continue;
        }
        out.push_back(gen_value(specs[i], arg_seed(seed, i), m.store()));
    }
    return out;
}

int cmd_parse(const std::string& path, Io io) {
    try {
        auto p = load(path, io);
        if (!p) return kExitStatic;
        io.out << print_program(*p) << '\n';
        return kExitOk;
    } catch (const UsageError& e) {
        io.err << "error " << e.what() << '\n';
        return kExitStatic;
    }
}

int cmd_transform(const TransformCmd& cmd, Io io) {
    try {
        auto p = load(cmd.path, io);
        if (!p) return kExitStatic;
        std::vector<std::string> trace;
        TransformOptions options;
        if (cmd.trace_rules) options.rule_trace = &trace;
        auto t = transformed(*p, cmd.path, io, options);
        if (!t) return kExitStatic;
        for (const auto& line : trace) io.err << "rule " << line << '\n';
        std::string text = print_program(*t) + '\n';
        if (cmd.out_path) {
            std::ofstream out(*cmd.out_path, std::ios::binary);
            if (!out) throw UsageError("cannot write '" + *cmd.out_path + "'");
            out << text;
        } else {
            io.out << text;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        io.err << "error " << e.what() << '\n';
        return kExitStatic;
    }
}

int cmd_run(const RunCmd& cmd, Io io) {
    try {
        auto p = load(cmd.path, io);
        if (!p) return kExitStatic;
        if (cmd.transform) {
            p = transformed(*p, cmd.path, io);
            if (!p) return kExitStatic;
        }
        Machine m(*p, cmd.limits);
        Value v;
        try {
            if (!cmd.entry) {
                if (!cmd.args.empty()) throw UsageError("--arg needs --entry");
                v = m.eval_main();
            } else {
                if (!m.has_function(*cmd.entry)) throw UsageError("no function '" + *cmd.entry + "'");
                std::vector<std::string> specs = cmd.args;
                if (specs.empty()) {
                    auto directives = read_entry_directives(read_file(cmd.path));
                    if (auto* d = find_entry(directives, *cmd.entry)) specs = d->args;
                }
                if (specs.size() != m.arity(*cmd.entry))
                    throw UsageError("'" + *cmd.entry + "' expects " + std::to_string(m.arity(*cmd.entry)) +
                                     " arguments, got " + std::to_string(specs.size()));
                auto args = make_args(m, specs, cmd.seed);
                v = m.call(*cmd.entry, args);
            }
        } catch (const RuntimeError& e) {
            print_runtime_error(e, io);
            if (cmd.metrics) io.out << m.metrics().render();
            return kExitRuntime;
        }
        io.out << m.render(v) << '\n';
        if (cmd.metrics) io.out << m.metrics().render();
        return kExitOk;
    } catch (const UsageError& e) {
        io.err << "error " << e.what() << '\n';
        return kExitStatic;
    }
}

DiffReport diff_programs(const Program& original, const Program& transformed, const std::string& entry,
                         const std::vector<std::string>& arg_specs, std::uint64_t trials, std::uint64_t seed,
                         Limits limits) {
    DiffReport report;
    report.entry = entry;
    report.trials = trials;
    MarkSet marks = collect_marks(original);
    std::optional<std::string> dps;
    if (marks.is_marked(entry)) dps = marks.dps_of(entry);

    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t s = seed + t;
        Machine lhs(original, limits);
        Machine rhs(transformed, limits);
        auto lhs_args = make_args(lhs, arg_specs, s);
        auto rhs_args = make_args(rhs, arg_specs, s);
        Outcome a = eval(lhs, entry, lhs_args);
        Outcome b = eval(rhs, entry, rhs_args);
        if (is_hole_error(a.error)) ++report.hole_errors;
        if (is_hole_error(b.error)) ++report.hole_errors;

        if (!same_outcome(a, lhs, b, rhs)) {
            report.failures.push_back({s, render_args(lhs, lhs_args), describe(a, lhs), describe(b, rhs)});
        } else if (a.metrics.effect_trace != b.metrics.effect_trace) {
            const auto& x = a.metrics.effect_trace;
            const auto& y = b.metrics.effect_trace;
            std::size_t pos = 0;
            while (pos < x.size() && pos < y.size() && x[pos] == y[pos]) ++pos;
            report.trace_divergences.push_back({s, pos});
        }

        if (dps && rhs.has_function(*dps)) {
            Machine scratch(transformed, limits);
            auto args = make_args(scratch, arg_specs, s);
            Outcome c;
            try {
                c.value = scratch.call_into_scratch(*dps, args);
            } catch (const RuntimeError& e) {
                c.error = e;
            }
            if (is_hole_error(c.error)) ++report.hole_errors;
            if (!same_outcome(a, lhs, c, scratch))
                report.failures.push_back(
                    {s, render_args(lhs, lhs_args) + " via " + *dps, describe(a, lhs), describe(c, scratch)});
        }
    }
    return report;
}

int cmd_diff(const DiffCmd& cmd, Io io, std::vector<DiffReport>* reports) {
    try {
        auto p = load(cmd.path, io);
        if (!p) return kExitStatic;
        std::optional<Program> t;
        if (cmd.transformed) {
            t = load(*cmd.transformed, io);
        } else {
            t = transformed(*p, cmd.path, io);
        }
        if (!t) return kExitStatic;

        auto directives = read_entry_directives(read_file(cmd.path));
        std::vector<EntryDirective> todo;
        if (cmd.entry) {
            EntryDirective d{*cmd.entry, cmd.args};
            if (d.args.empty())
                if (auto* found = find_entry(directives, *cmd.entry)) d.args = found->args;
            todo.push_back(std::move(d));
        } else {
            if (!cmd.args.empty()) throw UsageError("--arg needs --entry");
            todo = directives;
        }
        if (todo.empty()) throw UsageError("no entry: pass --entry or add an `; @entry` line");

        bool failed = false;
        for (const auto& d : todo) {
            {
                Machine probe(*p);
                if (!probe.has_function(d.name)) throw UsageError("no function '" + d.name + "'");
                if (probe.arity(d.name) != d.args.size())
                    throw UsageError("'" + d.name + "' expects " + std::to_string(probe.arity(d.name)) +
                                     " arguments, got " + std::to_string(d.args.size()));
            }
            DiffReport r = diff_programs(*p, *t, d.name, d.args, cmd.trials, cmd.seed, cmd.limits);
            io.out << "diff " << r.entry << ": " << r.trials << " trials, " << r.failures.size() << " failures, "
                   << r.trace_divergences.size() << " trace divergences, " << r.hole_errors << " hole errors\n";
            for (const auto& f : r.failures)
                io.out << "  failure seed=" << f.seed << " input=" << f.input << "\n    original:    " << f.lhs
                       << "\n    transformed: " << f.rhs << '\n';
            for (const auto& td : r.trace_divergences)
                io.out << "  trace divergence seed=" << td.seed << " position=" << td.position << '\n';
            failed = failed || !r.failures.empty();
            if (reports) reports->push_back(std::move(r));
        }
        return failed ? kExitRuntime : kExitOk;
    } catch (const UsageError& e) {
        io.err << "error " << e.what() << '\n';
        return kExitStatic;
    }
}

std::vector<BenchRow> bench_program(const Program& p, const std::vector<EntryDirective>& entries,
                                    const std::vector<std::uint64_t>& sizes, std::uint64_t seed, Limits limits) {
    std::vector<BenchRow> rows;
    for (const auto& e : entries) {
        for (auto size : sizes) {
            BenchRow row;
            row.variant = e.name;
            row.size = size;
            std::vector<std::string> specs;
            for (const auto& a : e.args) specs.push_back(with_size(a, size));
            Machine m(p, limits);
            auto args = make_args(m, specs, seed);
            Outcome o = eval(m, e.name, args);
            if (o.error) row.error = to_string(o.error->code());
            row.max_stack_depth = o.metrics.max_stack_depth;
            row.allocations = o.metrics.allocations;
            row.dest_writes = o.metrics.dest_writes;
            row.steps = o.metrics.steps;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
    const std::vector<std::string> head{"variant", "size", "max_stack_depth", "allocations", "dest_writes", "steps"};
    std::vector<std::vector<std::string>> cells{head};
    for (const auto& r : rows) {
        std::vector<std::string> line{r.variant, std::to_string(r.size), std::to_string(r.max_stack_depth),
                                      std::to_string(r.allocations), std::to_string(r.dest_writes),
                                      std::to_string(r.steps)};
        if (r.error) line.push_back(*r.error);
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(head.size() + 1, 0);
    for (const auto& line : cells)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    std::ostringstream out;
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) out << "  ";
            if (i == 0 || i == head.size())
                out << std::left << std::setw(i + 1 < line.size() ? static_cast<int>(width[i]) : 0) << line[i];
            else
                out << std::right << std::setw(static_cast<int>(width[i])) << line[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "variant,size,max_stack_depth,allocations,dest_writes,steps\n";
    for (const auto& r : rows)
        out << r.variant << ',' << r.size << ',' << r.max_stack_depth << ',' << r.allocations << ',' << r.dest_writes
            << ',' << r.steps << '\n';
    return out.str();
}

int cmd_bench(const BenchCmd& cmd, Io io, std::vector<BenchRow>* rows_out) {
    try {
        auto p = load(cmd.path, io);
        if (!p) return kExitStatic;
        if (!cmd.original) {
            p = transformed(*p, cmd.path, io);
            if (!p) return kExitStatic;
        }
        auto directives = read_entry_directives(read_file(cmd.path));
        std::vector<EntryDirective> todo;
        if (cmd.entries.empty()) {
            todo = directives;
        } else {
            for (const auto& name : cmd.entries) {
                auto* d = find_entry(directives, name);
                if (!d) throw UsageError("no `; @entry " + name + "` line to take arguments from");
                todo.push_back(*d);
            }
        }
        if (todo.empty()) throw UsageError("nothing to bench: add `; @entry` lines");
        Machine probe(*p);
        for (const auto& d : todo)
            if (!probe.has_function(d.name)) throw UsageError("no function '" + d.name + "'");

        auto rows = bench_program(*p, todo, cmd.sizes, cmd.seed, cmd.limits);
        io.out << bench_table(rows);
        if (cmd.csv_path) {
            std::ofstream csv(*cmd.csv_path, std::ios::binary);
            if (!csv) throw UsageError("cannot write '" + *cmd.csv_path + "'");
            csv << bench_csv(rows);
        }
        bool failed = std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.error.has_value(); });
        if (rows_out) *rows_out = std::move(rows);
        return failed ? kExitRuntime : kExitOk;
    } catch (const UsageError& e) {
        io.err << "error " << e.what() << '\n';
        return kExitStatic;
    }
}

}  // namespace tmc
