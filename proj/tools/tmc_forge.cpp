// tmc-forge: parse, transform, run, diff and bench tail_mod_cons programs.

#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "tmc/driver.hpp"

namespace {

bool use_color() {
    const char* env = std::getenv("TMC_FORGE_COLOR");
    if (env && std::string(env) == "0") return false;
    return isatty(STDERR_FILENO) != 0;
}

void add_limits(CLI::App* cmd, tmc::Limits& limits) {
    cmd->add_option("--max-stack", limits.max_stack, "Frame limit (StackLimit beyond it)");
    cmd->add_option("--max-steps", limits.max_steps, "Evaluation step limit");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail-modulo-cons transformer and evaluator"};
    app.require_subcommand(1);

    std::string parse_path;
    auto* parse = app.add_subcommand("parse", "Check a program and print it in canonical form");
    parse->add_option("file", parse_path)->required();

    tmc::TransformCmd transform_cmd;
    auto* transform = app.add_subcommand("transform", "Print the TMC-transformed program");
    transform->add_option("file", transform_cmd.path)->required();
    transform->add_option("--out", transform_cmd.out_path, "Write the program here instead of stdout");
    transform->add_flag("--trace-rules", transform_cmd.trace_rules, "Print each applied rule to stderr");

    tmc::RunCmd run_cmd;
    std::string run_entry;
    auto* run = app.add_subcommand("run", "Evaluate main or an entry point");
    run->add_option("file", run_cmd.path)->required();
    run->add_option("--entry", run_entry, "Function to call (default: main)");
    run->add_option("--arg", run_cmd.args, "Argument: value literal, generator spec or function name");
    run->add_flag("--tmc", run_cmd.transform, "Transform the program before running it");
    run->add_flag("--metrics", run_cmd.metrics, "Print the metrics record");
    run->add_option("--seed", run_cmd.seed, "Generator seed");
    add_limits(run, run_cmd.limits);

    tmc::DiffCmd diff_cmd;
    std::string diff_entry, diff_transformed;
    auto* diff = app.add_subcommand("diff", "Compare original and transformed programs on random inputs");
    diff->add_option("file", diff_cmd.path)->required();
    diff->add_option("--entry", diff_entry, "Entry point (default: every @entry line)");
    diff->add_option("--arg", diff_cmd.args, "Argument spec (default: the @entry line)");
    diff->add_option("--transformed", diff_transformed, "Use this file instead of transforming");
    diff->add_option("--trials", diff_cmd.trials, "Number of seeded trials");
    diff->add_option("--seed", diff_cmd.seed, "First trial seed");
    add_limits(diff, diff_cmd.limits);

    tmc::BenchCmd bench_cmd;
    auto* bench = app.add_subcommand("bench", "Tabulate metrics per entry and input size");
    bench->add_option("file", bench_cmd.path)->required();
    bench->add_option("--entries", bench_cmd.entries, "Entries to run (default: every @entry line)")->delimiter(',');
    bench->add_option("--sizes", bench_cmd.sizes, "Input sizes")->delimiter(',');
    bench->add_flag("--original", bench_cmd.original, "Bench the untransformed program");
    bench->add_option("--seed", bench_cmd.seed, "Generator seed");
    bench->add_option("--csv", bench_cmd.csv_path, "Also write CSV here");
    add_limits(bench, bench_cmd.limits);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : tmc::kExitStatic;
    }

    tmc::Io io{std::cout, std::cerr, use_color()};
    if (*parse) return tmc::cmd_parse(parse_path, io);
    if (*transform) return tmc::cmd_transform(transform_cmd, io);
    if (*run) {
        if (!run_entry.empty()) run_cmd.entry = run_entry;
        return tmc::cmd_run(run_cmd, io);
    }
    if (*diff) {
        if (!diff_entry.empty()) diff_cmd.entry = diff_entry;
        if (!diff_transformed.empty()) diff_cmd.transformed = diff_transformed;
        return tmc::cmd_diff(diff_cmd, io);
    }
    return tmc::cmd_bench(bench_cmd, io);
}
