#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "tmc/driver.hpp"

using namespace tmc;
using tmc::test::corpus_path;
using tmc::test::read_text;
using tmc::test::tests_path;

namespace {

struct Captured {
    std::ostringstream out, err;
    Io io() { return Io{out, err, false}; }
};

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("tmc_forge_test_" + name);
}

}  // namespace

TEST_CASE("entry directives") {
    auto ds = read_entry_directives("; @entry map add1 list:3\n(program)\n;  @entry  f\n; @other x\n");
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].name == "map");
    CHECK(ds[0].args == std::vector<std::string>{"add1", "list:3"});
    CHECK(ds[1].name == "f");
    CHECK(ds[1].args.empty());
}

TEST_CASE("parse prints the canonical program") {
    Captured c;
    CHECK(cmd_parse(corpus_path("map.tmc"), c.io()) == kExitOk);
    CHECK(c.out.str().rfind("(program\n  (letrec\n    (fun (@ tail_mod_cons) map (f xs)", 0) == 0);
    CHECK(c.err.str().empty());
}

TEST_CASE("missing file is a usage error") {
    Captured c;
    CHECK(cmd_parse("/nonexistent/x.tmc", c.io()) == kExitStatic);
    CHECK(c.err.str().find("cannot read") != std::string::npos);
}

TEST_CASE("transform writes the golden") {
    Captured c;
    CHECK(cmd_transform({corpus_path("map.tmc"), std::nullopt, false}, c.io()) == kExitOk);
    CHECK(c.out.str() == read_text(tests_path("golden/map_transformed.tmc")));

    auto out = temp_file("map_out.tmc");
    Captured d;
    CHECK(cmd_transform({corpus_path("map.tmc"), out.string(), true}, d.io()) == kExitOk);
    CHECK(read_text(out.string()) == c.out.str());
    CHECK(d.out.str().empty());
    CHECK(d.err.str().rfind("rule Direct-Match map:/\n", 0) == 0);
    std::filesystem::remove(out);
}

TEST_CASE("ambiguity exits 1 with candidates") {
    Captured c;
    CHECK(cmd_transform({corpus_path("tree_map_ambiguous.tmc"), std::nullopt, false}, c.io()) == kExitStatic);
    CHECK(c.out.str().empty());
    std::string err = c.err.str();
    CHECK(err.find("error AmbiguousTmc") != std::string::npos);
    CHECK(err.find("  candidate tree_map:/2/0\n") != std::string::npos);
    CHECK(err.find("  candidate tree_map:/2/2\n") != std::string::npos);
}

TEST_CASE("warnings keep exit 0") {
    Captured c;
    CHECK(cmd_transform({corpus_path("useless_mark.tmc"), std::nullopt, false}, c.io()) == kExitOk);
    CHECK(c.err.str().find("warning UselessMark") != std::string::npos);
}

TEST_CASE("color wraps diagnostics") {
    std::ostringstream out, err;
    CHECK(cmd_transform({corpus_path("useless_mark.tmc"), std::nullopt, false}, Io{out, err, true}) == kExitOk);
    CHECK(err.str().find("\x1b[33m") != std::string::npos);
}

TEST_CASE("run map on a seeded list") {
    RunCmd cmd;
    cmd.path = corpus_path("map.tmc");
    cmd.entry = "map";
    cmd.args = {"add1", "list:3"};
    cmd.seed = 7;
    cmd.metrics = true;
    Captured c;
    CHECK(cmd_run(cmd, c.io()) == kExitOk);
    CHECK(c.out.str() ==
          "(Cons 77 (Cons 92 (Cons 1 Nil)))\nmax_stack_depth=4\nallocations=4\ndest_writes=0\neffect_trace=[]\n"
          "steps=33\n");

    cmd.transform = true;
    Captured t;
    CHECK(cmd_run(cmd, t.io()) == kExitOk);
    CHECK(t.out.str() ==
          "(Cons 77 (Cons 92 (Cons 1 Nil)))\nmax_stack_depth=2\nallocations=4\ndest_writes=3\neffect_trace=[]\n"
          "steps=57\n");
}

TEST_CASE("run main and directive defaults") {
    RunCmd cmd;
    cmd.path = corpus_path("map.tmc");
    Captured c;
    CHECK(cmd_run(cmd, c.io()) == kExitOk);
    CHECK(c.out.str() == "(Cons 2 (Cons 3 (Cons 4 Nil)))\n");

    cmd.entry = "map";
    Captured d;
    CHECK(cmd_run(cmd, d.io()) == kExitOk);
    CHECK(d.out.str().rfind("(Cons", 0) == 0);
}

TEST_CASE("run errors") {
    RunCmd cmd;
    cmd.path = corpus_path("map.tmc");
    cmd.entry = "map";
    cmd.args = {"add1", "list:100"};
    cmd.limits.max_stack = 10;
    Captured c;
    CHECK(cmd_run(cmd, c.io()) == kExitRuntime);
    CHECK(c.err.str().rfind("runtime StackLimit map ", 0) == 0);

    RunCmd bad = cmd;
    bad.limits = {};
    bad.entry = "nope";
    Captured d;
    CHECK(cmd_run(bad, d.io()) == kExitStatic);

    bad.entry = "map";
    bad.args = {"add1"};
    Captured e;
    CHECK(cmd_run(bad, e.io()) == kExitStatic);

    bad.args = {"add1", "list:zz"};
    Captured f;
    CHECK(cmd_run(bad, f.io()) == kExitStatic);
}

TEST_CASE("diff reports zero failures on map") {
    DiffCmd cmd;
    cmd.path = corpus_path("map.tmc");
    cmd.trials = 30;
    Captured c;
    std::vector<DiffReport> reports;
    CHECK(cmd_diff(cmd, c.io(), &reports) == kExitOk);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].failures.empty());
    CHECK(reports[0].hole_errors == 0);
    CHECK(c.out.str() == "diff map: 30 trials, 0 failures, 0 trace divergences, 0 hole errors\n");
}

TEST_CASE("diff with zero trials succeeds") {
    DiffCmd cmd;
    cmd.path = corpus_path("merge.tmc");
    cmd.trials = 0;
    Captured c;
    CHECK(cmd_diff(cmd, c.io()) == kExitOk);
}

TEST_CASE("diff against a broken transform fails") {
    DiffCmd cmd;
    cmd.path = corpus_path("map.tmc");
    cmd.transformed = tests_path("fixtures/map_bad_index.tmc");
    cmd.entry = "map";
    cmd.args = {"add1", "list:1..10"};
    cmd.trials = 10;
    Captured c;
    std::vector<DiffReport> reports;
    CHECK(cmd_diff(cmd, c.io(), &reports) == kExitRuntime);
    REQUIRE(reports.size() == 1);
    CHECK_FALSE(reports[0].failures.empty());
    CHECK(reports[0].hole_errors > 0);
}

TEST_CASE("diff without entries is a usage error") {
    DiffCmd cmd;
    cmd.path = corpus_path("useless_mark.tmc");
    Captured c;
    CHECK(cmd_diff(cmd, c.io()) == kExitStatic);
}

TEST_CASE("bench table and csv") {
    BenchCmd cmd;
    cmd.path = corpus_path("map_bench.tmc");
    cmd.entries = {"map", "map_direct"};
    cmd.sizes = {10, 100};
    auto csv = temp_file("bench.csv");
    cmd.csv_path = csv.string();
    Captured c;
    std::vector<BenchRow> rows;
    CHECK(cmd_bench(cmd, c.io(), &rows) == kExitOk);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].variant == "map");
    CHECK(rows[0].max_stack_depth == rows[1].max_stack_depth);
    CHECK(rows[3].max_stack_depth == 101);
    std::string text = read_text(csv.string());
    CHECK(text.rfind("variant,size,max_stack_depth,allocations,dest_writes,steps\nmap,10,", 0) == 0);
    CHECK(c.out.str().rfind("variant", 0) == 0);
    std::filesystem::remove(csv);
}

TEST_CASE("bench records runtime errors per cell") {
    BenchCmd cmd;
    cmd.path = corpus_path("map_bench.tmc");
    cmd.entries = {"map_direct", "map"};
    cmd.sizes = {10, 1000};
    cmd.limits.max_stack = 500;
    Captured c;
    std::vector<BenchRow> rows;
    CHECK(cmd_bench(cmd, c.io(), &rows) == kExitRuntime);
    REQUIRE(rows.size() == 4);
    CHECK_FALSE(rows[0].error);
    CHECK(rows[1].error == std::optional<std::string>("StackLimit"));
    CHECK_FALSE(rows[3].error);
    CHECK(c.out.str().find("StackLimit") != std::string::npos);
}

TEST_CASE("bench rows are deterministic") {
    auto p = parse_program(read_text(corpus_path("map_bench.tmc")));
    auto t = *transform_program(p).program;
    auto ds = read_entry_directives(read_text(corpus_path("map_bench.tmc")));
    CHECK(bench_csv(bench_program(t, ds, {50}, 3)) == bench_csv(bench_program(t, ds, {50}, 3)));
}
