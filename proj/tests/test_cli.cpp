#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "freechoice/cli.hpp"
#include "freechoice/io.hpp"

using namespace freechoice;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(const std::vector<std::string> &args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;

    TempDir()
    {
        path = fs::temp_directory_path() / ("freechoice_test_" + std::to_string(std::rand()) + "_" +
                   std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string write(const std::string &name, const std::string &contents) const
    {
        std::string p = (path / name).string();
        io::write_file(p, contents);
        return p;
    }
    std::string file(const std::string &name) const { return (path / name).string(); }
};

bool single_error_line(const std::string &err, const std::string &prefix)
{
    return err.rfind(prefix, 0) == 0 && err.find('\n') == err.size() - 1;
}

} // namespace

TEST_CASE("parse_instance")
{
    CHECK(io::parse_instance(R"({"blocks": [["a"], ["b", "c"]]})").blocks ==
        std::vector<std::vector<std::string>>{{"a"}, {"b", "c"}});
    auto code = [](const std::string &text) {
        try {
            io::parse_instance(text);
        }
        catch (const InputError &e) {
            return e.code();
        }
        return std::string();
    };
    CHECK(code("{") == "parse");
    CHECK(code("[]") == "validation");
    CHECK(code(R"({"blocks": [[]]})") == "validation");
    CHECK(code(R"({"blocks": [["a b"]]})") == "validation");
    CHECK(code(R"({"blocks": [["a"], ["a"]]})") == "validation");
    CHECK(code(R"({"blocks": [[1]]})") == "validation");
    CHECK(code(R"({"blocks": [["a_1", "B2"]]})").empty());
}

TEST_CASE("result files round trip")
{
    io::ResultFile r;
    r.choices.push_back({Block{"a", "b"}, "b", "pair-odd"});
    r.table = std::vector<io::ResultRecord>{{Block{"a"}, "a", "singleton"}};
    r.meta = {5, 20, 1, 3};
    std::string text = io::dump_result(r);
    CHECK(io::parse_result(text) == r);
    CHECK(io::dump_result(io::parse_result(text)) == text);
    CHECK_THROWS_AS(io::parse_result(R"({"choices": [{"block": ["a"], "chosen": "a", "case": "odd"}]})"), InputError);
}

TEST_CASE("solve command examples")
{
    TempDir dir;
    SUBCASE("singleton")
    {
        auto run = cli({"solve", dir.write("i.json", R"({"blocks": [["a"]]})")});
        REQUIRE(run.code == 0);
        auto r = io::parse_result(run.out);
        REQUIRE(r.choices.size() == 1);
        CHECK(r.choices[0] == io::ResultRecord{Block{"a"}, "a", "singleton"});
        CHECK_FALSE(r.table);
    }
    SUBCASE("pair with the canonical basis")
    {
        auto run = cli({"solve", dir.write("i.json", R"({"blocks": [["a", "b"]]})"), "--seed", "0"});
        REQUIRE(run.code == 0);
        auto r = io::parse_result(run.out);
        CHECK(r.choices.at(0) == io::ResultRecord{Block{"a", "b"}, "b", "pair-odd"});
        CHECK(r.meta.basis_rank == 1);
        CHECK(r.meta.y_size == 3);
    }
    SUBCASE("two blocks, all subsets, trace and graph")
    {
        std::string in = dir.write("i.json", R"({"blocks": [["a", "b"], ["c", "d", "e"]]})");
        auto run = cli({"solve", in, "--all-subsets", "--trace", dir.file("t.json"), "--emit-dot", dir.file("g.dot"), "-o",
            dir.file("r.json")});
        REQUIRE(run.code == 0);
        auto r = io::parse_result(io::read_file(dir.file("r.json")));
        REQUIRE(r.choices.size() == 2);
        for (const auto &rec : r.choices)
            CHECK(std::binary_search(rec.block.begin(), rec.block.end(), rec.chosen));
        REQUIRE(r.table);
        CHECK(r.table->size() == 10);
        auto traces = io::Json::parse(io::read_file(dir.file("t.json")));
        CHECK(traces["traces"].size() == 10);
        CHECK(io::read_file(dir.file("g.dot")).rfind("digraph subgroup {", 0) == 0);
        CHECK(cli({"verify", in, dir.file("r.json")}).code == 0);
    }
    SUBCASE("perturbation defaults to 20 steps")
    {
        auto run = cli({"solve", dir.write("i.json", R"({"blocks": [["a", "b", "c"]]})"), "--seed", "9"});
        REQUIRE(run.code == 0);
        auto r = io::parse_result(run.out);
        CHECK(r.meta.seed == 9);
        CHECK(r.meta.perturb_steps == 20);
    }
    SUBCASE("jobs do not change the output")
    {
        std::string in = dir.write("i.json", R"({"blocks": [["a", "b", "c", "d"], ["e", "f", "g"]]})");
        auto one = cli({"solve", in, "--all-subsets", "--seed", "4"});
        auto three = cli({"solve", in, "--all-subsets", "--seed", "4", "--jobs", "3"});
        CHECK(one.code == 0);
        CHECK(one.out == three.out);
    }
}

TEST_CASE("verify command")
{
    TempDir dir;
    std::string in = dir.write("i.json", R"({"blocks": [["a", "b"], ["c", "d", "e"]]})");
    auto solved = cli({"solve", in, "--all-subsets"});
    REQUIRE(solved.code == 0);
    std::string good = dir.write("r.json", solved.out);
    CHECK(cli({"verify", in, good}).code == 0);

    SUBCASE("non-member")
    {
        auto r = io::parse_result(solved.out);
        r.choices[1].chosen = "a";
        auto run = cli({"verify", in, dir.write("bad.json", io::dump_result(r))});
        CHECK(run.code == 1);
        CHECK(run.out.find("{c,d,e}") != std::string::npos);
    }
    SUBCASE("different member than the construction gives")
    {
        auto r = io::parse_result(solved.out);
        r.choices[0].chosen = r.choices[0].chosen == "a" ? "b" : "a";
        CHECK(cli({"verify", in, dir.write("bad.json", io::dump_result(r))}).code == 1);
    }
    SUBCASE("result from another seed")
    {
        auto other = cli({"solve", in, "--seed", "77", "--perturb-steps", "15"});
        REQUIRE(other.code == 0);
        CHECK(cli({"verify", in, dir.write("other.json", other.out)}).code == 0);
    }
}

TEST_CASE("trace and graph commands")
{
    TempDir dir;
    std::string in = dir.write("i.json", R"({"blocks": [["a", "b"]]})");
    auto one = cli({"trace", in, "--block", "b,a"});
    REQUIRE(one.code == 0);
    auto j = io::Json::parse(one.out);
    CHECK(j["case"] == "pair-odd");
    CHECK(j["chosen"] == "b");
    CHECK(j["data"]["l"] == 1);

    auto all = cli({"trace", in});
    REQUIRE(all.code == 0);
    CHECK(io::Json::parse(all.out)["traces"].size() == 3);

    auto missing = cli({"trace", in, "--block", "z"});
    CHECK(missing.code == 1);
    CHECK(single_error_line(missing.err, "error: validation: "));

    auto graph = cli({"graph", in});
    REQUIRE(graph.code == 0);
    CHECK(graph.out ==
        "digraph subgroup {\n  node [shape=circle];\n  0 [shape=doublecircle];\n  1;\n"
        "  0 -> 1 [label=\"a@{a,b}\"];\n  0 -> 1 [label=\"b@{a,b}\"];\n}\n");
}

TEST_CASE("selfcheck command")
{
    auto run = cli({"selfcheck", "--max-block", "4", "--instances", "10", "--seed", "7"});
    CHECK(run.code == 0);
    CHECK(run.out.find("selfcheck: ok") != std::string::npos);
    CHECK(cli({"selfcheck", "--instances", "0"}).code == 0);
    CHECK(cli({"selfcheck", "--max-block", "1", "--instances", "5"}).code == 0);
}

TEST_CASE("error paths")
{
    TempDir dir;
    auto missing = cli({"solve", dir.file("absent.json")});
    CHECK(missing.code == 1);
    CHECK(single_error_line(missing.err, "error: io: "));

    auto malformed = cli({"solve", dir.write("m.json", "{\"blocks\": [")});
    CHECK(malformed.code == 1);
    CHECK(single_error_line(malformed.err, "error: parse: "));

    auto overlap = cli({"solve", dir.write("o.json", R"({"blocks": [["a"], ["a", "b"]]})")});
    CHECK(overlap.code == 1);
    CHECK(single_error_line(overlap.err, "error: validation: "));

    auto large = cli({"solve", dir.write("l.json", R"({"blocks": [["a","b","c","d","e","f","g","h","i"]]})")});
    CHECK(large.code == 1);
    CHECK(single_error_line(large.err, "error: block-too-large: "));

    auto usage = cli({"solve"});
    CHECK(usage.code == 1);
    CHECK(single_error_line(usage.err, "error: usage: "));

    CHECK(cli({}).code == 1);
    CHECK(cli({"bogus"}).code == 1);
    CHECK(cli({"verify", dir.write("i.json", R"({"blocks": [["a"]]})"), dir.write("r.json", "nope")}).code == 1);
}

TEST_CASE("FREECHOICE_MAX_BLOCK lowers and raises the cap")
{
    TempDir dir;
    std::string in = dir.write("i.json", R"({"blocks": [["a", "b", "c"]]})");
    setenv("FREECHOICE_MAX_BLOCK", "2", 1);
    auto capped = cli({"solve", in});
    setenv("FREECHOICE_MAX_BLOCK", "x", 1);
    auto bad = cli({"solve", in});
    unsetenv("FREECHOICE_MAX_BLOCK");
    CHECK(capped.code == 1);
    CHECK(single_error_line(capped.err, "error: block-too-large: "));
    CHECK(bad.code == 1);
    CHECK(single_error_line(bad.err, "error: config: "));
    CHECK(cli({"solve", in}).code == 0);
}
