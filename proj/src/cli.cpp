#include "freechoice/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include <CLI11.hpp>

#include "freechoice/io.hpp"
#include "freechoice/selfcheck.hpp"

namespace freechoice {

namespace {

    std::string one_line(std::string s)
    {
        std::replace(s.begin(), s.end(), '\n', ' ');
        return s;
    }

    std::size_t max_block_from_env()
    {
        const char *value = std::getenv("FREECHOICE_MAX_BLOCK");
        if (value == nullptr || *value == '\0')
            return default_max_block;
        char *end = nullptr;
        unsigned long parsed = std::strtoul(value, &end, 10);
        if (*end != '\0' || parsed == 0)
            throw InputError("config", std::string("FREECHOICE_MAX_BLOCK must be a positive integer, got ") + value);
        return parsed;
    }

    struct SolveFlags {
        std::string instance;
        std::uint64_t seed = 0;
        std::optional<std::size_t> perturb_steps;
        unsigned jobs = 1;

        void add(CLI::App &cmd)
        {
            cmd.add_option("instance", instance, "Instance JSON file")->required();
            cmd.add_option("--seed", seed, "Perturb the canonical basis with this seed (0 keeps it)");
            cmd.add_option("--perturb-steps", perturb_steps, "Nielsen moves applied when seed != 0 (default 20)");
            cmd.add_option("--jobs", jobs, "Worker threads per level")->check(CLI::Range(1u, 64u));
        }

        SolveOptions options() const
        {
            SolveOptions o;
            o.seed = seed;
            o.perturb_steps = perturb_steps.value_or(seed != 0 ? 20 : 0);
            o.max_block = max_block_from_env();
            o.jobs = jobs;
            return o;
        }
    };

    io::Instance load_instance(const std::string &path) { return io::parse_instance(io::read_file(path)); }

    void emit(const std::string &path, const std::string &contents, std::ostream &out)
    {
        if (path.empty() || path == "-")
            out << contents;
        else
            io::write_file(path, contents);
    }

    int cmd_verify(const std::string &instance_path, const std::string &result_path, std::ostream &out)
    {
        io::Instance instance = load_instance(instance_path);
        io::ResultFile result = io::parse_result(io::read_file(result_path));

        SolveOptions options;
        options.seed = result.meta.seed;
        options.perturb_steps = result.meta.perturb_steps;
        options.max_block = max_block_from_env();
        Solution solution = solve(instance.blocks, options);
        const Family &family = solution.family;

        std::vector<std::string> failures;
        auto check_records = [&](const std::vector<io::ResultRecord> &records, const std::string &field) {
            for (const auto &r : records) {
                std::string name = field + " " + block_name(r.block);
                if (! std::binary_search(r.block.begin(), r.block.end(), r.chosen)) {
                    failures.push_back(name + ": chosen " + r.chosen + " is not a member");
                    continue;
                }
                auto id = family.find(r.block);
                if (! id) {
                    failures.push_back(name + ": not a block of the instance");
                    continue;
                }
                if (solution.table.choices.at(*id) != r.chosen)
                    failures.push_back(name + ": chosen " + r.chosen + " but the construction gives " +
                        solution.table.choices.at(*id));
                if (to_string(solution.table.traces.at(*id).tag) != r.case_tag)
                    failures.push_back(name + ": case " + r.case_tag + " but the construction reaches " +
                        std::string(to_string(solution.table.traces.at(*id).tag)));
            }
        };
        check_records(result.choices, "choices");
        if (result.table)
            check_records(*result.table, "table");
        if (result.choices.size() != family.z_blocks().size())
            failures.push_back("choices: expected " + std::to_string(family.z_blocks().size()) + " records, found " +
                std::to_string(result.choices.size()));
        else
            for (std::size_t i = 0; i < result.choices.size(); ++i)
                if (result.choices[i].block != family.z_blocks()[i])
                    failures.push_back("choices: record " + std::to_string(i) + " is not input block " +
                        block_name(family.z_blocks()[i]));
        if (result.table && result.table->size() != family.size())
            failures.push_back("table: expected " + std::to_string(family.size()) + " records");
        if (result.meta.y_size != 0 && result.meta.y_size != family.size())
            failures.push_back("meta: y_size " + std::to_string(result.meta.y_size) + " does not match " +
                std::to_string(family.size()));
        if (result.meta.basis_rank != 0 && result.meta.basis_rank != solution.rewriter.rank())
            failures.push_back("meta: basis_rank " + std::to_string(result.meta.basis_rank) + " does not match " +
                std::to_string(solution.rewriter.rank()));

        VerifyReport report = verify(solution.table, family);
        failures.insert(failures.end(), report.failures.begin(), report.failures.end());

        if (! failures.empty()) {
            for (const auto &f : failures)
                out << "FAIL " << f << "\n";
            return 1;
        }
        out << "ok: " << result.choices.size() << " choices, " << report.blocks_checked << " blocks, "
            << report.products_checked << " K-products checked\n";
        return 0;
    }

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Choice functions for finite families from a free basis of the difference subgroup", "freechoice"};
    app.require_subcommand(1);

    SolveFlags solve_flags;
    bool all_subsets = false;
    std::string output, trace_path, dot_path;
    auto *solve_cmd = app.add_subcommand("solve", "Solve an instance and write the result JSON");
    solve_flags.add(*solve_cmd);
    solve_cmd->add_flag("--all-subsets", all_subsets, "Include the table for every subset");
    solve_cmd->add_option("--trace", trace_path, "Write per-block traces to this file");
    solve_cmd->add_option("--emit-dot", dot_path, "Write the folded subgroup graph to this file");
    solve_cmd->add_option("-o,--output", output, "Result file (default stdout)");

    std::string verify_instance, verify_result;
    auto *verify_cmd = app.add_subcommand("verify", "Check a result file against its instance");
    verify_cmd->add_option("instance", verify_instance, "Instance JSON file")->required();
    verify_cmd->add_option("result", verify_result, "Result JSON file")->required();

    SolveFlags trace_flags;
    std::vector<std::string> trace_block;
    std::string trace_output;
    auto *trace_cmd = app.add_subcommand("trace", "Print the case analysis for every block, or one");
    trace_flags.add(*trace_cmd);
    trace_cmd->add_option("--block", trace_block, "Only this block (its symbols)")->delimiter(',');
    trace_cmd->add_option("-o,--output", trace_output, "Output file (default stdout)");

    std::string graph_instance, graph_output;
    auto *graph_cmd = app.add_subcommand("graph", "Print the folded subgroup graph in DOT");
    graph_cmd->add_option("instance", graph_instance, "Instance JSON file")->required();
    graph_cmd->add_option("-o,--output", graph_output, "Output file (default stdout)");

    SelfCheckOptions selfcheck_options;
    auto *selfcheck_cmd = app.add_subcommand("selfcheck", "Run the randomized invariant suite");
    selfcheck_cmd->add_option("--max-block", selfcheck_options.max_block, "Largest block size")
        ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
    selfcheck_cmd->add_option("--instances", selfcheck_options.instances, "Number of random families");
    selfcheck_cmd->add_option("--seed", selfcheck_options.seed, "Generator seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    }
    catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    }
    catch (const CLI::ParseError &e) {
        err << "error: usage: " << one_line(e.what()) << "\n";
        return 1;
    }

    try {
        if (solve_cmd->parsed()) {
            SolveOptions options = solve_flags.options();
            Solution solution = solve(load_instance(solve_flags.instance).blocks, options);
            emit(output, io::dump_result(io::make_result(solution, options, all_subsets)), out);
            if (! trace_path.empty())
                io::write_file(trace_path, io::dump_traces(solution));
            if (! dot_path.empty())
                io::write_file(dot_path, to_dot(solution.rewriter.graph(),
                                             [&](const TaggedLetter &l) { return solution.family.letter_name(l); }));
            return 0;
        }
        if (verify_cmd->parsed())
            return cmd_verify(verify_instance, verify_result, out);
        if (trace_cmd->parsed()) {
            Solution solution = solve(load_instance(trace_flags.instance).blocks, trace_flags.options());
            if (trace_block.empty()) {
                emit(trace_output, io::dump_traces(solution), out);
                return 0;
            }
            auto id = solution.family.find(make_block(trace_block));
            if (! id)
                throw InputError("validation", "no block " + block_name(make_block(trace_block)) + " in the instance");
            io::Json t = io::trace_json(solution.family, solution.table.traces.at(*id));
            t["block"] = solution.family.block(*id);
            emit(trace_output, io::dump(t), out);
            return 0;
        }
        if (graph_cmd->parsed()) {
            Family family = Family::close_under_subsets(load_instance(graph_instance).blocks, max_block_from_env());
            SubgroupGraph graph = build_subgroup_graph(k_generators(family));
            emit(graph_output, to_dot(graph, [&](const TaggedLetter &l) { return family.letter_name(l); }), out);
            return 0;
        }
        if (selfcheck_cmd->parsed()) {
            SelfCheckReport report = run_selfcheck(selfcheck_options);
            out << format_report(report);
            if (! report.ok) {
                err << "error: selfcheck: " << one_line(report.failure) << "\n";
                return 1;
            }
            return 0;
        }
    }
    catch (const InputError &e) {
        err << "error: " << e.code() << ": " << one_line(e.what()) << "\n";
        return 1;
    }
    catch (const InternalProofViolation &e) {
        err << "error: internal-proof-violation: " << one_line(e.what()) << "\n";
        return 2;
    }
    catch (const std::exception &e) {
        err << "error: internal: " << one_line(e.what()) << "\n";
        return 2;
    }
    return 1;
}

} // namespace freechoice
