#include "freechoice/io.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace freechoice::io {

namespace {

    bool valid_symbol(const std::string &s)
    {
        static const std::regex pattern("[A-Za-z0-9_]+");
        return std::regex_match(s, pattern);
    }

    Json parse_json(const std::string &text)
    {
        try {
            return Json::parse(text);
        }
        catch (const Json::parse_error &e) {
            throw InputError("parse", e.what());
        }
    }

    [[noreturn]] void invalid(const std::string &message) { throw InputError("validation", message); }

    std::vector<std::string> symbol_list(const Json &j, const std::string &where)
    {
        if (! j.is_array())
            invalid(where + " must be an array of symbols");
        std::vector<std::string> out;
        for (const auto &s : j) {
            if (! s.is_string())
                invalid(where + " contains a non-string");
            out.push_back(s.get<std::string>());
        }
        return out;
    }

    Json record_json(const ResultRecord &r) { return {{"block", r.block}, {"chosen", r.chosen}, {"case", r.case_tag}}; }

    ResultRecord parse_record(const Json &j)
    {
        if (! j.is_object() || ! j.contains("block") || ! j.contains("chosen") || ! j.contains("case"))
            invalid("record needs block, chosen and case");
        if (! j["chosen"].is_string() || ! j["case"].is_string())
            invalid("chosen and case must be strings");
        ResultRecord r{make_block(symbol_list(j["block"], "block")), j["chosen"].get<std::string>(),
            j["case"].get<std::string>()};
        if (! parse_case_tag(r.case_tag))
            invalid("unknown case " + r.case_tag);
        return r;
    }

    ResultRecord record(const Solution &solution, BlockId id)
    {
        return {solution.family.block(id), solution.table.choices.at(id),
            std::string(to_string(solution.table.traces.at(id).tag))};
    }

    std::string bword(const BWord &w) { return format_word(w); }

    Json bwords(const std::vector<BWord> &ws)
    {
        Json out = Json::array();
        for (const auto &w : ws)
            out.push_back(bword(w));
        return out;
    }

    Json successor_json(const SuccessorMap &s)
    {
        Json out = Json::object();
        for (const auto &[x, fx] : s)
            out[x] = fx;
        return out;
    }

    Json pair_json(const PairWords &p)
    {
        return {{"elements", p.elements}, {"words", {bword(p.words[0]), bword(p.words[1])}}, {"l", p.length}};
    }

    Json cycle_json(const CycleWords &c)
    {
        return {{"successor", successor_json(c.successor)}, {"cycle", c.cycle}, {"words", bwords(c.words)},
            {"lengths", c.lengths}};
    }

} // namespace

Instance parse_instance(const std::string &text)
{
    Json j = parse_json(text);
    if (! j.is_object() || ! j.contains("blocks"))
        invalid("instance must be an object with a \"blocks\" field");
    if (! j["blocks"].is_array())
        invalid("\"blocks\" must be an array");
    Instance out;
    std::set<std::string> seen;
    for (const auto &b : j["blocks"]) {
        auto symbols = symbol_list(b, "block");
        if (symbols.empty())
            invalid("empty block");
        for (const auto &s : symbols) {
            if (! valid_symbol(s))
                invalid("symbol \"" + s + "\" must match [A-Za-z0-9_]+");
            if (! seen.insert(s).second)
                invalid("symbol " + s + " appears more than once");
        }
        out.blocks.push_back(std::move(symbols));
    }
    return out;
}

ResultFile make_result(const Solution &solution, const SolveOptions &options, bool all_subsets)
{
    const Family &family = solution.family;
    ResultFile out;
    for (BlockId id : family.z_ids())
        out.choices.push_back(record(solution, id));
    if (all_subsets) {
        out.table.emplace();
        for (std::uint32_t i = 0; i < family.size(); ++i)
            out.table->push_back(record(solution, BlockId{i}));
    }
    out.meta = {options.seed, options.perturb_steps, solution.rewriter.rank(), family.size()};
    return out;
}

std::string dump(const Json &json) { return json.dump(2) + "\n"; }

std::string dump_result(const ResultFile &result)
{
    Json j;
    j["choices"] = Json::array();
    for (const auto &r : result.choices)
        j["choices"].push_back(record_json(r));
    if (result.table) {
        j["table"] = Json::array();
        for (const auto &r : *result.table)
            j["table"].push_back(record_json(r));
    }
    j["meta"] = {{"seed", result.meta.seed}, {"perturb_steps", result.meta.perturb_steps},
        {"basis_rank", result.meta.basis_rank}, {"y_size", result.meta.y_size}};
    return dump(j);
}

ResultFile parse_result(const std::string &text)
{
    Json j = parse_json(text);
    if (! j.is_object() || ! j.contains("choices") || ! j["choices"].is_array())
        invalid("result must have a \"choices\" array");
    ResultFile out;
    for (const auto &r : j["choices"])
        out.choices.push_back(parse_record(r));
    if (j.contains("table")) {
        if (! j["table"].is_array())
            invalid("\"table\" must be an array");
        out.table.emplace();
        for (const auto &r : j["table"])
            out.table->push_back(parse_record(r));
    }
    if (j.contains("meta")) {
        const Json &m = j["meta"];
        try {
            out.meta.seed = m.value("seed", std::uint64_t{0});
            out.meta.perturb_steps = m.value("perturb_steps", std::size_t{0});
            out.meta.basis_rank = m.value("basis_rank", std::size_t{0});
            out.meta.y_size = m.value("y_size", std::size_t{0});
        }
        catch (const Json::exception &e) {
            invalid(std::string("bad meta: ") + e.what());
        }
    }
    return out;
}

Json trace_json(const Family &family, const Trace &trace)
{
    Json j;
    j["case"] = std::string(to_string(trace.tag));
    j["chosen"] = trace.chosen;
    j["consumed"] = Json::array();
    for (const auto &[id, x] : trace.consumed)
        j["consumed"].push_back({{"block", family.block(id)}, {"chosen", x}});
    auto xword = [&](const XWord &w) { return format_word(w, [&](const TaggedLetter &l) { return family.letter_name(l); }); };
    auto core_json = [&](const HalfWordCore &c) {
        return Json{{"m", c.half}, {"f", bwords(c.halves)}, {"alpha", xword(c.alpha)}};
    };

    Json data = Json::object();
    std::visit(
        [&](const auto &d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PairOddTrace>) {
                data = pair_json(d.pair);
                data["middles"] = {bword(BWord{d.middles[0]}), bword(BWord{d.middles[1]})};
            }
            else if constexpr (std::is_same_v<T, PairEvenTrace>) {
                data = pair_json(d.pair);
                data["core"] = core_json(d.core);
            }
            else if constexpr (std::is_same_v<T, NotBijectionTrace>) {
                data = {{"successor", successor_json(d.successor)}, {"image", d.image}};
            }
            else if constexpr (std::is_same_v<T, OrbitTrace>) {
                data = {{"successor", successor_json(d.successor)}, {"squared", d.squared}, {"orbits", d.orbits},
                    {"representatives", d.representatives}};
            }
            else if constexpr (std::is_same_v<T, OddMinLenTrace>) {
                data = cycle_json(d.cycle);
                data["min_length"] = d.min_length;
                data["subset"] = d.subset;
            }
            else if constexpr (std::is_same_v<T, OddMinCancelTrace>) {
                data = cycle_json(d.cycle);
                data["cancellations"] = d.cancellations;
                data["min_cancellation"] = d.min_cancellation;
                data["subset"] = d.subset;
            }
            else if constexpr (std::is_same_v<T, OddCoreTrace>) {
                data = cycle_json(d.cycle);
                data["cancellations"] = d.cancellations;
                data["l"] = d.length;
                data["k"] = d.cancellation;
                data["core"] = core_json(d.core);
            }
        },
        trace.data);
    j["data"] = data;
    return j;
}

std::string dump_traces(const Solution &solution)
{
    Json list = Json::array();
    for (std::uint32_t i = 0; i < solution.family.size(); ++i) {
        BlockId id{i};
        Json t = trace_json(solution.family, solution.table.traces.at(id));
        t["block"] = solution.family.block(id);
        list.push_back(std::move(t));
    }
    return dump(Json{{"traces", list}});
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw InputError("io", "cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string &path, const std::string &contents)
{
    std::ofstream out(path, std::ios::binary);
    if (! out || ! (out << contents))
        throw InputError("io", "cannot write " + path);
}

} // namespace freechoice::io
