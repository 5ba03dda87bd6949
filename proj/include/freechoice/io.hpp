#pragma once

// Instance and result files (JSON) and the per-block trace dump.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "freechoice/choice.hpp"

namespace freechoice::io {

using Json = nlohmann::json;

struct Instance {
    std::vector<std::vector<std::string>> blocks;
};

/// {"blocks": [[...], ...]}. Throws InputError with code "parse" for
/// malformed JSON and "validation" for empty blocks, bad or repeated
/// symbols. Symbols match [A-Za-z0-9_]+.
Instance parse_instance(const std::string &text);

struct ResultRecord {
    Block block;
    std::string chosen;
    std::string case_tag;

    bool operator==(const ResultRecord &) const = default;
};

struct ResultMeta {
    std::uint64_t seed = 0;
    std::size_t perturb_steps = 0;
    std::size_t basis_rank = 0;
    std::size_t y_size = 0;

    bool operator==(const ResultMeta &) const = default;
};

struct ResultFile {
    std::vector<ResultRecord> choices;            // one per input block, input order
    std::optional<std::vector<ResultRecord>> table; // every block of Y, canonical order
    ResultMeta meta;

    bool operator==(const ResultFile &) const = default;
};

ResultFile make_result(const Solution &solution, const SolveOptions &options, bool all_subsets);

std::string dump_result(const ResultFile &result);

/// Throws InputError "parse" / "validation".
ResultFile parse_result(const std::string &text);

Json trace_json(const Family &family, const Trace &trace);

/// {"traces": [...]} for every block of Y in canonical order.
std::string dump_traces(const Solution &solution);

/// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json &json);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

} // namespace freechoice::io
