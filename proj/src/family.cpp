#include "freechoice/family.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "freechoice/errors.hpp"

namespace freechoice {

bool canonical_less(const Block &a, const Block &b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

Block make_block(std::vector<std::string> symbols)
{
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    return symbols;
}

std::string block_name(const Block &b)
{
    std::string out = "{";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i)
            out += ',';
        out += b[i];
    }
    return out + "}";
}

namespace {

    std::vector<Block> validate(const std::vector<std::vector<std::string>> &z)
    {
        std::vector<Block> blocks;
        std::set<std::string> seen;
        for (const auto &raw : z) {
            if (raw.empty())
                throw InputError("empty-block", "block " + std::to_string(blocks.size()) + " is empty");
            Block b = make_block(raw);
            if (b.size() != raw.size())
                throw InputError("duplicate-symbol", "block " + block_name(b) + " repeats a symbol");
            for (const auto &s : b)
                if (! seen.insert(s).second)
                    throw InputError("overlapping-blocks", "symbol '" + s + "' appears in more than one block");
            blocks.push_back(std::move(b));
        }
        return blocks;
    }

} // namespace

Family::Family(std::vector<Block> z, std::vector<Block> y) : z_blocks_(std::move(z)), y_blocks_(std::move(y))
{
    std::sort(y_blocks_.begin(), y_blocks_.end(), canonical_less);
    y_blocks_.erase(std::unique(y_blocks_.begin(), y_blocks_.end()), y_blocks_.end());
    for (std::uint32_t i = 0; i < y_blocks_.size(); ++i)
        index_.emplace(y_blocks_[i], BlockId{i});
}

Family Family::close_under_subsets(const std::vector<std::vector<std::string>> &z, std::size_t max_block)
{
    auto blocks = validate(z);
    std::vector<Block> y;
    for (const Block &b : blocks) {
        if (b.size() > max_block)
            throw InputError("block-too-large", "block " + block_name(b) + " has " + std::to_string(b.size()) +
                    " elements; the cap is " + std::to_string(max_block));
        const std::size_t n = b.size();
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
            Block subset;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t{1} << i))
                    subset.push_back(b[i]);
            y.push_back(std::move(subset));
        }
    }
    return Family(std::move(blocks), std::move(y));
}

Family Family::pairs_only(const std::vector<std::vector<std::string>> &pairs)
{
    auto blocks = validate(pairs);
    for (const Block &b : blocks)
        if (b.size() != 2)
            throw InputError("not-a-pair", "block " + block_name(b) + " does not have two elements");
    return Family(blocks, blocks);
}

std::optional<BlockId> Family::find(const Block &b) const
{
    auto it = index_.find(b);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

BlockId Family::id_of(const Block &b) const
{
    if (auto id = find(b))
        return *id;
    throw std::out_of_range("block " + block_name(b) + " is not in the family");
}

std::vector<BlockId> Family::z_ids() const
{
    std::vector<BlockId> ids;
    for (const Block &b : z_blocks_)
        ids.push_back(id_of(b));
    return ids;
}

std::vector<std::vector<BlockId>> Family::levels() const
{
    std::vector<std::vector<BlockId>> out;
    for (std::uint32_t i = 0; i < y_blocks_.size(); ++i) {
        if (out.empty() || y_blocks_[out.back().front().value].size() != y_blocks_[i].size())
            out.emplace_back();
        out.back().push_back(BlockId{i});
    }
    return out;
}

std::vector<TaggedLetter> Family::letters() const
{
    std::vector<TaggedLetter> out;
    for (std::uint32_t i = 0; i < y_blocks_.size(); ++i)
        for (const auto &x : y_blocks_[i])
            out.push_back({x, BlockId{i}});
    return out;
}

std::vector<XWord> k_generators(const Family &family)
{
    std::vector<XWord> gens;
    for (std::uint32_t i = 0; i < family.size(); ++i) {
        const Block &y = family.block(BlockId{i});
        for (const auto &w : y)
            for (const auto &x : y)
                if (w != x)
                    gens.push_back(XWord{pos(TaggedLetter{w, BlockId{i}}), neg(TaggedLetter{x, BlockId{i}})});
    }
    return gens;
}

} // namespace freechoice
