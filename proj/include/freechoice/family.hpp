#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freechoice/word.hpp"

namespace freechoice {

/// A finite set of symbols, kept sorted bytewise and duplicate-free.
using Block = std::vector<std::string>;

/// Canonical block order: size ascending, then lexicographic on the sorted
/// element sequence.
bool canonical_less(const Block &a, const Block &b);

Block make_block(std::vector<std::string> symbols);

/// "{a,b,c}"
std::string block_name(const Block &b);

inline constexpr std::size_t default_max_block = 8;

/// The input family Z together with Y, the closure of Z under non-empty
/// subsets. Each y in Y gets a BlockId in canonical order, and the alphabet X
/// consists of the tagged letters (x, y) with x in y.
class Family {
public:
    /// Throws InputError with code "empty-block", "duplicate-symbol",
    /// "overlapping-blocks" or "block-too-large".
    static Family close_under_subsets(const std::vector<std::vector<std::string>> &z,
        std::size_t max_block = default_max_block);

    /// Y = Z without subset closure; every block must have exactly two
    /// elements.
    static Family pairs_only(const std::vector<std::vector<std::string>> &pairs);

    const std::vector<Block> &z_blocks() const noexcept { return z_blocks_; }
    const std::vector<Block> &y_blocks() const noexcept { return y_blocks_; }
    std::size_t size() const noexcept { return y_blocks_.size(); }

    const Block &block(BlockId id) const { return y_blocks_.at(id.value); }
    std::optional<BlockId> find(const Block &b) const;
    /// Throws std::out_of_range if b is not in Y.
    BlockId id_of(const Block &b) const;
    std::vector<BlockId> z_ids() const;

    /// Block ids grouped by block size, smallest size first.
    std::vector<std::vector<BlockId>> levels() const;

    std::vector<TaggedLetter> letters() const;

    std::string name(BlockId id) const { return block_name(block(id)); }
    /// "a@{a,b}"
    std::string letter_name(const TaggedLetter &l) const { return l.element + "@" + name(l.block); }

private:
    Family(std::vector<Block> z, std::vector<Block> y);

    std::vector<Block> z_blocks_;
    std::vector<Block> y_blocks_;
    std::map<Block, BlockId> index_;
};

/// Generators (w,y)(x,y)^-1 of K for every y and ordered pair w != x in y,
/// in canonical order.
std::vector<XWord> k_generators(const Family &family);

} // namespace freechoice
