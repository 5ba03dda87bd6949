#pragma once

// Instance generators and hostile inputs for the choice engine: random
// families, lower-level tables that force a chosen successor map, and bases
// that drive single-cycle odd blocks into their deeper cases.

#include <string>
#include <vector>

#include "freechoice/choice.hpp"
#include "freechoice/family.hpp"
#include "freechoice/prng.hpp"
#include "freechoice/stallings.hpp"

namespace freechoice::adversarial {

using RawFamily = std::vector<std::vector<std::string>>;

/// Disjoint blocks with fresh symbols s0, s1, ...; block count in
/// [min_blocks, max_blocks] and sizes in [min_size, max_size].
RawFamily random_family(Xorshift64Star &rng, std::size_t min_blocks, std::size_t max_blocks, std::size_t min_size,
    std::size_t max_size);

RawFamily random_pairs(Xorshift64Star &rng, std::size_t count);

/// x_i -> x_{i+1 mod n} in sorted order: a single n-cycle.
SuccessorMap cyclic_successor(const Block &y);

/// Consecutive sorted elements swapped in pairs, the last three forming a
/// 3-cycle when n is odd. Needs n >= 4; yields at least two orbits.
SuccessorMap paired_successor(const Block &y);

/// x -> min(y \ {x}); never injective for n >= 3.
SuccessorMap collapsing_successor(const Block &y);

/// Table for the proper subsets of y: each gets its minimum, except that
/// y \ {x} gets successor[x]. Throws std::invalid_argument if successor has
/// a fixed point or leaves y.
ChoiceTable prev_with_successor(const Family &family, BlockId y, const SuccessorMap &successor);

/// Index of the basis element of the canonical basis equal to
/// (x,y)(min y,y)^-1, or nullopt if there is none.
std::optional<std::uint32_t> canonical_element_index(const SubgroupRewriter &rewriter, BlockId y, const Block &block,
    const std::string &x);

/// Starting from the canonical basis, right-multiplies every basis element
/// (x,y)(min y,y)^-1 by one basis element gamma belonging to another block.
/// Every x_i x_{i+1}^-1 then has B-length 2 with one cancellation between
/// neighbours, whatever the cycle order, so single-cycle odd blocks reach the
/// half-word core and pairs take the even branch. Returns nullopt when the
/// family has no basis element outside y.
std::optional<Basis> core_forcing_basis(const Family &family, const SubgroupRewriter &rewriter, BlockId y);

/// For a 5-element block under cyclic_successor: a basis in which all five
/// B-words have length 4 but the neighbour cancellations are (3,1,2,2,1).
/// Needs six basis elements outside y. Returns nullopt otherwise.
std::optional<Basis> uneven_cancellation_basis(const Family &family, const SubgroupRewriter &rewriter, BlockId y);

} // namespace freechoice::adversarial
