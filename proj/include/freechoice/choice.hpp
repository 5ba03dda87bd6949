#pragma once

// Choice functions on a family of finite sets, extracted from a free basis
// of the difference subgroup K = <(w,y)(x,y)^-1 : w, x in y>.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "freechoice/errors.hpp"
#include "freechoice/family.hpp"
#include "freechoice/prng.hpp"
#include "freechoice/stallings.hpp"
#include "freechoice/word.hpp"

namespace freechoice {

enum class CaseTag {
    Singleton,
    PairOdd,
    PairEven,
    NotBijection,
    MultiOrbit,
    EvenSquareOrbits,
    OddMinLen,
    OddMinCancel,
    OddCore,
};

inline constexpr std::array all_case_tags = {CaseTag::Singleton, CaseTag::PairOdd, CaseTag::PairEven,
    CaseTag::NotBijection, CaseTag::MultiOrbit, CaseTag::EvenSquareOrbits, CaseTag::OddMinLen,
    CaseTag::OddMinCancel, CaseTag::OddCore};

std::string_view to_string(CaseTag tag);
std::optional<CaseTag> parse_case_tag(std::string_view name);

using SuccessorMap = std::map<std::string, std::string>;

struct SingletonTrace {
    bool operator==(const SingletonTrace &) const = default;
};

/// Both B-words of a pair block: words[i] rewrites x_i x_{1-i}^-1, where x_0
/// is the smaller element.
struct PairWords {
    std::array<std::string, 2> elements;
    std::array<BWord, 2> words;
    std::size_t length = 0;

    bool operator==(const PairWords &) const = default;
};

struct PairOddTrace {
    PairWords pair;
    std::array<SignedLetter<BasisLetter>, 2> middles;

    bool operator==(const PairOddTrace &) const = default;
};

/// First halves f(x_i) and the common value alpha = f(x_i)^-1 x_i.
struct HalfWordCore {
    std::size_t half = 0;
    std::vector<BWord> halves;
    XWord alpha;

    bool operator==(const HalfWordCore &) const = default;
};

struct PairEvenTrace {
    PairWords pair;
    HalfWordCore core;

    bool operator==(const PairEvenTrace &) const = default;
};

struct NotBijectionTrace {
    SuccessorMap successor;
    Block image;

    bool operator==(const NotBijectionTrace &) const = default;
};

/// Shared by multi-orbit (orbits of s) and even-square-orbits (orbits of s^2).
struct OrbitTrace {
    SuccessorMap successor;
    bool squared = false;
    std::vector<Block> orbits;
    Block representatives;

    bool operator==(const OrbitTrace &) const = default;
};

/// The single cycle x_0, x_1 = s(x_0), ... and the B-words of x_i x_{i+1}^-1.
struct CycleWords {
    SuccessorMap successor;
    std::vector<std::string> cycle;
    std::vector<BWord> words;
    std::vector<std::size_t> lengths;

    bool operator==(const CycleWords &) const = default;
};

struct OddMinLenTrace {
    CycleWords cycle;
    std::size_t min_length = 0;
    Block subset;

    bool operator==(const OddMinLenTrace &) const = default;
};

struct OddMinCancelTrace {
    CycleWords cycle;
    std::vector<std::size_t> cancellations;
    std::size_t min_cancellation = 0;
    Block subset;

    bool operator==(const OddMinCancelTrace &) const = default;
};

struct OddCoreTrace {
    CycleWords cycle;
    std::vector<std::size_t> cancellations;
    std::size_t length = 0;       // l
    std::size_t cancellation = 0; // k
    HalfWordCore core;            // core.half = m = l/2

    bool operator==(const OddCoreTrace &) const = default;
};

using TraceData = std::variant<SingletonTrace, PairOddTrace, PairEvenTrace, NotBijectionTrace, OrbitTrace,
    OddMinLenTrace, OddMinCancelTrace, OddCoreTrace>;

/// Audit record of how one block's choice was made.
struct Trace {
    CaseTag tag = CaseTag::Singleton;
    std::string chosen;
    /// Entries of the lower-level table this decision read, in read order.
    std::vector<std::pair<BlockId, std::string>> consumed;
    TraceData data;

    bool operator==(const Trace &) const = default;
};

struct ChoiceTable {
    std::map<BlockId, std::string> choices;
    std::map<BlockId, Trace> traces;

    bool operator==(const ChoiceTable &) const = default;
};

/// s_y is not injective.
class NotBijection : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The lower-level table lacks a block the construction needs.
class MissingSubsetChoice : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Choice {
    std::string element;
    Trace trace;
};

/// Choice for a two-element block from the B-words of x_0 x_1^-1 and
/// x_1 x_0^-1.
Choice choose_pair(const Family &family, BlockId y, const SubgroupRewriter &rewriter);

/// x -> prev(y \ {x}).
SuccessorMap successor_map(const Family &family, BlockId y, const ChoiceTable &prev);

/// Cycle decomposition of a bijection; orbits sorted canonically. Throws
/// NotBijection.
std::vector<Block> orbits(const SuccessorMap &successor);

/// Choice for a block of size >= 3 given choices for all its proper
/// non-empty subsets. `start` selects x_0 by its position in the sorted
/// block; the result does not depend on it.
Choice choose_general(const Family &family, BlockId y, const ChoiceTable &prev, const SubgroupRewriter &rewriter,
    std::size_t start = 0);

/// Fills the table for every block of the family, level by level. With
/// jobs > 1 the blocks of one level are split across threads; the result is
/// identical to jobs == 1.
ChoiceTable solve(const Family &family, const SubgroupRewriter &rewriter, unsigned jobs = 1);

struct SolveOptions {
    std::uint64_t seed = 0;
    std::size_t perturb_steps = 0;
    std::size_t max_block = default_max_block;
    unsigned jobs = 1;
};

struct Solution {
    Family family;
    SubgroupRewriter rewriter;
    ChoiceTable table;
};

/// Family, K-generators, folded graph, basis (perturbed when seed != 0),
/// then the full table.
Solution solve(const std::vector<std::vector<std::string>> &z, const SolveOptions &options = {});

/// Pair families without subset closure: K is built over the pairs alone.
Solution solve_pairs(const std::vector<std::vector<std::string>> &pairs, std::uint64_t seed = 0,
    std::size_t perturb_steps = 0);

struct VerifyOptions {
    bool require_total = true;
    std::uint64_t seed = 0x5eed;
    std::size_t samples = 1000;
    std::size_t max_factors = 50;
};

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::size_t blocks_checked = 0;
    std::size_t products_checked = 0;

    void fail(std::string message)
    {
        ok = false;
        failures.push_back(std::move(message));
    }
};

/// Membership c(y) in y, nesting of the traces against the table, and
/// sigma_y = 0 on random products of K-generators.
VerifyReport verify(const ChoiceTable &table, const Family &family, const VerifyOptions &options = {});

/// Random product of up to max_factors K-generators and their inverses.
XWord random_k_product(std::span<const XWord> generators, Xorshift64Star &rng, std::size_t max_factors);

} // namespace freechoice
