#include "freechoice/adversarial.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace freechoice::adversarial {

RawFamily random_family(Xorshift64Star &rng, std::size_t min_blocks, std::size_t max_blocks, std::size_t min_size,
    std::size_t max_size)
{
    RawFamily out;
    std::size_t blocks = min_blocks + rng.below(max_blocks - min_blocks + 1);
    std::size_t next = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t size = min_size + rng.below(max_size - min_size + 1);
        std::vector<std::string> block;
        for (std::size_t i = 0; i < size; ++i)
            block.push_back("s" + std::to_string(next++));
        out.push_back(std::move(block));
    }
    return out;
}

RawFamily random_pairs(Xorshift64Star &rng, std::size_t count)
{
    RawFamily out;
    for (std::size_t i = 0; i < count; ++i) {
        // Random symbol names so canonical order differs from input order.
        std::string a = "p" + std::to_string(i) + "_" + std::to_string(rng.below(1000));
        std::string b = "q" + std::to_string(i) + "_" + std::to_string(rng.below(1000));
        if (rng.next() & 1)
            std::swap(a, b);
        out.push_back({a, b});
    }
    return out;
}

SuccessorMap cyclic_successor(const Block &y)
{
    SuccessorMap s;
    for (std::size_t i = 0; i < y.size(); ++i)
        s[y[i]] = y[(i + 1) % y.size()];
    return s;
}

SuccessorMap paired_successor(const Block &y)
{
    if (y.size() < 4)
        throw std::invalid_argument("paired_successor needs at least four elements");
    SuccessorMap s;
    std::size_t paired = y.size() % 2 == 0 ? y.size() : y.size() - 3;
    for (std::size_t i = 0; i < paired; i += 2) {
        s[y[i]] = y[i + 1];
        s[y[i + 1]] = y[i];
    }
    if (paired < y.size()) {
        s[y[paired]] = y[paired + 1];
        s[y[paired + 1]] = y[paired + 2];
        s[y[paired + 2]] = y[paired];
    }
    return s;
}

SuccessorMap collapsing_successor(const Block &y)
{
    SuccessorMap s;
    for (const auto &x : y)
        s[x] = x == y.front() ? y.at(1) : y.front();
    return s;
}

ChoiceTable prev_with_successor(const Family &family, BlockId y, const SuccessorMap &successor)
{
    const Block &block = family.block(y);
    ChoiceTable prev;
    for (std::uint32_t i = 0; i < family.size(); ++i) {
        const Block &b = family.block(BlockId{i});
        if (b.size() < block.size() && std::includes(block.begin(), block.end(), b.begin(), b.end()))
            prev.choices[BlockId{i}] = b.front();
    }
    for (const auto &x : block) {
        auto it = successor.find(x);
        if (it == successor.end() || it->second == x || ! std::binary_search(block.begin(), block.end(), it->second))
            throw std::invalid_argument("successor must map " + block_name(block) + " into itself without fixed points");
        Block rest;
        for (const auto &other : block)
            if (other != x)
                rest.push_back(other);
        prev.choices[family.id_of(rest)] = it->second;
    }
    return prev;
}

std::optional<std::uint32_t> canonical_element_index(const SubgroupRewriter &rewriter, BlockId y, const Block &block,
    const std::string &x)
{
    auto r = rewriter.rewrite(XWord{pos(TaggedLetter{x, y}), neg(TaggedLetter{block.front(), y})});
    if (! r || r->size() != 1 || (*r)[0].sign != Sign::Positive)
        return std::nullopt;
    return (*r)[0].letter.index;
}

namespace {

    struct BlockLetters {
        std::vector<std::uint32_t> own;   // basis index of (x_j)(x_0)^-1, j = 1..n-1
        std::vector<std::uint32_t> other; // every remaining basis index, ascending
    };

    std::optional<BlockLetters> split_basis(const SubgroupRewriter &rewriter, BlockId y, const Block &block)
    {
        const Basis &basis = rewriter.basis();
        for (std::size_t k = 0; k < basis.rank(); ++k)
            if (basis.edge_to_basis[k] != BWord{pos(BasisLetter{static_cast<std::uint32_t>(k)})})
                throw std::invalid_argument("expected the unperturbed canonical basis");
        BlockLetters out;
        for (std::size_t j = 1; j < block.size(); ++j) {
            auto index = canonical_element_index(rewriter, y, block, block[j]);
            if (! index)
                return std::nullopt;
            out.own.push_back(*index);
        }
        std::set<std::uint32_t> own(out.own.begin(), out.own.end());
        for (std::uint32_t k = 0; k < basis.rank(); ++k)
            if (! own.count(k))
                out.other.push_back(k);
        return out;
    }

    BWord letters(std::initializer_list<std::pair<std::uint32_t, Sign>> entries)
    {
        std::vector<SignedLetter<BasisLetter>> raw;
        for (auto [index, sign] : entries)
            raw.push_back({BasisLetter{index}, sign});
        return BWord(std::move(raw));
    }

} // namespace

std::optional<Basis> core_forcing_basis(const Family &family, const SubgroupRewriter &rewriter, BlockId y)
{
    const Block &block = family.block(y);
    auto split = split_basis(rewriter, y, block);
    if (! split || split->other.empty())
        return std::nullopt;
    const std::uint32_t gamma = split->other.front();
    Basis basis = rewriter.basis();
    for (std::uint32_t index : split->own)
        basis = apply_nielsen_move(basis, NielsenMove::multiply(index, gamma, Sign::Positive));
    return basis;
}

std::optional<Basis> uneven_cancellation_basis(const Family &family, const SubgroupRewriter &rewriter, BlockId y)
{
    const Block &block = family.block(y);
    if (block.size() != 5)
        return std::nullopt;
    auto split = split_basis(rewriter, y, block);
    if (! split || split->other.size() < 6)
        return std::nullopt;

    // New letters A, B, c, f replace the four elements of y; x, y, z, d, e, g
    // are six elements of other blocks, kept as they are. Targets:
    //   u0 = x0 x1^-1 = A x y z        u1 = x1 x2^-1 = z^-1 y^-1 x^-1 B
    //   u2 = x2 x3^-1 = B^-1 c d e     u3 = x3 x4^-1 = e^-1 d^-1 f g
    // which forces u4 = x4 x0^-1 = g^-1 f^-1 c^-1 A^-1.
    const auto &o = split->other;
    const std::uint32_t A = split->own[0], B = split->own[1], C = split->own[2], F = split->own[3];
    const std::uint32_t X = o[0], Y = o[1], Z = o[2], D = o[3], E = o[4], G = o[5];
    constexpr Sign P = Sign::Positive, N = Sign::Negative;

    Basis basis = rewriter.basis();
    auto el = [&](std::uint32_t k) { return rewriter.basis().elements[k]; };
    auto u = [&](std::size_t i) {
        return XWord{pos(TaggedLetter{block[i], y}), neg(TaggedLetter{block[(i + 1) % 5], y})};
    };
    const XWord xyz = el(X) * el(Y) * el(Z);
    const XWord de = el(D) * el(E);

    basis.elements[A] = u(0) * inverse(xyz);
    basis.elements[B] = xyz * u(1);
    basis.elements[C] = basis.elements[B] * u(2) * inverse(de);
    basis.elements[F] = de * u(3) * inverse(el(G));

    const std::vector<BWord> targets{
        letters({{A, P}, {X, P}, {Y, P}, {Z, P}}),
        letters({{Z, N}, {Y, N}, {X, N}, {B, P}}),
        letters({{B, N}, {C, P}, {D, P}, {E, P}}),
        letters({{E, N}, {D, N}, {F, P}, {G, P}}),
    };
    // Edge letter of (x_j)(x_0)^-1 is (u0 u1 ... u_{j-1})^-1.
    BWord prefix;
    for (std::size_t j = 1; j < 5; ++j) {
        prefix = prefix * targets[j - 1];
        basis.edge_to_basis[split->own[j - 1]] = inverse(prefix);
    }

    // The old basis is recovered from the new one, so the new elements
    // generate K; having rank-many of them, they form a basis.
    for (std::size_t k = 0; k < basis.rank(); ++k)
        if (expand(basis, basis.edge_to_basis[k]) != rewriter.basis().elements[k])
            throw InternalProofViolation("uneven_cancellation_basis: substitution does not recover the old basis");
    return basis;
}

} // namespace freechoice::adversarial
