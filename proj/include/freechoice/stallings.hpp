#pragma once

// Subgroup graphs of finitely generated subgroups K of a free group, and the
// free basis of K read off a spanning tree of the folded graph.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freechoice/word.hpp"

namespace freechoice {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    VertexId source = 0;
    VertexId target = 0;
    TaggedLetter label;

    bool operator==(const Edge &) const = default;
};

/// Base-pointed graph with edges labelled by X-letters. A reduced word w lies
/// in the subgroup iff reading w from the base follows edges (forwards for
/// positive letters, backwards for negative ones) and returns to the base.
class SubgroupGraph {
public:
    SubgroupGraph() : SubgroupGraph(1, 0, {}) {}
    SubgroupGraph(std::size_t vertex_count, VertexId base, std::vector<Edge> edges);

    /// One closed path at the base per generator; identity words are skipped.
    static SubgroupGraph bouquet(std::span<const XWord> generators);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    VertexId base() const noexcept { return base_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge &edge(EdgeId e) const { return edges_.at(e); }

    /// Edge leaving (entering) v with the given label. On unfolded graphs
    /// this is the lowest-numbered such edge.
    std::optional<EdgeId> out_edge(VertexId v, const TaggedLetter &label) const;
    std::optional<EdgeId> in_edge(VertexId v, const TaggedLetter &label) const;

    /// Edges at v in canonical exploration order: outgoing by label, then
    /// incoming by label.
    std::vector<EdgeId> ordered_incidences(VertexId v) const;

    bool is_folded() const;
    bool is_connected() const;
    std::size_t degree(VertexId v) const;

    /// |E| - |V| + 1, the rank of the subgroup of a connected folded graph.
    std::size_t rank() const { return edges_.size() + 1 - vertex_count_; }

    /// Text form that is identical for isomorphic folded base-pointed graphs.
    std::string canonical_form() const;

    bool operator==(const SubgroupGraph &other) const
    {
        return vertex_count_ == other.vertex_count_ && base_ == other.base_ && edges_ == other.edges_;
    }

private:
    std::size_t vertex_count_;
    VertexId base_;
    std::vector<Edge> edges_;
    std::vector<std::multimap<TaggedLetter, EdgeId>> out_;
    std::vector<std::multimap<TaggedLetter, EdgeId>> in_;
};

/// Identifies equally labelled edges sharing a source (or target) until the
/// graph is deterministic in both directions. The result is renumbered in
/// canonical breadth-first order from the base; edge ids follow
/// (source, label, target) order.
SubgroupGraph fold(const SubgroupGraph &graph);

/// Repeatedly deletes non-base vertices of degree 1 together with their edge.
SubgroupGraph prune(const SubgroupGraph &graph);

/// Folded, pruned graph of the subgroup generated by `generators`.
SubgroupGraph build_subgroup_graph(std::span<const XWord> generators);

/// Breadth-first spanning tree from the base, exploring edges in
/// ordered_incidences order. Returns sorted edge ids.
std::vector<EdgeId> spanning_tree(const SubgroupGraph &graph);

/// A free basis of the subgroup. Each non-tree ("cotree") edge contributes
/// one edge letter; nielsen_perturb may replace the basis words, in which case
/// `edge_to_basis` expresses each edge letter in terms of the current basis.
struct Basis {
    static constexpr std::uint32_t not_cotree = UINT32_MAX;

    std::vector<EdgeId> tree;
    std::vector<EdgeId> cotree;
    std::vector<std::uint32_t> edge_letter; // per edge id: index into cotree, or not_cotree
    std::vector<XWord> elements;
    std::vector<BWord> edge_to_basis;

    std::size_t rank() const noexcept { return elements.size(); }
    bool operator==(const Basis &) const = default;
};

Basis extract_basis(const SubgroupGraph &graph, std::span<const EdgeId> tree);

/// X-word spelled by the tree path from the base to v.
XWord tree_path(const SubgroupGraph &graph, std::span<const EdgeId> tree, VertexId v);

/// Rewrites w as a reduced word in the basis, or nullopt if w is not in the
/// subgroup.
std::optional<BWord> rewrite(const Basis &basis, const SubgroupGraph &graph, const XWord &w);

/// Product of basis elements spelled by b.
XWord expand(const Basis &basis, const BWord &b);

struct NielsenMove {
    enum class Kind { Swap, Invert, Multiply };

    Kind kind = Kind::Swap;
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    Sign sign = Sign::Positive;

    static NielsenMove swap(std::uint32_t i, std::uint32_t j) { return {Kind::Swap, i, j, Sign::Positive}; }
    static NielsenMove invert(std::uint32_t i) { return {Kind::Invert, i, i, Sign::Positive}; }
    /// b_i <- b_i * b_j^sign, requires i != j.
    static NielsenMove multiply(std::uint32_t i, std::uint32_t j, Sign sign) { return {Kind::Multiply, i, j, sign}; }
};

Basis apply_nielsen_move(const Basis &basis, const NielsenMove &move);

/// b_i <- b_j^sign * b_i, composed from invert/multiply/invert.
Basis left_multiply(const Basis &basis, std::uint32_t i, std::uint32_t j, Sign sign);

/// Applies `steps` random elementary Nielsen moves drawn from a
/// Xorshift64Star seeded with `seed`. Each step draws four values in order:
/// kind (mod 3: swap, invert, multiply), i (mod rank), j (mod rank-1, skipping
/// i), sign (low bit set: positive). With rank < 2 every step is an inversion.
/// Seed 0 and rank 0 leave the basis unchanged.
Basis nielsen_perturb(const Basis &basis, std::uint64_t seed, std::size_t steps);

/// A folded subgroup graph together with a basis; immutable once built and
/// safe to query from several threads.
class SubgroupRewriter {
public:
    explicit SubgroupRewriter(std::span<const XWord> generators);
    SubgroupRewriter(SubgroupGraph graph, Basis basis);

    const SubgroupGraph &graph() const noexcept { return graph_; }
    const Basis &basis() const noexcept { return basis_; }
    std::size_t rank() const noexcept { return basis_.rank(); }

    std::optional<BWord> rewrite(const XWord &w) const { return freechoice::rewrite(basis_, graph_, w); }
    XWord expand(const BWord &b) const { return freechoice::expand(basis_, b); }
    bool contains(const XWord &w) const { return rewrite(w).has_value(); }

    SubgroupRewriter perturbed(std::uint64_t seed, std::size_t steps) const
    {
        return {graph_, nielsen_perturb(basis_, seed, steps)};
    }
    SubgroupRewriter with_basis(Basis basis) const { return {graph_, std::move(basis)}; }

private:
    SubgroupGraph graph_;
    Basis basis_;
};

using LetterLabeler = std::function<std::string(const TaggedLetter &)>;

/// Graphviz rendering: vertices in breadth-first order from the base, the
/// base drawn as a double circle, one labelled directed edge per edge.
std::string to_dot(const SubgroupGraph &graph, const LetterLabeler &label);

} // namespace freechoice
