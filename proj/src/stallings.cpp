#include "freechoice/stallings.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "freechoice/errors.hpp"
#include "freechoice/prng.hpp"

namespace freechoice {

namespace {

    bool edge_order(const Edge &a, const Edge &b)
    {
        return std::tie(a.source, a.label, a.target) < std::tie(b.source, b.label, b.target);
    }

    // Relabels vertices in breadth-first discovery order from the base and
    // sorts edges. Vertices unreachable from the base are dropped.
    SubgroupGraph renumber(std::size_t vertex_count, VertexId base, const std::vector<Edge> &edges)
    {
        SubgroupGraph indexed(vertex_count, base, edges);
        constexpr VertexId unseen = UINT32_MAX;
        std::vector<VertexId> label(vertex_count, unseen);
        std::deque<VertexId> queue{base};
        label[base] = 0;
        VertexId next = 1;
        while (! queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (EdgeId e : indexed.ordered_incidences(v)) {
                const Edge &edge = edges[e];
                VertexId other = edge.source == v ? edge.target : edge.source;
                if (label[other] == unseen) {
                    label[other] = next++;
                    queue.push_back(other);
                }
            }
        }

        std::vector<Edge> out;
        out.reserve(edges.size());
        for (const Edge &e : edges)
            if (label[e.source] != unseen)
                out.push_back({label[e.source], label[e.target], e.label});
        std::sort(out.begin(), out.end(), edge_order);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return {next, 0, std::move(out)};
    }

    class UnionFind {
    public:
        explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), VertexId{0}); }

        VertexId find(VertexId v)
        {
            while (parent_[v] != v) {
                parent_[v] = parent_[parent_[v]];
                v = parent_[v];
            }
            return v;
        }

        // The smaller id survives, so the base (vertex 0 after bouquet) is
        // never absorbed.
        std::pair<VertexId, VertexId> unite(VertexId a, VertexId b)
        {
            a = find(a);
            b = find(b);
            if (b < a)
                std::swap(a, b);
            parent_[b] = a;
            return {a, b};
        }

    private:
        std::vector<VertexId> parent_;
    };

} // namespace

SubgroupGraph::SubgroupGraph(std::size_t vertex_count, VertexId base, std::vector<Edge> edges) :
    vertex_count_(vertex_count),
    base_(base),
    edges_(std::move(edges)),
    out_(vertex_count),
    in_(vertex_count)
{
    if (base_ >= vertex_count_)
        throw std::invalid_argument("subgroup graph base vertex out of range");
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        const Edge &edge = edges_[e];
        if (edge.source >= vertex_count_ || edge.target >= vertex_count_)
            throw std::invalid_argument("subgroup graph edge endpoint out of range");
        out_[edge.source].emplace(edge.label, e);
        in_[edge.target].emplace(edge.label, e);
    }
}

SubgroupGraph SubgroupGraph::bouquet(std::span<const XWord> generators)
{
    std::vector<Edge> edges;
    std::size_t vertices = 1;
    for (const XWord &g : generators) {
        if (g.is_identity())
            continue;
        VertexId at = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            VertexId next = (i + 1 == g.size()) ? 0 : static_cast<VertexId>(vertices++);
            if (g[i].sign == Sign::Positive)
                edges.push_back({at, next, g[i].letter});
            else
                edges.push_back({next, at, g[i].letter});
            at = next;
        }
    }
    return {vertices, 0, std::move(edges)};
}

std::optional<EdgeId> SubgroupGraph::out_edge(VertexId v, const TaggedLetter &label) const
{
    auto it = out_.at(v).find(label);
    if (it == out_[v].end())
        return std::nullopt;
    return it->second;
}

std::optional<EdgeId> SubgroupGraph::in_edge(VertexId v, const TaggedLetter &label) const
{
    auto it = in_.at(v).find(label);
    if (it == in_[v].end())
        return std::nullopt;
    return it->second;
}

std::vector<EdgeId> SubgroupGraph::ordered_incidences(VertexId v) const
{
    std::vector<EdgeId> result;
    for (const auto &[label, e] : out_.at(v))
        result.push_back(e);
    for (const auto &[label, e] : in_.at(v))
        result.push_back(e);
    return result;
}

bool SubgroupGraph::is_folded() const
{
    for (VertexId v = 0; v < vertex_count_; ++v) {
        for (const auto *side : {&out_[v], &in_[v]})
            for (auto it = side->begin(); it != side->end(); ++it)
                if (side->count(it->first) > 1)
                    return false;
    }
    return true;
}

bool SubgroupGraph::is_connected() const
{
    std::vector<bool> seen(vertex_count_, false);
    std::vector<VertexId> stack{base_};
    seen[base_] = true;
    std::size_t reached = 1;
    while (! stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (EdgeId e : ordered_incidences(v)) {
            VertexId other = edges_[e].source == v ? edges_[e].target : edges_[e].source;
            if (! seen[other]) {
                seen[other] = true;
                ++reached;
                stack.push_back(other);
            }
        }
    }
    return reached == vertex_count_;
}

std::size_t SubgroupGraph::degree(VertexId v) const { return out_.at(v).size() + in_.at(v).size(); }

std::string SubgroupGraph::canonical_form() const
{
    SubgroupGraph g = renumber(vertex_count_, base_, edges_);
    std::ostringstream out;
    out << "V " << g.vertex_count() << "\n";
    for (const Edge &e : g.edges())
        out << e.source << ' ' << to_string(e.label) << ' ' << e.target << "\n";
    return out.str();
}

SubgroupGraph fold(const SubgroupGraph &graph)
{
    const std::size_t n = graph.vertex_count();
    const auto edges = graph.edges();
    UnionFind uf(n);
    std::vector<bool> alive(edges.size(), true);
    std::vector<std::vector<EdgeId>> incident(n);
    for (EdgeId e = 0; e < edges.size(); ++e) {
        incident[edges[e].source].push_back(e);
        if (edges[e].target != edges[e].source)
            incident[edges[e].target].push_back(e);
    }

    std::deque<VertexId> work;
    for (VertexId v = 0; v < n; ++v)
        work.push_back(v);

    enum class Side : std::uint8_t { Out, In };

    while (! work.empty()) {
        VertexId v = uf.find(work.front());
        work.pop_front();

        std::map<std::pair<TaggedLetter, Side>, EdgeId> seen;
        std::vector<EdgeId> kept;
        bool rescan = false;

        for (std::size_t idx = 0; idx < incident[v].size(); ++idx) {
            EdgeId e = incident[v][idx];
            if (! alive[e])
                continue;
            for (Side side : {Side::Out, Side::In}) {
                VertexId s = uf.find(edges[e].source), t = uf.find(edges[e].target);
                if ((side == Side::Out ? s : t) != v)
                    continue;
                auto [it, inserted] = seen.emplace(std::pair{edges[e].label, side}, e);
                if (inserted || it->second == e)
                    continue;
                if (! alive[it->second]) {
                    it->second = e;
                    continue;
                }

                EdgeId twin = it->second;
                VertexId other = side == Side::Out ? t : s;
                VertexId twin_other = uf.find(side == Side::Out ? edges[twin].target : edges[twin].source);
                alive[e] = false;
                if (other != twin_other) {
                    auto [keep, absorbed] = uf.unite(other, twin_other);
                    auto &into = incident[keep];
                    into.insert(into.end(), incident[absorbed].begin(), incident[absorbed].end());
                    incident[absorbed].clear();
                    incident[absorbed].shrink_to_fit();
                    work.push_back(keep);
                    if (uf.find(v) != v)
                        rescan = true;
                }
                break;
            }
            if (rescan)
                break;
            if (alive[e])
                kept.push_back(e);
        }

        if (rescan)
            work.push_back(uf.find(v));
        else
            incident[v] = std::move(kept);
    }

    std::vector<Edge> folded;
    for (EdgeId e = 0; e < edges.size(); ++e)
        if (alive[e])
            folded.push_back({uf.find(edges[e].source), uf.find(edges[e].target), edges[e].label});
    return renumber(n, uf.find(graph.base()), folded);
}

SubgroupGraph prune(const SubgroupGraph &graph)
{
    const std::size_t n = graph.vertex_count();
    const auto edges = graph.edges();
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::vector<EdgeId>> incident(n);
    for (EdgeId e = 0; e < edges.size(); ++e) {
        ++degree[edges[e].source];
        ++degree[edges[e].target];
        incident[edges[e].source].push_back(e);
        if (edges[e].target != edges[e].source)
            incident[edges[e].target].push_back(e);
    }

    std::vector<bool> alive(edges.size(), true);
    std::deque<VertexId> leaves;
    for (VertexId v = 0; v < n; ++v)
        if (v != graph.base() && degree[v] == 1)
            leaves.push_back(v);

    while (! leaves.empty()) {
        VertexId v = leaves.front();
        leaves.pop_front();
        if (degree[v] != 1)
            continue;
        for (EdgeId e : incident[v]) {
            if (! alive[e])
                continue;
            alive[e] = false;
            VertexId other = edges[e].source == v ? edges[e].target : edges[e].source;
            --degree[v];
            --degree[other];
            if (other != graph.base() && degree[other] == 1)
                leaves.push_back(other);
            break;
        }
    }

    std::vector<Edge> kept;
    for (EdgeId e = 0; e < edges.size(); ++e)
        if (alive[e])
            kept.push_back(edges[e]);
    return renumber(n, graph.base(), kept);
}

SubgroupGraph build_subgroup_graph(std::span<const XWord> generators)
{
    return prune(fold(SubgroupGraph::bouquet(generators)));
}

std::vector<EdgeId> spanning_tree(const SubgroupGraph &graph)
{
    std::vector<bool> seen(graph.vertex_count(), false);
    std::vector<EdgeId> tree;
    std::deque<VertexId> queue{graph.base()};
    seen[graph.base()] = true;
    while (! queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (EdgeId e : graph.ordered_incidences(v)) {
            const Edge &edge = graph.edge(e);
            VertexId other = edge.source == v ? edge.target : edge.source;
            if (! seen[other]) {
                seen[other] = true;
                tree.push_back(e);
                queue.push_back(other);
            }
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

namespace {

    // Tree-path words from the base to every vertex.
    std::vector<XWord> tree_paths(const SubgroupGraph &graph, std::span<const EdgeId> tree)
    {
        std::vector<std::vector<EdgeId>> tree_incident(graph.vertex_count());
        for (EdgeId e : tree) {
            tree_incident[graph.edge(e).source].push_back(e);
            tree_incident[graph.edge(e).target].push_back(e);
        }
        std::vector<XWord> path(graph.vertex_count());
        std::vector<bool> seen(graph.vertex_count(), false);
        std::deque<VertexId> queue{graph.base()};
        seen[graph.base()] = true;
        std::size_t reached = 1;
        while (! queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (EdgeId e : tree_incident[v]) {
                const Edge &edge = graph.edge(e);
                bool forward = edge.source == v;
                VertexId other = forward ? edge.target : edge.source;
                if (seen[other])
                    continue;
                seen[other] = true;
                ++reached;
                path[other] = concat(path[v], letter_word(edge.label, forward ? Sign::Positive : Sign::Negative));
                queue.push_back(other);
            }
        }
        if (reached != graph.vertex_count() || tree.size() + 1 != graph.vertex_count())
            throw std::invalid_argument("edge set is not a spanning tree");
        return path;
    }

} // namespace

XWord tree_path(const SubgroupGraph &graph, std::span<const EdgeId> tree, VertexId v)
{
    return tree_paths(graph, tree).at(v);
}

Basis extract_basis(const SubgroupGraph &graph, std::span<const EdgeId> tree)
{
    auto paths = tree_paths(graph, tree);
    Basis basis;
    basis.tree.assign(tree.begin(), tree.end());
    std::sort(basis.tree.begin(), basis.tree.end());
    basis.edge_letter.assign(graph.edge_count(), Basis::not_cotree);

    std::vector<bool> in_tree(graph.edge_count(), false);
    for (EdgeId e : tree)
        in_tree[e] = true;
    for (EdgeId e = 0; e < graph.edge_count(); ++e) {
        if (in_tree[e])
            continue;
        const Edge &edge = graph.edge(e);
        auto index = static_cast<std::uint32_t>(basis.cotree.size());
        basis.cotree.push_back(e);
        basis.edge_letter[e] = index;
        basis.elements.push_back(paths[edge.source] * letter_word(edge.label) * inverse(paths[edge.target]));
        basis.edge_to_basis.push_back(letter_word(BasisLetter{index}));
    }
    return basis;
}

std::optional<BWord> rewrite(const Basis &basis, const SubgroupGraph &graph, const XWord &w)
{
    std::vector<SignedLetter<BasisLetter>> edge_word;
    VertexId at = graph.base();
    for (const auto &l : w) {
        auto e = l.sign == Sign::Positive ? graph.out_edge(at, l.letter) : graph.in_edge(at, l.letter);
        if (! e)
            return std::nullopt;
        const Edge &edge = graph.edge(*e);
        at = l.sign == Sign::Positive ? edge.target : edge.source;
        if (std::uint32_t letter = basis.edge_letter.at(*e); letter != Basis::not_cotree) {
            SignedLetter<BasisLetter> next{BasisLetter{letter}, l.sign};
            proof_check(edge_word.empty() || ! edge_word.back().is_inverse_of(next),
                "rewrite produced an unreduced edge word");
            edge_word.push_back(next);
        }
    }
    if (at != graph.base())
        return std::nullopt;

    std::vector<SignedLetter<BasisLetter>> out;
    for (const auto &l : edge_word) {
        const BWord &image = basis.edge_to_basis.at(l.letter.index);
        if (l.sign == Sign::Positive)
            out.insert(out.end(), image.begin(), image.end());
        else {
            BWord inv = inverse(image);
            out.insert(out.end(), inv.begin(), inv.end());
        }
    }
    return BWord(std::move(out));
}

XWord expand(const Basis &basis, const BWord &b)
{
    std::vector<SignedLetter<TaggedLetter>> out;
    for (const auto &l : b) {
        const XWord &element = basis.elements.at(l.letter.index);
        if (l.sign == Sign::Positive)
            out.insert(out.end(), element.begin(), element.end());
        else {
            XWord inv = inverse(element);
            out.insert(out.end(), inv.begin(), inv.end());
        }
    }
    return XWord(std::move(out));
}

namespace {

    template <typename F>
    void substitute_letters(Basis &basis, F &&image)
    {
        for (BWord &w : basis.edge_to_basis) {
            std::vector<SignedLetter<BasisLetter>> out;
            for (const auto &l : w) {
                auto piece = image(l);
                out.insert(out.end(), piece.begin(), piece.end());
            }
            w = BWord(std::move(out));
        }
    }

} // namespace

Basis apply_nielsen_move(const Basis &basis, const NielsenMove &move)
{
    const auto rank = basis.rank();
    if (move.i >= rank || move.j >= rank)
        throw std::out_of_range("Nielsen move index out of range");

    using L = SignedLetter<BasisLetter>;
    Basis out = basis;
    const BasisLetter bi{move.i}, bj{move.j};

    switch (move.kind) {
    case NielsenMove::Kind::Swap:
        std::swap(out.elements[move.i], out.elements[move.j]);
        substitute_letters(out, [&](const L &l) {
            if (l.letter == bi)
                return std::vector<L>{{bj, l.sign}};
            if (l.letter == bj)
                return std::vector<L>{{bi, l.sign}};
            return std::vector<L>{l};
        });
        break;

    case NielsenMove::Kind::Invert:
        out.elements[move.i] = inverse(out.elements[move.i]);
        substitute_letters(out, [&](const L &l) {
            return l.letter == bi ? std::vector<L>{l.inverse()} : std::vector<L>{l};
        });
        break;

    case NielsenMove::Kind::Multiply: {
        if (move.i == move.j)
            throw std::invalid_argument("Nielsen multiply needs distinct indices");
        const XWord &factor = out.elements[move.j];
        out.elements[move.i] = out.elements[move.i] * (move.sign == Sign::Positive ? factor : inverse(factor));
        // old b_i = new b_i * b_j^-sign
        substitute_letters(out, [&](const L &l) {
            if (l.letter != bi)
                return std::vector<L>{l};
            if (l.sign == Sign::Positive)
                return std::vector<L>{{bi, Sign::Positive}, {bj, flip(move.sign)}};
            return std::vector<L>{{bj, move.sign}, {bi, Sign::Negative}};
        });
        break;
    }
    }
    return out;
}

Basis left_multiply(const Basis &basis, std::uint32_t i, std::uint32_t j, Sign sign)
{
    // (b_i^-1 * b_j^-sign)^-1 = b_j^sign * b_i
    Basis out = apply_nielsen_move(basis, NielsenMove::invert(i));
    out = apply_nielsen_move(out, NielsenMove::multiply(i, j, flip(sign)));
    return apply_nielsen_move(out, NielsenMove::invert(i));
}

Basis nielsen_perturb(const Basis &basis, std::uint64_t seed, std::size_t steps)
{
    const auto rank = static_cast<std::uint32_t>(basis.rank());
    if (seed == 0 || rank == 0)
        return basis;

    Xorshift64Star rng(seed);
    Basis out = basis;
    for (std::size_t step = 0; step < steps; ++step) {
        std::uint64_t kind = rng.below(3);
        auto i = static_cast<std::uint32_t>(rng.below(rank));
        std::uint64_t j_draw = rng.next();
        Sign sign = (rng.next() & 1) ? Sign::Positive : Sign::Negative;

        if (rank < 2) {
            out = apply_nielsen_move(out, NielsenMove::invert(i));
            continue;
        }
        auto j = static_cast<std::uint32_t>(j_draw % (rank - 1));
        if (j >= i)
            ++j;
        switch (kind) {
        case 0:
            out = apply_nielsen_move(out, NielsenMove::swap(i, j));
            break;
        case 1:
            out = apply_nielsen_move(out, NielsenMove::invert(i));
            break;
        default:
            out = apply_nielsen_move(out, NielsenMove::multiply(i, j, sign));
            break;
        }
    }
    return out;
}

SubgroupRewriter::SubgroupRewriter(std::span<const XWord> generators) :
    graph_(build_subgroup_graph(generators))
{
    basis_ = extract_basis(graph_, spanning_tree(graph_));
}

SubgroupRewriter::SubgroupRewriter(SubgroupGraph graph, Basis basis) :
    graph_(std::move(graph)),
    basis_(std::move(basis))
{
}

std::string to_dot(const SubgroupGraph &graph, const LetterLabeler &label)
{
    auto quote = [](const std::string &s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\')
                out += '\\';
            out += c;
        }
        return out + "\"";
    };

    std::ostringstream out;
    out << "digraph subgroup {\n";
    out << "  node [shape=circle];\n";
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
        out << "  " << v;
        if (v == graph.base())
            out << " [shape=doublecircle]";
        out << ";\n";
    }
    for (const Edge &e : graph.edges())
        out << "  " << e.source << " -> " << e.target << " [label=" << quote(label(e.label)) << "];\n";
    out << "}\n";
    return out.str();
}

} // namespace freechoice
