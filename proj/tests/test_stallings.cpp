#include "doctest.h"

#include <set>

#include "freechoice/prng.hpp"
#include "freechoice/stallings.hpp"
#include "support/membership_oracle.hpp"

using namespace freechoice;
using namespace freechoice::testing;

namespace {

const TaggedLetter a{"a", BlockId{0}}, b{"b", BlockId{0}}, c{"c", BlockId{0}};

XWord product_of(const std::vector<XWord> &gens, Xorshift64Star &rng, std::size_t max_factors)
{
    std::vector<SignedLetter<TaggedLetter>> raw;
    std::size_t n = rng.below(max_factors + 1);
    for (std::size_t i = 0; i < n; ++i) {
        XWord g = gens[rng.below(gens.size())];
        if (rng.next() & 1)
            g = inverse(g);
        raw.insert(raw.end(), g.begin(), g.end());
    }
    return XWord(std::move(raw));
}

} // namespace

TEST_CASE("build_subgroup_graph examples")
{
    SUBCASE("empty generator list gives the trivial graph")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{});
        CHECK(g.vertex_count() == 1);
        CHECK(g.edge_count() == 0);
        CHECK(g.rank() == 0);
    }
    SUBCASE("identity generators are skipped")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord(), XWord()});
        CHECK(g.vertex_count() == 1);
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("single letter loop")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a)}});
        CHECK(g.vertex_count() == 1);
        REQUIRE(g.edge_count() == 1);
        CHECK(g.edge(0) == Edge{0, 0, a});
    }
    SUBCASE("a b^-1 gives two parallel edges base -> v")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}});
        CHECK(g.vertex_count() == 2);
        REQUIRE(g.edge_count() == 2);
        CHECK(g.edge(0) == Edge{0, 1, a});
        CHECK(g.edge(1) == Edge{0, 1, b});
        SubgroupRewriter rw(std::vector<XWord>{XWord{pos(a), neg(b)}});
        CHECK(rw.contains(XWord{pos(a), neg(b)}));
        CHECK_FALSE(rw.contains(XWord{pos(a)}));
    }
    SUBCASE("adding the inverse generator changes nothing")
    {
        auto g1 = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}});
        auto g2 = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}, XWord{pos(b), neg(a)}});
        CHECK(g1.canonical_form() == g2.canonical_form());
        CHECK(g1 == g2);
    }
}

TEST_CASE("fold examples")
{
    SUBCASE("folded graph is a fixpoint")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}, XWord{pos(c), pos(c)}});
        CHECK(g.is_folded());
        CHECK(fold(g) == g);
    }
    SUBCASE("duplicate loops merge")
    {
        auto g = fold(SubgroupGraph::bouquet(std::vector<XWord>{XWord{pos(a)}, XWord{pos(a)}}));
        CHECK(g.vertex_count() == 1);
        CHECK(g.edge_count() == 1);
    }
    SUBCASE("ab and ac share their a-edge")
    {
        std::vector<XWord> gens{XWord{pos(a), pos(b)}, XWord{pos(a), pos(c)}};
        auto bouquet = SubgroupGraph::bouquet(gens);
        CHECK(bouquet.vertex_count() == 3);
        CHECK_FALSE(bouquet.is_folded());
        auto g = fold(bouquet);
        CHECK(g.is_folded());
        CHECK(g.vertex_count() == 2);
        REQUIRE(g.edge_count() == 3);
        CHECK(g.edge(0) == Edge{0, 1, a});
        CHECK(g.edge(1) == Edge{1, 0, b});
        CHECK(g.edge(2) == Edge{1, 0, c});

        SubgroupRewriter rw(gens);
        CHECK(rw.contains(gens[0]));
        CHECK(rw.contains(gens[1]));
        CHECK(rw.contains(XWord{pos(a), pos(b), neg(c), neg(a)}));
        CHECK_FALSE(rw.contains(XWord{pos(b), neg(c)}));
        CHECK_FALSE(rw.contains(XWord{pos(a)}));
    }
    SUBCASE("cascading folds collapse a^2 and a^3 to a single loop")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), pos(a)}, XWord{pos(a), pos(a), pos(a)}});
        CHECK(g.vertex_count() == 1);
        CHECK(g.edge_count() == 1);
    }
}

TEST_CASE("prune removes hanging paths")
{
    // a b a^-1 folds to a loop b at a vertex hanging off the base by an a-edge;
    // the base has degree 1 and is kept.
    auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), pos(b), neg(a)}});
    CHECK(g.vertex_count() == 2);
    CHECK(g.edge_count() == 2);

    // A manual graph with a dead branch.
    SubgroupGraph manual(3, 0, {{0, 0, a}, {0, 1, b}, {1, 2, c}});
    auto pruned = prune(manual);
    CHECK(pruned.vertex_count() == 1);
    CHECK(pruned.edge_count() == 1);
}

TEST_CASE("spanning_tree")
{
    CHECK(spanning_tree(build_subgroup_graph(std::vector<XWord>{XWord{pos(a)}})).empty());

    auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}});
    auto tree = spanning_tree(g);
    REQUIRE(tree.size() == 1);
    CHECK(g.edge(tree[0]).label == a);

    Xorshift64Star rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto gens = random_nielsen_reduced(rng, 3);
        auto graph = build_subgroup_graph(gens);
        CHECK(spanning_tree(graph).size() == graph.vertex_count() - 1);
    }
}

TEST_CASE("extract_basis")
{
    SUBCASE("a b^-1 with tree {a} gives b a^-1")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}});
        auto basis = extract_basis(g, spanning_tree(g));
        REQUIRE(basis.rank() == 1);
        CHECK(basis.elements[0] == XWord{pos(b), neg(a)});
        auto r = rewrite(basis, g, XWord{pos(a), neg(b)});
        REQUIRE(r);
        CHECK(*r == BWord{neg(BasisLetter{0})});
    }
    SUBCASE("single loop")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a)}});
        auto basis = extract_basis(g, spanning_tree(g));
        REQUIRE(basis.rank() == 1);
        CHECK(basis.elements[0] == XWord{pos(a)});
    }
    SUBCASE("rank zero")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{});
        CHECK(extract_basis(g, spanning_tree(g)).rank() == 0);
    }
    SUBCASE("a non-spanning edge set is rejected")
    {
        auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}});
        CHECK_THROWS_AS(extract_basis(g, std::vector<EdgeId>{}), std::invalid_argument);
    }
}

TEST_CASE("rewrite and expand")
{
    std::vector<XWord> gens{XWord{pos(a), neg(b)}, XWord{pos(a), pos(c), pos(a)}};
    SubgroupRewriter rw(gens);
    CHECK(rw.rewrite(XWord()) == BWord());
    CHECK(rw.expand(BWord()).is_identity());
    for (std::uint32_t i = 0; i < rw.rank(); ++i) {
        CHECK(rw.rewrite(rw.basis().elements[i]) == BWord{pos(BasisLetter{i})});
        CHECK(rw.expand(BWord{pos(BasisLetter{i})}) == rw.basis().elements[i]);
    }
    for (const auto &g : gens)
        CHECK(rw.expand(*rw.rewrite(g)) == g);
    CHECK_FALSE(rw.rewrite(XWord{pos(a)}));
    CHECK_FALSE(rw.rewrite(XWord{pos(b)}));
}

TEST_CASE("membership matches the brute-force oracle on small instances")
{
    Xorshift64Star rng(2024);
    for (int instance = 0; instance < 12; ++instance) {
        std::size_t alphabet = 2 + static_cast<std::size_t>(instance % 2);
        auto gens = random_nielsen_reduced(rng, alphabet);
        auto members = products_up_to(gens, 6, 6);
        SubgroupRewriter rw(gens);
        CHECK(rw.graph().rank() == rw.rank());
        for (const XWord &w : all_reduced_words(small_alphabet(alphabet), 6)) {
            auto r = rw.rewrite(w);
            bool member = members.count(w) > 0;
            REQUIRE_MESSAGE(r.has_value() == member, format_word(w));
            if (r)
                CHECK(rw.expand(*r) == w);
        }
    }
}

TEST_CASE("rank, determinism and freeness proxy")
{
    Xorshift64Star rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<XWord> gens;
        std::size_t count = 1 + rng.below(4);
        auto alphabet = small_alphabet(3);
        for (std::size_t g = 0; g < count; ++g) {
            std::vector<SignedLetter<TaggedLetter>> raw;
            for (std::size_t i = 0, len = rng.below(6); i < len; ++i)
                raw.push_back({alphabet[rng.below(3)], (rng.next() & 1) ? Sign::Positive : Sign::Negative});
            gens.push_back(XWord(std::move(raw)));
        }
        SubgroupRewriter first(gens), second(gens);
        CHECK(first.graph() == second.graph());
        CHECK(first.basis() == second.basis());
        CHECK(first.graph().is_folded());
        CHECK(first.graph().is_connected());
        for (VertexId v = 1; v < first.graph().vertex_count(); ++v)
            CHECK(first.graph().degree(v) >= 2);
        CHECK(first.rank() == first.graph().edge_count() - first.graph().vertex_count() + 1);

        auto refolded = build_subgroup_graph(first.basis().elements);
        CHECK(refolded.canonical_form() == first.graph().canonical_form());
        CHECK(refolded.rank() == first.rank());

        for (const auto &g : gens)
            CHECK(first.expand(*first.rewrite(g)) == g);
    }
}

TEST_CASE("nielsen_perturb")
{
    std::vector<XWord> gens{XWord{pos(a), neg(b)}, XWord{pos(b), neg(c)}, XWord{pos(a), pos(a)}};
    SubgroupRewriter rw(gens);

    CHECK(nielsen_perturb(rw.basis(), 42, 0) == rw.basis());
    CHECK(nielsen_perturb(rw.basis(), 0, 25) == rw.basis());

    SUBCASE("elementary moves")
    {
        const Basis &base = rw.basis();
        auto swapped = apply_nielsen_move(base, NielsenMove::swap(0, 1));
        CHECK(swapped.elements[0] == base.elements[1]);
        auto inverted = apply_nielsen_move(base, NielsenMove::invert(2));
        CHECK(inverted.elements[2] == inverse(base.elements[2]));
        auto multiplied = apply_nielsen_move(base, NielsenMove::multiply(0, 2, Sign::Negative));
        CHECK(multiplied.elements[0] == base.elements[0] * inverse(base.elements[2]));
        auto left = left_multiply(base, 1, 0, Sign::Positive);
        CHECK(left.elements[1] == base.elements[0] * base.elements[1]);
        CHECK_THROWS_AS(apply_nielsen_move(base, NielsenMove::multiply(1, 1, Sign::Positive)), std::invalid_argument);
        CHECK_THROWS_AS(apply_nielsen_move(base, NielsenMove::invert(9)), std::out_of_range);
    }

    Xorshift64Star rng(11);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto moved = rw.perturbed(seed, 1 + seed % 20);
        CHECK(build_subgroup_graph(moved.basis().elements).canonical_form() == rw.graph().canonical_form());
        XWord w = product_of(gens, rng, 8);
        auto r = moved.rewrite(w);
        REQUIRE(r);
        CHECK(moved.expand(*r) == w);
        for (std::uint32_t i = 0; i < moved.rank(); ++i)
            CHECK(moved.rewrite(moved.basis().elements[i]) == BWord{pos(BasisLetter{i})});
    }

    CHECK(rw.perturbed(5, 10).basis() == rw.perturbed(5, 10).basis());
}

TEST_CASE("DOT export is deterministic and marks the base")
{
    auto g = build_subgroup_graph(std::vector<XWord>{XWord{pos(a), neg(b)}});
    auto dot = to_dot(g, [](const TaggedLetter &l) { return to_string(l); });
    CHECK(dot ==
        "digraph subgroup {\n"
        "  node [shape=circle];\n"
        "  0 [shape=doublecircle];\n"
        "  1;\n"
        "  0 -> 1 [label=\"a@y0\"];\n"
        "  0 -> 1 [label=\"b@y0\"];\n"
        "}\n");
}
