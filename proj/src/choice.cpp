#include "freechoice/choice.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <thread>

namespace freechoice {

std::string_view to_string(CaseTag tag)
{
    switch (tag) {
    case CaseTag::Singleton: return "singleton";
    case CaseTag::PairOdd: return "pair-odd";
    case CaseTag::PairEven: return "pair-even";
    case CaseTag::NotBijection: return "not-bijection";
    case CaseTag::MultiOrbit: return "multi-orbit";
    case CaseTag::EvenSquareOrbits: return "even-square-orbits";
    case CaseTag::OddMinLen: return "odd-minlen";
    case CaseTag::OddMinCancel: return "odd-mincancel";
    case CaseTag::OddCore: return "odd-core";
    }
    return "unknown";
}

std::optional<CaseTag> parse_case_tag(std::string_view name)
{
    for (CaseTag tag : all_case_tags)
        if (to_string(tag) == name)
            return tag;
    return std::nullopt;
}

namespace {

    TaggedLetter tagged(const std::string &x, BlockId y) { return {x, y}; }

    // (a,y)(b,y)^-1
    XWord difference(const std::string &a, const std::string &b, BlockId y)
    {
        return XWord{pos(tagged(a, y)), neg(tagged(b, y))};
    }

    BWord rewrite_in_k(const SubgroupRewriter &rewriter, const XWord &w, const std::string &what)
    {
        auto b = rewriter.rewrite(w);
        proof_check(b.has_value(), what + " is not a member of K");
        return *b;
    }

    // Given x_0..x_{n-1} (cyclically) and B-words w_i of x_i x_{i+1}^-1, forms
    // f(x_i) = first `half` letters of w_i and checks that g(x_i) = f(x_i)^-1 x_i
    // is one and the same word alpha with sigma_y(alpha) = 1.
    std::pair<HalfWordCore, std::string> half_word_core(BlockId y, const std::vector<std::string> &xs,
        const std::vector<BWord> &words, std::size_t half, const SubgroupRewriter &rewriter, const std::string &where)
    {
        const std::size_t n = xs.size();
        HalfWordCore core;
        core.half = half;
        std::vector<XWord> expanded;
        for (std::size_t i = 0; i < n; ++i) {
            core.halves.push_back(words[i].prefix(half));
            expanded.push_back(rewriter.expand(core.halves.back()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t next = (i + 1) % n;
            proof_check(expanded[i] * inverse(expanded[next]) == difference(xs[i], xs[next], y),
                where + ": f(x_i) f(x_{i+1})^-1 differs from x_i x_{i+1}^-1 at i=" + std::to_string(i));
        }
        core.alpha = inverse(expanded[0]) * letter_word(tagged(xs[0], y));
        for (std::size_t i = 1; i < n; ++i)
            proof_check(inverse(expanded[i]) * letter_word(tagged(xs[i], y)) == core.alpha,
                where + ": g is not constant at i=" + std::to_string(i));
        proof_check(sigma(y, core.alpha) == 1, where + ": sigma_y(alpha) != 1");
        std::size_t first = first_letter_in_block(y, core.alpha);
        proof_check(first < core.alpha.size(), where + ": alpha has no y-letter");
        std::string chosen = core.alpha[first].letter.element;
        return {std::move(core), std::move(chosen)};
    }

    // Reads prev entries for subsets of y, recording each read.
    class SubsetLookup {
    public:
        SubsetLookup(const Family &family, BlockId y, const ChoiceTable &prev) : family_(family), y_(y), prev_(prev) {}

        const std::string &operator()(const Block &subset)
        {
            auto id = family_.find(subset);
            if (! id)
                throw MissingSubsetChoice("block " + block_name(subset) + " is not in the family");
            auto it = prev_.choices.find(*id);
            if (it == prev_.choices.end())
                throw MissingSubsetChoice("no choice recorded for " + block_name(subset) + " while solving " +
                    family_.name(y_));
            consumed.emplace_back(*id, it->second);
            return it->second;
        }

        std::vector<std::pair<BlockId, std::string>> consumed;

    private:
        const Family &family_;
        BlockId y_;
        const ChoiceTable &prev_;
    };

    Block image_of(const SuccessorMap &s)
    {
        std::vector<std::string> values;
        for (const auto &[x, sx] : s)
            values.push_back(sx);
        return make_block(std::move(values));
    }

    Choice orbit_choice(const SuccessorMap &successor, const SuccessorMap &map, bool squared, SubsetLookup &lookup)
    {
        OrbitTrace trace{successor, squared, orbits(map), {}};
        std::vector<std::string> reps;
        for (const Block &orbit : trace.orbits)
            reps.push_back(lookup(orbit));
        trace.representatives = make_block(std::move(reps));
        std::string chosen = lookup(trace.representatives);
        CaseTag tag = squared ? CaseTag::EvenSquareOrbits : CaseTag::MultiOrbit;
        return {chosen, Trace{tag, chosen, std::move(lookup.consumed), std::move(trace)}};
    }

    template <typename T>
    Block subset_at_minimum(const std::vector<std::string> &xs, const std::vector<T> &values)
    {
        T least = *std::min_element(values.begin(), values.end());
        std::vector<std::string> subset;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (values[i] == least)
                subset.push_back(xs[i]);
        return make_block(std::move(subset));
    }

} // namespace

Choice choose_pair(const Family &family, BlockId y, const SubgroupRewriter &rewriter)
{
    const Block &block = family.block(y);
    if (block.size() != 2)
        throw std::invalid_argument("choose_pair needs a two-element block, got " + block_name(block));
    const std::string where = "pair " + block_name(block);

    PairWords pair;
    pair.elements = {block[0], block[1]};
    pair.words[0] = rewrite_in_k(rewriter, difference(block[0], block[1], y), where + " x0 x1^-1");
    pair.words[1] = rewrite_in_k(rewriter, difference(block[1], block[0], y), where + " x1 x0^-1");

    const std::size_t l = pair.words[0].size();
    proof_check(pair.words[1].size() == l, where + ": B-words have different lengths");
    proof_check(l > 0, where + ": x0 x1^-1 rewrites to the identity");
    for (std::size_t j = 0; j < l; ++j)
        proof_check(pair.words[1][j] == pair.words[0][l - 1 - j].inverse(),
            where + ": B-words are not mirror inverses at position " + std::to_string(j));
    pair.length = l;

    if (l % 2 == 1) {
        std::size_t mid = (l - 1) / 2;
        PairOddTrace trace{pair, {pair.words[0][mid], pair.words[1][mid]}};
        bool first_positive = trace.middles[0].sign == Sign::Positive;
        proof_check(first_positive != (trace.middles[1].sign == Sign::Positive),
            where + ": middle letters do not have opposite signs");
        std::string chosen = pair.elements[first_positive ? 0 : 1];
        return {chosen, Trace{CaseTag::PairOdd, chosen, {}, std::move(trace)}};
    }

    std::vector<std::string> xs{pair.elements[0], pair.elements[1]};
    std::vector<BWord> words{pair.words[0], pair.words[1]};
    auto [core, chosen] = half_word_core(y, xs, words, l / 2, rewriter, where);
    return {chosen, Trace{CaseTag::PairEven, chosen, {}, PairEvenTrace{std::move(pair), std::move(core)}}};
}

SuccessorMap successor_map(const Family &family, BlockId y, const ChoiceTable &prev)
{
    const Block &block = family.block(y);
    SubsetLookup lookup(family, y, prev);
    SuccessorMap s;
    for (const auto &x : block) {
        Block rest;
        for (const auto &other : block)
            if (other != x)
                rest.push_back(other);
        s[x] = lookup(rest);
    }
    return s;
}

std::vector<Block> orbits(const SuccessorMap &successor)
{
    if (image_of(successor).size() != successor.size())
        throw NotBijection("successor map is not a bijection");
    std::set<std::string> done;
    std::vector<Block> out;
    for (const auto &[x, sx] : successor) {
        if (done.count(x))
            continue;
        std::vector<std::string> orbit;
        std::string at = x;
        do {
            orbit.push_back(at);
            done.insert(at);
            auto it = successor.find(at);
            if (it == successor.end())
                throw NotBijection("successor map leaves its domain at '" + at + "'");
            at = it->second;
        } while (at != x);
        out.push_back(make_block(std::move(orbit)));
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

Choice choose_general(const Family &family, BlockId y, const ChoiceTable &prev, const SubgroupRewriter &rewriter,
    std::size_t start)
{
    const Block &block = family.block(y);
    const std::size_t n = block.size();
    if (n < 3)
        throw std::invalid_argument("choose_general needs at least three elements, got " + block_name(block));
    const std::string where = "block " + block_name(block);

    SubsetLookup lookup(family, y, prev);
    SuccessorMap s;
    for (const auto &x : block) {
        Block rest;
        for (const auto &other : block)
            if (other != x)
                rest.push_back(other);
        s[x] = lookup(rest);
        proof_check(s[x] != x, where + ": successor has a fixed point");
    }

    Block image = image_of(s);
    if (image.size() < n) {
        std::string chosen = lookup(image);
        return {chosen, Trace{CaseTag::NotBijection, chosen, std::move(lookup.consumed), NotBijectionTrace{s, image}}};
    }

    auto cycles = orbits(s);
    if (cycles.size() >= 2)
        return orbit_choice(s, s, false, lookup);

    if (n % 2 == 0) {
        SuccessorMap square;
        for (const auto &[x, sx] : s)
            square[x] = s.at(sx);
        proof_check(orbits(square).size() == 2, where + ": s^2 of an even cycle does not have two orbits");
        return orbit_choice(s, square, true, lookup);
    }

    CycleWords cycle;
    cycle.successor = s;
    cycle.cycle.push_back(block.at(start % n));
    for (std::size_t i = 1; i < n; ++i)
        cycle.cycle.push_back(s.at(cycle.cycle.back()));
    const auto &xs = cycle.cycle;
    for (std::size_t i = 0; i < n; ++i) {
        cycle.words.push_back(rewrite_in_k(rewriter, difference(xs[i], xs[(i + 1) % n], y),
            where + " x_" + std::to_string(i) + " x_" + std::to_string((i + 1) % n) + "^-1"));
        cycle.lengths.push_back(cycle.words.back().size());
    }

    {
        std::vector<SignedLetter<BasisLetter>> all;
        for (const BWord &w : cycle.words)
            all.insert(all.end(), w.begin(), w.end());
        proof_check(BWord(std::move(all)).is_identity(), where + ": cyclic product of B-words is not the identity");
    }

    auto all_equal = [](const std::vector<std::size_t> &v) {
        return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
    };

    if (! all_equal(cycle.lengths)) {
        Block subset = subset_at_minimum(xs, cycle.lengths);
        proof_check(! subset.empty() && subset.size() < n, where + ": minimal-length subset is not proper");
        std::size_t least = *std::min_element(cycle.lengths.begin(), cycle.lengths.end());
        std::string chosen = lookup(subset);
        return {chosen, Trace{CaseTag::OddMinLen, chosen, std::move(lookup.consumed),
                            OddMinLenTrace{std::move(cycle), least, std::move(subset)}}};
    }

    std::vector<std::size_t> cancellations;
    for (std::size_t i = 0; i < n; ++i)
        cancellations.push_back(cancellation_count(cycle.words[i], cycle.words[(i + 1) % n]));

    if (! all_equal(cancellations)) {
        Block subset = subset_at_minimum(xs, cancellations);
        proof_check(! subset.empty() && subset.size() < n, where + ": minimal-cancellation subset is not proper");
        std::size_t least = *std::min_element(cancellations.begin(), cancellations.end());
        std::string chosen = lookup(subset);
        return {chosen, Trace{CaseTag::OddMinCancel, chosen, std::move(lookup.consumed),
                            OddMinCancelTrace{std::move(cycle), std::move(cancellations), least, std::move(subset)}}};
    }

    const std::size_t l = cycle.lengths.front();
    const std::size_t k = cancellations.front();
    proof_check((n * l) % 2 == 0, where + ": n*l is odd");
    proof_check(l % 2 == 0, where + ": l is odd");
    const std::size_t m = l / 2;
    proof_check(k >= m, where + ": k < m");

    auto [core, chosen] = half_word_core(y, xs, cycle.words, m, rewriter, where);
    return {chosen, Trace{CaseTag::OddCore, chosen, std::move(lookup.consumed),
                        OddCoreTrace{std::move(cycle), std::move(cancellations), l, k, std::move(core)}}};
}

namespace {

    Choice choose_one(const Family &family, BlockId y, const ChoiceTable &prev, const SubgroupRewriter &rewriter)
    {
        const Block &block = family.block(y);
        switch (block.size()) {
        case 1: return {block[0], Trace{CaseTag::Singleton, block[0], {}, SingletonTrace{}}};
        case 2: return choose_pair(family, y, rewriter);
        default: return choose_general(family, y, prev, rewriter);
        }
    }

} // namespace

ChoiceTable solve(const Family &family, const SubgroupRewriter &rewriter, unsigned jobs)
{
    ChoiceTable table;
    for (const auto &level : family.levels()) {
        std::vector<std::optional<Choice>> results(level.size());
        const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(level.size())));

        if (workers == 1) {
            for (std::size_t i = 0; i < level.size(); ++i)
                results[i] = choose_one(family, level[i], table, rewriter);
        }
        else {
            // The table is read-only while a level is being processed.
            std::vector<std::exception_ptr> errors(workers);
            std::vector<std::thread> threads;
            for (unsigned t = 0; t < workers; ++t)
                threads.emplace_back([&, t] {
                    try {
                        for (std::size_t i = t; i < level.size(); i += workers)
                            results[i] = choose_one(family, level[i], table, rewriter);
                    }
                    catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            for (auto &th : threads)
                th.join();
            for (auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
        }

        for (std::size_t i = 0; i < level.size(); ++i) {
            table.choices[level[i]] = results[i]->element;
            table.traces[level[i]] = std::move(results[i]->trace);
        }
    }
    return table;
}

Solution solve(const std::vector<std::vector<std::string>> &z, const SolveOptions &options)
{
    Family family = Family::close_under_subsets(z, options.max_block);
    auto generators = k_generators(family);
    SubgroupRewriter rewriter = SubgroupRewriter(generators).perturbed(options.seed, options.perturb_steps);
    ChoiceTable table = solve(family, rewriter, options.jobs);
    return {std::move(family), std::move(rewriter), std::move(table)};
}

Solution solve_pairs(const std::vector<std::vector<std::string>> &pairs, std::uint64_t seed, std::size_t perturb_steps)
{
    Family family = Family::pairs_only(pairs);
    auto generators = k_generators(family);
    SubgroupRewriter rewriter = SubgroupRewriter(generators).perturbed(seed, perturb_steps);
    ChoiceTable table = solve(family, rewriter);
    return {std::move(family), std::move(rewriter), std::move(table)};
}

XWord random_k_product(std::span<const XWord> generators, Xorshift64Star &rng, std::size_t max_factors)
{
    std::vector<SignedLetter<TaggedLetter>> raw;
    if (generators.empty() || max_factors == 0)
        return XWord();
    std::size_t factors = 1 + rng.below(max_factors);
    for (std::size_t f = 0; f < factors; ++f) {
        const XWord &g = generators[rng.below(generators.size())];
        if (rng.next() & 1)
            raw.insert(raw.end(), g.begin(), g.end());
        else {
            XWord inv = inverse(g);
            raw.insert(raw.end(), inv.begin(), inv.end());
        }
    }
    return XWord(std::move(raw));
}

VerifyReport verify(const ChoiceTable &table, const Family &family, const VerifyOptions &options)
{
    VerifyReport report;

    for (std::uint32_t i = 0; i < family.size(); ++i) {
        BlockId y{i};
        const Block &block = family.block(y);
        auto it = table.choices.find(y);
        if (it == table.choices.end()) {
            if (options.require_total)
                report.fail("block " + block_name(block) + " has no choice");
            continue;
        }
        ++report.blocks_checked;
        if (! std::binary_search(block.begin(), block.end(), it->second))
            report.fail("block " + block_name(block) + ": chosen '" + it->second + "' is not a member");
    }
    for (const auto &[y, _] : table.choices)
        if (y.value >= family.size())
            report.fail("choice recorded for unknown block " + to_string(y));

    for (const auto &[y, trace] : table.traces) {
        if (y.value >= family.size()) {
            report.fail("trace recorded for unknown block " + to_string(y));
            continue;
        }
        const Block &block = family.block(y);
        auto it = table.choices.find(y);
        if (it == table.choices.end() || it->second != trace.chosen)
            report.fail("block " + block_name(block) + ": trace disagrees with table");
        for (const auto &[sub, value] : trace.consumed) {
            if (sub.value >= family.size()) {
                report.fail("block " + block_name(block) + ": trace reads unknown block");
                continue;
            }
            const Block &subset = family.block(sub);
            if (subset.size() >= block.size() || ! std::includes(block.begin(), block.end(), subset.begin(), subset.end()))
                report.fail("block " + block_name(block) + ": trace reads " + block_name(subset) +
                    ", which is not a proper subset");
            auto sit = table.choices.find(sub);
            if (sit == table.choices.end() || sit->second != value)
                report.fail("block " + block_name(block) + ": consumed c(" + block_name(subset) + ") = '" + value +
                    "' but the table records " + (sit == table.choices.end() ? "nothing" : "'" + sit->second + "'"));
        }
    }

    auto generators = k_generators(family);
    Xorshift64Star rng(options.seed == 0 ? 1 : options.seed);
    for (std::size_t s = 0; s < options.samples && ! generators.empty(); ++s) {
        XWord w = random_k_product(generators, rng, options.max_factors);
        ++report.products_checked;
        std::map<BlockId, int> counts;
        for (const auto &l : w)
            counts[l.letter.block] += to_int(l.sign);
        for (const auto &[y, count] : counts)
            if (count != 0) {
                report.fail("sigma_" + family.name(y) + " = " + std::to_string(count) + " on K-element " +
                    format_word(w, [&](const TaggedLetter &l) { return family.letter_name(l); }));
                break;
            }
    }
    return report;
}

} // namespace freechoice
