#include "freechoice/selfcheck.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "freechoice/adversarial.hpp"

namespace freechoice {

namespace {

    class Auditor {
    public:
        explicit Auditor(std::string where) : where_(std::move(where)) {}

        void operator()(bool condition, const std::string &identity)
        {
            ++count;
            if (! condition)
                throw InternalProofViolation(where_ + ": " + identity);
        }

        std::size_t count = 0;

    private:
        std::string where_;
    };

    XWord difference(const std::string &a, const std::string &b, BlockId y)
    {
        return XWord{pos(TaggedLetter{a, y}), neg(TaggedLetter{b, y})};
    }

    bool contains(const Block &block, const std::string &x) { return std::binary_search(block.begin(), block.end(), x); }

    void audit_mirror(Auditor &check, const PairWords &pair)
    {
        check(pair.words[0].size() == pair.length && pair.words[1].size() == pair.length, "pair B-words have length l");
        bool mirrored = true;
        for (std::size_t j = 0; j < pair.length; ++j)
            mirrored = mirrored && pair.words[1][j] == pair.words[0][pair.length - 1 - j].inverse();
        check(mirrored, "pair B-words are mirror inverses");
    }

    void audit_half_words(Auditor &check, const SubgroupRewriter &rewriter, BlockId y,
        const std::vector<std::string> &xs, const std::vector<BWord> &words, const HalfWordCore &core,
        const std::string &chosen)
    {
        const std::size_t n = xs.size();
        check(core.halves.size() == n, "one half-word per element");
        for (std::size_t i = 0; i < n; ++i)
            check(core.halves[i] == words[i].prefix(core.half), "f(x_i) is the first half of x_i x_{i+1}^-1");
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t next = (i + 1) % n;
            XWord lhs = rewriter.expand(core.halves[i]) * inverse(rewriter.expand(core.halves[next]));
            check(lhs == difference(xs[i], xs[next], y), "f(x_i) f(x_{i+1})^-1 = x_i x_{i+1}^-1");
        }
        for (std::size_t i = 0; i < n; ++i)
            check(inverse(rewriter.expand(core.halves[i])) * letter_word(TaggedLetter{xs[i], y}) == core.alpha,
                "g(x_i) = alpha");
        check(sigma(y, core.alpha) == 1, "sigma_y(alpha) = 1");
        std::size_t first = first_letter_in_block(y, core.alpha);
        check(first < core.alpha.size() && core.alpha[first].letter.element == chosen,
            "choice is the first y-letter of alpha");
    }

    void audit_cycle(Auditor &check, const SubgroupRewriter &rewriter, BlockId y, const Block &block,
        const CycleWords &cycle)
    {
        const std::size_t n = block.size();
        check(cycle.cycle.size() == n && make_block(cycle.cycle) == block, "cycle enumerates y");
        for (std::size_t i = 0; i < n; ++i)
            check(cycle.successor.at(cycle.cycle[i]) == cycle.cycle[(i + 1) % n], "cycle follows s_y");
        for (std::size_t i = 0; i < n; ++i) {
            auto r = rewriter.rewrite(difference(cycle.cycle[i], cycle.cycle[(i + 1) % n], y));
            check(r && *r == cycle.words[i] && cycle.lengths[i] == r->size(), "B-word of x_i x_{i+1}^-1");
        }
        std::vector<SignedLetter<BasisLetter>> all;
        for (const BWord &w : cycle.words)
            all.insert(all.end(), w.begin(), w.end());
        check(BWord(std::move(all)).is_identity(), "cyclic product of B-words is the identity");
    }

    template <typename T>
    void audit_minimum(Auditor &check, const std::vector<std::string> &xs, const std::vector<T> &values,
        const Block &subset, T least)
    {
        check(least == *std::min_element(values.begin(), values.end()), "recorded minimum");
        std::vector<std::string> at_min;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (values[i] == least)
                at_min.push_back(xs[i]);
        check(make_block(at_min) == subset, "recursed subset is the arg-min set");
        check(! subset.empty() && subset.size() < xs.size(), "recursed subset is proper and non-empty");
    }

    std::vector<std::size_t> neighbour_cancellations(const std::vector<BWord> &words)
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < words.size(); ++i)
            out.push_back(cancellation_count(words[i], words[(i + 1) % words.size()]));
        return out;
    }

} // namespace

std::size_t audit_trace(const Family &family, const SubgroupRewriter &rewriter, BlockId y, const Trace &trace)
{
    const Block &block = family.block(y);
    Auditor check("audit of " + block_name(block) + " (" + std::string(to_string(trace.tag)) + ")");
    check(contains(block, trace.chosen), "choice is a member of y");

    std::visit(
        [&](const auto &data) {
            using T = std::decay_t<decltype(data)>;
            if constexpr (std::is_same_v<T, SingletonTrace>) {
                check(block.size() == 1 && trace.chosen == block[0], "singleton choice");
            }
            else if constexpr (std::is_same_v<T, PairOddTrace>) {
                audit_mirror(check, data.pair);
                check(data.pair.length % 2 == 1, "l is odd");
                std::size_t mid = (data.pair.length - 1) / 2;
                check(data.middles[0] == data.pair.words[0][mid] && data.middles[1] == data.pair.words[1][mid],
                    "middle letters");
                check(data.middles[0] == data.middles[1].inverse(), "middle letters are inverse");
                std::size_t positive = data.middles[0].sign == Sign::Positive ? 0 : 1;
                check(trace.chosen == data.pair.elements[positive], "choice has the positive middle letter");
            }
            else if constexpr (std::is_same_v<T, PairEvenTrace>) {
                audit_mirror(check, data.pair);
                check(data.pair.length % 2 == 0 && data.core.half * 2 == data.pair.length, "l is even, m = l/2");
                std::vector<std::string> xs(data.pair.elements.begin(), data.pair.elements.end());
                std::vector<BWord> words(data.pair.words.begin(), data.pair.words.end());
                audit_half_words(check, rewriter, y, xs, words, data.core, trace.chosen);
            }
            else if constexpr (std::is_same_v<T, NotBijectionTrace>) {
                check(data.image.size() < block.size(), "image is a proper subset");
                check(contains(data.image, trace.chosen), "choice lies in the image");
            }
            else if constexpr (std::is_same_v<T, OrbitTrace>) {
                std::vector<std::string> all;
                for (const Block &orbit : data.orbits)
                    all.insert(all.end(), orbit.begin(), orbit.end());
                check(all.size() == block.size() && make_block(all) == block, "orbits partition y");
                check(data.orbits.size() >= 2 && data.orbits.size() < block.size(), "between 2 and n-1 orbits");
                if (data.squared)
                    check(data.orbits.size() == 2, "s^2 has two orbits");
                check(contains(data.representatives, trace.chosen), "choice is an orbit representative");
            }
            else if constexpr (std::is_same_v<T, OddMinLenTrace>) {
                audit_cycle(check, rewriter, y, block, data.cycle);
                check(std::adjacent_find(data.cycle.lengths.begin(), data.cycle.lengths.end(), std::not_equal_to<>()) !=
                        data.cycle.lengths.end(),
                    "lengths differ");
                audit_minimum(check, data.cycle.cycle, data.cycle.lengths, data.subset, data.min_length);
                check(contains(data.subset, trace.chosen), "choice lies in the recursed subset");
            }
            else if constexpr (std::is_same_v<T, OddMinCancelTrace>) {
                audit_cycle(check, rewriter, y, block, data.cycle);
                check(std::adjacent_find(data.cycle.lengths.begin(), data.cycle.lengths.end(), std::not_equal_to<>()) ==
                        data.cycle.lengths.end(),
                    "lengths are equal");
                check(data.cancellations == neighbour_cancellations(data.cycle.words), "cancellation counts");
                audit_minimum(check, data.cycle.cycle, data.cancellations, data.subset, data.min_cancellation);
                check(contains(data.subset, trace.chosen), "choice lies in the recursed subset");
            }
            else if constexpr (std::is_same_v<T, OddCoreTrace>) {
                const std::size_t n = block.size();
                const std::size_t l = data.length, k = data.cancellation, m = data.core.half;
                audit_cycle(check, rewriter, y, block, data.cycle);
                check(std::all_of(data.cycle.lengths.begin(), data.cycle.lengths.end(), [&](auto v) { return v == l; }),
                    "all l_i = l");
                check(data.cancellations == neighbour_cancellations(data.cycle.words), "cancellation counts");
                check(std::all_of(data.cancellations.begin(), data.cancellations.end(), [&](auto v) { return v == k; }),
                    "all k_i = k");
                check((n * l) % 2 == 0, "n*l is even");
                check(n % 2 == 1 && l % 2 == 0, "l is even");
                check(2 * m == l, "m = l/2");
                check(k >= m, "k >= m");
                for (std::size_t i = 0; i < n; ++i) {
                    const BWord &w = data.cycle.words[i], &next = data.cycle.words[(i + 1) % n];
                    bool mirrored = true;
                    for (std::size_t j = 0; j < m; ++j)
                        mirrored = mirrored && next[j] == w[l - 1 - j].inverse();
                    check(mirrored, "b_{i+1,j} = b_{i,l-j+1}^-1 for j <= m");
                }
                audit_half_words(check, rewriter, y, data.cycle.cycle, data.cycle.words, data.core, trace.chosen);
            }
        },
        trace.data);
    return check.count;
}

namespace {

    struct Failure {
        std::string message;
    };

    void require(bool condition, const std::string &property, const std::string &detail = "")
    {
        if (! condition)
            throw Failure{property + (detail.empty() ? "" : ": " + detail)};
    }

    std::string describe(const adversarial::RawFamily &z)
    {
        std::string out;
        for (const auto &b : z)
            out += block_name(make_block(b));
        return out;
    }

    void check_table(const Family &family, const SubgroupRewriter &rewriter, const ChoiceTable &table,
        SelfCheckReport &report, const std::string &label)
    {
        VerifyOptions opts;
        opts.samples = 200;
        auto verdict = verify(table, family, opts);
        require(verdict.ok, label + " verify", verdict.failures.empty() ? "" : verdict.failures.front());
        for (const auto &[y, trace] : table.traces) {
            report.identities_audited += audit_trace(family, rewriter, y, trace);
            ++report.solved_cases[trace.tag];
            if (trace.tag == CaseTag::OddCore)
                ++report.core_traces;
        }
    }

    void check_rewriter(const Family &family, const SubgroupRewriter &rewriter, Xorshift64Star &rng,
        const std::string &label)
    {
        auto generators = k_generators(family);
        const auto &graph = rewriter.graph();
        require(graph.is_folded() && graph.is_connected(), label + " graph folded and connected");
        require(rewriter.rank() == graph.edge_count() + 1 - graph.vertex_count(), label + " rank = E - V + 1");
        for (const auto &g : generators) {
            auto r = rewriter.rewrite(g);
            require(r && rewriter.expand(*r) == g, label + " generator round trip", format_word(g));
        }
        for (int s = 0; s < 50; ++s) {
            XWord w = random_k_product(generators, rng, 20);
            auto r = rewriter.rewrite(w);
            require(r && rewriter.expand(*r) == w, label + " K-product round trip", format_word(w));
            // Appending a single letter changes some sigma, so the result is outside K.
            if (! family.letters().empty()) {
                const auto letters = family.letters();
                XWord outside = w * letter_word(letters[rng.below(letters.size())]);
                require(! rewriter.contains(outside), label + " non-member rejected", format_word(outside));
            }
        }
        for (std::uint32_t i = 0; i < rewriter.rank(); ++i)
            require(rewriter.rewrite(rewriter.basis().elements[i]) == BWord{pos(BasisLetter{i})},
                label + " basis element rewrites to its letter");
    }

    void check_words(Xorshift64Star &rng, const Family &family)
    {
        auto generators = k_generators(family);
        if (generators.empty())
            return;
        for (int s = 0; s < 10; ++s) {
            XWord u = random_k_product(generators, rng, 5), v = random_k_product(generators, rng, 5),
                  w = random_k_product(generators, rng, 5);
            require((u * v) * w == u * (v * w), "word associativity");
            require((u * inverse(u)).is_identity(), "word inverse");
            require(cancellation_count(u, v) * 2 + (u * v).size() == u.size() + v.size(), "cancellation count");
        }
    }

    void run_adversarial(const Family &family, const SubgroupRewriter &rewriter, SelfCheckReport &report)
    {
        for (std::uint32_t i = 0; i < family.size(); ++i) {
            BlockId y{i};
            const Block &block = family.block(y);
            if (block.size() < 2)
                continue;
            auto forcing = adversarial::core_forcing_basis(family, rewriter, y);
            std::vector<SubgroupRewriter> rewriters{rewriter};
            if (forcing)
                rewriters.push_back(rewriter.with_basis(*forcing));
            if (block.size() == 5)
                if (auto uneven = adversarial::uneven_cancellation_basis(family, rewriter, y))
                    rewriters.push_back(rewriter.with_basis(*uneven));

            if (block.size() == 2) {
                for (const auto &rw : rewriters) {
                    auto choice = choose_pair(family, y, rw);
                    report.identities_audited += audit_trace(family, rw, y, choice.trace);
                    ++report.adversarial_cases[choice.trace.tag];
                }
                continue;
            }

            std::vector<SuccessorMap> successors{
                adversarial::cyclic_successor(block), adversarial::collapsing_successor(block)};
            if (block.size() >= 4)
                successors.push_back(adversarial::paired_successor(block));
            for (const auto &successor : successors) {
                auto prev = adversarial::prev_with_successor(family, y, successor);
                for (const auto &rw : rewriters) {
                    auto choice = choose_general(family, y, prev, rw);
                    report.identities_audited += audit_trace(family, rw, y, choice.trace);
                    ++report.adversarial_cases[choice.trace.tag];
                    if (choice.trace.tag == CaseTag::OddCore) {
                        ++report.core_traces;
                        const auto &core = std::get<OddCoreTrace>(choice.trace.data).core;
                        for (std::size_t start = 1; start < block.size(); ++start) {
                            auto again = choose_general(family, y, prev, rw, start);
                            require(again.element == choice.element &&
                                    std::get<OddCoreTrace>(again.trace.data).core.alpha == core.alpha,
                                "basepoint invariance", block_name(block));
                        }
                    }
                }
            }
        }
    }

} // namespace

SelfCheckReport run_selfcheck(const SelfCheckOptions &options)
{
    SelfCheckReport report;
    Xorshift64Star rng(mix_seed(options.seed));
    const std::size_t max_size = std::max<std::size_t>(1, options.max_block);

    for (std::size_t instance = 0; instance < options.instances; ++instance) {
        auto z = adversarial::random_family(rng, 1, 3, 1, max_size);
        std::string label = "instance " + std::to_string(instance) + " " + describe(z);
        try {
            SolveOptions canonical;
            canonical.max_block = max_size;
            Solution solution = solve(z, canonical);
            check_words(rng, solution.family);
            check_rewriter(solution.family, solution.rewriter, rng, label + " canonical");
            check_table(solution.family, solution.rewriter, solution.table, report, label + " canonical");

            Solution repeat = solve(z, canonical);
            require(repeat.table == solution.table, label + " determinism");
            SolveOptions threaded = canonical;
            threaded.jobs = 3;
            require(solve(z, threaded).table == solution.table, label + " jobs=3 matches jobs=1");

            SolveOptions perturbed = canonical;
            perturbed.seed = 1 + rng.below(1u << 30);
            perturbed.perturb_steps = 1 + rng.below(20);
            Solution moved = solve(z, perturbed);
            check_rewriter(moved.family, moved.rewriter, rng, label + " perturbed");
            check_table(moved.family, moved.rewriter, moved.table, report, label + " perturbed");
            require(build_subgroup_graph(moved.rewriter.basis().elements).canonical_form() ==
                    solution.rewriter.graph().canonical_form(),
                label + " perturbed basis generates K");

            run_adversarial(solution.family, solution.rewriter, report);
        }
        catch (const Failure &f) {
            report.ok = false;
            report.failure = f.message;
            return report;
        }
        catch (const std::exception &e) {
            report.ok = false;
            report.failure = label + ": " + e.what();
            return report;
        }
        ++report.instances_run;
    }
    return report;
}

std::string format_report(const SelfCheckReport &report)
{
    std::ostringstream out;
    out << "instances: " << report.instances_run << "\n";
    out << "identities audited: " << report.identities_audited << "\n";
    out << "odd-core traces: " << report.core_traces << "\n";
    out << "case                solved  adversarial\n";
    for (CaseTag tag : all_case_tags) {
        auto count = [&](const std::map<CaseTag, std::size_t> &m) {
            auto it = m.find(tag);
            return it == m.end() ? std::size_t{0} : it->second;
        };
        std::string name(to_string(tag));
        name.resize(20, ' ');
        out << name << count(report.solved_cases) << "  " << count(report.adversarial_cases) << "\n";
    }
    out << (report.ok ? "selfcheck: ok" : "selfcheck: FAILED: " + report.failure) << "\n";
    return out.str();
}

} // namespace freechoice
