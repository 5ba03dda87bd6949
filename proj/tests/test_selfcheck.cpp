#include "doctest.h"

#include "freechoice/adversarial.hpp"
#include "freechoice/selfcheck.hpp"

using namespace freechoice;

TEST_CASE("audit_trace rejects a doctored trace")
{
    auto s = solve({{"a", "b"}, {"c", "d", "e"}});
    BlockId pair = s.family.id_of(Block{"a", "b"});
    Trace trace = s.table.traces.at(pair);
    CHECK(audit_trace(s.family, s.rewriter, pair, trace) > 0);
    trace.chosen = "a";
    CHECK_THROWS_AS(audit_trace(s.family, s.rewriter, pair, trace), InternalProofViolation);

    BlockId triple = s.family.id_of(Block{"c", "d", "e"});
    Trace general = s.table.traces.at(triple);
    REQUIRE(general.tag == CaseTag::NotBijection);
    std::get<NotBijectionTrace>(general.data).image = Block{"c", "d", "e"};
    CHECK_THROWS_AS(audit_trace(s.family, s.rewriter, triple, general), InternalProofViolation);
}

TEST_CASE("audit_trace rejects a wrong alpha")
{
    auto family = Family::close_under_subsets({{"a", "b", "c"}, {"d", "e"}});
    SubgroupRewriter rw(k_generators(family));
    BlockId y = family.id_of(Block{"a", "b", "c"});
    auto forced = rw.with_basis(*adversarial::core_forcing_basis(family, rw, y));
    auto prev = adversarial::prev_with_successor(family, y, adversarial::cyclic_successor(family.block(y)));
    auto choice = choose_general(family, y, prev, forced);
    REQUIRE(choice.trace.tag == CaseTag::OddCore);
    CHECK(audit_trace(family, forced, y, choice.trace) > 0);
    auto &core = std::get<OddCoreTrace>(choice.trace.data).core;
    core.alpha = core.alpha * letter_word(TaggedLetter{"a", y});
    CHECK_THROWS_AS(audit_trace(family, forced, y, choice.trace), InternalProofViolation);
}

TEST_CASE("run_selfcheck examples")
{
    SUBCASE("default sizes exercise the core")
    {
        SelfCheckOptions o;
        o.max_block = 5;
        o.instances = 100;
        o.seed = 7;
        auto r = run_selfcheck(o);
        CHECK_MESSAGE(r.ok, r.failure);
        CHECK(r.instances_run == 100);
        CHECK(r.core_traces > 0);
        CHECK(r.identities_audited > 0);
    }
    SUBCASE("singletons only")
    {
        SelfCheckOptions o;
        o.max_block = 1;
        o.instances = 10;
        auto r = run_selfcheck(o);
        CHECK(r.ok);
        for (const auto &[tag, count] : r.solved_cases)
            CHECK((tag == CaseTag::Singleton || count == 0));
    }
    SUBCASE("vacuous")
    {
        SelfCheckOptions o;
        o.instances = 0;
        auto r = run_selfcheck(o);
        CHECK(r.ok);
        CHECK(r.instances_run == 0);
    }
}
