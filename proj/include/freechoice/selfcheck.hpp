#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "freechoice/choice.hpp"

namespace freechoice {

/// Re-derives, from the data recorded in a trace, every identity the
/// construction relies on for that case (mirror-inverse B-words, half-word
/// identity, constancy of g, sigma(alpha) = 1, parity of n*l and l, k >= m,
/// minimality of the recursed subset). Throws InternalProofViolation naming
/// the first identity that fails; returns how many identities were checked.
std::size_t audit_trace(const Family &family, const SubgroupRewriter &rewriter, BlockId y, const Trace &trace);

struct SelfCheckOptions {
    std::size_t max_block = 5;
    std::size_t instances = 100;
    std::uint64_t seed = 1;
};

struct SelfCheckReport {
    bool ok = true;
    std::string failure;
    std::size_t instances_run = 0;
    std::size_t identities_audited = 0;
    std::size_t core_traces = 0;
    std::map<CaseTag, std::size_t> solved_cases;
    std::map<CaseTag, std::size_t> adversarial_cases;
};

/// Random families with blocks of size <= max_block, each put through the
/// word, subgroup-graph and choice invariants under the canonical basis, a
/// perturbed basis and adversarial lower-level tables.
SelfCheckReport run_selfcheck(const SelfCheckOptions &options);

std::string format_report(const SelfCheckReport &report);

} // namespace freechoice
