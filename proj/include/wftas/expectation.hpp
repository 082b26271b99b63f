#pragma once

#include <map>
#include <string>
#include <vector>

#include "wftas/core.hpp"
#include "wftas/exact_mdp.hpp"
#include "wftas/protocol.hpp"

namespace wftas {

// Scheduling decision per configuration for an adversary working against
// the tracked process.
struct AdversaryPolicy {
    Pid tracked = 0;
    std::map<SystemConfig, Pid> choice;

    Pid at(const SystemConfig& c) const;
};

// Worst-case expected number of accesses the tracked process still needs
// to finish its current operation (from an idle state: its next one).
struct ExpectationTable {
    Pid tracked = 0;
    std::map<SystemConfig, Rational> value;
    AdversaryPolicy policy;
    std::size_t iterations = 0;

    Rational max() const;
};

ExpectationTable solve(Pid tracked, Variant variant = Variant::Standard);

// Ties go to the non-tracked process whenever that choice still lets the
// tracked operation finish.
AdversaryPolicy optimal_adversary(const ExpectationTable& table);

// Checks 1 + E[v(after)] <= v(before) for every tracked access, with
// equality for the policy's choice when it schedules the tracked process.
// Returns human-readable descriptions of violations.
std::vector<std::string> decrement_violations(const ExpectationTable& table,
                                              Variant variant = Variant::Standard);

struct LoopReport {
    Pid tracked = 0;
    // Maximal probability, from configurations with the tracked process in
    // CHOOSE, of coming back to CHOOSE before the operation finishes.
    std::map<SystemConfig, Rational> return_probability;
    Rational max_return;
    // Maximal expected number of accesses out of CHOOSE until the operation
    // finishes, for every reachable configuration.
    std::map<SystemConfig, Rational> expected_choices;
    Rational max_choices;

    bool ok() const { return max_return <= Rational(1, 2) && max_choices <= Rational(2); }
};

LoopReport loop_probability_check(Pid tracked = 0, Variant variant = Variant::Standard);

// Return probability to CHOOSE when the adversary follows `policy` exactly.
std::map<SystemConfig, Rational> return_probability_under(const AdversaryPolicy& policy,
                                                          Variant variant = Variant::Standard);

}  // namespace wftas
