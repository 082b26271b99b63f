#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/rational.hpp>

#include "wftas/core.hpp"

namespace wftas {

using Rational = boost::rational<std::int64_t>;

// Maximizing MDP with nonnegative rewards. An outcome without `next` ends
// the process (absorbing, value 0 afterwards).
struct MdpOutcome {
    Rational prob;
    Rational reward;
    std::optional<std::size_t> next;
};

struct MdpAction {
    Pid pid = 0;
    std::vector<MdpOutcome> outcomes;
};

struct Mdp {
    std::vector<std::vector<MdpAction>> actions;  // per state, nonempty
};

struct MdpSolution {
    std::vector<Rational> value;
    std::vector<std::size_t> policy;  // chosen action index per state
    std::size_t iterations = 0;
};

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Rational q_value(const MdpAction& a, const std::vector<Rational>& v);

// Least fixed point of the Bellman operator. Floating value iteration runs
// to a tolerance, the result is rounded to small-denominator rationals and
// then certified exactly: it must be a fixed point, and a policy made of
// optimal actions must terminate from every state. The second condition
// makes the fixed point the least one. Among optimal actions the policy
// favours `preferred` whenever that still reaches termination.
MdpSolution solve_max(const Mdp& mdp, std::optional<Pid> preferred = std::nullopt,
                      std::size_t max_iterations = 100000);

Rational rationalize(double x, std::int64_t max_denominator);

double to_double(const Rational& r);

}  // namespace wftas
