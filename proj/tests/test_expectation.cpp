#include <doctest.h>

#include <cmath>

#include "wftas/exact_mdp.hpp"
#include "wftas/expectation.hpp"
#include "wftas/golden.hpp"
#include "wftas/model_checker.hpp"

using namespace wftas;
using S = ProcState;

namespace {

struct Move {
    double prob;
    SystemConfig to;
    bool finishes;  // finishes the operation of the mover
};

// Successors of scheduling p at c, from the chart functions alone.
std::vector<Move> moves(const SystemConfig& c, Pid p) {
    const S s = c.s[p];
    std::vector<std::pair<double, S>> next;
    if (enabled_access(s).action == Action::Write) {
        next.push_back({1.0, step(s, std::nullopt, std::nullopt)});
    } else {
        const RegValue v = group(c.s[1 - p]);
        if (needs_coin(s, v))
            next = {{0.5, step(s, v, true)}, {0.5, step(s, v, false)}};
        else
            next.push_back({1.0, step(s, v, std::nullopt)});
    }
    std::vector<Move> out;
    for (auto [prob, n] : next) {
        SystemConfig d = c;
        d.s[p] = n;
        out.push_back({prob, d, finishes_op(classify(s, n))});
    }
    return out;
}

// Plain floating value iteration: the adversary maximizes the tracked
// process's remaining accesses; the tracked operation ending stops counting.
std::map<SystemConfig, double> reference_values(Pid tracked) {
    const auto reach = reachable_configs();
    std::map<SystemConfig, double> v;
    for (const auto& c : reach) v[c] = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        double delta = 0;
        for (const auto& c : reach) {
            double best = 0;
            for (Pid p : {0u, 1u}) {
                double q = 0;
                for (const Move& m : moves(c, p)) {
                    const bool stop = p == tracked && m.finishes;
                    q += m.prob * ((p == tracked ? 1.0 : 0.0) + (stop ? 0.0 : v[m.to]));
                }
                best = std::max(best, q);
            }
            delta = std::max(delta, std::abs(best - v[c]));
            v[c] = best;
        }
        if (delta < 1e-12) break;
    }
    return v;
}

}  // namespace

TEST_CASE("values reproduce the table exactly") {
    const ExpectationTable t = solve(0);
    const GoldenTable golden = parse_golden_table(embedded_golden_table());
    CHECK(t.value.size() == 98);
    for (S a : kAllStates)
        for (S b : kAllStates) {
            const SystemConfig c{{a, b}};
            const auto& cell = golden.at(c);
            CAPTURE(to_string(c));
            REQUIRE(t.value.count(c) == (cell ? 1 : 0));
            if (cell) CHECK(t.value.at(c) == Rational(cell->value));
        }
    CHECK(t.max() == Rational(11));
    for (S b : kAllStates)
        if (t.value.count({{S::Tst0, b}})) CHECK(t.value.at({{S::Tst0, b}}) == Rational(1));
    CHECK(t.value.at({{S::Rst, S::Rst}}) == Rational(10));
    CHECK(t.value.at({{S::Tst1, S::Rst}}) == Rational(11));
    CHECK(t.value.at({{S::He, S::Tst1}}) == Rational(5));
    CHECK(t.value.at({{S::Choose, S::Rst}}) == Rational(3));
    CHECK(t.value.at({{S::Choose, S::Choose}}) == Rational(7));
}

TEST_CASE("values agree with a floating value iteration") {
    const auto ref = reference_values(0);
    const ExpectationTable t = solve(0);
    for (const auto& [c, v] : t.value) {
        CAPTURE(to_string(c));
        CHECK(to_double(v) == doctest::Approx(ref.at(c)).epsilon(1e-9));
    }
}

TEST_CASE("tracked process 1 is the mirror image") {
    const ExpectationTable a = solve(0);
    const ExpectationTable b = solve(1);
    for (const auto& [c, v] : a.value) CHECK(b.value.at({{c.s[1], c.s[0]}}) == v);
}

TEST_CASE("optimal adversary") {
    const ExpectationTable t = solve(0);
    const AdversaryPolicy pol = optimal_adversary(t);
    // Scheduling P1 drives toward (tst1,rst), worth 11, instead of letting
    // P0 finish in one access.
    CHECK(pol.at({{S::Tst1, S::Me}}) == 1);
    CHECK(decrement_violations(t).empty());

    // Following the policy attains the value at every configuration.
    for (const auto& [c, v] : t.value) {
        const Pid p = pol.at(c);
        Rational q = 0;
        for (const Move& m : moves(c, p)) {
            const bool stop = p == 0 && m.finishes;
            const Rational prob = m.prob == 1.0 ? Rational(1) : Rational(1, 2);
            q += prob * (Rational(p == 0 ? 1 : 0) + (stop ? Rational(0) : t.value.at(m.to)));
        }
        CAPTURE(to_string(c));
        CHECK(q == v);
    }
}

TEST_CASE("loops through choose") {
    const LoopReport r = loop_probability_check(0);
    CHECK(r.ok());
    CHECK(r.max_return == Rational(1, 2));
    CHECK(r.return_probability.at({{S::Choose, S::Choose}}) == Rational(1, 2));
    CHECK(r.return_probability.at({{S::Choose, S::Rst}}) == Rational(0));
    CHECK(r.max_choices <= Rational(2));
    for (const auto& [c, p] : r.return_probability) CHECK(c.s[0] == S::Choose);

    const auto under = return_probability_under(optimal_adversary(solve(0)));
    for (const auto& [c, p] : r.return_probability) CHECK(under.at(c) <= p);
}

TEST_CASE("mutant is not wait-free") {
    CHECK_THROWS_AS(solve(0, Variant::ChooseRstToMe), NonConvergence);
}

TEST_CASE("exact mdp solver") {
    // Two states: state 0 can stop (reward 1) or go to state 1 (reward 2);
    // state 1 returns to 0 with probability 1/3 (reward 1) or stops.
    Mdp m;
    m.actions.resize(2);
    m.actions[0].push_back({0, {{Rational(1), Rational(1), std::nullopt}}});
    m.actions[0].push_back({1, {{Rational(1), Rational(2), 1}}});
    m.actions[1].push_back({0, {{Rational(1, 3), Rational(1), 0}, {Rational(2, 3), Rational(0), std::nullopt}}});
    const MdpSolution s = solve_max(m);
    // v0 = 2 + v1, v1 = (1 + v0)/3  =>  v0 = 7/2, v1 = 3/2
    CHECK(s.value[0] == Rational(7, 2));
    CHECK(s.value[1] == Rational(3, 2));
    CHECK(s.policy[0] == 1);
    CHECK(rationalize(0.3333333333333333, 100) == Rational(1, 3));

    Mdp loop;
    loop.actions.resize(1);
    loop.actions[0].push_back({0, {{Rational(1), Rational(1), 0}}});
    CHECK_THROWS_AS(solve_max(loop, std::nullopt, 1000), NonConvergence);
}
