#include "wftas/expectation.hpp"

#include <functional>

#include "wftas/model_checker.hpp"

namespace wftas {

namespace {

struct Outcome {
    Rational reward;
    bool absorb;
};

using Scoring = std::function<Outcome(const Transition&)>;

struct Model {
    std::vector<SystemConfig> configs;
    std::map<SystemConfig, std::size_t> index;
    Mdp mdp;
};

Model build(Pid tracked, Variant variant, const Scoring& score) {
    Model m;
    for (const SystemConfig& c : reachable_configs(variant)) {
        m.index[c] = m.configs.size();
        m.configs.push_back(c);
    }
    for (const SystemConfig& c : m.configs) {
        std::vector<MdpAction> actions;
        for (Pid p : {0u, 1u}) {
            MdpAction a;
            a.pid = p;
            for (const Transition& t : transitions_from(c, p, variant)) {
                Outcome o = p == tracked ? score(t) : Outcome{0, false};
                a.outcomes.push_back({t.halved() ? Rational(1, 2) : Rational(1), o.reward,
                                      o.absorb ? std::nullopt : std::optional(m.index.at(t.to))});
            }
            actions.push_back(std::move(a));
        }
        m.mdp.actions.push_back(std::move(actions));
    }
    return m;
}

Outcome access_cost(const Transition& t) { return {1, finishes_op(t.events)}; }

Outcome choose_return(const Transition& t) {
    const bool enters = t.pre != ProcState::Choose && t.post == ProcState::Choose;
    return {enters ? 1 : 0, enters || finishes_op(t.events)};
}

Outcome choice_count(const Transition& t) {
    return {t.pre == ProcState::Choose ? 1 : 0, finishes_op(t.events)};
}

std::map<SystemConfig, Rational> values_of(const Model& m, const MdpSolution& s) {
    std::map<SystemConfig, Rational> out;
    for (std::size_t i = 0; i < m.configs.size(); ++i) out[m.configs[i]] = s.value[i];
    return out;
}

}  // namespace

Pid AdversaryPolicy::at(const SystemConfig& c) const {
    auto it = choice.find(c);
    return it == choice.end() ? tracked : it->second;
}

Rational ExpectationTable::max() const {
    Rational best = 0;
    for (const auto& [_, v] : value) best = std::max(best, v);
    return best;
}

ExpectationTable solve(Pid tracked, Variant variant) {
    Model m = build(tracked, variant, access_cost);
    MdpSolution s = solve_max(m.mdp, 1 - tracked);
    ExpectationTable t;
    t.tracked = tracked;
    t.iterations = s.iterations;
    t.value = values_of(m, s);
    t.policy.tracked = tracked;
    for (std::size_t i = 0; i < m.configs.size(); ++i)
        t.policy.choice[m.configs[i]] = m.mdp.actions[i][s.policy[i]].pid;
    return t;
}

AdversaryPolicy optimal_adversary(const ExpectationTable& table) { return table.policy; }

std::vector<std::string> decrement_violations(const ExpectationTable& table, Variant variant) {
    std::vector<std::string> out;
    for (const auto& [c, before] : table.value) {
        Rational expected = 0;
        for (const Transition& t : transitions_from(c, table.tracked, variant)) {
            Rational after = finishes_op(t.events) ? Rational(0) : table.value.at(t.to);
            expected += (t.halved() ? Rational(1, 2) : Rational(1)) * (1 + after);
        }
        if (expected > before)
            out.push_back(to_string(c) + ": one tracked access raises the expectation");
        if (table.policy.at(c) == table.tracked && expected != before)
            out.push_back(to_string(c) + ": policy schedules a suboptimal tracked access");
    }
    return out;
}

LoopReport loop_probability_check(Pid tracked, Variant variant) {
    LoopReport r;
    r.tracked = tracked;
    Model ret = build(tracked, variant, choose_return);
    for (const auto& [c, v] : values_of(ret, solve_max(ret.mdp, 1 - tracked))) {
        if (c.s[tracked] != ProcState::Choose) continue;
        r.return_probability[c] = v;
        r.max_return = std::max(r.max_return, v);
    }
    Model cnt = build(tracked, variant, choice_count);
    r.expected_choices = values_of(cnt, solve_max(cnt.mdp, 1 - tracked));
    for (const auto& [_, v] : r.expected_choices) r.max_choices = std::max(r.max_choices, v);
    return r;
}

std::map<SystemConfig, Rational> return_probability_under(const AdversaryPolicy& policy,
                                                          Variant variant) {
    Model m = build(policy.tracked, variant, choose_return);
    for (std::size_t i = 0; i < m.configs.size(); ++i) {
        const Pid p = policy.at(m.configs[i]);
        auto& acts = m.mdp.actions[i];
        std::erase_if(acts, [p](const MdpAction& a) { return a.pid != p; });
    }
    return values_of(m, solve_max(m.mdp));
}

}  // namespace wftas
