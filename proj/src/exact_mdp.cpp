#include "wftas/exact_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wftas {

Rational q_value(const MdpAction& a, const std::vector<Rational>& v) {
    Rational q = 0;
    for (const MdpOutcome& o : a.outcomes) q += o.prob * (o.reward + (o.next ? v[*o.next] : Rational(0)));
    return q;
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Rational rationalize(double x, std::int64_t max_denominator) {
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(r);
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_denominator) break;
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        const double frac = r - a;
        if (frac < 1e-12) break;
        r = 1.0 / frac;
    }
    return Rational(h1, k1);
}

MdpSolution solve_max(const Mdp& mdp, std::optional<Pid> preferred, std::size_t max_iterations) {
    const std::size_t n = mdp.actions.size();
    MdpSolution sol;

    std::vector<double> v(n, 0.0), next(n, 0.0);
    bool converged = false;
    for (std::size_t it = 0; it < max_iterations && !converged; ++it) {
        double delta = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double best = 0.0;
            for (const MdpAction& a : mdp.actions[s]) {
                double q = 0.0;
                for (const MdpOutcome& o : a.outcomes)
                    q += to_double(o.prob) * (to_double(o.reward) + (o.next ? v[*o.next] : 0.0));
                best = std::max(best, q);
            }
            next[s] = best;
            delta = std::max(delta, std::abs(best - v[s]));
        }
        v.swap(next);
        sol.iterations = it + 1;
        converged = delta < 1e-13;
    }
    if (!converged)
        throw NonConvergence("value iteration did not settle within " +
                             std::to_string(max_iterations) + " sweeps");

    sol.value.resize(n);
    for (std::size_t s = 0; s < n; ++s) sol.value[s] = rationalize(v[s], 1 << 16);

    std::vector<std::vector<std::size_t>> optimal(n);
    for (std::size_t s = 0; s < n; ++s) {
        Rational best = 0;
        for (const MdpAction& a : mdp.actions[s]) best = std::max(best, q_value(a, sol.value));
        if (best != sol.value[s])
            throw NonConvergence("state " + std::to_string(s) + ": rounded value is not a fixed point");
        for (std::size_t i = 0; i < mdp.actions[s].size(); ++i)
            if (q_value(mdp.actions[s][i], sol.value) == best) optimal[s].push_back(i);
    }

    // Backward layering from termination: a state joins once one of its
    // optimal actions has an outcome that terminates or enters the set.
    sol.policy.assign(n, 0);
    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    while (remaining > 0) {
        std::vector<std::pair<std::size_t, std::size_t>> layer;
        for (std::size_t s = 0; s < n; ++s) {
            if (done[s]) continue;
            std::optional<std::size_t> pick;
            for (std::size_t i : optimal[s]) {
                const MdpAction& a = mdp.actions[s][i];
                const bool exits = std::any_of(a.outcomes.begin(), a.outcomes.end(), [&](const MdpOutcome& o) {
                    return !o.next || done[*o.next];
                });
                if (!exits) continue;
                if (!pick || (preferred && a.pid == *preferred &&
                              mdp.actions[s][*pick].pid != *preferred))
                    pick = i;
            }
            if (pick) layer.emplace_back(s, *pick);
        }
        if (layer.empty())
            throw NonConvergence("no terminating policy attains the computed values");
        for (auto [s, i] : layer) {
            sol.policy[s] = i;
            done[s] = true;
            --remaining;
        }
    }
    return sol;
}

}  // namespace wftas
