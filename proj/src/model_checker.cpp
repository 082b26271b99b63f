#include "wftas/model_checker.hpp"

#include <deque>
#include <tuple>

namespace wftas {

namespace {

constexpr SystemConfig kInitial{};

StateSet post_events(StateSet s, const std::vector<EventKind>& events, Pid pid) {
    const Fa3& fa = fa3();
    if (events.empty()) return fa.closure(s);
    for (EventKind e : events) s = fa.post(s, SpecEvent{e, pid});
    return s;
}

// Language inclusion of accepted continuations, cached per variant.
class Coverage {
public:
    explicit Coverage(Variant v) : variant_(v) {}

    // True when every protocol continuation from c accepted from x is also
    // accepted from y.
    bool covered(const SystemConfig& c, std::size_t x, std::size_t y) {
        auto key = std::make_tuple(c, x, y);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        bool result = explore(c, x, y);
        cache_.emplace(key, result);
        return result;
    }

private:
    bool explore(const SystemConfig& c, std::size_t x, std::size_t y) {
        const Fa3& fa = fa3();
        using Node = std::tuple<SystemConfig, StateSet, StateSet>;
        Node start{c, fa.closure(singleton(x)), fa.closure(singleton(y))};
        std::set<Node> seen{start};
        std::deque<Node> queue{start};
        while (!queue.empty()) {
            auto [cc, xs, ys] = queue.front();
            queue.pop_front();
            for (const Transition& t : transitions_for(cc)) {
                StateSet x2 = post_events(xs, t.events, t.pid);
                if (x2 == 0) continue;
                StateSet y2 = post_events(ys, t.events, t.pid);
                if (y2 == 0) return false;
                Node n{t.to, x2, y2};
                if (seen.insert(n).second) queue.push_back(n);
            }
        }
        return true;
    }

    const std::vector<Transition>& transitions_for(const SystemConfig& c) {
        auto it = edges_.find(c);
        if (it == edges_.end()) it = edges_.emplace(c, transitions_from(c, variant_)).first;
        return it->second;
    }

    Variant variant_;
    std::map<std::tuple<SystemConfig, std::size_t, std::size_t>, bool> cache_;
    std::map<SystemConfig, std::vector<Transition>> edges_;
};

StateSet reduce_with(Coverage& cov, const SystemConfig& c, StateSet set) {
    const Fa3& fa = fa3();
    StateSet keep = 0;
    for (std::size_t x = 0; x < fa.size(); ++x) {
        if (!contains(set, x)) continue;
        const StateSet x_desc = fa.closure(singleton(x));
        bool drop = false;
        for (std::size_t y = 0; y < fa.size() && !drop; ++y) {
            if (y == x || !contains(set, y)) continue;
            if (contains(fa.closure(singleton(y)), x)) continue;  // y is an epsilon ancestor of x
            if (!cov.covered(c, x, y)) continue;
            drop = !cov.covered(c, y, x) || contains(x_desc, y);
        }
        if (!drop) keep |= singleton(x);
    }
    return keep;
}

std::map<SystemConfig, std::set<StateSet>> reduced_all(Variant variant) {
    Coverage cov(variant);
    std::map<SystemConfig, std::set<StateSet>> out;
    for (const auto& [c, sets] : forward_sets(variant))
        for (StateSet s : sets) out[c].insert(reduce_with(cov, c, s));
    return out;
}

std::string describe(const SystemConfig& c, const std::set<StateSet>& sets) {
    const Fa3& fa = fa3();
    std::string msg = to_string(c) + ":";
    for (StateSet s : sets) {
        msg += " {";
        bool first = true;
        for (std::size_t i = 0; i < fa.size(); ++i)
            if (contains(s, i)) {
                msg += (first ? "" : " ") + to_string(fa.state(i));
                first = false;
            }
        msg += "}";
    }
    return msg;
}

}  // namespace

std::vector<Transition> transitions_from(const SystemConfig& c, Pid pid, Variant variant) {
    std::vector<Transition> out;
    const ProcState s = c.s[pid];
    const EnabledAccess acc = enabled_access(s);
    auto emit = [&](std::optional<RegValue> observed, std::optional<bool> coin) {
        Transition t;
        t.from = c;
        t.pid = pid;
        t.pre = s;
        t.post = step(s, observed, coin, variant);
        t.observed = observed;
        t.coin = coin;
        t.events = classify(s, t.post);
        t.to = c;
        t.to.s[pid] = t.post;
        out.push_back(std::move(t));
    };
    if (acc.action == Action::Write) {
        emit(std::nullopt, std::nullopt);
    } else {
        const RegValue seen = group(c.s[1 - pid]);
        if (needs_coin(s, seen)) {
            emit(seen, true);
            emit(seen, false);
        } else {
            emit(seen, std::nullopt);
        }
    }
    return out;
}

std::vector<Transition> transitions_from(const SystemConfig& c, Variant variant) {
    auto out = transitions_from(c, 0, variant);
    auto more = transitions_from(c, 1, variant);
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

std::set<SystemConfig> reachable_configs(Variant variant) {
    std::set<SystemConfig> seen{kInitial};
    std::deque<SystemConfig> queue{kInitial};
    while (!queue.empty()) {
        SystemConfig c = queue.front();
        queue.pop_front();
        for (const Transition& t : transitions_from(c, variant))
            if (seen.insert(t.to).second) queue.push_back(t.to);
    }
    return seen;
}

std::map<SystemConfig, std::set<StateSet>> forward_sets(Variant variant) {
    const Fa3& fa = fa3();
    using Node = std::pair<SystemConfig, StateSet>;
    Node start{kInitial, fa.initial_set()};
    std::set<Node> seen{start};
    std::deque<Node> queue{start};
    while (!queue.empty()) {
        auto [c, s] = queue.front();
        queue.pop_front();
        for (const Transition& t : transitions_from(c, variant)) {
            Node n{t.to, fa.canonical(post_events(s, t.events, t.pid))};
            if (seen.insert(n).second) queue.push_back(n);
        }
    }
    std::map<SystemConfig, std::set<StateSet>> out;
    for (const auto& [c, s] : seen) out[c].insert(s);
    return out;
}

StateSet reduce_set(const SystemConfig& c, StateSet set, Variant variant) {
    Coverage cov(variant);
    return reduce_with(cov, c, set);
}

RepSetMap representative_sets(Variant variant) {
    RepSetMap out;
    for (const auto& [c, sets] : reduced_all(variant)) {
        if (sets.size() != 1)
            throw ModelCheckError(ModelCheckError::Kind::ConfluenceViolation, describe(c, sets));
        if (*sets.begin() == 0)
            throw ModelCheckError(ModelCheckError::Kind::EmptyRepSet, to_string(c));
        out[c] = *sets.begin();
    }
    return out;
}

std::vector<InductionFailure> check_induction(const RepSetMap& sets, Variant variant) {
    const Fa3& fa = fa3();
    std::vector<InductionFailure> failures;
    for (const auto& [c, from] : sets)
        for (const Transition& t : transitions_from(c, variant)) {
            auto it = sets.find(t.to);
            if (it == sets.end()) continue;
            StateSet reached = 0;
            for (std::size_t x = 0; x < fa.size(); ++x)
                if (contains(from, x)) reached |= post_events(singleton(x), t.events, t.pid);
            for (std::size_t y = 0; y < fa.size(); ++y)
                if (contains(it->second, y) && !contains(reached, y)) failures.push_back({t, y});
        }
    return failures;
}

std::vector<LabelObservation> label_observations(const GoldenTable& table, const RepSetMap& sets) {
    std::vector<LabelObservation> obs;
    for (ProcState a : kAllStates)
        for (ProcState b : kAllStates) {
            SystemConfig c{{a, b}};
            const auto& cell = table.at(c);
            auto it = sets.find(c);
            if (cell && it != sets.end()) obs.push_back({cell->letters, it->second});
        }
    return obs;
}

TableReport verify_against_table(const GoldenTable& table, const RepSetMap& sets,
                                 const LabelMap& labels) {
    const Fa3& fa = fa3();
    TableReport report;
    for (ProcState a : kAllStates)
        for (ProcState b : kAllStates) {
            SystemConfig c{{a, b}};
            const auto& cell = table.at(c);
            auto it = sets.find(c);
            const std::string expected = cell ? cell->letters : "*";
            const std::string computed = it != sets.end() ? labels.format(it->second) : "*";
            if (expected != computed) {
                report.mismatches.push_back({c, expected, computed});
            } else if (cell) {
                ++report.verified_cells;
            } else {
                ++report.verified_unreachable;
            }
            if (it != sets.end()) {
                auto m = sets.find(SystemConfig{{b, a}});
                if (m == sets.end() || m->second != fa.mirror_set(it->second))
                    report.symmetry_failures.push_back(to_string(c));
            }
        }
    return report;
}

CheckResult run_check(const GoldenTable& table, std::string_view table_text,
                      const LabelSpec& spec, Variant variant) {
    CheckResult r;
    r.reachable = reachable_configs(variant);
    for (const auto& [c, sets] : reduced_all(variant)) {
        if (sets.size() != 1 && r.confluent) {
            r.confluent = false;
            r.confluence_error = describe(c, sets);
        }
        r.sets[c] = *sets.begin();
    }
    try {
        r.labels = assign_labels(label_observations(table, r.sets), spec);
    } catch (const LabelError& e) {
        r.label_error = e.what();
        try {
            r.labels = assign_labels(label_observations(table, representative_sets()), spec);
        } catch (const LabelError&) {
            // The table itself admits no labelling; nothing can be compared.
            r.golden = validate_goldens(table_text);
            r.induction = check_induction(r.sets, variant);
            return r;
        }
    }
    r.table = verify_against_table(table, r.sets, r.labels);
    r.golden = validate_goldens(table_text, &r.labels);
    r.induction = check_induction(r.sets, variant);
    return r;
}

}  // namespace wftas
