#include "wftas/automata.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>

namespace wftas {

namespace {

constexpr std::array<EventKind, 6> kEventOrder = {EventKind::STas,  EventKind::Tas0,
                                                  EventKind::Tas1,  EventKind::FTas0,
                                                  EventKind::FTas1, EventKind::RstOp};

Owner owner_of(Pid p) { return p == 0 ? Owner::P0 : Owner::P1; }

std::optional<Fa2State> fa2_next(Fa2State s, EventKind e) {
    using F = Fa2State;
    switch (e) {
        case EventKind::STas: return s == F::I1 ? std::optional(F::S) : std::nullopt;
        case EventKind::Tas0: return s == F::S ? std::optional(F::T0) : std::nullopt;
        case EventKind::Tas1: return s == F::S ? std::optional(F::T1) : std::nullopt;
        case EventKind::FTas0: return s == F::T0 ? std::optional(F::I0) : std::nullopt;
        case EventKind::FTas1: return s == F::T1 ? std::optional(F::I1) : std::nullopt;
        case EventKind::RstOp: return s == F::I0 ? std::optional(F::I1) : std::nullopt;
    }
    return std::nullopt;
}

std::optional<Fa3State> fa3_next(const Fa3State& s, SpecEvent ev) {
    auto local = fa2_next(s.p[ev.pid], ev.kind);
    if (!local) return std::nullopt;
    Fa3State out = s;
    out.p[ev.pid] = *local;
    switch (ev.kind) {
        case EventKind::Tas0:
            if (s.owner != Owner::Bot) return std::nullopt;
            out.owner = owner_of(ev.pid);
            break;
        case EventKind::Tas1:
            if (s.owner != owner_of(1 - ev.pid)) return std::nullopt;
            break;
        case EventKind::RstOp:
            if (s.owner != owner_of(ev.pid)) return std::nullopt;
            out.owner = Owner::Bot;
            break;
        default: break;
    }
    return out;
}

Fa3State mirrored(const Fa3State& s) {
    Fa3State m;
    m.owner = s.owner == Owner::P0 ? Owner::P1 : s.owner == Owner::P1 ? Owner::P0 : Owner::Bot;
    m.p = {s.p[1], s.p[0]};
    return m;
}

}  // namespace

bool is_epsilon(EventKind e) { return e == EventKind::Tas0 || e == EventKind::Tas1; }

Fa3 fa3_build() {
    Fa3 fa;
    std::map<Fa3State, std::size_t> index;
    std::deque<std::size_t> queue;
    auto intern = [&](const Fa3State& s) {
        auto [it, fresh] = index.emplace(s, fa.states_.size());
        if (fresh) {
            fa.states_.push_back(s);
            fa.moves_.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(Fa3State{});
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (Pid p : {0u, 1u})
            for (EventKind k : kEventOrder) {
                SpecEvent ev{k, p};
                if (auto next = fa3_next(fa.states_[i], ev)) {
                    std::size_t j = intern(*next);
                    fa.moves_[i].push_back({ev, j});
                }
            }
    }
    for (const Fa3State& s : fa.states_) fa.mirror_.push_back(index.at(mirrored(s)));
    return fa;
}

const Fa3& fa3() {
    static const Fa3 instance = fa3_build();
    return instance;
}

std::optional<std::size_t> Fa3::find(const Fa3State& s) const {
    auto it = std::find(states_.begin(), states_.end(), s);
    if (it == states_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

bool Fa3::epsilon_only(std::size_t i) const {
    const auto& m = moves_[i];
    return !m.empty() &&
           std::all_of(m.begin(), m.end(), [](const Fa3Move& mv) { return is_epsilon(mv.event.kind); });
}

StateSet Fa3::mirror_set(StateSet s) const {
    StateSet out = 0;
    for (std::size_t i = 0; i < size(); ++i)
        if (contains(s, i)) out |= singleton(mirror_[i]);
    return out;
}

StateSet Fa3::closure(StateSet s) const {
    StateSet done = 0;
    while (StateSet todo = s & ~done) {
        std::size_t i = static_cast<std::size_t>(std::countr_zero(todo));
        done |= singleton(i);
        for (const Fa3Move& mv : moves_[i])
            if (is_epsilon(mv.event.kind)) s |= singleton(mv.target);
    }
    return s;
}

StateSet Fa3::canonical(StateSet s) const {
    StateSet c = closure(s);
    for (std::size_t i = 0; i < size(); ++i)
        if (epsilon_only(i)) c &= ~singleton(i);
    return c;
}

StateSet Fa3::post(StateSet s, SpecEvent e) const {
    StateSet from = closure(s), to = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!contains(from, i)) continue;
        for (const Fa3Move& mv : moves_[i])
            if (mv.event == e) to |= singleton(mv.target);
    }
    return closure(to);
}

StateSet Fa3::fa4_step(StateSet s, SpecEvent e) const { return canonical(post(s, e)); }

Fa4Run fa4_accepts(const std::vector<SpecEvent>& events) {
    const Fa3& fa = fa3();
    Fa4Run r;
    r.run.push_back(fa.initial_set());
    for (const SpecEvent& e : events) {
        StateSet next = fa.fa4_step(r.run.back(), e);
        r.run.push_back(next);
        if (next == 0) {
            r.accepted = false;
            break;
        }
    }
    return r;
}

std::string to_string(Owner o) {
    switch (o) {
        case Owner::Bot: return "BOT";
        case Owner::P0: return "P0";
        case Owner::P1: return "P1";
    }
    return "?";
}

std::string to_string(Fa2State s) {
    constexpr std::array<const char*, 5> names = {"I1", "S", "T0", "T1", "I0"};
    return names[static_cast<std::size_t>(s)];
}

std::string to_string(const Fa3State& s) {
    return "(" + to_string(s.owner) + "," + to_string(s.p[0]) + "," + to_string(s.p[1]) + ")";
}

std::optional<Owner> parse_owner(std::string_view s) {
    if (s == "BOT") return Owner::Bot;
    if (s == "P0") return Owner::P0;
    if (s == "P1") return Owner::P1;
    return std::nullopt;
}

std::optional<Fa2State> parse_fa2_state(std::string_view s) {
    for (Fa2State f : {Fa2State::I1, Fa2State::S, Fa2State::T0, Fa2State::T1, Fa2State::I0})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

LabelSpec parse_label_spec(std::string_view text) {
    LabelSpec spec;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw LabelError("label spec line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        if (kind == "range") {
            std::string a, b, o;
            if (!(ls >> a >> b >> o) || a.size() != 1 || b.size() != 1) fail("bad range");
            auto owner = parse_owner(o);
            if (!owner) fail("bad owner " + o);
            spec.ranges.push_back({a[0], b[0], *owner});
        } else if (kind == "anchor") {
            std::string l, o, p0, p1;
            if (!(ls >> l >> o >> p0 >> p1) || l.size() != 1) fail("bad anchor");
            auto owner = parse_owner(o);
            auto f0 = parse_fa2_state(p0), f1 = parse_fa2_state(p1);
            if (!owner || !f0 || !f1) fail("bad anchor state");
            spec.anchors[l[0]] = Fa3State{*owner, {*f0, *f1}};
        } else {
            fail("unknown directive " + kind);
        }
    }
    return spec;
}

std::string LabelMap::format(StateSet s) const {
    std::string out;
    for (const auto& [state, letter] : letter_of)
        if (contains(s, state)) out.push_back(letter);
    std::sort(out.begin(), out.end());
    return out;
}

StateSet LabelMap::parse(std::string_view letters) const {
    StateSet s = 0;
    for (char c : letters) {
        auto it = state_of.find(c);
        if (it == state_of.end()) throw LabelError(std::string("unknown letter ") + c);
        s |= singleton(it->second);
    }
    return s;
}

LabelMap assign_labels(const std::vector<LabelObservation>& cells, const LabelSpec& spec) {
    const Fa3& fa = fa3();
    constexpr std::size_t kLetters = 20;
    constexpr std::size_t kSolutionCap = 4096;
    if (fa.size() != kLetters)
        throw LabelError("expected 20 automaton states, found " + std::to_string(fa.size()));

    std::array<StateSet, kLetters> candidates{};
    const StateSet all = (StateSet{1} << kLetters) - 1;
    for (std::size_t l = 0; l < kLetters; ++l) {
        const char letter = static_cast<char>('a' + l);
        StateSet cand = all;
        for (const auto& r : spec.ranges) {
            if (letter < r.first || letter > r.last) continue;
            StateSet ok = 0;
            for (std::size_t i = 0; i < fa.size(); ++i)
                if (fa.state(i).owner == r.owner) ok |= singleton(i);
            cand &= ok;
        }
        if (auto it = spec.anchors.find(letter); it != spec.anchors.end()) {
            auto idx = fa.find(it->second);
            if (!idx) throw LabelError(std::string("anchor for ") + letter + " is not reachable");
            cand &= singleton(*idx);
        }
        for (const auto& cell : cells) {
            const bool printed = cell.letters.find(letter) != std::string::npos;
            cand &= printed ? cell.computed : ~cell.computed;
        }
        if (cand == 0)
            throw LabelError(std::string("no automaton state is consistent with letter ") + letter);
        candidates[l] = cand;
    }

    std::vector<std::array<std::size_t, kLetters>> solutions;
    std::array<std::size_t, kLetters> current{};
    auto search = [&](auto&& self, std::size_t l, StateSet used) -> void {
        if (solutions.size() >= kSolutionCap) return;
        if (l == kLetters) {
            solutions.push_back(current);
            return;
        }
        for (StateSet c = candidates[l] & ~used; c; c &= c - 1) {
            std::size_t i = static_cast<std::size_t>(std::countr_zero(c));
            current[l] = i;
            self(self, l + 1, used | singleton(i));
        }
    };
    search(search, 0, 0);
    if (solutions.empty()) throw LabelError("no bijection satisfies every cell");

    LabelMap map;
    map.solutions = solutions.size();
    for (std::size_t l = 0; l < kLetters; ++l) {
        const char letter = static_cast<char>('a' + l);
        map.state_of[letter] = solutions.front()[l];
        map.letter_of[solutions.front()[l]] = letter;
    }
    std::map<StateSet, std::string> groups;
    for (std::size_t l = 0; l < kLetters; ++l) {
        StateSet seen = 0;
        for (const auto& sol : solutions) seen |= singleton(sol[l]);
        if (std::popcount(seen) > 1) groups[seen].push_back(static_cast<char>('a' + l));
    }
    for (auto& [_, letters] : groups) map.ambiguous.push_back(letters);
    return map;
}

}  // namespace wftas
