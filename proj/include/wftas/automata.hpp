#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wftas/core.hpp"

namespace wftas {

// Owner of the 0 in the atomic object: nobody, P0 or P1.
enum class Owner : std::uint8_t { Bot, P0, P1 };

// Per-process interface automaton. I1/I0 are idle holding 1/0, S is after
// the starting access, T0/T1 after the atomic occurrence returning 0/1.
enum class Fa2State : std::uint8_t { I1, S, T0, T1, I0 };

struct Fa3State {
    Owner owner = Owner::Bot;
    std::array<Fa2State, 2> p{Fa2State::I1, Fa2State::I1};

    auto operator<=>(const Fa3State&) const = default;
};

struct Fa3Move {
    SpecEvent event;
    std::size_t target;
};

// Bit i stands for state i of the composed automaton (20 states fit).
using StateSet = std::uint32_t;

inline bool contains(StateSet s, std::size_t i) { return (s >> i) & 1u; }
inline StateSet singleton(std::size_t i) { return StateSet{1} << i; }

bool is_epsilon(EventKind e);

class Fa3 {
public:
    std::size_t size() const { return states_.size(); }
    const Fa3State& state(std::size_t i) const { return states_[i]; }
    std::optional<std::size_t> find(const Fa3State& s) const;
    std::size_t initial() const { return 0; }
    const std::vector<Fa3Move>& moves(std::size_t i) const { return moves_[i]; }
    bool epsilon_only(std::size_t i) const;
    std::size_t mirror(std::size_t i) const { return mirror_[i]; }
    StateSet mirror_set(StateSet s) const;

    StateSet closure(StateSet s) const;
    // Epsilon closure minus epsilon-only states.
    StateSet canonical(StateSet s) const;
    // closure, then e, then closure; not canonicalized.
    StateSet post(StateSet s, SpecEvent e) const;
    StateSet fa4_step(StateSet s, SpecEvent e) const;
    StateSet initial_set() const { return canonical(singleton(initial())); }

    friend Fa3 fa3_build();

private:
    std::vector<Fa3State> states_;
    std::vector<std::vector<Fa3Move>> moves_;
    std::vector<std::size_t> mirror_;
};

// Builds the reachable part of the composition of the atomic object with two
// interface automata. State 0 is (BOT, I1, I1).
Fa3 fa3_build();

// Process-wide instance built on first use.
const Fa3& fa3();

struct Fa4Run {
    bool accepted = true;
    // run[k] is the set after the first k events; stops at the first empty set.
    std::vector<StateSet> run;
};

Fa4Run fa4_accepts(const std::vector<SpecEvent>& events);

std::string to_string(Owner o);
std::string to_string(Fa2State s);
std::string to_string(const Fa3State& s);
std::optional<Owner> parse_owner(std::string_view s);
std::optional<Fa2State> parse_fa2_state(std::string_view s);

// Letter constraints read from the anchor data file.
struct LabelSpec {
    struct Range {
        char first;
        char last;
        Owner owner;
    };
    std::vector<Range> ranges;
    std::map<char, Fa3State> anchors;
};

LabelSpec parse_label_spec(std::string_view text);

class LabelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LabelMap {
    std::map<char, std::size_t> state_of;
    std::map<std::size_t, char> letter_of;
    // Letter groups whose assignment the constraints do not pin down. Every
    // permutation inside a group is an equally consistent labelling.
    std::vector<std::string> ambiguous;
    std::size_t solutions = 0;

    std::string format(StateSet s) const;
    // Throws LabelError on unknown letters.
    StateSet parse(std::string_view letters) const;
};

// One observation for the solver: the printed letters of a cell and the set
// computed for the same configuration.
struct LabelObservation {
    std::string letters;
    StateSet computed;
};

// Finds every bijection letters a..t <-> FA3 states consistent with the spec
// and the observations. Throws LabelError when none exists.
LabelMap assign_labels(const std::vector<LabelObservation>& cells, const LabelSpec& spec);

}  // namespace wftas
