#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wftas {

using Pid = unsigned;

enum class RegValue : std::uint8_t { Me, He, Choose, Rst };

enum class ProcState : std::uint8_t {
    Rst, Tst0, NotMe, Me, ToMe, Choose, ToHe, He, NotHe, Tst1, Free
};

inline constexpr std::size_t kNumStates = 11;

inline constexpr std::array<ProcState, kNumStates> kAllStates = {
    ProcState::Rst,  ProcState::Tst0, ProcState::NotMe, ProcState::Me,
    ProcState::ToMe, ProcState::Choose, ProcState::ToHe, ProcState::He,
    ProcState::NotHe, ProcState::Tst1, ProcState::Free};

// B-events are attached to accesses; Tas0/Tas1 only ever appear as
// epsilon firings inside the specification automaton.
enum class EventKind : std::uint8_t { STas, FTas0, FTas1, RstOp, Tas0, Tas1 };

struct SpecEvent {
    EventKind kind;
    Pid pid;
    bool operator==(const SpecEvent&) const = default;
};

enum class OpKind : std::uint8_t { Tas, Reset };

enum class Action : std::uint8_t { Read, Write };

struct Registers {
    std::array<RegValue, 2> r{RegValue::Rst, RegValue::Rst};
    bool operator==(const Registers&) const = default;
};

struct Access {
    std::size_t t = 0;
    Pid pid = 0;
    std::size_t op_seq = 0;
    OpKind op = OpKind::Tas;
    Action action = Action::Read;
    unsigned reg = 0;
    RegValue value = RegValue::Rst;  // written value, or observed value for reads
    std::optional<bool> coin;
    ProcState pre = ProcState::Rst;
    ProcState post = ProcState::Rst;
    std::vector<EventKind> events;

    bool operator==(const Access&) const = default;
};

using Trace = std::vector<Access>;

// Pair of chart states; register contents follow from it.
struct SystemConfig {
    std::array<ProcState, 2> s{ProcState::Rst, ProcState::Rst};

    ProcState operator[](Pid p) const { return s[p]; }
    auto operator<=>(const SystemConfig&) const = default;
};

struct OpRecord {
    Pid pid = 0;
    OpKind kind = OpKind::Tas;
    std::size_t op_seq = 0;
    std::size_t start = 0;
    std::optional<std::size_t> finish;
    std::optional<int> ret;
    std::size_t accesses = 0;
    std::size_t choose_visits = 0;

    bool finished() const { return finish.has_value(); }
};

class TraceError : public std::runtime_error {
public:
    enum class Kind { OwnershipViolation, StaleRead, OutOfOrder, Malformed };

    TraceError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

Registers new_registers();

// Throws TraceError on ownership violations and stale reads.
Registers apply_access(const Registers& regs, const Access& a);

// Replays the whole trace from new_registers(), also checking that step
// indices are strictly increasing.
Registers replay(const Trace& trace);

// Groups accesses into operations by (pid, op_seq), in order of first access.
std::vector<OpRecord> extract_ops(const Trace& trace);

std::string_view to_string(RegValue v);
std::string_view to_string(ProcState s);
std::string_view to_string(EventKind e);
std::string_view to_string(OpKind k);

std::optional<RegValue> parse_reg_value(std::string_view s);
std::optional<ProcState> parse_proc_state(std::string_view s);
std::optional<EventKind> parse_event_kind(std::string_view s);

inline std::size_t index_of(ProcState s) { return static_cast<std::size_t>(s); }

std::string to_string(const SystemConfig& c);

}  // namespace wftas
