#include "wftas/core.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace wftas {

namespace {

constexpr std::array<std::string_view, 4> kRegNames = {"me", "he", "choose", "rst"};
constexpr std::array<std::string_view, kNumStates> kStateNames = {
    "rst", "tst0", "notme", "me", "tome", "choose", "tohe", "he", "nothe", "tst1", "free"};
constexpr std::array<std::string_view, 6> kEventNames = {"sTas",  "fTas0", "fTas1",
                                                         "rstOp", "tas0",  "tas1"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<Enum>(i);
    return std::nullopt;
}

}  // namespace

Registers new_registers() { return Registers{}; }

Registers apply_access(const Registers& regs, const Access& a) {
    if (a.pid > 1 || a.reg > 1)
        throw TraceError(TraceError::Kind::Malformed,
                         "step " + std::to_string(a.t) + ": pid or register out of range");
    Registers out = regs;
    if (a.action == Action::Write) {
        if (a.reg != a.pid)
            throw TraceError(TraceError::Kind::OwnershipViolation,
                             "step " + std::to_string(a.t) + ": process " +
                                 std::to_string(a.pid) + " wrote R" + std::to_string(a.reg));
        out.r[a.reg] = a.value;
        return out;
    }
    if (a.reg == a.pid)
        throw TraceError(TraceError::Kind::OwnershipViolation,
                         "step " + std::to_string(a.t) + ": process " + std::to_string(a.pid) +
                             " read its own register");
    if (regs.r[a.reg] != a.value)
        throw TraceError(TraceError::Kind::StaleRead,
                         "step " + std::to_string(a.t) + ": observed " +
                             std::string(to_string(a.value)) + " but R" + std::to_string(a.reg) +
                             " holds " + std::string(to_string(regs.r[a.reg])));
    return out;
}

Registers replay(const Trace& trace) {
    Registers regs = new_registers();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i > 0 && trace[i].t <= trace[i - 1].t)
            throw TraceError(TraceError::Kind::OutOfOrder,
                             "step indices not strictly increasing at line " +
                                 std::to_string(i + 1));
        regs = apply_access(regs, trace[i]);
    }
    return regs;
}

std::vector<OpRecord> extract_ops(const Trace& trace) {
    std::vector<OpRecord> ops;
    std::map<std::pair<Pid, std::size_t>, std::size_t> index;
    for (const Access& a : trace) {
        auto key = std::make_pair(a.pid, a.op_seq);
        auto it = index.find(key);
        if (it == index.end()) {
            OpRecord r;
            r.pid = a.pid;
            r.kind = a.op;
            r.op_seq = a.op_seq;
            r.start = a.t;
            it = index.emplace(key, ops.size()).first;
            ops.push_back(r);
        }
        OpRecord& r = ops[it->second];
        ++r.accesses;
        if (a.pre == ProcState::Choose) ++r.choose_visits;
        for (EventKind e : a.events) {
            if (e == EventKind::FTas0 || e == EventKind::FTas1 || e == EventKind::RstOp)
                r.finish = a.t;
            if (e == EventKind::FTas0) r.ret = 0;
            if (e == EventKind::FTas1) r.ret = 1;
        }
    }
    return ops;
}

std::string_view to_string(RegValue v) { return kRegNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(ProcState s) { return kStateNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(EventKind e) { return kEventNames[static_cast<std::size_t>(e)]; }
std::string_view to_string(OpKind k) { return k == OpKind::Tas ? "tas" : "reset"; }

std::string to_string(const SystemConfig& c) {
    return "(" + std::string(to_string(c.s[0])) + "," + std::string(to_string(c.s[1])) + ")";
}

std::optional<RegValue> parse_reg_value(std::string_view s) {
    return lookup<RegValue>(kRegNames, s);
}
std::optional<ProcState> parse_proc_state(std::string_view s) {
    return lookup<ProcState>(kStateNames, s);
}
std::optional<EventKind> parse_event_kind(std::string_view s) {
    return lookup<EventKind>(kEventNames, s);
}

}  // namespace wftas
