#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wftas/automata.hpp"
#include "wftas/core.hpp"

namespace wftas {

struct BEvent {
    SpecEvent event;
    std::size_t step;
    std::size_t access;  // index into the trace
};

// Replays the trace (throws TraceError when it is corrupt) and lists its
// start/finish events in order.
std::vector<BEvent> project_b(const Trace& trace);

struct LinearizedOp {
    std::size_t op;     // index into Linearization::ops
    std::size_t point;  // step index t(a), s(a) <= t(a) <= f(a)
    int ret = -1;       // 0/1 for tas, -1 for reset
};

struct Linearization {
    std::vector<OpRecord> ops;
    std::vector<LinearizedOp> order;
};

struct Violation {
    std::size_t events = 0;    // length of the shortest rejected prefix of h|B
    std::size_t accesses = 0;  // trace prefix that contains it
    std::size_t step = 0;      // step of the offending access
};

struct TwoProcessVerdict {
    bool linearizable = false;
    std::optional<Linearization> lin;
    std::optional<Violation> violation;
};

// FA4 acceptance of h|B. On acceptance the run firing epsilon moves as early
// as possible gives the linearization points; the result is replayed through
// the sequential specification and a logic_error is thrown if that fails.
TwoProcessVerdict check_two_process(const Trace& trace);

class SearchBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NProcessVerdict {
    bool linearizable = false;
    std::vector<std::size_t> order;  // indices into the history; pending ops may be absent
};

// Exhaustive search for a real-time respecting order accepted by the
// n-process sequential test-and-set. Unfinished tas operations may be
// included or left out.
NProcessVerdict check_n_process(const std::vector<OpRecord>& history, std::size_t n,
                                std::size_t budget = 1'000'000);

}  // namespace wftas
