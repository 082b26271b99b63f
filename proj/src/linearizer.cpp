#include "wftas/linearizer.hpp"

#include <map>
#include <set>
#include <string>

namespace wftas {

namespace {

void assert_sound(const Linearization& lin) {
    auto fail = [](const std::string& why) { throw std::logic_error("linearization unsound: " + why); };
    int owner = -1;
    std::size_t latest_start = 0, last_point = 0;
    for (const LinearizedOp& lo : lin.order) {
        const OpRecord& op = lin.ops[lo.op];
        if (lo.point < op.start || (op.finish && lo.point > *op.finish)) fail("point outside interval");
        if (lo.point < last_point) fail("points out of order");
        if (op.finish && *op.finish < latest_start) fail("real-time order not extended");
        last_point = lo.point;
        latest_start = std::max(latest_start, op.start);
        const int pid = static_cast<int>(op.pid);
        if (op.kind == OpKind::Reset) {
            if (owner != pid) fail("reset by a process not holding 0");
            owner = -1;
            continue;
        }
        if (owner == pid) fail("tas by the holder of 0");
        const int expect = owner == -1 ? 0 : 1;
        if (owner == -1) owner = pid;
        if (lo.ret != expect || (op.ret && *op.ret != expect)) fail("tas return disagrees with the specification");
    }
}

}  // namespace

std::vector<BEvent> project_b(const Trace& trace) {
    replay(trace);
    std::vector<BEvent> out;
    for (std::size_t i = 0; i < trace.size(); ++i)
        for (EventKind e : trace[i].events) {
            if (is_epsilon(e))
                throw TraceError(TraceError::Kind::Malformed,
                                 "step " + std::to_string(trace[i].t) + " carries an occurrence event");
            out.push_back({SpecEvent{e, trace[i].pid}, trace[i].t, i});
        }
    return out;
}

TwoProcessVerdict check_two_process(const Trace& trace) {
    const std::vector<BEvent> b = project_b(trace);
    std::vector<SpecEvent> events;
    events.reserve(b.size());
    for (const BEvent& e : b) events.push_back(e.event);

    TwoProcessVerdict verdict;
    const Fa4Run run = fa4_accepts(events);
    if (!run.accepted) {
        const std::size_t k = run.run.size() - 2;
        verdict.violation = Violation{k + 1, b[k].access + 1, b[k].step};
        return verdict;
    }

    // alive[k]: states from which events[k..] can still be accepted.
    const Fa3& fa = fa3();
    const std::size_t n = events.size();
    const StateSet everything = (StateSet{1} << fa.size()) - 1;
    std::vector<StateSet> alive(n + 1, everything);
    for (std::size_t k = n; k-- > 0;) {
        StateSet s = 0;
        for (std::size_t x = 0; x < fa.size(); ++x)
            if (fa.post(singleton(x), events[k]) & alive[k + 1]) s |= singleton(x);
        alive[k] = s;
    }

    Linearization lin;
    lin.ops = extract_ops(trace);
    std::map<std::pair<Pid, std::size_t>, std::size_t> op_index;
    for (std::size_t i = 0; i < lin.ops.size(); ++i) op_index[{lin.ops[i].pid, lin.ops[i].op_seq}] = i;
    std::array<std::optional<std::size_t>, 2> open_tas;

    std::size_t x = fa.initial();
    for (std::size_t k = 0; k < n; ++k) {
        for (bool fired = true; fired;) {
            fired = false;
            for (const Fa3Move& mv : fa.moves(x)) {
                if (!is_epsilon(mv.event.kind) || !contains(alive[k], mv.target)) continue;
                const Pid p = mv.event.pid;
                if (!open_tas[p] || k == 0) throw std::logic_error("occurrence without an open tas");
                lin.order.push_back({*open_tas[p], b[k - 1].step, mv.event.kind == EventKind::Tas0 ? 0 : 1});
                open_tas[p].reset();
                x = mv.target;
                fired = true;
                break;
            }
        }
        const SpecEvent e = events[k];
        const std::size_t op = op_index.at({e.pid, trace[b[k].access].op_seq});
        if (e.kind == EventKind::STas) open_tas[e.pid] = op;
        if (e.kind == EventKind::RstOp) lin.order.push_back({op, b[k].step, -1});
        std::optional<std::size_t> next;
        for (const Fa3Move& mv : fa.moves(x))
            if (mv.event == e && contains(alive[k + 1], mv.target)) next = mv.target;
        if (!next) throw std::logic_error("accepted trace lost its run");
        x = *next;
    }
    assert_sound(lin);
    verdict.linearizable = true;
    verdict.lin = std::move(lin);
    return verdict;
}

NProcessVerdict check_n_process(const std::vector<OpRecord>& history, std::size_t n,
                                std::size_t budget) {
    const std::size_t m = history.size();
    if (m > 63) throw SearchBudgetExceeded("history of " + std::to_string(m) + " operations is too large");
    for (const OpRecord& op : history)
        if (op.pid >= n) throw std::invalid_argument("process id out of range");

    std::uint64_t required = 0;
    std::vector<std::uint64_t> preds(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (history[i].finished()) required |= std::uint64_t{1} << i;
        for (std::size_t j = 0; j < m; ++j)
            if (history[j].finish && *history[j].finish < history[i].start)
                preds[i] |= std::uint64_t{1} << j;
    }

    std::set<std::pair<std::uint64_t, int>> dead;
    std::vector<std::size_t> order;
    std::size_t nodes = 0;
    auto search = [&](auto&& self, std::uint64_t placed, int owner) -> bool {
        if ((placed & required) == required) return true;
        if (dead.count({placed, owner})) return false;
        if (++nodes > budget) throw SearchBudgetExceeded("n-process search exceeded its budget");
        for (std::size_t i = 0; i < m; ++i) {
            const std::uint64_t bit = std::uint64_t{1} << i;
            if ((placed & bit) || (preds[i] & ~placed)) continue;
            const OpRecord& op = history[i];
            const int pid = static_cast<int>(op.pid);
            int next_owner;
            if (op.kind == OpKind::Reset) {
                if (owner != pid) continue;
                next_owner = -1;
            } else {
                if (owner == pid) continue;
                const int ret = owner == -1 ? 0 : 1;
                if (op.ret && *op.ret != ret) continue;
                next_owner = owner == -1 ? pid : owner;
            }
            order.push_back(i);
            if (self(self, placed | bit, next_owner)) return true;
            order.pop_back();
        }
        dead.insert({placed, owner});
        return false;
    };
    NProcessVerdict v;
    v.linearizable = search(search, 0, -1);
    if (v.linearizable) v.order = order;
    return v;
}

}  // namespace wftas
