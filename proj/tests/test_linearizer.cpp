#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "wftas/harness.hpp"
#include "wftas/linearizer.hpp"

using namespace wftas;
using E = EventKind;

namespace {

Trace simulate(Adversary& adv, std::size_t ops, std::uint64_t seed) {
    Workload w;
    w.procs[0].tas_ops = ops;
    w.procs[1].tas_ops = ops;
    return run(w, adv, seed).trace;
}

// Sequential n-process test-and-set applied to `order`; every finished op
// must appear, and the order must respect real time.
bool legal(const std::vector<OpRecord>& h, const std::vector<std::size_t>& order) {
    int owner = -1;
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const OpRecord& later = h[order[a]];
            const OpRecord& earlier = h[order[b]];
            if (earlier.finish && *earlier.finish < later.start) return false;
        }
        const OpRecord& op = h[order[a]];
        if (op.kind == OpKind::Reset) {
            if (owner != static_cast<int>(op.pid)) return false;
            owner = -1;
        } else {
            const int r = owner == -1 ? 0 : 1;
            if (owner == static_cast<int>(op.pid)) return false;
            if (op.ret && *op.ret != r) return false;
            if (r == 0) owner = static_cast<int>(op.pid);
        }
    }
    return true;
}

// Brute force over subsets of pending ops and all permutations.
bool brute_force(const std::vector<OpRecord>& h) {
    std::vector<std::size_t> pending, finished;
    for (std::size_t i = 0; i < h.size(); ++i) (h[i].finished() ? finished : pending).push_back(i);
    for (std::size_t mask = 0; mask < (std::size_t{1} << pending.size()); ++mask) {
        std::vector<std::size_t> pick = finished;
        for (std::size_t j = 0; j < pending.size(); ++j)
            if (mask >> j & 1) pick.push_back(pending[j]);
        std::sort(pick.begin(), pick.end());
        do {
            if (legal(h, pick)) return true;
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return false;
}

OpRecord op(Pid pid, OpKind kind, std::size_t start, std::optional<std::size_t> finish, std::optional<int> ret) {
    OpRecord r;
    r.pid = pid;
    r.kind = kind;
    r.start = start;
    r.finish = finish;
    r.ret = ret;
    return r;
}

}  // namespace

TEST_CASE("projection to start and finish events") {
    CHECK(project_b({}).empty());

    Workload solo_load;
    solo_load.procs[0].tas_ops = 1;
    ScriptAdversary solo({0, 0, 0});
    const Trace t = run(solo_load, solo, 1).trace;
    REQUIRE(t.size() == 3);
    const auto b = project_b(t);
    REQUIRE(b.size() == 3);
    CHECK(b[0].event == SpecEvent{E::STas, 0});
    CHECK(b[1].event == SpecEvent{E::FTas0, 0});
    CHECK(b[2].event == SpecEvent{E::RstOp, 0});

    // The tst1 self-loop starts and finishes at one step.
    Workload w;
    w.procs[0].tas_ops = 1;
    w.procs[1].tas_ops.reset();
    w.start = SystemConfig{{ProcState::Tst1, ProcState::Tst0}};
    ScriptAdversary one({0});
    const Trace loop = run(w, one, 1).trace;
    REQUIRE(loop.size() == 1);
    CHECK(loop[0].post == ProcState::Tst1);
    CHECK(loop[0].events == std::vector{E::STas, E::FTas1});
}

TEST_CASE("simulated traces are linearizable") {
    RoundRobinAdversary rr;
    const Trace t = simulate(rr, 1000, 1);
    const TwoProcessVerdict v = check_two_process(t);
    REQUIRE(v.linearizable);
    CHECK(v.lin->ops.size() == v.lin->order.size());

    RandomAdversary rnd(42);
    const Trace t42 = simulate(rnd, 500, 42);
    CHECK(extract_ops(t42).size() >= 1000);
    const TwoProcessVerdict v42 = check_two_process(t42);
    REQUIRE(v42.linearizable);
    std::vector<std::size_t> order;
    for (const LinearizedOp& lo : v42.lin->order) {
        const OpRecord& o = v42.lin->ops[lo.op];
        CHECK(lo.point >= o.start);
        CHECK(lo.point <= *o.finish);
        order.push_back(lo.op);
    }
    CHECK(legal(v42.lin->ops, order));
}

TEST_CASE("flipping the winner's return is a violation") {
    RoundRobinAdversary rr;
    Trace t = simulate(rr, 1, 3);
    const auto ops = extract_ops(t);
    REQUIRE(ops.size() >= 2);
    REQUIRE(ops[0].kind == OpKind::Tas);
    REQUIRE(ops[1].kind == OpKind::Tas);
    REQUIRE(ops[0].start < *ops[1].finish);
    REQUIRE(ops[1].start < *ops[0].finish);

    // The winner's finishing read now claims a loss; the trace is cut after
    // both tas operations have finished.
    auto win = std::find_if(t.begin(), t.end(), [](const Access& a) { return a.post == ProcState::Tst0; });
    REQUIRE(win != t.end());
    const Pid loser = 1 - win->pid;
    win->post = ProcState::Tst1;
    win->events = {E::FTas1};
    const std::size_t flip = static_cast<std::size_t>(win - t.begin());
    std::size_t cut = flip;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i].pid == loser && t[i].events == std::vector{E::FTas1}) cut = std::max(cut, i);
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(cut) + 1, t.end());

    CHECK_NOTHROW(replay(t));
    const TwoProcessVerdict v = check_two_process(t);
    CHECK(!v.linearizable);
    REQUIRE(v.violation);
    CHECK(v.violation->accesses == cut + 1);
    CHECK(v.violation->step == t[cut].t);
    CHECK(v.violation->events == project_b(t).size());
}

TEST_CASE("corrupt traces throw") {
    RoundRobinAdversary rr;
    Trace t = simulate(rr, 2, 1);
    Trace stale = t;
    auto rd = std::find_if(stale.begin(), stale.end(), [](const Access& a) { return a.action == Action::Read; });
    rd->value = rd->value == RegValue::He ? RegValue::Me : RegValue::He;
    CHECK_THROWS_AS(check_two_process(stale), TraceError);

    Trace eps = t;
    eps[0].events.push_back(E::Tas0);
    CHECK_THROWS_AS(check_two_process(eps), TraceError);
}

TEST_CASE("n-process checker on small histories") {
    using K = OpKind;
    CHECK(check_n_process({op(0, K::Tas, 0, 1, 0), op(0, K::Reset, 2, 2, {})}, 1).linearizable);
    CHECK(check_n_process({op(0, K::Tas, 0, 5, 1), op(1, K::Tas, 1, 6, 1), op(2, K::Tas, 2, 7, 0)}, 3)
              .linearizable);
    // P1 loses and finishes before anyone could have won.
    CHECK(!check_n_process({op(0, K::Tas, 0, 9, 1), op(1, K::Tas, 1, 2, 1), op(2, K::Tas, 3, 4, 0)}, 3)
               .linearizable);
    // A pending op may take effect and explain a loss.
    CHECK(check_n_process({op(0, K::Tas, 0, {}, {}), op(1, K::Tas, 1, 2, 1)}, 2).linearizable);
    CHECK(!check_n_process({op(0, K::Tas, 0, 1, 0), op(1, K::Tas, 2, 3, 0)}, 2).linearizable);

    // Two winners and no reset: every subset of the losers gets explored.
    std::vector<OpRecord> big{op(0, K::Tas, 0, 100, 0), op(1, K::Tas, 0, 100, 0)};
    for (Pid p = 2; p < 14; ++p) big.push_back(op(p, K::Tas, 0, 100, 1));
    CHECK_THROWS_AS(check_n_process(big, 14, 1000), SearchBudgetExceeded);
}

TEST_CASE("n-process checker agrees with brute force") {
    using K = OpKind;
    std::mt19937_64 rng(7);
    std::size_t yes = 0, no = 0;
    for (int round = 0; round < 400; ++round) {
        const std::size_t n = 2 + rng() % 3;
        std::vector<OpRecord> h;
        std::vector<bool> holds(n, false);
        std::size_t t = 0;
        for (int k = 0; k < 5; ++k) {
            const Pid p = static_cast<Pid>(rng() % n);
            const std::size_t start = t + rng() % 3;
            const std::size_t len = rng() % 6;
            const bool pending = rng() % 8 == 0;
            OpRecord r = holds[p] ? op(p, K::Reset, start, start + len, {})
                                  : op(p, K::Tas, start, start + len, static_cast<int>(rng() % 2));
            if (r.kind == K::Tas && *r.ret == 0) holds[p] = true;
            if (r.kind == K::Reset) holds[p] = false;
            if (pending) {
                r.finish.reset();
                r.ret.reset();
            }
            h.push_back(r);
            t = start + 1;
        }
        const bool want = brute_force(h);
        CHECK(check_n_process(h, n).linearizable == want);
        (want ? yes : no)++;
    }
    CHECK(yes > 20);
    CHECK(no > 20);
}
