#include "wftas/harness.hpp"

#include <algorithm>
#include <ostream>

namespace wftas {

namespace {

bool is_ready(std::span<const Pid> ready, Pid p) {
    return std::find(ready.begin(), ready.end(), p) != ready.end();
}

}  // namespace

Pid RoundRobinAdversary::pick(const SchedulerView& view) {
    Pid choice = view.ready.front();
    if (last_)
        for (Pid p : view.ready)
            if (p > *last_) {
                choice = p;
                break;
            }
    last_ = choice;
    return choice;
}

Pid RandomAdversary::pick(const SchedulerView& view) {
    return view.ready[rng_() % view.ready.size()];
}

Pid ScriptAdversary::pick(const SchedulerView& view) {
    if (next_ >= script_.size())
        throw ScriptExhausted("script ran out at step " + std::to_string(view.step));
    const Pid p = script_[next_++];
    if (!is_ready(view.ready, p))
        throw AdversaryError("script picks process " + std::to_string(p) + " which is not ready at step " +
                             std::to_string(view.step));
    return p;
}

Pid OptimalAdversary::pick(const SchedulerView& view) {
    const Pid p = policy_.at(view.config);
    return is_ready(view.ready, p) ? p : view.ready.front();
}

RunResult run(const Workload& workload, Adversary& adversary, std::uint64_t seed,
              std::size_t max_steps, Variant variant) {
    RunResult result;
    std::mt19937_64 coins(seed);
    SystemConfig config = workload.start.value_or(SystemConfig{});
    Registers regs{{group(config.s[0]), group(config.s[1])}};

    std::array<std::optional<std::size_t>, 2> current;
    std::array<std::size_t, 2> next_seq{0, 0}, tas_done{0, 0};
    std::array<bool, 2> done{false, false};
    for (Pid p : {0u, 1u}) {
        const auto& quota = workload.procs[p].tas_ops;
        done[p] = quota && *quota == 0 && config.s[p] != ProcState::Tst0;
    }
    const bool bounded = workload.procs[0].tas_ops || workload.procs[1].tas_ops;
    auto finished = [&] {
        for (Pid p : {0u, 1u})
            if (workload.procs[p].tas_ops && !done[p]) return false;
        return bounded;
    };

    std::size_t step = 0;
    for (; step < max_steps && !finished(); ++step) {
        std::vector<Pid> ready;
        for (Pid p : {0u, 1u})
            if (!done[p]) ready.push_back(p);
        if (ready.empty()) break;
        const Pid p = adversary.pick(SchedulerView{step, ready, &result.trace, config});
        if (!is_ready(ready, p))
            throw AdversaryError(adversary.name() + " picked process " + std::to_string(p) +
                                 " which is not ready");

        const ProcState s = config.s[p];
        if (!current[p]) {
            OpRecord op;
            op.pid = p;
            op.kind = invoked_op(s);
            op.op_seq = next_seq[p]++;
            op.start = step;
            current[p] = result.ops.size();
            result.ops.push_back(op);
        }
        OpRecord& op = result.ops[*current[p]];

        Access a;
        a.t = step;
        a.pid = p;
        a.op_seq = op.op_seq;
        a.op = op.kind;
        a.pre = s;
        const EnabledAccess acc = enabled_access(s);
        a.action = acc.action;
        std::optional<RegValue> observed;
        if (acc.action == Action::Write) {
            a.reg = p;
            a.value = acc.value;
        } else {
            a.reg = 1 - p;
            a.value = regs.r[1 - p];
            observed = a.value;
            if (needs_coin(s, a.value)) a.coin = (coins() >> 63) != 0;
        }
        a.post = wftas::step(s, observed, a.coin, variant);
        a.events = classify(s, a.post);
        regs = apply_access(regs, a);
        config.s[p] = a.post;

        ++op.accesses;
        if (s == ProcState::Choose) ++op.choose_visits;
        if (finishes_op(a.events)) {
            op.finish = step;
            current[p].reset();
            const auto& load = workload.procs[p];
            if (op.kind == OpKind::Tas) {
                op.ret = returns_value(a.post);
                ++tas_done[p];
                const bool won = op.ret == 0;
                if (!won && ((load.tas_ops && tas_done[p] >= *load.tas_ops) || load.on_loss == LossPolicy::Stop))
                    done[p] = true;
            } else if (load.tas_ops && tas_done[p] >= *load.tas_ops) {
                done[p] = true;
            }
        }
        result.trace.push_back(std::move(a));
    }
    result.truncated = step >= max_steps && !finished();
    result.stats = compute_stats(result.ops);
    return result;
}

RunStats compute_stats(const std::vector<OpRecord>& ops) {
    RunStats s;
    std::size_t tas_sum = 0, reset_sum = 0;
    for (const OpRecord& op : ops) {
        if (!op.finished()) continue;
        if (op.kind == OpKind::Reset) {
            ++s.reset_ops;
            reset_sum += op.accesses;
            s.reset_max = std::max(s.reset_max, op.accesses);
            continue;
        }
        ++s.tas_ops;
        tas_sum += op.accesses;
        s.tas_max = std::max(s.tas_max, op.accesses);
        ++s.choose_histogram[op.choose_visits];
        s.choose_visits += op.choose_visits;
        if (op.choose_visits > 0) s.choose_returns += op.choose_visits - 1;
        if (op.ret) ++s.returns[*op.ret];
    }
    if (s.tas_ops) s.tas_mean = static_cast<double>(tas_sum) / static_cast<double>(s.tas_ops);
    if (s.reset_ops) s.reset_mean = static_cast<double>(reset_sum) / static_cast<double>(s.reset_ops);
    if (s.choose_visits)
        s.loop_frequency = static_cast<double>(s.choose_returns) / static_cast<double>(s.choose_visits);
    return s;
}

void write_stats_csv(std::ostream& out, const std::vector<OpRecord>& ops) {
    out << "op_index,pid,kind,accesses,ret,choose_visits\n";
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const OpRecord& op = ops[i];
        out << i << ',' << op.pid << ',' << to_string(op.kind) << ',' << op.accesses << ',';
        if (op.ret) out << *op.ret;
        out << ',' << op.choose_visits << '\n';
    }
}

std::vector<std::size_t> exclusivity_violations(const Trace& trace) {
    std::vector<std::size_t> out;
    std::optional<Pid> holder;
    for (const Access& a : trace)
        for (EventKind e : a.events) {
            if (e == EventKind::FTas0) {
                if (holder && *holder != a.pid) out.push_back(a.t);
                holder = a.pid;
            } else if (e == EventKind::RstOp && holder == a.pid) {
                holder.reset();
            }
        }
    return out;
}

}  // namespace wftas
