#include "wftas/tournament.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "wftas/protocol.hpp"
#include "wftas/trace_io.hpp"

namespace wftas {

TournamentTree::TournamentTree(std::size_t n, std::size_t ops_per_process, ResetOrder order)
    : n_(n), order_(order) {
    if (n < 2) throw std::invalid_argument("a tournament needs at least two processes");
    std::size_t leaves = 1;
    while (leaves < n) {
        leaves *= 2;
        ++depth_;
    }
    nodes_.resize(leaves);
    paths_.resize(n);
    procs_.resize(n);
    for (Pid p = 0; p < n; ++p) {
        for (std::size_t x = leaves + p; x > 1; x /= 2)
            paths_[p].push_back({x / 2, static_cast<Pid>(x % 2)});
        procs_[p].tas_left = ops_per_process;
    }
}

std::vector<Pid> TournamentTree::ready() const {
    std::vector<Pid> out;
    for (Pid p = 0; p < n_; ++p)
        if (procs_[p].op || procs_[p].held > 0 || procs_[p].tas_left > 0) out.push_back(p);
    return out;
}

bool TournamentTree::all_done() const { return ready().empty(); }

std::vector<std::size_t> TournamentTree::reset_plan(std::size_t count) const {
    std::vector<std::size_t> plan;
    for (std::size_t i = 0; i < count; ++i) plan.push_back(i);
    if (order_ == ResetOrder::RootToLeaf) std::reverse(plan.begin(), plan.end());
    return plan;
}

void TournamentTree::begin_operation(Pid p) {
    Proc& pr = procs_[p];
    OpRecord op;
    op.pid = p;
    op.start = clock_;
    op.op_seq = static_cast<std::size_t>(
        std::count_if(history_.begin(), history_.end(), [p](const OpRecord& r) { return r.pid == p; }));
    if (pr.held == depth_) {
        op.kind = OpKind::Reset;
        pr.descending = true;
        pr.to_reset = reset_plan(pr.held);
    } else if (pr.held == 0 && pr.tas_left > 0) {
        op.kind = OpKind::Tas;
        --pr.tas_left;
        pr.descending = false;
        pr.level = 0;
    } else {
        throw std::logic_error("process " + std::to_string(p) + " has nothing to do");
    }
    pr.op = history_.size();
    history_.push_back(op);
}

bool TournamentTree::next_needs_coin(Pid p) const {
    const Proc& pr = procs_[p];
    if (pr.op ? pr.descending : pr.held == depth_) return false;
    const Hop& hop = paths_[p][pr.op ? pr.level : 0];
    const Node& node = nodes_[hop.node];
    const ProcState s = node.role[hop.role];
    return enabled_access(s).action == Action::Read && needs_coin(s, node.regs.r[1 - hop.role]);
}

void TournamentTree::node_access(Pid p, const Hop& hop, std::optional<bool> coin) {
    Node& node = nodes_[hop.node];
    const Pid r = hop.role;
    const ProcState s = node.role[r];
    if (!node.open[r]) {
        node.open[r] = invoked_op(s);
        ++node.seq[r];
    }
    Access a;
    a.t = clock_;
    a.pid = r;
    a.op_seq = node.seq[r] - 1;
    a.op = *node.open[r];
    a.pre = s;
    const EnabledAccess acc = enabled_access(s);
    a.action = acc.action;
    std::optional<RegValue> observed;
    if (acc.action == Action::Write) {
        a.reg = r;
        a.value = acc.value;
    } else {
        a.reg = 1 - r;
        a.value = node.regs.r[1 - r];
        observed = a.value;
        if (needs_coin(s, a.value)) {
            if (!coin) throw std::logic_error("coin required at node " + std::to_string(hop.node));
            a.coin = coin;
        }
    }
    a.post = wftas::step(s, observed, a.coin);
    a.events = classify(s, a.post);
    node.regs = apply_access(node.regs, a);
    node.role[r] = a.post;
    if (finishes_op(a.events)) node.open[r].reset();
    ++history_[*procs_[p].op].accesses;
    trace_.push_back({hop.node, p, std::move(a)});
}

void TournamentTree::finish_n_op(Pid p, std::size_t t) {
    Proc& pr = procs_[p];
    OpRecord& op = history_[*pr.op];
    op.finish = t;
    if (op.kind == OpKind::Tas) op.ret = pr.result;
    pr.op.reset();
    pr.result.reset();
    pr.descending = false;
    pr.to_reset.clear();
}

void TournamentTree::step(Pid p, std::optional<bool> coin) {
    if (!procs_[p].op) begin_operation(p);
    Proc& pr = procs_[p];
    const std::size_t t = clock_;
    if (pr.descending) {
        const Hop& hop = paths_[p][pr.to_reset.front()];
        if (nodes_[hop.node].role[hop.role] != ProcState::Tst0)
            throw NotOwner("process " + std::to_string(p) + " resets node " + std::to_string(hop.node) +
                           " it does not hold");
        node_access(p, hop, std::nullopt);
        pr.to_reset.erase(pr.to_reset.begin());
        --pr.held;
        ++clock_;
        if (pr.to_reset.empty()) finish_n_op(p, t);
        return;
    }
    const Hop& hop = paths_[p][pr.level];
    const Node& node = nodes_[hop.node];
    if (!node.open[hop.role] && node.role[hop.role] == ProcState::Tst0)
        throw NotOwner("process " + std::to_string(p) + " reaches node " + std::to_string(hop.node) +
                       " while another process still holds its side");
    node_access(p, hop, coin);
    ++clock_;
    if (node.open[hop.role]) return;
    const auto ret = returns_value(node.role[hop.role]);
    if (ret == 0) {
        ++pr.held;
        if (++pr.level == depth_) {
            pr.result = 0;
            finish_n_op(p, t);
        }
        return;
    }
    pr.result = 1;
    pr.descending = true;
    pr.to_reset = reset_plan(pr.held);
    if (pr.to_reset.empty()) finish_n_op(p, t);
}

void TournamentTree::finish_operation(Pid p, std::mt19937_64& coins) {
    if (!procs_[p].op) {
        step(p, next_needs_coin(p) ? std::optional<bool>((coins() >> 63) != 0) : std::nullopt);
    }
    for (std::size_t guard = 0; procs_[p].op; ++guard) {
        if (guard > 100000) throw std::logic_error("solo operation does not finish");
        step(p, next_needs_coin(p) ? std::optional<bool>((coins() >> 63) != 0) : std::nullopt);
    }
}

Trace TournamentTree::node_trace(std::size_t node) const {
    Trace out;
    for (const NodeAccess& na : trace_)
        if (na.node == node) out.push_back(na.access);
    return out;
}

namespace {

// Fills in the verdicts; true when the history is a genuine counterexample.
bool evaluate(const TournamentTree& tree, ViolationSearch& out) {
    NProcessVerdict v = check_n_process(tree.history(), tree.processes());
    if (v.linearizable) return false;
    std::vector<std::pair<std::size_t, bool>> nodes;
    for (std::size_t node = 1; node <= tree.node_count(); ++node) {
        const bool ok = check_two_process(tree.node_trace(node)).linearizable;
        nodes.emplace_back(node, ok);
        if (!ok) return false;
    }
    out.found = true;
    out.trace = tree.trace();
    out.history = tree.history();
    out.verdict = v;
    out.node_verdicts = nodes;
    return true;
}

bool guided(std::size_t n, const SearchOptions& opt, ViolationSearch& out) {
    for (Pid i = 0; i < n; ++i)
        for (Pid j = 0; j < n; ++j)
            for (Pid k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                TournamentTree tree(n, opt.ops_per_process, opt.order);
                if (tree.path(i).size() < 2 || tree.path(i)[0].node != tree.path(j)[0].node) continue;
                std::mt19937_64 coins(opt.seed);
                // i wins its first node and stops just below the next one.
                while (tree.held(i) == 0 || !tree.in_operation(i)) {
                    tree.step(i, tree.next_needs_coin(i) ? std::optional<bool>((coins() >> 63) != 0)
                                                         : std::nullopt);
                    ++out.explored;
                    if (!tree.in_operation(i)) break;
                }
                if (!tree.in_operation(i)) continue;
                // j loses against i's claim, then k starts and wins the root.
                try {
                    tree.finish_operation(j, coins);
                    tree.finish_operation(k, coins);
                    tree.finish_operation(i, coins);
                    while (!tree.all_done())
                        for (Pid p : tree.ready()) tree.finish_operation(p, coins);
                } catch (const NotOwner&) {
                    continue;
                }
                out.explored += tree.now();
                if (evaluate(tree, out)) {
                    out.strategy = "guided";
                    return true;
                }
            }
    return false;
}

struct Dfs {
    const SearchOptions& opt;
    ViolationSearch& out;
    std::size_t bound = 0;
    bool cut = false;

    bool visit(const TournamentTree& tree, std::optional<Pid> last, std::size_t used) {
        if (tree.all_done()) return evaluate(tree, out);
        if (tree.now() > 1000) {
            cut = true;
            return false;
        }
        std::vector<Pid> order = tree.ready();
        if (last) {
            auto it = std::find(order.begin(), order.end(), *last);
            if (it != order.end()) std::rotate(order.begin(), it, it + 1);
        }
        for (Pid q : order) {
            const bool preempt = last && q != *last && tree.in_operation(*last);
            if (used + preempt > bound) continue;
            std::vector<std::optional<bool>> coins{std::nullopt};
            if (tree.next_needs_coin(q)) coins = {true, false};
            for (auto coin : coins) {
                if (out.explored >= opt.budget) {
                    cut = true;
                    return false;
                }
                ++out.explored;
                TournamentTree child = tree;
                try {
                    child.step(q, coin);
                } catch (const NotOwner&) {
                    continue;  // only possible with leaf-to-root resets
                }
                if (visit(child, q, used + preempt)) return true;
            }
        }
        return false;
    }
};

}  // namespace

ViolationSearch find_violation(std::size_t n, const SearchOptions& options) {
    ViolationSearch out;
    if (options.guided && n >= 3 && guided(n, options, out)) return out;
    Dfs dfs{options, out};
    for (std::size_t k = 0; k <= options.max_preemptions; ++k) {
        dfs.bound = k;
        dfs.cut = false;
        if (dfs.visit(TournamentTree(n, options.ops_per_process, options.order), std::nullopt, 0)) {
            out.strategy = "dfs";
            return out;
        }
        if (out.explored >= options.budget) return out;
    }
    out.exhausted = !dfs.cut;
    return out;
}

std::string format_history(const std::vector<OpRecord>& history) {
    std::vector<const OpRecord*> ops;
    for (const OpRecord& op : history) ops.push_back(&op);
    std::stable_sort(ops.begin(), ops.end(), [](auto a, auto b) { return a->start < b->start; });
    std::ostringstream s;
    for (const OpRecord* op : ops) {
        s << 'P' << op->pid << ' ' << to_string(op->kind) << " [" << op->start << ',';
        if (op->finish)
            s << *op->finish << ']';
        else
            s << "...)";
        if (op->ret) s << " -> " << *op->ret;
        s << '\n';
    }
    return s.str();
}

void write_tournament_jsonl(std::ostream& out, const std::vector<NodeAccess>& trace) {
    for (const NodeAccess& na : trace)
        out << "{\"node\":" << na.node << ",\"process\":" << na.process << ','
            << to_jsonl(na.access).substr(1) << '\n';
}

}  // namespace wftas
