#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wftas/core.hpp"
#include "wftas/linearizer.hpp"

namespace wftas {

// With LeafToRoot a process can reach a node whose side is still held by
// the process descending above it; step() throws NotOwner in that case.
enum class ResetOrder { RootToLeaf, LeafToRoot };

// One access at one arbitration node. `access.pid` is the role (0 = from
// the left child, 1 = from the right); `process` is the contender.
struct NodeAccess {
    std::size_t node = 0;
    Pid process = 0;
    Access access;
};

class NotOwner : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Complete binary tree of two-process objects. Nodes use heap numbering:
// the root is 1 and node x has children 2x and 2x+1. Process i starts at
// leaf position i; positions past n are absent contenders.
class TournamentTree {
public:
    struct Hop {
        std::size_t node;
        Pid role;
    };

    explicit TournamentTree(std::size_t n, std::size_t ops_per_process = 1,
                            ResetOrder order = ResetOrder::RootToLeaf);

    std::size_t processes() const { return n_; }
    std::size_t depth() const { return depth_; }
    std::size_t node_count() const { return nodes_.size() - 1; }
    const std::vector<Hop>& path(Pid p) const { return paths_[p]; }

    // Processes that still have work: tas operations left, or a 0 to give back.
    std::vector<Pid> ready() const;
    bool all_done() const;
    bool in_operation(Pid p) const { return procs_[p].op.has_value(); }
    // Number of nodes on p's path that p currently holds.
    std::size_t held(Pid p) const { return procs_[p].held; }
    bool holds_zero(Pid p) const { return procs_[p].held == depth_; }

    // True when p's next access is a CHOOSE read that will flip a coin.
    bool next_needs_coin(Pid p) const;

    // Executes one node-level access of p. `coin` must be given exactly when
    // next_needs_coin(p) holds.
    void step(Pid p, std::optional<bool> coin = std::nullopt);

    // Runs p alone until its current n-process operation completes.
    void finish_operation(Pid p, std::mt19937_64& coins);

    const std::vector<NodeAccess>& trace() const { return trace_; }
    const std::vector<OpRecord>& history() const { return history_; }
    Trace node_trace(std::size_t node) const;
    std::size_t now() const { return clock_; }

private:
    struct Node {
        std::array<ProcState, 2> role{ProcState::Rst, ProcState::Rst};
        std::array<std::size_t, 2> seq{0, 0};
        std::array<std::optional<OpKind>, 2> open;
        Registers regs;
    };
    struct Proc {
        std::optional<std::size_t> op;  // index into history_
        std::size_t level = 0;          // ascending: next hop to contend at
        std::vector<std::size_t> to_reset;  // descending: hops still to reset
        std::size_t held = 0;           // hops won and not yet reset
        std::size_t tas_left = 0;
        bool descending = false;
        std::optional<int> result;
    };

    void begin_operation(Pid p);
    void node_access(Pid p, const Hop& hop, std::optional<bool> coin);
    void finish_n_op(Pid p, std::size_t t);
    std::vector<std::size_t> reset_plan(std::size_t count) const;

    std::size_t n_;
    std::size_t depth_ = 0;
    ResetOrder order_;
    std::vector<Node> nodes_;
    std::vector<std::vector<Hop>> paths_;
    std::vector<Proc> procs_;
    std::vector<NodeAccess> trace_;
    std::vector<OpRecord> history_;
    std::size_t clock_ = 0;
};

struct ViolationSearch {
    bool found = false;
    bool exhausted = false;  // every schedule within the preemption bound was tried
    std::string strategy;    // "guided" or "dfs"
    std::size_t explored = 0;
    std::vector<NodeAccess> trace;
    std::vector<OpRecord> history;
    NProcessVerdict verdict;
    std::vector<std::pair<std::size_t, bool>> node_verdicts;  // node -> linearizable
};

struct SearchOptions {
    std::size_t budget = 2'000'000;  // scheduled steps across the whole search
    std::size_t max_preemptions = 3;
    std::size_t ops_per_process = 1;
    ResetOrder order = ResetOrder::RootToLeaf;
    std::uint64_t seed = 1;
    bool guided = true;  // try the losing-descent pattern before the exhaustive search
};

// Looks for a schedule whose n-process history is not linearizable while
// every node's own history is. Tries the losing-descent pattern first, then
// a preemption-bounded depth-first search over schedules and coins.
ViolationSearch find_violation(std::size_t n, const SearchOptions& options = {});

// "P0 tas [3,25] -> 1" per line, in start order.
std::string format_history(const std::vector<OpRecord>& history);
void write_tournament_jsonl(std::ostream& out, const std::vector<NodeAccess>& trace);

}  // namespace wftas
