#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wftas/core.hpp"
#include "wftas/expectation.hpp"
#include "wftas/protocol.hpp"

namespace wftas {

// What an adaptive adversary sees before choosing the next process. Coins
// of the step being scheduled are not drawn yet.
struct SchedulerView {
    std::size_t step = 0;
    std::span<const Pid> ready;
    const Trace* history = nullptr;
    SystemConfig config;
};

class Adversary {
public:
    virtual ~Adversary() = default;
    virtual Pid pick(const SchedulerView& view) = 0;
    virtual std::string name() const = 0;
};

class AdversaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ScriptExhausted : public AdversaryError {
public:
    using AdversaryError::AdversaryError;
};

class RoundRobinAdversary : public Adversary {
public:
    Pid pick(const SchedulerView& view) override;
    std::string name() const override { return "round-robin"; }

private:
    std::optional<Pid> last_;
};

// Uniform choice among ready processes, std::mt19937_64 seeded with `seed`.
class RandomAdversary : public Adversary {
public:
    explicit RandomAdversary(std::uint64_t seed) : rng_(seed) {}
    Pid pick(const SchedulerView& view) override;
    std::string name() const override { return "random"; }

private:
    std::mt19937_64 rng_;
};

class ScriptAdversary : public Adversary {
public:
    explicit ScriptAdversary(std::vector<Pid> script) : script_(std::move(script)) {}
    Pid pick(const SchedulerView& view) override;
    std::string name() const override { return "script"; }

private:
    std::vector<Pid> script_;
    std::size_t next_ = 0;
};

// Follows a configuration-indexed policy from the expectation solver.
class OptimalAdversary : public Adversary {
public:
    explicit OptimalAdversary(AdversaryPolicy policy) : policy_(std::move(policy)) {}
    Pid pick(const SchedulerView& view) override;
    std::string name() const override { return "optimal"; }

private:
    AdversaryPolicy policy_;
};

enum class LossPolicy { Retry, Stop };

struct ProcessLoad {
    // Number of tas operations; nullopt keeps the process busy for as long
    // as the run lasts. Every won tas is followed by a reset.
    std::optional<std::size_t> tas_ops = 0;
    LossPolicy on_loss = LossPolicy::Retry;
};

struct Workload {
    std::array<ProcessLoad, 2> procs;
    // Start configuration; registers follow from it. Traces of runs with a
    // non-initial start do not replay from the initial registers.
    std::optional<SystemConfig> start;
};

struct RunStats {
    std::size_t tas_ops = 0;
    std::size_t reset_ops = 0;
    double tas_mean = 0;
    std::size_t tas_max = 0;
    double reset_mean = 0;
    std::size_t reset_max = 0;
    std::map<std::size_t, std::size_t> choose_histogram;  // CHOOSE visits per tas -> count
    std::size_t choose_visits = 0;   // visits in finished tas operations
    std::size_t choose_returns = 0;  // of which were followed by another visit
    double loop_frequency = 0;
    std::array<std::size_t, 2> returns{0, 0};
};

struct RunResult {
    Trace trace;
    std::vector<OpRecord> ops;
    RunStats stats;
    bool truncated = false;
};

// Coins come from std::mt19937_64 seeded with `seed`; a coin is the top
// bit of one draw.
RunResult run(const Workload& workload, Adversary& adversary, std::uint64_t seed,
              std::size_t max_steps = 1'000'000, Variant variant = Variant::Standard);

RunStats compute_stats(const std::vector<OpRecord>& ops);

// Columns: op_index, pid, kind, accesses, ret, choose_visits.
void write_stats_csv(std::ostream& out, const std::vector<OpRecord>& ops);

// Steps at which a process obtained 0 while the other still held it.
std::vector<std::size_t> exclusivity_violations(const Trace& trace);

}  // namespace wftas
