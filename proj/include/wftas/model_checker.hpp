#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wftas/automata.hpp"
#include "wftas/core.hpp"
#include "wftas/golden.hpp"
#include "wftas/protocol.hpp"

namespace wftas {

// One scheduling outcome: process `pid` takes its enabled access from `from`.
// Idle processes are invoked first. Coin reads yield two transitions of
// probability 1/2 each.
struct Transition {
    SystemConfig from;
    Pid pid = 0;
    ProcState pre = ProcState::Rst;
    ProcState post = ProcState::Rst;
    std::optional<RegValue> observed;
    std::optional<bool> coin;
    std::vector<EventKind> events;
    SystemConfig to;

    bool halved() const { return coin.has_value(); }
};

std::vector<Transition> transitions_from(const SystemConfig& c, Pid pid,
                                         Variant variant = Variant::Standard);
std::vector<Transition> transitions_from(const SystemConfig& c,
                                         Variant variant = Variant::Standard);

std::set<SystemConfig> reachable_configs(Variant variant = Variant::Standard);

class ModelCheckError : public std::runtime_error {
public:
    enum class Kind { ConfluenceViolation, EmptyRepSet };

    ModelCheckError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

using RepSetMap = std::map<SystemConfig, StateSet>;

// Every canonical FA4 set reachable together with each configuration,
// following all paths from (rst, rst). Sets differ along different paths.
std::map<SystemConfig, std::set<StateSet>> forward_sets(Variant variant = Variant::Standard);

// Removes from `set` every state whose accepted continuations from `c` are
// covered by another member that is not its epsilon ancestor, keeping the
// covering member. See README for the rule.
StateSet reduce_set(const SystemConfig& c, StateSet set, Variant variant = Variant::Standard);

// Forward propagation followed by reduce_set; throws ConfluenceViolation if
// two paths into the same configuration reduce differently and EmptyRepSet
// if a reachable configuration ends up with nothing.
RepSetMap representative_sets(Variant variant = Variant::Standard);

struct InductionFailure {
    Transition edge;
    std::size_t state;  // member of the target set with no predecessor in the source set
};

// Edge-wise induction: every member of the target set is reached from some
// member of the source set through the edge's events and epsilon moves.
std::vector<InductionFailure> check_induction(const RepSetMap& sets,
                                              Variant variant = Variant::Standard);

struct CellMismatch {
    SystemConfig config;
    std::string expected;  // printed letters, or "*"
    std::string computed;  // computed letters, or "*"
};

struct TableReport {
    std::vector<CellMismatch> mismatches;
    std::size_t verified_cells = 0;
    std::size_t verified_unreachable = 0;
    std::vector<std::string> symmetry_failures;

    bool ok() const { return mismatches.empty() && symmetry_failures.empty(); }
};

TableReport verify_against_table(const GoldenTable& table, const RepSetMap& sets,
                                 const LabelMap& labels);

std::vector<LabelObservation> label_observations(const GoldenTable& table, const RepSetMap& sets);

// Whole verification pipeline as run by the `check` command.
struct CheckResult {
    std::set<SystemConfig> reachable;
    bool confluent = true;
    std::string confluence_error;
    RepSetMap sets;
    LabelMap labels;
    // Set when the computed sets admit no labelling; the table is then
    // compared under the labelling of the standard protocol.
    std::string label_error;
    TableReport table;
    GoldenReport golden;
    std::vector<InductionFailure> induction;

    bool ok() const {
        return confluent && label_error.empty() && table.ok() && golden.ok() && induction.empty();
    }
};

CheckResult run_check(const GoldenTable& table, std::string_view table_text,
                      const LabelSpec& spec, Variant variant = Variant::Standard);

}  // namespace wftas
