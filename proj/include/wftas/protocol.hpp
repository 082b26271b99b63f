#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "wftas/core.hpp"

namespace wftas {

// Standard is the published chart. ChooseRstToMe sends CHOOSE reading rst to
// TOME instead of TOHE; it exists only to exercise the verification pipeline.
enum class Variant { Standard, ChooseRstToMe };

struct EnabledAccess {
    Action action;
    RegValue value;  // meaningful for writes only
};

class ProtocolError : public std::logic_error {
public:
    enum class Kind { MissingObservation, MissingCoin, SpuriousCoin, IllegalTransition };

    ProtocolError(Kind kind, const std::string& what) : std::logic_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

RegValue group(ProcState s);
bool is_idle(ProcState s);

// The operation a process invokes when scheduled in an idle state.
OpKind invoked_op(ProcState idle);

EnabledAccess enabled_access(ProcState s);

// True when the read from s observing `observed` needs a coin.
bool needs_coin(ProcState s, RegValue observed);

ProcState step(ProcState s, std::optional<RegValue> observed, std::optional<bool> coin,
               Variant variant = Variant::Standard);

std::vector<EventKind> classify(ProcState pre, ProcState post);

std::optional<int> returns_value(ProcState post);

bool finishes_op(const std::vector<EventKind>& events);

}  // namespace wftas
