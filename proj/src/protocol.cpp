#include "wftas/protocol.hpp"

#include <algorithm>
#include <string>

namespace wftas {

namespace {

using S = ProcState;
using V = RegValue;

std::string name(ProcState s) { return std::string(to_string(s)); }

bool legal(S pre, S post) {
    switch (pre) {
        case S::Rst: return post == S::Me;
        case S::Tst0: return post == S::Rst;
        case S::Free: return post == S::Me;
        case S::NotMe:
        case S::NotHe: return post == S::Choose;
        case S::ToMe: return post == S::Me;
        case S::ToHe: return post == S::He;
        case S::Me: return post == S::NotMe || post == S::Tst0;
        case S::Choose: return post == S::ToMe || post == S::ToHe;
        case S::He: return post == S::NotHe || post == S::Tst1;
        case S::Tst1: return post == S::Free || post == S::Tst1;
    }
    return false;
}

}  // namespace

RegValue group(ProcState s) {
    switch (s) {
        case S::Rst: return V::Rst;
        case S::Tst0:
        case S::NotMe:
        case S::Me: return V::Me;
        case S::ToMe:
        case S::Choose:
        case S::ToHe: return V::Choose;
        case S::He:
        case S::NotHe:
        case S::Tst1:
        case S::Free: return V::He;
    }
    return V::Rst;
}

bool is_idle(ProcState s) { return s == S::Rst || s == S::Tst0 || s == S::Tst1; }

OpKind invoked_op(ProcState idle) { return idle == S::Tst0 ? OpKind::Reset : OpKind::Tas; }

EnabledAccess enabled_access(ProcState s) {
    switch (s) {
        case S::Rst:
        case S::ToMe:
        case S::Free: return {Action::Write, V::Me};
        case S::Tst0: return {Action::Write, V::Rst};
        case S::NotMe:
        case S::NotHe: return {Action::Write, V::Choose};
        case S::ToHe: return {Action::Write, V::He};
        case S::Me:
        case S::Choose:
        case S::He:
        case S::Tst1: return {Action::Read, V::Rst};
    }
    return {Action::Read, V::Rst};
}

bool needs_coin(ProcState s, RegValue observed) {
    return s == S::Choose && observed == V::Choose;
}

ProcState step(ProcState s, std::optional<RegValue> observed, std::optional<bool> coin,
               Variant variant) {
    const EnabledAccess acc = enabled_access(s);
    if (acc.action == Action::Write) {
        if (observed)
            throw ProtocolError(ProtocolError::Kind::MissingObservation,
                                "write from " + name(s) + " takes no observation");
        if (coin) throw ProtocolError(ProtocolError::Kind::SpuriousCoin, "coin on a write");
        switch (s) {
            case S::Rst:
            case S::ToMe:
            case S::Free: return S::Me;
            case S::Tst0: return S::Rst;
            case S::NotMe:
            case S::NotHe: return S::Choose;
            case S::ToHe: return S::He;
            default: break;
        }
    }
    if (!observed)
        throw ProtocolError(ProtocolError::Kind::MissingObservation,
                            "read from " + name(s) + " needs an observed value");
    const V o = *observed;
    if (needs_coin(s, o) && !coin)
        throw ProtocolError(ProtocolError::Kind::MissingCoin, "CHOOSE read choose without a coin");
    if (!needs_coin(s, o) && coin)
        throw ProtocolError(ProtocolError::Kind::SpuriousCoin,
                            "coin supplied for " + name(s) + " reading " + std::string(to_string(o)));
    switch (s) {
        case S::Me: return o == V::Me ? S::NotMe : S::Tst0;
        case S::He: return o == V::He ? S::NotHe : S::Tst1;
        case S::Tst1: return o == V::Rst ? S::Free : S::Tst1;
        case S::Choose:
            switch (o) {
                case V::He: return S::ToMe;
                case V::Me: return S::ToHe;
                case V::Rst: return variant == Variant::ChooseRstToMe ? S::ToMe : S::ToHe;
                case V::Choose: return *coin ? S::ToMe : S::ToHe;
            }
            break;
        default: break;
    }
    throw ProtocolError(ProtocolError::Kind::IllegalTransition, "no step from " + name(s));
}

std::vector<EventKind> classify(ProcState pre, ProcState post) {
    if (!legal(pre, post))
        throw ProtocolError(ProtocolError::Kind::IllegalTransition,
                            name(pre) + " -> " + name(post) + " is not a chart transition");
    if (pre == S::Rst || (pre == S::Tst1 && post == S::Free)) return {EventKind::STas};
    if (pre == S::Tst1) return {EventKind::STas, EventKind::FTas1};
    if (pre == S::Me && post == S::Tst0) return {EventKind::FTas0};
    if (pre == S::He && post == S::Tst1) return {EventKind::FTas1};
    if (pre == S::Tst0) return {EventKind::RstOp};
    return {};
}

std::optional<int> returns_value(ProcState post) {
    if (post == S::Tst0) return 0;
    if (post == S::Tst1) return 1;
    return std::nullopt;
}

bool finishes_op(const std::vector<EventKind>& events) {
    return std::any_of(events.begin(), events.end(), [](EventKind e) {
        return e == EventKind::FTas0 || e == EventKind::FTas1 || e == EventKind::RstOp;
    });
}

}  // namespace wftas
