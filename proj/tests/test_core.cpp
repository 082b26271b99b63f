#include <doctest.h>

#include "wftas/core.hpp"

using namespace wftas;

namespace {

Access write(Pid pid, RegValue v, std::size_t t = 0) {
    Access a;
    a.t = t;
    a.pid = pid;
    a.action = Action::Write;
    a.reg = pid;
    a.value = v;
    return a;
}

Access read(Pid pid, RegValue observed, std::size_t t = 0) {
    Access a;
    a.t = t;
    a.pid = pid;
    a.action = Action::Read;
    a.reg = 1 - pid;
    a.value = observed;
    return a;
}

}  // namespace

TEST_CASE("registers start at rst") {
    const Registers r = new_registers();
    CHECK(r.r[0] == RegValue::Rst);
    CHECK(r.r[1] == RegValue::Rst);
    CHECK_NOTHROW(apply_access(r, read(0, RegValue::Rst)));
}

TEST_CASE("writes go to the owner's register only") {
    const Registers r = apply_access(new_registers(), write(0, RegValue::Me));
    CHECK(r.r[0] == RegValue::Me);
    CHECK(r.r[1] == RegValue::Rst);

    Access bad = write(1, RegValue::Me);
    bad.reg = 0;
    try {
        apply_access(new_registers(), bad);
        FAIL("foreign write accepted");
    } catch (const TraceError& e) {
        CHECK(e.kind() == TraceError::Kind::OwnershipViolation);
    }
}

TEST_CASE("reads have no side effect and must see the current value") {
    const Registers r = apply_access(new_registers(), write(0, RegValue::Me));
    CHECK(apply_access(r, read(1, RegValue::Me)) == r);
    try {
        apply_access(r, read(1, RegValue::He));
        FAIL("stale read accepted");
    } catch (const TraceError& e) {
        CHECK(e.kind() == TraceError::Kind::StaleRead);
    }

    Access own = read(0, RegValue::Me);
    own.reg = 0;
    CHECK_THROWS_AS(apply_access(r, own), TraceError);
}

TEST_CASE("replay requires increasing step indices") {
    Trace t{write(0, RegValue::Me, 0), read(1, RegValue::Me, 0)};
    try {
        replay(t);
        FAIL("out of order trace accepted");
    } catch (const TraceError& e) {
        CHECK(e.kind() == TraceError::Kind::OutOfOrder);
    }
    t[1].t = 1;
    CHECK(replay(t).r[0] == RegValue::Me);
}

TEST_CASE("names round trip") {
    for (ProcState s : kAllStates) CHECK(parse_proc_state(to_string(s)) == s);
    for (RegValue v : {RegValue::Me, RegValue::He, RegValue::Choose, RegValue::Rst})
        CHECK(parse_reg_value(to_string(v)) == v);
    CHECK(!parse_proc_state("TST0"));
    CHECK(to_string(SystemConfig{{ProcState::Choose, ProcState::Tst1}}) == "(choose,tst1)");
}

TEST_CASE("extract_ops groups by process and sequence number") {
    Access a = write(0, RegValue::Me, 0);
    a.pre = ProcState::Rst;
    a.post = ProcState::Me;
    a.events = {EventKind::STas};
    Access b = read(0, RegValue::Rst, 1);
    b.pre = ProcState::Me;
    b.post = ProcState::Tst0;
    b.events = {EventKind::FTas0};
    Access c = write(0, RegValue::Rst, 2);
    c.op = OpKind::Reset;
    c.op_seq = 1;
    c.pre = ProcState::Tst0;
    c.post = ProcState::Rst;
    c.events = {EventKind::RstOp};
    const auto ops = extract_ops({a, b, c});
    REQUIRE(ops.size() == 2);
    CHECK(ops[0].kind == OpKind::Tas);
    CHECK(ops[0].start == 0);
    CHECK(ops[0].finish == 1u);
    CHECK(ops[0].ret == 0);
    CHECK(ops[0].accesses == 2);
    CHECK(ops[1].kind == OpKind::Reset);
    CHECK(ops[1].start == 2);
    CHECK(ops[1].finish == 2u);
}
