#include <doctest.h>

#include <sstream>

#include "wftas/harness.hpp"
#include "wftas/trace_io.hpp"

using namespace wftas;

TEST_CASE("jsonl line format") {
    Access a;
    a.t = 7;
    a.pid = 1;
    a.op_seq = 2;
    a.op = OpKind::Tas;
    a.action = Action::Read;
    a.reg = 0;
    a.value = RegValue::Choose;
    a.coin = true;
    a.pre = ProcState::Choose;
    a.post = ProcState::ToMe;
    CHECK(to_jsonl(a) ==
          R"({"t":7,"pid":1,"op_seq":2,"op":"tas","action":"r","reg":"R0","value":"choose","coin":true,)"
          R"("pre":"choose","post":"tome","events":[]})");
}

TEST_CASE("round trip of a simulated trace") {
    Workload w;
    w.procs[0].tas_ops = 50;
    w.procs[1].tas_ops = 50;
    RandomAdversary adv(11);
    const Trace t = run(w, adv, 11).trace;
    std::stringstream s;
    write_jsonl(s, t);
    CHECK(read_jsonl(s) == t);
}

TEST_CASE("malformed lines name the line") {
    auto error_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_jsonl(in);
        } catch (const TraceError& e) {
            CHECK(e.kind() == TraceError::Kind::Malformed);
            return std::string(e.what());
        }
        return std::string();
    };
    const std::string good =
        R"({"t":0,"pid":0,"op_seq":0,"op":"tas","action":"w","reg":"R0","value":"me","coin":null,"pre":"rst","post":"me","events":["sTas"]})";
    std::istringstream in(good + "\n\n");
    CHECK(read_jsonl(in).size() == 1);
    CHECK(error_of(good + "\n{").find("line 2") != std::string::npos);
    CHECK(!error_of(R"({"t":0})").empty());
    std::string bad_state = good;
    bad_state.replace(bad_state.find("\"rst\""), 5, "\"RST\"");
    CHECK(!error_of(bad_state).empty());
    std::string bad_event = good;
    bad_event.replace(bad_event.find("sTas"), 4, "tas0");
    CHECK(error_of(bad_event).empty());  // parses; the linearizer rejects occurrence events
}
