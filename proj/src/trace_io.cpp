#include "wftas/trace_io.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace wftas {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& why) {
    throw TraceError(TraceError::Kind::Malformed, why);
}

template <typename T>
T parse_enum(const nlohmann::json& j, const char* field, std::optional<T> (*parse)(std::string_view)) {
    if (!j.contains(field) || !j[field].is_string()) malformed(std::string("missing string field '") + field + "'");
    auto v = parse(j[field].get<std::string>());
    if (!v) malformed(std::string("bad value for '") + field + "': " + j[field].get<std::string>());
    return *v;
}

std::size_t parse_index(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number_unsigned())
        malformed(std::string("missing non-negative integer field '") + field + "'");
    return j[field].get<std::size_t>();
}

}  // namespace

std::string to_jsonl(const Access& a) {
    ordered_json j;
    j["t"] = a.t;
    j["pid"] = a.pid;
    j["op_seq"] = a.op_seq;
    j["op"] = to_string(a.op);
    j["action"] = a.action == Action::Read ? "r" : "w";
    j["reg"] = a.reg == 0 ? "R0" : "R1";
    j["value"] = to_string(a.value);
    j["coin"] = a.coin ? ordered_json(*a.coin) : ordered_json(nullptr);
    j["pre"] = to_string(a.pre);
    j["post"] = to_string(a.post);
    j["events"] = ordered_json::array();
    for (EventKind e : a.events) j["events"].push_back(to_string(e));
    return j.dump();
}

void write_jsonl(std::ostream& out, const Trace& trace) {
    for (const Access& a : trace) out << to_jsonl(a) << '\n';
}

Access parse_jsonl_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) malformed("line is not a JSON object");
    Access a;
    a.t = parse_index(j, "t");
    a.pid = static_cast<Pid>(parse_index(j, "pid"));
    a.op_seq = parse_index(j, "op_seq");
    const std::string op = j.value("op", "");
    if (op != "tas" && op != "reset") malformed("bad value for 'op'");
    a.op = op == "tas" ? OpKind::Tas : OpKind::Reset;
    const std::string action = j.value("action", "");
    if (action != "r" && action != "w") malformed("bad value for 'action'");
    a.action = action == "r" ? Action::Read : Action::Write;
    const std::string reg = j.value("reg", "");
    if (reg != "R0" && reg != "R1") malformed("bad value for 'reg'");
    a.reg = reg == "R0" ? 0 : 1;
    a.value = parse_enum<RegValue>(j, "value", parse_reg_value);
    if (!j.contains("coin")) malformed("missing field 'coin'");
    if (j["coin"].is_boolean()) {
        a.coin = j["coin"].get<bool>();
    } else if (!j["coin"].is_null()) {
        malformed("bad value for 'coin'");
    }
    a.pre = parse_enum<ProcState>(j, "pre", parse_proc_state);
    a.post = parse_enum<ProcState>(j, "post", parse_proc_state);
    if (!j.contains("events") || !j["events"].is_array()) malformed("missing array field 'events'");
    for (const auto& e : j["events"]) {
        if (!e.is_string()) malformed("event is not a string");
        auto k = parse_event_kind(e.get<std::string>());
        if (!k) malformed("unknown event " + e.get<std::string>());
        a.events.push_back(*k);
    }
    return a;
}

Trace read_jsonl(std::istream& in) {
    Trace trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            trace.push_back(parse_jsonl_line(line));
        } catch (const TraceError& e) {
            throw TraceError(e.kind(), "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return trace;
}

}  // namespace wftas
