#include "wftas/golden.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace wftas {

namespace {

struct Parsed {
    GoldenTable table;
    std::vector<std::string> errors;
};

std::optional<GoldenCell> parse_cell(const std::string& tok, std::string& err) {
    if (tok == "*") return std::nullopt;
    std::size_t split = 0;
    while (split < tok.size() && std::islower(static_cast<unsigned char>(tok[split]))) ++split;
    GoldenCell cell;
    cell.letters = tok.substr(0, split);
    const std::string digits = tok.substr(split);
    if (cell.letters.empty() || digits.empty() ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        err = "malformed cell '" + tok + "'";
        return std::nullopt;
    }
    for (char c : cell.letters)
        if (c < 'a' || c > 't') err = "letter '" + std::string(1, c) + "' outside a..t in '" + tok + "'";
    cell.value = std::stoi(digits);
    if (cell.value < 1 || cell.value > 11)
        err = "value " + digits + " outside [1, 11] in '" + tok + "'";
    return cell;
}

Parsed parse(std::string_view text) {
    Parsed out;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header_seen = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (toks.size() != kNumStates) {
                out.errors.push_back("header has " + std::to_string(toks.size()) + " labels, expected 11");
                continue;
            }
            for (std::size_t i = 0; i < kNumStates; ++i)
                if (toks[i] != to_string(kAllStates[i]))
                    out.errors.push_back("column " + std::to_string(i) + " is '" + toks[i] +
                                         "', expected '" + std::string(to_string(kAllStates[i])) + "'");
            continue;
        }
        if (row >= kNumStates) {
            out.errors.push_back("extra row '" + toks[0] + "'");
            continue;
        }
        if (toks[0] != to_string(kAllStates[row]))
            out.errors.push_back("row " + std::to_string(row) + " is '" + toks[0] + "', expected '" +
                                 std::string(to_string(kAllStates[row])) + "'");
        if (toks.size() != kNumStates + 1) {
            out.errors.push_back("row '" + toks[0] + "' has " + std::to_string(toks.size() - 1) +
                                 " cells, expected 11");
        } else {
            for (std::size_t c = 0; c < kNumStates; ++c) {
                std::string err;
                out.table.cells[row][c] = parse_cell(toks[c + 1], err);
                if (!err.empty()) out.errors.push_back("row '" + toks[0] + "': " + err);
            }
        }
        ++row;
    }
    if (!header_seen) out.errors.push_back("missing header line");
    if (row < kNumStates) out.errors.push_back("only " + std::to_string(row) + " rows, expected 11");
    return out;
}

}  // namespace

std::size_t GoldenTable::reachable_count() const {
    std::size_t n = 0;
    for (const auto& r : cells)
        for (const auto& c : r) n += c.has_value();
    return n;
}

GoldenReport validate_goldens(std::string_view text, const LabelMap* labels) {
    Parsed p = parse(text);
    GoldenReport report{p.errors};
    if (!report.ok() || !labels) return report;
    const Fa3& fa = fa3();
    for (std::size_t a = 0; a < kNumStates; ++a)
        for (std::size_t b = a; b < kNumStates; ++b) {
            const auto& x = p.table.cells[a][b];
            const auto& y = p.table.cells[b][a];
            const std::string where = "(" + std::string(to_string(kAllStates[a])) + "," +
                                      std::string(to_string(kAllStates[b])) + ")";
            if (x.has_value() != y.has_value()) {
                report.errors.push_back("reachability of " + where + " is not mirrored");
                continue;
            }
            if (!x) continue;
            try {
                if (fa.mirror_set(labels->parse(x->letters)) != labels->parse(y->letters))
                    report.errors.push_back("letters at " + where + " do not mirror: " + x->letters +
                                            " vs " + y->letters);
            } catch (const LabelError& e) {
                report.errors.push_back(where + ": " + e.what());
            }
        }
    return report;
}

GoldenTable parse_golden_table(std::string_view text) {
    Parsed p = parse(text);
    if (!p.errors.empty()) {
        std::string msg = "golden table:";
        for (const auto& e : p.errors) msg += "\n  " + e;
        throw GoldenError(msg);
    }
    return p.table;
}

}  // namespace wftas
