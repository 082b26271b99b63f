#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wftas/automata.hpp"
#include "wftas/core.hpp"

namespace wftas {

struct GoldenCell {
    std::string letters;
    int value = 0;  // worst-case expected accesses, tracked process = row process (P0)
};

// Rows are P0 states, columns P1 states, both in chart order.
struct GoldenTable {
    std::array<std::array<std::optional<GoldenCell>, kNumStates>, kNumStates> cells;

    const std::optional<GoldenCell>& at(const SystemConfig& c) const {
        return cells[index_of(c.s[0])][index_of(c.s[1])];
    }
    std::size_t reachable_count() const;
};

class GoldenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GoldenReport {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

// Structural checks: 11x11 in chart order, letters a..t, values in [1, 11].
// With labels, also checks letter mirroring across the diagonal.
GoldenReport validate_goldens(std::string_view text, const LabelMap* labels = nullptr);

// Throws GoldenError listing every structural problem.
GoldenTable parse_golden_table(std::string_view text);

std::string_view embedded_golden_table();
std::string_view embedded_label_spec();

}  // namespace wftas
