#include <doctest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "wftas/golden.hpp"
#include "wftas/model_checker.hpp"

using namespace wftas;

namespace {

std::string data_file(const std::string& name) {
    std::ifstream in(std::string(WFTAS_DATA_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("embedded copies match the data files") {
    CHECK(std::string(embedded_golden_table()) == data_file("golden_table.txt"));
    CHECK(std::string(embedded_label_spec()) == data_file("fa3_labels.txt"));
}

TEST_CASE("shipped table is well formed") {
    const std::string text(embedded_golden_table());
    const GoldenReport r = validate_goldens(text);
    CHECK(r.ok());
    for (const auto& e : r.errors) MESSAGE(e);

    // Count cells with a regex over the raw text, independent of the parser.
    const std::regex cell(R"((^|\s)(\*|[a-t]+[0-9]+)(?=\s|$))");
    std::size_t stars = 0, filled = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#' || line.starts_with(' ')) continue;
        const auto body = line.begin() + static_cast<std::ptrdiff_t>(line.find(' '));
        for (auto it = std::sregex_iterator(body, line.end(), cell); it != std::sregex_iterator(); ++it)
            ((*it)[2] == "*" ? stars : filled)++;
    }
    CHECK(filled == 98);
    CHECK(stars == 23);

    const GoldenTable t = parse_golden_table(text);
    CHECK(t.reachable_count() == 98);
    using S = ProcState;
    CHECK(t.at({{S::Rst, S::Rst}})->letters == "d");
    CHECK(t.at({{S::Rst, S::Rst}})->value == 10);
    CHECK(t.at({{S::Me, S::Me}})->letters == "imoq");
    CHECK(t.at({{S::He, S::Tst1}})->value == 5);
    CHECK(!t.at({{S::Tst0, S::Tst0}}));
}

TEST_CASE("structural errors are all reported") {
    const std::string text(embedded_golden_table());
    CHECK(!validate_goldens(replace_once(text, "imoq9", "imoz9")).ok());
    CHECK(!validate_goldens(replace_once(text, "d11", "d12")).ok());
    CHECK(!validate_goldens(replace_once(text, "\nfree ", "\nfrees ")).ok());
    CHECK(!validate_goldens(replace_once(text, "gp10    jn10    *", "gp10    jn10")).ok());
    CHECK(!validate_goldens("").ok());

    const std::string twice = replace_once(replace_once(text, "d11", "d0"), "s1 ", "q ");
    try {
        parse_golden_table(twice);
        FAIL("bad table parsed");
    } catch (const GoldenError& e) {
        CHECK(std::string(e.what()).find("tst1") != std::string::npos);
        CHECK(std::string(e.what()).find("tst0") != std::string::npos);
    }
}

TEST_CASE("letters mirror across the diagonal") {
    const std::string text(embedded_golden_table());
    const GoldenTable table = parse_golden_table(text);
    const LabelMap labels = assign_labels(label_observations(table, representative_sets()),
                                          parse_label_spec(embedded_label_spec()));
    CHECK(validate_goldens(text, &labels).ok());
    // (notme,he) = o4 mirrors (he,notme) = i1's letters; breaking one side
    // must be caught.
    CHECK(!validate_goldens(replace_once(text, "o4 ", "p4 "), &labels).ok());
}
