#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result cli(const std::string& args) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("wftas_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    const fs::path out = dir / "out";
    const int rc = std::system(("\"" WFTAS_CLI_PATH "\" " + args + " > " + out.string() + " 2>&1").c_str());
    std::ifstream in(out);
    std::ostringstream s;
    s << in.rdbuf();
    return {WEXITSTATUS(rc), s.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("wftas_cli_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("check") {
    const Result ok = cli("check");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("98 cells verified, 23 unreachable verified") != std::string::npos);
    CHECK(cli("check --variant choose-rst-to-me").code == 1);
    CHECK(cli("check --table /nonexistent").code == 3);
}

TEST_CASE("expect") {
    const Result r = cli("expect --verify");
    CHECK(r.code == 0);
    CHECK(r.out.find("max 11") != std::string::npos);
    CHECK(cli("expect --tracked 1 --verify").code == 0);
    CHECK(cli("expect --tracked 2").code == 3);
}

TEST_CASE("simulate and lint-trace") {
    const fs::path trace = write_temp("trace.jsonl", "");
    CHECK(cli("simulate --ops 50 --adversary random --seed 4 --trace " + trace.string()).code == 0);
    const Result lint = cli("lint-trace " + trace.string());
    CHECK(lint.code == 0);
    CHECK(lint.out.starts_with("linearizable"));

    std::ifstream in(trace);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    const auto pos = text.find("\"post\":\"tst0\",\"events\":[\"fTas0\"]");
    REQUIRE(pos != std::string::npos);
    std::string flipped = text;
    flipped.replace(pos, 32, "\"post\":\"tst1\",\"events\":[\"fTas1\"]");
    const Result bad = cli("lint-trace " + write_temp("bad.jsonl", flipped).string());
    CHECK(bad.code == 2);
    CHECK(bad.out.starts_with("violation"));

    CHECK(cli("lint-trace " + write_temp("junk.jsonl", "{\"t\":1}\n").string()).code == 3);
    CHECK(cli("simulate --adversary sometimes").code == 3);
    CHECK(cli("frobnicate").code == 3);
}

TEST_CASE("tournament") {
    const Result three = cli("tournament --n 3");
    CHECK(three.code == 0);
    CHECK(three.out.find("not linearizable") != std::string::npos);
    CHECK(cli("tournament --n 2").code == 1);
}

TEST_CASE("dump-fa3") {
    const Result r = cli("dump-fa3");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"epsilon_only\": true") != std::string::npos);
}
