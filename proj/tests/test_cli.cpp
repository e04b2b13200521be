#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "cbir/cli.hpp"
#include "fixtures.hpp"

using namespace cbir;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string mask_timing(const std::string& text) {
    return std::regex_replace(text, std::regex("elapsed_sec=[0-9.]+"), "elapsed_sec=<t>");
}

// Set CBIR_UPDATE_GOLDEN=1 to rewrite the expected files.
void check_golden(const std::string& name, const std::string& actual) {
    const auto path = std::filesystem::path(CBIR_SOURCE_DIR) / "tests" / "golden" / name;
    if (std::getenv("CBIR_UPDATE_GOLDEN")) {
        std::ofstream(path, std::ios::binary) << actual;
        return;
    }
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
    std::stringstream expected;
    expected << in.rdbuf();
    CHECK(actual == expected.str());
}

class DeskIndexFile {
public:
    DeskIndexFile() { save_index(fixtures::desk_index(), path()); }
    std::string path() const { return (dir_ / "desk.cbir").string(); }

private:
    fixtures::TempDir dir_;
};

std::string corpus(const std::string& rel) { return (fixtures::desk_corpus() / rel).string(); }

}  // namespace

TEST_CASE("cli golden outputs") {
    DeskIndexFile idx;
    const auto inspect = cli({"inspect", "--index", idx.path()});
    CHECK(inspect.code == 0);
    CHECK(inspect.err.empty());
    check_golden("inspect.txt", inspect.out);

    const auto cls = cli({"classify", corpus("flower/flower_03.png"), "--index", idx.path()});
    CHECK(cls.code == 0);
    CHECK(cls.err.empty());
    check_golden("classify.txt", cls.out);

    for (const char* t : {"hist", "eigen", "match"}) {
        const auto q = cli({"query", corpus("vehicle/vehicle_02.png"), "--index", idx.path(), "--technique", t,
                            "--top-k", "5", "--category", "vehicle"});
        CHECK(q.code == 0);
        CHECK(q.err.empty());
        check_golden(std::string("query_") + t + ".txt", mask_timing(q.out));
    }
}

TEST_CASE("cli self retrieval shows distance zero") {
    DeskIndexFile idx;
    const auto q = cli({"query", corpus("face/face_05.png"), "--index", idx.path(), "--technique", "eigen",
                        "--category", "auto"});
    REQUIRE(q.code == 0);
    std::istringstream lines(q.out);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header.rfind("technique=eigen category=", 0) == 0);
    CHECK(first == "1\t13\t0.000000\t-\tface/face_05.png");
}

TEST_CASE("cli index and bench") {
    fixtures::TempDir dir;
    fixtures::write_corpus(dir / "corpus", 2, 2, 48);
    const auto idx = (dir / "i.cbir").string();
    const auto built = cli({"index", (dir / "corpus").string(), "--out", idx, "--bins", "4,2,2"});
    CHECK(built.code == 0);
    CHECK(built.out == "indexed 4 images in 2 categories -> " + idx + "\n");

    const auto csv = (dir / "r.csv").string();
    const auto b = cli({"bench", "--index", idx, "--queries", (dir / "corpus").string(), "--format", "csv", "--out",
                        csv, "--techniques", "eigen,hist"});
    CHECK(b.code == 0);
    CHECK(b.out.empty());
    std::ifstream in(csv);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 1 + 8 + 2);

    const auto md = cli({"bench", "--index", idx, "--queries", (dir / "corpus").string()});
    CHECK(md.code == 0);
    CHECK(md.out.find("| Match Point (sec) | Histogram (sec) | Eigen values (sec) |") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    DeskIndexFile idx;
    fixtures::TempDir dir;
    const auto junk = (dir / "junk.cbir").string();
    cbir::synth::write_file(junk, std::vector<std::uint8_t>{'n', 'o', 'p', 'e', 0, 0, 0, 0});
    const auto img = corpus("animal/animal_00.png");

    struct Case {
        std::vector<std::string> args;
        int code;
    };
    const std::vector<Case> cases{
        {{}, 1},
        {{"frobnicate"}, 1},
        {{"query", img, "--index", idx.path()}, 1},
        {{"query", img, "--index", idx.path(), "--technique", "sift"}, 1},
        {{"query", img, "--index", idx.path(), "--technique", "hist", "--top-k", "0"}, 1},
        {{"query", img, "--index", idx.path(), "--technique", "hist", "--bins", "4,4,4"}, 1},
        {{"bench", "--index", idx.path(), "--queries", img, "--format", "xml"}, 1},
        {{"index", "/nonexistent"}, 1},
        {{"query", img, "--index", junk, "--technique", "hist"}, 2},
        {{"query", img, "--index", (dir / "missing.cbir").string(), "--technique", "hist"}, 2},
        {{"query", corpus("nope.png"), "--index", idx.path(), "--technique", "hist"}, 2},
        {{"query", img, "--index", idx.path(), "--technique", "hist", "--category", "nosuch"}, 2},
        {{"classify", junk, "--index", idx.path()}, 2},
        {{"index", (dir / "empty").string(), "--out", (dir / "x.cbir").string()}, 2},
        {{"query", img, "--index", idx.path(), "--technique", "match", "--category", "all"}, 0},
        {{"query", img, "--index", idx.path(), "--technique", "hist", "--category", "none"}, 0},
        {{"--help"}, 0},
    };
    std::filesystem::create_directories(dir / "empty");
    for (const auto& c : cases) {
        std::string joined;
        for (const auto& a : c.args) joined += a + " ";
        CAPTURE(joined);
        const auto r = cli(c.args);
        CHECK(r.code == c.code);
        if (c.code != 0) {
            CHECK(r.out.empty());
            CHECK_FALSE(r.err.empty());
        }
    }
    const auto bad = cli({"query", img, "--index", junk, "--technique", "hist"});
    CHECK(bad.err.find("BadMagic") != std::string::npos);
    const auto unknown = cli({"frobnicate"});
    CHECK(unknown.err.find("Usage") != std::string::npos);
}

TEST_CASE("malformed CBIR_THREADS is a usage error") {
    DeskIndexFile idx;
    setenv("CBIR_THREADS", "lots", 1);
    const auto r = cli({"inspect", "--index", idx.path()});
    unsetenv("CBIR_THREADS");
    CHECK(r.code == 1);
    CHECK(r.out.empty());
}
