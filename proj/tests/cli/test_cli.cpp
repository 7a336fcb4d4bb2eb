// End-to-end checks of the command line binary: exit codes, output shapes,
// budget handling, serialisation round-trips and manifest replay. The binary
// path arrives via the NODALAB_BIN environment variable.

#include <catch2/catch.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nodalab/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* bin = std::getenv("NODALAB_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = binary() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

int count_lines(const std::string& text, const std::string& needle) {
    std::istringstream ss(text);
    std::string line;
    int n = 0;
    while (std::getline(ss, line))
        if (line.find(needle) != std::string::npos) ++n;
    return n;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("nodalab-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string flag() const { return " --out-dir " + path.string(); }
};

std::string find_manifest(const RunResult& r) {
    std::istringstream ss(r.output);
    std::string line;
    while (std::getline(ss, line))
        if (line.rfind("manifest: ", 0) == 0) return line.substr(10);
    return {};
}

} // namespace

TEST_CASE("lattice subcommand", "[cli]") {
    TempDir dir;
    SECTION("E=25 lists 12 points") {
        auto r = run("lattice 25" + dir.flag());
        CHECK(r.exit_code == 0);
        // csv: header + 12 rows shown in the preview
        CHECK(count_lines(r.output, ",") >= 12);
    }
    SECTION("E=3 yields an empty listing with exit 0") {
        auto r = run("lattice 3" + dir.flag());
        CHECK(r.exit_code == 0);
        CHECK(count_lines(r.output, "x,y,angle") == 1);
    }
    SECTION("negative E is a usage error") {
        auto r = run("lattice -1" + dir.flag());
        CHECK(r.exit_code == 1);
    }
    SECTION("E above the supported maximum exits 2") {
        auto r = run("lattice 200000001" + dir.flag());
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("correlations and quasi subcommands", "[cli]") {
    TempDir dir;
    SECTION("odd tuple length returns the zero row") {
        auto r = run("correlations 325 --len 3" + dir.flag());
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("325,3,mitm,0,0,0,0") != std::string::npos);
    }
    SECTION("over-budget enumeration exits 2 and names the estimate") {
        auto r = run("correlations 5525 --len 6 --method exhaustive --budget 1e6" + dir.flag());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("budget exceeded") != std::string::npos);
        CHECK(r.output.find("estimated") != std::string::npos);
    }
    SECTION("quasi E=5 finds sqrt(2)") {
        auto r = run("quasi 5 --len 2" + dir.flag());
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("1.4142135623730951,2,") != std::string::npos);
    }
}

TEST_CASE("nodal-count subcommand", "[cli]") {
    TempDir dir;
    SECTION("stripe has no interior domains") {
        auto r = run("nodal-count --stripe 10 --s 0.4 --center 0.5,0.5" + dir.flag());
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("stripe-m10,") != std::string::npos);
        // domains_inside column is 0
        CHECK(r.output.find(",0,") != std::string::npos);
    }
    SECTION("missing spec file is an error") {
        auto r = run("nodal-count --spec-file /nonexistent.txt --s 0.3" + dir.flag());
        CHECK(r.exit_code == 1);
    }
    SECTION("missing field source is an error") {
        auto r = run("nodal-count --s 0.3" + dir.flag());
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("spec files round-trip through the CLI", "[cli]") {
    TempDir dir;
    auto r = run("spec-dump --E 325 --seed 7" + dir.flag());
    REQUIRE(r.exit_code == 0);
    // locate the artifact
    std::string spec_path;
    for (const auto& entry : fs::directory_iterator(dir.path))
        if (entry.path().string().find("spec-dump-spec-") != std::string::npos)
            spec_path = entry.path().string();
    REQUIRE(!spec_path.empty());
    auto r2 = run("nodal-count --spec-file " + spec_path + " --s 0.25 --center 0.4,0.6" + dir.flag());
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("spec-file,") != std::string::npos);
}

TEST_CASE("manifest replay is byte-identical across thread counts", "[cli]") {
    TempDir dir;
    auto r = run("ns-estimate --measure nu-tilde --R 12 --n 50 --K 8 --seed 11 --threads 1" +
                 dir.flag());
    REQUIRE(r.exit_code == 0);
    std::string manifest = find_manifest(r);
    REQUIRE(!manifest.empty());
    auto replay = run("replay " + manifest + " --threads 3" + dir.flag());
    CHECK(replay.exit_code == 0);
    CHECK(replay.output.find("byte-identical") != std::string::npos);
}

TEST_CASE("csv numbers round-trip at 17 significant digits", "[cli]") {
    TempDir dir;
    auto r = run("nodal-count --stripe 7 --s 0.31 --center 0.5,0.5" + dir.flag());
    REQUIRE(r.exit_code == 0);
    // parse the data row of the produced csv artifact
    std::string csv_path;
    for (const auto& entry : fs::directory_iterator(dir.path))
        if (entry.path().string().find("nodal-report") != std::string::npos)
            csv_path = entry.path().string();
    REQUIRE(!csv_path.empty());
    std::ifstream is(csv_path);
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    // the length column (last) must round-trip exactly
    auto last_comma = row.find_last_of(',');
    std::string len_text = row.substr(last_comma + 1);
    double v = nodalab::parse_double(len_text);
    CHECK(nodalab::format_double(v) == len_text);
}

TEST_CASE("config files mirror flags, flags win", "[cli]") {
    TempDir dir;
    // CLI11 ini convention: subcommand flags live in a named section
    std::ofstream cfg(dir.path / "run.cfg");
    cfg << "[correlations]\nlen=3\n";
    cfg.close();
    auto r = run("correlations 25 --config " + (dir.path / "run.cfg").string() + dir.flag());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("25,3,") != std::string::npos);
    auto r2 = run("correlations 25 --len 2 --config " + (dir.path / "run.cfg").string() + dir.flag());
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("25,2,") != std::string::npos);
}

TEST_CASE("plots are emitted on request and leave numbers alone", "[cli]") {
    TempDir dir;
    auto with = run("nodal-count --checkerboard 6 --s 0.3 --center 0.5,0.5 --plot 1" + dir.flag());
    auto without = run("nodal-count --checkerboard 6 --s 0.3 --center 0.5,0.5" + dir.flag());
    REQUIRE(with.exit_code == 0);
    REQUIRE(without.exit_code == 0);
    bool have_svg = false;
    for (const auto& entry : fs::directory_iterator(dir.path))
        if (entry.path().extension() == ".svg") have_svg = true;
    CHECK(have_svg);
    // the csv data row is identical with and without plotting
    auto row_of = [](const RunResult& r) {
        std::istringstream ss(r.output);
        std::string line, found;
        while (std::getline(ss, line))
            if (line.find("checkerboard-m6,") != std::string::npos) found = line;
        return found;
    };
    CHECK(row_of(with) == row_of(without));
    CHECK(!row_of(with).empty());
}
