#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "skewcubes/json_io.hpp"

using namespace skewcubes;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    static int counter = 0;
    fs::path out = fs::temp_directory_path() / ("skewcubes_cli_out_" + std::to_string(counter++) + ".txt");
    std::string cmd = std::string(SKEWCUBES_BIN) + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    fs::remove(out);
    return r;
}

fs::path write_temp(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream o(p);
    o << text;
    return p;
}

const char* kValidTuple =
    R"({"m":1,"group":"Λ","cubes":[{"v":[-0.5],"g":[[0.25]]},{"v":[0.5],"g":[[0.25]]}]})";
const char* kOverlapTuple =
    R"({"m":1,"group":"Λ","cubes":[{"v":[0.0],"g":[[0.5]]},{"v":[0.0],"g":[[0.5]]}]})";

}  // namespace

TEST_CASE("validate: exit codes") {
    fs::path good = write_temp("cli_good.json", kValidTuple);
    fs::path bad = write_temp("cli_bad.json", kOverlapTuple);
    fs::path broken = write_temp("cli_broken.json", "{not json");

    RunResult ok = run("validate " + good.string());
    CHECK(ok.exit_code == 0);
    Json rep = Json::parse(ok.stdout_text);
    CHECK(rep.at("valid").get<bool>());

    RunResult overlap = run("validate " + bad.string());
    CHECK(overlap.exit_code == 1);
    Json rep2 = Json::parse(overlap.stdout_text);
    CHECK_FALSE(rep2.at("valid").get<bool>());
    CHECK(rep2.at("pairs")[0].at("margin").get<double>() < 0.0);

    RunResult parse = run("validate " + broken.string());
    CHECK(parse.exit_code == 2);

    RunResult missing = run("validate /nonexistent/file.json");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("check-operad: pass, deterministic reports, tolerance semantics") {
    RunResult a = run("check-operad --seed 42 --trials 25 --dim 1 --dim 2");
    CHECK(a.exit_code == 0);
    Json rep = Json::parse(a.stdout_text);
    CHECK(rep.at("pass").get<bool>());
    CHECK(rep.at("seed").get<std::uint64_t>() == 42);

    RunResult b = run("check-operad --seed 42 --trials 25 --dim 1 --dim 2");
    CHECK(b.stdout_text == a.stdout_text);  // byte identical

    RunResult c = run("check-operad --seed 43 --trials 25 --dim 1 --dim 2");
    CHECK(c.stdout_text != a.stdout_text);

    // an absurd tolerance demonstrates the floating point floor
    RunResult tight = run("check-operad --seed 42 --trials 25 --dim 2 --tol 1e-18");
    CHECK(tight.exit_code == 1);

    RunResult single = run("check-operad --seed 5 --trials 1 --dim 1 --group dilation");
    CHECK(single.exit_code == 0);
    CHECK(Json::parse(single.stdout_text).at("combos").size() == 1);
}

TEST_CASE("retract: traces, stages, and the opt-in coefficient") {
    // equidiameter stage from an uneven tuple
    fs::path uneven = write_temp(
        "cli_uneven.json",
        R"({"m":1,"group":"Λ","cubes":[{"v":[-0.55],"g":[[0.4]]},{"v":[0.55],"g":[[0.2]]}]})");
    RunResult equi = run("retract " + uneven.string() + " --stage equi --samples 5");
    CHECK(equi.exit_code == 0);
    Json rep = Json::parse(equi.stdout_text);
    CHECK(rep.at("frames_valid").get<bool>());
    CHECK(rep.at("endpoint_equidiameter").get<bool>());
    CHECK(rep.at("trace").at("samples").size() == 5);

    // two samples means endpoints only
    RunResult two = run("retract " + uneven.string() + " --stage equi --samples 2");
    CHECK(Json::parse(two.stdout_text).at("trace").at("samples").size() == 2);

    // csv output carries one row per sample and cube
    RunResult csv = run("retract " + uneven.string() + " --stage equi --samples 3 --format csv");
    CHECK(csv.exit_code == 0);
    int rows = 0;
    for (char ch : csv.stdout_text)
        if (ch == '\n') ++rows;
    CHECK(rows == 1 + 3 * 2);

    // freewheeling stage requires an equidiameter input
    RunResult reject = run("retract " + uneven.string() + " --stage free");
    CHECK(reject.exit_code == 1);

    // a crowded equidiameter pair: the default coefficient shrinks it into
    // the ball criterion, the literal root-two coefficient does not
    fs::path crowded = write_temp(
        "cli_crowded.json",
        R"({"m":2,"group":"Λ","cubes":[{"v":[-0.3,0.0],"g":[[0.28,0],[0,0.28]]},
            {"v":[0.3,0.0],"g":[[0.28,0],[0,0.28]]}]})");
    RunResult good = run("retract " + crowded.string() + " --stage free --samples 5");
    CHECK(good.exit_code == 0);
    CHECK(Json::parse(good.stdout_text).at("endpoint_freewheeling").get<bool>());

    RunResult wide = run("retract " + crowded.string() + " --stage free --samples 5 --root2-coeff");
    CHECK(wide.exit_code == 0);  // warn, not error
    Json prep = Json::parse(wide.stdout_text);
    CHECK_FALSE(prep.at("endpoint_freewheeling").get<bool>());
    CHECK(prep.contains("warning"));
}

TEST_CASE("interchange: zero deviation and failure detection") {
    fs::path p = write_temp("cli_p.json", kValidTuple);
    fs::path q = write_temp(
        "cli_q.json", R"({"m":1,"group":"Λ","cubes":[{"v":[0.1],"g":[[0.3]]}]})");
    RunResult r = run("interchange " + p.string() + " " + q.string());
    CHECK(r.exit_code == 0);
    CHECK(Json::parse(r.stdout_text).at("max_deviation").get<double>() == 0.0);

    fs::path bad = write_temp("cli_bad2.json", kOverlapTuple);
    RunResult rb = run("interchange " + p.string() + " " + bad.string());
    CHECK(rb.exit_code == 1);
}

TEST_CASE("symseq: matrix product of two regular orbits") {
    FinSymSeq s2 = FinSymSeq::free_orbit(2);
    fs::path f = write_temp("cli_s2.json", to_json(s2).dump());
    RunResult r = run("symseq matrix " + f.string() + " " + f.string());
    CHECK(r.exit_code == 0);
    Json rep = Json::parse(r.stdout_text);
    CHECK(rep.at("components").at("4").at("elements").size() == 24);

    RunResult rg = run("symseq graded " + f.string() + " " + f.string());
    CHECK(rg.exit_code == 0);
    CHECK(Json::parse(rg.stdout_text).at("components").at("4").at("elements").size() == 24);

    RunResult rc = run("symseq compose " + f.string() + " " + f.string());
    CHECK(rc.exit_code == 0);

    RunResult rbad = run("symseq matrix " + f.string() + " /nonexistent.json");
    CHECK(rbad.exit_code == 2);
}

TEST_CASE("weiss: covers through the command line") {
    CoverSpec whole = explicit_cover(cube_region(1), {cube_region(1)});
    fs::path wf = write_temp("cli_whole.json", to_json(whole).dump());
    RunResult r = run("weiss " + wf.string() + " --kmax 3 --trials 30 --seed 3");
    CHECK(r.exit_code == 0);

    CoverSpec prod = disk_product_cover(cube_region(1), cube_region(1));
    fs::path pf = write_temp("cli_prod.json", to_json(prod).dump());
    RunResult rp = run("weiss " + pf.string() + " --kmax 3 --trials 40 --seed 5 --complete");
    CHECK(rp.exit_code == 0);
    Json rep = Json::parse(rp.stdout_text);
    CHECK(rep.at("pass").get<bool>());
    CHECK(rep.at("complete").at("pass").get<bool>());

    // reports are reproducible
    RunResult rp2 = run("weiss " + pf.string() + " --kmax 3 --trials 40 --seed 5 --complete");
    CHECK(rp2.stdout_text == rp.stdout_text);

    // grid-of-dots cover fails with a witness
    std::vector<BoxRegion> tiny;
    for (double c = -0.9; c < 1.0; c += 0.2) tiny.push_back(make_region(1, {Box{{c - 0.05}, {c + 0.05}}}));
    CoverSpec dots = explicit_cover(cube_region(1), std::move(tiny));
    fs::path df = write_temp("cli_dots.json", to_json(dots).dump());
    RunResult rd = run("weiss " + df.string() + " --kmax 2 --trials 30 --seed 7");
    CHECK(rd.exit_code == 1);
    Json drep = Json::parse(rd.stdout_text);
    bool witnessed = false;
    for (const auto& row : drep.at("weiss").at("per_k"))
        if (row.contains("witness")) witnessed = true;
    CHECK(witnessed);
}
