#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::string cli = DELTAPRIME_CLI_PATH;

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() /
              ("deltaprime_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
    fs::path file(const std::string& name) const { return dir / name; }
};

int run(const std::string& args) {
    const std::string cmd = "SOURCE_DATE_EPOCH=0 '" + cli + "' " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

const char* figure_config = R"({
  "v": {"delta": -2.0, "delta_prime": 4.0},
  "w": {"delta": -1.0, "delta_prime": 3.0},
  "q": 0.5
})";

}  // namespace

TEST_CASE("compose command", "[cli]") {
    Workspace ws;
    write_file(ws.file("deltas.json"), R"({
      "v": {"delta": 1.0, "delta_prime": 0.0},
      "w": {"delta": 2.0, "delta_prime": 0.0},
      "q": 0.0
    })");

    SECTION("abelian delta pair") {
        const auto out = ws.file("compose.json");
        REQUIRE(run("compose --config '" + ws.file("deltas.json").string() + "' --out '" +
                    out.string() + "'") == 0);
        const json record = json::parse(read_file(out));
        CHECK(record["command"] == "compose");
        CHECK(record["payload"]["couplings"]["delta"].get<double>() == 3.0);
        CHECK(record["payload"]["couplings"]["delta_prime"].get<double>() == 0.0);
        // both matrix forms agree
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(std::abs(record["payload"]["kurasov"][i][j].get<double>() -
                               record["payload"]["product"][i][j].get<double>()) < 1e-12);
    }
    SECTION("deterministic output") {
        const auto out1 = ws.file("a.json");
        const auto out2 = ws.file("b.json");
        const std::string base =
            "compose --config '" + ws.file("deltas.json").string() + "' --out '";
        REQUIRE(run(base + out1.string() + "'") == 0);
        REQUIRE(run(base + out2.string() + "'") == 0);
        CHECK(read_file(out1) == read_file(out2));
    }
    SECTION("round trip through the schema") {
        const auto out = ws.file("c.json");
        REQUIRE(run("compose --config '" + ws.file("deltas.json").string() + "' --out '" +
                    out.string() + "'") == 0);
        const std::string text = read_file(out);
        CHECK(json::parse(text).dump(2) + "\n" == text);
    }
    SECTION("exit codes") {
        write_file(ws.file("wall.json"), R"({
          "v": {"delta": 1.0, "delta_prime": 1.0, "decoupled": true},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "q": 1.0
        })");
        CHECK(run("compose --config '" + ws.file("wall.json").string() + "'") == 2);

        write_file(ws.file("degenerate.json"), R"({
          "v": {"delta": 1.0, "delta_prime": 2.0},
          "w": {"delta": 1.0, "delta_prime": -0.5},
          "q": 1.0
        })");
        CHECK(run("compose --config '" + ws.file("degenerate.json").string() + "'") == 3);

        CHECK(run("compose --config '" + ws.file("missing.json").string() + "'") == 4);
        CHECK(run("compose") == 1);

        write_file(ws.file("both_blocks.json"), R"({
          "v": {"delta": 1.0, "physical": {"a": 1.0}},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "q": 1.0
        })");
        CHECK(run("compose --config '" + ws.file("both_blocks.json").string() + "'") == 1);
    }
}

TEST_CASE("scatter command", "[cli]") {
    Workspace ws;
    SECTION("free system transmits everything") {
        write_file(ws.file("free.json"), R"({
          "v": {"delta": 0.0, "delta_prime": 0.0},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "q": 1.0
        })");
        const auto out = ws.file("free.csv");
        REQUIRE(run("scatter --config '" + ws.file("free.json").string() +
                    "' --k-min 0.5 --k-max 5 --k-steps 10 --out '" + out.string() + "'") == 0);
        const auto rows = read_csv(out);
        REQUIRE(rows.size() == 11);
        CHECK(rows[0][0] == "k");
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(std::abs(std::stod(rows[i][3]) - 1.0) < 1e-12);
    }
    SECTION("collapsed single delta has |t|^2 = 4k^2/(4k^2 + v0^2)") {
        write_file(ws.file("single.json"), R"({
          "v": {"delta": 2.0, "delta_prime": 0.0},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "q": 0.0
        })");
        const auto out = ws.file("single.csv");
        REQUIRE(run("scatter --config '" + ws.file("single.json").string() +
                    "' --k-min 1 --k-max 2 --k-steps 2 --out '" + out.string() + "'") == 0);
        const auto rows = read_csv(out);
        REQUIRE(rows.size() == 3);
        const double k = std::stod(rows[1][0]);
        const double expected = 4.0 * k * k / (4.0 * k * k + 4.0);
        CHECK(std::abs(std::stod(rows[1][3]) - expected) < 1e-12);
    }
    SECTION("physical configuration block") {
        // a = 1/2, hbar = c = m = 1 gives the same delta coupling as 1.0
        write_file(ws.file("phys.json"), R"({
          "constants": {"hbar": 1.0, "c": 1.0, "mass": 1.0},
          "v": {"physical": {"a": 0.5, "b": 0.0}},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "d": 1.0
        })");
        write_file(ws.file("dimless.json"), R"({
          "v": {"delta": 1.0, "delta_prime": 0.0},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "q": 1.0
        })");
        const auto out1 = ws.file("phys.csv");
        const auto out2 = ws.file("dimless.csv");
        REQUIRE(run("scatter --config '" + ws.file("phys.json").string() +
                    "' --k-min 1 --k-max 2 --k-steps 3 --out '" + out1.string() + "'") == 0);
        REQUIRE(run("scatter --config '" + ws.file("dimless.json").string() +
                    "' --k-min 1 --k-max 2 --k-steps 3 --out '" + out2.string() + "'") == 0);
        CHECK(read_file(out1) == read_file(out2));
    }
    SECTION("CSV round-trips through parse and re-format") {
        write_file(ws.file("free.json"), R"({
          "v": {"delta": -2.0, "delta_prime": 4.0},
          "w": {"delta": -1.0, "delta_prime": 3.0},
          "q": 0.5
        })");
        const auto out = ws.file("roundtrip.csv");
        REQUIRE(run("scatter --config '" + ws.file("free.json").string() +
                    "' --k-min 0.3 --k-max 7 --k-steps 9 --out '" + out.string() + "'") == 0);
        const std::string original = read_file(out);
        const auto rows = read_csv(out);
        std::string rebuilt = rows[0][0];
        for (std::size_t c = 1; c < rows[0].size(); ++c) rebuilt += "," + rows[0][c];
        rebuilt += "\n";
        for (std::size_t r = 1; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", std::stod(rows[r][c]));
                rebuilt += (c ? "," : "") + std::string(buf);
            }
            rebuilt += "\n";
        }
        CHECK(rebuilt == original);
    }
    SECTION("decoupled couplings are routed away") {
        write_file(ws.file("wall.json"), R"({
          "v": {"delta": 1.0, "delta_prime": 1.0, "decoupled": true},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "q": 1.0
        })");
        CHECK(run("scatter --config '" + ws.file("wall.json").string() +
                  "' --k-min 1 --k-max 2 --k-steps 2") == 2);
    }
    SECTION("bad grid is a usage error") {
        write_file(ws.file("free.json"), R"({
          "v": {"delta": 0.0, "delta_prime": 0.0},
          "w": {"delta": 0.0, "delta_prime": 0.0},
          "q": 1.0
        })");
        CHECK(run("scatter --config '" + ws.file("free.json").string() +
                  "' --k-min 2 --k-max 1 --k-steps 5") == 1);
    }
}

TEST_CASE("spectrum command", "[cli]") {
    Workspace ws;
    write_file(ws.file("figure.json"), figure_config);
    const auto out = ws.file("spectrum.json");
    REQUIRE(run("spectrum --config '" + ws.file("figure.json").string() + "' --out '" +
                out.string() + "'") == 0);
    const json record = json::parse(read_file(out));
    const auto& points = record["payload"];
    REQUIRE(points.is_array());
    REQUIRE(!points.empty());

    int bound = 0;
    double prev_im = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        if (p["kind"] == "bound") ++bound;
        CHECK(p["residual"].get<double>() < 1e-10);
        CHECK(p["k_im"].get<double>() <= prev_im);
        prev_im = p["k_im"].get<double>();
    }
    CHECK(bound == 1);
}

TEST_CASE("spectrum-decoupled command", "[cli]") {
    Workspace ws;
    SECTION("MP ladder is n pi / q") {
        write_file(ws.file("mp.json"), R"({
          "v": {"delta": 0.5, "delta_prime": -1.0, "decoupled": true},
          "w": {"delta": -0.5, "delta_prime": 1.0, "decoupled": true},
          "q": 1.0
        })");
        const auto out = ws.file("mp.json.out");
        REQUIRE(run("spectrum-decoupled --case MP --config '" + ws.file("mp.json").string() +
                    "' --bound 10 --out '" + out.string() + "'") == 0);
        const json record = json::parse(read_file(out));
        const auto& roots = record["payload"]["roots"];
        REQUIRE(roots.size() == 3);
        for (int n = 1; n <= 3; ++n)
            CHECK(std::abs(roots[n - 1]["k"].get<double>() - n * std::numbers::pi) < 1e-12);
    }
    SECTION("PP first root") {
        write_file(ws.file("pp.json"), R"({
          "v": {"delta": -4.0, "delta_prime": 1.0, "decoupled": true},
          "w": {"delta": 0.0, "delta_prime": 1.0, "decoupled": true},
          "q": 1.0
        })");
        const auto out = ws.file("pp.out");
        REQUIRE(run("spectrum-decoupled --case PP --config '" + ws.file("pp.json").string() +
                    "' --bound 12 --out '" + out.string() + "'") == 0);
        const json record = json::parse(read_file(out));
        CHECK(std::abs(record["payload"]["roots"][0]["k"].get<double>() - 4.493409457909064) <
              1e-9);
    }
    SECTION("PReg appends the collapsed-limit pole") {
        write_file(ws.file("preg.json"), R"({
          "v": {"delta": 0.0, "delta_prime": 1.0, "decoupled": true},
          "w": {"delta": -1.0, "delta_prime": 0.0},
          "q": 1.0
        })");
        const auto out = ws.file("preg.out");
        REQUIRE(run("spectrum-decoupled --case PReg --config '" +
                    ws.file("preg.json").string() + "' --out '" + out.string() + "'") == 0);
        const json record = json::parse(read_file(out));
        REQUIRE(record["payload"].contains("limit_pole"));
        CHECK(record["payload"]["limit_pole"]["kind"] == "bound");
        CHECK(std::abs(record["payload"]["limit_pole"]["k_im"].get<double>() - 1.0) < 1e-12);
    }
    SECTION("unknown tag is a usage error") {
        write_file(ws.file("mp.json"), R"({
          "v": {"delta": 0.5, "delta_prime": -1.0, "decoupled": true},
          "w": {"delta": -0.5, "delta_prime": 1.0, "decoupled": true},
          "q": 1.0
        })");
        CHECK(run("spectrum-decoupled --case XX --config '" + ws.file("mp.json").string() +
                  "'") == 1);
        CHECK(run("spectrum-decoupled --case PP --config '" + ws.file("mp.json").string() +
                  "'") == 1);
    }
}

TEST_CASE("trace-curve command", "[cli]") {
    Workspace ws;
    const auto out = ws.file("trace.csv");
    REQUIRE(run("trace-curve --v1-min -3 --v1-max 3 --steps 601 --out '" + out.string() +
                "'") == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 602);

    bool saw_zero = false, saw_half = false, saw_singular = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v1 = std::stod(rows[i][0]);
        if (rows[i][2] == "1") {
            saw_singular = true;
            CHECK(std::abs(std::abs(v1) - 1.0) < 1e-9);
            CHECK(rows[i][1].empty());
            continue;
        }
        const double tr = std::stod(rows[i][1]);
        if (v1 == 0.0) {
            saw_zero = true;
            CHECK(tr == 2.0);
        }
        if (std::abs(v1 - 0.5) < 1e-12) {
            saw_half = true;
            CHECK(std::abs(tr - 10.0 / 3.0) < 1e-14);
        }
        CHECK(std::abs(tr) >= 2.0 * (1.0 - 1e-12));
    }
    CHECK(saw_zero);
    CHECK(saw_half);
    CHECK(saw_singular);
}

TEST_CASE("lambert-map command", "[cli]") {
    Workspace ws;
    write_file(ws.file("figure.json"), figure_config);
    const auto out = ws.file("map.csv");
    REQUIRE(run("lambert-map --config '" + ws.file("figure.json").string() +
                "' --re-min -2 --re-max 2 --im-min -1 --im-max 1 --resolution 5 --out '" +
                out.string() + "'") == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 26);

    // the origin row solves all three conditions
    bool origin_seen = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (std::stod(rows[i][0]) == 0.0 && std::stod(rows[i][1]) == 0.0) {
            origin_seen = true;
            CHECK(std::abs(std::stod(rows[i][2])) < 1e-12);
            CHECK(std::abs(std::stod(rows[i][3])) < 1e-12);
            CHECK(std::abs(std::stod(rows[i][4])) < 1e-12);
        }
    }
    CHECK(origin_seen);

    // mirror symmetry in z_r: even first residual, odd second
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double zr = std::stod(rows[i][0]);
        const double zi = std::stod(rows[i][1]);
        for (std::size_t j = 1; j < rows.size(); ++j) {
            if (std::stod(rows[j][0]) == -zr && std::stod(rows[j][1]) == zi) {
                CHECK(std::abs(std::stod(rows[i][2]) - std::stod(rows[j][2])) < 1e-9);
                CHECK(std::abs(std::stod(rows[i][3]) + std::stod(rows[j][3])) < 1e-9);
            }
        }
    }
}

TEST_CASE("heat command", "[cli]") {
    Workspace ws;
    SECTION("short-time limit appears in the first row") {
        const auto out = ws.file("heat.csv");
        REQUIRE(run("heat --delta -2 --delta-prime 0 --t-min 1e-12 --t-max 1 --steps 5 "
                    "--out '" +
                    out.string() + "'") == 0);
        const auto rows = read_csv(out);
        REQUIRE(rows.size() == 6);
        CHECK(std::abs(std::stod(rows[1][1]) - 1.0) < 1e-5);
        CHECK(std::abs(std::stod(rows[1][2]) + 2.0 * std::numbers::pi) < 1e-5);
    }
    SECTION("decoupled wall accepted") {
        CHECK(run("heat --delta -2 --delta-prime 1 --decoupled --t-min 0.1 --t-max 1 "
                  "--steps 3 --out '" +
                  ws.file("wall.csv").string() + "'") == 0);
    }
    SECTION("usage errors") {
        CHECK(run("heat --delta -2 --delta-prime 0 --t-min 0 --t-max 1 --steps 3") == 1);
        CHECK(run("heat --delta -2 --delta-prime 1 --t-min 0.1 --t-max 1 --steps 3") == 2);
    }
}

TEST_CASE("wave command", "[cli]") {
    Workspace ws;
    write_file(ws.file("figure.json"), figure_config);
    const auto out = ws.file("wave.json");
    REQUIRE(run("wave --config '" + ws.file("figure.json").string() +
                "' --k 1.0 --incident left --out '" + out.string() + "'") == 0);
    const json record = json::parse(read_file(out));
    const auto& regions = record["payload"]["regions"];
    REQUIRE(regions.size() == 3);
    // unit right-mover comes in, nothing comes back from the far right
    CHECK(regions[0]["b_re"].get<double>() == 1.0);
    CHECK(regions[0]["b_im"].get<double>() == 0.0);
    CHECK(std::abs(regions[2]["a_re"].get<double>()) < 1e-12);
    CHECK(std::abs(regions[2]["a_im"].get<double>()) < 1e-12);
    // current conservation from the emitted coefficients
    const double t2 = regions[2]["b_re"].get<double>() * regions[2]["b_re"].get<double>() +
                      regions[2]["b_im"].get<double>() * regions[2]["b_im"].get<double>();
    const double r2 = regions[0]["a_re"].get<double>() * regions[0]["a_re"].get<double>() +
                      regions[0]["a_im"].get<double>() * regions[0]["a_im"].get<double>();
    CHECK(std::abs(t2 + r2 - 1.0) < 1e-12);
}

TEST_CASE("output to an unwritable location fails with the I/O code", "[cli]") {
    Workspace ws;
    write_file(ws.file("figure.json"), figure_config);
    CHECK(run("trace-curve --steps 10 --out '/nonexistent-dir/x.csv'") == 4);
}

TEST_CASE("diagnostic logging does not alter results", "[cli]") {
    Workspace ws;
    write_file(ws.file("figure.json"), figure_config);
    const auto out1 = ws.file("s1.json");
    const auto out2 = ws.file("s2.json");
    REQUIRE(run("spectrum --config '" + ws.file("figure.json").string() + "' --out '" +
                out1.string() + "'") == 0);
    const std::string cmd = "SOURCE_DATE_EPOCH=0 DELTAPRIME_LOG=1 '" + cli +
                            "' spectrum --config '" + ws.file("figure.json").string() +
                            "' --out '" + out2.string() + "' 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(read_file(out1) == read_file(out2));
}
