#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

// End-to-end checks against the built binary: exit-code conventions and the
// artifact contract of each subcommand.

namespace fs = std::filesystem;

namespace {

constexpr const char* kCli = COLUPI_CLI_PATH;

int run_cli(const std::string& args, const std::string& redirect = "") {
    std::string command = std::string(kCli) + " " + args;
    if (!redirect.empty()) {
        command += " > " + redirect + " 2>&1";
    } else {
        command += " > /dev/null 2>&1";
    }
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

fs::path temp_path(const std::string& name) {
    return fs::temp_directory_path() / name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_spec(const fs::path& path, int n_points = 300, unsigned seed = 7) {
    std::ofstream out(path);
    out << "{\"n_points\": " << n_points
        << ", \"n_gaussians\": 4, \"noise_fraction\": 0.2, \"dims\": 6, "
           "\"separation\": 6.0, \"seed\": "
        << seed << "}";
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("run --sites 1 --clusters 2 --out /tmp/colupi_cli_x --synthetic missing.json") == 2);
    CHECK(run_cli("run --sites 2 --clusters 5 --out /tmp/colupi_cli_x") == 2);  // no source
    CHECK(run_cli("definitely-not-a-command") == 2);
    CHECK(run_cli("run") == 2);  // missing required flags
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("run --help") == 0);
}

TEST_CASE("generate, split and run produce the documented artifacts") {
    const fs::path spec = temp_path("colupi_cli_spec.json");
    write_spec(spec);

    const fs::path csv = temp_path("colupi_cli_data.csv");
    CHECK(run_cli("generate --spec " + spec.string() + " --out " + csv.string()) == 0);
    CHECK(fs::exists(csv));

    const fs::path split_dir = temp_path("colupi_cli_split");
    fs::remove_all(split_dir);
    CHECK(run_cli("split --data " + csv.string() +
                  " --sites 2 --strategy round_robin --out " + split_dir.string()) == 0);
    CHECK(fs::exists(split_dir / "site_0.csv"));
    CHECK(fs::exists(split_dir / "site_1.csv"));

    const fs::path run_dir = temp_path("colupi_cli_run");
    fs::remove_all(run_dir);
    const fs::path log = temp_path("colupi_cli_run.log");
    CHECK(run_cli("run --synthetic " + spec.string() +
                      " --sites 2 --clusters 5 --seed 7 --max-rounds 3 --out " +
                      run_dir.string(),
                  log.string()) == 0);
    CHECK(fs::exists(run_dir / "report.json"));
    CHECK(fs::exists(run_dir / "qualities.csv"));
    CHECK(fs::exists(run_dir / "final_partition_site_0.csv"));
    CHECK(fs::exists(run_dir / "final_partition_site_1.csv"));
    const std::string output = slurp(log);
    CHECK(output.find("decision") != std::string::npos);
    CHECK(output.find("terminated:") != std::string::npos);

    // Inspect prints one confidence block per recorded round.
    const fs::path inspect_log = temp_path("colupi_cli_inspect.log");
    CHECK(run_cli("inspect --report " + run_dir.string(), inspect_log.string()) == 0);
    const std::string inspected = slurp(inspect_log);
    std::size_t blocks = 0;
    for (std::size_t pos = inspected.find("confidence:"); pos != std::string::npos;
         pos = inspected.find("confidence:", pos + 1)) {
        ++blocks;
    }
    std::size_t rounds = 0;
    const std::string report_text = slurp(run_dir / "report.json");
    for (std::size_t pos = report_text.find("\"round\":"); pos != std::string::npos;
         pos = report_text.find("\"round\":", pos + 1)) {
        ++rounds;
    }
    CHECK(blocks == rounds);
    CHECK(blocks >= 1);

    fs::remove(spec);
    fs::remove(csv);
    fs::remove(log);
    fs::remove(inspect_log);
    fs::remove_all(split_dir);
    fs::remove_all(run_dir);
}

TEST_CASE("run exits 2 when K exceeds N or P exceeds d") {
    const fs::path spec = temp_path("colupi_cli_tiny_spec.json");
    {
        std::ofstream out(spec);
        out << R"({"n_points": 12, "n_gaussians": 2, "noise_fraction": 0.0,)"
            << R"( "dims": 3, "separation": 6.0, "seed": 1})";
    }
    CHECK(run_cli("run --synthetic " + spec.string() +
                  " --sites 2 --clusters 40 --out /tmp/colupi_cli_y") == 2);
    CHECK(run_cli("run --synthetic " + spec.string() +
                  " --sites 5 --clusters 2 --out /tmp/colupi_cli_y") == 2);
    fs::remove(spec);
}

TEST_CASE("eval-ranks rejects too few methods at runtime") {
    const fs::path scores = temp_path("colupi_cli_scores2.csv");
    {
        std::ofstream out(scores);
        out << "method,d0,d1,d2\n";
        out << "m0,1.0,2.0,3.0\n";
        out << "m1,2.0,1.0,2.0\n";
    }
    CHECK(run_cli("eval-ranks --scores " + scores.string()) == 1);
    fs::remove(scores);
}

TEST_CASE("eval-ranks emits the comparison JSON") {
    const fs::path scores = temp_path("colupi_cli_scores.csv");
    {
        std::ofstream out(scores);
        out << "method,d0,d1\n";
        out << "m0,1.0,1.0\n";
        out << "m1,2.0,2.0\n";
        out << "m2,3.0,3.0\n";
    }
    const fs::path out_json = temp_path("colupi_cli_ranks.json");
    CHECK(run_cli("eval-ranks --scores " + scores.string() + " --out " + out_json.string()) == 0);
    const std::string text = slurp(out_json);
    CHECK(text.find("friedman_chi2") != std::string::npos);
    CHECK(text.find("critical_difference") != std::string::npos);
    CHECK(text.find("\"m0\"") != std::string::npos);
    fs::remove(scores);
    fs::remove(out_json);
}

TEST_CASE("inspect exits 1 on corrupt reports") {
    const fs::path dir = temp_path("colupi_cli_corrupt");
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "report.json");
        out << "{ this is not json";
    }
    const fs::path log = temp_path("colupi_cli_corrupt.log");
    CHECK(run_cli("inspect --report " + dir.string(), log.string()) == 1);
    CHECK(slurp(log).find("error") != std::string::npos);
    fs::remove(log);
    fs::remove_all(dir);

    CHECK(run_cli("inspect --report /definitely/missing/dir") == 1);
}
