#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "gridwar/io.hpp"
#include "support/temp_dir.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the installed binary inside `dir`, capturing both streams.
CliResult run_cli(const testsupport::TempDir& dir, const std::string& args) {
    std::string out_path = dir.file("__stdout.txt");
    std::string err_path = dir.file("__stderr.txt");
    std::string cmd = "cd \"" + dir.path().string() + "\" && \"" + GRIDWAR_CLI_PATH + "\" " +
                      args + " >\"" + out_path + "\" 2>\"" + err_path + "\"";
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = testsupport::slurp(out_path);
    r.err = testsupport::slurp(err_path);
    return r;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

// The shared ingest step most pipeline tests start from.
void ingest_fixture(const testsupport::TempDir& dir) {
    CliResult r = run_cli(dir, "ingest --input \"" + testsupport::fixture("pa_fixture.csv") +
                                   "\" --out tables");
    REQUIRE(r.exit_code == 0);
}

}  // namespace

TEST_CASE("help exits zero and prints usage", "[cli]") {
    testsupport::TempDir dir;
    CliResult top = run_cli(dir, "--help");
    REQUIRE(top.exit_code == 0);
    REQUIRE_THAT(top.out, Catch::Matchers::ContainsSubstring("Usage"));
    REQUIRE_THAT(top.out, Catch::Matchers::ContainsSubstring("ingest"));

    CliResult sub = run_cli(dir, "gwar --help");
    REQUIRE(sub.exit_code == 0);
    REQUIRE_THAT(sub.out, Catch::Matchers::ContainsSubstring("--wrep"));
}

TEST_CASE("an unknown subcommand exits one with usage", "[cli]") {
    testsupport::TempDir dir;
    CliResult r = run_cli(dir, "frobnicate");
    REQUIRE(r.exit_code == 1);
    REQUIRE_THAT(r.err, Catch::Matchers::ContainsSubstring("Usage"));

    CliResult none = run_cli(dir, "");
    REQUIRE(none.exit_code == 1);
}

TEST_CASE("validation failures are a single machine-parsable line", "[cli]") {
    testsupport::TempDir dir;
    CliResult r = run_cli(dir, "ingest --input no_such_file.csv --out tables");
    REQUIRE(r.exit_code == 1);
    REQUIRE(r.err.rfind("error: ", 0) == 0);
    REQUIRE(count_lines(r.err) == 1);

    CliResult window = run_cli(dir, "fit-f --starts x.csv --years 2019:2018 --out f.json");
    REQUIRE(window.exit_code == 1);
    REQUIRE(window.err.rfind("error: ", 0) == 0);
    REQUIRE_THAT(window.err, Catch::Matchers::ContainsSubstring("not well-ordered"));
}

TEST_CASE("the full pipeline runs and its outputs parse", "[cli]") {
    testsupport::TempDir dir;
    ingest_fixture(dir);

    for (const std::string& step :
         {std::string("fit-f --starts tables/start_lines.csv --years 2018:2019 --out f_grid.json"),
          std::string("fit-g --pa tables/plate_appearances.csv --years 2018:2019 --min-cell 3 "
                      "--out g_dist.json"),
          std::string("fit-park --half-innings tables/half_innings.csv --years 2018:2019 "
                      "--method ridge --lambda 2.0 --out park_fx.json"),
          std::string("tune-lambda --half-innings tables/half_innings.csv --train 2018 "
                      "--validate 2019 --grid 0.5,2.0,8.0 --out sweep.json"),
          std::string("gwar --starts tables/start_lines.csv --f f_grid.json --g g_dist.json "
                      "--park park_fx.json --reference \"") +
              testsupport::fixture("fwar_fixture.csv") +
              "\" --out gwar_games.csv,gwar_seasons.csv",
          std::string("compare --seasons gwar_seasons.csv --reference \"") +
              testsupport::fixture("fwar_fixture.csv") +
              "\" --year 2019 --games gwar_games.csv --top 3 --out compare.json"}) {
        CliResult r = run_cli(dir, step);
        INFO(step << "\n" << r.err);
        REQUIRE(r.exit_code == 0);
    }

    // Tables: four CSVs, with the two derived rejects and no parse rejects.
    auto rejects = gridwar::csv::read_table_file(dir.file("tables/rejects.csv"));
    REQUIRE(rejects.header == std::vector<std::string>{"file", "line", "reason", "raw"});
    REQUIRE(rejects.rows.size() == 2);
    for (const auto& row : rejects.rows) REQUIRE(row[0].empty());

    // JSON artifacts parse and carry the schema version.
    for (const std::string& name : {"f_grid.json", "g_dist.json", "park_fx.json", "sweep.json",
                                    "compare.json"}) {
        gridwar::io::json j = gridwar::io::load_json_file(dir.file(name));
        REQUIRE(j.at("schema_version").get<int>() == gridwar::kSchemaVersion);
    }

    gridwar::io::json sweep = gridwar::io::load_json_file(dir.file("sweep.json"));
    REQUIRE(sweep.at("entries").size() == 3);

    gridwar::io::json compare = gridwar::io::load_json_file(dir.file("compare.json"));
    REQUIRE(compare.at("year").get<int>() == 2019);
    REQUIRE(compare.at("ranking").size() > 0);
    REQUIRE(compare.at("undervalued").size() == 3);
    REQUIRE(compare.at("overvalued").size() == 3);

    // Seasons carry rescaled values when a reference table is supplied.
    auto seasons = gridwar::csv::read_table_file(dir.file("gwar_seasons.csv"));
    int rescaled = seasons.require_column("rescaled_gwar");
    bool any = false;
    for (const auto& row : seasons.rows) any = any || !row[rescaled].empty();
    REQUIRE(any);
}

TEST_CASE("the pipeline reproduces the frozen season table", "[cli]") {
    testsupport::TempDir dir;
    ingest_fixture(dir);
    for (const std::string& step :
         {"fit-f --starts tables/start_lines.csv --years 2018:2019 --out f_grid.json",
          "fit-g --pa tables/plate_appearances.csv --years 2018:2019 --min-cell 3 --out g_dist.json",
          "fit-park --half-innings tables/half_innings.csv --years 2018:2019 --method ridge "
          "--lambda 2.0 --out park_fx.json",
          "gwar --starts tables/start_lines.csv --f f_grid.json --g g_dist.json --park "
          "park_fx.json --out gwar_games.csv,gwar_seasons.csv"}) {
        CliResult r = run_cli(dir, step);
        INFO(r.err);
        REQUIRE(r.exit_code == 0);
    }
    REQUIRE(testsupport::slurp(dir.file("gwar_seasons.csv")) ==
            testsupport::slurp(testsupport::fixture("golden_gwar_seasons.csv")));
}

TEST_CASE("simulation reports are byte-identical for one seed", "[cli]") {
    testsupport::TempDir dir;
    CliResult first = run_cli(dir, "simulate-park --study 1 --sims 2 --seed 7 --out report_a.json");
    INFO(first.err);
    REQUIRE(first.exit_code == 0);
    CliResult second = run_cli(dir, "simulate-park --study 1 --sims 2 --seed 7 --out report_b.json");
    REQUIRE(second.exit_code == 0);
    std::string a = testsupport::slurp(dir.file("report_a.json"));
    REQUIRE(a == testsupport::slurp(dir.file("report_b.json")));
    REQUIRE(!a.empty());

    gridwar::io::json report = gridwar::io::load_json_file(dir.file("report_a.json"));
    REQUIRE(report.at("schema_version").get<int>() == gridwar::kSchemaVersion);
    REQUIRE(report.at("methods").size() == 4);

    CliResult reseeded =
        run_cli(dir, "simulate-park --study 1 --sims 2 --seed 8 --out report_c.json");
    REQUIRE(reseeded.exit_code == 0);
    REQUIRE(a != testsupport::slurp(dir.file("report_c.json")));
}

TEST_CASE("earned-run accounting changes the starter's charged runs", "[cli]") {
    testsupport::TempDir dir;
    CliResult total = run_cli(dir, "ingest --input \"" + testsupport::fixture("pa_earned.csv") +
                                       "\" --out total");
    REQUIRE(total.exit_code == 0);
    CliResult earned = run_cli(dir, "ingest --input \"" + testsupport::fixture("pa_earned.csv") +
                                        "\" --earned-runs --out earned");
    REQUIRE(earned.exit_code == 0);

    auto runs_for = [&](const std::string& table, const std::string& pitcher) {
        for (const auto& s : gridwar::io::read_start_lines(dir.file(table + "/start_lines.csv")))
            if (s.pitcher_id == pitcher) return s.runs_allowed;
        FAIL("pitcher not found");
        return -1;
    };
    REQUIRE(runs_for("total", "LAD19SP3") == 2);
    REQUIRE(runs_for("earned", "LAD19SP3") == 1);
}

TEST_CASE("a schema map adapts renamed columns", "[cli]") {
    testsupport::TempDir dir;
    CliResult r = run_cli(dir, "ingest --input \"" + testsupport::fixture("pa_renamed.csv") +
                                   "\" --schema \"" + testsupport::fixture("schema_map.json") +
                                   "\" --out tables");
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    auto starts = gridwar::io::read_start_lines(dir.file("tables/start_lines.csv"));
    REQUIRE(starts.size() == 2);
}

TEST_CASE("rejected rows land in rejects.csv with their source line", "[cli]") {
    testsupport::TempDir dir;
    CliResult r = run_cli(dir, "ingest --input \"" + testsupport::fixture("pa_corrupt.csv") +
                                   "\" --out tables");
    REQUIRE(r.exit_code == 0);

    auto rejects = gridwar::csv::read_table_file(dir.file("tables/rejects.csv"));
    REQUIRE(rejects.rows.size() == 1);
    REQUIRE_THAT(rejects.rows[0][0], Catch::Matchers::ContainsSubstring("pa_corrupt.csv"));
    REQUIRE(rejects.rows[0][1] == "6");
    REQUIRE_THAT(rejects.rows[0][2], Catch::Matchers::ContainsSubstring("'120'"));
}

TEST_CASE("compare requires a year when seasons span several", "[cli]") {
    testsupport::TempDir dir;
    ingest_fixture(dir);
    for (const std::string& step :
         {"fit-f --starts tables/start_lines.csv --years 2018:2019 --out f_grid.json",
          "fit-g --pa tables/plate_appearances.csv --years 2018:2019 --min-cell 3 --out g_dist.json",
          "fit-park --half-innings tables/half_innings.csv --years 2018:2019 --method ols "
          "--out park_fx.json",
          "gwar --starts tables/start_lines.csv --f f_grid.json --g g_dist.json "
          "--park park_fx.json --out gwar_games.csv,gwar_seasons.csv"}) {
        REQUIRE(run_cli(dir, step).exit_code == 0);
    }
    CliResult r = run_cli(dir, "compare --seasons gwar_seasons.csv --reference \"" +
                                   testsupport::fixture("fwar_fixture.csv") + "\" --out c.json");
    REQUIRE(r.exit_code == 1);
    REQUIRE(r.err.rfind("error: ", 0) == 0);
    REQUIRE_THAT(r.err, Catch::Matchers::ContainsSubstring("year"));
}

TEST_CASE("the regressed park factor off a three-year window needs a weight", "[cli]") {
    testsupport::TempDir dir;
    ingest_fixture(dir);
    CliResult r = run_cli(dir, "fit-park --half-innings tables/half_innings.csv "
                               "--years 2018:2019 --method fangraphs --out park_fx.json");
    REQUIRE(r.exit_code == 1);
    REQUIRE_THAT(r.err, Catch::Matchers::ContainsSubstring("weight"));

    CliResult ok = run_cli(dir, "fit-park --half-innings tables/half_innings.csv "
                                "--years 2018:2019 --method fangraphs --fg-weight 0.6 "
                                "--out park_fx.json");
    INFO(ok.err);
    REQUIRE(ok.exit_code == 0);
}
