#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridwar/ingest.hpp"
#include "gridwar/io.hpp"
#include "support/temp_dir.hpp"

using namespace gridwar;

namespace {

PlateAppearance make_pa(const std::string& game, int inning, Half half,
                        const std::string& pitcher, int runs, int outs) {
    PlateAppearance pa;
    pa.game_id = game;
    pa.year = 2019;
    pa.date = "2019-06-01";
    pa.home_team = "HHH";
    pa.away_team = "AAA";
    pa.league = League::AL;
    pa.park = "HHH";
    pa.inning = inning;
    pa.half = half;
    pa.pitcher_id = pitcher;
    pa.batter_id = "b1";
    pa.is_starter = true;
    pa.outs_before = 0;
    pa.base_state_before = BaseState::from_code("000");
    pa.runs_on_play = runs;
    pa.outs_recorded = outs;
    return pa;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

WinProbGrid small_grid() {
    WinProbGrid grid;
    grid.window = {2018, 2019};
    grid.intercept = logit(0.62);
    for (int i = 2; i <= WinProbGrid::kMaxInning; ++i) grid.inning_effect[i] = 0.04 * i;
    for (int r = 1; r <= WinProbGrid::kRMax; ++r) grid.run_effect[r] = -0.21 * r;
    grid.home_effect = 0.18;
    grid.nl_effect = -0.07;
    grid.year_effect[2018] = 0.0;
    grid.year_effect[2019] = 0.013;
    return grid;
}

}  // namespace

TEST_CASE("plate appearance csv round-trips, earned column only when present", "[io]") {
    std::vector<PlateAppearance> pas = {make_pa("G1", 1, Half::top, "HSP", 1, 3),
                                        make_pa("G1", 1, Half::bottom, "ASP", 0, 3)};

    std::ostringstream plain;
    io::write_plate_appearances(plain, pas);
    std::string header = plain.str().substr(0, plain.str().find('\n'));
    REQUIRE_THAT(header, !Catch::Matchers::ContainsSubstring("earned"));

    std::istringstream back(plain.str());
    IngestResult again = parse_plate_appearances(back, {});
    REQUIRE(again.rejects.empty());
    REQUIRE(again.plate_appearances.size() == 2);
    REQUIRE(again.plate_appearances[0].game_id == "G1");
    REQUIRE(again.plate_appearances[0].pitcher_id == "HSP");
    REQUIRE(again.plate_appearances[0].runs_on_play == 1);
    REQUIRE_FALSE(again.plate_appearances[0].earned_runs_on_play.has_value());

    // With one earned value set, the column appears and absent values are blank.
    pas[0].earned_runs_on_play = 1;
    std::ostringstream earned;
    io::write_plate_appearances(earned, pas);
    std::string earned_header = earned.str().substr(0, earned.str().find('\n'));
    REQUIRE_THAT(earned_header, Catch::Matchers::ContainsSubstring("earned_runs_on_play"));

    std::istringstream back2(earned.str());
    IngestResult again2 = parse_plate_appearances(back2, {});
    REQUIRE(again2.rejects.empty());
    REQUIRE(again2.plate_appearances[0].earned_runs_on_play == 1);
    REQUIRE_FALSE(again2.plate_appearances[1].earned_runs_on_play.has_value());
}

TEST_CASE("half inning csv round-trips through a file", "[io]") {
    testsupport::TempDir dir;
    std::vector<HalfInningRecord> halves;
    HalfInningRecord h;
    h.game_id = "G1";
    h.year = 2019;
    h.park = "HHH";
    h.inning = 4;
    h.half = Half::bottom;
    h.offense_team_season = "HHH2019";
    h.defense_team_season = "AAA2019";
    h.runs = 3;
    halves.push_back(h);
    h.inning = 5;
    h.half = Half::top;
    h.offense_team_season = "AAA2019";
    h.defense_team_season = "HHH2019";
    h.runs = 0;
    halves.push_back(h);

    std::string path = dir.file("half_innings.csv");
    std::ofstream out(path);
    io::write_half_innings(out, halves);
    out.close();

    std::vector<HalfInningRecord> again = io::read_half_innings(path);
    REQUIRE(again.size() == 2);
    REQUIRE(again[0].game_id == "G1");
    REQUIRE(again[0].inning == 4);
    REQUIRE(again[0].half == Half::bottom);
    REQUIRE(again[0].offense_team_season == "HHH2019");
    REQUIRE(again[0].runs == 3);
    REQUIRE(again[1].half == Half::top);
    REQUIRE(again[1].runs == 0);
}

TEST_CASE("start line csv round-trips both exit kinds", "[io]") {
    testsupport::TempDir dir;
    StartLine done;
    done.pitcher_id = "SP1";
    done.game_id = "G1";
    done.year = 2019;
    done.date = "2019-06-01";
    done.park = "HHH";
    done.is_home = true;
    done.league = League::AL;
    done.exit_kind = ExitKind::end_of_inning;
    done.innings = 7;
    done.runs_allowed = 2;
    done.team_won = true;

    StartLine mid = done;
    mid.pitcher_id = "SP2";
    mid.is_home = false;
    mid.league = League::NL;
    mid.exit_kind = ExitKind::mid_inning;
    mid.innings = 6;
    mid.exit_outs = 1;
    mid.exit_base = BaseState::from_code("110");
    mid.team_won = false;

    std::string path = dir.file("start_lines.csv");
    std::ofstream out(path);
    io::write_start_lines(out, {done, mid});
    out.close();

    std::vector<StartLine> again = io::read_start_lines(path);
    REQUIRE(again.size() == 2);
    REQUIRE(again[0].pitcher_id == "SP1");
    REQUIRE(again[0].exit_kind == ExitKind::end_of_inning);
    REQUIRE_FALSE(again[0].exit_outs.has_value());
    REQUIRE_FALSE(again[0].exit_base.has_value());
    REQUIRE(again[0].team_won);
    REQUIRE(again[1].pitcher_id == "SP2");
    REQUIRE(again[1].exit_kind == ExitKind::mid_inning);
    REQUIRE(again[1].exit_outs == 1);
    REQUIRE(again[1].exit_base == BaseState::from_code("110"));
    REQUIRE(again[1].league == League::NL);
    REQUIRE_FALSE(again[1].team_won);
}

TEST_CASE("a mid-inning start line without exit state fails to read", "[io]") {
    testsupport::TempDir dir;
    std::string path = dir.file("bad.csv");
    std::ofstream out(path);
    out << "pitcher_id,game_id,year,date,park,is_home,league,exit_kind,innings,"
           "exit_outs,exit_base,runs_allowed,team_won\n"
           "SP,G,2019,2019-06-01,HHH,1,AL,mid_inning,5,,,2,1\n";
    out.close();
    REQUIRE_THROWS_WITH(io::read_start_lines(path),
                        Catch::Matchers::ContainsSubstring("exit state"));
}

TEST_CASE("reject csv keeps source file and blanks derived lines", "[io]") {
    std::ostringstream plain;
    io::write_rejects(plain, {{6, "invalid base state '120'", "raw,text"}});
    REQUIRE_THAT(plain.str(), Catch::Matchers::ContainsSubstring("line,reason,raw"));
    REQUIRE_THAT(plain.str(), Catch::Matchers::ContainsSubstring("\"raw,text\""));

    std::ostringstream with_source;
    io::write_rejects_with_source(
        with_source, {{"input.csv", {6, "invalid base state", "raw"}},
                      {"", {0, "game 'G' is tied; cannot assign team_won", "G"}}});
    std::istringstream back(with_source.str());
    csv::Table t = csv::read_table(back);
    REQUIRE(t.header == std::vector<std::string>{"file", "line", "reason", "raw"});
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[0][0] == "input.csv");
    REQUIRE(t.rows[0][1] == "6");
    REQUIRE(t.rows[1][0].empty());
    REQUIRE(t.rows[1][1].empty());  // derived rejects carry no source line
}

TEST_CASE("win grid json round-trips coefficients and evaluations", "[io]") {
    WinProbGrid grid = small_grid();
    io::json j = io::win_grid_to_json(grid);
    REQUIRE(j.at("schema_version").get<int>() == kSchemaVersion);
    REQUIRE(j.at("years") == io::json({2018, 2019}));
    REQUIRE(j.at("r_max").get<int>() == 10);

    // Audit table: one context per (year, league, home flag), 9x11 values.
    REQUIRE(j.at("contexts").size() == 2 * 2 * 2);
    const auto& values = j.at("contexts").at(0).at("values");
    REQUIRE(values.size() == 9);
    REQUIRE(values.at(0).size() == 11);

    WinProbGrid again = io::win_grid_from_json(j);
    REQUIRE(again.window.first == 2018);
    REQUIRE(again.window.last == 2019);
    REQUIRE(again.intercept == grid.intercept);
    REQUIRE(again.home_effect == grid.home_effect);
    REQUIRE(again.nl_effect == grid.nl_effect);
    REQUIRE(again.year_effect == grid.year_effect);
    for (FContext ctx : {FContext{true, League::AL, 2018}, FContext{false, League::NL, 2019}})
        for (int I = 1; I <= WinProbGrid::kMaxInning; ++I)
            for (int R = 0; R <= WinProbGrid::kRMax; ++R)
                REQUIRE(again.eval(ctx, I, R) == grid.eval(ctx, I, R));
}

TEST_CASE("run dist json round-trips all cells", "[io]") {
    std::vector<PlateAppearance> pas;
    for (int k = 0; k < 5; ++k) {
        PlateAppearance pa = make_pa("T" + std::to_string(k), 4, Half::top, "P", 0, 0);
        pa.outs_before = 1;
        pa.base_state_before = BaseState::from_code("100");
        pa.runs_on_play = 0;
        pa.outs_recorded = 0;
        pas.push_back(pa);
        PlateAppearance rest = pa;
        rest.outs_before = 1;
        rest.runs_on_play = k % 2;  // two of five halves score one run
        rest.outs_recorded = 2;
        pas.push_back(rest);
    }
    InningRunDist dist = fit_g(pas, {2019, 2019}, {0});
    io::json j = io::run_dist_to_json(dist);
    REQUIRE(j.at("schema_version").get<int>() == kSchemaVersion);
    REQUIRE(j.at("r_max").get<int>() == 13);
    REQUIRE(j.at("cells").size() == 24);

    InningRunDist again = io::run_dist_from_json(j);
    REQUIRE(again.window.first == dist.window.first);
    for (int s = 0; s < BaseState::kCount; ++s) {
        BaseState st = BaseState::from_index(s);
        for (int o = 0; o < InningRunDist::kOuts; ++o) {
            REQUIRE(again.cell(st, o).count == dist.cell(st, o).count);
            for (int r = 0; r <= InningRunDist::kRMax; ++r)
                REQUIRE(again.cell(st, o).probs[r] == dist.cell(st, o).probs[r]);
        }
    }
    REQUIRE(again.eval(BaseState::from_code("100"), 1, 1) == dist.eval(BaseState::from_code("100"), 1, 1));
}

TEST_CASE("park effects json round-trips", "[io]") {
    ParkEffectSet fx;
    fx.estimator = ParkEstimator::ridge;
    fx.lambda = 3.5;
    fx.window = {2018, 2019};
    fx.centered = true;
    fx.alpha = {{"ANA", 0.01}, {"DEN", 0.22}, {"SFG", -0.23}};

    io::json j = io::park_effects_to_json(fx);
    REQUIRE(j.at("schema_version").get<int>() == kSchemaVersion);
    REQUIRE(j.at("estimator").get<std::string>() == "ridge");

    ParkEffectSet again = io::park_effects_from_json(j);
    REQUIRE(again.estimator == ParkEstimator::ridge);
    REQUIRE(again.lambda == 3.5);
    REQUIRE(again.window.first == 2018);
    REQUIRE(again.centered);
    REQUIRE(again.alpha == fx.alpha);
}

TEST_CASE("gwar csv writers emit audit columns and blank optionals", "[io]") {
    GwarGame g;
    g.pitcher_id = "SP1";
    g.game_id = "G1";
    g.year = 2019;
    g.park = "HHH";
    g.innings = 6;
    g.runs_allowed = 2;
    g.exit_kind = ExitKind::mid_inning;
    g.exit_outs = 1;
    g.exit_base = BaseState::from_code("010");
    g.alpha = 0.05;
    g.raw_gwar = 0.25;
    g.park_adjusted_gwar = 0.375;

    GwarGame done = g;
    done.pitcher_id = "SP2";
    done.exit_kind = ExitKind::end_of_inning;
    done.exit_outs.reset();
    done.exit_base.reset();

    std::ostringstream games;
    io::write_gwar_games(games, {g, done});
    std::istringstream back(games.str());
    csv::Table t = csv::read_table(back);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[0][t.require_column("exit_base")] == "010");
    REQUIRE(t.rows[0][t.require_column("park_adjusted_gwar")] == "0.375");
    REQUIRE(t.rows[1][t.require_column("exit_outs")].empty());
    REQUIRE(t.rows[1][t.require_column("exit_base")].empty());

    GwarSeason s;
    s.pitcher_id = "SP1";
    s.year = 2019;
    s.games = 2;
    s.raw_gwar = 0.5;
    s.gwar = 0.625;
    std::ostringstream seasons;
    io::write_gwar_seasons(seasons, {s});
    std::istringstream sback(seasons.str());
    csv::Table st = csv::read_table(sback);
    REQUIRE(st.rows[0][st.require_column("rescaled_gwar")].empty());

    s.rescaled_gwar = 1.25;
    std::ostringstream seasons2;
    io::write_gwar_seasons(seasons2, {s});
    REQUIRE_THAT(seasons2.str(), Catch::Matchers::ContainsSubstring("1.25"));
}

TEST_CASE("gwar season csv reads back", "[io]") {
    testsupport::TempDir dir;
    GwarSeason s;
    s.pitcher_id = "SP1";
    s.year = 2019;
    s.games = 30;
    s.raw_gwar = 2.125;
    s.gwar = 2.5;
    std::string path = dir.file("gwar_seasons.csv");
    std::ofstream out(path);
    io::write_gwar_seasons(out, {s});
    out.close();

    std::vector<io::SeasonRow> rows = io::read_gwar_seasons(path);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].pitcher_id == "SP1");
    REQUIRE(rows[0].year == 2019);
    REQUIRE(rows[0].games == 30);
    REQUIRE(rows[0].raw_gwar == 2.125);
    REQUIRE(rows[0].gwar == 2.5);
}

TEST_CASE("run histograms read from the per-game table with a year filter", "[io]") {
    testsupport::TempDir dir;
    std::string path = dir.file("gwar_games.csv");
    std::ofstream out(path);
    out << "pitcher_id,year,runs_allowed\n"
           "a,2019,0\n"
           "a,2019,0\n"
           "a,2019,3\n"
           "b,2019,1\n"
           "a,2018,7\n";
    out.close();

    auto all = io::read_run_histograms(path);
    REQUIRE(all["a"][0] == 2);
    REQUIRE(all["a"][7] == 1);

    auto only_2019 = io::read_run_histograms(path, 2019);
    REQUIRE(only_2019["a"] == std::map<int, long>{{0, 2}, {3, 1}});
    REQUIRE(only_2019["b"] == std::map<int, long>{{1, 1}});
    REQUIRE(only_2019.count("a") == 1);
    REQUIRE(only_2019["a"].count(7) == 0);
}

TEST_CASE("reference war table reads with a season filter", "[io]") {
    testsupport::TempDir dir;
    std::string path = dir.file("war.csv");
    std::ofstream out(path);
    out << "pitcher,season,war\n"
           "a,2019,3.5\n"
           "b,2019,-0.25\n"
           "a,2018,1.5\n";
    out.close();

    std::map<std::string, double> war = io::read_reference_war(path, 2019);
    REQUIRE(war.size() == 2);
    REQUIRE(war["a"] == 3.5);
    REQUIRE(war["b"] == -0.25);
}

TEST_CASE("json files load with clear errors", "[io]") {
    testsupport::TempDir dir;
    REQUIRE_THROWS_WITH(io::load_json_file(dir.file("missing.json")),
                        Catch::Matchers::ContainsSubstring("cannot open"));

    std::string bad = dir.file("bad.json");
    std::ofstream out(bad);
    out << "{not json";
    out.close();
    REQUIRE_THROWS_WITH(io::load_json_file(bad), Catch::Matchers::ContainsSubstring("invalid JSON"));
}

TEST_CASE("atomic json writes end with a newline and leave no temp files", "[io]") {
    testsupport::TempDir dir;
    std::string path = dir.file("out.json");
    io::json j{{"schema_version", kSchemaVersion}, {"value", 7}};
    io::write_json_atomic(path, j);

    std::string text = testsupport::slurp(path);
    REQUIRE(!text.empty());
    REQUIRE(text.back() == '\n');
    REQUIRE(io::load_json_file(path) == j);

    int entries = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        (void)e;
        ++entries;
    }
    REQUIRE(entries == 1);
}
