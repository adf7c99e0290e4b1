#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridwar/common.hpp"
#include "gridwar/gwar.hpp"
#include "gridwar/ingest.hpp"
#include "gridwar/io.hpp"
#include "gridwar/park_baselines.hpp"
#include "gridwar/park_design.hpp"
#include "gridwar/park_eval.hpp"
#include "gridwar/park_fit.hpp"
#include "gridwar/park_sim.hpp"
#include "gridwar/run_dist.hpp"
#include "gridwar/win_grid.hpp"

namespace gridwar::cli {

namespace detail {

inline std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ';';
    return s;
}

inline std::vector<std::string> ingest_fields() {
    std::vector<std::string> fields = gridwar::detail::pa_fields();
    fields.push_back("earned_runs_on_play");
    return fields;
}

inline IngestSchema load_schema(const std::string& path) {
    IngestSchema schema;
    if (path.empty()) return schema;
    io::json j = io::load_json_file(path);
    const io::json* cols = &j;
    if (j.contains("columns")) {
        cols = &j.at("columns");
        if (j.contains("delimiter")) {
            std::string d = j.at("delimiter").get<std::string>();
            if (d.size() != 1)
                throw ValidationError("schema map: delimiter must be a single character");
            schema.delimiter = d[0];
        }
    }
    const std::vector<std::string> fields = ingest_fields();
    std::set<std::string> known(fields.begin(), fields.end());
    for (auto it = cols->begin(); it != cols->end(); ++it) {
        if (!known.count(it.key()))
            throw ValidationError("schema map: unknown field '" + it.key() + "'");
        schema.columns[it.key()] = it.value().get<std::string>();
    }
    return schema;
}

// Reads a canonical plate-appearance table; any rejection means the file was
// not produced by this pipeline, so it is fatal rather than logged.
inline std::vector<PlateAppearance> read_canonical_pas(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    IngestResult r = parse_plate_appearances(in, IngestSchema{});
    if (!r.rejects.empty())
        throw ValidationError("'" + path + "' contains " + std::to_string(r.rejects.size()) +
                              " invalid rows; first at line " +
                              std::to_string(r.rejects.front().line) + ": " +
                              r.rejects.front().reason);
    return std::move(r.plate_appearances);
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
    std::vector<std::string> inputs;
    std::string schema_path;
    std::string out_dir;
    bool earned_runs = false;
};

inline void run_ingest(const IngestArgs& args) {
    IngestSchema schema = load_schema(args.schema_path);

    std::vector<PlateAppearance> pas;
    std::vector<std::pair<std::string, RejectRow>> rejects;
    for (const auto& path : args.inputs) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open '" + path + "'");
        IngestResult r = parse_plate_appearances(in, schema);
        pas.insert(pas.end(), r.plate_appearances.begin(), r.plate_appearances.end());
        for (auto& rej : r.rejects) rejects.emplace_back(path, std::move(rej));
    }

    std::vector<HalfInningRecord> halves = build_half_innings(pas, &std::cerr);
    std::vector<RejectRow> derived;
    std::vector<StartLine> starts =
        build_start_lines(pas, &derived, &std::cerr, {args.earned_runs});
    for (auto& rej : derived) rejects.emplace_back("", std::move(rej));

    std::filesystem::create_directories(args.out_dir);
    auto path = [&](const char* name) {
        return (std::filesystem::path(args.out_dir) / name).string();
    };
    csv::atomic_write(path("plate_appearances.csv"),
                      [&](std::ostream& out) { io::write_plate_appearances(out, pas); });
    csv::atomic_write(path("half_innings.csv"),
                      [&](std::ostream& out) { io::write_half_innings(out, halves); });
    csv::atomic_write(path("start_lines.csv"),
                      [&](std::ostream& out) { io::write_start_lines(out, starts); });
    csv::atomic_write(path("rejects.csv"),
                      [&](std::ostream& out) { io::write_rejects_with_source(out, rejects); });

    std::cout << "ingest: " << pas.size() << " plate appearances, " << rejects.size()
              << " rejects, " << halves.size() << " half-innings, " << starts.size()
              << " start lines -> " << args.out_dir << "\n";
}

// ---- fit-f ------------------------------------------------------------------

struct FitFArgs {
    std::string starts_path;
    std::string years;
    std::string out = "f_grid.json";
};

inline void run_fit_f(const FitFArgs& args) {
    YearWindow w = parse_year_window(args.years);
    std::vector<StartLine> starts = io::read_start_lines(args.starts_path);
    std::vector<StartLine> in_window;
    for (auto& s : starts)
        if (w.contains(s.year)) in_window.push_back(std::move(s));
    if (in_window.empty())
        throw ValidationError("no start lines in window " + std::to_string(w.first) + ":" +
                              std::to_string(w.last));
    WinProbGrid grid = fit_f(in_window);
    io::write_json_atomic(args.out, io::win_grid_to_json(grid));
    std::cout << "fit-f: " << in_window.size() << " starts, years " << grid.window.first << ":"
              << grid.window.last << " -> " << args.out << "\n";
}

// ---- fit-g --------------------------------------------------------------------

struct FitGArgs {
    std::string pa_path;
    std::string years;
    int min_cell = 100;
    std::string out = "g_dist.json";
};

inline void run_fit_g(const FitGArgs& args) {
    YearWindow w = parse_year_window(args.years);
    std::vector<PlateAppearance> pas = read_canonical_pas(args.pa_path);
    RunDistOptions opts;
    opts.min_cell_count = args.min_cell;
    InningRunDist dist = fit_g(std::move(pas), w, opts);
    io::write_json_atomic(args.out, io::run_dist_to_json(dist));
    std::cout << "fit-g: years " << w.first << ":" << w.last << " -> " << args.out << "\n";
}

// ---- fit-park -------------------------------------------------------------------

struct FitParkArgs {
    std::string half_innings_path;
    std::string years;
    std::string method = "ridge";
    double lambda = 0.25;
    std::optional<double> fg_weight;
    std::string out = "park_fx.json";
};

inline ParkEffectSet fit_baseline_parks(const std::vector<HalfInningRecord>& halves,
                                        YearWindow w, ParkEstimator est,
                                        std::optional<double> fg_weight) {
    auto teams = aggregate_team_runs(halves, w);
    if (teams.empty()) throw ValidationError("no half-innings in window");
    double y_bar = mean_half_inning_runs(halves, w);

    std::map<std::string, std::vector<double>> by_park;
    for (const auto& [name, t] : teams) {
        double factor = est == ParkEstimator::espn_additive
                            ? espn_park_factor(t)
                            : fangraphs_park_factor(t, w.span(), static_cast<int>(teams.size()),
                                                    fg_weight);
        by_park[t.home_park].push_back(to_additive(factor, y_bar));
    }

    ParkEffectSet fx;
    fx.estimator = est;
    fx.lambda = 0.0;
    fx.window = w;
    double mean = 0.0;
    for (const auto& [park, values] : by_park) {
        double v = 0.0;
        for (double x : values) v += x;
        v /= static_cast<double>(values.size());
        fx.alpha[park] = v;
        mean += v;
    }
    mean /= static_cast<double>(fx.alpha.size());
    for (auto& [park, v] : fx.alpha) v -= mean;
    fx.centered = true;
    return fx;
}

inline void run_fit_park(const FitParkArgs& args) {
    YearWindow w = parse_year_window(args.years);
    std::vector<HalfInningRecord> halves = io::read_half_innings(args.half_innings_path);
    ParkEstimator est = park_estimator_from_string(args.method);

    ParkEffectSet fx;
    switch (est) {
        case ParkEstimator::naive_ols:
            fx = fit_park_naive_ols(build_park_design(halves, w), nullptr, w);
            break;
        case ParkEstimator::ols:
            fx = fit_park_ols(build_park_design(halves, w), nullptr, w);
            break;
        case ParkEstimator::three_part_ols:
            fx = fit_park_three_part_ols(build_park_design(halves, w), nullptr, w);
            break;
        case ParkEstimator::ridge:
            fx = fit_park_ridge(build_park_design(halves, w), args.lambda, nullptr, w);
            break;
        case ParkEstimator::espn_additive:
        case ParkEstimator::fangraphs_additive:
            fx = fit_baseline_parks(halves, w, est, args.fg_weight);
            break;
    }
    io::write_json_atomic(args.out, io::park_effects_to_json(fx));
    std::cout << "fit-park: " << to_string(est) << ", " << fx.alpha.size() << " parks -> "
              << args.out << "\n";
}

// ---- tune-lambda -------------------------------------------------------------------

struct TuneLambdaArgs {
    std::string half_innings_path;
    std::string train;
    std::string validate;
    std::vector<double> grid = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
    std::string out = "tuned_lambda.json";
};

inline void run_tune_lambda(const TuneLambdaArgs& args) {
    YearWindow train = parse_year_window(args.train);
    YearWindow validate = parse_year_window(args.validate);
    std::vector<HalfInningRecord> halves = io::read_half_innings(args.half_innings_path);
    LambdaSweepResult sweep = tune_lambda(halves, train, validate, args.grid);

    io::json entries = io::json::array();
    for (const auto& e : sweep.entries)
        entries.push_back({{"lambda", e.lambda},
                           {"rmse", e.rmse},
                           {"ecological_rmse", e.ecological_rmse}});
    io::json j{{"schema_version", kSchemaVersion},
               {"train", {train.first, train.last}},
               {"validate", {validate.first, validate.last}},
               {"entries", std::move(entries)},
               {"best_lambda", sweep.best_lambda}};
    io::write_json_atomic(args.out, j);
    std::cout << "tune-lambda: best lambda " << sweep.best_lambda << " -> " << args.out << "\n";
}

// ---- gwar ----------------------------------------------------------------------------

struct GwarArgs {
    std::string starts_path;
    std::string f_path;
    std::string g_path;
    std::string park_path;
    double w_rep = 0.41;
    bool no_clamp_shift = false;
    std::string reference_path;
    std::string out = "gwar_games.csv,gwar_seasons.csv";
};

inline void run_gwar(const GwarArgs& args) {
    auto comma = args.out.find(',');
    if (comma == std::string::npos || args.out.find(',', comma + 1) != std::string::npos)
        throw ValidationError("--out expects two comma-separated paths: GAMES.csv,SEASONS.csv");
    std::string games_path = args.out.substr(0, comma);
    std::string seasons_path = args.out.substr(comma + 1);

    WinProbGrid f = io::win_grid_from_json(io::load_json_file(args.f_path));
    InningRunDist g = io::run_dist_from_json(io::load_json_file(args.g_path));
    ParkEffectSet parks = io::park_effects_from_json(io::load_json_file(args.park_path));

    GwarOptions opts;
    opts.w_rep = ReplacementLevel::checked(args.w_rep).w_rep;
    opts.clamp_shift = !args.no_clamp_shift;

    std::vector<StartLine> starts = io::read_start_lines(args.starts_path);
    std::vector<GwarGame> games;
    std::size_t skipped = 0;
    for (const auto& s : starts) {
        if (!f.in_window(s.year)) {
            ++skipped;
            continue;
        }
        games.push_back(gwar_game(s, f, g, parks, opts));
    }
    if (skipped)
        std::cerr << "note: skipped " << skipped << " starts outside the win grid's years\n";
    std::vector<GwarSeason> seasons = gwar_seasons(games);

    if (!args.reference_path.empty()) {
        std::set<int> years;
        for (const auto& s : seasons) years.insert(s.year);
        bool any = false;
        for (int year : years) {
            std::map<std::string, double> gmap;
            for (const auto& s : seasons)
                if (s.year == year) gmap[s.pitcher_id] = s.gwar;
            std::map<std::string, double> ref = io::read_reference_war(args.reference_path, year);
            bool intersects = false;
            for (const auto& [p, v] : gmap)
                if (ref.count(p)) intersects = true;
            if (!intersects) {
                std::cerr << "note: reference table covers no pitcher of " << year << "\n";
                continue;
            }
            RescaleResult rr = rescale(gmap, ref);
            for (auto& s : seasons)
                if (s.year == year) s.rescaled_gwar = rr.rescaled.at(s.pitcher_id);
            any = true;
        }
        if (!any)
            throw ValidationError("reference table shares no pitcher-season with the data");
    }

    csv::atomic_write(games_path, [&](std::ostream& out) { io::write_gwar_games(out, games); });
    csv::atomic_write(seasons_path,
                      [&](std::ostream& out) { io::write_gwar_seasons(out, seasons); });
    std::cout << "gwar: " << games.size() << " games, " << seasons.size() << " seasons -> "
              << games_path << ", " << seasons_path << "\n";
}

// ---- compare ----------------------------------------------------------------------------

struct CompareArgs {
    std::string seasons_path;
    std::string reference_path;
    int year = 0;
    std::string games_path;
    int top = 5;
    std::string out = "compare.json";
};

inline io::json ranked_to_json(const RankedPitcher& r, int rank) {
    io::json j{{"rank", rank}, {"pitcher", r.pitcher_id}, {"gwar", r.gwar}};
    if (r.rescaled) j["rescaled"] = *r.rescaled;
    if (r.reference) j["reference"] = *r.reference;
    if (r.diff) j["diff"] = *r.diff;
    return j;
}

inline void run_compare(const CompareArgs& args) {
    std::vector<io::SeasonRow> rows = io::read_gwar_seasons(args.seasons_path);
    if (rows.empty()) throw ValidationError("'" + args.seasons_path + "' has no season rows");

    int year = args.year;
    if (year == 0) {
        std::set<int> years;
        for (const auto& r : rows) years.insert(r.year);
        if (years.size() > 1)
            throw ValidationError("seasons table spans multiple years; pass --year");
        year = *years.begin();
    }

    std::map<std::string, double> gwar;
    for (const auto& r : rows)
        if (r.year == year) gwar[r.pitcher_id] = r.gwar;
    if (gwar.empty())
        throw ValidationError("no season rows for year " + std::to_string(year));
    std::map<std::string, double> reference =
        io::read_reference_war(args.reference_path, year);
    if (reference.empty())
        throw ValidationError("'" + args.reference_path + "' has no rows for year " +
                              std::to_string(year));

    RescaleResult rr = rescale(gwar, reference);
    RankReport report = rank_and_report(gwar, reference, static_cast<std::size_t>(args.top));

    double sum_rescaled = 0.0, sum_reference = 0.0;
    for (const auto& p : rr.intersection) {
        sum_rescaled += rr.rescaled.at(p);
        sum_reference += reference.at(p);
    }

    io::json ranking = io::json::array();
    for (std::size_t i = 0; i < report.ranking.size(); ++i)
        ranking.push_back(ranked_to_json(report.ranking[i], static_cast<int>(i) + 1));
    io::json undervalued = io::json::array(), overvalued = io::json::array();
    for (std::size_t i = 0; i < report.undervalued.size(); ++i)
        undervalued.push_back(ranked_to_json(report.undervalued[i], static_cast<int>(i) + 1));
    for (std::size_t i = 0; i < report.overvalued.size(); ++i)
        overvalued.push_back(ranked_to_json(report.overvalued[i], static_cast<int>(i) + 1));

    io::json j{{"schema_version", kSchemaVersion},
               {"year", year},
               {"rescale_factor", rr.factor},
               {"pitchers_compared", rr.intersection.size()},
               {"sum_rescaled", sum_rescaled},
               {"sum_reference", sum_reference},
               {"ranking", std::move(ranking)},
               {"undervalued", std::move(undervalued)},
               {"overvalued", std::move(overvalued)}};

    // Difference histogram of runs allowed: the GWAR leader against the
    // reference-WAR leader (falling back to the runner-up when they agree).
    if (!args.games_path.empty()) {
        auto hists = io::read_run_histograms(args.games_path, year);
        std::string a = report.ranking.front().pitcher_id;
        std::string b;
        for (const auto& p : rr.intersection)
            if (b.empty() || reference.at(p) > reference.at(b)) b = p;
        if (b == a) {
            b.clear();
            if (report.ranking.size() > 1) b = report.ranking[1].pitcher_id;
        }
        if (!b.empty() && hists.count(a) && hists.count(b)) {
            io::json bins = io::json::array();
            for (const auto& bin : compare_histograms(hists.at(a), hists.at(b)))
                bins.push_back({{"runs", bin.runs}, {"a", bin.a}, {"b", bin.b}, {"diff", bin.diff}});
            j["histogram"] = {{"pitcher_a", a}, {"pitcher_b", b}, {"bins", std::move(bins)}};
        }
    }

    io::write_json_atomic(args.out, j);
    std::cout << "compare: year " << year << ", " << rr.intersection.size()
              << " shared pitchers, factor " << rr.factor << " -> " << args.out << "\n";
}

// ---- simulate-park -----------------------------------------------------------------------

struct SimulateParkArgs {
    int study = 1;
    int sims = 25;
    std::uint64_t seed = 0;
    std::string noise = "half-normal";
    double ridge_lambda = 80.0;
    double def_div_sd = 0.0;
    std::string half_innings_path;
    std::string years = "2017:2019";
    std::string out = "report.json";
};

inline void run_simulate_park(const SimulateParkArgs& args) {
    SimulationSpec spec;
    if (args.study == 1)
        spec.study = SimStudy::independent;
    else if (args.study == 2)
        spec.study = SimStudy::divisional_outlier;
    else
        throw ValidationError("--study must be 1 or 2");
    spec.n_sims = args.sims;
    spec.seed = args.seed;
    if (args.noise == "half-normal")
        spec.noise = SimNoise::additive_half_normal;
    else if (args.noise == "truncated-redraw")
        spec.noise = SimNoise::truncated_redraw;
    else
        throw ValidationError("--noise must be 'half-normal' or 'truncated-redraw'");
    spec.ridge_lambda = args.ridge_lambda;
    spec.def_div_sd = args.def_div_sd;

    ParkDesign design;
    if (args.half_innings_path.empty()) {
        design = build_synthetic_design();
    } else {
        YearWindow w = parse_year_window(args.years);
        design = build_park_design(io::read_half_innings(args.half_innings_path), w);
    }

    SimulationReport report = simulate_study(spec, design);

    io::json methods = io::json::array();
    for (const auto& m : report.methods) {
        io::json entry{{"method", m.method},
                       {"l2", m.l2},
                       {"per_park_rms", m.per_park_rms},
                       {"per_draw_l2", m.per_draw_l2}};
        if (spec.study == SimStudy::divisional_outlier) {
            entry["outlier_abs"] = m.outlier_abs;
            entry["non_outlier_l2"] = m.non_outlier_l2;
        }
        methods.push_back(std::move(entry));
    }
    io::json j{{"schema_version", kSchemaVersion},
               {"study", to_string(spec.study)},
               {"n_sims", spec.n_sims},
               {"seed", spec.seed},
               {"noise", to_string(spec.noise)},
               {"ridge_lambda", spec.ridge_lambda},
               {"n_parks", report.n_parks},
               {"methods", std::move(methods)},
               {"ridge_wins_vs_ols", report.ridge_wins_vs_ols}};
    if (spec.study == SimStudy::divisional_outlier) {
        j["def_div_sd"] = spec.def_div_sd;
        j["outlier_park"] = spec.outlier_park;
        j["outlier_effect"] = spec.outlier_effect;
    }
    io::write_json_atomic(args.out, j);
    std::cout << "simulate-park: study " << args.study << ", " << spec.n_sims << " draws -> "
              << args.out << "\n";
}

}  // namespace detail

inline int run(int argc, char** argv) {
    CLI::App app{"Grid-based starting-pitcher valuation pipeline"};
    app.require_subcommand(1);

    detail::IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Parse play-by-play CSVs into pipeline tables");
    ingest->add_option("--input", ingest_args.inputs, "Source CSV file(s)")->required();
    ingest->add_option("--schema", ingest_args.schema_path, "Column-map JSON");
    ingest->add_option("--out", ingest_args.out_dir, "Output directory")->required();
    ingest->add_flag("--earned-runs", ingest_args.earned_runs,
                     "Charge earned runs (requires an earned_runs_on_play column)");
    ingest->callback([&] { detail::run_ingest(ingest_args); });

    detail::FitFArgs fit_f_args;
    auto* fit_f = app.add_subcommand("fit-f", "Fit the win-probability grid f(I,R)");
    fit_f->add_option("--starts", fit_f_args.starts_path, "start_lines.csv")->required();
    fit_f->add_option("--years", fit_f_args.years, "Window FIRST:LAST")->required();
    fit_f->add_option("--out", fit_f_args.out, "Output JSON");
    fit_f->callback([&] { detail::run_fit_f(fit_f_args); });

    detail::FitGArgs fit_g_args;
    auto* fit_g = app.add_subcommand("fit-g", "Fit the runs-to-inning-end distribution g(R|S,O)");
    fit_g->add_option("--pa", fit_g_args.pa_path, "plate_appearances.csv")->required();
    fit_g->add_option("--years", fit_g_args.years, "Window FIRST:LAST")->required();
    fit_g->add_option("--min-cell", fit_g_args.min_cell, "Minimum observations per (S,O) cell");
    fit_g->add_option("--out", fit_g_args.out, "Output JSON");
    fit_g->callback([&] { detail::run_fit_g(fit_g_args); });

    detail::FitParkArgs fit_park_args;
    auto* fit_park = app.add_subcommand("fit-park", "Estimate additive park effects");
    fit_park->add_option("--half-innings", fit_park_args.half_innings_path, "half_innings.csv")
        ->required();
    fit_park->add_option("--years", fit_park_args.years, "Window FIRST:LAST")->required();
    fit_park->add_option("--method", fit_park_args.method,
                         "naive_ols|ols|three_part_ols|ridge|espn|fangraphs");
    fit_park->add_option("--lambda", fit_park_args.lambda, "Ridge penalty");
    double fg_weight = 0.0;
    auto* fg_opt = fit_park->add_option("--fg-weight", fg_weight,
                                        "Regression weight for non-3-year fangraphs windows");
    fit_park->add_option("--out", fit_park_args.out, "Output JSON");
    fit_park->callback([&] {
        if (fg_opt->count()) fit_park_args.fg_weight = fg_weight;
        detail::run_fit_park(fit_park_args);
    });

    detail::TuneLambdaArgs tune_args;
    auto* tune = app.add_subcommand("tune-lambda", "Sweep the ridge penalty on held-out years");
    tune->add_option("--half-innings", tune_args.half_innings_path, "half_innings.csv")
        ->required();
    tune->add_option("--train", tune_args.train, "Training window FIRST:LAST")->required();
    tune->add_option("--validate", tune_args.validate, "Validation window FIRST:LAST")
        ->required();
    tune->add_option("--grid", tune_args.grid, "Penalty grid values (comma-separated)")
        ->delimiter(',');
    tune->add_option("--out", tune_args.out, "Output JSON");
    tune->callback([&] { detail::run_tune_lambda(tune_args); });

    detail::GwarArgs gwar_args;
    auto* gwar = app.add_subcommand("gwar", "Per-game and seasonal grid WAR");
    gwar->add_option("--starts", gwar_args.starts_path, "start_lines.csv")->required();
    gwar->add_option("--f", gwar_args.f_path, "f_grid.json")->required();
    gwar->add_option("--g", gwar_args.g_path, "g_dist.json")->required();
    gwar->add_option("--park", gwar_args.park_path, "park_fx.json")->required();
    gwar->add_option("--wrep", gwar_args.w_rep, "Replacement-level win probability");
    gwar->add_flag("--no-clamp-shift", gwar_args.no_clamp_shift,
                   "Allow the Taylor shift h = I|alpha| to exceed 1");
    gwar->add_option("--reference", gwar_args.reference_path,
                     "Reference WAR CSV (pitcher,season,war) for rescaling");
    gwar->add_option("--out", gwar_args.out, "GAMES.csv,SEASONS.csv");
    gwar->callback([&] { detail::run_gwar(gwar_args); });

    detail::CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "Rank seasons against a reference WAR table");
    compare->add_option("--seasons", compare_args.seasons_path, "gwar_seasons.csv")->required();
    compare->add_option("--reference", compare_args.reference_path,
                        "Reference WAR CSV (pitcher,season,war)")
        ->required();
    compare->add_option("--year", compare_args.year, "Season to compare (default: sole year)");
    compare->add_option("--games", compare_args.games_path,
                        "gwar_games.csv for runs-allowed difference histograms");
    compare->add_option("--top", compare_args.top, "Extremes list length");
    compare->add_option("--out", compare_args.out, "Output JSON");
    compare->callback([&] { detail::run_compare(compare_args); });

    detail::SimulateParkArgs sim_args;
    auto* sim = app.add_subcommand("simulate-park", "Estimator comparison on synthetic leagues");
    sim->add_option("--study", sim_args.study, "1 = independent, 2 = divisional outlier")
        ->required();
    sim->add_option("--sims", sim_args.sims, "Number of truth draws");
    sim->add_option("--seed", sim_args.seed, "Master RNG seed")->required();
    sim->add_option("--noise", sim_args.noise, "half-normal|truncated-redraw");
    sim->add_option("--lambda-sim", sim_args.ridge_lambda, "Ridge penalty inside the study");
    sim->add_option("--def-div-sd", sim_args.def_div_sd,
                    "Divisional spread of defense means (study 2)");
    sim->add_option("--half-innings", sim_args.half_innings_path,
                    "Use a real half_innings.csv design instead of the synthetic league");
    sim->add_option("--years", sim_args.years, "Window for --half-innings");
    sim->add_option("--out", sim_args.out, "Output JSON");
    sim->callback([&] { detail::run_simulate_park(sim_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << detail::one_line(e.what()) << "\n" << app.help();
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << detail::one_line(e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << detail::one_line(e.what()) << "\n";
        return 2;
    }
    return 0;
}

}  // namespace gridwar::cli
