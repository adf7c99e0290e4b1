#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridwar/park_fit.hpp"
#include "gridwar/run_dist.hpp"
#include "gridwar/types.hpp"
#include "gridwar/win_grid.hpp"

namespace gridwar {

// Win probability of an average team starting a replacement-level pitcher.
struct ReplacementLevel {
    double w_rep = 0.41;

    static ReplacementLevel checked(double value) {
        if (!(value > 0.294 && value < 0.5))
            throw ValidationError("w_rep must lie in (0.294, 0.5); got " + std::to_string(value));
        return {value};
    }
};

// Value of a start completed through I innings with R runs allowed.
inline double gwar_complete(const WinProbGrid& f, const FContext& ctx, int I, int R,
                            double w_rep) {
    return f.eval(ctx, I, R) - w_rep;
}

// Mid-inning exit: expected win probability once the inning finishes, taken
// over the run distribution of the exit state.
inline double gwar_mid_inning(const WinProbGrid& f, const InningRunDist& g, const FContext& ctx,
                              int I, int R, BaseState S, int O, double w_rep) {
    double acc = 0.0;
    for (int r = 0; r <= InningRunDist::kRMax; ++r)
        acc += g.eval(S, O, r) * f.eval(ctx, I, r + R);
    return acc - w_rep;
}

// First-order interpolation of f(I, R - I*alpha): a park that inflates
// scoring by alpha runs per half-inning is worth I*alpha expected runs over
// I innings, so shift the run axis by that much. h is the fractional shift;
// at the grid edge the shift extrapolates beyond the endpoint. h is clamped
// to one grid step by default (|alpha| up to ~0.12 at I=9 would otherwise
// extrapolate past the neighboring cell); `clamp_shift=false` keeps the raw
// value.
inline double park_adjusted_f(const WinProbGrid& f, const FContext& ctx, int I, int R,
                              double alpha, bool clamp_shift = true) {
    if (alpha == 0.0) return f.eval(ctx, I, R);
    double h = static_cast<double>(I) * std::abs(alpha);
    if (clamp_shift) h = std::min(h, 1.0);
    int r = std::min(R, WinProbGrid::kRMax);
    if (alpha > 0.0) {
        if (r > 0) return (1.0 - h) * f.eval(ctx, I, r) + h * f.eval(ctx, I, r - 1);
        return (1.0 + h) * f.eval(ctx, I, 0) - h * f.eval(ctx, I, 1);
    }
    if (r < WinProbGrid::kRMax) return (1.0 - h) * f.eval(ctx, I, r) + h * f.eval(ctx, I, r + 1);
    return (1.0 + h) * f.eval(ctx, I, WinProbGrid::kRMax) - h * f.eval(ctx, I, WinProbGrid::kRMax - 1);
}

struct GwarGame {
    std::string pitcher_id;
    std::string game_id;
    int year = 0;
    double raw_gwar = 0.0;
    double park_adjusted_gwar = 0.0;
    // Echo of the inputs for audit.
    int innings = 0;
    int runs_allowed = 0;
    ExitKind exit_kind = ExitKind::end_of_inning;
    std::optional<BaseState> exit_base;
    std::optional<int> exit_outs;
    std::string park;
    double alpha = 0.0;
};

struct GwarOptions {
    double w_rep = 0.41;
    bool clamp_shift = true;
};

// One start valued with and without its park adjustment. The Taylor step can
// extrapolate slightly outside (0,1) at the grid edges; the aggregated win
// probability is pinned back into the open unit interval so game values stay
// within (-w_rep, 1-w_rep).
inline GwarGame gwar_game(const StartLine& start, const WinProbGrid& f, const InningRunDist& g,
                          const ParkEffectSet& parks, const GwarOptions& opts = {}) {
    auto it = parks.alpha.find(start.park);
    if (it == parks.alpha.end())
        throw ValidationError("gwar: no park effect for '" + start.park + "'");
    double alpha = it->second;

    FContext ctx{start.is_home, start.league, start.year};

    auto win_prob = [&](double a) {
        double w;
        if (start.exit_kind == ExitKind::end_of_inning) {
            w = park_adjusted_f(f, ctx, start.innings, start.runs_allowed, a, opts.clamp_shift);
        } else {
            w = 0.0;
            for (int r = 0; r <= InningRunDist::kRMax; ++r)
                w += g.eval(*start.exit_base, *start.exit_outs, r) *
                     park_adjusted_f(f, ctx, start.innings, r + start.runs_allowed, a,
                                     opts.clamp_shift);
        }
        return std::clamp(w, 1e-12, 1.0 - 1e-12);
    };

    GwarGame out;
    out.pitcher_id = start.pitcher_id;
    out.game_id = start.game_id;
    out.year = start.year;
    out.raw_gwar = win_prob(0.0) - opts.w_rep;
    out.park_adjusted_gwar = win_prob(alpha) - opts.w_rep;
    out.innings = start.innings;
    out.runs_allowed = start.runs_allowed;
    out.exit_kind = start.exit_kind;
    out.exit_base = start.exit_base;
    out.exit_outs = start.exit_outs;
    out.park = start.park;
    out.alpha = alpha;
    return out;
}

struct GwarSeason {
    std::string pitcher_id;
    int year = 0;
    double gwar = 0.0;      // sum of park-adjusted game values, input order
    double raw_gwar = 0.0;  // sum of unadjusted game values
    int games = 0;
    std::optional<double> rescaled_gwar;
};

// Seasonal totals: plain left-to-right sums over each pitcher's games in
// input order, so a season is bit-for-bit the sum of its games.
inline std::vector<GwarSeason> gwar_seasons(const std::vector<GwarGame>& games) {
    if (games.empty()) throw ValidationError("gwar: no games to aggregate");
    std::vector<GwarSeason> seasons;
    std::map<std::pair<std::string, int>, std::size_t> index;
    for (const auto& game : games) {
        auto key = std::make_pair(game.pitcher_id, game.year);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, seasons.size());
            GwarSeason s;
            s.pitcher_id = game.pitcher_id;
            s.year = game.year;
            seasons.push_back(std::move(s));
            it = index.find(key);
        }
        GwarSeason& s = seasons[it->second];
        s.gwar += game.park_adjusted_gwar;
        s.raw_gwar += game.raw_gwar;
        s.games += 1;
    }
    return seasons;
}

// Rescales so that total value matches a reference WAR over the pitchers
// both sides cover; the single positive factor preserves every ranking.
struct RescaleResult {
    double factor = 1.0;
    std::map<std::string, double> rescaled;  // every input pitcher, scaled
    std::vector<std::string> intersection;
};

inline RescaleResult rescale(const std::map<std::string, double>& gwar,
                             const std::map<std::string, double>& reference) {
    RescaleResult out;
    double sum_gwar = 0.0, sum_ref = 0.0;
    for (const auto& [pitcher, value] : gwar) {
        auto it = reference.find(pitcher);
        if (it == reference.end()) continue;
        out.intersection.push_back(pitcher);
        sum_gwar += value;
        sum_ref += it->second;
    }
    if (out.intersection.empty())
        throw ValidationError("rescale: no pitchers shared with the reference set");
    if (sum_gwar == 0.0) throw ValidationError("rescale: shared GWAR sums to zero");
    out.factor = sum_ref / sum_gwar;
    for (const auto& [pitcher, value] : gwar) out.rescaled[pitcher] = value * out.factor;
    return out;
}

// Per-R difference between two pitchers' runs-allowed histograms.
struct HistogramDiffBin {
    int runs = 0;
    long a = 0;
    long b = 0;
    long diff = 0;  // a - b
};

inline std::vector<HistogramDiffBin> compare_histograms(const std::map<int, long>& a,
                                                        const std::map<int, long>& b) {
    std::map<int, HistogramDiffBin> bins;
    for (const auto& [r, c] : a) {
        bins[r].runs = r;
        bins[r].a = c;
    }
    for (const auto& [r, c] : b) {
        bins[r].runs = r;
        bins[r].b = c;
    }
    std::vector<HistogramDiffBin> out;
    for (auto& [r, bin] : bins) {
        bin.diff = bin.a - bin.b;
        out.push_back(bin);
    }
    return out;
}

struct RankedPitcher {
    std::string pitcher_id;
    double gwar = 0.0;
    std::optional<double> rescaled;
    std::optional<double> reference;
    std::optional<double> diff;  // rescaled - reference
};

struct RankReport {
    std::vector<RankedPitcher> ranking;        // by gwar descending, id ascending on ties
    std::vector<RankedPitcher> undervalued;    // largest rescaled - reference
    std::vector<RankedPitcher> overvalued;     // smallest rescaled - reference
};

inline RankReport rank_and_report(const std::map<std::string, double>& gwar,
                                  const std::map<std::string, double>& reference,
                                  std::size_t extremes = 5) {
    RankReport report;
    std::optional<RescaleResult> scaled;
    if (!reference.empty()) scaled = rescale(gwar, reference);

    for (const auto& [pitcher, value] : gwar) {
        RankedPitcher r;
        r.pitcher_id = pitcher;
        r.gwar = value;
        if (scaled) {
            r.rescaled = scaled->rescaled.at(pitcher);
            auto it = reference.find(pitcher);
            if (it != reference.end()) {
                r.reference = it->second;
                r.diff = *r.rescaled - it->second;
            }
        }
        report.ranking.push_back(std::move(r));
    }
    std::sort(report.ranking.begin(), report.ranking.end(),
              [](const RankedPitcher& x, const RankedPitcher& y) {
                  if (x.gwar != y.gwar) return x.gwar > y.gwar;
                  return x.pitcher_id < y.pitcher_id;
              });

    std::vector<RankedPitcher> with_diff;
    for (const auto& r : report.ranking)
        if (r.diff) with_diff.push_back(r);
    std::sort(with_diff.begin(), with_diff.end(), [](const RankedPitcher& x, const RankedPitcher& y) {
        if (*x.diff != *y.diff) return *x.diff > *y.diff;
        return x.pitcher_id < y.pitcher_id;
    });
    for (std::size_t i = 0; i < std::min(extremes, with_diff.size()); ++i)
        report.undervalued.push_back(with_diff[i]);
    for (std::size_t i = 0; i < std::min(extremes, with_diff.size()); ++i)
        report.overvalued.push_back(with_diff[with_diff.size() - 1 - i]);
    return report;
}

}  // namespace gridwar
