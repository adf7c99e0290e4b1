#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "gridwar/ingest.hpp"
#include "gridwar/types.hpp"

namespace gridwar {

// Empirical distribution g(R | S, O): probability exactly R further runs
// score from base-state S with O outs through the end of the half-inning.
// Pooled over innings 1-8 (the ninth is censored by walk-offs); mass above
// R=13 is folded into the R=13 bin so each cell stays a proper distribution.
class InningRunDist {
public:
    static constexpr int kRMax = 13;
    static constexpr int kOuts = 3;

    struct Cell {
        std::array<double, kRMax + 1> probs{};
        long count = 0;
    };

    YearWindow window;

    Cell& cell(BaseState s, int o) { return cells_[s.index() * kOuts + o]; }
    const Cell& cell(BaseState s, int o) const { return cells_[s.index() * kOuts + o]; }

    double eval(BaseState s, int o, int r) const {
        if (o < 0 || o >= kOuts) throw ValidationError("run dist: outs out of {0,1,2}");
        const Cell& c = cell(s, o);
        if (c.count == 0)
            throw ValidationError("run dist: no data for state (" + std::string(s.code()) + ", " +
                                  std::to_string(o) + ")");
        if (r < 0) throw ValidationError("run dist: negative runs");
        return r > kRMax ? 0.0 : c.probs[r];
    }

private:
    std::array<Cell, BaseState::kCount * kOuts> cells_{};
};

struct RunDistOptions {
    long min_cell_count = 100;
};

// Each plate appearance in innings 1-8 contributes one observation to the
// cell of its opening state: the runs scored from that point (the play
// itself included) through the end of the half-inning.
inline InningRunDist fit_g(std::vector<PlateAppearance> pas, YearWindow window,
                           const RunDistOptions& opts = {}) {
    std::stable_sort(pas.begin(), pas.end(), detail::group_less);

    std::array<std::array<long, InningRunDist::kRMax + 1>, BaseState::kCount * 3> counts{};

    for (std::size_t i = 0; i < pas.size();) {
        std::size_t j = i;
        while (j < pas.size() && detail::same_group(pas[i], pas[j])) ++j;

        const PlateAppearance& head = pas[i];
        if (window.contains(head.year) && head.inning >= 1 && head.inning <= 8) {
            // Suffix sums of runs from each plate appearance to inning end.
            int suffix = 0;
            std::vector<int> to_end(j - i);
            for (std::size_t k = j; k-- > i;) {
                suffix += pas[k].runs_on_play;
                to_end[k - i] = suffix;
            }
            for (std::size_t k = i; k < j; ++k) {
                const PlateAppearance& pa = pas[k];
                int r = std::min(to_end[k - i], InningRunDist::kRMax);
                counts[pa.base_state_before.index() * 3 + pa.outs_before][r] += 1;
            }
        }
        i = j;
    }

    InningRunDist dist;
    dist.window = window;
    std::string deficient;
    for (int s = 0; s < BaseState::kCount; ++s) {
        for (int o = 0; o < InningRunDist::kOuts; ++o) {
            long total = 0;
            for (long c : counts[s * 3 + o]) total += c;
            if (total < opts.min_cell_count) {
                if (!deficient.empty()) deficient += ", ";
                deficient += "(" + std::string(BaseState::from_index(s).code()) + "," +
                             std::to_string(o) + "):" + std::to_string(total);
                continue;
            }
            if (total == 0) continue;  // permitted empty cell: stays all-zero, eval refuses it
            auto& cell = dist.cell(BaseState::from_index(s), o);
            cell.count = total;
            for (int r = 0; r <= InningRunDist::kRMax; ++r)
                cell.probs[r] = static_cast<double>(counts[s * 3 + o][r]) /
                                static_cast<double>(total);
        }
    }
    if (!deficient.empty())
        throw ValidationError("run dist: cells below minimum count " +
                              std::to_string(opts.min_cell_count) + ": " + deficient);
    return dist;
}

}  // namespace gridwar
