#include "hilite/learning.hpp"

#include "hilite/errors.hpp"
#include "hilite/random.hpp"
#include "hilite/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

namespace hilite {

namespace {

constexpr std::string_view kPairsHeader = "game_id,basket_a,basket_b,votes_a,votes_b";

} // namespace

std::vector<ABPair> parse_pairs_csv(std::string_view text, const std::string& source) {
    std::vector<ABPair> pairs;
    const auto lines = split_lines(text);
    bool header_seen = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (trim(lines[i]).empty()) {
            continue;
        }
        const auto f = split_csv_line(lines[i]);
        if (!header_seen) {
            header_seen = true;
            if (f.size() == 5 && f[0] == "game_id" && f[3] == "votes_a") {
                continue;
            }
        }
        if (f.size() != 5) {
            throw ParseError(source, lineno, "expected 5 fields, got " + std::to_string(f.size()));
        }
        ABPair p{f[0], f[1], f[2], static_cast<int>(parse_long(f[3], source, lineno)),
                 static_cast<int>(parse_long(f[4], source, lineno))};
        if (p.votes_a < 0 || p.votes_b < 0) {
            throw ParseError(source, lineno, "negative vote count");
        }
        if (p.basket_a == p.basket_b) {
            throw ParseError(source, lineno, "pair compares a basket with itself");
        }
        if (p.raters() == 0) {
            throw ParseError(source, lineno, "pair has no votes");
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::string serialize_pairs_csv(const std::vector<ABPair>& pairs) {
    std::string out(kPairsHeader);
    out += '\n';
    for (const auto& p : pairs) {
        out += p.game_id + ',' + p.basket_a + ',' + p.basket_b + ',' + std::to_string(p.votes_a) +
               ',' + std::to_string(p.votes_b) + '\n';
    }
    return out;
}

std::vector<ABPair> filter_pairs_by_agreement(const std::vector<ABPair>& pairs, int n_min) {
    std::vector<ABPair> out;
    std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
                 [n_min](const ABPair& p) { return p.agreement() >= n_min; });
    return out;
}

std::vector<WeightVector> enumerate_weight_grid(double step) {
    if (!(step > 0.0) || step > 1.0) {
        throw ValidationError("grid step must be in (0, 1]");
    }
    const long n = std::lround(1.0 / step);
    if (std::abs(static_cast<double>(n) * step - 1.0) > 1e-9) {
        throw ValidationError("grid step must divide 1 evenly");
    }
    const double dn = static_cast<double>(n);
    std::vector<WeightVector> grid;
    for (long a = 0; a <= n; ++a) {
        for (long p = 0; p <= n - a; ++p) {
            for (long s = 0; s <= n - a - p; ++s) {
                for (long b = 0; b <= n - a - p - s; ++b) {
                    const long m = n - a - p - s - b;
                    grid.emplace_back(Cues5{a / dn, p / dn, s / dn, b / dn, m / dn});
                }
            }
        }
    }
    return grid;
}

CueIndex::CueIndex(const std::vector<ScoredGame>& games) {
    for (const auto& g : games) {
        for (const auto& b : g.baskets) {
            cues_[{g.game_id, b.aligned.event.event_id}] = b.cues;
        }
    }
}

const CueVector& CueIndex::at(const std::string& game_id, const std::string& event_id) const {
    const auto it = cues_.find({game_id, event_id});
    if (it == cues_.end()) {
        throw ValidationError("pair references unscored basket " + game_id + "/" + event_id);
    }
    return it->second;
}

bool CueIndex::contains(const std::string& game_id, const std::string& event_id) const {
    return cues_.count({game_id, event_id}) != 0;
}

namespace {

// +1 system picks A, -1 picks B, 0 tie.
int system_choice(const WeightVector& w, const CueVector& a, const CueVector& b) {
    const double sa = combine(a, w);
    const double sb = combine(b, w);
    return sa > sb ? 1 : (sb > sa ? -1 : 0);
}

} // namespace

MatchCount pairwise_match_count(const WeightVector& w, const std::vector<ABPair>& pairs,
                                const CueIndex& cues) {
    MatchCount mc;
    for (const auto& p : pairs) {
        const int pick = system_choice(w, cues.at(p.game_id, p.basket_a), cues.at(p.game_id, p.basket_b));
        const int users = p.votes_a > p.votes_b ? 1 : (p.votes_b > p.votes_a ? -1 : 0);
        ++mc.total;
        if (pick != 0 && pick == users) {
            ++mc.matches;
        }
    }
    return mc;
}

ConfusionCounts pairwise_confusion(const WeightVector& w, const std::vector<ABPair>& pairs,
                                   const CueIndex& cues) {
    ConfusionCounts c;
    for (const auto& p : pairs) {
        if (!p.decided()) {
            continue;
        }
        const bool users_a = p.votes_a > p.votes_b;
        int pick = system_choice(w, cues.at(p.game_id, p.basket_a), cues.at(p.game_id, p.basket_b));
        if (pick == 0) {
            pick = users_a ? -1 : 1;
        }
        if (pick > 0) {
            users_a ? ++c.tp : ++c.fp;
        } else {
            users_a ? ++c.fn : ++c.tn;
        }
    }
    return c;
}

std::string_view to_string(FoldObjective objective) {
    return objective == FoldObjective::Training ? "training" : "held_out";
}

FoldObjective fold_objective_from_string(std::string_view s) {
    if (s == "training") return FoldObjective::Training;
    if (s == "held_out") return FoldObjective::HeldOut;
    throw ValidationError("unknown fold objective '" + std::string(s) + "' (training|held_out)");
}

namespace detail {

PreparedPairs prepare_pairs(const std::vector<ABPair>& pairs, const CueIndex& cues) {
    PreparedPairs out;
    std::set<std::string> ids;
    for (const auto& p : pairs) {
        ids.insert(p.game_id);
    }
    out.games.assign(ids.begin(), ids.end());
    out.pairs.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (!p.decided()) {
            continue;
        }
        const auto g = std::lower_bound(out.games.begin(), out.games.end(), p.game_id) -
                       out.games.begin();
        out.pairs.push_back({cues.at(p.game_id, p.basket_a).norm, cues.at(p.game_id, p.basket_b).norm,
                             static_cast<std::uint32_t>(g), p.votes_a > p.votes_b});
    }
    return out;
}

} // namespace detail

double CvReport::mean_held_out_percent() const {
    if (folds.empty()) return 0.0;
    double s = 0.0;
    for (const auto& f : folds) s += f.held_out.percent();
    return s / static_cast<double>(folds.size());
}

CvReport learn_weights(const std::vector<ScoredGame>& games, const std::vector<ABPair>& pairs,
                       const LearnOptions& opts) {
    std::vector<ABPair> used;
    for (const auto& p : filter_pairs_by_agreement(pairs, opts.min_agreement)) {
        if (p.decided()) used.push_back(p);
    }
    const CueIndex index(games);
    const auto prepared = detail::prepare_pairs(used, index);
    const std::size_t n_games = prepared.games.size();
    if (n_games < 2) {
        throw ValidationError("learn_weights: need pairs from at least 2 games after filtering (got " +
                              std::to_string(n_games) + ")");
    }

    const auto grid = enumerate_weight_grid(opts.grid_step);
    std::vector<Cues5> raw_grid;
    raw_grid.reserve(grid.size());
    for (const auto& w : grid) raw_grid.push_back(w.values());
    const auto table = opts.parallel ? kernels::match_table_parallel(raw_grid, prepared.pairs, n_games)
                                     : kernels::match_table_serial(raw_grid, prepared.pairs, n_games);

    std::vector<long> game_pairs(n_games, 0);
    for (const auto& p : prepared.pairs) ++game_pairs[p.game];
    long all_pairs = 0;
    for (long c : game_pairs) all_pairs += c;

    CvReport report;
    report.options = opts;
    report.grid_size = grid.size();
    report.pairs_used = prepared.pairs.size();
    Cues5 sum{};
    for (std::size_t f = 0; f < n_games; ++f) {
        const long train_total = all_pairs - game_pairs[f];
        if (train_total == 0) {
            throw ValidationError("learn_weights: fold holding out " + prepared.games[f] +
                                  " has no training pairs");
        }
        std::size_t best = 0;
        long best_count = -1;
        double best_margin = -std::numeric_limits<double>::infinity();
        for (std::size_t w = 0; w < grid.size(); ++w) {
            long count = 0;
            double margin = std::numeric_limits<double>::infinity();
            if (opts.objective == FoldObjective::Training) {
                for (std::size_t g = 0; g < n_games; ++g) {
                    if (g == f) continue;
                    count += table.match(w, g);
                    margin = std::min(margin, table.margin(w, g));
                }
            } else {
                count = table.match(w, f);
                margin = table.margin(w, f);
            }
            if (count > best_count || (count == best_count && margin > best_margin)) {
                best = w;
                best_count = count;
                best_margin = margin;
            }
        }
        long train_matches = 0;
        for (std::size_t g = 0; g < n_games; ++g) {
            if (g != f) train_matches += table.match(best, g);
        }
        FoldResult fold;
        fold.held_out_game = prepared.games[f];
        fold.weights = grid[best];
        fold.training = {train_matches, train_total};
        fold.held_out = {static_cast<long>(table.match(best, f)), game_pairs[f]};
        for (std::size_t i = 0; i < kCueCount; ++i) sum[i] += grid[best].values()[i];
        report.folds.push_back(std::move(fold));
    }
    report.final_weights = WeightVector::normalized(sum);
    report.overall = pairwise_match_count(report.final_weights, used, index);
    report.overall_mcc = mcc(pairwise_confusion(report.final_weights, used, index));
    return report;
}

namespace {

nlohmann::ordered_json weights_json(const WeightVector& w) {
    nlohmann::ordered_json j;
    for (auto c : kAllCues) j[std::string(to_string(c))] = w[c];
    return j;
}

nlohmann::ordered_json match_json(const MatchCount& m) {
    return {{"matches", m.matches}, {"total", m.total}, {"percent", m.percent()}};
}

} // namespace

std::string serialize_cv_report(const CvReport& r) {
    nlohmann::ordered_json j;
    j["grid_step"] = r.options.grid_step;
    j["grid_size"] = r.grid_size;
    j["min_agreement"] = r.options.min_agreement;
    j["fold_objective"] = std::string(to_string(r.options.objective));
    j["pairs_used"] = r.pairs_used;
    auto folds = nlohmann::ordered_json::array();
    for (const auto& f : r.folds) {
        folds.push_back({{"held_out_game", f.held_out_game},
                         {"weights", weights_json(f.weights)},
                         {"training", match_json(f.training)},
                         {"held_out", match_json(f.held_out)}});
    }
    j["folds"] = std::move(folds);
    j["mean_held_out_percent"] = r.mean_held_out_percent();
    j["final_weights"] = weights_json(r.final_weights);
    j["overall"] = match_json(r.overall);
    j["overall_mcc"] = r.overall_mcc;
    return j.dump(2) + "\n";
}

std::vector<CuePerformance> evaluate_cues(const std::vector<ABPair>& pairs, const CueIndex& cues,
                                          const std::optional<WeightVector>& combined) {
    auto correct_flags = [&](const WeightVector& w) {
        std::vector<bool> ok;
        ok.reserve(pairs.size());
        for (const auto& p : pairs) {
            ok.push_back(pairwise_match_count(w, {p}, cues).matches == 1);
        }
        return ok;
    };
    std::vector<bool> combined_ok;
    if (combined) combined_ok = correct_flags(*combined);

    std::vector<CuePerformance> rows;
    for (auto c : kAllCues) {
        const auto w = WeightVector::one_hot(c);
        CuePerformance row;
        row.name = std::string(to_string(c));
        row.matches = pairwise_match_count(w, pairs, cues);
        const auto conf = pairwise_confusion(w, pairs, cues);
        row.mcc = conf.total() ? mcc(conf) : 0.0;
        if (combined) {
            const auto ok = correct_flags(w);
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                if (ok[i] && !combined_ok[i]) ++row.cue_only_correct;
                if (!ok[i] && combined_ok[i]) ++row.combined_only_correct;
            }
            if (row.cue_only_correct + row.combined_only_correct > 0) {
                row.vs_combined = mcnemar_yates(row.cue_only_correct, row.combined_only_correct);
            }
        }
        rows.push_back(std::move(row));
    }
    if (combined) {
        CuePerformance row;
        row.name = "combined";
        row.matches = pairwise_match_count(*combined, pairs, cues);
        const auto conf = pairwise_confusion(*combined, pairs, cues);
        row.mcc = conf.total() ? mcc(conf) : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<AgreementRow> agreement_table(const std::vector<ABPair>& pairs, int first_threshold,
                                          int last_threshold, std::uint64_t seed) {
    if (pairs.empty()) {
        return {};
    }
    const int raters = pairs.front().raters();
    for (const auto& p : pairs) {
        if (p.raters() != raters) {
            throw ValidationError("agreement_table: pairs have differing rater counts");
        }
    }
    if (raters < 2) {
        throw ValidationError("agreement_table: need at least 2 raters per pair");
    }
    // labels[i][r]: category chosen by rater slot r on pair i (0 = A, 1 = B).
    std::vector<std::vector<int>> labels(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto& l = labels[i];
        l.assign(static_cast<std::size_t>(pairs[i].votes_a), 0);
        l.resize(static_cast<std::size_t>(raters), 1);
        Rng rng(mix_seed(seed, i));
        rng.shuffle(l);
    }

    std::vector<AgreementRow> rows;
    for (int n = first_threshold; n <= last_threshold; ++n) {
        AgreementRow row;
        row.threshold = n;
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (pairs[i].agreement() >= n) subset.push_back(i);
        }
        row.pairs = subset.size();
        if (subset.empty()) {
            rows.push_back(row);
            continue;
        }
        std::vector<std::vector<int>> table;
        table.reserve(subset.size());
        for (auto i : subset) table.push_back({pairs[i].votes_a, pairs[i].votes_b});
        const auto fk = fleiss_kappa(table, raters);
        row.fleiss_kappa = fk.kappa;
        row.mean_pairwise_agreement = 100.0 * fk.mean_item_agreement;

        double kappa_sum = 0.0;
        int kappa_count = 0;
        std::vector<int> la(subset.size()), lb(subset.size());
        for (int r1 = 0; r1 < raters; ++r1) {
            for (int r2 = r1 + 1; r2 < raters; ++r2) {
                for (std::size_t k = 0; k < subset.size(); ++k) {
                    la[k] = labels[subset[k]][static_cast<std::size_t>(r1)];
                    lb[k] = labels[subset[k]][static_cast<std::size_t>(r2)];
                }
                kappa_sum += cohen_kappa(la, lb);
                ++kappa_count;
            }
        }
        row.mean_cohen_kappa = kappa_sum / kappa_count;
        rows.push_back(row);
    }
    return rows;
}

std::string_view agreement_label(double kappa) {
    if (kappa < 0.0) return "Poor agreement";
    if (kappa <= 0.20) return "Slight agreement";
    if (kappa <= 0.40) return "Fair agreement";
    if (kappa <= 0.60) return "Moderate agreement";
    if (kappa <= 0.80) return "Substantial agreement";
    return "Almost perfect agreement";
}

} // namespace hilite
