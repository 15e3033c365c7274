#include "hilite/config.hpp"
#include "hilite/errors.hpp"
#include "hilite/highlight.hpp"
#include "hilite/learning.hpp"
#include "hilite/pipeline.hpp"
#include "hilite/random.hpp"
#include "hilite/synth.hpp"
#include "hilite/text_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hilite;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "hilite_out";
    int workers = 1;
};

EngineConfig resolve_config(const GlobalOptions& g) {
    auto cfg = g.config_path.empty() ? default_config() : load_config(g.config_path);
    for (const auto& kv : g.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("--set expects key=value, got '" + kv + "'");
        }
        set_config_value(cfg, trim(std::string_view(kv).substr(0, eq)),
                         trim(std::string_view(kv).substr(eq + 1)));
    }
    validate(cfg);
    return cfg;
}

std::vector<fs::path> expand_manifests(const std::vector<std::string>& args) {
    std::vector<fs::path> out;
    for (const auto& a : args) {
        const fs::path p(a);
        if (fs::is_directory(p)) {
            auto found = discover_manifests(p);
            if (found.empty()) throw InputError("no manifest.json under " + a);
            out.insert(out.end(), found.begin(), found.end());
        } else if (fs::exists(p)) {
            out.push_back(p);
        } else {
            throw InputError("no such file: " + a);
        }
    }
    if (out.empty()) throw InputError("no game manifests given");
    return out;
}

// Runs fn over items on `workers` threads; results keep input order and the first error
// (by index) is rethrown.
template <typename T, typename R, typename F>
std::vector<R> parallel_map(const std::vector<T>& items, int workers, F fn) {
    std::vector<R> results(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    const long n = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = fn(items[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

struct LoadedGame {
    GameInputs inputs;
    AlignResult alignment;
};

LoadedGame load_and_align(const fs::path& manifest, const EngineConfig& cfg) {
    LoadedGame g;
    g.inputs = load_game_inputs(load_manifest(manifest, cfg.period_length_s), cfg);
    g.alignment = align_game(g.inputs, cfg);
    return g;
}

std::vector<ScoredGame> load_scored_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("scored directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("no scored game JSON in " + dir.string());
    std::vector<ScoredGame> games;
    for (const auto& f : files) games.push_back(parse_scored_game(read_text_file(f), f.string()));
    return games;
}

WeightVector weights_or_default(const std::string& path) {
    if (path.empty()) return reference_weights();
    return parse_weights(read_text_file(path), path);
}

std::vector<ABPair> load_pairs(const std::string& path) {
    return parse_pairs_csv(read_text_file(path), path);
}

std::string pct(double v) { return format_fixed(v, 1); }

std::string cue_table(const std::vector<CuePerformance>& rows) {
    std::string out = "| cue | matches | total | match % | MCC | McNemar chi2 vs combined |\n";
    out += "|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        std::string mc = "-";
        if (r.vs_combined) {
            mc = format_fixed(r.vs_combined->chi2, 3) + (r.vs_combined->significant_at_95 ? " *" : "");
        }
        out += "| " + r.name + " | " + std::to_string(r.matches.matches) + " | " +
               std::to_string(r.matches.total) + " | " + pct(r.matches.percent()) + " | " +
               format_fixed(r.mcc, 3) + " | " + mc + " |\n";
    }
    return out;
}

nlohmann::ordered_json cue_rows_json(const std::vector<CuePerformance>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j{{"cue", r.name},
                                 {"matches", r.matches.matches},
                                 {"total", r.matches.total},
                                 {"percent", r.matches.percent()},
                                 {"mcc", r.mcc}};
        if (r.vs_combined) {
            j["mcnemar_chi2"] = r.vs_combined->chi2;
            j["mcnemar_significant"] = r.vs_combined->significant_at_95;
            j["cue_only_correct"] = r.cue_only_correct;
            j["combined_only_correct"] = r.combined_only_correct;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

int cmd_config_init(const std::string& path) {
    const auto text = serialize_config(default_config());
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text_file(path, text);
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int cmd_align(const GlobalOptions& g, const std::vector<std::string>& games) {
    const auto cfg = resolve_config(g);
    const auto manifests = expand_manifests(games);
    const auto loaded = parallel_map<fs::path, LoadedGame>(
        manifests, g.workers, [&](const fs::path& m) { return load_and_align(m, cfg); });
    std::size_t aligned = 0, unmatched = 0;
    for (const auto& l : loaded) {
        const auto& id = l.inputs.record.game_id;
        write_text_file(fs::path(g.out_dir) / "align" / (id + ".json"),
                        serialize_align_result(id, l.alignment));
        aligned += l.alignment.aligned.size();
        unmatched += l.alignment.unmatched.size();
        for (const auto& w : l.alignment.warnings) std::cerr << "warning: " << id << ": " << w << "\n";
    }
    std::cout << "align: " << loaded.size() << " games, " << aligned << " aligned, " << unmatched
              << " unmatched -> " << (fs::path(g.out_dir) / "align").string() << "\n";
    return 0;
}

int cmd_score(const GlobalOptions& g, const std::vector<std::string>& games,
              const std::string& weights_path) {
    const auto cfg = resolve_config(g);
    const auto w = weights_or_default(weights_path);
    const auto manifests = expand_manifests(games);
    const auto scored = parallel_map<fs::path, ScoredGame>(manifests, g.workers, [&](const fs::path& m) {
        const auto l = load_and_align(m, cfg);
        return score_inputs(l.inputs, l.alignment, cfg, w);
    });
    std::size_t baskets = 0;
    for (const auto& s : scored) {
        write_text_file(fs::path(g.out_dir) / "scored" / (s.game_id + ".json"), serialize_scored_game(s));
        baskets += s.baskets.size();
    }
    std::cout << "score: " << scored.size() << " games, " << baskets << " baskets -> "
              << (fs::path(g.out_dir) / "scored").string() << "\n";
    return 0;
}

int cmd_learn(const GlobalOptions& g, const std::string& scored_dir, const std::string& pairs_path) {
    auto cfg = resolve_config(g);
    cfg.learn.parallel = g.workers > 1;
    const auto games = load_scored_dir(scored_dir);
    const auto report = learn_weights(games, load_pairs(pairs_path), cfg.learn);
    const fs::path out(g.out_dir);
    write_text_file(out / "cv_report.json", serialize_cv_report(report));
    write_text_file(out / "weights.json", serialize_weights(report.final_weights));
    std::string ws;
    for (auto c : kAllCues) {
        ws += std::string(ws.empty() ? "" : ", ") + std::string(to_string(c)) + "=" +
              format_fixed(report.final_weights[c], 3);
    }
    std::cout << "learn-weights: " << report.folds.size() << " folds, held-out "
              << pct(report.mean_held_out_percent()) << "%, weights " << ws << " -> "
              << (out / "weights.json").string() << "\n";
    return 0;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& scored_dir, const std::string& pairs_path,
                 const std::string& weights_path, const std::string& cue) {
    const auto cfg = resolve_config(g);
    const auto games = load_scored_dir(scored_dir);
    const auto pairs = filter_pairs_by_agreement(load_pairs(pairs_path), cfg.learn.min_agreement);
    std::vector<ABPair> decided;
    for (const auto& p : pairs) {
        if (p.decided()) decided.push_back(p);
    }
    auto rows = evaluate_cues(decided, CueIndex(games), weights_or_default(weights_path));
    if (!cue.empty()) {
        if (!cue_from_string(cue)) throw ValidationError("unknown cue '" + cue + "'");
        std::vector<CuePerformance> kept;
        for (auto& r : rows) {
            if (r.name == cue || r.name == "combined") kept.push_back(std::move(r));
        }
        rows = std::move(kept);
    }
    nlohmann::ordered_json j;
    j["pairs"] = decided.size();
    j["min_agreement"] = cfg.learn.min_agreement;
    j["cues"] = cue_rows_json(rows);
    write_text_file(fs::path(g.out_dir) / "evaluation.json", j.dump(2) + "\n");
    std::cout << cue_table(rows);
    return 0;
}

int cmd_report(const GlobalOptions& g, const std::string& scored_dir, const std::string& pairs_path,
               const std::string& weights_path) {
    const auto cfg = resolve_config(g);
    const auto games = load_scored_dir(scored_dir);
    const auto all = load_pairs(pairs_path);
    if (all.empty()) throw ValidationError("no A/B pairs in " + pairs_path);
    const int raters = all.front().raters();
    const auto table = agreement_table(all, raters / 2 + 1, raters);

    std::string out = "# Rater agreement\n\n";
    out += "| agreement >= | pairs | mean pairwise agreement % | mean Cohen kappa | Fleiss kappa | interpretation |\n";
    out += "|---|---|---|---|---|---|\n";
    for (const auto& r : table) {
        out += "| " + std::to_string(r.threshold) + " | " + std::to_string(r.pairs) + " | " +
               pct(r.mean_pairwise_agreement) + " | " + format_fixed(r.mean_cohen_kappa, 3) + " | " +
               format_fixed(r.fleiss_kappa, 3) + " | " + std::string(agreement_label(r.fleiss_kappa)) +
               " |\n";
    }
    std::vector<ABPair> decided;
    for (const auto& p : filter_pairs_by_agreement(all, cfg.learn.min_agreement)) {
        if (p.decided()) decided.push_back(p);
    }
    out += "\n# Per-cue performance (agreement >= " + std::to_string(cfg.learn.min_agreement) + ", " +
           std::to_string(decided.size()) + " pairs)\n\n";
    out += cue_table(evaluate_cues(decided, CueIndex(games), weights_or_default(weights_path)));
    write_text_file(fs::path(g.out_dir) / "report.md", out);
    std::cout << out;
    return 0;
}

int cmd_generate(const GlobalOptions& g, const std::vector<std::string>& games,
                 const std::string& weights_path, std::optional<int> n, const std::string& format,
                 const std::string& cuts_video) {
    auto cfg = resolve_config(g);
    if (n) {
        if (*n < 1) throw ValidationError("--n must be >= 1");
        cfg.top_n = *n;
    }
    if (format != "both") edl_format_from_string(format);
    const auto w = weights_or_default(weights_path);
    const auto manifests = expand_manifests(games);
    const auto edls = parallel_map<fs::path, HighlightEdl>(manifests, g.workers, [&](const fs::path& m) {
        const auto l = load_and_align(m, cfg);
        const auto scored = score_inputs(l.inputs, l.alignment, cfg, w);
        return build_edl(scored, cfg.top_n, l.inputs.video_len_s, cfg.clip);
    });
    const fs::path dir = fs::path(g.out_dir) / "edl";
    for (const auto& e : edls) {
        if (format == "both" || format == "json")
            write_text_file(dir / (e.game_id + ".json"), emit_edl(e, EdlFormat::Json));
        if (format == "both" || format == "csv")
            write_text_file(dir / (e.game_id + ".csv"), emit_edl(e, EdlFormat::Csv));
        if (!cuts_video.empty()) write_text_file(dir / (e.game_id + "_cuts.sh"), emit_cut_script(e, cuts_video));
        for (const auto& warn : e.warnings) std::cerr << "warning: " << e.game_id << ": " << warn << "\n";
        const auto split = half_distribution(e);
        std::cout << "generate: " << e.game_id << " " << e.clips.size() << " clips, "
                  << format_fixed(e.total_duration_s, 1) << " s (" << split.first << " first half, "
                  << split.second << " second half)\n";
    }
    std::cout << "generate: " << edls.size() << " EDLs -> " << dir.string() << "\n";
    return 0;
}

struct SynthArgs {
    std::uint64_t seed = 7;
    int games = 25;
    int baskets = 70;
    double misread_rate = 0.0;
    double vote_noise = 0.1;
    int raters = kDefaultRaters;
    int pairs_per_game = 40;
    std::string planted;
};

int cmd_synth(const GlobalOptions& g, const SynthArgs& a) {
    const auto cfg = resolve_config(g);
    SynthConfig sc;
    sc.seed = a.seed;
    sc.n_games = a.games;
    sc.baskets_per_game = a.baskets;
    sc.misread_rate = a.misread_rate;
    sc.vote_noise = a.vote_noise;
    sc.raters = a.raters;
    sc.pairs_per_game = a.pairs_per_game;
    if (!a.planted.empty()) sc.planted_weights = parse_weights(read_text_file(a.planted), a.planted);
    validate(sc);

    const fs::path out(g.out_dir);
    std::vector<int> indices(static_cast<std::size_t>(sc.n_games));
    for (int i = 0; i < sc.n_games; ++i) indices[static_cast<std::size_t>(i)] = i;
    struct Made {
        SynthGame game;
        fs::path manifest;
    };
    auto made = parallel_map<int, Made>(indices, g.workers, [&](int i) {
        Made m;
        m.game = gen_game(sc, i);
        m.manifest = write_synth_game(m.game, out / "games" / m.game.record.game_id);
        return m;
    });
    // Ground truth follows the cues the engine itself will compute from the written files.
    std::vector<fs::path> manifests;
    for (const auto& m : made) manifests.push_back(m.manifest);
    const auto scored = parallel_map<fs::path, ScoredGame>(manifests, g.workers, [&](const fs::path& m) {
        const auto l = load_and_align(m, cfg);
        return score_inputs(l.inputs, l.alignment, cfg, sc.planted_weights);
    });
    const auto pairs = gen_ground_truth(scored, sc.planted_weights, sc.vote_noise, sc.raters,
                                        sc.pairs_per_game, mix_seed(sc.seed, 0xab));
    write_text_file(out / "pairs.csv", serialize_pairs_csv(pairs));

    nlohmann::ordered_json truth;
    truth["seed"] = sc.seed;
    truth["games"] = sc.n_games;
    truth["misread_rate"] = sc.misread_rate;
    truth["vote_noise"] = sc.vote_noise;
    truth["raters"] = sc.raters;
    truth["planted_weights"] = nlohmann::ordered_json::parse(serialize_weights(sc.planted_weights));
    auto per_game = nlohmann::ordered_json::object();
    for (const auto& m : made) {
        auto ev = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < m.game.record.events.size(); ++i) {
            ev[m.game.record.events[i].event_id] = m.game.true_vts[i];
        }
        per_game[m.game.record.game_id] = {{"video_len", m.game.video_len_s}, {"basket_vts", ev}};
    }
    truth["per_game"] = std::move(per_game);
    write_text_file(out / "truth.json", truth.dump(2) + "\n");
    write_text_file(out / "planted_weights.json", serialize_weights(sc.planted_weights));
    std::cout << "synth: " << sc.n_games << " games, " << pairs.size() << " A/B pairs -> " << out.string()
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hilite: basketball highlight excitement engine"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("-c,--config", g.config_path, "Engine config file (key = value)");
    app.add_option("--set", g.overrides, "Override one config key, key=value (repeatable)");
    app.add_option("-o,--out", g.out_dir, "Output directory")->envname("HILITE_OUT_DIR");
    app.add_option("-j,--workers", g.workers, "Worker threads for per-game parallelism")
        ->check(CLI::PositiveNumber);

    auto* config = app.add_subcommand("config", "Configuration helpers");
    config->require_subcommand(1);
    auto* config_init = config->add_subcommand("init", "Write every default to a config file");
    std::string config_out;
    config_init->add_option("path", config_out, "Destination (stdout when omitted)");

    std::vector<std::string> games;
    std::string weights, scored_dir, pairs_path, cue, format = "both", cuts;
    std::optional<int> top_n;

    auto* align = app.add_subcommand("align", "Align play-by-play events to video time");
    align->add_option("games", games, "Manifest files or directories")->required();

    auto* score = app.add_subcommand("score", "Compute cues and excitement scores");
    score->add_option("games", games, "Manifest files or directories")->required();
    score->add_option("-w,--weights", weights, "Weights JSON (reference weights when omitted)");

    auto* learn = app.add_subcommand("learn-weights", "Leave-one-game-out weight learning");
    learn->add_option("--scored", scored_dir, "Directory of scored game JSON")->required();
    learn->add_option("--pairs", pairs_path, "A/B ground-truth CSV")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Per-cue match percentage and MCC");
    evaluate->add_option("--scored", scored_dir, "Directory of scored game JSON")->required();
    evaluate->add_option("--pairs", pairs_path, "A/B ground-truth CSV")->required();
    evaluate->add_option("-w,--weights", weights, "Combined weights JSON");
    evaluate->add_option("--cue", cue, "Only this cue (plus the combined row)");

    auto* report = app.add_subcommand("report", "Agreement and per-cue tables");
    report->add_option("--scored", scored_dir, "Directory of scored game JSON")->required();
    report->add_option("--pairs", pairs_path, "A/B ground-truth CSV")->required();
    report->add_option("-w,--weights", weights, "Combined weights JSON");

    auto* generate = app.add_subcommand("generate", "Build highlight EDLs");
    generate->add_option("--game,games", games, "Manifest files or directories")->required();
    generate->add_option("-w,--weights", weights, "Weights JSON (reference weights when omitted)");
    generate->add_option("-n,--n", top_n, "Number of clips per game");
    generate->add_option("--format", format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    generate->add_option("--cuts", cuts, "Also write an ffmpeg cut script for this video path");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
    synth->add_option("--seed", sa.seed, "Random seed");
    synth->add_option("--games", sa.games, "Number of games");
    synth->add_option("--baskets", sa.baskets, "Baskets per game, free throws included");
    synth->add_option("--misread-rate", sa.misread_rate, "Single-frame scoreboard misread rate");
    synth->add_option("--vote-noise", sa.vote_noise, "Per-vote flip probability");
    synth->add_option("--raters", sa.raters, "Raters per pair");
    synth->add_option("--pairs-per-game", sa.pairs_per_game, "A/B pairs per game");
    synth->add_option("--planted", sa.planted, "Planted weights JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        omp_set_num_threads(g.workers);
        if (config_init->parsed()) return cmd_config_init(config_out);
        if (align->parsed()) return cmd_align(g, games);
        if (score->parsed()) return cmd_score(g, games, weights);
        if (learn->parsed()) return cmd_learn(g, scored_dir, pairs_path);
        if (evaluate->parsed()) return cmd_evaluate(g, scored_dir, pairs_path, weights, cue);
        if (report->parsed()) return cmd_report(g, scored_dir, pairs_path, weights);
        if (generate->parsed()) return cmd_generate(g, games, weights, top_n, format, cuts);
        if (synth->parsed()) return cmd_synth(g, sa);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 4;
}
