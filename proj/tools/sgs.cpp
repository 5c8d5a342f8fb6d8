// Command line front end: solve and cross-check arena files, export splits,
// verify strategy pairs, and run the payoff property testers.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sgs/arena_io.hpp"
#include "sgs/dot.hpp"
#include "sgs/gallery.hpp"
#include "sgs/sampling.hpp"
#include "sgs/solver.hpp"

namespace {

using namespace sgs;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoOptimum = 3;
constexpr int kExitInternal = 4;

Arena load_input(const std::string& source) {
    if (source.rfind("gallery:", 0) == 0) return gallery_entry(source.substr(8)).arena;
    return load_arena(source);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

nlohmann::json solution_json(const Arena& a, const Solution& sol) {
    nlohmann::json j;
    for (int s = 0; s < a.num_states(); ++s)
        j["values"][a.state_name(s)] = outcome_to_string(sol.values[s]);
    for (int s = 0; s < a.num_states(); ++s) {
        if (a.owner(s) == Player::Max)
            j["max_strategy"][a.state_name(s)] = a.action_name(sol.max_strategy.choice[s]);
        else
            j["min_strategy"][a.state_name(s)] = a.action_name(sol.min_strategy.choice[s]);
    }
    return j;
}

struct SolveArgs {
    std::string file;
    std::string payoff = "mean";
    std::string mode = "recursive";
    std::string report_path;
    std::uint64_t max_profiles = 1000000;
    int jobs = 1;
};

int run_solve(const SolveArgs& args) {
    Arena a = load_input(args.file);
    validate(a);
    Preference pref = parse_payoff(args.payoff);
    SolveOptions opts;
    opts.max_profiles = Int(args.max_profiles);
    opts.jobs = args.jobs;

    nlohmann::json report;
    report["file"] = args.file;
    report["payoff"] = payoff_name(pref);
    report["mode"] = args.mode;

    std::optional<Solution> recursive, oracle;
    if (args.mode == "recursive" || args.mode == "both") {
        SolveReport rep = solve_two_player(a, pref, opts);
        if (!rep.solution) {
            std::cout << "recursive solve failed: " << rep.failure << "\n";
            return kExitNoOptimum;
        }
        recursive = rep.solution;
        std::cout << "recursive solve\n"
                  << render_solution(a, pref, *recursive) << render_trace(rep);
        report["recursive"] = solution_json(a, *recursive);
    }
    if (args.mode == "oracle" || args.mode == "both") {
        oracle = brute_force_saddle(a, pref, opts);
        std::cout << "oracle (exhaustive saddle search)\n" << render_solution(a, pref, *oracle);
        report["oracle"] = solution_json(a, *oracle);
    }
    if (args.mode == "both") {
        for (int s = 0; s < a.num_states(); ++s) {
            if (recursive->values[s] == oracle->values[s]) continue;
            std::cout << "VALUE MISMATCH at " << a.state_name(s) << ": recursive "
                      << outcome_to_string(recursive->values[s]) << " vs oracle "
                      << outcome_to_string(oracle->values[s]) << "\n";
            return kExitInternal;
        }
        std::cout << "values agree at every state\n";
    }
    if (!args.report_path.empty()) write_file(args.report_path, report.dump(2) + "\n");
    return kExitOk;
}

int run_split(const std::string& file, const std::string& state, const std::string& out_base) {
    Arena a = load_input(file);
    validate(a);
    SplitResult sr = split(a, a.state_index(state));
    check_separation(sr);
    save_arena(out_base + ".json", sr.split_arena);
    write_file(out_base + ".dot", to_dot(sr, out_base));
    std::cout << "split of " << file << " on " << state << ": "
              << sr.split_arena.num_states() << " states, "
              << sr.split_arena.num_transitions() << " transitions\n"
              << "wrote " << out_base << ".json and " << out_base << ".dot\n";
    return kExitOk;
}

int run_verify(const std::string& file, const std::string& payoff, const std::string& max_path,
               const std::string& min_path) {
    Arena a = load_input(file);
    validate(a);
    Preference pref = parse_payoff(payoff);
    DSStrategy sigma = parse_ds_strategy(a, read_file(max_path));
    DSStrategy tau = parse_ds_strategy(a, read_file(min_path));
    if (sigma.owner != Player::Max || tau.owner != Player::Min)
        throw ParseError("verify expects a Max strategy and a Min strategy, in that order");
    if (auto w = verify_saddle(a, pref, sigma, tau)) {
        std::cout << "not optimal: " << player_name(w->player) << " improves from state "
                  << a.state_name(w->state) << " (" << outcome_to_string(w->base) << " -> "
                  << outcome_to_string(w->improved) << ") by playing\n"
                  << strategy_to_text(a, w->deviation);
        return kExitNoOptimum;
    }
    std::cout << "optimal: the pair satisfies both saddle inequalities against every "
                 "stationary deterministic deviation\n";
    return kExitOk;
}

int run_props(const std::string& payoff, int samples, std::uint64_t seed, int drop,
              int shuffle_bound) {
    Preference pref = parse_payoff(payoff);
    Sampler rng(seed);
    RandomLassoOptions lopt;
    lopt.integer_letters =
        pref.tag == PayoffTag::Parity || pref.tag == PayoffTag::SimpleParity;
    std::vector<Lasso> words;
    std::vector<std::pair<Lasso, Lasso>> pairs;
    for (int i = 0; i < samples; ++i) {
        words.push_back(random_lasso(rng, lopt));
        pairs.emplace_back(random_lasso(rng, lopt), random_lasso(rng, lopt));
    }
    std::cout << "props payoff=" << payoff_name(pref) << " samples=" << samples
              << " seed=" << seed << " drop=" << drop << " shuffle-bound=" << shuffle_bound
              << "\n";
    if (auto w = prefix_independent(pref, words, drop)) {
        std::cout << "prefix-independent: witness sample=" << w->sample
                  << " dropped=" << w->dropped << " f(w)=" << to_string(w->base)
                  << " f(w')=" << to_string(w->shifted) << " w=" << to_string(w->word) << "\n";
    } else {
        std::cout << "prefix-independent: pass (" << samples << " samples, drops up to "
                  << drop << ")\n";
    }
    if (auto w = sub_mixing(pref, pairs, shuffle_bound)) {
        std::string pat;
        for (bool b : w->pattern) pat += b ? '1' : '2';
        std::cout << "sub-mixing: witness pair=" << w->pair << " pattern=" << pat
                  << " f(shuffle)=" << to_string(w->f_shuffle) << " f1=" << to_string(w->f1)
                  << " f2=" << to_string(w->f2) << " shuffle=" << to_string(w->shuffled)
                  << "\n";
    } else {
        std::cout << "sub-mixing: pass (" << samples << " pairs, cyclic patterns up to length "
                  << shuffle_bound << ")\n";
    }
    return kExitOk;
}

int run_gallery_list() {
    for (const GalleryEntry& g : gallery())
        std::cout << g.name << ": " << g.description << " [" << payoff_name(g.payoff) << "]\n";
    return kExitOk;
}

int run_gallery(const std::string& name) {
    if (name != "all") gallery_entry(name);  // unknown names are input errors
    for (const GalleryEntry& g : gallery()) {
        if (name != "all" && g.name != name) continue;
        try {
            std::cout << "== " << g.name << " ==\n" << g.check(g);
        } catch (const Error& e) {
            std::cerr << "gallery regression in '" << g.name << "': " << e.what() << "\n";
            return kExitInternal;
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solver for finite zero-sum perfect-information stochastic games"};
    app.require_subcommand(1);

    SolveArgs sargs;
    auto add_solve_flags = [&](CLI::App* cmd) {
        cmd->add_option("--payoff", sargs.payoff,
                        "mean|parity|simple-parity|discounted:<num/den>|overtaking");
        cmd->add_option("--max-profiles", sargs.max_profiles, "enumeration guard");
        cmd->add_option("--jobs", sargs.jobs, "worker threads for the oracle");
    };

    auto* solve = app.add_subcommand("solve", "solve an arena file (or gallery:<name>)");
    solve->add_option("file", sargs.file)->required();
    add_solve_flags(solve);
    solve->add_option("--mode", sargs.mode, "recursive|oracle|both")
        ->check(CLI::IsMember({"recursive", "oracle", "both"}));
    solve->add_option("--report", sargs.report_path, "write a JSON report here");

    auto* oracle = app.add_subcommand("oracle", "exhaustive saddle search only");
    oracle->add_option("file", sargs.file)->required();
    add_solve_flags(oracle);

    std::string split_state, split_out = "split";
    auto* split_cmd = app.add_subcommand("split", "split an arena on a state");
    split_cmd->add_option("file", sargs.file)->required();
    split_cmd->add_option("state", split_state)->required();
    split_cmd->add_option("--out", split_out, "output base name (.json and .dot)");

    std::string verify_max, verify_min;
    auto* verify = app.add_subcommand("verify", "check a strategy pair for optimality");
    verify->add_option("file", sargs.file)->required();
    verify->add_option("--payoff", sargs.payoff);
    verify->add_option("--max-strategy", verify_max, "Max strategy dump")->required();
    verify->add_option("--min-strategy", verify_min, "Min strategy dump")->required();

    int samples = 1000, drop = 4, shuffle_bound = 5;
    std::uint64_t seed = 1;
    auto* props = app.add_subcommand("props", "payoff property testers on random words");
    props->add_option("--payoff", sargs.payoff,
                      "also accepts the liminf-mean negative control");
    props->add_option("--samples", samples);
    props->add_option("--seed", seed);
    props->add_option("--drop", drop, "prefix lengths to drop");
    props->add_option("--shuffle-bound", shuffle_bound, "max cyclic pattern length");

    auto* gal = app.add_subcommand("gallery", "worked examples with pinned facts");
    auto* gal_list = gal->add_subcommand("list", "list entries");
    std::string gal_name = "all";
    auto* gal_run = gal->add_subcommand("run", "re-check an entry (or all)");
    gal_run->add_option("name", gal_name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (app.got_subcommand(solve)) return run_solve(sargs);
        if (app.got_subcommand(oracle)) {
            sargs.mode = "oracle";
            return run_solve(sargs);
        }
        if (app.got_subcommand(split_cmd)) return run_split(sargs.file, split_state, split_out);
        if (app.got_subcommand(verify))
            return run_verify(sargs.file, sargs.payoff, verify_max, verify_min);
        if (app.got_subcommand(props))
            return run_props(sargs.payoff, samples, seed, drop, shuffle_bound);
        if (app.got_subcommand(gal)) {
            if (gal->got_subcommand(gal_list)) return run_gallery_list();
            if (gal->got_subcommand(gal_run)) return run_gallery(gal_name);
            return run_gallery_list();
        }
    } catch (const NoSaddleError& e) {
        std::cout << "NoSaddle: " << e.what() << "\n";
        return kExitNoOptimum;
    } catch (const NoUniformOptimumError& e) {
        std::cout << "NoUniformOptimum: " << e.what() << "\n";
        return kExitNoOptimum;
    } catch (const PreferenceNotTotalEnoughError& e) {
        std::cout << "PreferenceNotTotalEnough: " << e.what() << "\n";
        return kExitNoOptimum;
    } catch (const SeparationViolatedError& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return kExitInternal;
    } catch (const SingularSystemError& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return kExitInternal;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const UnknownStateError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const UnknownActionError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const EnumerationBoundError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
