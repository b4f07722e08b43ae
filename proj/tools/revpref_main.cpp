// Command-line front end: analyze a choices file, generate synthetic
// datasets with a score calibration summary, or audit the dominance
// taxonomy. Exit codes: 0 success, 1 validation error, 2 internal check
// failure.
#include <CLI11.hpp>

#include "revpref/audit.hpp"
#include "revpref/errors.hpp"
#include "revpref/report.hpp"
#include "revpref/simulate.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace revpref;
using nlohmann::ordered_json;

// The design store backing a --design directory, kept alive for the run.
ExperimentDesign g_loaded_design;

const ExperimentDesign& resolve_design(const std::string& dir) {
    if (dir.empty()) return built_in_design();
    g_loaded_design = load_design(dir + "/lotteries.csv", dir + "/menus.csv",
                                  dir + "/fixtures.toml");
    return g_loaded_design;
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw ValidationError(path + ": cannot open for writing");
    out << body;
    if (!out.good()) throw ValidationError(path + ": write failed");
}

struct AnalyzeOptions {
    std::string choices;
    std::string attributes;
    std::string design_dir;
    std::string policy = "strict";
    std::string fosd_mode = "dominated-choice";
    std::string taxonomy = "declared";
    int merge_threshold = 0;
    bool renormalize = false;
    int approx_threshold = 1;
    std::string out;
    std::string format = "json";
};

int run_analyze(const AnalyzeOptions& opt) {
    const ExperimentDesign& design = resolve_design(opt.design_dir);
    Dataset data = load_choices(design, opt.choices);

    RunConfig cfg;
    cfg.policy = opt.policy == "strict" ? DeferralPolicy::Strict : DeferralPolicy::Lenient;
    cfg.fosd_mode =
        opt.fosd_mode == "strict-axiom" ? FosdMode::StrictAxiom : FosdMode::DominatedChoice;
    cfg.taxonomy =
        opt.taxonomy == "declared" ? TaxonomyMode::Declared : TaxonomyMode::Computed;
    cfg.merge_threshold = opt.merge_threshold;
    cfg.renormalize_stochastic = opt.renormalize;
    cfg.approx_um_threshold = opt.approx_threshold;
    cfg.choices_path = opt.choices;
    cfg.attributes_path = opt.attributes;

    AnalysisReport report = run_analysis(design, data, cfg);
    if (opt.format == "csv")
        write_output(opt.out, report_to_csv(report));
    else
        write_output(opt.out, report_to_json(report).dump(2) + "\n");
    return 0;
}

struct SimulateOptions {
    std::string design_dir;
    int uniform = 0;
    int concave = 0;
    int convex = 0;
    double noise = 0.0;
    bool no_deferral = false;
    int rounds = 5;
    std::uint64_t seed = 1;
    double percentile = 0.025;
    std::string out = "choices.csv";
    std::string summary_out;
};

int run_simulate(const SimulateOptions& opt) {
    const ExperimentDesign& design = resolve_design(opt.design_dir);
    if (opt.uniform < 0 || opt.concave < 0 || opt.convex < 0)
        throw ValidationError("agent counts must be non-negative");
    if (opt.uniform + opt.concave + opt.convex == 0)
        throw ValidationError("nothing to simulate: all agent counts are zero");

    // Utilities are drawn from the master seed up front; choice randomness is
    // re-seeded per agent, so the two streams stay independent.
    Rng util_rng(opt.seed);
    std::vector<std::pair<AgentSpec, int>> specs;
    if (opt.uniform > 0) {
        AgentSpec s;
        s.kind = AgentSpec::Kind::UniformRandom;
        s.include_deferral = !opt.no_deferral;
        s.label = "unif";
        specs.push_back({s, opt.uniform});
    }
    for (int i = 0; i < opt.concave; ++i) {
        AgentSpec s;
        s.kind = AgentSpec::Kind::ExpectedUtility;
        s.utility = random_concave_utility(design.prize_set(), util_rng);
        s.noise_scale = opt.noise;
        s.label = "conc";
        specs.push_back({s, 1});
    }
    for (int i = 0; i < opt.convex; ++i) {
        AgentSpec s;
        s.kind = AgentSpec::Kind::ExpectedUtility;
        s.utility = random_convex_utility(design.prize_set(), util_rng);
        s.noise_scale = opt.noise;
        s.label = "conv";
        specs.push_back({s, 1});
    }

    SimConfig sim;
    sim.rounds = opt.rounds;
    sim.master_seed = opt.seed;
    auto records = simulate_dataset(design, specs, sim);
    write_output(opt.out, records_to_csv(design, records));

    // Score every simulated agent-round and report the distribution, the
    // same quantile rule the calibration entry point uses.
    Dataset data = dataset_from_records(design, records);
    ScoringTable table(design, HmMode::Strict, {});
    std::vector<int> histogram;
    long total = 0;
    for (const auto& subject : data.subjects) {
        for (const auto& slice : slice_rounds(design, subject)) {
            auto corr = correspondence_of_round(design, slice);
            int score = hm_score_only(design, corr, HmPolicy::Penalize, table);
            if (score >= (int)histogram.size()) histogram.resize(score + 1, 0);
            ++histogram[score];
            ++total;
        }
    }
    int quantile = 0;
    if (opt.percentile >= 1.0) {
        quantile = (int)histogram.size() - 1;
    } else {
        const long needed = (long)std::ceil(opt.percentile * (double)total);
        long seen = 0;
        for (int s = 0; s < (int)histogram.size(); ++s) {
            seen += histogram[s];
            if (seen >= needed) {
                quantile = s;
                break;
            }
        }
    }
    double mean = 0.0;
    for (int s = 0; s < (int)histogram.size(); ++s)
        mean += (double)s * (double)histogram[s];
    if (total > 0) mean /= (double)total;

    ordered_json summary;
    summary["format"] = "revpref-simulation";
    summary["seed"] = opt.seed;
    summary["rounds"] = opt.rounds;
    ordered_json agents;
    agents["uniform"] = opt.uniform;
    agents["concave"] = opt.concave;
    agents["convex"] = opt.convex;
    agents["noise_scale"] = opt.noise;
    agents["include_deferral"] = !opt.no_deferral;
    summary["agents"] = std::move(agents);
    summary["dataset_path"] = opt.out;
    ordered_json hm;
    hm["mode"] = "strict";
    hm["policy"] = "penalize";
    hm["agent_rounds"] = total;
    hm["histogram"] = histogram;
    hm["mean"] = mean;
    hm["percentile"] = opt.percentile;
    hm["percentile_score"] = quantile;
    hm["max_score"] = (int)histogram.size() - 1;
    summary["hm"] = std::move(hm);
    write_output(opt.summary_out, summary.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Revealed-preference analysis of lottery-menu choice data"};
    app.require_subcommand(1);

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand(
        "analyze", "Per-subject and aggregate analysis of a choices file");
    analyze->add_option("--choices", an.choices, "Choices CSV to analyze")
        ->required();
    analyze->add_option("--attributes", an.attributes,
                        "Optional subject attributes CSV (numeric columns)");
    analyze->add_option("--design", an.design_dir,
                        "Design directory with lotteries.csv, menus.csv, "
                        "fixtures.toml (default: built-in)");
    analyze->add_option("--policy", an.policy, "Deferral policy")
        ->check(CLI::IsMember({"strict", "lenient"}));
    analyze->add_option("--fosd-mode", an.fosd_mode, "Dominance-choice axiom form")
        ->check(CLI::IsMember({"strict-axiom", "dominated-choice"}));
    analyze->add_option("--taxonomy", an.taxonomy, "Dominance labels to use")
        ->check(CLI::IsMember({"declared", "computed"}));
    analyze->add_option("--merge-threshold", an.merge_threshold,
                        "Rounds a choice needs to enter the merged set")
        ->check(CLI::NonNegativeNumber);
    analyze->add_flag("--renormalize-stochastic", an.renormalize,
                      "Condition stochastic frequencies on active choice");
    analyze->add_option("--approx-threshold", an.approx_threshold,
                        "Score ceiling for the approximate-maximizer flag");
    analyze->add_option("--out", an.out, "Output path (default: stdout)");
    analyze->add_option("--format", an.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    SimulateOptions si;
    auto* simulate = app.add_subcommand(
        "simulate", "Generate a synthetic dataset plus a score summary");
    simulate->add_option("--design", si.design_dir,
                         "Design directory (default: built-in)");
    simulate->add_option("--uniform", si.uniform, "Uniform-random agents");
    simulate->add_option("--concave", si.concave, "Concave expected-utility agents");
    simulate->add_option("--convex", si.convex, "Convex expected-utility agents");
    simulate->add_option("--noise", si.noise,
                         "Gumbel noise scale for expected-utility agents")
        ->check(CLI::NonNegativeNumber);
    simulate->add_flag("--no-deferral", si.no_deferral,
                       "Drop the deferral option from uniform draws");
    simulate->add_option("--rounds", si.rounds, "Rounds per agent")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", si.seed, "Master seed");
    simulate->add_option("--percentile", si.percentile,
                         "Quantile of the per-round score distribution")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--out", si.out, "Dataset output path");
    simulate->add_option("--summary-out", si.summary_out,
                         "Summary JSON path (default: stdout)");

    std::string audit_design, audit_out;
    auto* audit = app.add_subcommand(
        "audit-dominance", "Recompute dominance relations and compare with "
                           "the declared taxonomy");
    audit->add_option("--design", audit_design, "Design directory (default: built-in)");
    audit->add_option("--out", audit_out, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) return run_analyze(an);
        if (simulate->parsed()) return run_simulate(si);
        const ExperimentDesign& design = resolve_design(audit_design);
        write_output(audit_out, run_dominance_audit(design).dump(2) + "\n");
        return 0;
    } catch (const InternalCheckError& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
