// Acceptance gate: nine end-to-end checks covering exact dominance
// regeneration, the documented tabulation defect, mixture identities, the
// curvature property suite, oracle equivalence of the scoring, the
// indifference illustration, calibration, the statistics, and full-pipeline
// determinism. One PASS/FAIL line per criterion; runtime budgets and
// tolerances are pinned in the constants below.
#include "revpref/audit.hpp"
#include "revpref/orders.hpp"
#include "revpref/report.hpp"
#include "revpref/simulate.hpp"
#include "revpref/stats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace revpref;
using Clock = std::chrono::steady_clock;

constexpr double kBudgetDominance = 1.0;    // criterion 1, seconds
constexpr double kBudgetProperty = 60.0;    // criterion 4
constexpr double kBudgetOracle = 60.0;      // criterion 5
constexpr double kBudgetCalibration = 300.0; // criterion 7
constexpr double kBudgetPipeline = 300.0;   // criterion 9
constexpr double kPTolerance = 1e-12;       // criterion 8 float comparisons

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome failed(std::string why) { return {false, std::move(why)}; }

Outcome passed(std::string note = std::string()) { return {true, std::move(note)}; }

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f s", s);
    return buf;
}

const Lottery& lot(const char* id) {
    const auto& d = built_in_design();
    return d.lottery(d.require_lottery(id));
}

// Criterion 1: the built-in CDF values and expected values match the
// distributed tabulation digit for digit, the area columns for A1, B1 and D
// match at all 24 integer points, and the two documented first-order
// relations plus the menu-10 label hold under exact recomputation.
Outcome criterion_dominance_tables() {
    auto t0 = Clock::now();
    const auto& d = built_in_design();

    struct PrintedCdf {
        const char* id;
        std::array<const char*, 5> cdf; // at x = 0, 9, 10, 20, 24
        const char* ev;
    };
    const PrintedCdf printed[] = {
        {"A1", {"0.1", "0.1", "0.7", "1", "1"}, "12"},
        {"A2", {"0.2", "0.2", "0.7", "1", "1"}, "11"},
        {"C1", {"0.625", "0.625", "0.775", "1", "1"}, "6"},
        {"C2", {"0.625", "0.825", "0.825", "0.825", "1"}, "6"},
        {"D", {"0.15", "0.15", "0.65", "1", "1"}, "12"},
    };
    const int points[5] = {0, 9, 10, 20, 24};
    for (const auto& row : printed) {
        const Lottery& p = lot(row.id);
        for (int i = 0; i < 5; ++i) {
            if (cdf_at(p, Rat(points[i])) != rat_from_string(row.cdf[i]))
                return failed(std::string(row.id) + ": CDF at " +
                              std::to_string(points[i]) + " deviates from the tabulated " +
                              row.cdf[i]);
        }
        if (expected_value(p) != rat_from_string(row.ev))
            return failed(std::string(row.id) + ": expected value deviates from " + row.ev);
    }

    for (const char* id : {"A1", "B1", "D"}) {
        auto column = reference_area_column(id);
        if (column.size() != 24) return failed(std::string(id) + ": tabulated column incomplete");
        for (int x = 1; x <= 24; ++x) {
            if (column[x - 1] != cdf_area_at(lot(id), Rat(x)))
                return failed(std::string(id) + ": area at " + std::to_string(x) +
                              " deviates from the tabulated value");
        }
    }

    auto r1 = classify_dominance(lot("A1"), lot("A2"));
    if (r1.kind != DominanceKind::Fosd || r1.dominant != "A1")
        return failed("A1 does not first-order dominate A2 under recomputation");
    auto r2 = classify_dominance(lot("D"), lot("A2"));
    if (r2.kind != DominanceKind::Fosd || r2.dominant != "D")
        return failed("D does not first-order dominate A2 under recomputation");

    const DeclaredLabel& declared = d.declared.at("10");
    DeclaredLabel computed = d.computed_label(d.require_menu("10"));
    if (declared.kind != DominanceKind::Fosd || declared.dominant != "A1" ||
        computed.kind != DominanceKind::Fosd || computed.dominant != "A1")
        return failed("menu 10 is not first-order dominated by A1 in both labelings");

    double dt = seconds_since(t0);
    if (dt >= kBudgetDominance)
        return failed("runtime " + fmt_seconds(dt) + " exceeds the 1 s budget");
    return passed(fmt_seconds(dt));
}

// Criterion 2: the exact oracle pins the B2 area integral at 12 (equal to 24
// minus its expected value), identifies the tabulated B2 column as the exact
// values shifted down one row from row 10 on, and the audit flags proper
// second-order dominance for the four pairs the built-in taxonomy labels as
// unranked.
Outcome criterion_tabulation_defect() {
    const Lottery& b2 = lot("B2");
    if (cdf_area_at(b2, Rat(24)) != Rat(12))
        return failed("B2 area integral over [0,24] is not 12");
    if (Rat(24) - expected_value(b2) != Rat(12))
        return failed("B2 area integral does not equal 24 minus the expected value");

    auto column = reference_area_column("B2");
    if (column.size() != 24) return failed("B2 tabulated column incomplete");
    for (int x = 10; x <= 24; ++x) {
        if (column[x - 1] != cdf_area_at(b2, Rat(x - 1)))
            return failed("B2 tabulated row " + std::to_string(x) +
                          " is not the exact area at " + std::to_string(x - 1));
        if (column[x - 1] == cdf_area_at(b2, Rat(x)))
            return failed("B2 tabulated row " + std::to_string(x) +
                          " unexpectedly matches the exact area at the same point");
    }

    // The four menu labels the audit must overturn, with the recomputed
    // dominant side.
    const struct {
        const char* menu;
        const char* dominant;
    } overturned[] = {{"2", "B1"}, {"5", "D"}, {"7", "A1"}, {"3", "C1"}};
    auto doc = run_dominance_audit(built_in_design());
    for (const auto& want : overturned) {
        bool found = false;
        for (const auto& row : doc["taxonomy"]) {
            if (row["menu"] != want.menu) continue;
            found = true;
            if (row["agree"].get<bool>())
                return failed(std::string("menu ") + want.menu +
                              ": audit does not flag the label");
            if (row["computed"]["kind"] != "sosd" ||
                row["computed"]["dominant"] != want.dominant)
                return failed(std::string("menu ") + want.menu +
                              ": audit recomputation is not second-order dominance by " +
                              want.dominant);
        }
        if (!found) return failed(std::string("menu ") + want.menu + " missing from the audit");
    }
    // Same four relations via direct recomputation, independent of the audit
    // document.
    const struct {
        const char* p;
        const char* q;
        const char* dominant;
    } pairs[] = {{"B1", "B2", "B1"}, {"D", "B2", "D"}, {"A1", "B2", "A1"}, {"C1", "C2", "C1"}};
    for (const auto& pr : pairs) {
        auto rel = classify_dominance(lot(pr.p), lot(pr.q));
        if (rel.kind != DominanceKind::Sosd || rel.dominant != pr.dominant)
            return failed(std::string(pr.p) + "/" + pr.q +
                          ": direct recomputation is not second-order dominance by " +
                          pr.dominant);
    }
    return passed();
}

// Criterion 3: the half-half mixtures with the degenerate zero lottery
// reproduce C1 and C2 exactly.
Outcome criterion_mixture_identity() {
    const auto& d = built_in_design();
    const Lottery& r = d.fixture_lottery("R");
    if (!mix(Rat(1, 2), lot("B1"), r).same_distribution(lot("C1")))
        return failed("mix(1/2, B1, R) is not distributed as C1");
    if (!mix(Rat(1, 2), lot("B2"), r).same_distribution(lot("C2")))
        return failed("mix(1/2, B2, R) is not distributed as C2");
    return passed();
}

// Criterion 4: 1,000 strictly concave plus 1,000 strictly convex noiseless
// maximizers clear every gate: zero score per round and merged, all three
// binary-menu checks, feasibility, and the matching risk attitude.
Outcome criterion_curvature_property() {
    auto t0 = Clock::now();
    auto report = proposition1_suite(built_in_design(), 1000, 424242);
    if (report.n_concave != 1000 || report.n_convex != 1000)
        return failed("suite did not run the requested 1,000 agents per side");
    if (!report.pass || report.failures != 0) {
        std::string note = std::to_string(report.failures) + " failures";
        if (!report.failure_notes.empty()) note += "; first: " + report.failure_notes.front();
        return failed(note);
    }
    double dt = seconds_since(t0);
    if (dt >= kBudgetProperty)
        return failed("runtime " + fmt_seconds(dt) + " exceeds the 60 s budget");
    return passed(fmt_seconds(dt));
}

// Brute force for criterion 5: the minimum number of menu observations to
// delete so some strict order rationalizes the rest, by exhaustive search
// over deletion sets and permutations. Deliberately independent of the
// enumeration and scoring used by the library.
int minimal_deletion_oracle(const ExperimentDesign& d, const std::vector<int>& chosen) {
    const int menu_count = static_cast<int>(d.menus.size());
    const int n = static_cast<int>(d.lotteries.size());
    for (int deleted = 0; deleted <= menu_count; ++deleted) {
        for (std::uint32_t keep = 0; keep < (1u << menu_count); ++keep) {
            if (std::popcount(keep) != menu_count - deleted) continue;
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<int> rank(n);
                for (int pos = 0; pos < n; ++pos) rank[perm[pos]] = pos;
                bool ok = true;
                for (int m = 0; m < menu_count && ok; ++m) {
                    if (!(keep & (1u << m))) continue;
                    int best = d.menus[m].members[0];
                    for (int e : d.menus[m].members)
                        if (rank[e] < rank[best]) best = e;
                    if (best != chosen[m]) ok = false;
                }
                if (ok) return deleted;
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
    return menu_count;
}

Outcome criterion_scoring_oracle() {
    auto t0 = Clock::now();
    Rng rng(777);
    for (int instance = 0; instance < 200; ++instance) {
        const int n = 2 + static_cast<int>(rng.uniform_int(4)); // 2..5 alternatives
        ExperimentDesign d;
        for (int i = 0; i < n; ++i) {
            std::string id = "L" + std::to_string(i);
            d.lottery_index[id] = i;
            d.lotteries.push_back(Lottery::make(id, {{Rat(i + 1), Rat(1)}}));
        }
        const int wanted = 1 + static_cast<int>(rng.uniform_int(6)); // up to 6 menus
        std::set<std::uint32_t> used;
        while (static_cast<int>(d.menus.size()) < wanted) {
            std::uint32_t mask =
                static_cast<std::uint32_t>(rng.uniform_int(1u << n));
            if (std::popcount(mask) < 2 || used.count(mask)) {
                // A small universe can run out of fresh subsets.
                if (static_cast<int>(used.size()) == (1 << n) - n - 1) break;
                continue;
            }
            used.insert(mask);
            Menu m;
            m.id = "m" + std::to_string(d.menus.size());
            m.mask = mask;
            for (int e = 0; e < n; ++e)
                if (mask & (1u << e)) m.members.push_back(e);
            d.menu_index[m.id] = static_cast<int>(d.menus.size());
            d.menus.push_back(std::move(m));
        }
        if (d.menus.empty()) continue;

        ChoiceCorrespondence C;
        C.subject_id = "inst-" + std::to_string(instance);
        std::vector<int> chosen;
        for (const auto& m : d.menus) {
            int pick = m.members[rng.uniform_int(m.members.size())];
            chosen.push_back(pick);
            C.values.push_back(1u << pick);
        }

        int scored = hm_score(d, C, HmMode::Strict, HmPolicy::Penalize).score;
        int oracle = minimal_deletion_oracle(d, chosen);
        if (scored != oracle)
            return failed("instance " + std::to_string(instance) + ": score " +
                          std::to_string(scored) + " vs oracle " + std::to_string(oracle));
    }
    double dt = seconds_since(t0);
    if (dt >= kBudgetOracle)
        return failed("runtime " + fmt_seconds(dt) + " exceeds the 60 s budget");
    return passed(fmt_seconds(dt));
}

// Criterion 6: the three-menu indifference illustration scores exactly one
// mistaken menu (the quaternary one), and the order enumeration matches the
// classical counts for 2 through 7 alternatives.
Outcome criterion_indifference_illustration() {
    const auto& d = built_in_design();
    ChoiceCorrespondence c;
    c.subject_id = "illustration";
    c.values.assign(d.menus.size(), 0u);
    auto bit = [&d](const char* id) { return 1u << d.require_lottery(id); };
    c.values[d.require_menu("1")] = bit("A1") | bit("A2");
    c.values[d.require_menu("11")] = bit("A1") | bit("A2");
    c.values[d.require_menu("15")] = bit("A1");
    std::vector<int> subset = {d.require_menu("1"), d.require_menu("11"),
                               d.require_menu("15")};
    auto res = hm_score(d, c, HmMode::Weak, HmPolicy::Penalize, subset);
    if (res.score != 1)
        return failed("illustration scores " + std::to_string(res.score) + ", not 1");
    if (res.mistake_menus != std::vector<int>{d.require_menu("15")})
        return failed("the mistaken menu is not the quaternary menu 15");

    const std::uint64_t expected[] = {3, 13, 75, 541, 4683, 47293};
    for (int n = 2; n <= 7; ++n) {
        std::uint64_t want = expected[n - 2];
        if (ordered_bell(n) != want)
            return failed("order count formula at n=" + std::to_string(n) +
                          " misses " + std::to_string(want));
        std::uint64_t streamed = 0;
        enumerate_weak_orders(n, [&streamed](const std::vector<std::uint8_t>&) {
            ++streamed;
        });
        if (streamed != want)
            return failed("enumeration at n=" + std::to_string(n) + " yields " +
                          std::to_string(streamed) + ", not " + std::to_string(want));
    }
    if (res.orders_considered != 47293)
        return failed("weak scoring did not consider all 47,293 orders");
    return passed();
}

// Criterion 7: 10,000 uniform-random agents, one pass each over the menu
// collection, scored strict with deferrals out of the draw. The 2.5th
// percentile of the score distribution must land in {1, 2, 3}; the
// documented value is 2 and the band covers the underdetermined setup.
Outcome criterion_calibration() {
    auto t0 = Clock::now();
    CalibrationConfig cfg;
    cfg.n_agents = 10000;
    auto result = calibrate_hm_percentile(built_in_design(), cfg);
    long total = 0;
    for (int count : result.histogram) total += count;
    if (result.n_agents != 10000 || total != 10000)
        return failed("histogram does not cover the 10,000 agents");
    if (result.percentile_score < 1 || result.percentile_score > 3)
        return failed("2.5th percentile is " + std::to_string(result.percentile_score) +
                      ", outside {1, 2, 3}");
    double dt = seconds_since(t0);
    if (dt >= kBudgetCalibration)
        return failed("runtime " + fmt_seconds(dt) + " exceeds the 5 min budget");
    return passed("percentile score " + std::to_string(result.percentile_score) + ", " +
                  fmt_seconds(dt));
}

// Criterion 8: pinned statistical values. The 2x2 table from the documented
// first-versus-last comparison is significant below 0.001; a symmetric table
// is exactly 1; the no-ties rank-correlation hand case is 0.6; identical
// samples are exactly 1 under the rank-sum test.
Outcome criterion_statistics() {
    auto fisher = fisher_exact_2x2(106, 202, 177, 131);
    if (!fisher.ok || fisher.p_value >= 0.001)
        return failed("table (106,202;177,131) has p >= 0.001");
    auto symmetric = fisher_exact_2x2(5, 5, 5, 5);
    if (!symmetric.ok || std::abs(symmetric.p_value - 1.0) > kPTolerance)
        return failed("symmetric table p is not 1");
    auto rho = spearman_rho({1, 2, 3, 4}, {2, 1, 4, 3});
    if (!rho.ok || std::abs(rho.statistic - 0.6) > kPTolerance)
        return failed("rank correlation of the hand case is not 0.6");
    std::vector<double> sample = {1, 2, 3, 4, 5};
    auto mw = mann_whitney_u(sample, sample);
    if (!mw.ok || std::abs(mw.p_value - 1.0) > kPTolerance)
        return failed("identical samples do not give p = 1");
    return passed();
}

// Criterion 9: a mixed 308-agent population runs through the whole pipeline
// twice from scratch and produces byte-identical JSON and CSV reports within
// the budget, and the logical nestings hold on every subject and every
// lottery pair.
Outcome criterion_pipeline_determinism() {
    auto t0 = Clock::now();
    const auto& d = built_in_design();

    auto build = [&d]() {
        Rng util_rng(97);
        std::vector<std::pair<AgentSpec, int>> specs;
        AgentSpec uniform;
        uniform.kind = AgentSpec::Kind::UniformRandom;
        uniform.label = "unif";
        specs.push_back({uniform, 150});
        auto add_eu = [&](const char* label, bool concave, double noise, int count) {
            for (int i = 0; i < count; ++i) {
                AgentSpec s;
                s.kind = AgentSpec::Kind::ExpectedUtility;
                s.utility = concave ? random_concave_utility(d.prize_set(), util_rng)
                                    : random_convex_utility(d.prize_set(), util_rng);
                s.noise_scale = noise;
                s.label = label;
                specs.push_back({s, 1});
            }
        };
        add_eu("conc", true, 0.0, 50);
        add_eu("conv", false, 0.0, 50);
        add_eu("nconc", true, 0.1, 29);
        add_eu("nconv", false, 0.1, 29);

        SimConfig sim;
        sim.rounds = 5;
        sim.master_seed = 97;
        Dataset data = dataset_from_records(d, simulate_dataset(d, specs, sim));

        RunConfig cfg;
        cfg.choices_path = "sim://mixed-308";
        AnalysisReport rep = run_analysis(d, data, cfg);
        return rep;
    };

    AnalysisReport first = build();
    if (static_cast<int>(first.subjects.size()) != 308)
        return failed("population is not 308 subjects");
    for (const auto& s : first.subjects) {
        if (!s.included) continue;
        if (s.sst_ok && !s.mst_ok)
            return failed(s.subject_id + ": strong transitivity without moderate");
        if (s.mst_ok && !s.wst_ok)
            return failed(s.subject_id + ": moderate transitivity without weak");
        if (s.eum.is_eum_all && !s.eum.is_um)
            return failed(s.subject_id + ": full consistency without maximization");
    }
    for (const auto& p : d.lotteries) {
        for (const auto& q : d.lotteries) {
            if (p.id == q.id) continue;
            auto fosd = check_fosd(p, q);
            if (fosd.kind != DominanceKind::Fosd) continue;
            auto sosd = check_sosd(p, q);
            if (sosd.kind != DominanceKind::Sosd || sosd.dominant != fosd.dominant)
                return failed(p.id + "/" + q.id +
                              ": first-order dominance without second-order dominance");
        }
    }

    std::string json1 = report_to_json(first).dump(2);
    std::string csv1 = report_to_csv(first);
    AnalysisReport second = build();
    std::string json2 = report_to_json(second).dump(2);
    std::string csv2 = report_to_csv(second);
    if (json1 != json2) return failed("JSON reports differ between runs");
    if (csv1 != csv2) return failed("CSV reports differ between runs");

    double dt = seconds_since(t0);
    if (dt >= kBudgetPipeline)
        return failed("runtime " + fmt_seconds(dt) + " exceeds the 5 min budget");
    return passed(fmt_seconds(dt));
}

struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "reference distribution tables regenerate exactly", criterion_dominance_tables},
    {2, "tabulation defect detected and four labels overturned", criterion_tabulation_defect},
    {3, "mixture identities hold exactly", criterion_mixture_identity},
    {4, "curvature-shaped maximizers clear every gate", criterion_curvature_property},
    {5, "strict scoring matches the deletion oracle", criterion_scoring_oracle},
    {6, "indifference illustration and order counts", criterion_indifference_illustration},
    {7, "random-choice calibration lands in the documented band", criterion_calibration},
    {8, "statistical tests reproduce pinned values", criterion_statistics},
    {9, "full pipeline is deterministic end to end", criterion_pipeline_determinism},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        int id = std::atoi(argv[i]);
        if (id < 1 || id > 9) {
            std::fprintf(stderr, "unknown criterion '%s' (valid: 1..9)\n", argv[i]);
            return 2;
        }
        selected.push_back(id);
    }
    if (selected.empty())
        for (const auto& c : kCriteria) selected.push_back(c.id);

    bool all_ok = true;
    for (int id : selected) {
        const Criterion& c = kCriteria[id - 1];
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = failed(std::string("exception: ") + e.what());
        }
        if (outcome.pass) {
            std::printf("PASS %d: %s%s%s%s\n", c.id, c.title,
                        outcome.detail.empty() ? "" : " (",
                        outcome.detail.c_str(), outcome.detail.empty() ? "" : ")");
        } else {
            all_ok = false;
            std::printf("FAIL %d: %s: %s\n", c.id, c.title, outcome.detail.c_str());
        }
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
