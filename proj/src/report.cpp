// Pipeline assembly: subject analysis, aggregate tables, serialization, and
// the cross-checks that keep the emitted numbers honest.
#include "revpref/report.hpp"

#include "revpref/csv.hpp"
#include "revpref/errors.hpp"
#include "revpref/stats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace revpref {

using nlohmann::ordered_json;

namespace {

const char* policy_name(DeferralPolicy p) {
    return p == DeferralPolicy::Strict ? "strict" : "lenient";
}

const char* fosd_mode_name(FosdMode m) {
    return m == FosdMode::StrictAxiom ? "strict-axiom" : "dominated-choice";
}

const char* taxonomy_name(TaxonomyMode m) {
    return m == TaxonomyMode::Declared ? "declared" : "computed";
}

const char* kind_name(DominanceKind k) {
    switch (k) {
    case DominanceKind::Fosd: return "fosd";
    case DominanceKind::Sosd: return "sosd";
    case DominanceKind::None: return "none";
    }
    return "?";
}

constexpr std::array<const char*, 7> kAxiomKeys = {
    "decisiveness", "transitivity", "contraction", "warp",
    "fosd",         "independence", "star"};

// Subject covariates: one numeric column per attribute, keyed by subject id.
struct AttributeData {
    std::vector<std::string> names;
    std::map<std::string, std::map<std::string, double>> values;
};

bool parse_strict_double(const std::string& text, double* out) {
    if (text.empty()) return false;
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + text.size() || errno == ERANGE || !std::isfinite(v))
        return false;
    *out = v;
    return true;
}

AttributeData load_attributes(const std::string& path) {
    CsvTable table = read_csv(path);
    int id_col = table.column("subject_id");

    AttributeData attrs;
    for (int c = 0; c < static_cast<int>(table.header.size()); ++c) {
        if (c == id_col) continue;
        attrs.names.push_back(table.header[c]);
        attrs.values[table.header[c]];
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (int c = 0; c < static_cast<int>(row.size()); ++c) {
            if (c == id_col || row[c].empty()) continue;
            double v = 0.0;
            if (!parse_strict_double(row[c], &v))
                throw ValidationError(table.path + ": line " +
                                      std::to_string(table.line_numbers[r]) +
                                      ": attribute '" + table.header[c] +
                                      "' needs a numeric value, got '" + row[c] + "'");
            attrs.values[table.header[c]][row[id_col]] = v;
        }
    }
    return attrs;
}

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

ordered_json json_or_null(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

// {count, share} with the share as an exact fraction of `denom`, null when
// the denominator is empty.
ordered_json count_share(int count, int denom) {
    ordered_json o;
    o["count"] = count;
    o["share"] = denom > 0 ? ordered_json(rat_to_string(Rat(count, denom)))
                           : ordered_json(nullptr);
    return o;
}

ordered_json sat_share(int satisfied, int denom) {
    ordered_json o;
    o["satisfied"] = satisfied;
    o["share"] = denom > 0 ? ordered_json(rat_to_string(Rat(satisfied, denom)))
                           : ordered_json(nullptr);
    return o;
}

ordered_json label_json(const DeclaredLabel& label) {
    ordered_json o;
    o["kind"] = kind_name(label.kind);
    o["dominant"] = label.dominant.empty() ? ordered_json(nullptr)
                                           : ordered_json(label.dominant);
    o["near"] = label.near;
    return o;
}

ordered_json test_p_or_null(const TestResult& t) {
    return t.ok ? ordered_json(t.p_value) : ordered_json(nullptr);
}

SubjectAnalysis analyze_subject(const ExperimentDesign& design,
                                const SubjectData& subject, const RunConfig& config,
                                const ScoringTable& strict_table,
                                const ScoringTable& weak_table,
                                const std::vector<std::pair<int, int>>& nested,
                                const std::vector<std::pair<std::string, std::string>>& fosd_menus,
                                const std::vector<StarPair>& star_pairs) {
    SubjectAnalysis s;
    s.subject_id = subject.id;
    s.complete = subject.complete;
    s.issues = subject.issues;
    s.included = subject.complete;
    if (!s.included) return s;

    const HmPolicy hm_policy = hm_policy_of(config.policy);
    auto slices = slice_rounds(design, subject);
    s.merged = merge_correspondence(design, slices,
                                    Rat(config.merge_threshold, design.rounds_expected));

    auto absorb = [&s](std::vector<AxiomViolation> found) {
        for (auto& v : found) s.violations.push_back(std::move(v));
    };
    absorb(check_decisiveness(design, s.merged));
    absorb(check_transitivity(design, s.merged, design.triples));
    absorb(check_contraction(design, s.merged, nested));
    absorb(check_warp(design, s.merged));
    absorb(check_fosd_choice(design, s.merged, fosd_menus, config.fosd_mode));
    absorb(check_independence(design, s.merged, design.independence_pairs, config.policy));
    s.star = check_star(design, s.merged, star_pairs, config.policy);
    for (const auto& v : s.star.violations) s.violations.push_back(v);
    for (const auto& v : s.violations)
        ++s.violation_counts[static_cast<int>(v.axiom)];

    s.eum = classify_eum(design, s.merged, HmMode::Weak, hm_policy, config.taxonomy,
                         config.approx_um_threshold, &weak_table);
    if (s.eum.hm > 0) {
        HmResult full = hm_score(design, s.merged, HmMode::Weak, hm_policy, {}, &weak_table);
        s.mistake_menus = full.mistake_menus;
    }
    s.eu = eu_rationalizable(design, s.merged, hm_policy, config.eu_epsilon, false);

    for (std::uint32_t mask : s.merged.values)
        if (std::popcount(mask) > 1) s.reveals_indifference = true;
    for (const auto& rec : subject.records)
        if (!rec.chosen) ++s.deferral_total;

    auto P = estimate_probabilities(design, slices);
    auto absorb_st = [&s](std::vector<StochasticViolation> found, bool* ok) {
        *ok = found.empty();
        for (auto& v : found) s.stochastic_violations.push_back(std::move(v));
    };
    absorb_st(check_regularity(design, P, nested), &s.regularity_ok);
    absorb_st(check_stochastic_transitivity(design, P, design.triples, StVariant::Weak,
                                            config.renormalize_stochastic),
              &s.wst_ok);
    absorb_st(check_stochastic_transitivity(design, P, design.triples, StVariant::Moderate,
                                            config.renormalize_stochastic),
              &s.mst_ok);
    absorb_st(check_stochastic_transitivity(design, P, design.triples, StVariant::Strong,
                                            config.renormalize_stochastic),
              &s.sst_ok);
    absorb_st(check_stochastic_decisiveness(design, P), &s.stochastic_decisiveness_ok);

    s.rounds.reserve(slices.size());
    for (const auto& slice : slices) {
        RoundAnalysis r;
        r.round_index = slice.round_index;
        auto corr = correspondence_of_round(design, slice);
        EumResult round_eum = classify_eum(design, corr, HmMode::Strict, hm_policy,
                                           config.taxonomy, config.approx_um_threshold,
                                           &strict_table);
        r.hm_strict = round_eum.hm;
        r.consistent = round_eum.is_um;
        r.eum_consistent = round_eum.is_eum_all;
        r.hm_active = hm_score_only(design, corr, HmPolicy::ActiveOnly, strict_table);
        for (const auto& outcome : slice.outcome)
            if (!outcome) ++r.deferrals;

        std::vector<double> rts;
        for (const auto& rt : slice.response_time_ms)
            if (rt) rts.push_back(static_cast<double>(*rt));
        if (!rts.empty()) r.mean_response_time_ms = mean_of(rts);

        std::set<int> triples_hit;
        for (const auto& v : check_transitivity(design, corr, design.triples))
            if (v.fixture_index >= 0) triples_hit.insert(v.fixture_index);
        r.violated_triples.assign(triples_hit.begin(), triples_hit.end());
        s.rounds.push_back(std::move(r));
    }
    return s;
}

ordered_json build_aggregate(const ExperimentDesign& design, const RunConfig& config,
                             const std::vector<SubjectAnalysis>& subjects,
                             const Dataset& data, const AttributeData& attrs) {
    const int R = design.rounds_expected;
    std::vector<const SubjectAnalysis*> inc;
    for (const auto& s : subjects)
        if (s.included) inc.push_back(&s);
    const int n = static_cast<int>(inc.size());

    ordered_json agg;
    agg["included"] = n;
    agg["excluded"] = static_cast<int>(subjects.size()) - n;

    ordered_json excluded = ordered_json::array();
    for (const auto& s : subjects) {
        if (s.included) continue;
        ordered_json row;
        row["subject_id"] = s.subject_id;
        row["issues"] = s.issues;
        excluded.push_back(std::move(row));
    }
    agg["excluded_subjects"] = std::move(excluded);

    auto count_if = [&inc](auto pred) {
        int c = 0;
        for (const auto* s : inc)
            if (pred(*s)) ++c;
        return c;
    };
    ordered_json mr;
    mr["um"] = count_share(count_if([](const SubjectAnalysis& s) { return s.eum.is_um; }), n);
    mr["approx_um"] =
        count_share(count_if([](const SubjectAnalysis& s) { return s.eum.is_approx_um; }), n);
    mr["eum_binary"] =
        count_share(count_if([](const SubjectAnalysis& s) { return s.eum.is_eum_binary; }), n);
    mr["eum_all"] =
        count_share(count_if([](const SubjectAnalysis& s) { return s.eum.is_eum_all; }), n);
    mr["eu_rationalizable"] =
        count_share(count_if([](const SubjectAnalysis& s) { return s.eu.feasible; }), n);
    mr["reveals_indifference"] =
        count_share(count_if([](const SubjectAnalysis& s) { return s.reveals_indifference; }), n);
    agg["merged_rationality"] = std::move(mr);

    ordered_json ra;
    ra["averse"] = count_if(
        [](const SubjectAnalysis& s) { return s.eum.attitude == RiskAttitude::RiskAverse; });
    ra["seeking"] = count_if(
        [](const SubjectAnalysis& s) { return s.eum.attitude == RiskAttitude::RiskSeeking; });
    ra["neutral"] = count_if(
        [](const SubjectAnalysis& s) { return s.eum.attitude == RiskAttitude::RiskNeutral; });
    ra["unclassified"] = count_if(
        [](const SubjectAnalysis& s) { return s.eum.attitude == RiskAttitude::Unclassified; });
    agg["risk_attitudes"] = std::move(ra);

    ordered_json det;
    for (int a = 0; a < 7; ++a)
        det[kAxiomKeys[a]] = sat_share(
            count_if([a](const SubjectAnalysis& s) { return s.violation_counts[a] == 0; }), n);
    ordered_json sto;
    sto["regularity"] =
        sat_share(count_if([](const SubjectAnalysis& s) { return s.regularity_ok; }), n);
    sto["wst"] = sat_share(count_if([](const SubjectAnalysis& s) { return s.wst_ok; }), n);
    sto["mst"] = sat_share(count_if([](const SubjectAnalysis& s) { return s.mst_ok; }), n);
    sto["sst"] = sat_share(count_if([](const SubjectAnalysis& s) { return s.sst_ok; }), n);
    sto["stochastic-decisiveness"] = sat_share(
        count_if([](const SubjectAnalysis& s) { return s.stochastic_decisiveness_ok; }), n);
    sto["all_five"] = sat_share(count_if([](const SubjectAnalysis& s) {
                                    return s.regularity_ok && s.wst_ok && s.mst_ok &&
                                           s.sst_ok && s.stochastic_decisiveness_ok;
                                }),
                                n);
    ordered_json compliance;
    compliance["deterministic"] = std::move(det);
    compliance["stochastic"] = std::move(sto);
    agg["axiom_compliance"] = std::move(compliance);

    ordered_json pr;
    std::vector<int> round_ids(R);
    for (int r = 0; r < R; ++r) round_ids[r] = r + 1;
    pr["rounds"] = round_ids;
    std::vector<int> um_counts(R, 0), approx_counts(R, 0), active_counts(R, 0),
        deferral_counts(R, 0);
    std::vector<double> hm_means(R, 0.0), hm_medians(R, 0.0);
    ordered_json rt_means = ordered_json::array();
    ordered_json rt_medians = ordered_json::array();
    std::vector<std::vector<double>> round_hms(R), round_rts(R);
    for (int r = 0; r < R; ++r) {
        for (const auto* s : inc) {
            const auto& round = s->rounds[r];
            if (round.consistent) ++um_counts[r];
            if (round.hm_strict <= config.approx_um_threshold) ++approx_counts[r];
            if (round.hm_active == 0) ++active_counts[r];
            deferral_counts[r] += round.deferrals;
            round_hms[r].push_back(static_cast<double>(round.hm_strict));
            if (round.mean_response_time_ms)
                round_rts[r].push_back(*round.mean_response_time_ms);
        }
        if (!round_hms[r].empty()) {
            hm_means[r] = mean_of(round_hms[r]);
            hm_medians[r] = median_of(round_hms[r]);
        }
        rt_means.push_back(round_rts[r].empty() ? ordered_json(nullptr)
                                                : ordered_json(mean_of(round_rts[r])));
        rt_medians.push_back(round_rts[r].empty() ? ordered_json(nullptr)
                                                  : ordered_json(median_of(round_rts[r])));
    }
    pr["um_counts"] = um_counts;
    pr["approx_um_counts"] = approx_counts;
    pr["active_um_counts"] = active_counts;
    pr["hm_mean"] = hm_means;
    pr["hm_median"] = hm_medians;
    pr["deferral_counts"] = deferral_counts;
    pr["mean_response_time_ms"] = std::move(rt_means);
    pr["median_response_time_ms"] = std::move(rt_medians);

    ordered_json tests;
    const int first = 0, last = R - 1;
    tests["um_first_vs_last_fisher_p"] = test_p_or_null(
        fisher_exact_2x2(um_counts[first], n - um_counts[first], um_counts[last],
                         n - um_counts[last]));
    tests["approx_um_first_vs_last_fisher_p"] = test_p_or_null(
        fisher_exact_2x2(approx_counts[first], n - approx_counts[first],
                         approx_counts[last], n - approx_counts[last]));
    tests["active_um_first_vs_last_fisher_p"] = test_p_or_null(
        fisher_exact_2x2(active_counts[first], n - active_counts[first],
                         active_counts[last], n - active_counts[last]));
    tests["hm_first_vs_last_mw_p"] =
        test_p_or_null(mann_whitney_u(round_hms[first], round_hms[last]));
    tests["response_time_first_vs_last_mw_p"] =
        test_p_or_null(mann_whitney_u(round_rts[first], round_rts[last]));
    pr["tests"] = std::move(tests);
    agg["per_round"] = std::move(pr);

    // Menu-level deferral tallies need the raw records: the analysis rows
    // only keep per-round totals.
    const int menu_count = static_cast<int>(design.menus.size());
    std::vector<int> menu_defs(menu_count, 0), menu_always(menu_count, 0);
    for (std::size_t i = 0; i < subjects.size(); ++i) {
        if (!subjects[i].included) continue;
        std::vector<int> per_menu(menu_count, 0);
        for (const auto& rec : data.subjects[i].records)
            if (!rec.chosen) ++per_menu[rec.menu];
        for (int m = 0; m < menu_count; ++m) {
            menu_defs[m] += per_menu[m];
            if (per_menu[m] == R) ++menu_always[m];
        }
    }
    ordered_json menu_rows = ordered_json::array();
    for (int m = 0; m < menu_count; ++m) {
        ordered_json row;
        row["menu"] = design.menus[m].id;
        row["deferrals"] = menu_defs[m];
        row["always_deferred_subjects"] = menu_always[m];
        menu_rows.push_back(std::move(row));
    }
    agg["menu_deferrals"] = std::move(menu_rows);

    const int triple_count = static_cast<int>(design.triples.size());
    std::vector<int> triple_rounds(triple_count, 0);
    for (const auto* s : inc)
        for (const auto& round : s->rounds)
            for (int t : round.violated_triples) ++triple_rounds[t];
    std::vector<int> order(triple_count);
    for (int t = 0; t < triple_count; ++t) order[t] = t;
    std::stable_sort(order.begin(), order.end(), [&triple_rounds](int a, int b) {
        return triple_rounds[a] < triple_rounds[b];
    });
    const int subject_round_total = n * R;
    ordered_json triple_rows = ordered_json::array();
    for (int i = 0; i < triple_count; ++i) {
        const int t = order[i];
        ordered_json row;
        row["triple"] = t;
        row["lotteries"] = design.triples[t].lotteries;
        row["menus"] = design.triples[t].menus;
        row["subject_rounds"] = triple_rounds[t];
        row["share"] = subject_round_total > 0
                           ? ordered_json(rat_to_string(
                                 Rat(triple_rounds[t], subject_round_total)))
                           : ordered_json(nullptr);
        if (i + 1 < triple_count) {
            const int next = order[i + 1];
            row["p_vs_next"] = test_p_or_null(fisher_exact_2x2(
                triple_rounds[t], subject_round_total - triple_rounds[t],
                triple_rounds[next], subject_round_total - triple_rounds[next]));
        } else {
            row["p_vs_next"] = nullptr;
        }
        triple_rows.push_back(std::move(row));
    }
    agg["triple_violations"] = std::move(triple_rows);

    auto stability_row = [&inc, R](auto flag_of) {
        std::vector<int> per_round(R, 0), retained(std::max(R - 1, 0), 0);
        int improved = 0, not_first = 0;
        for (const auto* s : inc) {
            for (int r = 0; r < R; ++r)
                if (flag_of(s->rounds[r])) ++per_round[r];
            for (int r = 0; r + 1 < R; ++r)
                if (flag_of(s->rounds[r]) && flag_of(s->rounds[r + 1])) ++retained[r];
            if (!flag_of(s->rounds[0])) {
                ++not_first;
                if (flag_of(s->rounds[R - 1])) ++improved;
            }
        }
        ordered_json row;
        row["per_round_counts"] = per_round;
        row["retained"] = retained;
        ordered_json shares = ordered_json::array();
        for (int r = 0; r + 1 < R; ++r)
            shares.push_back(per_round[r] > 0
                                 ? ordered_json(rat_to_string(Rat(retained[r], per_round[r])))
                                 : ordered_json(nullptr));
        row["retention_shares"] = std::move(shares);
        row["improved"] = improved;
        row["not_rational_first"] = not_first;
        row["improvement_share"] =
            not_first > 0 ? ordered_json(rat_to_string(Rat(improved, not_first)))
                          : ordered_json(nullptr);
        return row;
    };
    ordered_json stability;
    stability["um"] = stability_row([](const RoundAnalysis& r) { return r.consistent; });
    stability["eum"] =
        stability_row([](const RoundAnalysis& r) { return r.eum_consistent; });
    agg["stability"] = std::move(stability);

    ordered_json at = ordered_json::object();
    for (const auto& name : attrs.names) {
        const auto& column = attrs.values.at(name);
        std::vector<double> xs, ys;
        for (const auto* s : inc) {
            auto it = column.find(s->subject_id);
            if (it == column.end()) continue;
            xs.push_back(it->second);
            ys.push_back(static_cast<double>(s->eum.hm));
        }
        TestResult t = spearman_rho(xs, ys);
        ordered_json row;
        row["n"] = static_cast<int>(xs.size());
        row["spearman_rho"] = t.ok ? ordered_json(t.statistic) : ordered_json(nullptr);
        row["p_value"] = test_p_or_null(t);
        at[name] = std::move(row);
    }
    agg["attributes"] = std::move(at);

    return agg;
}

} // namespace

AnalysisReport run_analysis(const ExperimentDesign& design, const Dataset& data,
                            const RunConfig& config) {
    AttributeData attrs;
    if (!config.attributes_path.empty()) attrs = load_attributes(config.attributes_path);

    AnalysisReport report;
    report.config = config;
    report.design = &design;

    ScoringTable strict_table(design, HmMode::Strict, {});
    ScoringTable weak_table(design, HmMode::Weak, {});
    const auto nested = design.nested_menu_pairs();
    const auto fosd_menus = design.effective_fosd_menus(config.taxonomy);
    const auto star_pairs = design.effective_star_pairs(config.taxonomy);

    report.subjects.reserve(data.subjects.size());
    for (const auto& subject : data.subjects) {
        report.subjects.push_back(analyze_subject(design, subject, config, strict_table,
                                                  weak_table, nested, fosd_menus,
                                                  star_pairs));
        if (report.subjects.back().included)
            ++report.included_count;
        else
            ++report.excluded_count;
    }

    report.aggregate = build_aggregate(design, config, report.subjects, data, attrs);
    verify_report_consistency(report);
    return report;
}

nlohmann::ordered_json report_to_json(const AnalysisReport& report) {
    verify_report_consistency(report);
    const ExperimentDesign& design = *report.design;

    ordered_json doc;
    doc["format"] = "revpref-report";
    doc["version"] = 1;

    ordered_json cfg;
    cfg["choices_path"] = report.config.choices_path;
    cfg["attributes_path"] = report.config.attributes_path;
    cfg["policy"] = policy_name(report.config.policy);
    cfg["fosd_mode"] = fosd_mode_name(report.config.fosd_mode);
    cfg["taxonomy"] = taxonomy_name(report.config.taxonomy);
    cfg["merge_threshold"] = report.config.merge_threshold;
    cfg["renormalize_stochastic"] = report.config.renormalize_stochastic;
    cfg["approx_um_threshold"] = report.config.approx_um_threshold;
    cfg["eu_epsilon"] = rat_to_string(report.config.eu_epsilon);
    cfg["rounds_expected"] = design.rounds_expected;
    doc["config"] = std::move(cfg);

    ordered_json des;
    ordered_json lots = ordered_json::array();
    for (const auto& lot : design.lotteries) lots.push_back(lot.id);
    des["lotteries"] = std::move(lots);
    ordered_json menus = ordered_json::array();
    for (const auto& menu : design.menus) {
        ordered_json m;
        m["id"] = menu.id;
        ordered_json members = ordered_json::array();
        for (int li : menu.members) members.push_back(design.lotteries[li].id);
        m["members"] = std::move(members);
        menus.push_back(std::move(m));
    }
    des["menus"] = std::move(menus);
    ordered_json tax = ordered_json::array();
    for (const auto& entry : taxonomy_comparison(design)) {
        ordered_json row;
        row["menu"] = entry.menu;
        row["declared"] = label_json(entry.declared);
        row["computed"] = label_json(entry.computed);
        row["agree"] = entry.agree;
        tax.push_back(std::move(row));
    }
    des["taxonomy"] = std::move(tax);
    doc["design"] = std::move(des);

    ordered_json subjects = ordered_json::array();
    for (const auto& s : report.subjects) {
        ordered_json sj;
        sj["subject_id"] = s.subject_id;
        sj["complete"] = s.complete;
        sj["included"] = s.included;
        sj["issues"] = s.issues;
        if (!s.included) {
            subjects.push_back(std::move(sj));
            continue;
        }
        sj["deferral_total"] = s.deferral_total;
        sj["reveals_indifference"] = s.reveals_indifference;

        ordered_json merged;
        ordered_json choices = ordered_json::object();
        for (std::size_t m = 0; m < design.menus.size(); ++m) {
            ordered_json chosen = ordered_json::array();
            for (int li : design.menus[m].members)
                if (s.merged.values[m] & (1u << li)) chosen.push_back(design.lotteries[li].id);
            choices[design.menus[m].id] = std::move(chosen);
        }
        merged["choices"] = std::move(choices);
        merged["hm_score"] = s.eum.hm;
        merged["is_um"] = s.eum.is_um;
        merged["is_approx_um"] = s.eum.is_approx_um;
        merged["is_eum_binary"] = s.eum.is_eum_binary;
        merged["is_eum_all"] = s.eum.is_eum_all;
        merged["fosd_gate_ok"] = s.eum.fosd_ok;
        merged["independence_gate_ok"] = s.eum.independence_ok;
        merged["star_gate_ok"] = s.eum.star_ok;
        merged["risk_attitude"] = risk_attitude_name(s.eum.attitude);
        ordered_json mistakes = ordered_json::array();
        for (int m : s.mistake_menus) mistakes.push_back(design.menus[m].id);
        merged["mistake_menus"] = std::move(mistakes);
        merged["eu_rationalizable"] = s.eu.feasible;
        if (s.eu.feasible) {
            ordered_json util = ordered_json::array();
            for (const auto& [prize, value] : s.eu.utility)
                util.push_back(
                    ordered_json::array({rat_to_string(prize), rat_to_string(value)}));
            merged["eu_utility"] = std::move(util);
        } else {
            merged["eu_utility"] = nullptr;
        }
        ordered_json vc;
        for (int a = 0; a < 7; ++a) vc[kAxiomKeys[a]] = s.violation_counts[a];
        merged["violation_counts"] = std::move(vc);
        ordered_json violations = ordered_json::array();
        for (const auto& v : s.violations) {
            ordered_json row;
            row["axiom"] = axiom_name(v.axiom);
            row["menus"] = v.menus;
            row["lotteries"] = v.lotteries;
            row["detail"] = v.detail;
            row["strict_subkind"] = v.strict_subkind;
            row["fixture_index"] = v.fixture_index;
            violations.push_back(std::move(row));
        }
        merged["violations"] = std::move(violations);
        sj["merged"] = std::move(merged);

        ordered_json st;
        st["regularity_ok"] = s.regularity_ok;
        st["wst_ok"] = s.wst_ok;
        st["mst_ok"] = s.mst_ok;
        st["sst_ok"] = s.sst_ok;
        st["decisiveness_ok"] = s.stochastic_decisiveness_ok;
        ordered_json st_violations = ordered_json::array();
        for (const auto& v : s.stochastic_violations) {
            ordered_json row;
            row["axiom"] = stoch_axiom_name(v.axiom);
            row["menus"] = v.menus;
            row["lotteries"] = v.lotteries;
            ordered_json values = ordered_json::array();
            for (const auto& val : v.values) values.push_back(rat_to_string(val));
            row["values"] = std::move(values);
            row["detail"] = v.detail;
            st_violations.push_back(std::move(row));
        }
        st["violations"] = std::move(st_violations);
        sj["stochastic"] = std::move(st);

        ordered_json rounds = ordered_json::array();
        for (const auto& r : s.rounds) {
            ordered_json row;
            row["round"] = r.round_index;
            row["hm"] = r.hm_strict;
            row["hm_active"] = r.hm_active;
            row["consistent"] = r.consistent;
            row["deferrals"] = r.deferrals;
            row["mean_response_time_ms"] = json_or_null(r.mean_response_time_ms);
            row["violated_triples"] = r.violated_triples;
            rounds.push_back(std::move(row));
        }
        sj["rounds"] = std::move(rounds);
        subjects.push_back(std::move(sj));
    }
    doc["subjects"] = std::move(subjects);
    doc["aggregate"] = report.aggregate;
    return doc;
}

namespace {

std::string sanitize_cell(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

std::string join_sanitized(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ';';
        out += sanitize_cell(parts[i]);
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

std::string report_to_csv(const AnalysisReport& report) {
    verify_report_consistency(report);
    const ExperimentDesign& design = *report.design;
    const int R = design.rounds_expected;

    std::ostringstream out;
    out << "subject_id,included,complete,issues,deferral_total,reveals_indifference,"
           "mean_response_time_ms,hm_score,is_um,is_approx_um,is_eum_binary,is_eum_all,"
           "fosd_gate_ok,independence_gate_ok,star_gate_ok,risk_attitude,"
           "eu_rationalizable,mistake_menus,decisiveness_violations,"
           "transitivity_violations,contraction_violations,warp_violations,"
           "fosd_violations,independence_violations,star_violations,violations_total,"
           "regularity_ok,wst_ok,mst_ok,sst_ok,stochastic_decisiveness_ok,"
           "stochastic_violations";
    for (int r = 1; r <= R; ++r)
        out << ",round" << r << "_hm,round" << r << "_consistent,round" << r
            << "_deferrals";
    out << "\n";

    for (const auto& s : report.subjects) {
        out << sanitize_cell(s.subject_id) << ',' << (s.included ? 1 : 0) << ','
            << (s.complete ? 1 : 0) << ',' << join_sanitized(s.issues) << ',';
        if (!s.included) {
            // Keep the column count: 28 analysis cells plus 3 per round, all
            // blank for excluded rows.
            for (int i = 0; i < 27 + 3 * R; ++i) out << ',';
            out << "\n";
            continue;
        }
        out << s.deferral_total << ',' << (s.reveals_indifference ? 1 : 0) << ',';
        std::vector<double> rts;
        for (const auto& r : s.rounds)
            if (r.mean_response_time_ms) rts.push_back(*r.mean_response_time_ms);
        if (!rts.empty()) out << format_double(mean_of(rts));
        out << ',' << s.eum.hm << ',' << (s.eum.is_um ? 1 : 0) << ','
            << (s.eum.is_approx_um ? 1 : 0) << ',' << (s.eum.is_eum_binary ? 1 : 0) << ','
            << (s.eum.is_eum_all ? 1 : 0) << ',' << (s.eum.fosd_ok ? 1 : 0) << ','
            << (s.eum.independence_ok ? 1 : 0) << ',' << (s.eum.star_ok ? 1 : 0) << ','
            << risk_attitude_name(s.eum.attitude) << ',' << (s.eu.feasible ? 1 : 0) << ',';
        std::vector<std::string> mistake_ids;
        for (int m : s.mistake_menus) mistake_ids.push_back(design.menus[m].id);
        out << join_sanitized(mistake_ids);
        int total = 0;
        for (int a = 0; a < 7; ++a) {
            out << ',' << s.violation_counts[a];
            total += s.violation_counts[a];
        }
        out << ',' << total << ',' << (s.regularity_ok ? 1 : 0) << ','
            << (s.wst_ok ? 1 : 0) << ',' << (s.mst_ok ? 1 : 0) << ','
            << (s.sst_ok ? 1 : 0) << ',' << (s.stochastic_decisiveness_ok ? 1 : 0) << ','
            << s.stochastic_violations.size();
        for (const auto& r : s.rounds)
            out << ',' << r.hm_strict << ',' << (r.consistent ? 1 : 0) << ','
                << r.deferrals;
        out << "\n";
    }
    return out.str();
}

namespace {

// Aggregate lookups during verification: a missing key is itself an
// inconsistency, not a JSON exception.
const ordered_json& checked_at(const ordered_json& obj, const char* key) {
    internal_check(obj.is_object() && obj.contains(key),
                   std::string("aggregate is missing '") + key + "'");
    return obj.at(key);
}

void check_count_share(const ordered_json& node, const char* key, int count, int denom) {
    const auto& entry = checked_at(node, key);
    internal_check(checked_at(entry, "count") == count,
                   std::string("aggregate count for '") + key + "' disagrees with a recount");
    const auto& share = checked_at(entry, "share");
    if (denom > 0)
        internal_check(share == rat_to_string(Rat(count, denom)),
                       std::string("aggregate share for '") + key + "' disagrees with a recount");
    else
        internal_check(share.is_null(),
                       std::string("aggregate share for '") + key + "' should be null");
}

} // namespace

void verify_report_consistency(const AnalysisReport& report) {
    internal_check(report.design != nullptr, "report carries no design");
    const ExperimentDesign& design = *report.design;
    const int R = design.rounds_expected;

    int inc = 0, exc = 0;
    for (const auto& s : report.subjects) (s.included ? inc : exc) += 1;
    internal_check(report.included_count == inc,
                   "included_count disagrees with the subject rows");
    internal_check(report.excluded_count == exc,
                   "excluded_count disagrees with the subject rows");

    for (const auto& s : report.subjects) {
        const std::string& id = s.subject_id;
        if (!s.included) {
            internal_check(!s.complete, id + ": excluded subjects must be incomplete");
            internal_check(s.rounds.empty(), id + ": excluded subject carries round rows");
            continue;
        }
        internal_check(static_cast<int>(s.rounds.size()) == R,
                       id + ": wrong number of round rows");
        internal_check(s.eum.is_um == (s.eum.hm == 0),
                       id + ": is_um must mirror a zero merged score");
        internal_check(s.eum.is_approx_um ==
                           (s.eum.hm <= report.config.approx_um_threshold),
                       id + ": is_approx_um disagrees with the threshold");
        internal_check(s.eum.is_eum_binary ==
                           (s.eum.fosd_ok && s.eum.independence_ok && s.eum.star_ok),
                       id + ": is_eum_binary must mirror the three gates");
        internal_check(s.eum.is_eum_all == (s.eum.is_um && s.eum.is_eum_binary),
                       id + ": is_eum_all must mirror is_um plus the gates");
        internal_check(s.eum.is_um == (s.mistake_menus.empty()),
                       id + ": mistake menus disagree with the merged score");
        internal_check(!s.sst_ok || s.mst_ok,
                       id + ": strong stochastic transitivity without moderate");
        internal_check(!s.mst_ok || s.wst_ok,
                       id + ": moderate stochastic transitivity without weak");

        std::array<int, 7> counted{};
        for (const auto& v : s.violations) ++counted[static_cast<int>(v.axiom)];
        internal_check(counted == s.violation_counts,
                       id + ": violation tallies disagree with the violation list");

        int deferrals = 0;
        for (const auto& r : s.rounds) {
            internal_check(r.consistent == (r.hm_strict == 0),
                           id + ": round consistency must mirror a zero score");
            internal_check(!r.eum_consistent || r.consistent,
                           id + ": round expected-utility consistency without consistency");
            deferrals += r.deferrals;
        }
        internal_check(deferrals == s.deferral_total,
                       id + ": round deferrals disagree with the subject total");
    }

    const ordered_json& agg = report.aggregate;
    internal_check(agg.is_object(), "aggregate tables missing");
    internal_check(checked_at(agg, "included") == inc,
                   "aggregate included count disagrees with a recount");
    internal_check(checked_at(agg, "excluded") == exc,
                   "aggregate excluded count disagrees with a recount");
    internal_check(static_cast<int>(checked_at(agg, "excluded_subjects").size()) == exc,
                   "aggregate excluded_subjects length disagrees");

    std::vector<const SubjectAnalysis*> included;
    for (const auto& s : report.subjects)
        if (s.included) included.push_back(&s);
    auto count_if = [&included](auto pred) {
        int c = 0;
        for (const auto* s : included)
            if (pred(*s)) ++c;
        return c;
    };

    const auto& mr = checked_at(agg, "merged_rationality");
    check_count_share(mr, "um",
                      count_if([](const SubjectAnalysis& s) { return s.eum.is_um; }), inc);
    check_count_share(
        mr, "approx_um",
        count_if([](const SubjectAnalysis& s) { return s.eum.is_approx_um; }), inc);
    check_count_share(
        mr, "eum_binary",
        count_if([](const SubjectAnalysis& s) { return s.eum.is_eum_binary; }), inc);
    check_count_share(mr, "eum_all",
                      count_if([](const SubjectAnalysis& s) { return s.eum.is_eum_all; }),
                      inc);
    check_count_share(mr, "eu_rationalizable",
                      count_if([](const SubjectAnalysis& s) { return s.eu.feasible; }),
                      inc);
    check_count_share(
        mr, "reveals_indifference",
        count_if([](const SubjectAnalysis& s) { return s.reveals_indifference; }), inc);

    const auto& ra = checked_at(agg, "risk_attitudes");
    auto attitude_count = [&count_if](RiskAttitude a) {
        return count_if([a](const SubjectAnalysis& s) { return s.eum.attitude == a; });
    };
    internal_check(checked_at(ra, "averse") == attitude_count(RiskAttitude::RiskAverse) &&
                       checked_at(ra, "seeking") == attitude_count(RiskAttitude::RiskSeeking) &&
                       checked_at(ra, "neutral") == attitude_count(RiskAttitude::RiskNeutral) &&
                       checked_at(ra, "unclassified") ==
                           attitude_count(RiskAttitude::Unclassified),
                   "risk attitude tallies disagree with a recount");

    const auto& det = checked_at(checked_at(agg, "axiom_compliance"), "deterministic");
    for (int a = 0; a < 7; ++a) {
        int satisfied =
            count_if([a](const SubjectAnalysis& s) { return s.violation_counts[a] == 0; });
        internal_check(checked_at(checked_at(det, kAxiomKeys[a]), "satisfied") == satisfied,
                       std::string("axiom compliance for '") + kAxiomKeys[a] +
                           "' disagrees with a recount");
    }

    const auto& pr = checked_at(agg, "per_round");
    std::vector<int> um_counts(R, 0), deferral_counts(R, 0);
    for (const auto* s : included)
        for (int r = 0; r < R; ++r) {
            if (s->rounds[r].consistent) ++um_counts[r];
            deferral_counts[r] += s->rounds[r].deferrals;
        }
    internal_check(checked_at(pr, "um_counts") == ordered_json(um_counts),
                   "per-round consistency counts disagree with a recount");
    internal_check(checked_at(pr, "deferral_counts") == ordered_json(deferral_counts),
                   "per-round deferral counts disagree with a recount");

    int deferral_sum = 0;
    for (const auto* s : included) deferral_sum += s->deferral_total;
    int menu_deferral_sum = 0;
    for (const auto& row : checked_at(agg, "menu_deferrals"))
        menu_deferral_sum += checked_at(row, "deferrals").get<int>();
    internal_check(menu_deferral_sum == deferral_sum,
                   "menu deferral tallies disagree with the subject totals");

    std::map<int, int> triple_rounds;
    for (const auto* s : included)
        for (const auto& r : s->rounds)
            for (int t : r.violated_triples) ++triple_rounds[t];
    const auto& triples = checked_at(agg, "triple_violations");
    internal_check(triples.size() == design.triples.size(),
                   "triple table length disagrees with the design");
    int prev = -1;
    for (const auto& row : triples) {
        const int t = checked_at(row, "triple").get<int>();
        const int count = checked_at(row, "subject_rounds").get<int>();
        auto it = triple_rounds.find(t);
        internal_check(count == (it == triple_rounds.end() ? 0 : it->second),
                       "triple subject-round tally disagrees with a recount");
        internal_check(count >= prev, "triple table is not sorted by ascending count");
        prev = count;
    }

    const auto& stability = checked_at(agg, "stability");
    auto check_stability = [&](const char* key, auto flag_of) {
        const auto& row = checked_at(stability, key);
        std::vector<int> per_round(R, 0), retained(std::max(R - 1, 0), 0);
        int improved = 0, not_first = 0;
        for (const auto* s : included) {
            for (int r = 0; r < R; ++r)
                if (flag_of(s->rounds[r])) ++per_round[r];
            for (int r = 0; r + 1 < R; ++r)
                if (flag_of(s->rounds[r]) && flag_of(s->rounds[r + 1])) ++retained[r];
            if (!flag_of(s->rounds[0])) {
                ++not_first;
                if (flag_of(s->rounds[R - 1])) ++improved;
            }
        }
        internal_check(checked_at(row, "per_round_counts") == ordered_json(per_round),
                       std::string("stability per-round counts for '") + key +
                           "' disagree with a recount");
        internal_check(checked_at(row, "retained") == ordered_json(retained),
                       std::string("stability retention counts for '") + key +
                           "' disagree with a recount");
        internal_check(checked_at(row, "improved") == improved &&
                           checked_at(row, "not_rational_first") == not_first,
                       std::string("stability improvement counts for '") + key +
                           "' disagree with a recount");
    };
    check_stability("um", [](const RoundAnalysis& r) { return r.consistent; });
    check_stability("eum", [](const RoundAnalysis& r) { return r.eum_consistent; });
}

} // namespace revpref
