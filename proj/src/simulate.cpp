#include "revpref/simulate.hpp"

#include "revpref/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace revpref {

namespace {

// Per-agent seed: FNV-1a over the subject id, folded with the master seed
// through splitmix64. Hashing the id instead of the enumeration position
// keeps each agent's stream independent of the rest of the population, which
// is what makes population prefixes stable.
std::uint64_t agent_seed(const std::string& id, std::uint64_t master_seed) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t m = master_seed;
    std::uint64_t state = h ^ splitmix64(m);
    return splitmix64(state);
}

std::string subject_id(const std::string& label, int ordinal) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%05d", ordinal);
    return label + "-" + buf;
}

void validate_specs(const std::vector<std::pair<AgentSpec, int>>& specs, int rounds) {
    if (specs.empty()) {
        throw ValidationError("simulation needs at least one agent group");
    }
    if (rounds < 1) {
        throw ValidationError("simulation rounds must be positive");
    }
    for (const auto& [spec, count] : specs) {
        if (count < 1) {
            throw ValidationError("agent count for label '" + spec.label +
                                  "' must be positive");
        }
        if (spec.kind == AgentSpec::Kind::ExpectedUtility) {
            if (spec.utility.points.empty()) {
                throw ValidationError("expected-utility agent '" + spec.label +
                                      "' has an empty utility function");
            }
            if (spec.noise_scale < 0.0) {
                throw ValidationError("noise scale for agent '" + spec.label +
                                      "' must be nonnegative");
            }
        }
    }
}

// One trial of one agent at one menu. nullopt is a deferral.
std::optional<int> draw_choice(const ExperimentDesign& design, const Menu& menu,
                               const AgentSpec& spec, Rng& rng) {
    if (spec.kind == AgentSpec::Kind::UniformRandom) {
        const auto k = static_cast<std::uint32_t>(menu.members.size());
        const std::uint32_t options = k + (spec.include_deferral ? 1u : 0u);
        const std::uint32_t d = rng.uniform_int(options);
        if (d >= k) return std::nullopt;
        return menu.members[d];
    }
    if (spec.noise_scale == 0.0) {
        // Exact argmax; ties break toward the lowest lottery index because the
        // scan only moves on a strictly larger value.
        int arg = menu.members[0];
        Rat best = spec.utility.eu(design.lottery(arg));
        for (int e : menu.members) {
            Rat v = spec.utility.eu(design.lottery(e));
            if (v > best) {
                best = v;
                arg = e;
            }
        }
        return arg;
    }
    // Logit choice: Gumbel noise on each expected utility.
    int arg = menu.members[0];
    double best = 0.0;
    bool first = true;
    for (int e : menu.members) {
        double v = rat_to_double(spec.utility.eu(design.lottery(e))) +
                   rng.gumbel(spec.noise_scale);
        if (first || v > best) {
            best = v;
            arg = e;
            first = false;
        }
    }
    return arg;
}

} // namespace

Rat UtilityFunction::value_at(const Rat& prize) const {
    for (const auto& [p, u] : points) {
        if (p == prize) return u;
    }
    throw ValidationError("utility function has no value for prize " +
                          rat_to_string(prize));
}

Rat UtilityFunction::eu(const Lottery& p) const {
    Rat total = 0;
    for (const auto& [prize, mass] : p.support) {
        total += mass * value_at(prize);
    }
    return total;
}

UtilityFunction linear_utility(const std::vector<Rat>& prizes) {
    if (prizes.size() < 2) {
        throw ValidationError("a utility function needs at least two prizes");
    }
    UtilityFunction u;
    const Rat lo = prizes.front();
    const Rat span = prizes.back() - lo;
    for (const Rat& p : prizes) {
        u.points.emplace_back(p, (p - lo) / span);
    }
    return u;
}

namespace {

// Piecewise-linear utility from integer slope draws. `decreasing` selects
// strictly decreasing slopes (concave); otherwise strictly increasing
// (convex). Values are accumulated exactly and normalized to span [0, 1].
UtilityFunction shaped_utility(const std::vector<Rat>& prizes, Rng& rng,
                               bool decreasing) {
    if (prizes.size() < 2) {
        throw ValidationError("a utility function needs at least two prizes");
    }
    const std::size_t gaps = prizes.size() - 1;
    std::vector<BigInt> slopes(gaps);
    BigInt s = 1 + rng.uniform_int(8);
    for (std::size_t g = 0; g < gaps; ++g) {
        slopes[g] = s;
        s += 1 + rng.uniform_int(8);
    }
    if (decreasing) std::reverse(slopes.begin(), slopes.end());

    UtilityFunction u;
    u.points.emplace_back(prizes[0], Rat(0));
    Rat acc = 0;
    for (std::size_t g = 0; g < gaps; ++g) {
        acc += Rat(slopes[g]) * (prizes[g + 1] - prizes[g]);
        u.points.emplace_back(prizes[g + 1], acc);
    }
    for (auto& [p, v] : u.points) v /= acc;
    return u;
}

} // namespace

UtilityFunction random_concave_utility(const std::vector<Rat>& prizes, Rng& rng) {
    return shaped_utility(prizes, rng, /*decreasing=*/true);
}

UtilityFunction random_convex_utility(const std::vector<Rat>& prizes, Rng& rng) {
    return shaped_utility(prizes, rng, /*decreasing=*/false);
}

std::vector<ChoiceRecord> simulate_dataset(
    const ExperimentDesign& design,
    const std::vector<std::pair<AgentSpec, int>>& specs, const SimConfig& config) {
    validate_specs(specs, config.rounds);

    std::vector<ChoiceRecord> records;
    std::map<std::string, int> ordinals;
    for (const auto& [spec, count] : specs) {
        for (int c = 0; c < count; ++c) {
            const std::string id = subject_id(spec.label, ++ordinals[spec.label]);
            Rng rng(agent_seed(id, config.master_seed));
            long trial = 0;
            for (int round = 0; round < config.rounds; ++round) {
                for (std::size_t m = 0; m < design.menus.size(); ++m) {
                    ChoiceRecord rec;
                    rec.subject_id = id;
                    rec.trial_index = ++trial;
                    rec.menu = static_cast<int>(m);
                    rec.chosen = draw_choice(design, design.menus[m], spec, rng);
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    std::sort(records.begin(), records.end(),
              [](const ChoiceRecord& a, const ChoiceRecord& b) {
                  if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
                  return a.trial_index < b.trial_index;
              });
    return records;
}

CalibrationResult calibrate_hm_percentile(const ExperimentDesign& design,
                                          const CalibrationConfig& config) {
    if (config.n_agents < 1) {
        throw ValidationError("calibration needs at least one agent");
    }
    if (config.rounds < 1) {
        throw ValidationError("calibration rounds must be positive");
    }
    if (config.percentile < 0.0 || config.percentile > 1.0) {
        throw ValidationError("calibration percentile must lie in [0, 1]");
    }

    ScoringTable table(design, config.mode, {});
    const auto n_menus = design.menus.size();
    std::vector<int> scores;
    scores.reserve(static_cast<std::size_t>(config.n_agents) * config.rounds);

    ChoiceCorrespondence corr;
    corr.values.resize(n_menus);
    for (int a = 0; a < config.n_agents; ++a) {
        const std::string id = subject_id("cal", a + 1);
        Rng rng(agent_seed(id, config.master_seed));
        for (int round = 0; round < config.rounds; ++round) {
            for (std::size_t m = 0; m < n_menus; ++m) {
                const Menu& menu = design.menus[m];
                const auto k = static_cast<std::uint32_t>(menu.members.size());
                const std::uint32_t options = k + (config.include_deferral ? 1u : 0u);
                const std::uint32_t d = rng.uniform_int(options);
                corr.values[m] = d < k ? (1u << menu.members[d]) : 0u;
            }
            scores.push_back(hm_score_only(design, corr, config.policy, table));
        }
    }

    CalibrationResult out;
    out.n_agents = config.n_agents;
    out.percentile = config.percentile;
    const int max_score = *std::max_element(scores.begin(), scores.end());
    out.histogram.assign(static_cast<std::size_t>(max_score) + 1, 0);
    for (int s : scores) ++out.histogram[s];

    const auto total = static_cast<double>(scores.size());
    const int needed = static_cast<int>(std::ceil(config.percentile * total));
    int cumulative = 0;
    out.percentile_score = max_score;
    for (int s = 0; s <= max_score; ++s) {
        cumulative += out.histogram[s];
        if (cumulative >= needed) {
            out.percentile_score = s;
            break;
        }
    }
    return out;
}

Prop1Report proposition1_suite(const ExperimentDesign& design, int n_per_side,
                               std::uint64_t seed) {
    if (n_per_side < 1) {
        throw ValidationError("the property suite needs at least one agent per side");
    }

    // Utilities are all drawn up front from one master stream so the suite is
    // a pure function of (design, n_per_side, seed).
    Rng master(seed);
    const std::vector<Rat> prizes = design.prize_set();
    std::vector<UtilityFunction> utilities;
    std::vector<bool> is_concave;
    for (int i = 0; i < n_per_side; ++i) {
        utilities.push_back(random_concave_utility(prizes, master));
        is_concave.push_back(true);
    }
    for (int i = 0; i < n_per_side; ++i) {
        utilities.push_back(random_convex_utility(prizes, master));
        is_concave.push_back(false);
    }

    ScoringTable strict_table(design, HmMode::Strict, {});
    ScoringTable weak_table(design, HmMode::Weak, {});

    Prop1Report report;
    report.n_concave = n_per_side;
    report.n_convex = n_per_side;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        AgentSpec spec;
        spec.kind = AgentSpec::Kind::ExpectedUtility;
        spec.utility = utilities[i];
        spec.label = is_concave[i] ? "conc" : "conv";

        SimConfig cfg;
        cfg.rounds = design.rounds_expected;
        cfg.master_seed = seed + i;
        Dataset ds = dataset_from_records(design, simulate_dataset(design, {{spec, 1}}, cfg));
        const SubjectData& subject = ds.subjects.front();
        const std::string who = spec.label + " agent " + std::to_string(i + 1);

        std::vector<std::string> problems;
        const auto slices = slice_rounds(design, subject);
        for (const auto& slice : slices) {
            ChoiceCorrespondence round = correspondence_of_round(design, slice);
            if (hm_score_only(design, round, HmPolicy::Penalize, strict_table) != 0) {
                problems.push_back("round " + std::to_string(slice.round_index) +
                                   " is not strict-order consistent");
            }
        }
        ChoiceCorrespondence merged = merge_correspondence(design, slices, Rat(1, 2));

        EumResult eum = classify_eum(design, merged, HmMode::Weak, HmPolicy::Penalize,
                                     TaxonomyMode::Declared, 1, &weak_table);
        if (!eum.is_um) problems.push_back("merged data is not weak-order consistent");
        if (!eum.fosd_ok) problems.push_back("dominance gate fails");
        if (!eum.independence_ok) problems.push_back("mixture gate fails");
        if (!eum.star_ok) problems.push_back("risk-stability gate fails");
        const RiskAttitude wanted =
            is_concave[i] ? RiskAttitude::RiskAverse : RiskAttitude::RiskSeeking;
        if (eum.attitude != wanted) {
            problems.push_back(std::string("attitude is ") +
                               risk_attitude_name(eum.attitude) + ", expected " +
                               risk_attitude_name(wanted));
        }
        if (!eu_rationalizable(design, merged, HmPolicy::Penalize).feasible) {
            problems.push_back("no expected-utility rationalization found");
        }

        if (!problems.empty()) {
            ++report.failures;
            for (const auto& p : problems) {
                report.failure_notes.push_back(who + ": " + p);
            }
        }
    }
    report.pass = report.failures == 0;
    return report;
}

} // namespace revpref
