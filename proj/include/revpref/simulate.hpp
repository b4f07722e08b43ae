// Synthetic agents over an experiment design: uniform-random subjects (the
// calibration population) and expected-utility subjects with optional logit
// noise (the property-testing population). Output is the same record format
// the loaders ingest.
#pragma once

#include "revpref/choices.hpp"
#include "revpref/rationalize.hpp"
#include "revpref/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace revpref {

// Utility values on the design's prize set, exact and strictly increasing.
struct UtilityFunction {
    std::vector<std::pair<Rat, Rat>> points; // (prize, utility), ascending

    Rat value_at(const Rat& prize) const; // throws on unknown prize
    Rat eu(const Lottery& p) const;
};

// Strictly concave / convex / linear utilities over `prizes`, generated from
// integer slope draws so all values stay rational. Normalized to
// u(min) = 0, u(max) = 1.
UtilityFunction random_concave_utility(const std::vector<Rat>& prizes, Rng& rng);
UtilityFunction random_convex_utility(const std::vector<Rat>& prizes, Rng& rng);
UtilityFunction linear_utility(const std::vector<Rat>& prizes);

struct AgentSpec {
    enum class Kind { UniformRandom, ExpectedUtility };
    Kind kind = Kind::UniformRandom;
    // UniformRandom: whether the deferral option is in the draw. The
    // experiment's action set includes it, so the generic default is true;
    // the calibration entry point overrides this (see calibrate_hm_percentile).
    bool include_deferral = true;
    // ExpectedUtility only. noise_scale 0 is deterministic argmax with ties
    // broken toward the lowest lottery index; positive values add Gumbel
    // noise of that scale to each expected utility (logit choice). EU agents
    // never defer.
    UtilityFunction utility;
    double noise_scale = 0.0;
    std::string label; // embedded in generated subject ids
};

struct SimConfig {
    int rounds = 5;
    std::uint64_t master_seed = 1;
};

// One agent per (spec, count) unit. Subject ids are zero-padded and ordered;
// records come out sorted by (subject, trial). Per-agent seeds derive from
// the master seed, so any prefix of the population is stable.
std::vector<ChoiceRecord> simulate_dataset(
    const ExperimentDesign& design,
    const std::vector<std::pair<AgentSpec, int>>& specs, const SimConfig& config);

struct CalibrationConfig {
    int n_agents = 10000;
    int rounds = 1;
    // The replication setup: uniform agents without the deferral option,
    // scored Strict/Penalize. With deferral in the draw the percentile lands
    // well above the documented value (see README), so this default is the
    // configuration that reproduces it.
    bool include_deferral = false;
    HmMode mode = HmMode::Strict;
    HmPolicy policy = HmPolicy::Penalize;
    double percentile = 0.025;
    std::uint64_t master_seed = 1;
};

struct CalibrationResult {
    int n_agents = 0;
    double percentile = 0.0;
    int percentile_score = 0;        // empirical lower quantile of the scores
    std::vector<int> histogram;      // histogram[s] = number of agents with score s
};

// Simulates the population and reports the empirical percentile of per-agent
// HM scores. Each agent contributes one score per round; rounds = 1 scores a
// single pass over the menu collection, the replication setup. The quantile
// is the smallest score s with at least ceil(q * n) observations <= s;
// percentile 1.0 gives the maximum observed score.
CalibrationResult calibrate_hm_percentile(const ExperimentDesign& design,
                                          const CalibrationConfig& config);

struct Prop1Report {
    int n_concave = 0;
    int n_convex = 0;
    int failures = 0;
    bool pass = false;
    std::vector<std::string> failure_notes;
};

// Property suite: every noiseless expected-utility agent with a strictly
// concave (convex) utility must clear every gate: zero StAR, FOSD-choice and
// Independence violations, merged weak HM of 0, per-round strict HM of 0,
// LP-rationalizable, and classified RiskAverse (RiskSeeking).
Prop1Report proposition1_suite(const ExperimentDesign& design, int n_per_side,
                               std::uint64_t seed);

} // namespace revpref
