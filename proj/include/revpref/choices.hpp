// Choice data: per-trial records, round slicing (the i-th appearance of each
// menu), merged choice correspondences, and empirical choice probabilities.
#pragma once

#include "revpref/design.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace revpref {

struct ChoiceRecord {
    std::string subject_id;
    long trial_index = 0; // 1-based presentation order, unique per subject
    int menu = -1;        // design menu index
    // Chosen lottery index, or nullopt for a deferral ("not choosing now").
    std::optional<int> chosen;
    std::optional<long> response_time_ms;
};

struct SubjectData {
    std::string id;
    std::vector<ChoiceRecord> records; // sorted by trial_index
    bool complete = true;              // every menu seen rounds_expected times
    std::vector<std::string> issues;   // human-readable irregularities
};

struct Dataset {
    const ExperimentDesign* design = nullptr;
    std::vector<SubjectData> subjects; // sorted by subject id
};

// Loads choices.csv (columns subject_id, trial_index, menu_id, outcome,
// response_time_ms; outcome is a lottery id or the literal "DEFER").
// Malformed rows and out-of-menu choices are hard errors; subjects whose
// menu-appearance counts differ from rounds_expected load flagged incomplete.
Dataset load_choices(const ExperimentDesign& design, const std::string& path);

// Same validation applied to records already in memory (simulation
// round-trips and tests).
Dataset dataset_from_records(const ExperimentDesign& design,
                             std::vector<ChoiceRecord> records);

struct RoundSlice {
    int round_index = 0; // 1-based
    // Per design menu index: the outcome of this menu's round-th appearance.
    std::vector<std::optional<int>> outcome;
    std::vector<std::optional<long>> response_time_ms;
};

// Splits a complete subject into rounds_expected slices, where round i takes
// the i-th appearance of each menu in trial order. Throws ValidationError on
// uneven appearance counts, naming the menu.
std::vector<RoundSlice> slice_rounds(const ExperimentDesign& design,
                                     const SubjectData& subject);

// A choice correspondence: one (possibly empty) subset of each menu. Values
// are bitmasks over lottery indices; 0 means every observation deferred.
// Round functions are the special case where each value has at most one bit.
struct ChoiceCorrespondence {
    std::string subject_id;
    std::vector<std::uint32_t> values; // per design menu index
};

// Merged correspondence across rounds. threshold is the minimum choice
// frequency (fraction of rounds) a lottery needs to enter the merged set; the
// default 0 yields the plain union of the rounds' choices.
ChoiceCorrespondence merge_correspondence(const ExperimentDesign& design,
                                          const std::vector<RoundSlice>& slices,
                                          const Rat& threshold = Rat(0));

// View of a single round as a singleton-or-empty correspondence, so the same
// axiom detectors serve per-round and merged analyses.
ChoiceCorrespondence correspondence_of_round(const ExperimentDesign& design,
                                             const RoundSlice& slice);

// Empirical choice frequencies across rounds, all exact rationals.
struct ChoiceProbabilities {
    std::string subject_id;
    int rounds = 0;
    // freq[menu][lottery] = fraction of rounds the lottery was chosen there.
    std::vector<std::map<int, Rat>> freq;
    // active[menu] = fraction of rounds with any active choice at the menu.
    std::vector<Rat> active;
};

ChoiceProbabilities estimate_probabilities(const ExperimentDesign& design,
                                           const std::vector<RoundSlice>& slices);

// Formats records back into the choices.csv wire format (round-trip
// guarantee for simulated datasets).
std::string records_to_csv(const ExperimentDesign& design,
                           const std::vector<ChoiceRecord>& records);

} // namespace revpref
