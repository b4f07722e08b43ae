// Full analysis pipeline: per-subject axiom checks, rationality scores and
// classification, followed by the aggregate tables and the serialized report.
#pragma once

#include "revpref/axioms.hpp"
#include "revpref/choices.hpp"
#include "revpref/rationalize.hpp"
#include "revpref/stochastic.hpp"

#include <json.hpp>

namespace revpref {

enum class OutputFormat { Json, Csv };

// Everything that influences the numbers in a report. Echoed into the output
// so a report is reproducible from its own header.
struct RunConfig {
    DeferralPolicy policy = DeferralPolicy::Strict;
    FosdMode fosd_mode = FosdMode::DominatedChoice;
    TaxonomyMode taxonomy = TaxonomyMode::Declared;
    int merge_threshold = 0;          // see merge_correspondence
    bool renormalize_stochastic = false;
    int approx_um_threshold = 1;      // HM score treated as approximately consistent
    Rat eu_epsilon = Rat(1, 1000000);
    std::string choices_path;         // echo only
    std::string attributes_path;      // optional subject covariates (CSV)
};

inline HmPolicy hm_policy_of(DeferralPolicy p) {
    return p == DeferralPolicy::Strict ? HmPolicy::Penalize : HmPolicy::ActiveOnly;
}

// Per-round numbers for one subject.
struct RoundAnalysis {
    int round_index = 0;              // 1-based
    int hm_strict = 0;                // per-round strict score under the run policy
    int hm_active = 0;                // same score counting active menus only
    bool consistent = false;          // hm_strict == 0
    int deferrals = 0;
    // Round-level expected-utility consistency: hm_strict == 0 plus the three
    // fixture gates evaluated on this round's choices. Feeds the stability
    // table's expected-utility row.
    bool eum_consistent = false;
    std::optional<double> mean_response_time_ms;
    std::vector<int> violated_triples; // indices into design.triples, this round
};

struct SubjectAnalysis {
    std::string subject_id;
    bool complete = false;
    bool included = false;            // complete and parseable; aggregates use only these
    std::vector<std::string> issues;

    // Merged (weak) correspondence results.
    ChoiceCorrespondence merged;
    std::vector<AxiomViolation> violations;          // deterministic order
    std::array<int, 7> violation_counts{};           // indexed by Axiom
    StarOutcome star;
    EumResult eum;                                   // weak-mode HM inside
    // Design menu indices the canonical minimizing weak order discards.
    std::vector<int> mistake_menus;
    EuRationalizeResult eu;
    bool reveals_indifference = false;               // any multi-valued menu
    int deferral_total = 0;

    // Stochastic results on estimated choice probabilities.
    std::vector<StochasticViolation> stochastic_violations;
    bool regularity_ok = false;
    bool wst_ok = false, mst_ok = false, sst_ok = false;
    bool stochastic_decisiveness_ok = false;

    std::vector<RoundAnalysis> rounds;
};

struct AnalysisReport {
    RunConfig config;
    const ExperimentDesign* design = nullptr;
    std::vector<SubjectAnalysis> subjects;           // input order
    int included_count = 0;
    int excluded_count = 0;
    nlohmann::ordered_json aggregate;                // tables, built by run_analysis
};

// Runs the whole per-subject and aggregate pipeline.
AnalysisReport run_analysis(const ExperimentDesign& design, const Dataset& data,
                            const RunConfig& config);

// Serialization. JSON follows schemas/report.schema.json; CSV is one row per
// subject with the aggregate tables omitted.
nlohmann::ordered_json report_to_json(const AnalysisReport& report);
std::string report_to_csv(const AnalysisReport& report);

// Internal cross-checks on an assembled report: aggregate counts must equal
// recounts over the per-subject entries, and the per-subject logical
// implications (strong to weak stochastic transitivity, full expected-utility
// consistency to utility-maximization consistency) must hold. Throws
// InternalCheckError on failure.
void verify_report_consistency(const AnalysisReport& report);

} // namespace revpref
