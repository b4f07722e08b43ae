#include "revpref/choices.hpp"

#include "revpref/csv.hpp"
#include "revpref/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace revpref {

namespace {

long parse_long_strict(const std::string& s, const std::string& context) {
    if (s.empty()) throw ValidationError(context + ": empty number");
    for (char c : s)
        if (c < '0' || c > '9')
            throw ValidationError(context + ": expected a number, got '" + s + "'");
    try {
        return std::stol(s);
    } catch (const std::exception&) {
        throw ValidationError(context + ": number out of range '" + s + "'");
    }
}

void check_record(const ExperimentDesign& design, const ChoiceRecord& rec) {
    if (rec.menu < 0 || rec.menu >= static_cast<int>(design.menus.size()))
        throw ValidationError("subject '" + rec.subject_id + "': record at trial " +
                              std::to_string(rec.trial_index) +
                              " references an unknown menu index");
    if (rec.chosen.has_value()) {
        int c = *rec.chosen;
        if (c < 0 || c >= static_cast<int>(design.lotteries.size()))
            throw ValidationError("subject '" + rec.subject_id + "': record at trial " +
                                  std::to_string(rec.trial_index) +
                                  " references an unknown lottery index");
        const Menu& m = design.menus[rec.menu];
        if ((m.mask & (1u << c)) == 0)
            throw ValidationError("subject '" + rec.subject_id + "': trial " +
                                  std::to_string(rec.trial_index) + " chose '" +
                                  design.lotteries[c].id + "' which is not in menu '" +
                                  m.id + "'");
    }
}

Dataset finalize_dataset(const ExperimentDesign& design,
                         std::map<std::string, std::vector<ChoiceRecord>>&& by_subject) {
    Dataset ds;
    ds.design = &design;
    for (auto& [id, records] : by_subject) {
        SubjectData subject;
        subject.id = id;
        std::sort(records.begin(), records.end(),
                  [](const ChoiceRecord& a, const ChoiceRecord& b) {
                      return a.trial_index < b.trial_index;
                  });
        std::set<long> trials;
        std::vector<int> appearances(design.menus.size(), 0);
        for (const auto& rec : records) {
            check_record(design, rec);
            if (!trials.insert(rec.trial_index).second)
                throw ValidationError("subject '" + id + "': duplicate trial index " +
                                      std::to_string(rec.trial_index));
            ++appearances[rec.menu];
        }
        for (std::size_t m = 0; m < appearances.size(); ++m) {
            if (appearances[m] != design.rounds_expected) {
                subject.complete = false;
                subject.issues.push_back("menu '" + design.menus[m].id + "' seen " +
                                         std::to_string(appearances[m]) +
                                         " times, expected " +
                                         std::to_string(design.rounds_expected));
            }
        }
        subject.records = std::move(records);
        ds.subjects.push_back(std::move(subject));
    }
    if (ds.subjects.empty()) throw ValidationError("no choice records");
    return ds;
}

} // namespace

Dataset load_choices(const ExperimentDesign& design, const std::string& path) {
    CsvTable table = read_csv(path);
    int subj_col = table.column("subject_id");
    int trial_col = table.column("trial_index");
    int menu_col = table.column("menu_id");
    int outcome_col = table.column("outcome");
    int rt_col = table.column("response_time_ms");

    std::map<std::string, std::vector<ChoiceRecord>> by_subject;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        std::string where = path + ": line " + std::to_string(table.line_numbers[i]);
        ChoiceRecord rec;
        rec.subject_id = row[subj_col];
        if (rec.subject_id.empty()) throw ValidationError(where + ": empty subject id");
        rec.trial_index = parse_long_strict(row[trial_col], where + ": trial index");

        auto menu_it = design.menu_index.find(row[menu_col]);
        if (menu_it == design.menu_index.end())
            throw ValidationError(where + ": unknown menu '" + row[menu_col] + "'");
        rec.menu = menu_it->second;

        const std::string& outcome = row[outcome_col];
        if (outcome != "DEFER") {
            auto lot_it = design.lottery_index.find(outcome);
            if (lot_it == design.lottery_index.end())
                throw ValidationError(where + ": unknown outcome '" + outcome + "'");
            if ((design.menus[rec.menu].mask & (1u << lot_it->second)) == 0)
                throw ValidationError(where + ": lottery '" + outcome +
                                      "' is not a member of menu '" + row[menu_col] + "'");
            rec.chosen = lot_it->second;
        }
        if (!row[rt_col].empty())
            rec.response_time_ms = parse_long_strict(row[rt_col], where + ": response time");

        by_subject[rec.subject_id].push_back(std::move(rec));
    }
    return finalize_dataset(design, std::move(by_subject));
}

Dataset dataset_from_records(const ExperimentDesign& design,
                             std::vector<ChoiceRecord> records) {
    std::map<std::string, std::vector<ChoiceRecord>> by_subject;
    for (auto& rec : records) {
        if (rec.subject_id.empty()) throw ValidationError("record with empty subject id");
        by_subject[rec.subject_id].push_back(std::move(rec));
    }
    return finalize_dataset(design, std::move(by_subject));
}

std::vector<RoundSlice> slice_rounds(const ExperimentDesign& design,
                                     const SubjectData& subject) {
    std::vector<int> appearances(design.menus.size(), 0);
    for (const auto& rec : subject.records) ++appearances[rec.menu];
    int rounds = *std::max_element(appearances.begin(), appearances.end());
    for (std::size_t m = 0; m < appearances.size(); ++m) {
        if (appearances[m] != rounds)
            throw ValidationError("subject '" + subject.id + "': menu '" +
                                  design.menus[m].id + "' appears " +
                                  std::to_string(appearances[m]) + " times while others appear " +
                                  std::to_string(rounds) + " times");
    }

    std::vector<RoundSlice> slices(rounds);
    for (int r = 0; r < rounds; ++r) {
        slices[r].round_index = r + 1;
        slices[r].outcome.assign(design.menus.size(), std::nullopt);
        slices[r].response_time_ms.assign(design.menus.size(), std::nullopt);
    }
    // Records are sorted by trial index, so the i-th time a menu shows up in
    // the scan is its round-i appearance regardless of interleaving.
    std::vector<int> seen(design.menus.size(), 0);
    for (const auto& rec : subject.records) {
        int r = seen[rec.menu]++;
        slices[r].outcome[rec.menu] = rec.chosen;
        slices[r].response_time_ms[rec.menu] = rec.response_time_ms;
    }
    return slices;
}

ChoiceCorrespondence merge_correspondence(const ExperimentDesign& design,
                                          const std::vector<RoundSlice>& slices,
                                          const Rat& threshold) {
    ChoiceProbabilities probs = estimate_probabilities(design, slices);
    ChoiceCorrespondence merged;
    merged.subject_id = probs.subject_id;
    merged.values.assign(design.menus.size(), 0u);
    for (std::size_t m = 0; m < design.menus.size(); ++m) {
        for (const auto& [lottery, freq] : probs.freq[m]) {
            if (freq > Rat(0) && freq >= threshold) merged.values[m] |= (1u << lottery);
        }
    }
    return merged;
}

ChoiceCorrespondence correspondence_of_round(const ExperimentDesign& design,
                                             const RoundSlice& slice) {
    ChoiceCorrespondence c;
    c.values.assign(design.menus.size(), 0u);
    for (std::size_t m = 0; m < design.menus.size(); ++m) {
        if (slice.outcome[m].has_value()) c.values[m] = (1u << *slice.outcome[m]);
    }
    return c;
}

ChoiceProbabilities estimate_probabilities(const ExperimentDesign& design,
                                           const std::vector<RoundSlice>& slices) {
    if (slices.empty()) throw ValidationError("cannot estimate probabilities from zero rounds");
    ChoiceProbabilities probs;
    probs.rounds = static_cast<int>(slices.size());
    probs.freq.assign(design.menus.size(), {});
    probs.active.assign(design.menus.size(), Rat(0));
    for (std::size_t m = 0; m < design.menus.size(); ++m) {
        std::map<int, int> counts;
        int active = 0;
        for (const auto& slice : slices) {
            if (slice.outcome[m].has_value()) {
                ++counts[*slice.outcome[m]];
                ++active;
            }
        }
        for (const auto& [lottery, k] : counts)
            probs.freq[m][lottery] = Rat(k, probs.rounds);
        probs.active[m] = Rat(active, probs.rounds);
    }
    return probs;
}

std::string records_to_csv(const ExperimentDesign& design,
                           const std::vector<ChoiceRecord>& records) {
    std::ostringstream out;
    out << "subject_id,trial_index,menu_id,outcome,response_time_ms\n";
    for (const auto& rec : records) {
        out << rec.subject_id << ',' << rec.trial_index << ','
            << design.menus[rec.menu].id << ',';
        if (rec.chosen.has_value())
            out << design.lotteries[*rec.chosen].id;
        else
            out << "DEFER";
        out << ',';
        if (rec.response_time_ms.has_value()) out << *rec.response_time_ms;
        out << '\n';
    }
    return out.str();
}

} // namespace revpref
