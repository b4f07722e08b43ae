#include "revpref/rationalize.hpp"

#include "revpref/errors.hpp"
#include "revpref/lp.hpp"

#include <algorithm>

namespace revpref {

namespace {

std::vector<int> resolve_subset(const ExperimentDesign& design,
                                const std::vector<int>& menu_subset) {
    if (!menu_subset.empty()) return menu_subset;
    std::vector<int> all;
    for (std::size_t m = 0; m < design.menus.size(); ++m) all.push_back(static_cast<int>(m));
    return all;
}

} // namespace

ScoringTable::ScoringTable(const ExperimentDesign& design, HmMode mode,
                           std::vector<int> menu_subset)
    : mode_(mode), menu_subset_(resolve_subset(design, menu_subset)) {
    const int n = static_cast<int>(design.lotteries.size());
    auto record = [&](const std::vector<std::uint8_t>& order) {
        orders_.push_back(order);
        for (int m : menu_subset_) {
            const Menu& menu = design.menus[m];
            std::uint32_t best = 0;
            if (mode_ == HmMode::Strict) {
                // Permutations list elements best-first; the maximum is the
                // earliest listed member.
                for (std::uint8_t e : order) {
                    if (menu.mask & (1u << e)) {
                        best = 1u << e;
                        break;
                    }
                }
            } else {
                int top = -1;
                for (int e : menu.members) {
                    if (top < 0 || order[e] < order[top]) top = e;
                }
                for (int e : menu.members)
                    if (order[e] == order[top]) best |= 1u << e;
            }
            max_sets_.push_back(best);
        }
    };
    if (mode_ == HmMode::Strict)
        enumerate_linear_orders(n, record);
    else
        enumerate_weak_orders(n, record);
}

namespace {

// Mistake count of one order against the correspondence, restricted to the
// table's menus. `limit` allows an early abort once the count can no longer
// beat the incumbent.
int mistakes_of(const ChoiceCorrespondence& C, const ScoringTable& table, std::size_t order,
                HmPolicy policy, int limit) {
    int count = 0;
    const auto& menus = table.menus();
    for (std::size_t m = 0; m < menus.size(); ++m) {
        std::uint32_t value = C.values[menus[m]];
        if (value == 0) {
            if (policy == HmPolicy::Penalize) ++count;
        } else if (value != table.max_set(order, m)) {
            ++count;
        }
        if (count > limit) return count;
    }
    return count;
}

} // namespace

HmResult hm_score(const ExperimentDesign& design, const ChoiceCorrespondence& C, HmMode mode,
                  HmPolicy policy, const std::vector<int>& menu_subset,
                  const ScoringTable* table) {
    std::unique_ptr<ScoringTable> own;
    if (table == nullptr) {
        own = std::make_unique<ScoringTable>(design, mode, menu_subset);
        table = own.get();
    } else {
        internal_check(table->mode() == mode, "scoring table mode mismatch");
        internal_check(table->menus() == resolve_subset(design, menu_subset),
                       "scoring table menu subset mismatch");
    }

    HmResult res;
    res.mode = mode;
    res.policy = policy;
    res.orders_considered = table->order_count();
    for (int m : table->menus())
        if (policy == HmPolicy::Penalize || C.values[m] != 0) ++res.evaluated_menus;

    int best = static_cast<int>(table->menus().size()) + 1;
    std::size_t canonical = 0;
    for (std::size_t i = 0; i < table->order_count(); ++i) {
        int count = mistakes_of(C, *table, i, policy, best);
        if (count < best) {
            best = count;
            res.witnesses.clear();
            canonical = i;
        }
        if (count == best) res.witnesses.push_back(table->order(i));
    }
    res.score = best;
    res.witness_count = res.witnesses.size();

    // Mistake set under the canonical witness, the first minimizer found.
    const auto& menus = table->menus();
    for (std::size_t m = 0; m < menus.size(); ++m) {
        std::uint32_t value = C.values[menus[m]];
        if (value == 0) {
            if (policy == HmPolicy::Penalize) res.mistake_menus.push_back(menus[m]);
        } else if (value != table->max_set(canonical, m)) {
            res.mistake_menus.push_back(menus[m]);
        }
    }
    return res;
}

int hm_score_only(const ExperimentDesign& design, const ChoiceCorrespondence& C,
                  HmPolicy policy, const ScoringTable& table, int stop_at) {
    (void)design;
    int best = static_cast<int>(table.menus().size()) + 1;
    for (std::size_t i = 0; i < table.order_count(); ++i) {
        int count = mistakes_of(C, table, i, policy, best - 1);
        if (count < best) best = count;
        if (best <= stop_at) break;
    }
    return best;
}

EumResult classify_eum(const ExperimentDesign& design, const ChoiceCorrespondence& C,
                       HmMode mode, HmPolicy policy, TaxonomyMode taxonomy,
                       int approx_threshold, const ScoringTable* table) {
    EumResult res;
    HmResult hm = hm_score(design, C, mode, policy, {}, table);
    res.hm = hm.score;
    res.is_um = hm.score == 0;
    res.is_approx_um = hm.score <= approx_threshold;

    // The gates run on their fixture menus under the strict deferral policy;
    // the FOSD gate uses the strict-axiom form.
    res.fosd_ok = check_fosd_choice(design, C, design.effective_fosd_menus(taxonomy),
                                    FosdMode::StrictAxiom)
                      .empty();
    res.independence_ok =
        check_independence(design, C, design.independence_pairs, DeferralPolicy::Strict)
            .empty();
    StarOutcome star =
        check_star(design, C, design.effective_star_pairs(taxonomy), DeferralPolicy::Strict);
    res.star_ok = star.violations.empty();
    res.attitude = star.attitude;

    res.is_eum_binary = res.fosd_ok && res.independence_ok && res.star_ok;
    res.is_eum_all = res.is_um && res.is_eum_binary;
    return res;
}

namespace {

// Expected-utility coefficients of a lottery over the design's prize grid.
std::vector<Rat> eu_coefficients(const Lottery& lottery, const std::vector<Rat>& prizes) {
    std::vector<Rat> coeffs(prizes.size(), Rat(0));
    for (const auto& [prize, mass] : lottery.support) {
        for (std::size_t k = 0; k < prizes.size(); ++k) {
            if (prizes[k] == prize) {
                coeffs[k] += mass;
                break;
            }
        }
    }
    return coeffs;
}

std::vector<Rat> minus(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

} // namespace

EuRationalizeResult eu_rationalizable(const ExperimentDesign& design,
                                      const ChoiceCorrespondence& C, HmPolicy policy,
                                      const Rat& eps, bool find_conflict) {
    EuRationalizeResult res;
    const std::vector<Rat> prizes = design.prize_set();
    const int nvars = static_cast<int>(prizes.size());

    std::vector<LinearConstraint> rows;
    {
        LinearConstraint lo;
        lo.coeffs.assign(nvars, Rat(0));
        lo.coeffs[0] = Rat(1);
        lo.rhs = Rat(0);
        lo.equality = true;
        lo.tag = "normalization u(" + rat_to_string(prizes.front()) + ") = 0";
        rows.push_back(std::move(lo));
        LinearConstraint hi;
        hi.coeffs.assign(nvars, Rat(0));
        hi.coeffs[nvars - 1] = Rat(1);
        hi.rhs = Rat(1);
        hi.equality = true;
        hi.tag = "normalization u(" + rat_to_string(prizes.back()) + ") = 1";
        rows.push_back(std::move(hi));
    }
    for (int k = 1; k < nvars; ++k) {
        LinearConstraint row;
        row.coeffs.assign(nvars, Rat(0));
        row.coeffs[k] = Rat(1);
        row.coeffs[k - 1] = Rat(-1);
        row.rhs = eps;
        row.tag = "monotone u(" + rat_to_string(prizes[k]) + ") > u(" +
                  rat_to_string(prizes[k - 1]) + ")";
        rows.push_back(std::move(row));
    }

    for (std::size_t m = 0; m < design.menus.size(); ++m) {
        const Menu& menu = design.menus[m];
        std::uint32_t value = C.values[m];
        if (value == 0) {
            if (policy == HmPolicy::ActiveOnly) continue;
            // A maximizer never defers, so an all-deferred menu cannot be
            // rationalized at all.
            if (find_conflict)
                res.conflict.push_back("menu '" + menu.id + "' was deferred in every round");
            return res;
        }
        std::vector<int> chosen, rejected;
        for (int e : menu.members)
            (value & (1u << e)) ? chosen.push_back(e) : rejected.push_back(e);

        for (std::size_t i = 1; i < chosen.size(); ++i) {
            LinearConstraint row;
            row.coeffs = minus(eu_coefficients(design.lotteries[chosen[0]], prizes),
                               eu_coefficients(design.lotteries[chosen[i]], prizes));
            row.rhs = Rat(0);
            row.equality = true;
            row.tag = "menu '" + menu.id + "': tie '" + design.lotteries[chosen[0]].id +
                      "' = '" + design.lotteries[chosen[i]].id + "'";
            rows.push_back(std::move(row));
        }
        for (int r : rejected) {
            LinearConstraint row;
            row.coeffs = minus(eu_coefficients(design.lotteries[chosen[0]], prizes),
                               eu_coefficients(design.lotteries[r], prizes));
            row.rhs = eps;
            row.tag = "menu '" + menu.id + "': '" + design.lotteries[chosen[0]].id +
                      "' over '" + design.lotteries[r].id + "'";
            rows.push_back(std::move(row));
        }
    }

    LpFeasibility lp = lp_feasible(nvars, rows);
    if (lp.feasible) {
        res.feasible = true;
        for (int k = 0; k < nvars; ++k) res.utility.emplace_back(prizes[k], lp.point[k]);
        return res;
    }
    if (find_conflict)
        for (int idx : lp_infeasible_core(nvars, rows)) res.conflict.push_back(rows[idx].tag);
    return res;
}

} // namespace revpref
