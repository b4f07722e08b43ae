#include "revpref/axioms.hpp"

#include "revpref/errors.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace revpref {

const char* axiom_name(Axiom a) {
    switch (a) {
    case Axiom::Decisiveness: return "decisiveness";
    case Axiom::Transitivity: return "transitivity";
    case Axiom::Contraction: return "contraction";
    case Axiom::Warp: return "warp";
    case Axiom::FosdChoice: return "fosd";
    case Axiom::Independence: return "independence";
    case Axiom::Star: return "star";
    }
    return "?";
}

const char* risk_attitude_name(RiskAttitude a) {
    switch (a) {
    case RiskAttitude::RiskAverse: return "averse";
    case RiskAttitude::RiskSeeking: return "seeking";
    case RiskAttitude::RiskNeutral: return "neutral";
    case RiskAttitude::Unclassified: return "unclassified";
    }
    return "?";
}

std::vector<AxiomViolation> check_decisiveness(const ExperimentDesign& design,
                                               const ChoiceCorrespondence& C) {
    std::vector<AxiomViolation> out;
    for (std::size_t m = 0; m < design.menus.size(); ++m) {
        if (C.values[m] != 0) continue;
        AxiomViolation v;
        v.axiom = Axiom::Decisiveness;
        v.menus = {design.menus[m].id};
        v.detail = "every observation of menu '" + design.menus[m].id + "' was deferred";
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<AxiomViolation> check_transitivity(const ExperimentDesign& design,
                                               const ChoiceCorrespondence& C,
                                               const std::vector<TransitivityTriple>& triples) {
    std::vector<AxiomViolation> out;
    for (std::size_t t = 0; t < triples.size(); ++t) {
        const auto& triple = triples[t];
        // Menu lookup keyed by the unordered lottery pair it contains.
        std::map<std::set<std::string>, std::string> pair_menu;
        pair_menu[{triple.lotteries[0], triple.lotteries[1]}] = triple.menus[0];
        pair_menu[{triple.lotteries[1], triple.lotteries[2]}] = triple.menus[1];
        pair_menu[{triple.lotteries[0], triple.lotteries[2]}] = triple.menus[2];

        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end());
        do {
            const std::string& x = triple.lotteries[idx[0]];
            const std::string& y = triple.lotteries[idx[1]];
            const std::string& z = triple.lotteries[idx[2]];
            const std::string& m_xy = pair_menu.at({x, y});
            const std::string& m_yz = pair_menu.at({y, z});
            const std::string& m_xz = pair_menu.at({x, z});
            std::uint32_t c_xy = C.values[design.require_menu(m_xy)];
            std::uint32_t c_yz = C.values[design.require_menu(m_yz)];
            std::uint32_t c_xz = C.values[design.require_menu(m_xz)];
            bool antecedent = (c_xy & (1u << design.require_lottery(x))) &&
                              (c_yz & (1u << design.require_lottery(y)));
            if (!antecedent) continue;
            // An empty C({x,z}) fails the consequent just like choosing z.
            if (c_xz & (1u << design.require_lottery(x))) continue;
            AxiomViolation v;
            v.axiom = Axiom::Transitivity;
            v.lotteries = {x, y, z};
            v.menus = {m_xy, m_yz, m_xz};
            v.fixture_index = static_cast<int>(t);
            v.detail = "'" + x + "' revealed over '" + y + "' and '" + y + "' over '" + z +
                       "', yet '" + x + "' is not chosen from menu '" + m_xz + "'";
            out.push_back(std::move(v));
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
    return out;
}

std::vector<AxiomViolation>
check_contraction(const ExperimentDesign& design, const ChoiceCorrespondence& C,
                  const std::vector<std::pair<int, int>>& nested_pairs) {
    std::vector<AxiomViolation> out;
    for (std::size_t p = 0; p < nested_pairs.size(); ++p) {
        int inner = nested_pairs[p].first;
        int outer = nested_pairs[p].second;
        std::uint32_t hits = C.values[outer] & design.menus[inner].mask;
        if (hits == 0) continue; // nothing chosen at the outer menu survives
        std::uint32_t missing = hits & ~C.values[inner];
        for (int e = 0; e < static_cast<int>(design.lotteries.size()); ++e) {
            if ((missing & (1u << e)) == 0) continue;
            AxiomViolation v;
            v.axiom = Axiom::Contraction;
            v.menus = {design.menus[inner].id, design.menus[outer].id};
            v.lotteries = {design.lotteries[e].id};
            v.fixture_index = static_cast<int>(p);
            v.detail = "'" + design.lotteries[e].id + "' chosen from menu '" +
                       design.menus[outer].id + "' but not from its submenu '" +
                       design.menus[inner].id + "'";
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<AxiomViolation> check_warp(const ExperimentDesign& design,
                                       const ChoiceCorrespondence& C) {
    std::vector<AxiomViolation> out;
    int n = static_cast<int>(design.menus.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            // Reversal: p strictly revealed over q at menu a (p chosen, q
            // available but rejected) while q is strictly revealed over p at
            // menu b. Empty values reveal nothing.
            std::uint32_t ca = C.values[a], cb = C.values[b];
            if (ca == 0 || cb == 0) continue;
            std::uint32_t rejected_a = design.menus[a].mask & ~ca;
            std::uint32_t rejected_b = design.menus[b].mask & ~cb;
            std::uint32_t ps = ca & rejected_b;  // chosen at a, rejected at b
            std::uint32_t qs = cb & rejected_a;  // chosen at b, rejected at a
            if (ps == 0 || qs == 0) continue;
            for (int p = 0; p < static_cast<int>(design.lotteries.size()); ++p) {
                if ((ps & (1u << p)) == 0) continue;
                for (int q = 0; q < static_cast<int>(design.lotteries.size()); ++q) {
                    if ((qs & (1u << q)) == 0) continue;
                    AxiomViolation v;
                    v.axiom = Axiom::Warp;
                    v.menus = {design.menus[a].id, design.menus[b].id};
                    v.lotteries = {design.lotteries[p].id, design.lotteries[q].id};
                    v.detail = "'" + design.lotteries[p].id + "' revealed over '" +
                               design.lotteries[q].id + "' at menu '" + design.menus[a].id +
                               "' and the reverse at menu '" + design.menus[b].id + "'";
                    out.push_back(std::move(v));
                }
            }
        }
    }
    return out;
}

std::vector<AxiomViolation> check_fosd_choice(
    const ExperimentDesign& design, const ChoiceCorrespondence& C,
    const std::vector<std::pair<std::string, std::string>>& fosd_menus, FosdMode mode) {
    std::vector<AxiomViolation> out;
    for (const auto& [menu_id, dominant_id] : fosd_menus) {
        int m = design.require_menu(menu_id);
        int dom = design.require_lottery(dominant_id);
        std::uint32_t value = C.values[m];
        std::uint32_t dominated_bits = design.menus[m].mask & ~(1u << dom);
        bool exact_dominant = value == (1u << dom);
        bool chose_dominated = (value & dominated_bits) != 0;
        bool fires = mode == FosdMode::StrictAxiom ? !exact_dominant : chose_dominated;
        if (!fires) continue;
        AxiomViolation v;
        v.axiom = Axiom::FosdChoice;
        v.menus = {menu_id};
        for (int e = 0; e < static_cast<int>(design.lotteries.size()); ++e)
            if (value & dominated_bits & (1u << e)) v.lotteries.push_back(design.lotteries[e].id);
        v.strict_subkind = value != 0 && (value & (1u << dom)) == 0 &&
                           (value & ~design.menus[m].mask) == 0;
        if (value == 0)
            v.detail = "menu '" + menu_id + "' was always deferred although '" + dominant_id +
                       "' dominates it outright";
        else if (chose_dominated)
            v.detail = "a dominated lottery was chosen from menu '" + menu_id +
                       "' although '" + dominant_id + "' dominates";
        else
            v.detail = "menu '" + menu_id + "' was not resolved to exactly {'" + dominant_id +
                       "'}";
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

// Position pattern of a choice value inside a menu: which members (by their
// rank within the menu) are chosen. Independence compares these across the
// base and mixed menus, whose members are aligned by construction.
std::set<int> position_pattern(const Menu& menu, std::uint32_t value) {
    std::set<int> out;
    for (std::size_t i = 0; i < menu.members.size(); ++i)
        if (value & (1u << menu.members[i])) out.insert(static_cast<int>(i));
    return out;
}

} // namespace

std::vector<AxiomViolation> check_independence(const ExperimentDesign& design,
                                               const ChoiceCorrespondence& C,
                                               const std::vector<IndependencePair>& pairs,
                                               DeferralPolicy policy) {
    std::vector<AxiomViolation> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& pair = pairs[i];
        int base = design.require_menu(pair.base_menu);
        int mixed = design.require_menu(pair.mixed_menu);
        std::uint32_t cb = C.values[base], cm = C.values[mixed];
        if (policy == DeferralPolicy::Lenient && (cb == 0 || cm == 0)) continue;
        auto pb = position_pattern(design.menus[base], cb);
        auto pm = position_pattern(design.menus[mixed], cm);
        if (pb == pm) continue;
        AxiomViolation v;
        v.axiom = Axiom::Independence;
        v.menus = {pair.base_menu, pair.mixed_menu};
        v.fixture_index = static_cast<int>(i);
        v.detail = "choices from menu '" + pair.base_menu + "' and its common-mixture menu '" +
                   pair.mixed_menu + "' pick different components";
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

enum class StarPattern { Empty, Dominant, Dominated, Both };

const char* star_pattern_name(StarPattern p) {
    switch (p) {
    case StarPattern::Empty: return "deferred";
    case StarPattern::Dominant: return "the dominant side";
    case StarPattern::Dominated: return "the dominated side";
    case StarPattern::Both: return "both sides";
    }
    return "?";
}

} // namespace

StarOutcome check_star(const ExperimentDesign& design, const ChoiceCorrespondence& C,
                       const std::vector<StarPair>& star_pairs, DeferralPolicy policy) {
    StarOutcome out;
    std::vector<StarPattern> patterns;
    for (const auto& sp : star_pairs) {
        int m = design.require_menu(sp.menu);
        std::uint32_t value = C.values[m];
        std::uint32_t dom_bit = 1u << design.require_lottery(sp.dominant);
        StarPattern p;
        if (value == 0)
            p = StarPattern::Empty;
        else if (value == dom_bit)
            p = StarPattern::Dominant;
        else if ((value & dom_bit) == 0)
            p = StarPattern::Dominated;
        else
            p = StarPattern::Both;
        patterns.push_back(p);
    }

    for (std::size_t i = 0; i < patterns.size(); ++i) {
        for (std::size_t j = i + 1; j < patterns.size(); ++j) {
            if (policy == DeferralPolicy::Lenient &&
                (patterns[i] == StarPattern::Empty || patterns[j] == StarPattern::Empty))
                continue;
            if (patterns[i] == patterns[j]) continue;
            AxiomViolation v;
            v.axiom = Axiom::Star;
            v.menus = {star_pairs[i].menu, star_pairs[j].menu};
            v.fixture_index = static_cast<int>(i);
            v.detail = std::string("menu '") + star_pairs[i].menu + "' resolves to " +
                       star_pattern_name(patterns[i]) + " while menu '" + star_pairs[j].menu +
                       "' resolves to " + star_pattern_name(patterns[j]);
            out.violations.push_back(std::move(v));
        }
    }

    if (out.violations.empty()) {
        StarPattern uniform = StarPattern::Empty;
        bool found = false;
        for (StarPattern p : patterns) {
            if (policy == DeferralPolicy::Lenient && p == StarPattern::Empty) continue;
            uniform = p;
            found = true;
            break;
        }
        if (found) {
            switch (uniform) {
            case StarPattern::Dominant: out.attitude = RiskAttitude::RiskAverse; break;
            case StarPattern::Dominated: out.attitude = RiskAttitude::RiskSeeking; break;
            case StarPattern::Both: out.attitude = RiskAttitude::RiskNeutral; break;
            case StarPattern::Empty: break; // all deferred stays unclassified
            }
        }
    }
    return out;
}

} // namespace revpref
