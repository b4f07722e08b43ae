#include "revpref/stochastic.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace revpref {

const char* stoch_axiom_name(StochAxiom a) {
    switch (a) {
    case StochAxiom::Regularity: return "regularity";
    case StochAxiom::WST: return "wst";
    case StochAxiom::MST: return "mst";
    case StochAxiom::SST: return "sst";
    case StochAxiom::StochasticDecisiveness: return "stochastic-decisiveness";
    }
    return "?";
}

namespace {

Rat freq_at(const ChoiceProbabilities& P, int menu, int lottery) {
    auto it = P.freq[menu].find(lottery);
    return it == P.freq[menu].end() ? Rat(0) : it->second;
}

} // namespace

std::vector<StochasticViolation> check_regularity(
    const ExperimentDesign& design, const ChoiceProbabilities& P,
    const std::vector<std::pair<int, int>>& nested_pairs) {
    std::vector<StochasticViolation> out;
    for (const auto& [inner, outer] : nested_pairs) {
        for (int e : design.menus[inner].members) {
            Rat small = freq_at(P, inner, e);
            Rat large = freq_at(P, outer, e);
            if (large <= small) continue;
            StochasticViolation v;
            v.axiom = StochAxiom::Regularity;
            v.menus = {design.menus[inner].id, design.menus[outer].id};
            v.lotteries = {design.lotteries[e].id};
            v.values = {small, large};
            v.detail = "'" + design.lotteries[e].id + "' is chosen more often from menu '" +
                       design.menus[outer].id + "' than from its submenu '" +
                       design.menus[inner].id + "'";
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<StochasticViolation> check_stochastic_transitivity(
    const ExperimentDesign& design, const ChoiceProbabilities& P,
    const std::vector<TransitivityTriple>& triples, StVariant variant, bool renormalize) {
    std::vector<StochasticViolation> out;
    const Rat half(1, 2);
    for (const auto& triple : triples) {
        std::map<std::set<std::string>, std::string> pair_menu;
        pair_menu[{triple.lotteries[0], triple.lotteries[1]}] = triple.menus[0];
        pair_menu[{triple.lotteries[1], triple.lotteries[2]}] = triple.menus[1];
        pair_menu[{triple.lotteries[0], triple.lotteries[2]}] = triple.menus[2];

        // Choice probability of `a` at the binary menu holding {a, b}.
        auto prob = [&](const std::string& a, const std::string& b) {
            int m = design.require_menu(pair_menu.at({a, b}));
            Rat raw = freq_at(P, m, design.require_lottery(a));
            if (!renormalize) return raw;
            // A menu with no active mass contributes probability zero, so it
            // can never carry an antecedent.
            return P.active[m] > Rat(0) ? Rat(raw / P.active[m]) : Rat(0);
        };

        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end());
        do {
            const std::string& x = triple.lotteries[idx[0]];
            const std::string& y = triple.lotteries[idx[1]];
            const std::string& z = triple.lotteries[idx[2]];
            Rat p_xy = prob(x, y);
            Rat p_yz = prob(y, z);
            if (p_xy < half || p_yz < half) continue; // ties fire, deficits do not
            Rat p_xz = prob(x, z);
            Rat bar;
            StochAxiom axiom;
            switch (variant) {
            case StVariant::Weak:
                bar = half;
                axiom = StochAxiom::WST;
                break;
            case StVariant::Moderate:
                bar = std::min(p_xy, p_yz);
                axiom = StochAxiom::MST;
                break;
            case StVariant::Strong:
                bar = std::max(p_xy, p_yz);
                axiom = StochAxiom::SST;
                break;
            }
            if (p_xz >= bar) continue;
            StochasticViolation v;
            v.axiom = axiom;
            v.lotteries = {x, y, z};
            v.menus = {pair_menu.at({x, y}), pair_menu.at({y, z}), pair_menu.at({x, z})};
            v.values = {p_xy, p_yz, p_xz};
            v.detail = "'" + x + "' beats '" + y + "' and '" + y + "' beats '" + z +
                       "' at least half the time, but '" + x + "' over '" + z +
                       "' falls short of the required bar";
            out.push_back(std::move(v));
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
    return out;
}

std::vector<StochasticViolation> check_stochastic_decisiveness(
    const ExperimentDesign& design, const ChoiceProbabilities& P) {
    std::vector<StochasticViolation> out;
    for (std::size_t m = 0; m < design.menus.size(); ++m) {
        if (P.active[m] == Rat(1)) continue;
        StochasticViolation v;
        v.axiom = StochAxiom::StochasticDecisiveness;
        v.menus = {design.menus[m].id};
        v.values = {P.active[m]};
        v.detail = "menu '" + design.menus[m].id +
                   "' resolves to an active choice in less than every round";
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace revpref
