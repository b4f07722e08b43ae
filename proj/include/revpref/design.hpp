// Experiment design: the lottery universe, the menu collection, the declared
// dominance taxonomy, and the axiom-test fixtures (transitivity triples,
// independence pairs, risk-stability pairs). A design can be loaded from CSV
// plus a small fixtures config, or taken from the built-in constant that ships
// the canonical 7-lottery / 15-menu collection.
#pragma once

#include "revpref/lottery.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace revpref {

struct Menu {
    std::string id;
    std::vector<int> members; // lottery indices, ascending
    std::uint32_t mask = 0;   // bitmask over lottery indices
    bool is_binary() const { return members.size() == 2; }
};

// Dominance label attached to a menu by the design documentation. For binary
// menus this is the pairwise relation; for larger menus it marks a lottery
// that dominates every other member. `near` flags the documented
// "nearly dominant" cases, which are not proper dominance.
struct DeclaredLabel {
    DominanceKind kind = DominanceKind::None;
    std::string dominant; // empty when kind == None
    bool near = false;
};

struct TransitivityTriple {
    std::array<std::string, 3> lotteries; // p, q, r
    std::array<std::string, 3> menus;     // {p,q}, {q,r}, {p,r}
};

struct IndependencePair {
    std::string base_menu;  // {B1, B2}
    std::string mixed_menu; // {alpha*B1+(1-alpha)*R, alpha*B2+(1-alpha)*R}
    std::string mixing_lottery;
    Rat alpha;
};

struct StarPair {
    std::string menu;     // binary menu with an SOSD relation
    std::string dominant; // the SOSD-dominant member
};

enum class TaxonomyMode { Declared, Computed };

struct ExperimentDesign {
    std::vector<Lottery> lotteries; // insertion order is the canonical order
    std::vector<Menu> menus;
    std::map<std::string, int> lottery_index;
    std::map<std::string, int> menu_index;

    std::map<std::string, DeclaredLabel> declared; // per menu id
    std::vector<TransitivityTriple> triples;
    std::vector<IndependencePair> independence_pairs;
    std::vector<StarPair> star_pairs;
    // Binary menus whose declared label is FOSD; the dominant comes from
    // `declared`. These drive the FOSD choice-axiom checks.
    std::vector<std::string> fosd_menus;
    // Auxiliary lotteries (e.g. the degenerate mixing lottery) that appear in
    // fixtures but in no menu.
    std::vector<Lottery> auxiliary;

    int rounds_expected = 5;

    const Lottery& lottery(int idx) const { return lotteries[idx]; }
    const Lottery& lottery(const std::string& id) const;
    // Looks up a fixture lottery in the main universe first, then auxiliary.
    const Lottery& fixture_lottery(const std::string& id) const;
    const Menu& menu(int idx) const { return menus[idx]; }
    const Menu& menu(const std::string& id) const;
    int require_menu(const std::string& id) const;      // throws when unknown
    int require_lottery(const std::string& id) const;   // throws when unknown

    // Distinct prizes across all lotteries, ascending.
    std::vector<Rat> prize_set() const;
    Rat max_prize() const;

    // All ordered pairs (inner, outer) of menu indices with inner a proper
    // subset of outer. Drives contraction and regularity checks.
    std::vector<std::pair<int, int>> nested_menu_pairs() const;

    // Recomputed dominance label for one menu: a member that FOSD-dominates
    // all others, else one that SOSD-dominates all others, else None.
    DeclaredLabel computed_label(int menu_idx) const;

    // Fixtures under the active taxonomy. Declared mode returns them as
    // designed. Computed mode keeps the fixture membership but re-points each
    // dominant at the exact-arithmetic recomputation; a fixture menu whose
    // recomputed relation vanishes entirely raises ValidationError, because
    // the check it feeds would be meaningless.
    std::vector<StarPair> effective_star_pairs(TaxonomyMode mode) const;
    std::vector<std::pair<std::string, std::string>>
    effective_fosd_menus(TaxonomyMode mode) const; // (menu id, dominant id)

    // Full validation of every invariant; throws ValidationError.
    void validate() const;
};

// The canonical design constant: 7 lotteries over the prize set
// {0, 9, 10, 20, 24}, 15 menus (9 binary, 4 ternary, 2 quaternary), declared
// taxonomy, 5 transitivity triples, 1 independence pair, 3 StAR pairs,
// 5 expected rounds.
const ExperimentDesign& built_in_design();

// CSV + fixtures loader. lotteries.csv: lottery_id,prize,prob_num,prob_den.
// menus.csv: menu_id,lottery_id (one row per membership). The fixtures file
// is a small TOML-style config; see data/design/fixtures.toml for the format.
ExperimentDesign load_design(const std::string& lotteries_csv,
                             const std::string& menus_csv,
                             const std::string& fixtures_cfg);

// Declared vs recomputed labels for every menu, for the audit and reports.
// Agreement is judged at the level the declared label speaks about: a plain
// label agrees when the named lottery dominates every other member at the
// declared order, a `near` label agrees when proper dominance at that order
// indeed fails, and a None label agrees when no member dominates at either
// order.
struct TaxonomyEntry {
    std::string menu;
    DeclaredLabel declared;
    DeclaredLabel computed;
    bool agree = false;
};
std::vector<TaxonomyEntry> taxonomy_comparison(const ExperimentDesign& design);

} // namespace revpref
