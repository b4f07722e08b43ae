// Deterministic axiom detectors on hand-built choice correspondences.
#include <doctest.h>

#include "revpref/axioms.hpp"

#include <string>
#include <vector>

using namespace revpref;

namespace {

const ExperimentDesign& D() { return built_in_design(); }

int lot(const char* id) { return D().require_lottery(id); }
int menu(const char* id) { return D().require_menu(id); }
std::uint32_t bit(const char* id) { return 1u << lot(id); }

// Correspondence where every menu's value is its full member set (trivially
// satisfies WARP/contraction/transitivity), to be overridden per test.
ChoiceCorrespondence full_choice() {
    ChoiceCorrespondence c;
    c.subject_id = "t";
    c.values.resize(D().menus.size());
    for (std::size_t m = 0; m < D().menus.size(); ++m) c.values[m] = D().menus[m].mask;
    return c;
}

// Correspondence induced by a strict ranking of lottery ids, best first.
ChoiceCorrespondence ranked_choice(const std::vector<const char*>& ranking) {
    ChoiceCorrespondence c;
    c.subject_id = "t";
    c.values.resize(D().menus.size(), 0u);
    for (std::size_t m = 0; m < D().menus.size(); ++m) {
        for (const char* id : ranking) {
            if (D().menus[m].mask & bit(id)) {
                c.values[m] = bit(id);
                break;
            }
        }
    }
    return c;
}

int count_of(const std::vector<AxiomViolation>& v, Axiom a) {
    int n = 0;
    for (const auto& x : v)
        if (x.axiom == a) ++n;
    return n;
}

} // namespace

TEST_CASE("decisiveness flags exactly the empty-valued menus") {
    auto c = full_choice();
    CHECK(check_decisiveness(D(), c).empty());
    c.values[menu("3")] = 0;
    c.values[menu("14")] = 0;
    auto v = check_decisiveness(D(), c);
    REQUIRE(v.size() == 2);
    CHECK(v[0].axiom == Axiom::Decisiveness);
    CHECK(v[0].menus == std::vector<std::string>{"3"});
    CHECK(v[1].menus == std::vector<std::string>{"14"});
}

TEST_CASE("a consistent strict ranking violates nothing") {
    auto c = ranked_choice({"A1", "D", "B1", "A2", "B2", "C1", "C2"});
    CHECK(check_decisiveness(D(), c).empty());
    CHECK(check_transitivity(D(), c, D().triples).empty());
    CHECK(check_contraction(D(), c, D().nested_menu_pairs()).empty());
    CHECK(check_warp(D(), c).empty());
}

TEST_CASE("transitivity: a revealed cycle is caught with its witness") {
    // A1 > D at menu 8, D > A2 at menu 9, but A2 > A1 at menu 1.
    auto c = full_choice();
    c.values[menu("8")] = bit("A1");
    c.values[menu("9")] = bit("D");
    c.values[menu("1")] = bit("A2");
    auto v = check_transitivity(D(), c, D().triples);
    REQUIRE(!v.empty());
    // The violating arrangement: p=A1, q=D, r=A2, missing A1 at {A1,A2}.
    bool found = false;
    for (const auto& x : v) {
        if (x.lotteries == std::vector<std::string>{"A1", "D", "A2"}) {
            found = true;
            CHECK(x.menus == std::vector<std::string>{"8", "9", "1"});
            CHECK(x.fixture_index == 0);
        }
    }
    CHECK(found);
}

TEST_CASE("transitivity: an empty final menu fails the consequent") {
    auto c = full_choice();
    c.values[menu("8")] = bit("A1");
    c.values[menu("9")] = bit("D");
    c.values[menu("1")] = 0; // deferral where A1 should have been chosen
    auto v = check_transitivity(D(), c, D().triples);
    CHECK(count_of(v, Axiom::Transitivity) >= 1);
}

TEST_CASE("transitivity: multi-valued antecedents fire too") {
    // C({A1,D}) = {A1,D} reveals both ways; with D > A2 and A2 > A1 the
    // arrangement (A1, D, A2) still yields a violation.
    auto c = full_choice();
    c.values[menu("8")] = bit("A1") | bit("D");
    c.values[menu("9")] = bit("D");
    c.values[menu("1")] = bit("A2");
    auto v = check_transitivity(D(), c, D().triples);
    CHECK(count_of(v, Axiom::Transitivity) >= 1);
}

TEST_CASE("contraction: choosing differently in the subset menu") {
    // A1 chosen in menu 10 = {A1,A2,C1} but not in menu 1 = {A1,A2}.
    auto c = full_choice();
    c.values[menu("10")] = bit("A1");
    c.values[menu("1")] = bit("A2");
    auto v = check_contraction(D(), c, D().nested_menu_pairs());
    bool found = false;
    for (const auto& x : v) {
        if (x.menus == std::vector<std::string>{"1", "10"} &&
            x.lotteries == std::vector<std::string>{"A1"})
            found = true;
    }
    CHECK(found);
}

TEST_CASE("contraction: an empty subset menu is a violation when the antecedent holds") {
    auto c = full_choice();
    c.values[menu("10")] = bit("A1");
    c.values[menu("1")] = 0;
    auto v = check_contraction(D(), c, D().nested_menu_pairs());
    CHECK(count_of(v, Axiom::Contraction) >= 1);

    // But no antecedent, no violation: chosen element outside the subset.
    auto c2 = full_choice();
    c2.values[menu("10")] = bit("C1");
    c2.values[menu("1")] = 0;
    auto v2 = check_contraction(D(), c2, {{menu("1"), menu("10")}});
    CHECK(v2.empty());
}

TEST_CASE("WARP: direct reversals across any two menus") {
    // Menu 6 = {A1,B1}: pick A1 (rejecting B1). Menu 12 = {A1,B1,B2}: pick B1
    // while A1 is available. That is a reversal.
    auto c = full_choice();
    c.values[menu("6")] = bit("A1");
    c.values[menu("12")] = bit("B1");
    auto v = check_warp(D(), c);
    REQUIRE(!v.empty());
    CHECK(v[0].axiom == Axiom::Warp);

    // Choosing both at the larger menu is fine for WARP, since A1 stays in.
    auto c2 = full_choice();
    c2.values[menu("6")] = bit("A1");
    c2.values[menu("12")] = bit("A1") | bit("B1");
    for (const auto& x : check_warp(D(), c2)) {
        CHECK(x.menus != std::vector<std::string>{"6", "12"});
    }

    // Empty values never witness WARP.
    auto c3 = full_choice();
    c3.values[menu("6")] = 0;
    c3.values[menu("12")] = bit("B1");
    bool six_twelve = false;
    for (const auto& x : check_warp(D(), c3)) {
        if (x.menus == std::vector<std::string>{"6", "12"}) six_twelve = true;
    }
    CHECK_FALSE(six_twelve);
}

TEST_CASE("FOSD choice: strict-axiom form versus dominated-choice form") {
    auto fosd = D().effective_fosd_menus(TaxonomyMode::Declared);

    // Choosing the whole menu at a FOSD menu: strict form fails, dominated
    // form passes (the dominated lottery was not the unique pick; both were
    // taken, which still involves the dominated one; the operative question
    // is whether the dominated lottery was chosen at all).
    auto c = full_choice();
    c.values[menu("1")] = bit("A1") | bit("A2");
    c.values[menu("9")] = bit("D");
    auto strict = check_fosd_choice(D(), c, fosd, FosdMode::StrictAxiom);
    CHECK(count_of(strict, Axiom::FosdChoice) == 1);
    auto dominated = check_fosd_choice(D(), c, fosd, FosdMode::DominatedChoice);
    CHECK(count_of(dominated, Axiom::FosdChoice) == 1); // A2 was chosen

    // Deferral: strict form violates (not exactly {dominant}), dominated
    // form does not (nothing dominated was chosen).
    auto c2 = full_choice();
    c2.values[menu("1")] = 0;
    c2.values[menu("9")] = bit("D");
    CHECK(count_of(check_fosd_choice(D(), c2, fosd, FosdMode::StrictAxiom),
                   Axiom::FosdChoice) == 1);
    CHECK(check_fosd_choice(D(), c2, fosd, FosdMode::DominatedChoice).empty());

    // Picking exactly the dominated lottery violates both, flagged strict.
    auto c3 = full_choice();
    c3.values[menu("1")] = bit("A2");
    c3.values[menu("9")] = bit("D");
    auto v3 = check_fosd_choice(D(), c3, fosd, FosdMode::DominatedChoice);
    REQUIRE(v3.size() == 1);
    CHECK(v3[0].strict_subkind);
    CHECK(v3[0].menus == std::vector<std::string>{"1"});
    CHECK(v3[0].lotteries == std::vector<std::string>{"A2"});

    // Clean choices pass both forms.
    auto c4 = full_choice();
    c4.values[menu("1")] = bit("A1");
    c4.values[menu("9")] = bit("D");
    CHECK(check_fosd_choice(D(), c4, fosd, FosdMode::StrictAxiom).empty());
    CHECK(check_fosd_choice(D(), c4, fosd, FosdMode::DominatedChoice).empty());
}

TEST_CASE("independence: the four consistent patterns and everything else") {
    const auto& pairs = D().independence_pairs;

    auto with = [&](std::uint32_t base, std::uint32_t mixed) {
        auto c = full_choice();
        c.values[menu("2")] = base;
        c.values[menu("3")] = mixed;
        return c;
    };

    // (i) both empty; (ii) first components; (iii) second components;
    // (iv) both full.
    CHECK(check_independence(D(), with(0, 0), pairs, DeferralPolicy::Strict).empty());
    CHECK(check_independence(D(), with(bit("B1"), bit("C1")), pairs, DeferralPolicy::Strict)
              .empty());
    CHECK(check_independence(D(), with(bit("B2"), bit("C2")), pairs, DeferralPolicy::Strict)
              .empty());
    CHECK(check_independence(D(), with(bit("B1") | bit("B2"), bit("C1") | bit("C2")), pairs,
                             DeferralPolicy::Strict)
              .empty());

    // Crossed singletons violate.
    auto v = check_independence(D(), with(bit("B1"), bit("C2")), pairs, DeferralPolicy::Strict);
    REQUIRE(v.size() == 1);
    CHECK(v[0].axiom == Axiom::Independence);
    CHECK(v[0].fixture_index == 0);

    // Singleton against pair violates.
    CHECK(!check_independence(D(), with(bit("B1"), bit("C1") | bit("C2")), pairs,
                              DeferralPolicy::Strict)
               .empty());

    // One side empty: strict violates, lenient skips.
    CHECK(!check_independence(D(), with(0, bit("C1")), pairs, DeferralPolicy::Strict).empty());
    CHECK(check_independence(D(), with(0, bit("C1")), pairs, DeferralPolicy::Lenient).empty());
}

TEST_CASE("risk-attitude stability: the four uniform cases") {
    auto star = D().effective_star_pairs(TaxonomyMode::Declared);
    // Menus 4 = {B1,D} dominant D, 6 = {A1,B1} dominant A1, 8 = {A1,D}
    // dominant A1.
    auto with = [&](std::uint32_t m4, std::uint32_t m6, std::uint32_t m8) {
        auto c = full_choice();
        c.values[menu("4")] = m4;
        c.values[menu("6")] = m6;
        c.values[menu("8")] = m8;
        return c;
    };

    auto averse = check_star(D(), with(bit("D"), bit("A1"), bit("A1")), star,
                             DeferralPolicy::Strict);
    CHECK(averse.violations.empty());
    CHECK(averse.attitude == RiskAttitude::RiskAverse);

    auto seeking = check_star(D(), with(bit("B1"), bit("B1"), bit("D")), star,
                              DeferralPolicy::Strict);
    CHECK(seeking.violations.empty());
    CHECK(seeking.attitude == RiskAttitude::RiskSeeking);

    auto neutral = check_star(D(),
                              with(bit("B1") | bit("D"), bit("A1") | bit("B1"),
                                   bit("A1") | bit("D")),
                              star, DeferralPolicy::Strict);
    CHECK(neutral.violations.empty());
    CHECK(neutral.attitude == RiskAttitude::RiskNeutral);

    auto undecided = check_star(D(), with(0, 0, 0), star, DeferralPolicy::Strict);
    CHECK(undecided.violations.empty());
    CHECK(undecided.attitude == RiskAttitude::Unclassified);
}

TEST_CASE("risk-attitude stability: mixed patterns violate pairwise") {
    auto star = D().effective_star_pairs(TaxonomyMode::Declared);
    auto c = full_choice();
    c.values[menu("4")] = bit("D");    // dominant
    c.values[menu("6")] = bit("B1");   // dominated
    c.values[menu("8")] = bit("A1");   // dominant
    auto out = check_star(D(), c, star, DeferralPolicy::Strict);
    // Pairs (4,6) and (6,8) clash; (4,8) agrees.
    CHECK(out.violations.size() == 2);
    CHECK(out.attitude == RiskAttitude::Unclassified);

    // The "both" pattern at one menu clashes with singleton patterns at the
    // other two.
    auto c2 = full_choice();
    c2.values[menu("4")] = bit("B1") | bit("D");
    c2.values[menu("6")] = bit("A1");
    c2.values[menu("8")] = bit("A1");
    auto out2 = check_star(D(), c2, star, DeferralPolicy::Strict);
    CHECK(out2.violations.size() == 2);
}

TEST_CASE("risk-attitude stability under the lenient policy") {
    auto star = D().effective_star_pairs(TaxonomyMode::Declared);
    auto c = full_choice();
    c.values[menu("4")] = 0;
    c.values[menu("6")] = bit("A1");
    c.values[menu("8")] = bit("A1");
    // Strict: the empty menu clashes with the two dominant picks.
    auto strict = check_star(D(), c, star, DeferralPolicy::Strict);
    CHECK(strict.violations.size() == 2);
    CHECK(strict.attitude == RiskAttitude::Unclassified);
    // Lenient: empty pairs drop out; the remaining pattern is averse.
    auto lenient = check_star(D(), c, star, DeferralPolicy::Lenient);
    CHECK(lenient.violations.empty());
    CHECK(lenient.attitude == RiskAttitude::RiskAverse);
}

TEST_CASE("axiom names are stable identifiers") {
    CHECK(std::string(axiom_name(Axiom::Decisiveness)) == "decisiveness");
    CHECK(std::string(axiom_name(Axiom::Transitivity)) == "transitivity");
    CHECK(std::string(axiom_name(Axiom::Contraction)) == "contraction");
    CHECK(std::string(axiom_name(Axiom::Warp)) == "warp");
    CHECK(std::string(axiom_name(Axiom::FosdChoice)) == "fosd");
    CHECK(std::string(axiom_name(Axiom::Independence)) == "independence");
    CHECK(std::string(axiom_name(Axiom::Star)) == "star");
    CHECK(std::string(risk_attitude_name(RiskAttitude::RiskAverse)) == "averse");
    CHECK(std::string(risk_attitude_name(RiskAttitude::RiskSeeking)) == "seeking");
    CHECK(std::string(risk_attitude_name(RiskAttitude::RiskNeutral)) == "neutral");
    CHECK(std::string(risk_attitude_name(RiskAttitude::Unclassified)) == "unclassified");
}
