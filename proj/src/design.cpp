#include "revpref/design.hpp"

#include "revpref/csv.hpp"
#include "revpref/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace revpref {

const Lottery& ExperimentDesign::lottery(const std::string& id) const {
    return lotteries[require_lottery(id)];
}

const Menu& ExperimentDesign::menu(const std::string& id) const {
    return menus[require_menu(id)];
}

int ExperimentDesign::require_menu(const std::string& id) const {
    auto it = menu_index.find(id);
    if (it == menu_index.end())
        throw ValidationError("unknown menu id '" + id + "'");
    return it->second;
}

int ExperimentDesign::require_lottery(const std::string& id) const {
    auto it = lottery_index.find(id);
    if (it == lottery_index.end())
        throw ValidationError("unknown lottery id '" + id + "'");
    return it->second;
}

const Lottery& ExperimentDesign::fixture_lottery(const std::string& id) const {
    auto it = lottery_index.find(id);
    if (it != lottery_index.end()) return lotteries[it->second];
    for (const auto& aux : auxiliary)
        if (aux.id == id) return aux;
    throw ValidationError("unknown fixture lottery id '" + id + "'");
}

std::vector<Rat> ExperimentDesign::prize_set() const {
    std::set<Rat> prizes;
    for (const auto& p : lotteries)
        for (const auto& [prize, mass] : p.support) prizes.insert(prize);
    return std::vector<Rat>(prizes.begin(), prizes.end());
}

Rat ExperimentDesign::max_prize() const {
    Rat top(0);
    for (const auto& p : lotteries) top = std::max(top, p.high());
    return top;
}

std::vector<std::pair<int, int>> ExperimentDesign::nested_menu_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t inner = 0; inner < menus.size(); ++inner) {
        for (std::size_t outer = 0; outer < menus.size(); ++outer) {
            if (inner == outer) continue;
            std::uint32_t mi = menus[inner].mask, mo = menus[outer].mask;
            if ((mi & mo) == mi && mi != mo)
                out.emplace_back(static_cast<int>(inner), static_cast<int>(outer));
        }
    }
    return out;
}

DeclaredLabel ExperimentDesign::computed_label(int menu_idx) const {
    const Menu& m = menus[menu_idx];
    for (DominanceKind level : {DominanceKind::Fosd, DominanceKind::Sosd}) {
        for (int candidate : m.members) {
            bool dominates_all = true;
            for (int other : m.members) {
                if (other == candidate) continue;
                DominanceRelation rel =
                    level == DominanceKind::Fosd
                        ? check_fosd(lotteries[candidate], lotteries[other])
                        : check_sosd(lotteries[candidate], lotteries[other]);
                if (rel.kind != level || rel.dominant != lotteries[candidate].id) {
                    dominates_all = false;
                    break;
                }
            }
            if (dominates_all) {
                DeclaredLabel label;
                label.kind = level;
                label.dominant = lotteries[candidate].id;
                return label;
            }
        }
    }
    return DeclaredLabel{};
}

std::vector<StarPair> ExperimentDesign::effective_star_pairs(TaxonomyMode mode) const {
    if (mode == TaxonomyMode::Declared) return star_pairs;
    std::vector<StarPair> out;
    for (const auto& sp : star_pairs) {
        const Menu& m = menu(sp.menu);
        DominanceRelation rel = check_sosd(lotteries[m.members[0]], lotteries[m.members[1]]);
        if (rel.kind == DominanceKind::None)
            throw ValidationError("menu '" + sp.menu +
                                  "': recomputation finds no second-order relation, the "
                                  "risk-stability fixture is meaningless");
        out.push_back({sp.menu, rel.dominant});
    }
    return out;
}

std::vector<std::pair<std::string, std::string>>
ExperimentDesign::effective_fosd_menus(TaxonomyMode mode) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& id : fosd_menus) {
        if (mode == TaxonomyMode::Declared) {
            out.emplace_back(id, declared.at(id).dominant);
            continue;
        }
        const Menu& m = menu(id);
        DominanceRelation rel = check_fosd(lotteries[m.members[0]], lotteries[m.members[1]]);
        if (rel.kind == DominanceKind::None)
            throw ValidationError("menu '" + id +
                                  "': recomputation finds no first-order relation, the "
                                  "dominance-choice fixture is meaningless");
        out.emplace_back(id, rel.dominant);
    }
    return out;
}

void ExperimentDesign::validate() const {
    if (lotteries.empty()) throw ValidationError("design has no lotteries");
    if (menus.empty()) throw ValidationError("design has no menus");
    if (rounds_expected < 1)
        throw ValidationError("rounds_expected must be positive");

    std::set<std::string> lottery_ids;
    for (const auto& p : lotteries) {
        if (!lottery_ids.insert(p.id).second)
            throw ValidationError("duplicate lottery id '" + p.id + "'");
        auto it = lottery_index.find(p.id);
        if (it == lottery_index.end() ||
            &lotteries[it->second] != &p)
            throw ValidationError("lottery index out of sync for '" + p.id + "'");
    }
    for (const auto& aux : auxiliary) {
        if (lottery_ids.count(aux.id))
            throw ValidationError("auxiliary lottery '" + aux.id +
                                  "' duplicates a universe id");
    }

    std::set<std::string> menu_ids;
    for (const auto& m : menus) {
        if (!menu_ids.insert(m.id).second)
            throw ValidationError("duplicate menu id '" + m.id + "'");
        if (m.members.size() < 2)
            throw ValidationError("menu '" + m.id + "' has fewer than two members");
        std::uint32_t mask = 0;
        int prev = -1;
        for (int e : m.members) {
            if (e < 0 || e >= static_cast<int>(lotteries.size()))
                throw ValidationError("menu '" + m.id + "' references lottery index " +
                                      std::to_string(e) + " outside the universe");
            if (e <= prev)
                throw ValidationError("menu '" + m.id + "' members must be strictly ascending");
            prev = e;
            mask |= (1u << e);
        }
        if (mask != m.mask)
            throw ValidationError("menu '" + m.id + "' mask does not match its members");
    }

    for (const auto& [menu_id, label] : declared) {
        require_menu(menu_id);
        if (label.kind == DominanceKind::None) {
            if (!label.dominant.empty())
                throw ValidationError("menu '" + menu_id +
                                      "' has a dominant but no declared relation");
            continue;
        }
        int li = require_lottery(label.dominant);
        if ((menu(menu_id).mask & (1u << li)) == 0)
            throw ValidationError("menu '" + menu_id + "' declared dominant '" +
                                  label.dominant + "' is not a member");
    }

    auto require_binary_menu_over = [&](const std::string& menu_id, const std::string& a,
                                        const std::string& b, const std::string& what) {
        const Menu& m = menu(menu_id);
        std::uint32_t want = (1u << require_lottery(a)) | (1u << require_lottery(b));
        if (m.mask != want)
            throw ValidationError(what + " expects menu '" + menu_id + "' to be exactly {" +
                                  a + ", " + b + "}");
    };

    for (const auto& t : triples) {
        for (const auto& id : t.lotteries) require_lottery(id);
        require_binary_menu_over(t.menus[0], t.lotteries[0], t.lotteries[1],
                                 "transitivity fixture");
        require_binary_menu_over(t.menus[1], t.lotteries[1], t.lotteries[2],
                                 "transitivity fixture");
        require_binary_menu_over(t.menus[2], t.lotteries[0], t.lotteries[2],
                                 "transitivity fixture");
    }

    for (const auto& ip : independence_pairs) {
        const Menu& base = menu(ip.base_menu);
        const Menu& mixed = menu(ip.mixed_menu);
        if (base.members.size() != 2 || mixed.members.size() != 2)
            throw ValidationError("independence fixture menus must be binary");
        const Lottery& mixer = fixture_lottery(ip.mixing_lottery);
        for (int i = 0; i < 2; ++i) {
            Lottery expect = mix(ip.alpha, lotteries[base.members[i]], mixer);
            if (!lotteries[mixed.members[i]].same_distribution(expect))
                throw ValidationError("independence fixture: menu '" + ip.mixed_menu +
                                      "' member '" + lotteries[mixed.members[i]].id +
                                      "' is not the declared mixture of '" +
                                      lotteries[base.members[i]].id + "'");
        }
    }

    for (const auto& sp : star_pairs) {
        const Menu& m = menu(sp.menu);
        if (m.members.size() != 2)
            throw ValidationError("risk-stability fixture menu '" + sp.menu +
                                  "' must be binary");
        int li = require_lottery(sp.dominant);
        if ((m.mask & (1u << li)) == 0)
            throw ValidationError("risk-stability fixture dominant '" + sp.dominant +
                                  "' is not a member of menu '" + sp.menu + "'");
    }

    for (const auto& id : fosd_menus) {
        const Menu& m = menu(id);
        if (m.members.size() != 2)
            throw ValidationError("dominance-choice fixture menu '" + id + "' must be binary");
        auto it = declared.find(id);
        if (it == declared.end() || it->second.kind != DominanceKind::Fosd)
            throw ValidationError("dominance-choice fixture menu '" + id +
                                  "' has no declared first-order label");
    }
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct FixtureEntry {
    std::string key;
    std::string value;
};

struct FixtureConfig {
    int rounds_expected = -1;
    std::vector<FixtureEntry> labels, triples, independence, star, fosd;
};

FixtureConfig parse_fixtures(const std::string& content, const std::string& path) {
    FixtureConfig cfg;
    std::istringstream in(content);
    std::string line;
    std::string section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t");
        line = line.substr(first, last - first + 1);

        auto where = [&] { return path + ":" + std::to_string(line_no) + ": "; };
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError(where() + "unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(where() + "expected 'key = value'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        if (key.empty()) throw ValidationError(where() + "empty key");

        if (section.empty()) {
            if (key != "rounds_expected")
                throw ValidationError(where() + "unknown top-level key '" + key + "'");
            cfg.rounds_expected = std::stoi(value);
            continue;
        }
        if (value.size() < 2 || value.front() != '"' || value.back() != '"')
            throw ValidationError(where() + "value must be a quoted string");
        value = value.substr(1, value.size() - 2);

        if (section == "labels") cfg.labels.push_back({key, value});
        else if (section == "triples") cfg.triples.push_back({key, value});
        else if (section == "independence") cfg.independence.push_back({key, value});
        else if (section == "star") cfg.star.push_back({key, value});
        else if (section == "fosd_choice") cfg.fosd.push_back({key, value});
        else throw ValidationError(where() + "unknown section '" + section + "'");
    }
    if (cfg.rounds_expected < 0)
        throw ValidationError(path + ": missing rounds_expected");
    return cfg;
}

ExperimentDesign assemble_design(const CsvTable& lotteries, const CsvTable& menus,
                                 const FixtureConfig& fixtures,
                                 const std::string& fixtures_path) {
    ExperimentDesign d;
    d.rounds_expected = fixtures.rounds_expected;

    // Lotteries in first-appearance order, atoms accumulated per id.
    int id_col = lotteries.column("lottery_id");
    int prize_col = lotteries.column("prize");
    int num_col = lotteries.column("prob_num");
    int den_col = lotteries.column("prob_den");
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<Rat, Rat>>> atoms;
    for (std::size_t i = 0; i < lotteries.rows.size(); ++i) {
        const auto& row = lotteries.rows[i];
        const std::string& id = row[id_col];
        if (!atoms.count(id)) order.push_back(id);
        try {
            atoms[id].emplace_back(rat_from_string(row[prize_col]),
                                   Rat(rat_from_string(row[num_col]) /
                                       rat_from_string(row[den_col])));
        } catch (const ValidationError& e) {
            throw ValidationError(lotteries.path + ": line " +
                                  std::to_string(lotteries.line_numbers[i]) + ": " + e.what());
        }
    }

    // Memberships decide which ids form the universe; the rest are auxiliary.
    int menu_col = menus.column("menu_id");
    int member_col = menus.column("lottery_id");
    std::vector<std::string> menu_order;
    std::map<std::string, std::vector<std::string>> memberships;
    for (std::size_t i = 0; i < menus.rows.size(); ++i) {
        const auto& row = menus.rows[i];
        if (!memberships.count(row[menu_col])) menu_order.push_back(row[menu_col]);
        memberships[row[menu_col]].push_back(row[member_col]);
    }
    std::set<std::string> in_menus;
    for (const auto& [id, ids] : memberships)
        for (const auto& lid : ids) in_menus.insert(lid);

    for (const auto& id : order) {
        Lottery lot = Lottery::make(id, atoms[id]);
        if (in_menus.count(id)) {
            d.lottery_index[id] = static_cast<int>(d.lotteries.size());
            d.lotteries.push_back(std::move(lot));
        } else {
            d.auxiliary.push_back(std::move(lot));
        }
    }

    for (const auto& id : menu_order) {
        Menu m;
        m.id = id;
        for (const auto& lid : memberships[id]) {
            auto it = d.lottery_index.find(lid);
            if (it == d.lottery_index.end())
                throw ValidationError(menus.path + ": menu '" + id +
                                      "' references unknown lottery '" + lid + "'");
            m.members.push_back(it->second);
        }
        std::sort(m.members.begin(), m.members.end());
        for (int e : m.members) m.mask |= (1u << e);
        d.menu_index[m.id] = static_cast<int>(d.menus.size());
        d.menus.push_back(std::move(m));
    }

    auto bad_fixture = [&](const std::string& key, const std::string& why) -> ValidationError {
        return ValidationError(fixtures_path + ": entry '" + key + "': " + why);
    };

    for (const auto& [key, value] : fixtures.labels) {
        auto tokens = split_ws(value);
        if (tokens.empty()) throw bad_fixture(key, "empty label");
        DeclaredLabel label;
        if (tokens[0] == "fosd") label.kind = DominanceKind::Fosd;
        else if (tokens[0] == "sosd") label.kind = DominanceKind::Sosd;
        else if (tokens[0] == "none") label.kind = DominanceKind::None;
        else throw bad_fixture(key, "unknown relation '" + tokens[0] + "'");
        std::size_t next = 1;
        if (label.kind != DominanceKind::None) {
            if (tokens.size() < 2) throw bad_fixture(key, "missing dominant lottery");
            label.dominant = tokens[next++];
        }
        if (next < tokens.size()) {
            if (tokens[next] != "near")
                throw bad_fixture(key, "unexpected token '" + tokens[next] + "'");
            label.near = true;
            ++next;
        }
        if (next != tokens.size()) throw bad_fixture(key, "trailing tokens");
        d.declared[key] = label;
    }

    for (const auto& [key, value] : fixtures.triples) {
        auto colon = value.find(':');
        if (colon == std::string::npos)
            throw bad_fixture(key, "expected 'p q r : m1 m2 m3'");
        auto ids = split_ws(value.substr(0, colon));
        auto menus_part = split_ws(value.substr(colon + 1));
        if (ids.size() != 3 || menus_part.size() != 3)
            throw bad_fixture(key, "expected three lotteries and three menus");
        TransitivityTriple t;
        std::copy(ids.begin(), ids.end(), t.lotteries.begin());
        std::copy(menus_part.begin(), menus_part.end(), t.menus.begin());
        d.triples.push_back(std::move(t));
    }

    for (const auto& [key, value] : fixtures.independence) {
        auto tokens = split_ws(value);
        if (tokens.size() != 4)
            throw bad_fixture(key, "expected 'base mixed mixer alpha'");
        IndependencePair ip;
        ip.base_menu = tokens[0];
        ip.mixed_menu = tokens[1];
        ip.mixing_lottery = tokens[2];
        ip.alpha = rat_from_string(tokens[3]);
        d.independence_pairs.push_back(std::move(ip));
    }

    for (const auto& [key, value] : fixtures.star) {
        auto tokens = split_ws(value);
        if (tokens.size() != 2) throw bad_fixture(key, "expected 'menu dominant'");
        d.star_pairs.push_back({tokens[0], tokens[1]});
    }

    for (const auto& [key, value] : fixtures.fosd) {
        auto tokens = split_ws(value);
        if (tokens.size() != 1) throw bad_fixture(key, "expected a menu id");
        d.fosd_menus.push_back(tokens[0]);
    }

    d.validate();
    return d;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The canonical design, embedded so the library needs no data directory at
// runtime. data/design/ ships the same tables for external tooling and the
// loader round-trip test keeps the two in sync.
const char kBuiltinLotteries[] = R"(lottery_id,prize,prob_num,prob_den
A1,0,10,100
A1,10,60,100
A1,20,30,100
A2,0,20,100
A2,10,50,100
A2,20,30,100
B1,0,25,100
B1,10,30,100
B1,20,45,100
B2,0,25,100
B2,9,40,100
B2,24,35,100
C1,0,625,1000
C1,10,150,1000
C1,20,225,1000
C2,0,625,1000
C2,9,200,1000
C2,24,175,1000
D,0,15,100
D,10,50,100
D,20,35,100
R,0,1,1
)";

const char kBuiltinMenus[] = R"(menu_id,lottery_id
1,A1
1,A2
2,B1
2,B2
3,C1
3,C2
4,B1
4,D
5,B2
5,D
6,A1
6,B1
7,A1
7,B2
8,A1
8,D
9,A2
9,D
10,A1
10,A2
10,C1
11,A1
11,A2
11,C2
12,A1
12,B1
12,B2
13,B1
13,B2
13,D
14,A1
14,B1
14,B2
14,D
15,A1
15,A2
15,C1
15,C2
)";

const char kBuiltinFixtures[] = R"(rounds_expected = 5

[labels]
1 = "fosd A1"
2 = "none"
3 = "none"
4 = "sosd D"
5 = "none"
6 = "sosd A1"
7 = "none"
8 = "sosd A1"
9 = "fosd D"
10 = "fosd A1"
11 = "fosd A1 near"
12 = "sosd A1 near"
13 = "sosd D near"
14 = "sosd A1 near"
15 = "fosd A1 near"

[triples]
t1 = "A1 D A2 : 8 9 1"
t2 = "A1 D B2 : 8 5 7"
t3 = "A1 B1 B2 : 6 2 7"
t4 = "A1 D B1 : 8 4 6"
t5 = "D B2 B1 : 5 2 4"

[independence]
i1 = "2 3 R 1/2"

[star]
s1 = "4 D"
s2 = "6 A1"
s3 = "8 A1"

[fosd_choice]
f1 = "1"
f2 = "9"
)";

} // namespace

const ExperimentDesign& built_in_design() {
    static const ExperimentDesign design = assemble_design(
        parse_csv(kBuiltinLotteries, "<built-in lotteries>"),
        parse_csv(kBuiltinMenus, "<built-in menus>"),
        parse_fixtures(kBuiltinFixtures, "<built-in fixtures>"), "<built-in fixtures>");
    return design;
}

ExperimentDesign load_design(const std::string& lotteries_csv, const std::string& menus_csv,
                             const std::string& fixtures_cfg) {
    return assemble_design(read_csv(lotteries_csv), read_csv(menus_csv),
                           parse_fixtures(read_text_file(fixtures_cfg), fixtures_cfg),
                           fixtures_cfg);
}

std::vector<TaxonomyEntry> taxonomy_comparison(const ExperimentDesign& design) {
    std::vector<TaxonomyEntry> out;
    for (std::size_t i = 0; i < design.menus.size(); ++i) {
        const Menu& m = design.menus[i];
        TaxonomyEntry entry;
        entry.menu = m.id;
        auto it = design.declared.find(m.id);
        if (it != design.declared.end()) entry.declared = it->second;
        entry.computed = design.computed_label(static_cast<int>(i));

        const DeclaredLabel& dec = entry.declared;
        if (dec.kind == DominanceKind::None) {
            // Agreement means no member dominates every other at either order.
            entry.agree = entry.computed.kind == DominanceKind::None;
        } else {
            // Does the named lottery properly dominate every other member at
            // the declared order?
            int named = design.require_lottery(dec.dominant);
            bool proper = true;
            for (int other : m.members) {
                if (other == named) continue;
                DominanceRelation rel =
                    dec.kind == DominanceKind::Fosd
                        ? check_fosd(design.lotteries[named], design.lotteries[other])
                        : check_sosd(design.lotteries[named], design.lotteries[other]);
                if (rel.kind != dec.kind || rel.dominant != dec.dominant) {
                    proper = false;
                    break;
                }
            }
            entry.agree = dec.near ? !proper : proper;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace revpref
