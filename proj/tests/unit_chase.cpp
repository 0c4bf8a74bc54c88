#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "tg/chase.hpp"
#include "tg/parser.hpp"
#include "tg/unify.hpp"

using namespace tg;

namespace {

Term C(const std::string& n) { return Term::constant(n); }
Term V(const std::string& n) { return Term::variable(n); }
Term N(int32_t i) { return Term::null(i); }

Atom ga(const std::string& rel, std::vector<Term> ts) { return Atom(rel, std::move(ts)); }

const std::string kSigma1 = "t(X,Y) -> exists Z: t(Y,Z), u(Y,Z).\n"
                            "t(X,Y), u(Y,Z) -> t(Y,Z), u(X,Y).\n";
const std::string kSigma2 = "t(X,Y) -> exists Z: t(Y,Z), u(Y,Z).\n"
                            "t(X,Y), u(Y,Z) -> t(X,Z), u(X,Y).\n";

std::vector<Atom> database2() {
    return {ga("t", {C("c1"), C("c2")}), ga("u", {C("c1"), C("c2")})};
}

Query query_of(const std::string& text) { return parse_program(text).queries.at(0); }

/// Hand-built instance over ground atoms, all at level 0.
ChaseInstance instance_of(const std::vector<Atom>& atoms) {
    ChaseInstance I;
    for (const Atom& a : atoms) {
        I.atoms.emplace(a, ChaseAtom{a, 0, Provenance{}});
        for (const Term& t : a.args) {
            if (t.is_null()) I.next_null = std::max(I.next_null, t.id + 1);
        }
    }
    return I;
}

void check_equal_instances(const ChaseInstance& a, const ChaseInstance& b) {
    REQUIRE(a.size() == b.size());
    CHECK(a.next_null == b.next_null);
    auto it = b.atoms.begin();
    for (const auto& [atom, rec] : a.atoms) {
        CHECK(atom == it->first);
        CHECK(rec.level == it->second.level);
        ++it;
    }
}

}  // namespace

TEST_CASE("chase level zero is the database") {
    std::vector<Rule> rules = parse_program(kSigma2).rules;
    ChaseInstance I = chase_to_level(database2(), rules, 0);
    CHECK(I.size() == 2);
    CHECK(I.next_null == 1);
    CHECK(I.depth == 0);
    CHECK_FALSE(I.saturated);
    for (const auto& [atom, rec] : I.atoms) {
        CHECK(rec.level == 0);
        CHECK(rec.provenance.from_database());
    }
}

TEST_CASE("a chase step fires its trigger exactly once") {
    std::vector<Rule> rules = parse_program(kSigma1).rules;
    ChaseInstance base = instance_of(database2());

    Substitution eta;
    eta.bind(V("X"), C("c1"));
    eta.bind(V("Y"), C("c2"));
    ChaseInstance once = chase_step(base, rules[0], eta);
    CHECK(once.size() == 4);
    CHECK(once.next_null == 2);
    CHECK(once.contains(ga("t", {C("c2"), N(1)})));
    CHECK(once.contains(ga("u", {C("c2"), N(1)})));
    CHECK(once.atoms.at(ga("t", {C("c2"), N(1)})).level == 1);
    CHECK(once.atoms.at(ga("t", {C("c2"), N(1)})).provenance.rule_id == "r1");

    ChaseInstance twice = chase_step(once, rules[0], eta);
    CHECK(twice.size() == once.size());
    CHECK(twice.next_null == once.next_null);

    Substitution partial;
    partial.bind(V("X"), C("c1"));
    CHECK_THROWS_AS(chase_step(base, rules[0], partial), std::invalid_argument);

    Substitution outside;
    outside.bind(V("X"), C("c2"));
    outside.bind(V("Y"), C("c1"));
    CHECK_THROWS_AS(chase_step(base, rules[0], outside), std::invalid_argument);

    // A null-free head adds atoms without consuming the counter.
    std::vector<Rule> flip = parse_program("t(X,Y) -> t(Y,X).\n").rules;
    ChaseInstance flipped = chase_step(base, flip[0], eta);
    CHECK(flipped.contains(ga("t", {C("c2"), C("c1")})));
    CHECK(flipped.next_null == 1);
}

TEST_CASE("chase prefix of the transitive program is reproduced exactly") {
    std::vector<Rule> rules = parse_program(kSigma2).rules;
    ChaseInstance I3 = chase_to_level(database2(), rules, 3);

    // Frozen level-3 prefix: atom, level, deriving rule (empty = database).
    const std::vector<std::tuple<Atom, int, std::string>> expected = {
        {ga("t", {C("c1"), C("c2")}), 0, ""},   {ga("t", {C("c1"), N(1)}), 2, "r2"},
        {ga("t", {C("c1"), N(2)}), 3, "r2"},    {ga("t", {C("c2"), N(1)}), 1, "r1"},
        {ga("t", {C("c2"), N(2)}), 3, "r2"},    {ga("t", {N(1), N(2)}), 2, "r1"},
        {ga("t", {N(1), N(4)}), 3, "r1"},       {ga("t", {N(2), N(3)}), 3, "r1"},
        {ga("u", {C("c1"), C("c2")}), 0, ""},   {ga("u", {C("c1"), N(1)}), 3, "r2"},
        {ga("u", {C("c2"), N(1)}), 1, "r1"},    {ga("u", {N(1), N(2)}), 2, "r1"},
        {ga("u", {N(1), N(4)}), 3, "r1"},       {ga("u", {N(2), N(3)}), 3, "r1"},
    };
    REQUIRE(I3.size() == expected.size());
    CHECK(I3.next_null == 5);
    for (const auto& [atom, level, rule] : expected) {
        REQUIRE(I3.contains(atom));
        CHECK(I3.atoms.at(atom).level == level);
        CHECK(I3.atoms.at(atom).provenance.rule_id == rule);
        CHECK(I3.atoms.at(atom).provenance.from_database() == rule.empty());
    }

    // One level deeper the two chain ends n1 and n3 land in a common atom.
    ChaseInstance I4 = chase_to_level(database2(), rules, 4);
    REQUIRE(I4.contains(ga("t", {N(1), N(3)})));
    CHECK(I4.atoms.at(ga("t", {N(1), N(3)})).level == 4);
    CHECK(I4.atoms.at(ga("t", {N(1), N(3)})).provenance.rule_id == "r2");
    CHECK(I4.size() == 29);
    CHECK(I4.next_null == 9);

    // Null indices in use are exactly 1..next_null-1.
    std::set<int32_t> used;
    for (const auto& [atom, rec] : I4.atoms) {
        for (const Term& t : atom.args) {
            if (t.is_null()) used.insert(t.id);
        }
    }
    REQUIRE(used.size() == 8);
    CHECK(*used.begin() == 1);
    CHECK(*used.rbegin() == 8);

    // Growth of the prefix, frozen per level.
    const std::vector<std::pair<size_t, int32_t>> growth = {
        {2, 1}, {4, 2}, {7, 3}, {14, 5}, {29, 9}, {65, 18}, {157, 40}, {406, 97}, {1116, 254}};
    ChaseInstance previous;
    for (int k = 0; k <= 8; ++k) {
        ChaseInstance I = chase_to_level(database2(), rules, k);
        CHECK(I.size() == growth[static_cast<size_t>(k)].first);
        CHECK(I.next_null == growth[static_cast<size_t>(k)].second);
        CHECK_FALSE(I.saturated);
        if (k > 0) {
            for (const auto& [atom, rec] : previous.atoms) {
                REQUIRE(I.contains(atom));
                CHECK(I.atoms.at(atom).level == rec.level);
            }
        }
        previous = std::move(I);
    }
}

TEST_CASE("chase of the chain program stays a chain") {
    std::vector<Rule> rules = parse_program(kSigma1).rules;
    ChaseInstance I = chase_to_level(database2(), rules, 8);
    CHECK(I.size() == 18);
    CHECK(I.next_null == 9);
    CHECK(I.contains(ga("t", {C("c1"), C("c2")})));
    CHECK(I.contains(ga("t", {C("c2"), N(1)})));
    for (int i = 1; i < 8; ++i) {
        REQUIRE(I.contains(ga("t", {N(i), N(i + 1)})));
        REQUIRE(I.contains(ga("u", {N(i), N(i + 1)})));
        CHECK(I.atoms.at(ga("t", {N(i), N(i + 1)})).level == i + 1);
    }
    std::map<int32_t, int> birth = null_birth_levels(I);
    REQUIRE(birth.size() == 8);
    for (const auto& [index, level] : birth) CHECK(level == index);
}

TEST_CASE("rules without existentials saturate to a null-free closure") {
    std::vector<Rule> rules = parse_program("t(X,Y) -> t(Y,X).\nt(X,Y), t(Y,Z) -> t(X,Z).\n").rules;
    ChaseInstance I = chase_to_level({ga("t", {C("c1"), C("c2")})}, rules, 8);
    CHECK(I.saturated);
    CHECK(I.next_null == 1);
    REQUIRE(I.size() == 4);
    CHECK(I.atoms.at(ga("t", {C("c1"), C("c1")})).level == 2);
    CHECK(I.atoms.at(ga("t", {C("c1"), C("c2")})).level == 0);
    CHECK(I.atoms.at(ga("t", {C("c2"), C("c1")})).level == 1);
    CHECK(I.atoms.at(ga("t", {C("c2"), C("c2")})).level == 2);
}

TEST_CASE("null interchangeability on small hand-built instances") {
    std::vector<Atom> pattern = {ga("t", {V("U"), V("V")})};

    ChaseInstance merged = instance_of({ga("t", {N(1), N(2)}), ga("t", {N(3), N(3)})});
    CHECK(interchangeable(N(1), N(2), pattern, merged));
    CHECK(interchangeable(N(2), N(1), pattern, merged));

    ChaseInstance bare = instance_of({ga("t", {N(1), N(2)})});
    CHECK_FALSE(interchangeable(N(1), N(2), pattern, bare));
    CHECK_FALSE(interchangeable(N(2), N(1), pattern, bare));

    // Nulls that never share an embedding pass vacuously; a null paired
    // with itself always passes.
    CHECK(interchangeable(N(1), N(3), pattern, bare));
    CHECK(interchangeable(N(1), N(1), pattern, bare));

    CHECK_THROWS_AS(interchangeable(C("c1"), N(1), pattern, bare), std::invalid_argument);
}

TEST_CASE("interchange horizon of the chain program") {
    std::vector<Rule> rules = parse_program(kSigma1).rules;
    ChaseInstance I = chase_to_level(database2(), rules, 8);

    // The query body t(X,X) never embeds into the chain, so the first
    // candidate level passes vacuously.
    std::vector<std::vector<Atom>> query_only = {query_of("?- t(X,X).\n").body};
    auto narrow = interchange_horizon(I, query_only);
    REQUIRE(narrow.has_value());
    CHECK(*narrow == 1);

    // With every rule body included, nulls within two links of the horizon
    // see a non-repeating window, pushing the first passing level to 3.
    std::vector<std::vector<Atom>> full = query_only;
    for (const Rule& r : rules) full.push_back(r.body);
    auto wide = interchange_horizon(I, full);
    REQUIRE(wide.has_value());
    CHECK(*wide == 3);

    // A five-level prefix leaves only candidates 1 and 2, which both fail.
    ChaseInstance shallow = chase_to_level(database2(), rules, 5);
    CHECK_FALSE(interchange_horizon(shallow, full).has_value());
}

TEST_CASE("query answering walks the ladder of certainty") {
    std::vector<Rule> sigma1 = parse_program(kSigma1).rules;
    std::vector<Rule> sigma2 = parse_program(kSigma2).rules;
    Query q2 = query_of("?- t(X,X).\n");

    BcqAnswer no_unc = answer_bcq(database2(), sigma2, q2, 6, false);
    CHECK(no_unc.status == BcqAnswer::Status::No);
    CHECK_FALSE(no_unc.certified);
    CHECK(no_unc.depth == 6);

    BcqAnswer direct = answer_bcq({ga("t", {C("c1"), C("c2")})}, {}, query_of("?- t(X,Y).\n"), 8,
                                  false);
    REQUIRE(direct.status == BcqAnswer::Status::Yes);
    REQUIRE(direct.hom.has_value());
    CHECK((*direct.hom)(V("X")) == C("c1"));
    CHECK((*direct.hom)(V("Y")) == C("c2"));
    CHECK(direct.depth == 0);

    BcqAnswer one_step = answer_bcq(database2(), sigma2, query_of("?- t(c2,Y).\n"), 8, false);
    REQUIRE(one_step.status == BcqAnswer::Status::Yes);
    REQUIRE(one_step.hom.has_value());
    CHECK((*one_step.hom)(V("Y")) == N(1));
    CHECK(one_step.depth == 1);

    // The guarded chain program plus auto mode certifies its No.
    BcqAnswer certified = answer_bcq(database2(), sigma1, q2, 8, true);
    CHECK(certified.status == BcqAnswer::Status::No);
    CHECK(certified.certified);
    CHECK(certified.note == "no match; nulls born after level 3 only repeat earlier structure");

    BcqAnswer plain = answer_bcq(database2(), sigma1, q2, 8, false);
    CHECK(plain.status == BcqAnswer::Status::No);
    CHECK_FALSE(plain.certified);

    // Saturation certifies with no help from auto mode.
    std::vector<Rule> datalog =
        parse_program("t(X,Y) -> t(Y,X).\nt(X,Y), t(Y,Z) -> t(X,Z).\n").rules;
    BcqAnswer closed_yes =
        answer_bcq({ga("t", {C("c1"), C("c2")})}, datalog, query_of("?- t(c2,c2).\n"), 8, false);
    CHECK(closed_yes.status == BcqAnswer::Status::Yes);
    BcqAnswer closed_no =
        answer_bcq({ga("t", {C("c1"), C("c2")})}, datalog, query_of("?- t(c1,c3).\n"), 8, false);
    CHECK(closed_no.status == BcqAnswer::Status::No);
    CHECK(closed_no.certified);
    CHECK(closed_no.note == "chase saturated with no match");
}

TEST_CASE("yes answers survive an independent recheck") {
    std::vector<Rule> rules = parse_program(kSigma2).rules;
    ChaseInstance I = chase_to_level(database2(), rules, 4);
    for (const char* text : {"?- t(c2,Y).\n", "?- t(X,Y), u(Y,Z).\n", "?- u(c1,c2).\n"}) {
        Query q = query_of(text);
        BcqAnswer ans = answer_bcq(database2(), rules, q, 4, false);
        REQUIRE(ans.status == BcqAnswer::Status::Yes);
        REQUIRE(ans.hom.has_value());
        for (const Atom& body_atom : q.body) {
            Atom img = apply_substitution(body_atom, *ans.hom);
            CHECK(vars_of(img).empty());
            CHECK(I.contains(img));
        }
    }
}

TEST_CASE("resource budgets stop the chase deterministically") {
    std::vector<Rule> rules = parse_program(kSigma2).rules;
    ChaseBudgets tiny{20, 1000000};

    CHECK_THROWS_AS(chase_to_level(database2(), rules, 8, tiny), ResourceLimitError);

    ChaseRun first = chase_to_level_capped(database2(), rules, 8, tiny);
    CHECK(first.hit_cap);
    CHECK(first.instance.size() == 22);
    CHECK(first.instance.depth == 4);
    ChaseRun second = chase_to_level_capped(database2(), rules, 8, tiny);
    check_equal_instances(first.instance, second.instance);

    BcqAnswer capped = answer_bcq(database2(), rules, query_of("?- t(X,X).\n"), 8, false, tiny);
    CHECK(capped.status == BcqAnswer::Status::Unknown);
    CHECK(capped.note == "chase exceeded the atom budget before the depth limit");

    // A match that appears before the cap trips is still reported.
    BcqAnswer early = answer_bcq(database2(), rules, query_of("?- t(c2,Y).\n"), 8, false, tiny);
    CHECK(early.status == BcqAnswer::Status::Yes);
}

TEST_CASE("chase runs are reproducible null for null") {
    std::vector<Rule> rules = parse_program(kSigma2).rules;
    ChaseInstance a = chase_to_level(database2(), rules, 5);
    ChaseInstance b = chase_to_level(database2(), rules, 5);
    check_equal_instances(a, b);
    for (const auto& [atom, rec] : a.atoms) {
        CHECK(b.atoms.at(atom).provenance.rule_id == rec.provenance.rule_id);
        CHECK(b.atoms.at(atom).provenance.assignment == rec.provenance.assignment);
    }
}
