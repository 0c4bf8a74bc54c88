#include <doctest.h>

#include "tg/nullsets.hpp"
#include "tg/parser.hpp"

using namespace tg;

namespace {

Term V(const std::string& n) { return Term::variable(n); }

std::vector<Rule> rules_of(const std::string& text) { return parse_program(text).rules; }

const std::string kSigma1 = "t(X,Y) -> exists Z: t(Y,Z), u(Y,Z).\n"
                            "t(X,Y), u(Y,Z) -> t(Y,Z), u(X,Y).\n";
const std::string kSigma2 = "t(X,Y) -> exists Z: t(Y,Z), u(Y,Z).\n"
                            "t(X,Y), u(Y,Z) -> t(X,Z), u(X,Y).\n";
const std::string kSigma3 = "t(X,Y) -> exists Z: t(Y,Z).\n"
                            "t(X,Y) -> s(X), s(Y).\n"
                            "t(X1,V), s(V), t(W,Z1) -> u(X1,V,W,Z1).\n"
                            "u(X2,Y,Y,Z2) -> v(X2,Z2).\n"
                            "v(X3,Z3) -> t(X3,Z3).\n";

int32_t rel_id(const std::string& name) {
    return Atom(name, {}).rel;
}

}  // namespace

TEST_CASE("null-set fixpoint for the two-rule transitive program") {
    auto rules = rules_of(kSigma1);
    NullSetTable t = compute_null_sets(rules);
    NullSymbol nz{0, V("Z")};
    // Every position of t and u carries exactly the null of rule 1's Z.
    for (const std::string rel : {"t", "u"}) {
        for (int32_t pos = 0; pos < 2; ++pos) {
            CHECK(t.at_position(rel_id(rel), pos) == std::set<NullSymbol>{nz});
        }
    }
    // Head occurrence t(Y,Z) of rule 1: Z's position gets {n_Z} outright; Y's
    // position is the intersection of Y's body-position unions, again {n_Z}.
    OccKey zpos{0, true, 0, 1};
    CHECK(t.entries.at(zpos) == std::set<NullSymbol>{nz});
    OccKey ypos{0, true, 0, 0};
    CHECK(t.entries.at(ypos) == std::set<NullSymbol>{nz});
}

TEST_CASE("null sets of a non-recursive program are empty") {
    auto rules = rules_of("t(X,Y) -> s(X).\ns(X) -> p(X,X).\n");
    NullSetTable t = compute_null_sets(rules);
    for (const auto& [k, v] : t.entries) CHECK(v.empty());
}

TEST_CASE("head constants carry no nulls") {
    auto rules = rules_of("t(c1,c2).\nt(X,Y) -> exists Z: t(Z,c1).\n");
    NullSetTable t = compute_null_sets(rules);
    OccKey cpos{0, true, 0, 1};
    CHECK(t.entries.at(cpos).empty());
    OccKey zpos{0, true, 0, 0};
    CHECK(t.entries.at(zpos) == std::set<NullSymbol>{NullSymbol{0, V("Z")}});
}

TEST_CASE("dependency graph of the transitive programs is a self-loop") {
    for (const std::string& text : {kSigma1, kSigma2}) {
        auto rules = rules_of(text);
        NullSetTable t = compute_null_sets(rules);
        ExistentialDepGraph g = build_dep_graph(rules, t);
        REQUIRE(g.nodes.size() == 1);
        CHECK(g.nodes[0] == NullSymbol{0, V("Z")});
        CHECK(g.edges.count({0, 0}) == 1);
        CHECK(cyc_null(g) == std::set<NullSymbol>{NullSymbol{0, V("Z")}});
    }
}

TEST_CASE("cyc-null is empty without cycles but follows reachability with them") {
    ExistentialDepGraph g;
    g.nodes = {NullSymbol{0, V("A")}, NullSymbol{1, V("B")}, NullSymbol{2, V("C")},
               NullSymbol{3, V("D")}};
    g.edges = {{0, 1}, {1, 2}};
    CHECK(cyc_null(g).empty());
    g.edges.insert({1, 0});  // 0 <-> 1 cycle; 2 reachable; 3 isolated
    auto cyc = cyc_null(g);
    CHECK(cyc == std::set<NullSymbol>{g.nodes[0], g.nodes[1], g.nodes[2]});
}

TEST_CASE("five-rule program: every position carries the one cyclic null") {
    auto rules = rules_of(kSigma3);
    AffectedAnalysis a = analyze_affected(rules);
    NullSymbol nz{0, V("Z")};
    CHECK(a.cyc == std::set<NullSymbol>{nz});
    for (const std::string rel : {"t", "s", "u", "v"}) {
        size_t arity = rel == "u" ? 4 : (rel == "s" ? 1 : 2);
        for (size_t pos = 0; pos < arity; ++pos) {
            CHECK(a.table.at_position(rel_id(rel), static_cast<int32_t>(pos)) ==
                  std::set<NullSymbol>{nz});
        }
    }
}

TEST_CASE("var-hat collects variables whose every occurrence can host a cyclic null") {
    auto rules = rules_of(kSigma2);
    AffectedAnalysis a = analyze_affected(rules);
    std::vector<Atom> body = {Atom("t", {V("X"), V("Y")}), Atom("u", {V("Y"), V("Z")})};
    CHECK(var_hat(a, body) == std::set<Term>{V("X"), V("Y"), V("Z")});
    CHECK(var_hat(rules, body) == var_hat(a, body));
}

TEST_CASE("var-hat drops a variable once one occurrence is null-free") {
    // p's positions never host nulls, so X leaves var-hat despite t(X,Y).
    auto rules = rules_of("t(X,Y) -> exists Z: t(Y,Z).\np(c1,c2).\n");
    AffectedAnalysis a = analyze_affected(rules);
    std::vector<Atom> body = {Atom("t", {V("X"), V("Y")}), Atom("p", {V("X"), V("W")})};
    CHECK(var_hat(a, body) == std::set<Term>{V("Y")});
}

TEST_CASE("link variables are shared var-hat members") {
    auto rules = rules_of(kSigma2);
    AffectedAnalysis a = analyze_affected(rules);
    Atom b1("t", {V("X"), V("Y")});
    Atom b2("u", {V("Y"), V("Z")});
    std::vector<Atom> body = {b1, b2};
    CHECK(link_vars(a, body, b1, b2) == std::set<Term>{V("Y")});
    CHECK(link_vars(a, body, b1, b1) == std::set<Term>{V("X"), V("Y")});
    CHECK_THROWS_AS(link_vars(a, body, b1, Atom("v", {V("Q")})), std::invalid_argument);
}

TEST_CASE("null-set fixpoint is stable under one more iteration") {
    for (const std::string& text : {kSigma1, kSigma2, kSigma3}) {
        auto rules = rules_of(text);
        NullSetTable once = compute_null_sets(rules);
        NullSetTable twice = compute_null_sets(rules);
        CHECK(once.entries == twice.entries);
        CHECK(once.position_union == twice.position_union);
    }
}
