#include <doctest.h>

#include "tg/model.hpp"
#include "tg/unify.hpp"

using namespace tg;

namespace {

Term V(const std::string& n) { return Term::variable(n); }
Term C(const std::string& n) { return Term::constant(n); }

}  // namespace

TEST_CASE("terms order by kind then name") {
    CHECK(C("zz") < Term::null(5));
    CHECK(Term::null(5) < V("Aaa"));
    CHECK(C("a") < C("b"));
    CHECK(Term::null(2) < Term::null(10));
    CHECK(V("X") < V("Y"));
    CHECK(V("X") == V("X"));
}

TEST_CASE("null text uses the _:n prefix") {
    CHECK(Term::null(3).text() == "_:n3");
    CHECK(C("c1").text() == "c1");
    CHECK(V("X").text() == "X");
}

TEST_CASE("atom text and ordering") {
    Atom a("t", {V("X"), V("Y")});
    CHECK(a.text() == "t(X,Y)");
    Atom b("t", {V("X")});
    CHECK(b < a);  // same relation, smaller arity first
    Atom c("s", {V("Z")});
    CHECK(c < a);  // relation name first
    Atom z("p", {});
    CHECK(z.text() == "p");
}

TEST_CASE("substitution is identity outside its domain") {
    Substitution s;
    s.bind(V("X"), C("c"));
    CHECK(s(V("X")) == C("c"));
    CHECK(s(V("Y")) == V("Y"));
    CHECK(s(C("d")) == C("d"));
    CHECK_THROWS_AS(s.bind(C("c"), V("X")), std::invalid_argument);
}

TEST_CASE("composition applies the inner substitution first") {
    Substitution t1, t2;
    t1.bind(V("X"), V("Y"));
    t2.bind(V("Y"), C("c"));
    Substitution both = compose(t2, t1);
    CHECK(both(V("X")) == C("c"));
    CHECK(both(V("Y")) == C("c"));
}

TEST_CASE("restriction keeps only the requested variables") {
    Substitution s;
    s.bind(V("X"), C("c"));
    s.bind(V("Y"), C("d"));
    Substitution r = restrict_to(s, {V("X")});
    CHECK(r.contains(V("X")));
    CHECK_FALSE(r.contains(V("Y")));
}

TEST_CASE("apply_substitution on an atom set collapses collisions") {
    Substitution s;
    s.bind(V("X"), V("Y"));
    std::vector<Atom> atoms = {Atom("t", {V("X")}), Atom("t", {V("Y")})};
    auto image = apply_substitution(atoms, s);
    REQUIRE(image.size() == 1);
    CHECK(image[0] == Atom("t", {V("Y")}));
}

TEST_CASE("mgu of single atoms") {
    std::vector<Atom> s1 = {Atom("u", {V("X1"), V("V"), V("W"), V("Z1")})};
    std::vector<Atom> s2 = {Atom("u", {V("X2"), V("Y"), V("Y"), V("Z2")})};
    auto u = mgu(s1, s2);
    REQUIRE(u.has_value());
    auto im1 = apply_substitution(s1, *u);
    auto im2 = apply_substitution(s2, *u);
    CHECK(im1 == im2);
    // W and Y both collapse onto V (the class representative is the
    // name-least variable), X2 onto X1, Z2 onto Z1.
    CHECK((*u)(V("W")) == V("V"));
    CHECK((*u)(V("Y")) == V("V"));
    CHECK((*u)(V("X2")) == V("X1"));
    CHECK((*u)(V("Z2")) == V("Z1"));
}

TEST_CASE("mgu fails on constant clash and relation mismatch") {
    CHECK_FALSE(mgu({Atom("t", {C("a")})}, {Atom("t", {C("b")})}).has_value());
    CHECK_FALSE(mgu({Atom("t", {V("X")})}, {Atom("s", {V("X")})}).has_value());
    CHECK_FALSE(mgu({Atom("t", {V("X")})}, {Atom("t", {V("X"), V("Y")})}).has_value());
}

TEST_CASE("mgu is symmetric up to the induced atom sets") {
    std::vector<Atom> s1 = {Atom("t", {V("X"), V("Y")}), Atom("u", {V("Y"), C("c")})};
    std::vector<Atom> s2 = {Atom("t", {V("A"), V("B")}), Atom("u", {V("B"), C("c")})};
    auto u12 = mgu(s1, s2);
    auto u21 = mgu(s2, s1);
    REQUIRE(u12.has_value());
    REQUIRE(u21.has_value());
    CHECK(apply_substitution(s1, *u12) == apply_substitution(s2, *u12));
    CHECK(apply_substitution(s2, *u21) == apply_substitution(s1, *u21));
}

TEST_CASE("set unifiers cover both directions of a two-to-one overlap") {
    // t(X,Y) against {t(A,A)}: single pairing, X and Y both collapse onto A's class.
    auto us = enumerate_set_unifiers({Atom("t", {V("X"), V("Y")})},
                                     {Atom("t", {V("A"), V("A")})});
    REQUIRE(us.size() == 1);
    auto im = apply_substitution(std::vector<Atom>{Atom("t", {V("X"), V("Y")})}, us[0]);
    REQUIRE(im.size() == 1);
    CHECK(im[0].args[0] == im[0].args[1]);
}

TEST_CASE("set unifiers require every atom on both sides to be matched") {
    // {t(X)} vs {t(a), t(b)} cannot unify as sets: X would need to be both a and b.
    auto us = enumerate_set_unifiers({Atom("t", {V("X")})},
                                     {Atom("t", {C("a")}), Atom("t", {C("b")})});
    CHECK(us.empty());
    // {t(X), t(Y)} vs {t(a)} unifies by sending both X and Y to a.
    auto vs = enumerate_set_unifiers({Atom("t", {V("X")}), Atom("t", {V("Y")})},
                                     {Atom("t", {C("a")})});
    REQUIRE(vs.size() == 1);
    CHECK(vs[0](V("X")) == C("a"));
    CHECK(vs[0](V("Y")) == C("a"));
}

TEST_CASE("is_connected checks consecutive term sharing") {
    Atom t1("t", {V("X"), V("Y")});
    Atom t2("u", {V("Y"), V("Z")});
    Atom t3("v", {V("W")});
    CHECK(is_connected({t1, t2}));
    CHECK_FALSE(is_connected({t1, t3}));
    CHECK(is_connected({t1}));
    CHECK_THROWS_AS(is_connected({}), std::invalid_argument);
}

TEST_CASE("match_atom binds pattern variables only") {
    Substitution b;
    CHECK(match_atom(Atom("t", {V("X"), V("X")}), Atom("t", {C("a"), C("a")}), b));
    CHECK(b(V("X")) == C("a"));
    Substitution b2;
    CHECK_FALSE(match_atom(Atom("t", {V("X"), V("X")}), Atom("t", {C("a"), C("b")}), b2));
    Substitution b3;
    CHECK_FALSE(match_atom(Atom("t", {C("a")}), Atom("t", {C("b")}), b3));
}

TEST_CASE("rule existentials are head variables absent from the body") {
    Rule r;
    r.body = {Atom("t", {V("X"), V("Y")})};
    r.head = {Atom("t", {V("Y"), V("Z")}), Atom("u", {V("Y"), V("Z")})};
    r.compute_existentials();
    CHECK(r.existentials == std::set<Term>{V("Z")});
}

TEST_CASE("normalize_atom_set sorts and removes duplicates") {
    Atom a("t", {V("X")});
    Atom b("s", {V("X")});
    auto n = normalize_atom_set({a, b, a});
    REQUIRE(n.size() == 2);
    CHECK(n[0] == b);
    CHECK(n[1] == a);
}
