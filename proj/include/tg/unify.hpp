#pragma once

#include <optional>

#include "tg/model.hpp"

namespace tg {

Atom apply_substitution(const Atom& a, const Substitution& theta);

/// Applies theta to every atom; the result is a normalized atom set
/// (images that collide collapse under set semantics).
std::vector<Atom> apply_substitution(const std::vector<Atom>& atoms, const Substitution& theta);

/// All unifiers theta with S1*theta = S2*theta as atom sets. Every covering
/// pairing of the two sets is tried; each consistent pairing contributes the
/// most general unifier of its equations. Results are deduplicated.
std::vector<Substitution> enumerate_set_unifiers(const std::vector<Atom>& s1,
                                                 const std::vector<Atom>& s2);

/// Most general unifier of two atom sets, or nullopt when none exists.
/// When several pairings unify, the canonically smallest unifier is returned.
std::optional<Substitution> mgu(const std::vector<Atom>& s1, const std::vector<Atom>& s2);

/// True iff consecutive atoms of the tuple share at least one term.
/// The empty tuple is rejected.
bool is_connected(const std::vector<Atom>& tuple);

/// One-way match: extends binding so that pattern*binding = target, binding
/// only variables of the pattern. Returns false on clash.
bool match_atom(const Atom& pattern, const Atom& target, Substitution& binding);

}  // namespace tg
