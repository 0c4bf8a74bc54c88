#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tg/extension.hpp"
#include "tg/model.hpp"
#include "tg/nullsets.hpp"

namespace tg {

/// How the head atom c of a track closes its cycle: either c itself is the
/// re-entry atom a', or another pair carries the step (a fresh copy of that
/// pair, under the assignment below, has c in its body image and a' in its
/// head image).
struct CycleWitness {
    bool direct = true;

    /// The fields below are set only when !direct.
    std::string via_pair_key;
    Substitution via_renaming;    ///< fresh renaming applied to the carrying pair
    Substitution via_assignment;  ///< maps the renamed copy onto c and a_prime
    Atom body_image;              ///< renamed body atom the assignment sends to c
    Atom head_image;              ///< renamed head atom the assignment sends to a_prime
};

/// A recursion track: inside one pair <B, H>, the head atom c re-enters a
/// body atom a (up to the variable map theta) while a chain of body atoms
/// links a to a second atom b. The variables x and z are the two ends the
/// track combines into c.
struct Rtc {
    ExtensionPair pair;

    Atom a;
    Atom b;
    Atom c;
    Atom a_prime;
    Term x;
    Term z;

    /// Variable map on var(a) with a . theta = a_prime.
    Substitution theta;

    CycleWitness cycle;

    /// Chain d_1 .. d_m of distinct body atoms, d_1 = a and d_m = b.
    std::vector<Atom> path;
    /// links[i] is a linking variable shared by path[i] and path[i+1].
    std::vector<Term> links;
    /// A linking variable outside {x, z} passing the markup side condition.
    Term y_prime;
    /// Step index i with y_prime in link_vars(B, path[i], path[i+1]).
    size_t y_prime_step = 0;

    /// True when some atom of B contains both x and z.
    bool guarded = false;

    /// Ordering and dedup key: pair key plus a renaming-invariant rendering
    /// of (a, b, c, a_prime, x, z).
    std::string key;
};

struct Verdict {
    enum class Outcome { Member, NonMember, Unknown };

    Outcome outcome = Outcome::Unknown;
    std::optional<Rtc> witness;  ///< set for NonMember
    std::string reason;          ///< set for Unknown

    size_t pairs_explored = 0;
    int rounds = 0;
    bool saturated = false;
};

/// Enumerates every recursion track over the given pairs, guarded or not,
/// deduplicated up to renaming and sorted by key. Each track carries the
/// smallest chain and witness variable that satisfy the side conditions.
std::vector<Rtc> find_rtcs(const std::vector<Rule>& rules,
                           const std::vector<ExtensionPair>& pairs);

/// Re-checks every field and side condition of a track from scratch; the
/// cycle of an indirect track is re-searched over the given pairs rather
/// than trusted from the record.
bool validate_rtc(const std::vector<Rule>& rules, const std::vector<ExtensionPair>& pairs,
                  const Rtc& rtc);

/// Decides membership in the triangularly guarded class. Member requires a
/// saturated extension with every track guarded; an unguarded track anywhere
/// is a definite NonMember, reported with the smallest witness found. When
/// budgets stop the extension early and no unguarded track was seen, the
/// answer is Unknown.
Verdict is_triangularly_guarded(const std::vector<Rule>& rules, const ExtensionBudgets& budgets);
Verdict is_triangularly_guarded(const std::vector<Rule>& rules);

}  // namespace tg
