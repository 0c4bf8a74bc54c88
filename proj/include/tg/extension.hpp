#pragma once

#include <functional>
#include <optional>

#include "tg/model.hpp"

namespace tg {

/// Derivation record for a composed pair: parents, the unified subsets and
/// the unifier, enough to replay the composition.
struct PairProvenance {
    int parent1 = -1;
    int parent2 = -1;
    std::vector<int> h1_subset;  ///< atom indices into parent1.head
    std::vector<int> b2_subset;  ///< atom indices into parent2.body
    Substitution unifier;        ///< over parent1 vars and renamed parent2 vars
};

/// One element <B,H> of the extension, stored in canonical form: atoms in
/// canonical order, variables renamed V0,V1,... along that order.
struct ExtensionPair {
    std::vector<Atom> body;
    std::vector<Atom> head;
    int round = 0;
    std::string key;
    std::optional<PairProvenance> provenance;
};

struct ExtensionBudgets {
    int max_rounds = 1;
    int max_pairs = 10000;
    int subset_cap = 4;
    int body_cap = 1;  ///< dropped compositions whose body exceeds this many atoms
};

/// max_rounds = 2*|rules|*max arity, max_pairs = 10000, subset_cap = 4,
/// body_cap = largest rule body size.
ExtensionBudgets default_budgets(const std::vector<Rule>& rules);

struct ExtensionResult {
    std::vector<ExtensionPair> pairs;
    bool saturated = false;
    bool body_cap_dropped = false;  ///< some composition exceeded body_cap and was skipped
    std::string note;               ///< which budget stopped the run, if any
};

/// Canonical representative of the renaming-isomorphism class of <body, head>.
ExtensionPair canonical_pair(std::vector<Atom> body, std::vector<Atom> head);

/// Just the key of canonical_pair(body, head), without building the pair.
std::string canonical_key(const std::vector<Atom>& body, const std::vector<Atom>& head);

/// Round-0 pairs <bd(sigma), hd(sigma)>, canonically renamed and deduplicated.
std::vector<ExtensionPair> extension_base(const std::vector<Rule>& rules);

/// One composition round over the given pairs; returns the deduplicated
/// union of the input and all new pairs.
std::vector<ExtensionPair> extension_step(const std::vector<ExtensionPair>& pairs,
                                          const std::vector<Rule>& rules);

ExtensionResult compute_extension(const std::vector<Rule>& rules, const ExtensionBudgets& budgets);
ExtensionResult compute_extension(const std::vector<Rule>& rules, int max_rounds, int max_pairs);

/// Observer called after every completed round (round 0 = base pairs) with
/// the pairs so far and the index range [first_new, pairs.size()) of that
/// round's additions. Returning false stops the computation early.
using RoundObserver = std::function<bool(const std::vector<ExtensionPair>& pairs, int round,
                                         size_t first_new)>;

ExtensionResult compute_extension(const std::vector<Rule>& rules, const ExtensionBudgets& budgets,
                                  const RoundObserver& on_round);

/// Replays a recorded composition; true iff it re-derives the stored key.
bool replay_provenance(const std::vector<ExtensionPair>& pairs, const ExtensionPair& pair);

struct MarkupResult {
    std::set<Term> marked;    ///< m-var(a, c, a'): marked in a only
    std::set<Term> marked_a;  ///< fixpoint marks of a
    std::set<Term> marked_c;  ///< fixpoint marks of c
};

/// Variable markup for the triple (a, c, a'); requires rel(a) = rel(a').
MarkupResult mark_vars(const Atom& a, const Atom& c, const Atom& a_prime);

}  // namespace tg
