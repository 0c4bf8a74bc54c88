#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tg/model.hpp"

namespace tg {

/// Thrown when an instance or a brute-force search exceeds its safety cap.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Where a chase atom came from: the database, or the trigger (rule plus
/// body assignment) whose firing derived it first at its recorded level.
struct Provenance {
    std::string rule_id;       ///< empty for database atoms
    Substitution assignment;   ///< body-variable bindings of the trigger

    bool from_database() const { return rule_id.empty(); }
};

struct ChaseAtom {
    Atom atom;       ///< ground: constants and labeled nulls only
    int level = 0;   ///< 0 for database atoms, else 1 + max level of the trigger body
    Provenance provenance;
};

/// A finite chase prefix. Atoms are keyed by value; a re-derived atom keeps
/// the smaller of its levels. Null indices in use are exactly 1..next_null-1
/// and are handed out in firing order, so equal inputs rebuild the instance
/// null-for-null. Triggers that fired once are recorded and refuse to fire
/// again: re-applying one changes neither the atoms nor the counter.
struct ChaseInstance {
    std::map<Atom, ChaseAtom> atoms;
    int32_t next_null = 1;

    /// Triggers already applied, as (rule id, body assignment).
    std::set<std::pair<std::string, TermMap>> fired;

    /// True when no unfired trigger remains: the instance is the whole chase.
    bool saturated = false;

    /// Level bound the instance was computed to (or saturated below).
    int depth = 0;

    bool contains(const Atom& a) const { return atoms.count(a) != 0; }
    size_t size() const { return atoms.size(); }
};

struct ChaseBudgets {
    size_t max_atoms = 50000;     ///< instance size cap
    size_t max_maps = 1000000;    ///< candidate-map cap for brute-force searches
};

/// Applies one trigger to a copy of I. The instantiated body must be
/// contained in I (std::invalid_argument otherwise, with eta applied to the
/// body's variables only). Fresh nulls are assigned to the rule's existential
/// variables in name order; every head atom lands at level
/// 1 + max level of the instantiated body, and duplicates keep the smaller
/// level. A trigger already recorded in I.fired is a no-op.
ChaseInstance chase_step(const ChaseInstance& I, const Rule& sigma, const Substitution& eta);

/// All atoms of the chase of D with the given rules up to level k, computed
/// level by level. Within a level, triggers fire in a canonical order:
/// deepest null index in the instantiated body first, then rule order, then
/// the assignment itself. Throws ResourceLimitError past budgets.max_atoms.
ChaseInstance chase_to_level(const std::vector<Atom>& D, const std::vector<Rule>& rules, int k,
                             const ChaseBudgets& budgets = ChaseBudgets{});

/// As chase_to_level, but a budget stop returns the partial instance with
/// hit_cap set instead of throwing.
struct ChaseRun {
    ChaseInstance instance;
    bool hit_cap = false;
};
ChaseRun chase_to_level_capped(const std::vector<Atom>& D, const std::vector<Rule>& rules, int k,
                               const ChaseBudgets& budgets = ChaseBudgets{});

/// True when every connected embedding of the pattern into I that covers
/// both nulls can be re-mapped (image nulls to instance nulls, ni and nj to
/// a common null) so that the re-mapped pattern still lands inside I.
/// Embeddings are injective renamings; the pattern should contain only
/// variables. Throws ResourceLimitError past budgets.max_maps.
bool interchangeable(const Term& ni, const Term& nj, const std::vector<Atom>& pattern,
                     const ChaseInstance& I, const ChaseBudgets& budgets = ChaseBudgets{});

/// Smallest level of an atom mentioning each null (its birth level).
std::map<int32_t, int> null_birth_levels(const ChaseInstance& I);

/// Smallest N with 1 <= N <= I.depth - 3 such that every null born after
/// level N is, for every pattern, interchangeable with some null born at or
/// before N. The three-level margin keeps nulls whose consequences are not
/// materialized yet from passing vacuously. nullopt when no N qualifies.
std::optional<int> interchange_horizon(const ChaseInstance& I,
                                       const std::vector<std::vector<Atom>>& patterns,
                                       const ChaseBudgets& budgets = ChaseBudgets{});

struct BcqAnswer {
    enum class Status { Yes, No, Unknown };

    Status status = Status::Unknown;
    std::optional<Substitution> hom;  ///< set for Yes; maps query variables into the instance
    bool certified = false;           ///< for No: true when the negative answer is complete
    int depth = 0;                    ///< level at which the answer was established
    std::string note;                 ///< how the answer was reached
};

/// Boolean query answering over the chase of D. Yes carries a homomorphism
/// found at some level <= depth_limit (re-checked before being returned).
/// No is certified when the chase saturated below the limit, or, in auto
/// mode, when the program is triangularly guarded and interchange_horizon
/// finds a level N past which fresh nulls only repeat earlier structure
/// (patterns: the query body and every rule body). Otherwise No is reported
/// uncertified at the depth limit, and a resource stop yields Unknown.
BcqAnswer answer_bcq(const std::vector<Atom>& D, const std::vector<Rule>& rules, const Query& Q,
                     int depth_limit = 8, bool auto_mode = false,
                     const ChaseBudgets& budgets = ChaseBudgets{});

}  // namespace tg
