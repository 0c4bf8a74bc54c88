#pragma once

#include <map>

#include "tg/model.hpp"

namespace tg {

/// The null symbol n_Z^sigma: one per (rule, existential variable) pair.
struct NullSymbol {
    int32_t rule_index = -1;
    Term var;

    bool operator==(const NullSymbol& o) const {
        return rule_index == o.rule_index && var == o.var;
    }
    bool operator<(const NullSymbol& o) const {
        if (rule_index != o.rule_index) return rule_index < o.rule_index;
        return var < o.var;
    }
};

/// An argument position of one atom occurrence inside a rule. Repeated atoms
/// in one rule are distinct occurrences.
struct OccKey {
    int32_t rule = 0;
    bool in_head = false;
    int32_t atom_index = 0;
    int32_t arg_index = 0;

    bool operator==(const OccKey& o) const {
        return rule == o.rule && in_head == o.in_head && atom_index == o.atom_index &&
               arg_index == o.arg_index;
    }
    bool operator<(const OccKey& o) const {
        if (rule != o.rule) return rule < o.rule;
        if (in_head != o.in_head) return in_head < o.in_head;
        if (atom_index != o.atom_index) return atom_index < o.atom_index;
        return arg_index < o.arg_index;
    }
};

struct NullSetTable {
    /// Least-fixpoint null-set of every atom occurrence position.
    std::map<OccKey, std::set<NullSymbol>> entries;
    /// Union of head null-sets per (relation, position); this is the value
    /// every body occurrence of that position takes.
    std::map<std::pair<int32_t, int32_t>, std::set<NullSymbol>> position_union;

    const std::set<NullSymbol>& at_position(int32_t rel, int32_t pos) const;
};

struct ExistentialDepGraph {
    std::vector<NullSymbol> nodes;
    std::set<std::pair<size_t, size_t>> edges;  ///< indices into nodes
};

NullSetTable compute_null_sets(const std::vector<Rule>& rules);

ExistentialDepGraph build_dep_graph(const std::vector<Rule>& rules, const NullSetTable& table);

/// Nodes on a cycle plus nodes reachable from a node on a cycle. A self-loop
/// counts as a cycle.
std::set<NullSymbol> cyc_null(const ExistentialDepGraph& g);

/// Precomputed affected-analysis bundle, reused by the extension and RTC
/// modules to avoid refixpointing per pair.
struct AffectedAnalysis {
    NullSetTable table;
    ExistentialDepGraph graph;
    std::set<NullSymbol> cyc;
};

AffectedAnalysis analyze_affected(const std::vector<Rule>& rules);

std::set<Term> var_hat(const AffectedAnalysis& analysis, const std::vector<Atom>& body);
std::set<Term> var_hat(const std::vector<Rule>& rules, const std::vector<Atom>& body);

std::set<Term> link_vars(const AffectedAnalysis& analysis, const std::vector<Atom>& body,
                         const Atom& b1, const Atom& b2);
std::set<Term> link_vars(const std::vector<Rule>& rules, const std::vector<Atom>& body,
                         const Atom& b1, const Atom& b2);

}  // namespace tg
