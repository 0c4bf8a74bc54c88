#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tg/model.hpp"

namespace tg {

/// Argument position of a relation, 1-based.
struct Position {
    std::string relation;
    size_t index = 0;

    bool operator==(const Position& o) const {
        return index == o.index && relation == o.relation;
    }
    bool operator<(const Position& o) const {
        if (relation != o.relation) return relation < o.relation;
        return index < o.index;
    }
};

/// Dependency graph over argument positions. A normal edge follows a
/// variable shared by body and head from one of its body positions to one
/// of its head positions; a special edge leads from such a body position to
/// a head position holding an invented value.
struct PositionGraph {
    std::set<Position> nodes;
    std::set<std::pair<Position, Position>> normal_edges;
    std::set<std::pair<Position, Position>> special_edges;
};

PositionGraph build_position_graph(const std::vector<Rule>& rules);

/// True iff no cycle of the position graph passes through a special edge
/// (the weak-acyclicity test of Fagin, Kolaitis, Miller and Popa).
bool is_weakly_acyclic(const std::vector<Rule>& rules);

/// True iff every rule has a body atom containing all of the body's
/// variables.
bool is_guarded(const std::vector<Rule>& rules);

/// Variables whose body occurrences the sticky marking procedure of Calì,
/// Gottlob and Pieris marks, one set per rule: variables projected away by
/// the rule's own head, then closed under propagation through head
/// positions that are marked in some body.
std::vector<std::set<Term>> sticky_marking(const std::vector<Rule>& rules);

/// True iff no marked variable occurs more than once in its rule's body.
bool is_sticky(const std::vector<Rule>& rules);

}  // namespace tg
