#include "tg/baselines.hpp"

#include <map>

namespace tg {

namespace {

std::vector<Position> positions_of_term(const std::vector<Atom>& atoms, const Term& t) {
    std::vector<Position> out;
    for (const Atom& a : atoms) {
        for (size_t i = 0; i < a.args.size(); ++i) {
            if (a.args[i] == t) out.push_back(Position{a.relation(), i + 1});
        }
    }
    return out;
}

size_t occurrence_count(const std::vector<Atom>& atoms, const Term& t) {
    size_t n = 0;
    for (const Atom& a : atoms) {
        for (const Term& arg : a.args) {
            if (arg == t) ++n;
        }
    }
    return n;
}

}  // namespace

PositionGraph build_position_graph(const std::vector<Rule>& rules) {
    PositionGraph g;
    for (const Rule& r : rules) {
        for (const std::vector<Atom>* part : {&r.body, &r.head}) {
            for (const Atom& a : *part) {
                for (size_t i = 0; i < a.args.size(); ++i) {
                    g.nodes.insert(Position{a.relation(), i + 1});
                }
            }
        }
        std::set<Position> invented;
        for (const Term& z : r.existentials) {
            for (const Position& q : positions_of_term(r.head, z)) invented.insert(q);
        }
        std::set<Term> head_vars = vars_of(r.head);
        for (const Term& x : vars_of(r.body)) {
            if (!head_vars.count(x)) continue;
            for (const Position& p : positions_of_term(r.body, x)) {
                for (const Position& q : positions_of_term(r.head, x)) {
                    g.normal_edges.insert({p, q});
                }
                for (const Position& q : invented) {
                    g.special_edges.insert({p, q});
                }
            }
        }
    }
    return g;
}

bool is_weakly_acyclic(const std::vector<Rule>& rules) {
    PositionGraph g = build_position_graph(rules);
    std::map<Position, std::vector<Position>> next;
    for (const auto& [p, q] : g.normal_edges) next[p].push_back(q);
    for (const auto& [p, q] : g.special_edges) next[p].push_back(q);
    for (const auto& [p, q] : g.special_edges) {
        // A cycle passes through (p, q) exactly when q reaches p back.
        std::set<Position> seen{q};
        std::vector<Position> stack{q};
        while (!stack.empty()) {
            Position at = stack.back();
            stack.pop_back();
            if (at == p) return false;
            auto it = next.find(at);
            if (it == next.end()) continue;
            for (const Position& to : it->second) {
                if (seen.insert(to).second) stack.push_back(to);
            }
        }
    }
    return true;
}

bool is_guarded(const std::vector<Rule>& rules) {
    for (const Rule& r : rules) {
        std::set<Term> body_vars = vars_of(r.body);
        bool found = false;
        for (const Atom& a : r.body) {
            std::set<Term> own = vars_of(a);
            bool covers = true;
            for (const Term& v : body_vars) {
                if (!own.count(v)) {
                    covers = false;
                    break;
                }
            }
            if (covers) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::vector<std::set<Term>> sticky_marking(const std::vector<Rule>& rules) {
    std::vector<std::set<Term>> marked(rules.size());
    std::set<Position> marked_positions;

    auto mark = [&](size_t r, const Term& v) -> bool {
        if (!marked[r].insert(v).second) return false;
        for (const Position& p : positions_of_term(rules[r].body, v)) {
            marked_positions.insert(p);
        }
        return true;
    };

    for (size_t r = 0; r < rules.size(); ++r) {
        std::set<Term> head_vars = vars_of(rules[r].head);
        for (const Term& v : vars_of(rules[r].body)) {
            if (!head_vars.count(v)) mark(r, v);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t r = 0; r < rules.size(); ++r) {
            std::set<Term> body_vars = vars_of(rules[r].body);
            for (const Atom& h : rules[r].head) {
                for (size_t i = 0; i < h.args.size(); ++i) {
                    const Term& v = h.args[i];
                    if (!v.is_var() || !body_vars.count(v)) continue;
                    if (!marked_positions.count(Position{h.relation(), i + 1})) continue;
                    if (mark(r, v)) changed = true;
                }
            }
        }
    }
    return marked;
}

bool is_sticky(const std::vector<Rule>& rules) {
    std::vector<std::set<Term>> marked = sticky_marking(rules);
    for (size_t r = 0; r < rules.size(); ++r) {
        for (const Term& v : marked[r]) {
            if (occurrence_count(rules[r].body, v) > 1) return false;
        }
    }
    return true;
}

}  // namespace tg
