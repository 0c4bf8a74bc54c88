#include "tg/nullsets.hpp"

#include <algorithm>

namespace tg {

namespace {

std::set<NullSymbol> intersect(const std::vector<const std::set<NullSymbol>*>& sets) {
    if (sets.empty()) return {};
    std::set<NullSymbol> out = *sets.front();
    for (size_t i = 1; i < sets.size() && !out.empty(); ++i) {
        std::set<NullSymbol> next;
        std::set_intersection(out.begin(), out.end(), sets[i]->begin(), sets[i]->end(),
                              std::inserter(next, next.begin()));
        out = std::move(next);
    }
    return out;
}

/// Intersection over all body occurrences of variable v in the rule of the
/// per-position unions: the "cap nullset(v, sigma)" of the edge condition and
/// of the head-universal case.
std::set<NullSymbol> body_intersection(const Rule& rule, const Term& v,
                                       const NullSetTable& table) {
    std::vector<const std::set<NullSymbol>*> sets;
    for (const Atom& b : rule.body) {
        for (size_t k = 0; k < b.args.size(); ++k) {
            if (b.args[k] == v) sets.push_back(&table.at_position(b.rel, static_cast<int32_t>(k)));
        }
    }
    return intersect(sets);
}

}  // namespace

const std::set<NullSymbol>& NullSetTable::at_position(int32_t rel, int32_t pos) const {
    static const std::set<NullSymbol> empty;
    auto it = position_union.find({rel, pos});
    return it == position_union.end() ? empty : it->second;
}

NullSetTable compute_null_sets(const std::vector<Rule>& rules) {
    NullSetTable table;
    bool changed = true;
    while (changed) {
        changed = false;
        // Head entries from the current per-position unions.
        for (size_t ri = 0; ri < rules.size(); ++ri) {
            const Rule& rule = rules[ri];
            for (size_t ai = 0; ai < rule.head.size(); ++ai) {
                const Atom& a = rule.head[ai];
                for (size_t k = 0; k < a.args.size(); ++k) {
                    OccKey key{static_cast<int32_t>(ri), true, static_cast<int32_t>(ai),
                               static_cast<int32_t>(k)};
                    std::set<NullSymbol> value;
                    const Term& t = a.args[k];
                    if (t.is_var()) {
                        if (rule.existentials.count(t)) {
                            value = {NullSymbol{static_cast<int32_t>(ri), t}};
                        } else {
                            value = body_intersection(rule, t, table);
                        }
                    }
                    auto& slot = table.entries[key];
                    if (slot != value) {
                        slot = std::move(value);
                        changed = true;
                    }
                }
            }
        }
        // Per-position unions from the head entries.
        std::map<std::pair<int32_t, int32_t>, std::set<NullSymbol>> unions;
        for (size_t ri = 0; ri < rules.size(); ++ri) {
            for (size_t ai = 0; ai < rules[ri].head.size(); ++ai) {
                const Atom& a = rules[ri].head[ai];
                for (size_t k = 0; k < a.args.size(); ++k) {
                    OccKey key{static_cast<int32_t>(ri), true, static_cast<int32_t>(ai),
                               static_cast<int32_t>(k)};
                    const auto& entry = table.entries[key];
                    unions[{a.rel, static_cast<int32_t>(k)}].insert(entry.begin(), entry.end());
                }
            }
        }
        if (unions != table.position_union) {
            table.position_union = std::move(unions);
            changed = true;
        }
    }
    // Body entries are the per-position unions.
    for (size_t ri = 0; ri < rules.size(); ++ri) {
        for (size_t ai = 0; ai < rules[ri].body.size(); ++ai) {
            const Atom& b = rules[ri].body[ai];
            for (size_t k = 0; k < b.args.size(); ++k) {
                OccKey key{static_cast<int32_t>(ri), false, static_cast<int32_t>(ai),
                           static_cast<int32_t>(k)};
                table.entries[key] = table.at_position(b.rel, static_cast<int32_t>(k));
            }
        }
    }
    return table;
}

ExistentialDepGraph build_dep_graph(const std::vector<Rule>& rules, const NullSetTable& table) {
    ExistentialDepGraph g;
    std::set<NullSymbol> node_set;
    for (const auto& [key, value] : table.entries) {
        (void)key;
        node_set.insert(value.begin(), value.end());
    }
    g.nodes.assign(node_set.begin(), node_set.end());
    auto index_of = [&](const NullSymbol& n) {
        return static_cast<size_t>(
            std::lower_bound(g.nodes.begin(), g.nodes.end(), n) - g.nodes.begin());
    };

    for (size_t ri = 0; ri < rules.size(); ++ri) {
        const Rule& rule = rules[ri];
        if (rule.existentials.empty()) continue;
        std::set<Term> body_vars = vars_of(rule.body);
        std::set<Term> head_vars = vars_of(rule.head);
        std::set<NullSymbol> sources;
        for (const Term& y : body_vars) {
            if (!head_vars.count(y)) continue;  // frontier variables only
            std::set<NullSymbol> cap = body_intersection(rule, y, table);
            sources.insert(cap.begin(), cap.end());
        }
        if (sources.empty()) continue;
        for (const Term& z : rule.existentials) {
            NullSymbol target{static_cast<int32_t>(ri), z};
            for (const NullSymbol& src : sources) {
                g.edges.emplace(index_of(src), index_of(target));
            }
        }
    }
    return g;
}

std::set<NullSymbol> cyc_null(const ExistentialDepGraph& g) {
    size_t n = g.nodes.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& [u, v] : g.edges) reach[u][v] = true;
    for (size_t k = 0; k < n; ++k) {
        for (size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    std::set<NullSymbol> out;
    for (size_t v = 0; v < n; ++v) {
        if (!reach[v][v]) continue;  // v is on a cycle
        out.insert(g.nodes[v]);
        for (size_t u = 0; u < n; ++u) {
            if (reach[v][u]) out.insert(g.nodes[u]);
        }
    }
    return out;
}

AffectedAnalysis analyze_affected(const std::vector<Rule>& rules) {
    AffectedAnalysis a;
    a.table = compute_null_sets(rules);
    a.graph = build_dep_graph(rules, a.table);
    a.cyc = cyc_null(a.graph);
    return a;
}

std::set<Term> var_hat(const AffectedAnalysis& analysis, const std::vector<Atom>& body) {
    std::set<Term> out;
    for (const Term& x : vars_of(body)) {
        std::vector<const std::set<NullSymbol>*> sets;
        for (const Atom& b : body) {
            for (size_t k = 0; k < b.args.size(); ++k) {
                if (b.args[k] == x) {
                    sets.push_back(&analysis.table.at_position(b.rel, static_cast<int32_t>(k)));
                }
            }
        }
        std::set<NullSymbol> cap = intersect(sets);
        bool hits_cycle = std::any_of(cap.begin(), cap.end(),
                                      [&](const NullSymbol& n) { return analysis.cyc.count(n); });
        if (hits_cycle) out.insert(x);
    }
    return out;
}

std::set<Term> var_hat(const std::vector<Rule>& rules, const std::vector<Atom>& body) {
    return var_hat(analyze_affected(rules), body);
}

std::set<Term> link_vars(const AffectedAnalysis& analysis, const std::vector<Atom>& body,
                         const Atom& b1, const Atom& b2) {
    if (std::find(body.begin(), body.end(), b1) == body.end() ||
        std::find(body.begin(), body.end(), b2) == body.end()) {
        throw std::invalid_argument("link_vars: atom not in body");
    }
    std::set<Term> v1 = vars_of(b1);
    std::set<Term> v2 = vars_of(b2);
    std::set<Term> hat = var_hat(analysis, body);
    std::set<Term> out;
    for (const Term& v : v1) {
        if (v2.count(v) && hat.count(v)) out.insert(v);
    }
    return out;
}

std::set<Term> link_vars(const std::vector<Rule>& rules, const std::vector<Atom>& body,
                         const Atom& b1, const Atom& b2) {
    return link_vars(analyze_affected(rules), body, b1, b2);
}

}  // namespace tg
