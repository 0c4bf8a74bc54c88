#include "tg/extension.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "tg/unify.hpp"

namespace tg {

namespace {

/// All orderings of the atom list that keep atoms grouped and sorted by
/// (relation, arity); only same-relation atoms are permuted. The minimal
/// canonical key is always achieved by one of these. Atoms must already be
/// in normalize_atom_set order, which groups by (relation, arity). Writes
/// into a prefix of `out`, reusing its storage; returns the prefix length.
size_t group_orderings(const std::vector<Atom>& atoms, std::vector<std::vector<size_t>>& out) {
    size_t used = 0;
    auto next_slot = [&]() -> std::vector<size_t>& {
        if (used == out.size()) out.emplace_back();
        return out[used++];
    };
    thread_local std::vector<std::pair<size_t, size_t>> groups;  // [begin, end) runs
    groups.clear();
    size_t begin = 0;
    for (size_t i = 1; i <= atoms.size(); ++i) {
        if (i == atoms.size() || atoms[i].rel != atoms[begin].rel ||
            atoms[i].arity() != atoms[begin].arity()) {
            groups.emplace_back(begin, i);
            begin = i;
        }
    }
    if (groups.size() == atoms.size()) {
        std::vector<size_t>& order = next_slot();
        order.resize(atoms.size());
        for (size_t i = 0; i < atoms.size(); ++i) order[i] = i;
        return used;
    }
    // Product of per-group permutations; groups larger than 6 atoms fall back
    // to a single order (only dedup precision is affected, not soundness).
    std::vector<std::vector<std::vector<size_t>>> all_perms;
    for (auto [lo, hi] : groups) {
        std::vector<size_t> seg(hi - lo);
        for (size_t i = lo; i < hi; ++i) seg[i - lo] = i;
        std::vector<std::vector<size_t>> perms;
        if (seg.size() > 6) {
            perms.push_back(std::move(seg));
        } else {
            do {
                perms.push_back(seg);
            } while (std::next_permutation(seg.begin(), seg.end()));
        }
        all_perms.push_back(std::move(perms));
    }
    std::vector<size_t> pick(all_perms.size(), 0);
    while (true) {
        std::vector<size_t>& combined = next_slot();
        combined.clear();
        for (size_t g = 0; g < all_perms.size(); ++g) {
            const auto& seg = all_perms[g][pick[g]];
            combined.insert(combined.end(), seg.begin(), seg.end());
        }
        size_t g = 0;
        for (; g < all_perms.size(); ++g) {
            if (++pick[g] < all_perms[g].size()) break;
            pick[g] = 0;
        }
        if (g == all_perms.size()) break;
    }
    return used;
}

std::vector<Atom> reorder(const std::vector<Atom>& atoms, const std::vector<size_t>& order) {
    std::vector<Atom> out;
    out.reserve(order.size());
    for (size_t i : order) out.push_back(atoms[i]);
    return out;
}

Substitution rename_first_occurrence(const std::vector<Atom>& body, const std::vector<Atom>& head,
                                     const std::string& prefix) {
    Substitution theta;
    size_t counter = 0;
    auto visit = [&](const std::vector<Atom>& atoms) {
        for (const Atom& a : atoms) {
            for (const Term& t : a.args) {
                if (t.is_var() && !theta.contains(t)) {
                    theta.bind(t, Term::variable(prefix + std::to_string(counter++)));
                }
            }
        }
    };
    visit(body);
    visit(head);
    return theta;
}

std::vector<Atom> apply_in_order(const std::vector<Atom>& atoms, const Substitution& theta) {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) out.push_back(apply_substitution(a, theta));
    return out;
}

}  // namespace

namespace {

struct CanonicalChoice {
    std::string key;
    std::vector<size_t> body_order, head_order;
    std::vector<Term> names;
};

/// Renders atoms[order] with variables renamed V0,V1,... in order of first
/// occurrence; `names` lists the variables already assigned (index = number).
void render_ordered(const std::vector<Atom>& atoms, const std::vector<size_t>& order,
                    std::vector<Term>& names, std::string& out) {
    for (size_t i = 0; i < order.size(); ++i) {
        if (i) out += ';';
        const Atom& a = atoms[order[i]];
        out += a.relation();
        out += '(';
        for (size_t k = 0; k < a.args.size(); ++k) {
            if (k) out += ',';
            const Term& t = a.args[k];
            if (t.is_var()) {
                size_t v = 0;
                while (v < names.size() && names[v] != t) ++v;
                if (v == names.size()) names.push_back(t);
                out += 'V';
                if (v < 10) {
                    out += static_cast<char>('0' + v);
                } else {
                    out += std::to_string(v);
                }
            } else if (t.is_null()) {
                out += "_:n";
                out += std::to_string(t.id);
            } else {
                out += SymbolTable::instance().name(t.id);
            }
        }
        out += ')';
    }
}

/// Both atom lists must already be in normalize_atom_set order. Fills `best`,
/// reusing its storage.
void canonical_choice(const std::vector<Atom>& body, const std::vector<Atom>& head,
                      CanonicalChoice& best) {
    best.key.clear();
    thread_local std::vector<Term> base_names, names;
    thread_local std::string bkey, key;
    thread_local std::vector<std::vector<size_t>> body_orders, head_orders;
    size_t n_body = group_orderings(body, body_orders);
    size_t n_head = group_orderings(head, head_orders);
    for (size_t b = 0; b < n_body; ++b) {
        base_names.clear();
        bkey.clear();
        render_ordered(body, body_orders[b], base_names, bkey);
        for (size_t h = 0; h < n_head; ++h) {
            names = base_names;
            key = bkey;
            key += '|';
            render_ordered(head, head_orders[h], names, key);
            if (best.key.empty() || key < best.key) {
                best.key = key;
                best.body_order = body_orders[b];
                best.head_order = head_orders[h];
                best.names = names;
            }
        }
    }
}

}  // namespace

namespace {

ExtensionPair pair_from_choice(const CanonicalChoice& best, const std::vector<Atom>& body,
                               const std::vector<Atom>& head) {
    ExtensionPair out;
    Substitution rename;
    for (size_t v = 0; v < best.names.size(); ++v) {
        rename.bind(best.names[v], Term::variable("V" + std::to_string(v)));
    }
    out.body = apply_in_order(reorder(body, best.body_order), rename);
    out.head = apply_in_order(reorder(head, best.head_order), rename);
    out.key = best.key;
    return out;
}

}  // namespace

std::string canonical_key(const std::vector<Atom>& body, const std::vector<Atom>& head) {
    CanonicalChoice choice;
    canonical_choice(normalize_atom_set(body), normalize_atom_set(head), choice);
    return std::move(choice.key);
}

ExtensionPair canonical_pair(std::vector<Atom> body, std::vector<Atom> head) {
    body = normalize_atom_set(std::move(body));
    head = normalize_atom_set(std::move(head));
    CanonicalChoice choice;
    canonical_choice(body, head, choice);
    return pair_from_choice(choice, body, head);
}

ExtensionBudgets default_budgets(const std::vector<Rule>& rules) {
    ExtensionBudgets b;
    size_t max_arity = 1;
    size_t max_body = 1;
    for (const Rule& r : rules) {
        max_body = std::max(max_body, r.body.size());
        for (const Atom& a : r.body) max_arity = std::max(max_arity, a.arity());
        for (const Atom& a : r.head) max_arity = std::max(max_arity, a.arity());
    }
    b.max_rounds = std::max<int>(1, 2 * static_cast<int>(rules.size() * max_arity));
    b.max_pairs = 10000;
    b.subset_cap = 4;
    b.body_cap = static_cast<int>(max_body);
    return b;
}

std::vector<ExtensionPair> extension_base(const std::vector<Rule>& rules) {
    std::vector<ExtensionPair> out;
    std::set<std::string> seen;
    for (const Rule& r : rules) {
        ExtensionPair p = canonical_pair(r.body, r.head);
        p.round = 0;
        if (seen.insert(p.key).second) out.push_back(std::move(p));
    }
    return out;
}

namespace {

/// A composition result before dedup. Provenance parts are borrowed from the
/// enclosing composition loop and copied only when the candidate is kept.
struct Candidate {
    std::vector<Atom> body;
    std::vector<Atom> head;
    int parent1 = -1;
    int parent2 = -1;
    const std::vector<int>* h1_subset = nullptr;
    const std::vector<int>* b2_subset = nullptr;
    const Substitution* unifier = nullptr;

    PairProvenance provenance() const {
        PairProvenance prov;
        prov.parent1 = parent1;
        prov.parent2 = parent2;
        prov.h1_subset = *h1_subset;
        prov.b2_subset = *b2_subset;
        prov.unifier = *unifier;
        return prov;
    }
};

void subsets_up_to(size_t n, size_t cap, std::vector<std::vector<int>>& out) {
    std::vector<int> current;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (!current.empty()) out.push_back(current);
        if (current.size() == cap) return;
        for (size_t i = start; i < n; ++i) {
            current.push_back(static_cast<int>(i));
            self(self, i + 1);
            current.pop_back();
        }
    };
    rec(rec, 0);
}

/// Distinct (relation, arity) signature of a subset; two atom sets can only
/// cover each other in a unifier when their signatures are equal.
std::vector<std::pair<int32_t, int32_t>> signature_of(const std::vector<Atom>& atoms,
                                                      const std::vector<int>& indices) {
    std::vector<std::pair<int32_t, int32_t>> sig;
    for (int k : indices) {
        sig.emplace_back(atoms[static_cast<size_t>(k)].rel,
                         static_cast<int32_t>(atoms[static_cast<size_t>(k)].arity()));
    }
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}

struct SubsetInfo {
    std::vector<int> indices;
    std::vector<Atom> atoms;  ///< the selected atoms, in index order
    std::vector<std::pair<int32_t, int32_t>> sig;
    /// Head subsets only: body variables outside the subset, which a unifier
    /// must not bind.
    std::vector<Term> protected_vars;
};

/// Precomputed per-pair composition data: the pair's atoms renamed apart for
/// use as the right-hand pair, and the subset enumerations of both roles.
/// Body subsets are bucketed by signature; buckets keep enumeration order.
struct PairCache {
    std::vector<Atom> b2, h2;              ///< W-renamed body/head (right role)
    std::set<Term> left_body_vars;         ///< var(B) of the left role
    std::set<Term> left_exist_vars;        ///< var(H) ∖ var(B) of the left role
    std::vector<SubsetInfo> head_subsets;  ///< of the original head (left role)
    std::vector<SubsetInfo> body_subsets;  ///< of the renamed body (right role)
    std::vector<std::pair<std::vector<std::pair<int32_t, int32_t>>, std::vector<int>>>
        body_by_sig;                       ///< sig -> body_subsets indices
    bool head_capped = false;
    bool body_capped = false;
};

PairCache build_cache(const ExtensionPair& p, const ExtensionBudgets& budgets) {
    PairCache c;
    Substitution theta = rename_first_occurrence(p.body, p.head, "W");
    c.b2 = apply_in_order(p.body, theta);
    c.h2 = apply_in_order(p.head, theta);
    c.head_capped = p.head.size() > static_cast<size_t>(budgets.subset_cap);
    c.body_capped = c.b2.size() > static_cast<size_t>(budgets.subset_cap);
    std::set<Term> body_vars = vars_of(p.body);
    c.left_body_vars = body_vars;
    for (const Term& v : vars_of(p.head)) {
        if (!body_vars.count(v)) c.left_exist_vars.insert(v);
    }
    std::vector<std::vector<int>> subsets;
    subsets_up_to(p.head.size(), static_cast<size_t>(budgets.subset_cap), subsets);
    for (auto& s : subsets) {
        SubsetInfo info;
        info.sig = signature_of(p.head, s);
        for (int k : s) info.atoms.push_back(p.head[static_cast<size_t>(k)]);
        std::set<Term> sel_vars = vars_of(info.atoms);
        for (const Term& v : body_vars) {
            if (!sel_vars.count(v)) info.protected_vars.push_back(v);
        }
        info.indices = std::move(s);
        c.head_subsets.push_back(std::move(info));
    }
    subsets.clear();
    subsets_up_to(c.b2.size(), static_cast<size_t>(budgets.subset_cap), subsets);
    for (auto& s : subsets) {
        SubsetInfo info;
        info.sig = signature_of(c.b2, s);
        for (int k : s) info.atoms.push_back(c.b2[static_cast<size_t>(k)]);
        info.indices = std::move(s);
        c.body_subsets.push_back(std::move(info));
    }
    for (size_t k = 0; k < c.body_subsets.size(); ++k) {
        auto bucket = std::find_if(c.body_by_sig.begin(), c.body_by_sig.end(),
                                   [&](const auto& b) { return b.first == c.body_subsets[k].sig; });
        if (bucket == c.body_by_sig.end()) {
            c.body_by_sig.push_back({c.body_subsets[k].sig, {}});
            bucket = c.body_by_sig.end() - 1;
        }
        bucket->second.push_back(static_cast<int>(k));
    }
    return c;
}

/// All compositions of p1 with p2 (in that order) under the budgets, fed to
/// the sink one at a time; a false return from the sink stops the stream.
template <class Sink>
bool compose_pairs(const std::vector<ExtensionPair>& pairs,
                   const std::vector<PairCache>& caches, int i1, int i2,
                   const ExtensionBudgets& budgets, bool& body_cap_dropped, bool& subset_capped,
                   Sink&& sink) {
    const ExtensionPair& p1 = pairs[i1];
    const PairCache& c1 = caches[i1];
    const PairCache& c2 = caches[i2];
    if (c1.head_capped || c2.body_capped) subset_capped = true;

    for (const SubsetInfo& hs : c1.head_subsets) {
        auto bucket = std::find_if(c2.body_by_sig.begin(), c2.body_by_sig.end(),
                                   [&](const auto& b) { return b.first == hs.sig; });
        if (bucket == c2.body_by_sig.end()) continue;
        for (int bi : bucket->second) {
            const SubsetInfo& bs = c2.body_subsets[static_cast<size_t>(bi)];
            for (const Substitution& eta : enumerate_set_unifiers(hs.atoms, bs.atoms)) {
                // Body-1 variables outside the unified head subset must stay
                // fixed; a unifier binding one is rejected.
                bool moves_protected_var = false;
                for (const Term& x : hs.protected_vars) {
                    if (eta.contains(x)) {
                        moves_protected_var = true;
                        break;
                    }
                }
                if (moves_protected_var) continue;
                // Head-only variables of the left pair stand for fresh
                // witnesses; a right-side variable may share a unifier class
                // with one only when a left body variable or a constant
                // anchors the class to an ordinary term.
                bool joins_witness = false;
                {
                    thread_local std::vector<std::pair<Term, int>> class_flags;
                    class_flags.clear();
                    auto role_of = [&](const Term& t) -> int {
                        if (!t.is_var()) return 4;
                        if (c1.left_body_vars.count(t)) return 4;
                        if (c1.left_exist_vars.count(t)) return 2;
                        return 1;
                    };
                    for (const auto& [v, t] : eta.mapping) {
                        if (!t.is_var()) continue;
                        int f = role_of(v) | role_of(t);
                        auto it = std::find_if(class_flags.begin(), class_flags.end(),
                                               [&](const auto& e) { return e.first == t; });
                        if (it == class_flags.end()) {
                            class_flags.emplace_back(t, f);
                        } else {
                            it->second |= f;
                        }
                    }
                    for (const auto& [rep, f] : class_flags) {
                        if ((f & 1) && (f & 2) && !(f & 4)) {
                            joins_witness = true;
                            break;
                        }
                    }
                }
                if (joins_witness) continue;
                std::vector<Atom> new_body;
                new_body.reserve(p1.body.size() + c2.b2.size());
                for (const Atom& a : p1.body) new_body.push_back(apply_substitution(a, eta));
                std::vector<Atom> sel_images;
                sel_images.reserve(bs.atoms.size());
                for (const Atom& a : bs.atoms) sel_images.push_back(apply_substitution(a, eta));
                for (const Atom& a : c2.b2) {
                    Atom image = apply_substitution(a, eta);
                    if (std::find(sel_images.begin(), sel_images.end(), image) ==
                        sel_images.end()) {
                        new_body.push_back(std::move(image));
                    }
                }
                new_body = normalize_atom_set(std::move(new_body));
                if (new_body.size() > static_cast<size_t>(budgets.body_cap)) {
                    body_cap_dropped = true;
                    continue;
                }
                Candidate c;
                c.body = std::move(new_body);
                c.head.reserve(c2.h2.size());
                for (const Atom& a : c2.h2) c.head.push_back(apply_substitution(a, eta));
                c.head = normalize_atom_set(std::move(c.head));
                c.parent1 = i1;
                c.parent2 = i2;
                c.h1_subset = &hs.indices;
                c.b2_subset = &bs.indices;
                c.unifier = &eta;
                if (!sink(std::move(c))) return false;
            }
        }
    }
    return true;
}

}  // namespace

ExtensionResult compute_extension(const std::vector<Rule>& rules, const ExtensionBudgets& budgets,
                                  const RoundObserver& on_round) {
    ExtensionResult result;
    result.pairs = extension_base(rules);
    std::unordered_set<std::string> seen;
    std::vector<PairCache> caches;
    for (size_t i = 0; i < result.pairs.size(); ++i) {
        seen.insert(result.pairs[i].key);
        caches.push_back(build_cache(result.pairs[i], budgets));
    }

    if (on_round && !on_round(result.pairs, 0, 0)) {
        result.note = "stopped by caller";
        return result;
    }

    bool subset_capped = false;
    std::vector<size_t> frontier(result.pairs.size());
    for (size_t i = 0; i < frontier.size(); ++i) frontier[i] = i;

    int round = 0;
    while (!frontier.empty()) {
        if (round >= budgets.max_rounds) {
            result.note = "max_rounds budget reached";
            result.saturated = false;
            return result;
        }
        ++round;
        std::vector<bool> is_new(result.pairs.size(), false);
        for (size_t i : frontier) is_new[i] = true;
        std::vector<ExtensionPair> additions;
        bool over_budget = false;
        auto take = [&](Candidate&& c) {
            thread_local CanonicalChoice choice;
            canonical_choice(c.body, c.head, choice);
            if (seen.count(choice.key)) return true;
            if (result.pairs.size() + additions.size() >=
                static_cast<size_t>(budgets.max_pairs)) {
                over_budget = true;
                return false;
            }
            ExtensionPair p = pair_from_choice(choice, c.body, c.head);
            p.round = round;
            p.provenance = c.provenance();
            seen.insert(choice.key);
            additions.push_back(std::move(p));
            return true;
        };
        size_t n = result.pairs.size();
        for (size_t i = 0; i < n && !over_budget; ++i) {
            for (size_t j = 0; j < n && !over_budget; ++j) {
                if (!is_new[i] && !is_new[j]) continue;
                compose_pairs(result.pairs, caches, static_cast<int>(i), static_cast<int>(j),
                              budgets, result.body_cap_dropped, subset_capped, take);
            }
        }
        if (over_budget) {
            result.note = "max_pairs budget reached";
            result.saturated = false;
            return result;
        }
        frontier.clear();
        size_t first_new = result.pairs.size();
        for (ExtensionPair& p : additions) {
            frontier.push_back(result.pairs.size());
            result.pairs.push_back(std::move(p));
            caches.push_back(build_cache(result.pairs.back(), budgets));
        }
        if (on_round && !on_round(result.pairs, round, first_new)) {
            result.note = "stopped by caller";
            return result;
        }
    }
    if (subset_capped) {
        result.note = "subset_cap budget reached";
        result.saturated = false;
    } else {
        result.saturated = true;
    }
    return result;
}

ExtensionResult compute_extension(const std::vector<Rule>& rules, const ExtensionBudgets& budgets) {
    return compute_extension(rules, budgets, RoundObserver());
}

ExtensionResult compute_extension(const std::vector<Rule>& rules, int max_rounds, int max_pairs) {
    ExtensionBudgets b = default_budgets(rules);
    b.max_rounds = max_rounds;
    b.max_pairs = max_pairs;
    return compute_extension(rules, b);
}

std::vector<ExtensionPair> extension_step(const std::vector<ExtensionPair>& pairs,
                                          const std::vector<Rule>& rules) {
    ExtensionBudgets budgets = default_budgets(rules);
    std::vector<ExtensionPair> out = pairs;
    std::set<std::string> seen;
    int max_round = 0;
    for (const ExtensionPair& p : pairs) {
        seen.insert(p.key);
        max_round = std::max(max_round, p.round);
    }
    bool dropped = false, capped = false;
    auto take = [&](Candidate&& c) {
        thread_local CanonicalChoice choice;
        canonical_choice(c.body, c.head, choice);
        if (!seen.insert(choice.key).second) return true;
        ExtensionPair p = pair_from_choice(choice, c.body, c.head);
        p.round = max_round + 1;
        p.provenance = c.provenance();
        out.push_back(std::move(p));
        return true;
    };
    std::vector<PairCache> caches;
    for (const ExtensionPair& p : pairs) caches.push_back(build_cache(p, budgets));
    for (size_t i = 0; i < pairs.size(); ++i) {
        for (size_t j = 0; j < pairs.size(); ++j) {
            compose_pairs(pairs, caches, static_cast<int>(i), static_cast<int>(j), budgets,
                          dropped, capped, take);
        }
    }
    return out;
}

bool replay_provenance(const std::vector<ExtensionPair>& pairs, const ExtensionPair& pair) {
    if (!pair.provenance) return true;
    const PairProvenance& prov = *pair.provenance;
    if (prov.parent1 < 0 || prov.parent2 < 0 ||
        static_cast<size_t>(prov.parent1) >= pairs.size() ||
        static_cast<size_t>(prov.parent2) >= pairs.size()) {
        return false;
    }
    const ExtensionPair& p1 = pairs[static_cast<size_t>(prov.parent1)];
    const ExtensionPair& p2 = pairs[static_cast<size_t>(prov.parent2)];
    Substitution theta = rename_first_occurrence(p2.body, p2.head, "W");
    std::vector<Atom> b2 = apply_in_order(p2.body, theta);
    std::vector<Atom> h2 = apply_in_order(p2.head, theta);
    std::vector<Atom> b2_sel;
    for (int k : prov.b2_subset) {
        if (k < 0 || static_cast<size_t>(k) >= b2.size()) return false;
        b2_sel.push_back(b2[static_cast<size_t>(k)]);
    }
    const Substitution& eta = prov.unifier;
    std::vector<Atom> new_body = apply_substitution(p1.body, eta);
    std::vector<Atom> b2_image = apply_substitution(b2, eta);
    std::vector<Atom> b2_sel_image = apply_substitution(b2_sel, eta);
    for (const Atom& a : b2_image) {
        if (std::find(b2_sel_image.begin(), b2_sel_image.end(), a) == b2_sel_image.end()) {
            new_body.push_back(a);
        }
    }
    ExtensionPair replayed = canonical_pair(std::move(new_body), apply_substitution(h2, eta));
    return replayed.key == pair.key;
}

MarkupResult mark_vars(const Atom& a, const Atom& c, const Atom& a_prime) {
    if (a.rel != a_prime.rel || a.arity() != a_prime.arity()) {
        throw std::invalid_argument("mark_vars: rel(a) must equal rel(a')");
    }
    MarkupResult r;
    std::set<Term> va = vars_of(a), vc = vars_of(c), vap = vars_of(a_prime);
    for (const Term& x : va) {
        if (!vc.count(x)) r.marked_a.insert(x);
    }
    for (const Term& x : vc) {
        if (!vap.count(x)) r.marked_c.insert(x);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Term& x : va) {
            if (r.marked_c.count(x) && r.marked_a.insert(x).second) changed = true;
        }
        for (const Term& x : vap) {
            if (!vc.count(x) || r.marked_c.count(x)) continue;
            bool all_marked = true;
            for (size_t pos : positions_of(a_prime, x)) {
                const Term& at_a = a.args[pos];
                if (at_a.is_var() && !r.marked_a.count(at_a)) {
                    all_marked = false;
                    break;
                }
            }
            if (all_marked) {
                r.marked_c.insert(x);
                changed = true;
            }
        }
    }
    for (const Term& x : r.marked_a) {
        if (!r.marked_c.count(x)) r.marked.insert(x);
    }
    return r;
}

}  // namespace tg
