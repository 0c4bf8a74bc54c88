#include "tg/rtc.hpp"

#include <algorithm>
#include <map>

#include "tg/unify.hpp"

namespace tg {

namespace {

void render_term(const Term& t, std::vector<Term>& names, std::string& out) {
    if (t.is_var()) {
        size_t v = 0;
        while (v < names.size() && names[v] != t) ++v;
        if (v == names.size()) names.push_back(t);
        out += 'V';
        if (v < 10)
            out += static_cast<char>('0' + v);
        else
            out += std::to_string(v);
        return;
    }
    if (t.is_null()) {
        out += "_:n";
        out += std::to_string(t.id);
        return;
    }
    out += SymbolTable::instance().name(t.id);
}

void render_atom(const Atom& a, std::vector<Term>& names, std::string& out) {
    out += a.relation();
    out += '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        render_term(a.args[i], names, out);
    }
    out += ')';
}

/// Renaming-invariant rendering of the track core; doubles as its order.
std::string core_key(const ExtensionPair& pair, const Atom& a, const Atom& b, const Atom& c,
                     const Atom& a_prime, const Term& x, const Term& z) {
    std::vector<Term> names;
    std::string out = pair.key;
    out += '#';
    render_atom(a, names, out);
    out += ';';
    render_atom(b, names, out);
    out += ';';
    render_atom(c, names, out);
    out += ';';
    render_atom(a_prime, names, out);
    out += ';';
    render_term(x, names, out);
    out += ';';
    render_term(z, names, out);
    return out;
}

/// Renaming-invariant rendering of a re-entry triple, for cross-checking a
/// recorded cycle against a fresh search.
std::string reentry_key(const Atom& a, const Atom& c, const Atom& a_prime) {
    std::vector<Term> names;
    std::string out;
    render_atom(a, names, out);
    out += ';';
    render_atom(c, names, out);
    out += ';';
    render_atom(a_prime, names, out);
    return out;
}

bool contains_var(const Atom& a, const Term& v) {
    return std::find(a.args.begin(), a.args.end(), v) != a.args.end();
}

bool has_guard(const std::vector<Atom>& body, const Term& x, const Term& z) {
    for (const Atom& d : body)
        if (contains_var(d, x) && contains_var(d, z)) return true;
    return false;
}

/// theta with from.theta = to, mapping variables to variables only.
bool var_to_var_map(const Atom& from, const Atom& to, Substitution& theta) {
    if (from.rel != to.rel || from.args.size() != to.args.size()) return false;
    theta = Substitution{};
    for (size_t i = 0; i < from.args.size(); ++i) {
        const Term& s = from.args[i];
        const Term& t = to.args[i];
        if (!s.is_var()) {
            if (s != t) return false;
            continue;
        }
        if (!t.is_var()) return false;
        auto it = theta.mapping.find(s);
        if (it != theta.mapping.end()) {
            if (it->second != t) return false;
        } else if (s != t) {
            theta.bind(s, t);
        }
    }
    return apply_substitution(from, theta) == to;
}

std::string fresh_prefix(char base, const std::set<std::string>& used) {
    std::string p(1, base);
    auto taken = [&](const std::string& pre) {
        for (const std::string& n : used)
            if (n.size() > pre.size() && n.compare(0, pre.size(), pre) == 0) return true;
        return false;
    };
    while (taken(p)) p += base;
    return p;
}

void collect_var_names(const std::vector<Atom>& atoms, std::set<std::string>& out) {
    for (const Atom& a : atoms)
        for (const Term& t : a.args)
            if (t.is_var()) out.insert(SymbolTable::instance().name(t.id));
}

using Sig = std::pair<int32_t, size_t>;

Sig sig_of(const Atom& a) { return {a.rel, a.args.size()}; }

/// One (body atom, head atom) combination of a renamed pair. Two carriers
/// with the same shape yield the same re-entry candidates, so only one
/// representative per shape is kept.
struct Carrier {
    Atom body_atom;
    Atom head_atom;
    size_t pair_index;
};

struct RenamedSource {
    Substitution renaming;
    const ExtensionPair* src = nullptr;
};

struct ReentryPool {
    std::vector<RenamedSource> items;
    std::vector<Carrier> carriers;
    std::map<std::pair<Sig, Sig>, std::vector<size_t>> by_sig;  ///< (body, head) shape
    std::string invent_prefix;
};

ReentryPool build_pool(const std::vector<ExtensionPair>& pairs) {
    ReentryPool pool;
    std::set<std::string> used;
    for (const ExtensionPair& p : pairs) {
        collect_var_names(p.body, used);
        collect_var_names(p.head, used);
    }
    const std::string copy_prefix = fresh_prefix('F', used);
    pool.invent_prefix = fresh_prefix('G', used);

    std::set<std::string> seen_shapes;
    pool.items.reserve(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) {
        RenamedSource item;
        item.src = &pairs[i];
        std::vector<Term> order;
        auto note = [&](const std::vector<Atom>& atoms) {
            for (const Atom& a : atoms)
                for (const Term& t : a.args)
                    if (t.is_var() && std::find(order.begin(), order.end(), t) == order.end())
                        order.push_back(t);
        };
        note(pairs[i].body);
        note(pairs[i].head);
        for (size_t k = 0; k < order.size(); ++k)
            item.renaming.bind(order[k], Term::variable(copy_prefix + std::to_string(k)));

        for (const Atom& ob : pairs[i].body) {
            Atom rb = apply_substitution(ob, item.renaming);
            for (const Atom& oh : pairs[i].head) {
                Atom rh = apply_substitution(oh, item.renaming);
                std::vector<Term> names;
                std::string shape;
                render_atom(rb, names, shape);
                shape += ';';
                render_atom(rh, names, shape);
                if (!seen_shapes.insert(shape).second) continue;
                pool.by_sig[{sig_of(rb), sig_of(rh)}].push_back(pool.carriers.size());
                pool.carriers.push_back({std::move(rb), std::move(rh), i});
            }
        }
        pool.items.push_back(std::move(item));
    }
    return pool;
}

/// Union-find over term slots with an optional fixed value per class.
class VarClasses {
public:
    void reset() {
        keys_.clear();
        parent_.clear();
        value_.clear();
        has_value_.clear();
    }
    size_t index(const Term& t) {
        for (size_t i = 0; i < keys_.size(); ++i)
            if (keys_[i] == t) return i;
        keys_.push_back(t);
        parent_.push_back(keys_.size() - 1);
        value_.push_back(Term{});
        has_value_.push_back(false);
        return keys_.size() - 1;
    }
    size_t find(size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
    bool set_value(size_t i, const Term& v) {
        i = find(i);
        if (has_value_[i]) return value_[i] == v;
        has_value_[i] = true;
        value_[i] = v;
        return true;
    }
    bool unite(size_t i, size_t j) {
        i = find(i);
        j = find(j);
        if (i == j) return true;
        if (has_value_[i] && has_value_[j] && value_[i] != value_[j]) return false;
        if (!has_value_[i] && has_value_[j]) {
            has_value_[i] = true;
            value_[i] = value_[j];
        }
        parent_[j] = i;
        return true;
    }
    bool valued(size_t i) { return has_value_[find(i)]; }
    const Term& value_of(size_t i) { return value_[find(i)]; }

private:
    std::vector<Term> keys_;
    std::vector<size_t> parent_;
    std::vector<Term> value_;
    std::vector<char> has_value_;
};

struct Reentry {
    Atom a_prime;
    Substitution theta;
    CycleWitness cycle;
};

/// Re-entry candidates a' = a.theta carried by one (body atom, head atom)
/// shape: the body atom matches c, the head atom maps onto a' under a
/// consistent assignment. Head variables left unconstrained range over the
/// value pool plus one invented variable per slot.
void solve_reentries(const Atom& a, const Atom& c, const Carrier& carrier,
                     const ReentryPool& pool, const std::vector<Term>& value_pool,
                     std::vector<Reentry>& out) {
    thread_local Substitution eta0;
    eta0 = Substitution{};
    if (!match_atom(carrier.body_atom, c, eta0)) return;

    const Atom& h = carrier.head_atom;
    thread_local VarClasses classes;
    classes.reset();
    thread_local std::vector<Term> avars;
    avars.clear();
    for (const Term& t : a.args)
        if (t.is_var() && std::find(avars.begin(), avars.end(), t) == avars.end())
            avars.push_back(t);
    for (const Term& v : avars) classes.index(v);

    for (size_t p = 0; p < a.args.size(); ++p) {
        const Term& ta = a.args[p];
        const Term th = eta0(h.args[p]);
        // an untouched head variable is a free slot of the copy
        const bool th_free = h.args[p].is_var() && th == h.args[p];
        if (!ta.is_var()) {
            if (th_free) {
                if (!classes.set_value(classes.index(th), ta)) return;
            } else if (th != ta) {
                return;
            }
        } else if (!th.is_var()) {
            return;  // theta would have to send a variable to a constant
        } else if (th_free) {
            if (!classes.unite(classes.index(ta), classes.index(th))) return;
        } else {
            if (!classes.set_value(classes.index(ta), th)) return;
        }
    }

    thread_local std::vector<size_t> roots;
    roots.clear();
    for (const Term& v : avars) {
        size_t r = classes.find(classes.index(v));
        if (classes.valued(r) && !classes.value_of(r).is_var()) return;
        if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    thread_local std::vector<size_t> free_roots;
    free_roots.clear();
    for (size_t r : roots)
        if (!classes.valued(r)) free_roots.push_back(r);

    thread_local std::vector<Term> chosen;
    chosen.assign(free_roots.size(), Term{});
    auto value_at = [&](size_t root) -> const Term& {
        if (classes.valued(root)) return classes.value_of(root);
        size_t k = std::find(free_roots.begin(), free_roots.end(), root) - free_roots.begin();
        return chosen[k];
    };

    auto emit = [&]() {
        Reentry r;
        for (const Term& v : avars) {
            const Term& img = value_at(classes.find(classes.index(v)));
            if (v != img) r.theta.bind(v, img);
        }
        r.a_prime = apply_substitution(a, r.theta);
        r.cycle.direct = false;
        r.cycle.via_pair_key = pool.items[carrier.pair_index].src->key;
        r.cycle.via_renaming = pool.items[carrier.pair_index].renaming;
        r.cycle.via_assignment = eta0;
        for (const Term& w : h.args) {
            if (!w.is_var() || eta0(w) != w) continue;
            if (!r.cycle.via_assignment.contains(w))
                r.cycle.via_assignment.bind(w, value_at(classes.find(classes.index(w))));
        }
        r.cycle.body_image = carrier.body_atom;
        r.cycle.head_image = carrier.head_atom;
        out.push_back(std::move(r));
    };

    auto assign = [&](auto&& self, size_t k) -> void {
        if (k == free_roots.size()) {
            emit();
            return;
        }
        for (const Term& v : value_pool) {
            chosen[k] = v;
            self(self, k + 1);
        }
        chosen[k] = Term::variable(pool.invent_prefix + std::to_string(k));
        self(self, k + 1);
    };
    assign(assign, 0);
}

struct ScanContext {
    const AffectedAnalysis* analysis = nullptr;
    const ReentryPool* pool = nullptr;  ///< null: direct cycles only
    bool include_guarded = false;
};

void scan_pair(const ScanContext& ctx, const ExtensionPair& P, std::map<std::string, Rtc>& out) {
    const std::vector<Atom>& B = P.body;
    const std::vector<Atom>& H = P.head;
    const size_t nb = B.size();
    if (nb < 2) return;

    std::set<Term> vhat = var_hat(*ctx.analysis, B);
    if (vhat.size() < 2) return;

    std::vector<std::vector<std::set<Term>>> link(nb, std::vector<std::set<Term>>(nb));
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = i + 1; j < nb; ++j) {
            link[i][j] = link_vars(*ctx.analysis, B, B[i], B[j]);
            link[j][i] = link[i][j];
        }

    // simple chains between two atom indices, shortest and leftmost first
    std::map<std::pair<size_t, size_t>, std::vector<std::vector<size_t>>> chain_cache;
    auto chains_between = [&](size_t ia, size_t ib) -> const std::vector<std::vector<size_t>>& {
        auto it = chain_cache.find({ia, ib});
        if (it != chain_cache.end()) return it->second;
        std::vector<std::vector<size_t>> found;
        std::vector<size_t> cur{ia};
        std::vector<char> used(nb, 0);
        used[ia] = 1;
        auto dfs = [&](auto&& self) -> void {
            size_t last = cur.back();
            if (last == ib) {
                found.push_back(cur);
                return;
            }
            for (size_t j = 0; j < nb; ++j) {
                if (used[j] || link[last][j].empty()) continue;
                used[j] = 1;
                cur.push_back(j);
                self(self);
                cur.pop_back();
                used[j] = 0;
            }
        };
        dfs(dfs);
        std::sort(found.begin(), found.end(),
                  [](const std::vector<size_t>& l, const std::vector<size_t>& r) {
                      if (l.size() != r.size()) return l.size() < r.size();
                      return l < r;
                  });
        return chain_cache.emplace(std::make_pair(ia, ib), std::move(found)).first->second;
    };

    for (const Atom& c : H) {
        std::vector<Term> xz;
        for (const Term& v : vhat)
            if (contains_var(c, v)) xz.push_back(v);
        if (xz.size() < 2) continue;

        std::vector<std::vector<Term>> ends(nb);
        for (size_t i = 0; i < nb; ++i)
            for (const Term& v : xz)
                if (contains_var(B[i], v)) ends[i].push_back(v);

        // a body atom is worth a candidate search only if some other atom
        // can supply z and the combination is not already guarded away
        std::vector<char> feas(nb, 0);
        bool any_feasible = false;
        for (size_t ia = 0; ia < nb; ++ia) {
            if (ends[ia].empty()) continue;
            for (size_t ib = 0; ib < nb && !feas[ia]; ++ib) {
                if (ib == ia || ends[ib].empty()) continue;
                for (const Term& x : ends[ia]) {
                    for (const Term& z : ends[ib]) {
                        if (x == z) continue;
                        if (ctx.include_guarded || !has_guard(B, x, z)) {
                            feas[ia] = 1;
                            break;
                        }
                    }
                    if (feas[ia]) break;
                }
            }
            if (feas[ia]) any_feasible = true;
        }
        if (!any_feasible) continue;

        std::vector<std::vector<Reentry>> cands(nb);
        for (size_t ia = 0; ia < nb; ++ia) {
            if (!feas[ia]) continue;
            Substitution th;
            if (var_to_var_map(B[ia], c, th)) {
                Reentry r;
                r.a_prime = c;
                r.theta = std::move(th);
                cands[ia].push_back(std::move(r));
            }
        }
        if (ctx.pool) {
            std::set<Term> pv = vars_of(B);
            for (const Term& t : c.args)
                if (t.is_var()) pv.insert(t);
            const std::vector<Term> value_pool(pv.begin(), pv.end());
            for (size_t ia = 0; ia < nb; ++ia) {
                if (!feas[ia]) continue;
                auto group = ctx.pool->by_sig.find({sig_of(c), sig_of(B[ia])});
                if (group == ctx.pool->by_sig.end()) continue;
                for (size_t ci : group->second)
                    solve_reentries(B[ia], c, ctx.pool->carriers[ci], *ctx.pool, value_pool,
                                    cands[ia]);
            }
        }
        for (auto& list : cands) {
            std::set<Atom> seen;
            size_t keep = 0;
            for (size_t i = 0; i < list.size(); ++i)
                if (seen.insert(list[i].a_prime).second) {
                    if (keep != i) list[keep] = std::move(list[i]);
                    ++keep;
                }
            list.resize(keep);
        }

        std::map<std::pair<size_t, Atom>, MarkupResult> marks;
        auto margin_ok = [&](size_t ia, const Atom& ap, const Term& y) {
            if (!contains_var(ap, y)) return true;
            auto mk = marks.find({ia, ap});
            if (mk == marks.end())
                mk = marks.emplace(std::make_pair(ia, ap), mark_vars(B[ia], c, ap)).first;
            for (size_t p : positions_of(ap, y)) {
                const Term& t = B[ia].args[p];
                if (t.is_var() && !mk->second.marked.count(t)) return false;
            }
            return true;
        };

        for (size_t ia = 0; ia < nb; ++ia) {
            if (cands[ia].empty()) continue;
            const Atom& a = B[ia];
            for (size_t ib = 0; ib < nb; ++ib) {
                if (ib == ia || ends[ib].empty()) continue;
                const auto& chains = chains_between(ia, ib);
                if (chains.empty()) continue;
                for (const Term& x : ends[ia]) {
                    for (const Term& z : ends[ib]) {
                        if (x == z) continue;
                        const bool guarded = has_guard(B, x, z);
                        if (guarded && !ctx.include_guarded) continue;
                        for (const Reentry& cand : cands[ia]) {
                            if (!contains_var(cand.a_prime, x)) continue;
                            // smallest chain and witness variable passing
                            // the markup side condition
                            const std::vector<size_t>* chain = nullptr;
                            size_t wstep = 0;
                            Term wy;
                            for (const auto& ch : chains) {
                                for (size_t s = 0; s + 1 < ch.size() && !chain; ++s) {
                                    for (const Term& y : link[ch[s]][ch[s + 1]]) {
                                        if (y == x || y == z) continue;
                                        if (margin_ok(ia, cand.a_prime, y)) {
                                            chain = &ch;
                                            wstep = s;
                                            wy = y;
                                            break;
                                        }
                                    }
                                }
                                if (chain) break;
                            }
                            if (!chain) continue;
                            std::string key = core_key(P, a, B[ib], c, cand.a_prime, x, z);
                            if (out.count(key)) continue;
                            Rtc r;
                            r.pair = P;
                            r.a = a;
                            r.b = B[ib];
                            r.c = c;
                            r.a_prime = cand.a_prime;
                            r.x = x;
                            r.z = z;
                            r.theta = cand.theta;
                            r.cycle = cand.cycle;
                            for (size_t idx : *chain) r.path.push_back(B[idx]);
                            for (size_t s = 0; s + 1 < chain->size(); ++s)
                                r.links.push_back(*link[(*chain)[s]][(*chain)[s + 1]].begin());
                            r.y_prime = wy;
                            r.y_prime_step = wstep;
                            r.guarded = guarded;
                            r.key = key;
                            out.emplace(std::move(key), std::move(r));
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

std::vector<Rtc> find_rtcs(const std::vector<Rule>& rules,
                           const std::vector<ExtensionPair>& pairs) {
    AffectedAnalysis analysis = analyze_affected(rules);
    ReentryPool pool = build_pool(pairs);
    ScanContext ctx{&analysis, &pool, /*include_guarded=*/true};
    std::map<std::string, Rtc> found;
    for (const ExtensionPair& p : pairs) scan_pair(ctx, p, found);
    std::vector<Rtc> out;
    out.reserve(found.size());
    for (auto& kv : found) out.push_back(std::move(kv.second));
    return out;
}

bool validate_rtc(const std::vector<Rule>& rules, const std::vector<ExtensionPair>& pairs,
                  const Rtc& rtc) {
    const std::vector<Atom>& B = rtc.pair.body;
    const std::vector<Atom>& H = rtc.pair.head;
    if (rtc.pair.key != canonical_key(B, H)) return false;
    bool known = false;
    for (const ExtensionPair& p : pairs)
        if (p.key == rtc.pair.key) known = true;
    if (!known) return false;

    auto member = [](const std::vector<Atom>& set, const Atom& a) {
        return std::find(set.begin(), set.end(), a) != set.end();
    };
    if (!member(B, rtc.a) || !member(B, rtc.b) || rtc.a == rtc.b) return false;
    if (!member(H, rtc.c)) return false;

    if (!rtc.x.is_var() || !rtc.z.is_var() || rtc.x == rtc.z) return false;
    if (!contains_var(rtc.a, rtc.x) || !contains_var(rtc.b, rtc.z)) return false;
    if (!contains_var(rtc.c, rtc.x) || !contains_var(rtc.c, rtc.z)) return false;

    AffectedAnalysis analysis = analyze_affected(rules);
    std::set<Term> vhat = var_hat(analysis, B);
    if (!vhat.count(rtc.x) || !vhat.count(rtc.z)) return false;

    for (const auto& kv : rtc.theta.mapping) {
        if (!kv.first.is_var() || !kv.second.is_var()) return false;
        if (!contains_var(rtc.a, kv.first)) return false;
    }
    if (apply_substitution(rtc.a, rtc.theta) != rtc.a_prime) return false;
    if (!contains_var(rtc.a_prime, rtc.x)) return false;

    if (rtc.cycle.direct) {
        if (rtc.a_prime != rtc.c) return false;
    } else {
        // re-derive the carrying step from the pairs rather than trusting
        // the recorded assignment
        ReentryPool pool = build_pool(pairs);
        std::set<Term> pv = vars_of(B);
        for (const Term& t : rtc.c.args)
            if (t.is_var()) pv.insert(t);
        const std::vector<Term> value_pool(pv.begin(), pv.end());
        const std::string want = reentry_key(rtc.a, rtc.c, rtc.a_prime);
        bool found = false;
        auto group = pool.by_sig.find({sig_of(rtc.c), sig_of(rtc.a)});
        if (group != pool.by_sig.end()) {
            std::vector<Reentry> hits;
            for (size_t ci : group->second) {
                hits.clear();
                solve_reentries(rtc.a, rtc.c, pool.carriers[ci], pool, value_pool, hits);
                for (const Reentry& r : hits)
                    if (reentry_key(rtc.a, rtc.c, r.a_prime) == want) {
                        found = true;
                        break;
                    }
                if (found) break;
            }
        }
        if (!found) return false;
    }

    if (rtc.path.size() < 2 || rtc.path.front() != rtc.a || rtc.path.back() != rtc.b) return false;
    for (size_t i = 0; i < rtc.path.size(); ++i) {
        if (!member(B, rtc.path[i])) return false;
        for (size_t j = i + 1; j < rtc.path.size(); ++j)
            if (rtc.path[i] == rtc.path[j]) return false;
    }
    if (rtc.links.size() + 1 != rtc.path.size()) return false;
    for (size_t s = 0; s + 1 < rtc.path.size(); ++s) {
        std::set<Term> ls = link_vars(analysis, B, rtc.path[s], rtc.path[s + 1]);
        if (!ls.count(rtc.links[s])) return false;
    }

    if (rtc.y_prime_step + 1 >= rtc.path.size()) return false;
    std::set<Term> ws =
        link_vars(analysis, B, rtc.path[rtc.y_prime_step], rtc.path[rtc.y_prime_step + 1]);
    if (!ws.count(rtc.y_prime)) return false;
    if (rtc.y_prime == rtc.x || rtc.y_prime == rtc.z) return false;
    if (contains_var(rtc.a_prime, rtc.y_prime)) {
        MarkupResult mk = mark_vars(rtc.a, rtc.c, rtc.a_prime);
        for (size_t p : positions_of(rtc.a_prime, rtc.y_prime)) {
            const Term& t = rtc.a.args[p];
            if (t.is_var() && !mk.marked.count(t)) return false;
        }
    }

    if (rtc.guarded != has_guard(B, rtc.x, rtc.z)) return false;
    if (rtc.key != core_key(rtc.pair, rtc.a, rtc.b, rtc.c, rtc.a_prime, rtc.x, rtc.z))
        return false;
    return true;
}

Verdict is_triangularly_guarded(const std::vector<Rule>& rules, const ExtensionBudgets& budgets) {
    AffectedAnalysis analysis = analyze_affected(rules);
    std::map<std::string, Rtc> hits;
    ScanContext direct{&analysis, nullptr, /*include_guarded=*/false};
    int rounds = 0;
    RoundObserver watch = [&](const std::vector<ExtensionPair>& pairs, int round,
                              size_t first_new) {
        rounds = round;
        for (size_t i = first_new; i < pairs.size(); ++i) scan_pair(direct, pairs[i], hits);
        return hits.empty();
    };
    ExtensionResult ext = compute_extension(rules, budgets, watch);

    Verdict v;
    v.pairs_explored = ext.pairs.size();
    v.rounds = rounds;
    v.saturated = ext.saturated;
    if (hits.empty()) {
        // no direct cycle anywhere: only carried cycles can remain
        ReentryPool pool = build_pool(ext.pairs);
        ScanContext full{&analysis, &pool, /*include_guarded=*/false};
        for (const ExtensionPair& p : ext.pairs) scan_pair(full, p, hits);
    }
    if (!hits.empty()) {
        v.outcome = Verdict::Outcome::NonMember;
        v.witness = hits.begin()->second;
    } else if (ext.saturated) {
        v.outcome = Verdict::Outcome::Member;
    } else {
        v.outcome = Verdict::Outcome::Unknown;
        v.reason = ext.note.empty() ? "extension stopped before saturation" : ext.note;
    }
    return v;
}

Verdict is_triangularly_guarded(const std::vector<Rule>& rules) {
    return is_triangularly_guarded(rules, default_budgets(rules));
}

}  // namespace tg
