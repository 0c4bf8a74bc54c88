#include "tg/chase.hpp"

#include <algorithm>

#include "tg/rtc.hpp"
#include "tg/unify.hpp"

namespace tg {

namespace {

std::map<int32_t, std::vector<Atom>> index_by_relation(const ChaseInstance& I) {
    std::map<int32_t, std::vector<Atom>> idx;
    for (const auto& [atom, rec] : I.atoms) idx[atom.rel].push_back(atom);
    return idx;
}

/// Backtracking enumeration of substitutions sending the pattern into the
/// indexed atoms. Injective mode keeps variable images pairwise distinct and
/// away from the barred terms (the pattern's own constants). Every candidate
/// extension counts against the cap. When first_only is set, the search
/// stops at the first full match.
struct Matcher {
    const std::vector<Atom>& pattern;
    const std::map<int32_t, std::vector<Atom>>& idx;
    bool injective = false;
    bool first_only = false;
    std::set<Term> barred;
    size_t cap = 0;
    size_t tried = 0;
    std::vector<Substitution> out;

    bool run() {
        Substitution empty;
        return descend(0, empty);
    }

    bool descend(size_t i, Substitution& partial) {
        if (i == pattern.size()) {
            out.push_back(partial);
            return first_only;
        }
        auto it = idx.find(pattern[i].rel);
        if (it == idx.end()) return false;
        for (const Atom& target : it->second) {
            if (++tried > cap) throw ResourceLimitError("match enumeration exceeded the candidate cap");
            Substitution next = partial;
            if (!match_atom(pattern[i], target, next)) continue;
            if (injective && !injective_ok(next)) continue;
            if (descend(i + 1, next)) return true;
        }
        return false;
    }

    bool injective_ok(const Substitution& s) const {
        std::vector<Term> images;
        images.reserve(s.mapping.size());
        for (const auto& [v, t] : s.mapping) {
            if (barred.count(t)) return false;
            images.push_back(t);
        }
        std::sort(images.begin(), images.end());
        return std::adjacent_find(images.begin(), images.end()) == images.end();
    }
};

int32_t max_null_index(const std::vector<Atom>& atoms) {
    int32_t m = 0;
    for (const Atom& a : atoms) {
        for (const Term& t : a.args) {
            if (t.is_null()) m = std::max(m, t.id);
        }
    }
    return m;
}

/// Fires a trigger in place. The assignment must already be restricted to
/// the body variables and the instantiated body must be inside I.
void fire_trigger(ChaseInstance& I, const Rule& sigma, const Substitution& eta) {
    int body_level = 0;
    for (const Atom& b : sigma.body) {
        body_level = std::max(body_level, I.atoms.at(apply_substitution(b, eta)).level);
    }
    Substitution extended = eta;
    for (const Term& v : sigma.existentials) {
        extended.bind(v, Term::null(I.next_null++));
    }
    int level = body_level + 1;
    for (const Atom& h : sigma.head) {
        Atom img = apply_substitution(h, extended);
        auto it = I.atoms.find(img);
        if (it == I.atoms.end()) {
            I.atoms.emplace(img, ChaseAtom{img, level, Provenance{sigma.id, eta}});
            I.saturated = false;
            I.depth = std::max(I.depth, level);
        } else if (level < it->second.level) {
            it->second.level = level;
            it->second.provenance = Provenance{sigma.id, eta};
        }
    }
    I.fired.insert({sigma.id, eta.mapping});
}

struct PendingTrigger {
    int32_t max_null;
    size_t rule_index;
    Substitution assignment;

    /// Deepest instantiated null first, then program order, then the
    /// assignment itself (constants sort before nulls, nulls by index).
    bool operator<(const PendingTrigger& o) const {
        if (max_null != o.max_null) return max_null > o.max_null;
        if (rule_index != o.rule_index) return rule_index < o.rule_index;
        return assignment.mapping < o.assignment.mapping;
    }
};

}  // namespace

ChaseInstance chase_step(const ChaseInstance& I, const Rule& sigma, const Substitution& eta) {
    Substitution body_eta = restrict_to(eta, vars_of(sigma.body));
    std::vector<Atom> image;
    for (const Atom& b : sigma.body) {
        Atom img = apply_substitution(b, body_eta);
        if (!vars_of(img).empty()) {
            throw std::invalid_argument("chase_step: assignment does not ground body atom " +
                                        b.text());
        }
        if (!I.contains(img)) {
            throw std::invalid_argument("chase_step: trigger body atom " + img.text() +
                                        " is not in the instance");
        }
        image.push_back(img);
    }
    ChaseInstance out = I;
    if (out.fired.count({sigma.id, body_eta.mapping})) return out;
    fire_trigger(out, sigma, body_eta);
    return out;
}

ChaseRun chase_to_level_capped(const std::vector<Atom>& D, const std::vector<Rule>& rules, int k,
                               const ChaseBudgets& budgets) {
    ChaseRun run;
    ChaseInstance& I = run.instance;
    for (const Atom& a : normalize_atom_set(D)) {
        if (!vars_of(a).empty()) {
            throw std::invalid_argument("database atom contains a variable: " + a.text());
        }
        I.atoms.emplace(a, ChaseAtom{a, 0, Provenance{}});
        for (const Term& t : a.args) {
            if (t.is_null()) I.next_null = std::max(I.next_null, t.id + 1);
        }
    }
    if (I.size() > budgets.max_atoms) {
        run.hit_cap = true;
        return run;
    }
    for (int level = 1; level <= k; ++level) {
        auto idx = index_by_relation(I);
        std::vector<PendingTrigger> pending;
        for (size_t r = 0; r < rules.size(); ++r) {
            Matcher m{rules[r].body, idx, false, false, {}, budgets.max_maps, 0, {}};
            try {
                m.run();
            } catch (const ResourceLimitError&) {
                run.hit_cap = true;
                return run;
            }
            for (Substitution& eta : m.out) {
                if (I.fired.count({rules[r].id, eta.mapping})) continue;
                int32_t deep = max_null_index(apply_substitution(rules[r].body, eta));
                pending.push_back(PendingTrigger{deep, r, std::move(eta)});
            }
        }
        if (pending.empty()) {
            I.saturated = true;
            break;
        }
        std::sort(pending.begin(), pending.end());
        for (const PendingTrigger& p : pending) {
            fire_trigger(I, rules[p.rule_index], p.assignment);
            if (I.size() > budgets.max_atoms) {
                run.hit_cap = true;
                I.depth = level;
                return run;
            }
        }
    }
    I.depth = k;
    return run;
}

ChaseInstance chase_to_level(const std::vector<Atom>& D, const std::vector<Rule>& rules, int k,
                             const ChaseBudgets& budgets) {
    ChaseRun run = chase_to_level_capped(D, rules, k, budgets);
    if (run.hit_cap) {
        throw ResourceLimitError("chase exceeded its resource budget at level " +
                                 std::to_string(run.instance.depth));
    }
    return run.instance;
}

namespace {

std::vector<Term> nulls_of_instance(const ChaseInstance& I) {
    std::set<Term> seen;
    for (const auto& [atom, rec] : I.atoms) {
        for (const Term& t : atom.args) {
            if (t.is_null()) seen.insert(t);
        }
    }
    return std::vector<Term>(seen.begin(), seen.end());
}

/// Searches for a null-to-null re-mapping of the image tuple that sends ni
/// and nj to a common null and keeps every re-mapped atom inside I. The
/// domain is the image's nulls with nj folded into ni; values range over
/// all nulls of I.
struct MergeSearch {
    const std::vector<Atom>& image;
    const ChaseInstance& I;
    Term ni, nj;
    const std::vector<Term>& values;
    size_t cap = 0;
    size_t* tried = nullptr;

    std::vector<Term> domain;
    std::vector<std::vector<size_t>> due;  ///< image atoms fully mapped once domain[d] is set
    TermMap assignment;

    bool run() {
        std::set<Term> nulls;
        for (const Atom& a : image) {
            for (const Term& t : a.args) {
                if (t.is_null() && t != nj) nulls.insert(t);
            }
        }
        domain.assign(nulls.begin(), nulls.end());
        due.assign(domain.size(), {});
        for (size_t ai = 0; ai < image.size(); ++ai) {
            size_t last = 0;
            for (const Term& t : image[ai].args) {
                if (!t.is_null()) continue;
                Term key = t == nj ? ni : t;
                size_t pos = static_cast<size_t>(
                    std::lower_bound(domain.begin(), domain.end(), key) - domain.begin());
                last = std::max(last, pos);
            }
            due[last].push_back(ai);
        }
        return assign(0);
    }

    Term mapped(const Term& t) const {
        if (!t.is_null()) return t;
        Term key = t == nj ? ni : t;
        return assignment.find(key)->second;
    }

    bool assign(size_t d) {
        if (d == domain.size()) return true;
        for (const Term& v : values) {
            if (++*tried > cap) {
                throw ResourceLimitError("null re-mapping search exceeded the candidate cap");
            }
            assignment[domain[d]] = v;
            bool ok = true;
            for (size_t ai : due[d]) {
                Atom img = image[ai];
                for (Term& t : img.args) t = mapped(t);
                if (!I.contains(img)) {
                    ok = false;
                    break;
                }
            }
            if (ok && assign(d + 1)) return true;
        }
        return false;
    }
};

}  // namespace

bool interchangeable(const Term& ni, const Term& nj, const std::vector<Atom>& pattern,
                     const ChaseInstance& I, const ChaseBudgets& budgets) {
    if (!ni.is_null() || !nj.is_null()) {
        throw std::invalid_argument("interchangeable expects two labeled nulls");
    }
    if (pattern.empty() || ni == nj) return true;

    std::set<Term> barred;
    for (const Atom& a : pattern) {
        for (const Term& t : a.args) {
            if (!t.is_var()) barred.insert(t);
        }
    }
    auto idx = index_by_relation(I);
    Matcher m{pattern, idx, true, false, std::move(barred), budgets.max_maps, 0, {}};
    m.run();

    std::vector<Term> values = nulls_of_instance(I);
    size_t tried = 0;
    for (const Substitution& theta : m.out) {
        std::vector<Atom> image;
        image.reserve(pattern.size());
        for (const Atom& a : pattern) image.push_back(apply_substitution(a, theta));
        if (!is_connected(image)) continue;
        std::set<Term> image_nulls = nulls_of(image);
        if (!image_nulls.count(ni) || !image_nulls.count(nj)) continue;
        MergeSearch search{image, I, ni, nj, values, budgets.max_maps, &tried, {}, {}, {}};
        if (!search.run()) return false;
    }
    return true;
}

std::map<int32_t, int> null_birth_levels(const ChaseInstance& I) {
    std::map<int32_t, int> birth;
    for (const auto& [atom, rec] : I.atoms) {
        for (const Term& t : atom.args) {
            if (!t.is_null()) continue;
            auto it = birth.find(t.id);
            if (it == birth.end() || rec.level < it->second) birth[t.id] = rec.level;
        }
    }
    return birth;
}

std::optional<int> interchange_horizon(const ChaseInstance& I,
                                       const std::vector<std::vector<Atom>>& patterns,
                                       const ChaseBudgets& budgets) {
    std::map<int32_t, int> birth = null_birth_levels(I);
    for (int N = 1; N <= I.depth - 3; ++N) {
        std::vector<Term> early;
        std::vector<Term> late;
        for (const auto& [index, level] : birth) {
            (level <= N ? early : late).push_back(Term::null(index));
        }
        if (late.empty()) return N;
        if (early.empty()) continue;
        bool all_covered = true;
        for (const Term& n : late) {
            for (const std::vector<Atom>& pattern : patterns) {
                bool covered = false;
                for (const Term& m : early) {
                    if (interchangeable(n, m, pattern, I, budgets)) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) {
                    all_covered = false;
                    break;
                }
            }
            if (!all_covered) break;
        }
        if (all_covered) return N;
    }
    return std::nullopt;
}

BcqAnswer answer_bcq(const std::vector<Atom>& D, const std::vector<Rule>& rules, const Query& Q,
                     int depth_limit, bool auto_mode, const ChaseBudgets& budgets) {
    BcqAnswer ans;
    ChaseRun run = chase_to_level_capped(D, rules, depth_limit, budgets);
    const ChaseInstance& I = run.instance;

    auto idx = index_by_relation(I);
    Matcher m{Q.body, idx, false, true, {}, budgets.max_maps, 0, {}};
    bool search_capped = false;
    try {
        m.run();
    } catch (const ResourceLimitError&) {
        search_capped = true;
    }
    if (!m.out.empty()) {
        const Substitution& hom = m.out.front();
        int found_level = 0;
        for (const Atom& q : Q.body) {
            Atom img = apply_substitution(q, hom);
            auto it = I.atoms.find(img);
            if (it == I.atoms.end()) {
                throw std::logic_error("query homomorphism failed its membership re-check");
            }
            found_level = std::max(found_level, it->second.level);
        }
        ans.status = BcqAnswer::Status::Yes;
        ans.hom = hom;
        ans.depth = found_level;
        ans.note = "homomorphism found at level " + std::to_string(found_level);
        return ans;
    }
    if (search_capped) {
        ans.status = BcqAnswer::Status::Unknown;
        ans.depth = I.depth;
        ans.note = "match search exceeded the candidate cap";
        return ans;
    }
    if (run.hit_cap) {
        ans.status = BcqAnswer::Status::Unknown;
        ans.depth = I.depth;
        ans.note = "chase exceeded the atom budget before the depth limit";
        return ans;
    }
    if (I.saturated) {
        ans.status = BcqAnswer::Status::No;
        ans.certified = true;
        ans.depth = I.depth;
        ans.note = "chase saturated with no match";
        return ans;
    }
    if (auto_mode) {
        Verdict verdict = is_triangularly_guarded(rules);
        if (verdict.outcome == Verdict::Outcome::Member) {
            std::vector<std::vector<Atom>> patterns;
            patterns.push_back(Q.body);
            for (const Rule& r : rules) patterns.push_back(r.body);
            std::optional<int> horizon;
            std::string cap_note;
            try {
                horizon = interchange_horizon(I, patterns, budgets);
            } catch (const ResourceLimitError&) {
                cap_note = "; interchange search exceeded the candidate cap";
            }
            if (horizon) {
                ans.status = BcqAnswer::Status::No;
                ans.certified = true;
                ans.depth = I.depth;
                ans.note = "no match; nulls born after level " + std::to_string(*horizon) +
                           " only repeat earlier structure";
                return ans;
            }
            ans.note = cap_note;
        }
    }
    ans.status = BcqAnswer::Status::No;
    ans.certified = false;
    ans.depth = I.depth;
    ans.note = "no match up to the depth limit" + ans.note;
    return ans;
}

}  // namespace tg
