#include "tg/unify.hpp"

#include <algorithm>
#include <map>

namespace tg {

Atom apply_substitution(const Atom& a, const Substitution& theta) {
    Atom out = a;
    for (Term& t : out.args) {
        if (t.is_var()) t = theta(t);
    }
    return out;
}

std::vector<Atom> apply_substitution(const std::vector<Atom>& atoms, const Substitution& theta) {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) out.push_back(apply_substitution(a, theta));
    return normalize_atom_set(std::move(out));
}

namespace {

/// Union-find over the variables of a unification problem; each class may
/// carry at most one non-variable value. Terms are flat, so there is no
/// occurs check. Problems are tiny, so variables live in a flat vector and
/// lookups scan it. Storage is reused across instances, so at most one may
/// be live per thread at a time.
class Classes {
public:
    Classes() {
        vars_.clear();
        parent_.clear();
        value_.clear();
        has_value_.clear();
    }

    bool unite(const Term& s, const Term& t) {
        if (s.is_var() && t.is_var()) return unite_vars(s, t);
        if (s.is_var()) return set_value(s, t);
        if (t.is_var()) return set_value(t, s);
        return s == t;
    }

    Substitution solution() {
        Substitution out;
        for (size_t i = 0; i < vars_.size(); ++i) {
            size_t root = find(i);
            if (root != i) continue;
            Term image;
            if (has_value_[root]) {
                image = value_[root];
            } else {
                image = vars_[root];
                for (size_t j = 0; j < vars_.size(); ++j) {
                    if (find(j) == root && vars_[j] < image) image = vars_[j];
                }
            }
            for (size_t j = 0; j < vars_.size(); ++j) {
                if (find(j) == root && vars_[j] != image) out.bind(vars_[j], image);
            }
        }
        return out;
    }

private:
    static thread_local std::vector<Term> vars_;
    static thread_local std::vector<size_t> parent_;
    static thread_local std::vector<Term> value_;
    static thread_local std::vector<char> has_value_;

    size_t index_of(const Term& v) {
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == v) return i;
        }
        vars_.push_back(v);
        parent_.push_back(vars_.size() - 1);
        value_.push_back(Term{});
        has_value_.push_back(0);
        return vars_.size() - 1;
    }

    size_t find(size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    bool unite_vars(const Term& a, const Term& b) {
        size_t ra = find(index_of(a)), rb = find(index_of(b));
        if (ra == rb) return true;
        if (has_value_[ra] && has_value_[rb] && value_[ra] != value_[rb]) return false;
        parent_[rb] = ra;
        if (has_value_[rb] && !has_value_[ra]) {
            value_[ra] = value_[rb];
            has_value_[ra] = 1;
        }
        return true;
    }

    bool set_value(const Term& v, const Term& val) {
        size_t r = find(index_of(v));
        if (has_value_[r]) return value_[r] == val;
        value_[r] = val;
        has_value_[r] = 1;
        return true;
    }
};

thread_local std::vector<Term> Classes::vars_;
thread_local std::vector<size_t> Classes::parent_;
thread_local std::vector<Term> Classes::value_;
thread_local std::vector<char> Classes::has_value_;

std::optional<Substitution> solve(const std::vector<std::pair<const Atom*, const Atom*>>& equations) {
    Classes classes;
    for (const auto& [lhs, rhs] : equations) {
        if (lhs->rel != rhs->rel || lhs->arity() != rhs->arity()) return std::nullopt;
        for (size_t i = 0; i < lhs->args.size(); ++i) {
            if (!classes.unite(lhs->args[i], rhs->args[i])) return std::nullopt;
        }
    }
    return classes.solution();
}

}  // namespace

std::vector<Substitution> enumerate_set_unifiers(const std::vector<Atom>& s1,
                                                 const std::vector<Atom>& s2) {
    if (s1.empty() && s2.empty()) return {Substitution{}};
    if (s1.empty() || s2.empty()) return {};
    if (s1.size() == 1 && s2.size() == 1) {
        thread_local std::vector<std::pair<const Atom*, const Atom*>> one;
        one.assign(1, {&s1[0], &s2[0]});
        auto sol = solve(one);
        if (!sol) return {};
        return {std::move(*sol)};
    }

    thread_local std::vector<std::vector<size_t>> compat;
    compat.assign(s1.size(), {});
    for (size_t i = 0; i < s1.size(); ++i) {
        for (size_t j = 0; j < s2.size(); ++j) {
            if (s1[i].rel == s2[j].rel && s1[i].arity() == s2[j].arity()) compat[i].push_back(j);
        }
        if (compat[i].empty()) return {};
    }

    std::vector<Substitution> results;
    thread_local std::vector<size_t> choice, uncovered;
    thread_local std::vector<char> covered;
    thread_local std::vector<std::vector<size_t>> back;
    thread_local std::vector<std::pair<const Atom*, const Atom*>> equations;
    choice.resize(s1.size());

    auto try_covering = [&]() {
        auto sol = solve(equations);
        if (!sol) return;
        if (std::find(results.begin(), results.end(), *sol) == results.end()) {
            results.push_back(std::move(*sol));
        }
    };

    // Choose a partner in s2 for every atom of s1, then a partner in s1 for
    // every atom of s2 left uncovered, so the pairing covers both sides.
    size_t total = 1;
    for (const auto& c : compat) total *= c.size();
    for (size_t n = 0; n < total; ++n) {
        size_t rem = n;
        for (size_t i = 0; i < s1.size(); ++i) {
            choice[i] = compat[i][rem % compat[i].size()];
            rem /= compat[i].size();
        }
        covered.assign(s2.size(), 0);
        for (size_t i = 0; i < s1.size(); ++i) covered[choice[i]] = 1;
        uncovered.clear();
        for (size_t j = 0; j < s2.size(); ++j) {
            if (!covered[j]) uncovered.push_back(j);
        }

        back.assign(uncovered.size(), {});
        bool feasible = true;
        for (size_t u = 0; u < uncovered.size(); ++u) {
            for (size_t i = 0; i < s1.size(); ++i) {
                if (s1[i].rel == s2[uncovered[u]].rel && s1[i].arity() == s2[uncovered[u]].arity()) {
                    back[u].push_back(i);
                }
            }
            if (back[u].empty()) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;

        equations.clear();
        for (size_t i = 0; i < s1.size(); ++i) equations.emplace_back(&s1[i], &s2[choice[i]]);
        size_t base = equations.size();
        size_t back_total = 1;
        for (const auto& b : back) back_total *= b.size();
        for (size_t m = 0; m < back_total; ++m) {
            equations.resize(base);
            size_t brem = m;
            for (size_t u = 0; u < uncovered.size(); ++u) {
                size_t i = back[u][brem % back[u].size()];
                brem /= back[u].size();
                equations.emplace_back(&s1[i], &s2[uncovered[u]]);
            }
            try_covering();
        }
    }
    return results;
}

std::optional<Substitution> mgu(const std::vector<Atom>& s1, const std::vector<Atom>& s2) {
    std::vector<Substitution> all = enumerate_set_unifiers(s1, s2);
    if (all.empty()) return std::nullopt;
    const Substitution* best = &all.front();
    for (const Substitution& s : all) {
        if (s.mapping < best->mapping) best = &s;
    }
    return *best;
}

bool is_connected(const std::vector<Atom>& tuple) {
    if (tuple.empty()) throw std::invalid_argument("is_connected: empty tuple");
    for (size_t i = 0; i + 1 < tuple.size(); ++i) {
        std::set<Term> a = terms_of(tuple[i]);
        std::set<Term> b = terms_of(tuple[i + 1]);
        bool shared = false;
        for (const Term& t : a) {
            if (b.count(t)) {
                shared = true;
                break;
            }
        }
        if (!shared) return false;
    }
    return true;
}

bool match_atom(const Atom& pattern, const Atom& target, Substitution& binding) {
    if (pattern.rel != target.rel || pattern.arity() != target.arity()) return false;
    for (size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        const Term& t = target.args[i];
        if (p.is_var()) {
            auto it = binding.mapping.find(p);
            if (it == binding.mapping.end()) {
                binding.bind(p, t);
            } else if (it->second != t) {
                return false;
            }
        } else if (p != t) {
            return false;
        }
    }
    return true;
}

}  // namespace tg
