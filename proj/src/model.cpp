#include "tg/model.hpp"

#include <algorithm>

namespace tg {

int32_t SymbolTable::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int32_t id = static_cast<int32_t>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
}

Term Term::constant(const std::string& name) {
    return Term{TermKind::Constant, SymbolTable::instance().intern(name)};
}

Term Term::variable(const std::string& name) {
    return Term{TermKind::Variable, SymbolTable::instance().intern(name)};
}

Term Term::null(int32_t index) {
    return Term{TermKind::Null, index};
}

std::string Term::text() const {
    if (kind == TermKind::Null) return "_:n" + std::to_string(id);
    return SymbolTable::instance().name(id);
}

Atom::Atom(const std::string& relation, std::vector<Term> arguments)
    : rel(SymbolTable::instance().intern(relation)), args(std::move(arguments)) {}

std::string Atom::text() const {
    std::string out = relation();
    if (args.empty()) return out;
    out += '(';
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += args[i].text();
    }
    out += ')';
    return out;
}

void Substitution::bind(const Term& v, const Term& t) {
    if (!v.is_var()) throw std::invalid_argument("substitution key must be a variable");
    mapping[v] = t;
}

Substitution compose(const Substitution& theta2, const Substitution& theta1) {
    Substitution out;
    for (const auto& [v, t] : theta1.mapping) out.mapping[v] = theta2(t);
    for (const auto& [v, t] : theta2.mapping) {
        if (!theta1.contains(v)) out.mapping[v] = t;
    }
    return out;
}

Substitution restrict_to(const Substitution& theta, const std::set<Term>& domain) {
    Substitution out;
    for (const auto& [v, t] : theta.mapping) {
        if (domain.count(v)) out.mapping[v] = t;
    }
    return out;
}

void Rule::compute_existentials() {
    existentials.clear();
    std::set<Term> body_vars = vars_of(body);
    for (const Term& v : vars_of(head)) {
        if (!body_vars.count(v)) existentials.insert(v);
    }
}

std::set<Term> vars_of(const Atom& a) {
    std::set<Term> out;
    for (const Term& t : a.args) {
        if (t.is_var()) out.insert(t);
    }
    return out;
}

std::set<Term> vars_of(const std::vector<Atom>& atoms) {
    std::set<Term> out;
    for (const Atom& a : atoms) {
        for (const Term& t : a.args) {
            if (t.is_var()) out.insert(t);
        }
    }
    return out;
}

std::set<Term> terms_of(const Atom& a) {
    return std::set<Term>(a.args.begin(), a.args.end());
}

std::set<Term> terms_of(const std::vector<Atom>& atoms) {
    std::set<Term> out;
    for (const Atom& a : atoms) out.insert(a.args.begin(), a.args.end());
    return out;
}

std::set<Term> nulls_of(const std::vector<Atom>& atoms) {
    std::set<Term> out;
    for (const Atom& a : atoms) {
        for (const Term& t : a.args) {
            if (t.is_null()) out.insert(t);
        }
    }
    return out;
}

std::vector<size_t> positions_of(const Atom& a, const Term& t) {
    std::vector<size_t> out;
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i] == t) out.push_back(i);
    }
    return out;
}

std::vector<Atom> normalize_atom_set(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

}  // namespace tg
