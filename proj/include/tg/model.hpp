#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tg {

enum class TermKind : uint8_t { Constant = 0, Null = 1, Variable = 2 };

/// Interned string pool shared by constants, variables and relation names.
/// Ids are stable within a process run; all externally visible orderings
/// compare by name, never by id, so output does not depend on intern order.
class SymbolTable {
public:
    static SymbolTable& instance() {
        static SymbolTable table;
        return table;
    }
    int32_t intern(const std::string& name);
    const std::string& name(int32_t id) const { return names_[static_cast<size_t>(id)]; }

private:
    std::vector<std::string> names_;
    std::map<std::string, int32_t> ids_;
};

/// A term: constant, labeled null, or variable. Constants and variables
/// are interned by name; nulls carry their creation index (printed _:n<i>).
struct Term {
    TermKind kind = TermKind::Constant;
    int32_t id = 0;

    static Term constant(const std::string& name);
    static Term variable(const std::string& name);
    static Term null(int32_t index);

    bool is_var() const { return kind == TermKind::Variable; }
    bool is_const() const { return kind == TermKind::Constant; }
    bool is_null() const { return kind == TermKind::Null; }

    /// Name for variables/constants; "_:n<i>" for nulls.
    std::string text() const;

    bool operator==(const Term& o) const { return kind == o.kind && id == o.id; }
    bool operator!=(const Term& o) const { return !(*this == o); }
    bool operator<(const Term& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (id == o.id) return false;
        if (kind == TermKind::Null) return id < o.id;
        const SymbolTable& tab = SymbolTable::instance();
        return tab.name(id) < tab.name(o.id);
    }
};

struct Atom {
    int32_t rel = 0;
    std::vector<Term> args;

    Atom() = default;
    Atom(const std::string& relation, std::vector<Term> arguments);

    size_t arity() const { return args.size(); }
    const std::string& relation() const { return SymbolTable::instance().name(rel); }
    std::string text() const;

    bool operator==(const Atom& o) const { return rel == o.rel && args == o.args; }
    bool operator!=(const Atom& o) const { return !(*this == o); }
    bool operator<(const Atom& o) const {
        if (rel != o.rel && relation() != o.relation()) return relation() < o.relation();
        if (args.size() != o.args.size()) return args.size() < o.args.size();
        for (size_t i = 0; i < args.size(); ++i) {
            if (args[i] != o.args[i]) return args[i] < o.args[i];
        }
        return false;
    }
};

/// Flat map from terms to terms, sorted by key. Domains are small enough
/// that a sorted vector beats a node-based map; the interface mirrors the
/// std::map subset the code uses.
class TermMap {
public:
    using value_type = std::pair<Term, Term>;
    using const_iterator = std::vector<value_type>::const_iterator;

    const_iterator begin() const { return entries_.begin(); }
    const_iterator end() const { return entries_.end(); }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const_iterator find(const Term& k) const {
        auto it = lower_bound(k);
        return it != entries_.end() && it->first == k ? it : entries_.end();
    }
    size_t count(const Term& k) const { return find(k) != end() ? 1 : 0; }

    Term& operator[](const Term& k) {
        auto it = entries_.begin() + (lower_bound(k) - entries_.begin());
        if (it == entries_.end() || it->first != k) it = entries_.insert(it, {k, Term{}});
        return it->second;
    }

    bool operator==(const TermMap& o) const { return entries_ == o.entries_; }
    bool operator<(const TermMap& o) const { return entries_ < o.entries_; }

private:
    const_iterator lower_bound(const Term& k) const {
        return std::lower_bound(entries_.begin(), entries_.end(), k,
                                [](const value_type& e, const Term& t) { return e.first < t; });
    }

    std::vector<value_type> entries_;
};

/// Variable-to-term mapping, identity outside its domain. Constants are
/// never keys; applying a substitution leaves them unchanged.
struct Substitution {
    TermMap mapping;

    Term operator()(const Term& t) const {
        auto it = mapping.find(t);
        return it == mapping.end() ? t : it->second;
    }
    bool contains(const Term& v) const { return mapping.count(v) != 0; }
    void bind(const Term& v, const Term& t);

    bool operator==(const Substitution& o) const { return mapping == o.mapping; }
};

/// theta2 after theta1: x -> theta2(theta1(x)).
Substitution compose(const Substitution& theta2, const Substitution& theta1);

/// Restriction of theta to the given terms.
Substitution restrict_to(const Substitution& theta, const std::set<Term>& domain);

struct Rule {
    std::string id;
    std::vector<Atom> body;
    std::vector<Atom> head;
    std::set<Term> existentials;  ///< head variables absent from the body

    void compute_existentials();
};

struct Query {
    std::vector<Atom> body;
};

struct Program {
    std::vector<Atom> facts;
    std::vector<Rule> rules;
    std::vector<Query> queries;
};

std::set<Term> vars_of(const Atom& a);
std::set<Term> vars_of(const std::vector<Atom>& atoms);
std::set<Term> terms_of(const Atom& a);
std::set<Term> terms_of(const std::vector<Atom>& atoms);
std::set<Term> nulls_of(const std::vector<Atom>& atoms);

/// Argument positions of a at which the term t occurs (arg(a) restricted to t).
std::vector<size_t> positions_of(const Atom& a, const Term& t);

/// Sorted, duplicate-free copy (atom sets are kept in this form).
std::vector<Atom> normalize_atom_set(std::vector<Atom> atoms);

}  // namespace tg
