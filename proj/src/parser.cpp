#include "tg/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace tg {

namespace {

struct Token {
    enum Kind { Ident, Var, LParen, RParen, Comma, Dot, Arrow, Query, Colon, End } kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= src_.size()) return {Token::End, "", line, col};
        char c = src_[pos_];
        if (c == '(') return advance({Token::LParen, "(", line, col});
        if (c == ')') return advance({Token::RParen, ")", line, col});
        if (c == ',') return advance({Token::Comma, ",", line, col});
        if (c == '.') return advance({Token::Dot, ".", line, col});
        if (c == ':') return advance({Token::Colon, ":", line, col});
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            advance({});
            advance({});
            return {Token::Arrow, "->", line, col};
        }
        if (c == '?' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
            advance({});
            advance({});
            return {Token::Query, "?-", line, col};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                word += src_[pos_];
                advance({});
            }
            bool upper = std::isupper(static_cast<unsigned char>(word[0]));
            return {upper ? Token::Var : Token::Ident, word, line, col};
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }

private:
    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    Token advance(Token t) {
        if (pos_ < src_.size()) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        return t;
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance({});
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance({});
            } else {
                break;
            }
        }
    }
};

class Parser {
public:
    explicit Parser(const std::string& src) : lexer_(src) { shift(); }

    Program parse() {
        Program p;
        int rule_counter = 0;
        while (tok_.kind != Token::End) {
            if (tok_.kind == Token::Query) {
                shift();
                Query q;
                q.body = atom_list();
                expect(Token::Dot, "'.'");
                q.body = normalize_atom_set(std::move(q.body));
                p.queries.push_back(std::move(q));
                continue;
            }
            std::vector<Atom> first = atom_list();
            if (tok_.kind == Token::Arrow) {
                shift();
                Rule r;
                r.id = "r" + std::to_string(++rule_counter);
                r.body = normalize_atom_set(std::move(first));
                std::set<Term> declared;
                bool has_declared = false;
                if (tok_.kind == Token::Ident && tok_.text == "exists") {
                    has_declared = true;
                    shift();
                    declared.insert(variable_token());
                    while (tok_.kind == Token::Comma) {
                        shift();
                        declared.insert(variable_token());
                    }
                    expect(Token::Colon, "':' after exists list");
                }
                r.head = normalize_atom_set(atom_list());
                expect(Token::Dot, "'.'");
                r.compute_existentials();
                if (has_declared && declared != r.existentials) {
                    throw ParseError(tok_.line, tok_.column,
                                     "declared existentials do not match head variables "
                                     "missing from the body");
                }
                p.rules.push_back(std::move(r));
            } else {
                expect(Token::Dot, "'.' or '->'");
                for (const Atom& a : first) {
                    if (!vars_of(a).empty()) {
                        throw ParseError(tok_.line, tok_.column,
                                         "fact " + a.text() + " contains a variable");
                    }
                    p.facts.push_back(a);
                }
            }
        }
        p.facts = normalize_atom_set(std::move(p.facts));
        return p;
    }

private:
    Lexer lexer_;
    Token tok_;
    std::map<std::string, size_t> arities_;

    void shift() { tok_ = lexer_.next(); }

    void expect(Token::Kind kind, const std::string& what) {
        if (tok_.kind != kind) {
            throw ParseError(tok_.line, tok_.column,
                             "expected " + what + ", found '" + tok_.text + "'");
        }
        shift();
    }

    Term variable_token() {
        if (tok_.kind != Token::Var) {
            throw ParseError(tok_.line, tok_.column, "expected a variable");
        }
        Term v = Term::variable(tok_.text);
        shift();
        return v;
    }

    std::vector<Atom> atom_list() {
        std::vector<Atom> out;
        out.push_back(atom());
        while (tok_.kind == Token::Comma) {
            shift();
            out.push_back(atom());
        }
        return out;
    }

    Atom atom() {
        if (tok_.kind != Token::Ident) {
            throw ParseError(tok_.line, tok_.column,
                             "expected a relation name, found '" + tok_.text + "'");
        }
        std::string rel = tok_.text;
        int line = tok_.line, col = tok_.column;
        shift();
        std::vector<Term> args;
        if (tok_.kind == Token::LParen) {
            shift();
            if (tok_.kind != Token::RParen) {
                args.push_back(term());
                while (tok_.kind == Token::Comma) {
                    shift();
                    args.push_back(term());
                }
            }
            expect(Token::RParen, "')'");
        }
        auto it = arities_.find(rel);
        if (it == arities_.end()) {
            arities_.emplace(rel, args.size());
        } else if (it->second != args.size()) {
            throw ParseError(line, col,
                             "relation " + rel + " used with arity " + std::to_string(args.size()) +
                                 " but previously with arity " + std::to_string(it->second));
        }
        return Atom(rel, std::move(args));
    }

    Term term() {
        if (tok_.kind == Token::Var) {
            Term v = Term::variable(tok_.text);
            shift();
            return v;
        }
        if (tok_.kind == Token::Ident) {
            Term c = Term::constant(tok_.text);
            shift();
            return c;
        }
        throw ParseError(tok_.line, tok_.column, "expected a term, found '" + tok_.text + "'");
    }
};

std::string atom_list_text(const std::vector<Atom>& atoms) {
    std::string out;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += ", ";
        out += atoms[i].text();
    }
    return out;
}

}  // namespace

Program parse_program(const std::string& text) {
    return Parser(text).parse();
}

std::string serialize_program(const Program& p) {
    std::string out;
    for (const Atom& f : p.facts) out += f.text() + ".\n";
    for (const Rule& r : p.rules) {
        out += atom_list_text(r.body) + " -> ";
        if (!r.existentials.empty()) {
            out += "exists ";
            bool first = true;
            for (const Term& v : r.existentials) {
                if (!first) out += ", ";
                out += v.text();
                first = false;
            }
            out += ": ";
        }
        out += atom_list_text(r.head) + ".\n";
    }
    for (const Query& q : p.queries) out += "?- " + atom_list_text(q.body) + ".\n";
    return out;
}

}  // namespace tg
