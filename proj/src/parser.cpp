#include "finlog/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <vector>

namespace finlog {

namespace {

enum class Tok {
    Ident, Int,
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Dot, Equals, Bang, Amp, Pipe, Arrow, DArrow, Geq,
    End,
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Int: return "integer";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Equals: return "'='";
        case Tok::Bang: return "'!'";
        case Tok::Amp: return "'&'";
        case Tok::Pipe: return "'|'";
        case Tok::Arrow: return "'->'";
        case Tok::DArrow: return "'<->'";
        case Tok::Geq: return "'>='";
        case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        int start_col = col;
        auto advance = [&](std::size_t k) { i += k; col += int(k); };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            std::size_t j = i;
            // '-' joins an identifier (oracle names like nonempty-P) unless it
            // starts the '->' arrow
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                    text[j] == '$' ||
                    (text[j] == '-' && j + 1 < text.size() && text[j + 1] != '>' &&
                     text[j + 1] != '-')))
                ++j;
            out.push_back({Tok::Ident, text.substr(i, j - i), line, start_col});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            out.push_back({Tok::Int, text.substr(i, j - i), line, start_col});
            advance(j - i);
            continue;
        }
        auto two = text.substr(i, 2);
        auto three = text.substr(i, 3);
        if (three == "<->") {
            out.push_back({Tok::DArrow, three, line, start_col});
            advance(3);
            continue;
        }
        if (two == "->") {
            out.push_back({Tok::Arrow, two, line, start_col});
            advance(2);
            continue;
        }
        if (two == ">=") {
            out.push_back({Tok::Geq, two, line, start_col});
            advance(2);
            continue;
        }
        Tok k;
        switch (c) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '{': k = Tok::LBrace; break;
            case '}': k = Tok::RBrace; break;
            case '[': k = Tok::LBracket; break;
            case ']': k = Tok::RBracket; break;
            case ',': k = Tok::Comma; break;
            case '.': k = Tok::Dot; break;
            case '=': k = Tok::Equals; break;
            case '!': k = Tok::Bang; break;
            case '&': k = Tok::Amp; break;
            case '|': k = Tok::Pipe; break;
            default:
                throw ParseError(line, start_col, "a token", std::string(1, c));
        }
        out.push_back({k, std::string(1, c), line, start_col});
        advance(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

const std::set<std::string>& reserved() {
    static const std::set<std::string> words{"exists", "forall", "true", "false",
                                             "And",    "Or",     "E",    "I",
                                             "J",      "Q",      "QK",   "W"};
    return words;
}

struct Parser {
    std::vector<Token> toks;
    std::size_t pos = 0;

    const Token& peek(std::size_t ahead = 0) const {
        return toks[std::min(pos + ahead, toks.size() - 1)];
    }
    Token take() { return toks[pos == toks.size() - 1 ? pos : pos++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        throw ParseError(t.line, t.col, expected,
                         t.kind == Tok::End ? "end of input" : t.text);
    }

    Token expect(Tok kind) {
        if (peek().kind != kind)
            fail(tok_name(kind));
        return take();
    }

    std::string variable() {
        const Token& t = peek();
        if (t.kind != Tok::Ident)
            fail("variable");
        if (reserved().count(t.text))
            fail("variable (got reserved word)");
        if (t.text[0] == '$')
            fail("variable (no '$' prefix)");
        if (t.text.find('-') != std::string::npos)
            fail("variable (alphanumeric only)");
        return take().text;
    }

    int integer() {
        auto t = expect(Tok::Int);
        return std::stoi(t.text);
    }

    bool at_quantifier() const {
        const Token& t = peek();
        if (t.kind != Tok::Ident)
            return false;
        return t.text == "exists" || t.text == "forall" || t.text == "Q" || t.text == "I" ||
               t.text == "J" || t.text == "W" || t.text == "QK" ||
               (t.text == "E" && peek(1).kind == Tok::Geq);
    }

    // quantifiers are reachable through primary(), where the open-scope forms
    // (exists, forall, E>=, Q, W, QK) swallow everything to their right and
    // the closed forms (I, J) compose like atoms
    FormulaPtr formula() { return iff(); }

    FormulaPtr quantified() {
        auto kw = take();
        if (kw.text == "exists" || kw.text == "forall") {
            auto v = variable();
            expect(Tok::Dot);
            auto body = formula();
            return kw.text == "exists" ? mk_exists(v, std::move(body))
                                       : mk_forall(v, std::move(body));
        }
        if (kw.text == "E") {
            expect(Tok::Geq);
            int k = integer();
            if (k < 1)
                throw ParseError(kw.line, kw.col, "threshold >= 1", std::to_string(k));
            auto v = variable();
            expect(Tok::Dot);
            return mk_count_at_least(k, v, formula());
        }
        if (kw.text == "Q") {
            auto v = variable();
            expect(Tok::Dot);
            return mk_schematic_q(v, formula());
        }
        if (kw.text == "I" || kw.text == "J") {
            auto x = variable();
            auto y = variable();
            expect(Tok::Dot);
            expect(Tok::LParen);
            auto left = formula();
            expect(Tok::RParen);
            expect(Tok::LParen);
            auto right = formula();
            expect(Tok::RParen);
            return kw.text == "I" ? mk_hartig(x, y, std::move(left), std::move(right))
                                  : mk_rescher(x, y, std::move(left), std::move(right));
        }
        if (kw.text == "W") {
            auto x = variable();
            auto y = variable();
            if (x == y)
                throw ParseError(kw.line, kw.col, "two distinct variables", x + " " + y);
            expect(Tok::Dot);
            return mk_well_order(x, y, formula());
        }
        // QK[name] v1 v2 ... . body
        expect(Tok::LBracket);
        auto name = expect(Tok::Ident).text;
        expect(Tok::RBracket);
        std::vector<std::string> vars;
        vars.push_back(variable());
        while (peek().kind == Tok::Ident)
            vars.push_back(variable());
        {
            auto sorted = vars;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw ParseError(kw.line, kw.col, "distinct variables", "duplicate variable");
        }
        expect(Tok::Dot);
        return mk_oracle_q(name, vars, formula());
    }

    FormulaPtr iff() {
        auto lhs = implication();
        while (peek().kind == Tok::DArrow) {
            take();
            lhs = mk_iff(std::move(lhs), implication());
        }
        return lhs;
    }

    FormulaPtr implication() {
        auto lhs = disjunction();
        if (peek().kind == Tok::Arrow) {
            take();
            return mk_implies(std::move(lhs), implication());
        }
        return lhs;
    }

    FormulaPtr disjunction() {
        auto lhs = conjunction();
        while (peek().kind == Tok::Pipe) {
            take();
            lhs = mk_or(std::move(lhs), conjunction());
        }
        return lhs;
    }

    FormulaPtr conjunction() {
        auto lhs = unary();
        while (peek().kind == Tok::Amp) {
            take();
            lhs = mk_and(std::move(lhs), unary());
        }
        return lhs;
    }

    FormulaPtr unary() {
        if (peek().kind == Tok::Bang) {
            take();
            return mk_not(unary());
        }
        return primary();
    }

    FormulaPtr primary() {
        if (at_quantifier())
            return quantified();
        const Token& t = peek();
        if (t.kind == Tok::LParen) {
            take();
            auto inner = formula();
            expect(Tok::RParen);
            return inner;
        }
        if (t.kind != Tok::Ident)
            fail("a formula");
        if (t.text == "true") {
            take();
            return mk_true();
        }
        if (t.text == "false") {
            take();
            return mk_false();
        }
        if ((t.text == "And" || t.text == "Or") && peek(1).kind == Tok::LBrace) {
            bool conj = t.text == "And";
            take();
            take();
            std::vector<FormulaPtr> parts;
            parts.push_back(formula());
            while (peek().kind == Tok::Comma) {
                take();
                parts.push_back(formula());
            }
            expect(Tok::RBrace);
            return conj ? mk_big_and(std::move(parts)) : mk_big_or(std::move(parts));
        }
        if (reserved().count(t.text))
            fail("a formula (got reserved word)");
        if (t.text.find('-') != std::string::npos)
            fail("a formula (names with '-' are only oracle names)");
        auto name = take().text;
        if (peek().kind == Tok::LParen) {
            take();
            std::vector<std::string> args;
            if (peek().kind != Tok::RParen) {
                args.push_back(variable());
                while (peek().kind == Tok::Comma) {
                    take();
                    args.push_back(variable());
                }
            }
            expect(Tok::RParen);
            return mk_rel(name, args);
        }
        if (peek().kind == Tok::Equals) {
            if (name[0] == '$')
                fail("variable (no '$' prefix)");
            take();
            return mk_equal(name, variable());
        }
        fail("'(' or '='");
    }
};

}  // namespace

bool is_reserved_word(const std::string& word) {
    return reserved().count(word) > 0;
}

FormulaPtr parse_formula(const std::string& text) {
    Parser p{lex(text)};
    auto f = p.formula();
    if (p.peek().kind != Tok::End)
        p.fail("end of input");
    return f;
}

}  // namespace finlog
