#pragma once

#include "derivations.hpp"

#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

// Text front end: a small declaration/script language for sessions.
//
//   field F degree 3 cyclic shift
//   character chi on F inf (2, -2) (0, 0) (-2, 2) csd supercuspidal
//   rep Pi = induce chi
//   script oddfinal_n3_s2 {
//     let m1 = axiom main Pi eta1 at 0
//     let i1 = axiom induction Pi eta1 at 0
//     let b1 = axiom blasius chi * normpull(eta1, F) at 0
//     let q1 = chain m1 i1 b1
//     let r1 = solve q1 for AUTP(Pi, 2)
//     target r1 : AUTP(Pi, 2) ~ DISC(F) * GAUSS(eps_K)^-1 * P(check chi, {~s1, s2, s3}) modulo E(chi)
//   }
//
// parse() checks syntax and references and returns the abstract session;
// print() renders the canonical form (parse . print = id on abstract
// sessions); Runner executes declarations and replays scripts.

namespace periodcalc::dsl {

// --- tokens -----------------------------------------------------------------

enum class Tok {
    Ident,
    Number, // integer or integer/integer, possibly negative
    String,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Star,
    Caret,
    Equal,
    Tilde,
    Colon,
    End
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Rational number{0};
    int line = 1;
    int col = 1;
};

inline std::vector<Token> lex(const std::string& src)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto bump = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') { // comment to end of line
            while (i < src.size() && src[i] != '\n') {
                bump(src[i]);
                ++i;
            }
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump(c);
            ++i;
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        auto push1 = [&](Tok k) {
            t.kind = k;
            t.text = std::string(1, c);
            bump(c);
            ++i;
            out.push_back(t);
        };
        switch (c) {
        case '(': push1(Tok::LParen); continue;
        case ')': push1(Tok::RParen); continue;
        case '{': push1(Tok::LBrace); continue;
        case '}': push1(Tok::RBrace); continue;
        case ',': push1(Tok::Comma); continue;
        case '*': push1(Tok::Star); continue;
        case '^': push1(Tok::Caret); continue;
        case '=': push1(Tok::Equal); continue;
        case '~': push1(Tok::Tilde); continue;
        case ':': push1(Tok::Colon); continue;
        default: break;
        }
        if (c == '"') {
            bump(c);
            ++i;
            std::string s;
            while (i < src.size() && src[i] != '"') {
                s += src[i];
                bump(src[i]);
                ++i;
            }
            if (i == src.size())
                throw ParseError(t.line, t.col, "unterminated string literal");
            bump(src[i]);
            ++i;
            t.kind = Tok::String;
            t.text = s;
            out.push_back(t);
            continue;
        }
        bool neg = c == '-';
        if (neg || (c >= '0' && c <= '9')) {
            std::size_t j = i + (neg ? 1 : 0);
            if (neg && (j >= src.size() || src[j] < '0' || src[j] > '9'))
                throw ParseError(line, col, "stray '-'", "a number");
            std::size_t start = i;
            std::size_t k = j;
            while (k < src.size() && src[k] >= '0' && src[k] <= '9')
                ++k;
            if (k < src.size() && src[k] == '/' && k + 1 < src.size() && src[k + 1] >= '0' && src[k + 1] <= '9') {
                ++k;
                while (k < src.size() && src[k] >= '0' && src[k] <= '9')
                    ++k;
            }
            std::string text = src.substr(start, k - start);
            auto r = parse_rational(text);
            if (!r)
                throw ParseError(line, col, "bad number '" + text + "'");
            t.kind = Tok::Number;
            t.text = text;
            t.number = *r;
            for (std::size_t p = start; p < k; ++p)
                bump(src[p]);
            i = k;
            out.push_back(t);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t k = i;
            while (k < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[k])) || src[k] == '_' || src[k] == '.'))
                ++k;
            t.kind = Tok::Ident;
            t.text = src.substr(i, k - i);
            for (std::size_t p = i; p < k; ++p)
                bump(src[p]);
            i = k;
            out.push_back(t);
            continue;
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

// --- abstract syntax --------------------------------------------------------

enum class GaloisAction { Default, Shift, Perm };

struct AstField {
    std::string name;
    int degree = 1;
    bool cyclic = false;
    GaloisAction action = GaloisAction::Default;
    std::vector<int> perm;
    friend bool operator==(const AstField&, const AstField&) = default;
};

struct AstCompositum {
    std::string name, left, right;
    friend bool operator==(const AstCompositum&, const AstCompositum&) = default;
};

struct AstCoeff {
    std::string atom;
    std::string contains; // empty = plain declaration
    friend bool operator==(const AstCoeff&, const AstCoeff&) = default;
};

struct AstCharacter {
    std::string name, field;
    std::vector<std::pair<Rational, Rational>> exps;
    bool csd = false;
    bool supercuspidal = false;
    std::string rationality; // empty = default E(name)
    friend bool operator==(const AstCharacter&, const AstCharacter&) = default;
};

struct AstPsi {
    std::string name;
    friend bool operator==(const AstPsi&, const AstPsi&) = default;
};

struct AstRep {
    std::string name, chi;
    friend bool operator==(const AstRep&, const AstRep&) = default;
};

struct AstCharExpr {
    enum class K { Name, Check, Conj, Inv, NormPull, NormPow, Prod };
    K k = K::Name;
    std::string name;   // Name; NormPull target field
    Rational kappa{0};  // NormPow
    std::vector<AstCharExpr> children;
    friend bool operator==(const AstCharExpr&, const AstCharExpr&) = default;
};

struct AstEmbedding {
    bool barred = false;
    int index = 1;
    friend bool operator==(const AstEmbedding&, const AstEmbedding&) = default;
};

struct AstSymbol {
    enum class K { TwoPiI, Disc, Gauss, P, AutP, Arch, LVal, Unit };
    K k = K::TwoPiI;
    std::string name;  // Disc/Gauss/AutP(rep)/Unit atom/LVal text
    std::string name2; // Arch second rep
    AstCharExpr chr;   // P
    std::vector<AstEmbedding> cmtype; // P
    bool braces = false;              // P: written with {..}
    int s = 0;                        // AutP s / Arch m
    friend bool operator==(const AstSymbol&, const AstSymbol&) = default;
};

struct AstMonomial {
    // "1" is the empty product
    std::vector<std::pair<AstSymbol, Rational>> factors;
    friend bool operator==(const AstMonomial&, const AstMonomial&) = default;
};

struct AstAxiom {
    enum class K { Blasius, Main, Induction, Pairing, PairIdent };
    K k = K::Blasius;
    AstCharExpr chr;     // blasius
    std::string rep, rep2, eta, over; // main/induction/pairing/pairident
    Rational at{0};
    friend bool operator==(const AstAxiom&, const AstAxiom&) = default;
};

struct AstChain {
    std::vector<std::string> handles;
    friend bool operator==(const AstChain&, const AstChain&) = default;
};

struct AstSolve {
    std::string handle;
    AstSymbol symbol;
    friend bool operator==(const AstSolve&, const AstSolve&) = default;
};

struct AstLet {
    std::string name;
    std::variant<AstAxiom, AstChain, AstSolve> value;
    friend bool operator==(const AstLet&, const AstLet&) = default;
};

struct AstAssert {
    AstMonomial lhs, rhs;
    std::vector<std::string> modulo;
    friend bool operator==(const AstAssert&, const AstAssert&) = default;
};

struct AstTarget {
    std::string handle;
    AstMonomial lhs, rhs;
    std::vector<std::string> modulo;
    friend bool operator==(const AstTarget&, const AstTarget&) = default;
};

struct AstStatement;

struct AstScript {
    std::string name;
    std::vector<AstStatement> items;
    friend bool operator==(const AstScript&, const AstScript&);
};

struct AstStatement {
    std::variant<AstField, AstCompositum, AstCoeff, AstCharacter, AstPsi, AstRep, AstLet, AstAssert, AstTarget,
                 AstScript>
        node;
    friend bool operator==(const AstStatement&, const AstStatement&) = default;
};

inline bool operator==(const AstScript& a, const AstScript& b)
{
    return a.name == b.name && a.items == b.items;
}

struct AstSession {
    std::vector<AstStatement> statements;
    friend bool operator==(const AstSession&, const AstSession&) = default;
};

// --- parser ------------------------------------------------------------------

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(lex(src))
    {
        fields_["K"] = FieldInfo{1, "", ""}; // the base field is always in scope
    }

    AstSession parse_session()
    {
        AstSession s;
        while (!at(Tok::End))
            s.statements.push_back(statement(false));
        return s;
    }

private:
    struct FieldInfo {
        int degree;
        std::string left, right; // compositum parents, empty otherwise
    };

    const Token& peek(int ahead = 0) const
    {
        std::size_t i = pos_ + static_cast<std::size_t>(ahead);
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_kw(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

    Token expect(Tok k, const std::string& what)
    {
        if (!at(k))
            throw ParseError(peek().line, peek().col, "unexpected '" + describe(peek()) + "'", what);
        return toks_[pos_++];
    }
    Token expect_kw(const char* kw)
    {
        if (!at_kw(kw))
            throw ParseError(peek().line, peek().col, "unexpected '" + describe(peek()) + "'",
                             std::string("'") + kw + "'");
        return toks_[pos_++];
    }
    bool accept_kw(const char* kw)
    {
        if (at_kw(kw)) {
            ++pos_;
            return true;
        }
        return false;
    }

    static std::string describe(const Token& t)
    {
        if (t.kind == Tok::End)
            return "end of input";
        return t.text;
    }

    [[noreturn]] void fail(const Token& t, const std::string& message, const std::string& expected = "")
    {
        throw ParseError(t.line, t.col, message, expected);
    }

    int field_degree(const Token& t)
    {
        auto it = fields_.find(t.text);
        if (it == fields_.end())
            fail(t, "unknown field '" + t.text + "'");
        return it->second.degree;
    }

    AstStatement statement(bool in_script)
    {
        const Token& t = peek();
        if (t.kind != Tok::Ident)
            fail(t, "expected a statement", "a keyword");
        if (t.text == "field")
            return {field_stmt()};
        if (t.text == "compositum")
            return {compositum_stmt()};
        if (t.text == "coeff")
            return {coeff_stmt()};
        if (t.text == "character")
            return {character_stmt()};
        if (t.text == "psi")
            return {psi_stmt()};
        if (t.text == "rep")
            return {rep_stmt()};
        if (t.text == "script") {
            if (in_script)
                fail(t, "scripts cannot nest");
            return {script_stmt()};
        }
        if (in_script) {
            if (t.text == "let")
                return {let_stmt()};
            if (t.text == "assert")
                return {assert_stmt()};
            if (t.text == "target")
                return {target_stmt()};
        }
        fail(t, "unknown statement '" + t.text + "'");
    }

    AstField field_stmt()
    {
        expect_kw("field");
        AstField f;
        f.name = expect(Tok::Ident, "field name").text;
        if (fields_.count(f.name))
            fail(toks_[pos_ - 1], "duplicate field '" + f.name + "'");
        expect_kw("degree");
        Token deg = expect(Tok::Number, "degree");
        if (!is_integer(deg.number) || deg.number < Rational(1))
            fail(deg, "degree must be a positive integer");
        f.degree = static_cast<int>(to_integer(deg.number));
        f.cyclic = accept_kw("cyclic");
        if (accept_kw("shift")) {
            f.action = GaloisAction::Shift;
        } else if (accept_kw("perm")) {
            f.action = GaloisAction::Perm;
            expect(Tok::LParen, "'('");
            for (;;) {
                Token n = expect(Tok::Number, "permutation image");
                if (!is_integer(n.number))
                    fail(n, "permutation image must be an integer");
                f.perm.push_back(static_cast<int>(to_integer(n.number)));
                if (!at(Tok::Comma))
                    break;
                ++pos_;
            }
            expect(Tok::RParen, "')'");
        }
        fields_[f.name] = FieldInfo{f.degree, "", ""};
        return f;
    }

    AstCompositum compositum_stmt()
    {
        expect_kw("compositum");
        AstCompositum c;
        c.name = expect(Tok::Ident, "field name").text;
        if (fields_.count(c.name))
            fail(toks_[pos_ - 1], "duplicate field '" + c.name + "'");
        expect(Tok::Equal, "'='");
        Token l = expect(Tok::Ident, "field name");
        c.left = l.text;
        int dl = field_degree(l);
        expect(Tok::Star, "'*'");
        Token r = expect(Tok::Ident, "field name");
        c.right = r.text;
        int dr = field_degree(r);
        fields_[c.name] = FieldInfo{dl * dr, c.left, c.right};
        return c;
    }

    std::string coeff_atom()
    {
        Token t = expect(Tok::Ident, "coefficient field");
        std::string atom = t.text;
        if (at(Tok::LParen)) {
            ++pos_;
            Token inner = expect(Tok::Ident, "name");
            expect(Tok::RParen, "')'");
            atom += "(" + inner.text + ")";
        }
        return atom;
    }

    AstCoeff coeff_stmt()
    {
        expect_kw("coeff");
        AstCoeff c;
        c.atom = coeff_atom();
        coeffs_.insert(c.atom);
        if (accept_kw("contains")) {
            c.contains = coeff_atom();
            coeffs_.insert(c.contains);
        }
        return c;
    }

    AstCharacter character_stmt()
    {
        expect_kw("character");
        AstCharacter c;
        c.name = expect(Tok::Ident, "character name").text;
        if (chars_.count(c.name))
            fail(toks_[pos_ - 1], "duplicate character '" + c.name + "'");
        expect_kw("on");
        Token f = expect(Tok::Ident, "field name");
        c.field = f.text;
        int degree = field_degree(f);
        expect_kw("inf");
        while (at(Tok::LParen)) {
            ++pos_;
            Token a = expect(Tok::Number, "exponent");
            expect(Tok::Comma, "','");
            Token b = expect(Tok::Number, "exponent");
            expect(Tok::RParen, "')'");
            c.exps.emplace_back(a.number, b.number);
        }
        if (static_cast<int>(c.exps.size()) != degree)
            fail(peek(), "character '" + c.name + "' needs " + std::to_string(degree) + " exponent pairs, got " +
                             std::to_string(c.exps.size()));
        for (;;) {
            if (accept_kw("csd")) {
                c.csd = true;
            } else if (accept_kw("supercuspidal")) {
                c.supercuspidal = true;
            } else if (accept_kw("rationality")) {
                c.rationality = coeff_atom();
                coeffs_.insert(c.rationality);
            } else {
                break;
            }
        }
        chars_[c.name] = c.field;
        coeffs_.insert(c.rationality.empty() ? "E(" + c.name + ")" : c.rationality);
        return c;
    }

    AstPsi psi_stmt()
    {
        expect_kw("psi");
        AstPsi p;
        p.name = expect(Tok::Ident, "character name").text;
        if (chars_.count(p.name))
            fail(toks_[pos_ - 1], "duplicate character '" + p.name + "'");
        chars_[p.name] = "K";
        coeffs_.insert("E(" + p.name + ")");
        return p;
    }

    AstRep rep_stmt()
    {
        expect_kw("rep");
        AstRep r;
        r.name = expect(Tok::Ident, "representation name").text;
        if (reps_.count(r.name))
            fail(toks_[pos_ - 1], "duplicate representation '" + r.name + "'");
        expect(Tok::Equal, "'='");
        expect_kw("induce");
        Token chi = expect(Tok::Ident, "character name");
        if (!chars_.count(chi.text))
            fail(chi, "unknown character '" + chi.text + "'");
        r.chi = chi.text;
        reps_.insert(r.name);
        return r;
    }

    AstScript script_stmt()
    {
        expect_kw("script");
        AstScript s;
        s.name = expect(Tok::Ident, "script name").text;
        if (scripts_.count(s.name))
            fail(toks_[pos_ - 1], "duplicate script '" + s.name + "'");
        scripts_.insert(s.name);
        handles_.clear();
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace))
            s.items.push_back(statement(true));
        expect(Tok::RBrace, "'}'");
        return s;
    }

    AstLet let_stmt()
    {
        expect_kw("let");
        AstLet l;
        l.name = expect(Tok::Ident, "relation handle").text;
        if (handles_.count(l.name))
            fail(toks_[pos_ - 1], "duplicate relation handle '" + l.name + "'");
        expect(Tok::Equal, "'='");
        if (at_kw("axiom")) {
            l.value = axiom_expr();
        } else if (at_kw("chain")) {
            ++pos_;
            AstChain c;
            while (at(Tok::Ident) && handles_.count(peek().text)) {
                c.handles.push_back(peek().text);
                ++pos_;
            }
            if (c.handles.size() < 2)
                fail(peek(), "chain needs at least two known relation handles");
            l.value = c;
        } else if (at_kw("solve")) {
            ++pos_;
            AstSolve sv;
            Token h = expect(Tok::Ident, "relation handle");
            if (!handles_.count(h.text))
                fail(h, "unknown relation handle '" + h.text + "'");
            sv.handle = h.text;
            expect_kw("for");
            sv.symbol = symbol();
            l.value = sv;
        } else {
            fail(peek(), "expected axiom, chain or solve");
        }
        handles_.insert(l.name);
        return l;
    }

    AstAxiom axiom_expr()
    {
        expect_kw("axiom");
        AstAxiom a;
        if (accept_kw("blasius")) {
            a.k = AstAxiom::K::Blasius;
            a.chr = char_expr();
        } else if (at_kw("main") || at_kw("induction")) {
            a.k = peek().text == "main" ? AstAxiom::K::Main : AstAxiom::K::Induction;
            ++pos_;
            Token rep = expect(Tok::Ident, "representation name");
            if (!reps_.count(rep.text))
                fail(rep, "unknown representation '" + rep.text + "'");
            a.rep = rep.text;
            Token eta = expect(Tok::Ident, "character name");
            if (!chars_.count(eta.text))
                fail(eta, "unknown character '" + eta.text + "'");
            a.eta = eta.text;
        } else if (at_kw("pairing") || at_kw("pairident")) {
            a.k = peek().text == "pairing" ? AstAxiom::K::Pairing : AstAxiom::K::PairIdent;
            ++pos_;
            Token rep = expect(Tok::Ident, "representation name");
            if (!reps_.count(rep.text))
                fail(rep, "unknown representation '" + rep.text + "'");
            a.rep = rep.text;
            Token rep2 = expect(Tok::Ident, "representation name");
            if (!reps_.count(rep2.text))
                fail(rep2, "unknown representation '" + rep2.text + "'");
            a.rep2 = rep2.text;
        } else {
            fail(peek(), "unknown axiom '" + peek().text + "'");
        }
        expect_kw("at");
        a.at = expect(Tok::Number, "argument").number;
        if (a.k == AstAxiom::K::PairIdent) {
            expect_kw("over");
            Token over = expect(Tok::Ident, "compositum field");
            field_degree(over);
            a.over = over.text;
        }
        return a;
    }

    AstAssert assert_stmt()
    {
        expect_kw("assert");
        AstAssert s;
        s.lhs = monomial();
        expect(Tok::Tilde, "'~'");
        s.rhs = monomial();
        expect_kw("modulo");
        s.modulo = coeff_join();
        return s;
    }

    AstTarget target_stmt()
    {
        expect_kw("target");
        AstTarget t;
        Token h = expect(Tok::Ident, "relation handle");
        if (!handles_.count(h.text))
            fail(h, "unknown relation handle '" + h.text + "'");
        t.handle = h.text;
        expect(Tok::Colon, "':'");
        t.lhs = monomial();
        expect(Tok::Tilde, "'~'");
        t.rhs = monomial();
        expect_kw("modulo");
        t.modulo = coeff_join();
        return t;
    }

    std::vector<std::string> coeff_join()
    {
        std::vector<std::string> atoms;
        atoms.push_back(checked_coeff_atom());
        while (at(Tok::Star)) {
            ++pos_;
            atoms.push_back(checked_coeff_atom());
        }
        return atoms;
    }

    std::string checked_coeff_atom()
    {
        Token t = peek();
        std::string atom = coeff_atom();
        if (atom != "Q" && atom != "K" && !coeffs_.count(atom))
            fail(t, "unknown coefficient field '" + atom + "'");
        return atom;
    }

    AstCharExpr char_expr()
    {
        AstCharExpr first = char_term();
        if (!at(Tok::Star))
            return first;
        AstCharExpr prod;
        prod.k = AstCharExpr::K::Prod;
        prod.children.push_back(std::move(first));
        while (at(Tok::Star)) {
            ++pos_;
            prod.children.push_back(char_term());
        }
        return prod;
    }

    AstCharExpr char_term()
    {
        Token t = peek();
        if (accept_kw("check")) {
            AstCharExpr e;
            e.k = AstCharExpr::K::Check;
            e.children.push_back(char_term());
            return e;
        }
        if (accept_kw("conj")) {
            AstCharExpr e;
            e.k = AstCharExpr::K::Conj;
            e.children.push_back(char_term());
            return e;
        }
        if (accept_kw("inv")) {
            AstCharExpr e;
            e.k = AstCharExpr::K::Inv;
            e.children.push_back(char_term());
            return e;
        }
        if (accept_kw("normpull")) {
            AstCharExpr e;
            e.k = AstCharExpr::K::NormPull;
            expect(Tok::LParen, "'('");
            e.children.push_back(char_expr());
            expect(Tok::Comma, "','");
            Token f = expect(Tok::Ident, "field name");
            field_degree(f);
            e.name = f.text;
            expect(Tok::RParen, "')'");
            return e;
        }
        if (accept_kw("normpow")) {
            AstCharExpr e;
            e.k = AstCharExpr::K::NormPow;
            expect(Tok::LParen, "'('");
            e.kappa = expect(Tok::Number, "exponent").number;
            expect(Tok::RParen, "')'");
            return e;
        }
        if (at(Tok::LParen)) {
            ++pos_;
            AstCharExpr e = char_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        Token name = expect(Tok::Ident, "character name");
        if (!chars_.count(name.text))
            fail(name, "unknown character '" + name.text + "'");
        AstCharExpr e;
        e.k = AstCharExpr::K::Name;
        e.name = name.text;
        return e;
    }

    // Field of a character expression, for validating CM-type indices.
    std::string char_expr_field(const AstCharExpr& e)
    {
        switch (e.k) {
        case AstCharExpr::K::Name: return chars_.at(e.name);
        case AstCharExpr::K::Check:
        case AstCharExpr::K::Conj:
        case AstCharExpr::K::Inv: return char_expr_field(e.children[0]);
        case AstCharExpr::K::NormPull: return e.name;
        case AstCharExpr::K::NormPow: return "K";
        case AstCharExpr::K::Prod: {
            std::string f = char_expr_field(e.children[0]);
            for (const auto& c : e.children)
                if (char_expr_field(c) != f)
                    fail(peek(), "character product mixes fields " + f + " and " + char_expr_field(c));
            return f;
        }
        }
        return "K";
    }

    AstEmbedding embedding(int degree)
    {
        AstEmbedding e;
        if (at(Tok::Tilde)) {
            ++pos_;
            e.barred = true;
        }
        Token t = expect(Tok::Ident, "embedding (s<i>)");
        if (t.text.size() < 2 || t.text[0] != 's')
            fail(t, "embeddings are written s<i> or ~s<i>");
        int idx = 0;
        for (std::size_t i = 1; i < t.text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
                fail(t, "embeddings are written s<i> or ~s<i>");
            idx = idx * 10 + (t.text[i] - '0');
        }
        if (idx < 1 || idx > degree)
            fail(t, "embedding index " + std::to_string(idx) + " out of range 1.." + std::to_string(degree));
        e.index = idx;
        return e;
    }

    AstSymbol symbol()
    {
        Token t = expect(Tok::Ident, "period symbol");
        AstSymbol s;
        if (t.text == "TWO_PI_I") {
            s.k = AstSymbol::K::TwoPiI;
            return s;
        }
        if (t.text == "DISC" || t.text == "GAUSS" || t.text == "UNIT" || t.text == "LVAL") {
            expect(Tok::LParen, "'('");
            if (t.text == "DISC") {
                s.k = AstSymbol::K::Disc;
                Token f = expect(Tok::Ident, "field name");
                field_degree(f);
                s.name = f.text;
            } else if (t.text == "GAUSS") {
                s.k = AstSymbol::K::Gauss;
                s.name = expect(Tok::Ident, "Gauss symbol").text;
            } else if (t.text == "UNIT") {
                s.k = AstSymbol::K::Unit;
                s.name = checked_coeff_atom();
            } else {
                s.k = AstSymbol::K::LVal;
                s.name = expect(Tok::String, "string label").text;
            }
            expect(Tok::RParen, "')'");
            return s;
        }
        if (t.text == "P") {
            s.k = AstSymbol::K::P;
            expect(Tok::LParen, "'('");
            s.chr = char_expr();
            expect(Tok::Comma, "','");
            int degree = fields_.at(char_expr_field(s.chr)).degree;
            if (at(Tok::LBrace)) {
                s.braces = true;
                ++pos_;
                if (!at(Tok::RBrace))
                    for (;;) {
                        s.cmtype.push_back(embedding(degree));
                        if (!at(Tok::Comma))
                            break;
                        ++pos_;
                    }
                expect(Tok::RBrace, "'}'");
            } else {
                s.cmtype.push_back(embedding(degree));
            }
            expect(Tok::RParen, "')'");
            return s;
        }
        if (t.text == "AUTP") {
            s.k = AstSymbol::K::AutP;
            expect(Tok::LParen, "'('");
            Token rep = expect(Tok::Ident, "representation name");
            if (!reps_.count(rep.text))
                fail(rep, "unknown representation '" + rep.text + "'");
            s.name = rep.text;
            expect(Tok::Comma, "','");
            Token idx = expect(Tok::Number, "index s");
            if (!is_integer(idx.number))
                fail(idx, "index must be an integer");
            s.s = static_cast<int>(to_integer(idx.number));
            expect(Tok::RParen, "')'");
            return s;
        }
        if (t.text == "ARCH") {
            s.k = AstSymbol::K::Arch;
            expect(Tok::LParen, "'('");
            Token m = expect(Tok::Number, "m");
            if (!is_integer(m.number))
                fail(m, "m must be an integer");
            s.s = static_cast<int>(to_integer(m.number));
            expect(Tok::Comma, "','");
            Token rep = expect(Tok::Ident, "representation name");
            if (!reps_.count(rep.text))
                fail(rep, "unknown representation '" + rep.text + "'");
            s.name = rep.text;
            expect(Tok::Comma, "','");
            Token rep2 = expect(Tok::Ident, "representation name");
            if (!reps_.count(rep2.text))
                fail(rep2, "unknown representation '" + rep2.text + "'");
            s.name2 = rep2.text;
            expect(Tok::RParen, "')'");
            return s;
        }
        fail(t, "unknown period symbol '" + t.text + "'");
    }

    AstMonomial monomial()
    {
        AstMonomial m;
        if (at(Tok::Number) && peek().number == Rational(1)) {
            ++pos_; // literal 1
            return m;
        }
        for (;;) {
            AstSymbol s = symbol();
            Rational e(1);
            if (at(Tok::Caret)) {
                ++pos_;
                e = expect(Tok::Number, "exponent").number;
            }
            m.factors.emplace_back(std::move(s), e);
            if (!at(Tok::Star))
                break;
            ++pos_;
        }
        return m;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, FieldInfo> fields_;
    std::map<std::string, std::string> chars_; // name -> field name
    std::set<std::string> reps_;
    std::set<std::string> scripts_;
    std::set<std::string> coeffs_;
    std::set<std::string> handles_;
};

inline AstSession parse(const std::string& source) { return Parser(source).parse_session(); }

// --- canonical printer -------------------------------------------------------

namespace detail {

inline void print_char_expr(std::ostream& os, const AstCharExpr& e, bool parenthesize_product = false)
{
    switch (e.k) {
    case AstCharExpr::K::Name: os << e.name; break;
    case AstCharExpr::K::Check:
        os << "check ";
        print_char_expr(os, e.children[0], true);
        break;
    case AstCharExpr::K::Conj:
        os << "conj ";
        print_char_expr(os, e.children[0], true);
        break;
    case AstCharExpr::K::Inv:
        os << "inv ";
        print_char_expr(os, e.children[0], true);
        break;
    case AstCharExpr::K::NormPull:
        os << "normpull(";
        print_char_expr(os, e.children[0]);
        os << ", " << e.name << ")";
        break;
    case AstCharExpr::K::NormPow: os << "normpow(" << to_string(e.kappa) << ")"; break;
    case AstCharExpr::K::Prod:
        if (parenthesize_product)
            os << "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i)
                os << " * ";
            print_char_expr(os, e.children[i], true);
        }
        if (parenthesize_product)
            os << ")";
        break;
    }
}

inline void print_symbol(std::ostream& os, const AstSymbol& s)
{
    switch (s.k) {
    case AstSymbol::K::TwoPiI: os << "TWO_PI_I"; break;
    case AstSymbol::K::Disc: os << "DISC(" << s.name << ")"; break;
    case AstSymbol::K::Gauss: os << "GAUSS(" << s.name << ")"; break;
    case AstSymbol::K::Unit: os << "UNIT(" << s.name << ")"; break;
    case AstSymbol::K::LVal: os << "LVAL(\"" << s.name << "\")"; break;
    case AstSymbol::K::AutP: os << "AUTP(" << s.name << ", " << s.s << ")"; break;
    case AstSymbol::K::Arch: os << "ARCH(" << s.s << ", " << s.name << ", " << s.name2 << ")"; break;
    case AstSymbol::K::P:
        os << "P(";
        print_char_expr(os, s.chr);
        os << ", ";
        if (s.braces) {
            os << "{";
            for (std::size_t i = 0; i < s.cmtype.size(); ++i) {
                if (i)
                    os << ", ";
                os << (s.cmtype[i].barred ? "~s" : "s") << s.cmtype[i].index;
            }
            os << "}";
        } else {
            os << (s.cmtype[0].barred ? "~s" : "s") << s.cmtype[0].index;
        }
        os << ")";
        break;
    }
}

inline void print_monomial(std::ostream& os, const AstMonomial& m)
{
    if (m.factors.empty()) {
        os << "1";
        return;
    }
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
        if (i)
            os << " * ";
        print_symbol(os, m.factors[i].first);
        if (m.factors[i].second != Rational(1))
            os << "^" << to_string(m.factors[i].second);
    }
}

inline void print_modulo(std::ostream& os, const std::vector<std::string>& atoms)
{
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i)
            os << " * ";
        os << atoms[i];
    }
}

inline void print_statement(std::ostream& os, const AstStatement& st, int indent);

inline void print_items(std::ostream& os, const std::vector<AstStatement>& items, int indent)
{
    for (const auto& st : items)
        print_statement(os, st, indent);
}

inline void print_statement(std::ostream& os, const AstStatement& st, int indent)
{
    std::string pad(static_cast<std::size_t>(indent), ' ');
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            os << pad;
            if constexpr (std::is_same_v<T, AstField>) {
                os << "field " << node.name << " degree " << node.degree;
                if (node.cyclic)
                    os << " cyclic";
                if (node.action == GaloisAction::Shift)
                    os << " shift";
                if (node.action == GaloisAction::Perm) {
                    os << " perm (";
                    for (std::size_t i = 0; i < node.perm.size(); ++i)
                        os << (i ? ", " : "") << node.perm[i];
                    os << ")";
                }
            } else if constexpr (std::is_same_v<T, AstCompositum>) {
                os << "compositum " << node.name << " = " << node.left << " * " << node.right;
            } else if constexpr (std::is_same_v<T, AstCoeff>) {
                os << "coeff " << node.atom;
                if (!node.contains.empty())
                    os << " contains " << node.contains;
            } else if constexpr (std::is_same_v<T, AstCharacter>) {
                os << "character " << node.name << " on " << node.field << " inf";
                for (const auto& [a, b] : node.exps)
                    os << " (" << to_string(a) << ", " << to_string(b) << ")";
                if (node.csd)
                    os << " csd";
                if (node.supercuspidal)
                    os << " supercuspidal";
                if (!node.rationality.empty())
                    os << " rationality " << node.rationality;
            } else if constexpr (std::is_same_v<T, AstPsi>) {
                os << "psi " << node.name;
            } else if constexpr (std::is_same_v<T, AstRep>) {
                os << "rep " << node.name << " = induce " << node.chi;
            } else if constexpr (std::is_same_v<T, AstLet>) {
                os << "let " << node.name << " = ";
                std::visit(
                    [&](const auto& v) {
                        using V = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<V, AstAxiom>) {
                            os << "axiom ";
                            switch (v.k) {
                            case AstAxiom::K::Blasius:
                                os << "blasius ";
                                print_char_expr(os, v.chr);
                                break;
                            case AstAxiom::K::Main: os << "main " << v.rep << " " << v.eta; break;
                            case AstAxiom::K::Induction: os << "induction " << v.rep << " " << v.eta; break;
                            case AstAxiom::K::Pairing: os << "pairing " << v.rep << " " << v.rep2; break;
                            case AstAxiom::K::PairIdent: os << "pairident " << v.rep << " " << v.rep2; break;
                            }
                            os << " at " << to_string(v.at);
                            if (v.k == AstAxiom::K::PairIdent)
                                os << " over " << v.over;
                        } else if constexpr (std::is_same_v<V, AstChain>) {
                            os << "chain";
                            for (const auto& h : v.handles)
                                os << " " << h;
                        } else {
                            os << "solve " << v.handle << " for ";
                            print_symbol(os, v.symbol);
                        }
                    },
                    node.value);
            } else if constexpr (std::is_same_v<T, AstAssert>) {
                os << "assert ";
                print_monomial(os, node.lhs);
                os << " ~ ";
                print_monomial(os, node.rhs);
                os << " modulo ";
                print_modulo(os, node.modulo);
            } else if constexpr (std::is_same_v<T, AstTarget>) {
                os << "target " << node.handle << " : ";
                print_monomial(os, node.lhs);
                os << " ~ ";
                print_monomial(os, node.rhs);
                os << " modulo ";
                print_modulo(os, node.modulo);
            } else if constexpr (std::is_same_v<T, AstScript>) {
                os << "script " << node.name << " {\n";
                print_items(os, node.items, indent + 2);
                os << pad << "}";
            }
            os << "\n";
        },
        st.node);
}

} // namespace detail

inline std::string print(const AstSession& session)
{
    std::ostringstream os;
    detail::print_items(os, session.statements, 0);
    return os.str();
}

// --- execution ----------------------------------------------------------------

struct CheckLine {
    std::string what;
    bool passed = false;
    std::string detail; // residual on failure, annotations etc.
};

struct ScriptResult {
    std::string name;
    Verdict verdict = Verdict::Verified;
    std::vector<CheckLine> checks;
    std::vector<std::string> assumptions;
};

// Applies declarations to a fresh Session and replays every script.
class Runner {
public:
    Runner() = default;

    Session& session() { return session_; }
    const Session& session() const { return session_; }

    std::vector<ScriptResult> run(const AstSession& ast)
    {
        std::vector<ScriptResult> results;
        for (const auto& st : ast.statements)
            top_statement(st, results);
        return results;
    }

    CharId elaborate_char(const AstCharExpr& e)
    {
        auto& chars = session_.chars();
        switch (e.k) {
        case AstCharExpr::K::Name: {
            auto id = chars.by_name(e.name);
            require(id.has_value(), "unknown character: " + e.name);
            return *id;
        }
        case AstCharExpr::K::Check: return chars.check(elaborate_char(e.children[0]));
        case AstCharExpr::K::Conj: return chars.conj(elaborate_char(e.children[0]));
        case AstCharExpr::K::Inv: return chars.inverse(elaborate_char(e.children[0]));
        case AstCharExpr::K::NormPull: {
            auto f = session_.fields().by_name(e.name);
            require(f.has_value(), "unknown field: " + e.name);
            return chars.pullback(elaborate_char(e.children[0]), *f);
        }
        case AstCharExpr::K::NormPow: return chars.norm_power(e.kappa, FieldRegistry::base_k());
        case AstCharExpr::K::Prod: {
            CharId acc = elaborate_char(e.children[0]);
            for (std::size_t i = 1; i < e.children.size(); ++i)
                acc = chars.multiply(acc, elaborate_char(e.children[i]));
            return acc;
        }
        }
        throw Error("unreachable character expression kind");
    }

    PeriodSymbol elaborate_symbol(const AstSymbol& s)
    {
        switch (s.k) {
        case AstSymbol::K::TwoPiI: return PeriodSymbol::two_pi_i();
        case AstSymbol::K::Disc: {
            auto f = session_.fields().by_name(s.name);
            require(f.has_value(), "unknown field: " + s.name);
            return PeriodSymbol::disc(*f);
        }
        case AstSymbol::K::Gauss: return PeriodSymbol::gauss(s.name);
        case AstSymbol::K::Unit: return PeriodSymbol::unit(s.name);
        case AstSymbol::K::LVal: return PeriodSymbol::lval(s.name);
        case AstSymbol::K::AutP: {
            const RepSpec* rep = session_.rep(s.name);
            require(rep != nullptr, "unknown representation: " + s.name);
            require(s.s >= 0 && s.s <= rep->n, "AUTP index out of range 0..n");
            return PeriodSymbol::autp(rep->name, s.s);
        }
        case AstSymbol::K::Arch: {
            const RepSpec* rep = session_.rep(s.name);
            const RepSpec* rep2 = session_.rep(s.name2);
            require(rep && rep2, "unknown representation in ARCH");
            return PeriodSymbol::arch(arch_key(*rep, *rep2, s.s));
        }
        case AstSymbol::K::P: {
            CharId chr = elaborate_char(s.chr);
            FieldId field = session_.chars().value(chr).field;
            std::vector<EmbeddingRef> members;
            for (const auto& e : s.cmtype)
                members.push_back(EmbeddingRef{e.index, e.barred});
            return PeriodSymbol::period(chr, CMType(field, std::move(members)));
        }
        }
        throw Error("unreachable symbol kind");
    }

    PeriodMonomial elaborate_monomial(const AstMonomial& m)
    {
        PeriodMonomial out;
        for (const auto& [sym, e] : m.factors)
            out.multiply_in(elaborate_symbol(sym), e);
        return out;
    }

    CoeffField elaborate_modulo(const std::vector<std::string>& atoms)
    {
        CoeffField e;
        for (const auto& a : atoms) {
            session_.lattice().declare(a);
            e = e.joined(CoeffField(a));
        }
        return e;
    }

private:
    void top_statement(const AstStatement& st, std::vector<ScriptResult>& results)
    {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, AstScript>) {
                    results.push_back(run_script(node));
                } else if constexpr (std::is_same_v<T, AstLet> || std::is_same_v<T, AstAssert> ||
                                     std::is_same_v<T, AstTarget>) {
                    throw Error("relation steps are only allowed inside scripts");
                } else {
                    declaration(node);
                }
            },
            st.node);
    }

    template <typename T> void declaration(const T& node)
    {
        if constexpr (std::is_same_v<T, AstField>) {
            CMFieldSpec spec;
            spec.name = node.name;
            spec.degree_over_k = node.degree;
            spec.cyclic_over_k = node.cyclic;
            if (node.action == GaloisAction::Perm)
                spec.galois_generator = node.perm;
            session_.fields().declare_field(spec);
        } else if constexpr (std::is_same_v<T, AstCompositum>) {
            auto l = session_.fields().by_name(node.left);
            auto r = session_.fields().by_name(node.right);
            require(l && r, "undeclared parent field in compositum " + node.name);
            session_.fields().declare_compositum(node.name, *l, *r);
        } else if constexpr (std::is_same_v<T, AstCoeff>) {
            if (node.contains.empty())
                session_.lattice().declare(node.atom);
            else
                session_.lattice().declare_contains(node.contains, node.atom);
        } else if constexpr (std::is_same_v<T, AstCharacter>) {
            auto f = session_.fields().by_name(node.field);
            require(f.has_value(), "unknown field: " + node.field);
            BaseCharacter base;
            base.name = node.name;
            base.field = *f;
            base.inftype = make_infinity_type(*f, node.exps);
            base.conj_self_dual = node.csd;
            base.supercuspidal_asserted = node.supercuspidal;
            base.rationality_field = node.rationality;
            session_.declare_character(base);
        } else if constexpr (std::is_same_v<T, AstPsi>) {
            session_.declare_psi(node.name);
        } else if constexpr (std::is_same_v<T, AstRep>) {
            auto chi = session_.chars().by_name(node.chi);
            require(chi.has_value(), "unknown character: " + node.chi);
            session_.declare_rep(node.name, *chi);
        }
    }

    ScriptResult run_script(const AstScript& script)
    {
        ScriptResult result;
        result.name = script.name;
        std::map<std::string, Relation> handles;
        bool any_failed = false;
        int step = 0;
        for (const auto& st : script.items) {
            ++step;
            try {
                std::visit(
                    [&](const auto& node) {
                        using T = std::decay_t<decltype(node)>;
                        if constexpr (std::is_same_v<T, AstScript>) {
                            throw Error("scripts cannot nest");
                        } else if constexpr (std::is_same_v<T, AstLet>) {
                            handles[node.name] = eval_let(node, handles);
                        } else if constexpr (std::is_same_v<T, AstAssert>) {
                            auto eq = equivalent(session_, elaborate_monomial(node.lhs),
                                                 elaborate_monomial(node.rhs), elaborate_modulo(node.modulo));
                            result.checks.push_back(CheckLine{"assert (step " + std::to_string(step) + ")",
                                                              eq.equivalent,
                                                              eq.equivalent ? ""
                                                                            : "residual " +
                                                                                  eq.residual.render(session_)});
                            any_failed = any_failed || !eq.equivalent;
                        } else if constexpr (std::is_same_v<T, AstTarget>) {
                            auto it = handles.find(node.handle);
                            require(it != handles.end(), "unknown relation handle: " + node.handle);
                            const Relation& rel = it->second;
                            for (const auto& ann : rel.annotations)
                                result.assumptions.push_back(ann);
                            PeriodMonomial written =
                                mono_mul(elaborate_monomial(node.lhs), mono_inv(elaborate_monomial(node.rhs)));
                            auto eq = equivalent(session_, rel.quotient(), written,
                                                 elaborate_modulo(node.modulo));
                            result.checks.push_back(
                                CheckLine{"target " + node.handle + " (step " + std::to_string(step) + ")",
                                          eq.equivalent,
                                          eq.equivalent ? "" : "residual " + eq.residual.render(session_)});
                            any_failed = any_failed || !eq.equivalent;
                        } else {
                            declaration(node);
                        }
                    },
                    st.node);
            } catch (const Error& err) {
                result.checks.push_back(
                    CheckLine{"step " + std::to_string(step), false, err.what()});
                any_failed = true;
                break;
            }
        }
        if (any_failed)
            result.verdict = Verdict::Failed;
        else
            result.verdict = result.assumptions.empty() ? Verdict::Verified : Verdict::VerifiedWithAssumptions;
        return result;
    }

    Relation eval_let(const AstLet& let, std::map<std::string, Relation>& handles)
    {
        return std::visit(
            [&](const auto& v) -> Relation {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, AstAxiom>) {
                    return eval_axiom(v);
                } else if constexpr (std::is_same_v<V, AstChain>) {
                    std::vector<Relation> rels;
                    for (const auto& h : v.handles) {
                        auto it = handles.find(h);
                        require(it != handles.end(), "unknown relation handle: " + h);
                        rels.push_back(it->second);
                    }
                    return chain_relations(rels);
                } else {
                    auto it = handles.find(v.handle);
                    require(it != handles.end(), "unknown relation handle: " + v.handle);
                    return solve_for(it->second, elaborate_symbol(v.symbol));
                }
            },
            let.value);
    }

    Relation eval_axiom(const AstAxiom& a)
    {
        switch (a.k) {
        case AstAxiom::K::Blasius: return axiom_blasius(session_, elaborate_char(a.chr), a.at);
        case AstAxiom::K::Main: {
            const RepSpec* rep = session_.rep(a.rep);
            require(rep != nullptr, "unknown representation: " + a.rep);
            auto eta = session_.chars().by_name(a.eta);
            require(eta.has_value(), "unknown character: " + a.eta);
            return axiom_main(session_, *rep, *eta, a.at);
        }
        case AstAxiom::K::Induction: {
            const RepSpec* rep = session_.rep(a.rep);
            require(rep != nullptr, "unknown representation: " + a.rep);
            auto eta = session_.chars().by_name(a.eta);
            require(eta.has_value(), "unknown character: " + a.eta);
            return axiom_induction_L(session_, *rep, *eta, a.at);
        }
        case AstAxiom::K::Pairing: {
            const RepSpec* rep = session_.rep(a.rep);
            const RepSpec* rep2 = session_.rep(a.rep2);
            require(rep && rep2, "unknown representation in pairing");
            require(is_integer(a.at), "pairing: m must be an integer");
            return axiom_pairing(session_, *rep, *rep2, static_cast<int>(to_integer(a.at)));
        }
        case AstAxiom::K::PairIdent: {
            const RepSpec* rep = session_.rep(a.rep);
            const RepSpec* rep2 = session_.rep(a.rep2);
            require(rep && rep2, "unknown representation in pairident");
            auto over = session_.fields().by_name(a.over);
            require(over.has_value(), "unknown field: " + a.over);
            require(is_integer(a.at), "pairident: m must be an integer");
            return axiom_pair_induction(session_, *rep, *rep2, static_cast<int>(to_integer(a.at)), *over);
        }
        }
        throw Error("unreachable axiom kind");
    }

    Session session_;

public:
    // run a single script AST against the current session state
    ScriptResult verify_script(const AstScript& script) { return run_script(script); }
};

} // namespace periodcalc::dsl
