#pragma once

#include <cctype>
#include <cstring>
#include <memory>

#include "tracesynth/types.hpp"

namespace tracesynth {

// ---------------------------------------------------------------------------
// Expression AST
//
// Grammar (ASCII):
//   or    := and ('|' and)*
//   and   := cmp ('&' cmp)*
//   cmp   := add (('='|'!='|'<'|'<='|'>'|'>=') add)?
//   add   := mul (('+'|'-') mul)*
//   mul   := unary ('*' unary)*
//   unary := '!' unary | '-' unary | primary
//   primary := int | string | 'true' | 'false' | ident | ident '(' args ')'
//            | ident '[' or ']' | 'len' '(' or ')' | '(' or ')'
//
// Array indexing is 1-based. len(e) works on strings and string-arrays.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Op {
        Lit,    // literal value
        Var,    // variable reference
        Call,   // fn(args...)
        Index,  // base[index], 1-based
        Len,    // len(arg)
        Not, Neg,
        And, Or,
        Add, Sub, Mul,
        Eq, Ne, Lt, Le, Gt, Ge,
    };

    Op op = Op::Lit;
    Value lit;
    std::string name;           // Var / Call
    std::vector<ExprPtr> args;  // operands

    static ExprPtr literal(Value v) {
        auto e = std::make_shared<Expr>();
        e->op = Op::Lit;
        e->lit = std::move(v);
        return e;
    }
    static ExprPtr var(std::string n) {
        auto e = std::make_shared<Expr>();
        e->op = Op::Var;
        e->name = std::move(n);
        return e;
    }
    static ExprPtr call(std::string n, std::vector<ExprPtr> as) {
        auto e = std::make_shared<Expr>();
        e->op = Op::Call;
        e->name = std::move(n);
        e->args = std::move(as);
        return e;
    }
    static ExprPtr make(Op o, std::vector<ExprPtr> as) {
        auto e = std::make_shared<Expr>();
        e->op = o;
        e->args = std::move(as);
        return e;
    }
};

inline bool expr_equal(const Expr& a, const Expr& b) {
    if (a.op != b.op || a.name != b.name || a.args.size() != b.args.size()) return false;
    if (a.op == Expr::Op::Lit && !(a.lit == b.lit)) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!expr_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

namespace detail {

inline int precedence(Expr::Op op) {
    using O = Expr::Op;
    switch (op) {
        case O::Or: return 1;
        case O::And: return 2;
        case O::Eq: case O::Ne: case O::Lt: case O::Le: case O::Gt: case O::Ge: return 3;
        case O::Add: case O::Sub: return 4;
        case O::Mul: return 5;
        case O::Not: case O::Neg: return 6;
        default: return 7;
    }
}

inline const char* op_token(Expr::Op op) {
    using O = Expr::Op;
    switch (op) {
        case O::Or: return "|";
        case O::And: return "&";
        case O::Eq: return "=";
        case O::Ne: return "!=";
        case O::Lt: return "<";
        case O::Le: return "<=";
        case O::Gt: return ">";
        case O::Ge: return ">=";
        case O::Add: return "+";
        case O::Sub: return "-";
        case O::Mul: return "*";
        default: return "?";
    }
}

}  // namespace detail

/// Normalized textual form; parsing the result yields an equal tree.
inline std::string to_string(const Expr& e) {
    using O = Expr::Op;
    auto paren = [](const Expr& child, int outer) {
        std::string s = to_string(child);
        if (detail::precedence(child.op) < outer) return "(" + s + ")";
        return s;
    };
    switch (e.op) {
        case O::Lit: {
            if (e.lit.is_string()) return "\"" + e.lit.as_string() + "\"";
            return to_display(e.lit);
        }
        case O::Var: return e.name;
        case O::Call: {
            std::string s = e.name + "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) s += ", ";
                s += to_string(*e.args[i]);
            }
            return s + ")";
        }
        case O::Index: return paren(*e.args[0], 7) + "[" + to_string(*e.args[1]) + "]";
        case O::Len: return "len(" + to_string(*e.args[0]) + ")";
        case O::Not: return "!" + paren(*e.args[0], 6);
        case O::Neg: return "-" + paren(*e.args[0], 6);
        default: {
            int p = detail::precedence(e.op);
            return paren(*e.args[0], p) + " " + detail::op_token(e.op) + " " +
                   paren(*e.args[1], p + 1);
        }
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

struct ExprParser {
    const std::string& src;
    size_t pos = 0;

    explicit ExprParser(const std::string& s) : src(s) {}

    [[noreturn]] void error(const std::string& msg) {
        fail(ErrorKind::Format, "expression parse error at " + std::to_string(pos) + " in '" +
                                    src + "': " + msg);
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(const char* tok) {
        skip_ws();
        size_t len = std::strlen(tok);
        if (src.compare(pos, len, tok) == 0) {
            pos += len;
            return true;
        }
        return false;
    }
    bool peek(char c) {
        skip_ws();
        return pos < src.size() && src[pos] == c;
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    std::string ident() {
        skip_ws();
        if (pos >= src.size() || !ident_start(src[pos])) error("identifier expected");
        size_t start = pos;
        while (pos < src.size() && ident_char(src[pos])) ++pos;
        return src.substr(start, pos - start);
    }

    ExprPtr parse() {
        ExprPtr e = parse_or();
        skip_ws();
        if (pos != src.size()) error("trailing input");
        return e;
    }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (true) {
            skip_ws();
            if (peek('|')) {
                ++pos;
                e = Expr::make(Expr::Op::Or, {e, parse_and()});
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_cmp();
        while (true) {
            skip_ws();
            if (peek('&')) {
                ++pos;
                e = Expr::make(Expr::Op::And, {e, parse_cmp()});
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_add();
        skip_ws();
        if (eat("!=")) return Expr::make(Expr::Op::Ne, {e, parse_add()});
        if (eat("<=")) return Expr::make(Expr::Op::Le, {e, parse_add()});
        if (eat(">=")) return Expr::make(Expr::Op::Ge, {e, parse_add()});
        if (peek('=')) {
            ++pos;
            return Expr::make(Expr::Op::Eq, {e, parse_add()});
        }
        if (peek('<')) {
            ++pos;
            return Expr::make(Expr::Op::Lt, {e, parse_add()});
        }
        if (peek('>')) {
            ++pos;
            return Expr::make(Expr::Op::Gt, {e, parse_add()});
        }
        return e;
    }

    ExprPtr parse_add() {
        ExprPtr e = parse_mul();
        while (true) {
            skip_ws();
            if (peek('+')) {
                ++pos;
                e = Expr::make(Expr::Op::Add, {e, parse_mul()});
            } else if (peek('-')) {
                ++pos;
                e = Expr::make(Expr::Op::Sub, {e, parse_mul()});
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_mul() {
        ExprPtr e = parse_unary();
        while (true) {
            skip_ws();
            if (peek('*')) {
                ++pos;
                e = Expr::make(Expr::Op::Mul, {e, parse_unary()});
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_unary() {
        skip_ws();
        if (peek('!') && src.compare(pos, 2, "!=") != 0) {
            ++pos;
            return Expr::make(Expr::Op::Not, {parse_unary()});
        }
        if (peek('-')) {
            ++pos;
            return Expr::make(Expr::Op::Neg, {parse_unary()});
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos >= src.size()) error("unexpected end of input");
        char c = src[pos];
        if (c == '(') {
            ++pos;
            ExprPtr e = parse_or();
            if (!eat(")")) error("')' expected");
            return parse_postfix(e);
        }
        if (c == '"') {
            ++pos;
            size_t start = pos;
            while (pos < src.size() && src[pos] != '"') ++pos;
            if (pos >= src.size()) error("unterminated string literal");
            std::string s = src.substr(start, pos - start);
            ++pos;
            return Expr::literal(Value(std::move(s)));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            return Expr::literal(Value(std::stoll(src.substr(start, pos - start))));
        }
        if (ident_start(c)) {
            std::string name = ident();
            if (name == "true") return Expr::literal(Value(true));
            if (name == "false") return Expr::literal(Value(false));
            if (name == "len") {
                if (!eat("(")) error("'(' expected after len");
                ExprPtr a = parse_or();
                if (!eat(")")) error("')' expected");
                return parse_postfix(Expr::make(Expr::Op::Len, {a}));
            }
            if (peek('(')) {
                ++pos;
                std::vector<ExprPtr> args;
                skip_ws();
                if (!peek(')')) {
                    args.push_back(parse_or());
                    while (eat(",")) args.push_back(parse_or());
                }
                if (!eat(")")) error("')' expected");
                return parse_postfix(Expr::call(name, std::move(args)));
            }
            return parse_postfix(Expr::var(name));
        }
        error("unexpected character");
    }

    ExprPtr parse_postfix(ExprPtr e) {
        while (peek('[')) {
            ++pos;
            ExprPtr idx = parse_or();
            if (!eat("]")) error("']' expected");
            e = Expr::make(Expr::Op::Index, {e, idx});
        }
        return e;
    }
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& text) { return detail::ExprParser(text).parse(); }

}  // namespace tracesynth
