#include "oneill/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace oneill {

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto pos_here = [&] { return SourcePos{line, col}; };
    auto advance = [&](size_t k) {
        for (size_t j = 0; j < k; ++j) {
            if (src[i + j] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += k;
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            size_t k = 0;
            while (i + k < src.size() && src[i + k] != '\n') ++k;
            advance(k);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        SourcePos p = pos_here();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t k = 0;
            while (i + k < src.size() && std::isdigit(static_cast<unsigned char>(src[i + k]))) ++k;
            if (i + k < src.size() && src[i + k] == '.') {
                ++k;
                while (i + k < src.size() && std::isdigit(static_cast<unsigned char>(src[i + k])))
                    ++k;
            }
            if (i + k < src.size() && (src[i + k] == 'e' || src[i + k] == 'E')) {
                size_t k2 = k + 1;
                if (i + k2 < src.size() && (src[i + k2] == '+' || src[i + k2] == '-')) ++k2;
                if (i + k2 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + k2]))) {
                    k = k2;
                    while (i + k < src.size() &&
                           std::isdigit(static_cast<unsigned char>(src[i + k])))
                        ++k;
                }
            }
            std::string text = src.substr(i, k);
            out.push_back({Tok::Number, text, std::strtod(text.c_str(), nullptr), p});
            advance(k);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t k = 0;
            while (i + k < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i + k])) || src[i + k] == '_'))
                ++k;
            out.push_back({Tok::Ident, src.substr(i, k), 0.0, p});
            advance(k);
            continue;
        }
        if (c == '"') {
            size_t k = 1;
            while (i + k < src.size() && src[i + k] != '"' && src[i + k] != '\n') ++k;
            if (i + k >= src.size() || src[i + k] != '"')
                fail(Error::Code::Lex, "unterminated string", p);
            out.push_back({Tok::String, src.substr(i + 1, k - 1), 0.0, p});
            advance(k + 1);
            continue;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case '{': kind = Tok::LBrace; break;
            case '}': kind = Tok::RBrace; break;
            case '[': kind = Tok::LBracket; break;
            case ']': kind = Tok::RBracket; break;
            case ',': kind = Tok::Comma; break;
            case '=': kind = Tok::Equals; break;
            default:
                fail(Error::Code::Lex, std::string("unexpected character '") + c + "'", p);
        }
        out.push_back({kind, std::string(1, c), 0.0, p});
        advance(1);
    }
    out.push_back({Tok::End, "", 0.0, {line, col}});
    return out;
}

namespace {
ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}  // namespace

ExprPtr make_constant(double v, SourcePos p) {
    Expr e;
    e.kind = Expr::Kind::Constant;
    e.value = v;
    e.pos = p;
    return node(std::move(e));
}
ExprPtr make_var(std::string name, SourcePos p) {
    Expr e;
    e.kind = Expr::Kind::Var;
    e.name = std::move(name);
    e.pos = p;
    return node(std::move(e));
}
ExprPtr make_neg(ExprPtr a, SourcePos p) {
    Expr e;
    e.kind = Expr::Kind::Neg;
    e.a = std::move(a);
    e.pos = p;
    return node(std::move(e));
}
namespace {
ExprPtr make_binary(Expr::Kind k, ExprPtr a, ExprPtr b, SourcePos p) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    e.pos = p;
    return node(std::move(e));
}
}  // namespace
ExprPtr make_add(ExprPtr a, ExprPtr b, SourcePos p) { return make_binary(Expr::Kind::Add, a, b, p); }
ExprPtr make_sub(ExprPtr a, ExprPtr b, SourcePos p) { return make_binary(Expr::Kind::Sub, a, b, p); }
ExprPtr make_mul(ExprPtr a, ExprPtr b, SourcePos p) { return make_binary(Expr::Kind::Mul, a, b, p); }
ExprPtr make_div(ExprPtr a, ExprPtr b, SourcePos p) { return make_binary(Expr::Kind::Div, a, b, p); }
ExprPtr make_pow(ExprPtr a, int exponent, SourcePos p) {
    Expr e;
    e.kind = Expr::Kind::Pow;
    e.a = std::move(a);
    e.exponent = exponent;
    e.pos = p;
    return node(std::move(e));
}
ExprPtr make_call(std::string fn, ExprPtr a, SourcePos p) {
    Expr e;
    e.kind = Expr::Kind::Call;
    e.name = std::move(fn);
    e.a = std::move(a);
    e.pos = p;
    return node(std::move(e));
}

Parser::Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
    if (toks_.empty() || toks_.back().kind != Tok::End) toks_.push_back(Token{});
}

Token Parser::next() {
    Token t = toks_[i_];
    if (toks_[i_].kind != Tok::End) ++i_;
    return t;
}

bool Parser::accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
}

Token Parser::expect(Tok k, const std::string& what) {
    if (!at(k)) {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        fail(Error::Code::Parse, "expected " + what + ", got " + got, t.pos);
    }
    return next();
}

ExprPtr Parser::parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
        SourcePos p = peek().pos;
        if (accept(Tok::Plus)) {
            e = make_add(e, parse_term(), p);
        } else if (accept(Tok::Minus)) {
            e = make_sub(e, parse_term(), p);
        } else {
            return e;
        }
    }
}

ExprPtr Parser::parse_term() {
    ExprPtr e = parse_factor();
    for (;;) {
        SourcePos p = peek().pos;
        if (accept(Tok::Star)) {
            e = make_mul(e, parse_factor(), p);
        } else if (accept(Tok::Slash)) {
            e = make_div(e, parse_factor(), p);
        } else {
            return e;
        }
    }
}

ExprPtr Parser::parse_factor() {
    if (at(Tok::Minus)) {
        SourcePos p = next().pos;
        return make_neg(parse_power(), p);
    }
    return parse_power();
}

ExprPtr Parser::parse_power() {
    ExprPtr e = parse_atom();
    if (at(Tok::Caret)) {
        SourcePos p = next().pos;
        int sign = accept(Tok::Minus) ? -1 : 1;
        Token t = expect(Tok::Number, "integer exponent");
        if (t.num != std::floor(t.num) || t.num > 1e9)
            fail(Error::Code::Parse, "exponent must be an integer", t.pos);
        e = make_pow(e, sign * static_cast<int>(t.num), p);
    }
    return e;
}

ExprPtr Parser::parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
        Token n = next();
        return make_constant(n.num, n.pos);
    }
    if (t.kind == Tok::Ident) {
        Token id = next();
        if (accept(Tok::LParen)) {
            static const char* kFns[] = {"sin", "cos", "exp", "log", "sqrt"};
            bool known = false;
            for (const char* f : kFns) known |= id.text == f;
            if (!known) fail(Error::Code::Parse, "unknown function '" + id.text + "'", id.pos);
            ExprPtr arg = parse_expr();
            expect(Tok::RParen, "')'");
            return make_call(id.text, arg, id.pos);
        }
        return make_var(id.text, id.pos);
    }
    if (t.kind == Tok::LParen) {
        next();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
    }
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    fail(Error::Code::Parse, "expected expression, got " + got, t.pos);
}

ExprPtr parse_expression(const std::string& src) {
    Parser p(tokenize(src));
    ExprPtr e = p.parse_expr();
    if (!p.at_end())
        fail(Error::Code::Parse, "unexpected trailing input '" + p.peek().text + "'",
             p.peek().pos);
    return e;
}

std::string repr_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

// Grammar levels: 0 expr, 1 term, 2 factor, 3 power, 4 atom.
int level(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 0;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 1;
        case Expr::Kind::Neg: return 2;
        case Expr::Kind::Pow: return 3;
        default: return 4;
    }
}

void print(const Expr& e, int min_level, std::string& out) {
    bool paren = level(e) < min_level;
    if (paren) out += '(';
    switch (e.kind) {
        case Expr::Kind::Constant:
            out += repr_double(e.value);
            break;
        case Expr::Kind::Var:
            out += e.name;
            break;
        case Expr::Kind::Neg:
            out += '-';
            print(*e.a, 3, out);
            break;
        case Expr::Kind::Add:
            print(*e.a, 0, out);
            out += " + ";
            print(*e.b, 1, out);
            break;
        case Expr::Kind::Sub:
            print(*e.a, 0, out);
            out += " - ";
            print(*e.b, 1, out);
            break;
        case Expr::Kind::Mul:
            print(*e.a, 1, out);
            out += '*';
            print(*e.b, 2, out);
            break;
        case Expr::Kind::Div:
            print(*e.a, 1, out);
            out += '/';
            print(*e.b, 2, out);
            break;
        case Expr::Kind::Pow:
            print(*e.a, 4, out);
            out += '^';
            out += std::to_string(e.exponent);
            break;
        case Expr::Kind::Call:
            out += e.name;
            out += '(';
            print(*e.a, 0, out);
            out += ')';
            break;
    }
    if (paren) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, 0, out);
    return out;
}

bool structurally_equal(const Expr& x, const Expr& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case Expr::Kind::Constant: return x.value == y.value;
        case Expr::Kind::Var: return x.name == y.name;
        case Expr::Kind::Neg: return structurally_equal(*x.a, *y.a);
        case Expr::Kind::Pow:
            return x.exponent == y.exponent && structurally_equal(*x.a, *y.a);
        case Expr::Kind::Call:
            return x.name == y.name && structurally_equal(*x.a, *y.a);
        default:
            return structurally_equal(*x.a, *y.a) && structurally_equal(*x.b, *y.b);
    }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
    switch (e.kind) {
        case Expr::Kind::Var:
            out.insert(e.name);
            return;
        case Expr::Kind::Constant:
            return;
        default:
            if (e.a) collect_vars(*e.a, out);
            if (e.b) collect_vars(*e.b, out);
    }
}

}  // namespace oneill
