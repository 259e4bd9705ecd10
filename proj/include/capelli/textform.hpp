#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capelli/center.hpp"
#include "capelli/diffop.hpp"
#include "capelli/gl.hpp"
#include "capelli/phi.hpp"
#include "capelli/rational.hpp"
#include "capelli/tensor.hpp"
#include "capelli/u_algebra.hpp"

namespace capelli {

// Canonical text forms for elements, plus parsers for the small expression
// languages used on the command line and in fixture files.  Writers are
// deterministic: same element, same bytes.

// --- writers --------------------------------------------------------------

inline std::string ukey_text(const Alg& g, const UKey& k) {
    if (ukey_is_one(k)) return "1";
    std::string out;
    for (int id : pbw_gen_order(g)) {
        int e = ukey_get(k, id);
        if (!e) continue;
        if (!out.empty()) out += "*";
        out += "e(" + std::to_string(gen_row(g, id)) + "," + std::to_string(gen_col(g, id)) + ")";
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

inline std::string dkey_text(const Alg& hat, const DKey& k) {
    if (dkey_is_one(k)) return "1";
    std::string out;
    auto put = [&out](char sym, int v, int e) {
        if (!e) return;
        if (!out.empty()) out += "*";
        out += sym + std::to_string(v);
        if (e != 1) out += "^" + std::to_string(e);
    };
    for (int v = 0; v < hat.dim(); ++v) put('t', v, k.t[static_cast<size_t>(v)]);
    for (int v = 0; v < hat.dim(); ++v) put('D', v, k.d[static_cast<size_t>(v)]);
    return out;
}

namespace textdetail {

inline void append_signed(std::string& out, const Rat& c, const std::string& mono) {
    Rat a = c;
    if (out.empty()) {
        if (c < 0) {
            out += "-";
            a = -c;
        }
    } else {
        out += c < 0 ? " - " : " + ";
        if (c < 0) a = -c;
    }
    if (mono == "1") {
        out += rat_text(a);
        return;
    }
    if (!(a == Rat(1))) out += rat_text(a) + "*";
    out += mono;
}

}  // namespace textdetail

inline std::string uelt_text(const UElt<Rat>& x) {
    if (x.is_zero()) return "0";
    std::string out;
    for (const auto& [k, c] : x.t) textdetail::append_signed(out, c, ukey_text(x.alg, k));
    return out;
}

inline std::string telt_text(const TElt<Rat>& x) {
    if (x.is_zero()) return "0";
    Alg sm = small_of_hat(x.hat);
    std::string out;
    for (const auto& [k, c] : x.t)
        textdetail::append_signed(out, c, dkey_text(x.hat, k.first) + " ⊗ " + ukey_text(sm, k.second));
    return out;
}

// --- lexer ------------------------------------------------------------------

namespace textdetail {

struct Lexer {
    std::string_view s;
    size_t i = 0;

    explicit Lexer(std::string_view text) : s(text) {}

    void skip() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool lit(const char* word) {
        skip();
        size_t n = std::char_traits<char>::length(word);
        if (s.compare(i, n, word) == 0) {
            i += n;
            return true;
        }
        return false;
    }
    // tensor sign: the UTF-8 glyph or the ASCII fallback "(x)"
    bool eat_otimes() { return lit("⊗") || lit("(x)"); }
    long integer() {
        skip();
        size_t j = i;
        if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
        size_t d0 = j;
        while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
        if (j == d0) fail("expected an integer");
        long v = std::stol(std::string(s.substr(i, j - i)));
        i = j;
        return v;
    }
    Rat rational() {
        long num = integer();
        if (i < s.size() && s[i] == '/') {
            ++i;
            long den = integer();
            return Rat(num, den);
        }
        return Rat(num);
    }
    // a rational literal starts here (digit, or a sign followed by a digit)
    bool at_number() {
        skip();
        if (i >= s.size()) return false;
        if (s[i] >= '0' && s[i] <= '9') return true;
        return (s[i] == '-' || s[i] == '+') && i + 1 < s.size() && s[i + 1] >= '0' && s[i + 1] <= '9';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument(what + " at position " + std::to_string(i) + " in \"" + std::string(s) + "\"");
    }
};

inline int lex_index(Lexer& lx, const Alg& g) {
    long v = lx.integer();
    if (v < 0 || v >= g.dim()) lx.fail("index out of range");
    return static_cast<int>(v);
}

}  // namespace textdetail

// --- enveloping-algebra expressions -----------------------------------------

// ufactor := rational | 'e' '(' i ',' j ')' ['^' n] | 'G' ['_'] k ['^' n]
// uterm   := ufactor ('*' ufactor)*
// uelt    := ['-'] uterm (('+'|'-') uterm)*
// G_k is the degree-k diagonal invariant of g; a rational factor covers the
// literal identity "1".
namespace textdetail {

inline std::optional<UElt<Rat>> u_factor(Lexer& lx, const Alg& g) {
    if (lx.at_number()) return u_scalar<Rat>(g, lx.rational());
    lx.skip();
    UElt<Rat> base(g);
    if (lx.s.compare(lx.i, 2, "e(") == 0) {
        lx.i += 2;
        int a = lex_index(lx, g);
        lx.expect(',');
        int b = lex_index(lx, g);
        lx.expect(')');
        base = u_gen<Rat>(g, a, b);
    } else if (lx.peek() == 'G') {
        ++lx.i;
        lx.eat('_');
        long k = lx.integer();
        if (k < 0) lx.fail("invariant degree must be nonnegative");
        base = gelfand(g, static_cast<int>(k));
    } else {
        return std::nullopt;
    }
    if (lx.eat('^')) {
        long e = lx.integer();
        if (e < 0) lx.fail("negative exponent");
        base = u_pow(base, e);
    }
    return base;
}

inline UElt<Rat> u_term(Lexer& lx, const Alg& g) {
    auto f0 = u_factor(lx, g);
    if (!f0) lx.fail("expected a rational, e(i,j) or G<k>");
    UElt<Rat> acc = *f0;
    while (lx.eat('*')) {
        auto f = u_factor(lx, g);
        if (!f) lx.fail("expected a factor after '*'");
        acc = acc * *f;
    }
    return acc;
}

}  // namespace textdetail

inline UElt<Rat> parse_uelt(const Alg& g, std::string_view text) {
    textdetail::Lexer lx(text);
    if (lx.eof()) lx.fail("empty expression");
    bool neg = false;
    if (!lx.at_number() && lx.peek() == '-') {
        ++lx.i;
        neg = true;
    }
    UElt<Rat> acc = textdetail::u_term(lx, g);
    if (neg) acc = Rat(-1) * acc;
    while (!lx.eof()) {
        if (lx.eat('+'))
            acc = acc + textdetail::u_term(lx, g);
        else if (lx.eat('-'))
            acc = acc - textdetail::u_term(lx, g);
        else
            lx.fail("expected '+' or '-'");
    }
    return acc;
}

// --- operator-ring text -------------------------------------------------------

// term := [rational '*'] dfactors '⊗' ufactors, with dfactor := 't'v['^'n] |
// 'D'v['^'n] | '1'; only t0 may carry a negative exponent.  Inverse of
// telt_text on canonical output.
namespace textdetail {

inline void d_factors(Lexer& lx, const Alg& hat, DKey& dk) {
    for (;;) {
        lx.skip();
        if (lx.peek() == '1') {
            ++lx.i;
        } else if (lx.peek() == 't' || lx.peek() == 'D') {
            char sym = lx.peek();
            ++lx.i;
            int v = lex_index(lx, hat);
            long e = 1;
            if (lx.eat('^')) e = lx.integer();
            if (e < 0 && !(sym == 't' && v == 0)) lx.fail("negative exponent only on t0");
            if (sym == 't')
                dk.t[static_cast<size_t>(v)] += static_cast<int>(e);
            else
                dk.d[static_cast<size_t>(v)] += static_cast<int>(e);
        } else {
            lx.fail("expected a t/D factor or 1");
        }
        if (!lx.eat('*')) return;
    }
}

inline std::pair<std::pair<DKey, UKey>, Rat> t_term(Lexer& lx, const Alg& hat) {
    Rat c(1);
    DKey dk = dkey_empty(hat);
    if (lx.at_number()) {
        Rat r = lx.rational();
        if (lx.eat('*')) {
            c = r;
            d_factors(lx, hat, dk);
        } else {
            c = r;  // bare coefficient, identity operator part
        }
    } else {
        d_factors(lx, hat, dk);
    }
    if (!lx.eat_otimes()) lx.fail("expected the tensor sign");
    Alg sm = small_of_hat(hat);
    UElt<Rat> u = u_one<Rat>(sm);
    for (;;) {
        auto f = u_factor(lx, sm);
        if (!f) lx.fail("expected an enveloping factor");
        u = u * *f;
        if (!lx.eat('*')) break;
    }
    if (u.t.size() != 1) lx.fail("enveloping part is not a single monomial");
    return {{dk, u.t.begin()->first}, c * u.t.begin()->second};
}

}  // namespace textdetail

inline TElt<Rat> parse_telt(const Alg& hat, std::string_view text) {
    textdetail::Lexer lx(text);
    if (lx.eof()) lx.fail("empty operator text");
    if (lx.peek() == '0') {
        size_t save = lx.i;
        ++lx.i;
        if (lx.eof()) return t_zero<Rat>(hat);
        lx.i = save;
    }
    TElt<Rat> out(hat);
    Rat sign(1);
    if (!lx.at_number() && lx.peek() == '-') {
        ++lx.i;
        sign = Rat(-1);
    }
    for (;;) {
        auto [key, c] = textdetail::t_term(lx, hat);
        t_add_term(out, key.first, key.second, sign * c);
        if (lx.eof()) return out;
        if (lx.eat('+'))
            sign = Rat(1);
        else if (lx.eat('-'))
            sign = Rat(-1);
        else
            lx.fail("expected '+' or '-'");
    }
}

// --- twist selector --------------------------------------------------------------

// 'zero' | 'r1' | ['custom:'] sum of terms; term := [rat '*'] f ['⊗' f] with
// f := rational | 'E'['^'n] | 'G'['_']k | 'e(i,j)'.  E lives on the operator
// side, G and e(i,j) on the enveloping side of the smaller algebra; the two
// sides of a ⊗ may be written in either order.
namespace textdetail {

struct TwistFactor {
    int kind = 0;           // 0 scalar, 1 operator side, 2 enveloping side
    Rat c = Rat(1);
    int epow = 0;
    UElt<Rat> u;
};

inline TwistFactor twist_factor(Lexer& lx, const Alg& hat) {
    TwistFactor f;
    if (lx.at_number()) {
        f.c = lx.rational();
        return f;
    }
    lx.skip();
    if (lx.peek() == 'E') {
        ++lx.i;
        f.kind = 1;
        long e = 1;
        if (lx.eat('^')) e = lx.integer();
        if (e < 0) lx.fail("negative exponent");
        f.epow = static_cast<int>(e);
        return f;
    }
    auto u = u_factor(lx, small_of_hat(hat));
    if (!u) lx.fail("expected a rational, E, G<k> or e(i,j)");
    f.kind = 2;
    f.u = *u;
    return f;
}

inline TElt<Rat> twist_factor_value(const Alg& hat, const TwistFactor& f) {
    switch (f.kind) {
        case 1: return t_pow(t_from_dop(d_euler<Rat>(hat)), f.epow);
        case 2: return t_from_u(hat, f.u);
        default: return f.c * t_one<Rat>(hat);
    }
}

inline TElt<Rat> twist_term(Lexer& lx, const Alg& hat) {
    Rat c(1);
    std::optional<TwistFactor> a;
    if (lx.at_number()) {
        Rat r = lx.rational();
        lx.skip();
        if (lx.eof() || lx.peek() == '+' || lx.peek() == '-') return r * t_one<Rat>(hat);
        if (lx.eat('*')) {
            c = r;
        } else {
            TwistFactor f;
            f.c = r;
            a = f;
        }
    }
    if (!a) a = twist_factor(lx, hat);
    if (!lx.eat_otimes()) return c * twist_factor_value(hat, *a);
    TwistFactor b = twist_factor(lx, hat);
    if (a->kind == 1 && b.kind == 1) lx.fail("both tensor factors are on the operator side");
    if (a->kind == 2 && b.kind == 2) lx.fail("both tensor factors are on the enveloping side");
    return c * (twist_factor_value(hat, *a) * twist_factor_value(hat, b));
}

}  // namespace textdetail

inline TElt<Rat> parse_twist(const Alg& hat, std::string_view text) {
    std::string_view body = text;
    if (body == "zero" || body == "0") return t_zero<Rat>(hat);
    if (body == "r1") return r_canonical<Rat>(hat);
    if (body.substr(0, 7) == "custom:") body = body.substr(7);
    textdetail::Lexer lx(body);
    if (lx.eof()) lx.fail("empty twist");
    Rat sign(1);
    if (!lx.at_number() && lx.peek() == '-') {
        ++lx.i;
        sign = Rat(-1);
    }
    TElt<Rat> acc = sign * textdetail::twist_term(lx, hat);
    while (!lx.eof()) {
        if (lx.eat('+'))
            acc = acc + textdetail::twist_term(lx, hat);
        else if (lx.eat('-'))
            acc = acc - textdetail::twist_term(lx, hat);
        else
            lx.fail("expected '+' or '-'");
    }
    return acc;
}

// --- homomorphism-image expressions ------------------------------------------------

// pexpr := ['-'] pterm (('+'|'-') pterm)*;  pterm := [rat '*'] pf ('*' pf)*;
// pf := 'phi(' atom ')' with atom := e(i,j) | G['_']k | r(k,i,j), all over the
// larger algebra.  Evaluates through the context's twist.
namespace textdetail {

inline TElt<Rat> p_factor(Lexer& lx, const PhiContext<Rat>& ctx) {
    lx.skip();
    if (lx.s.compare(lx.i, 4, "phi(") != 0) lx.fail("expected phi(...)");
    lx.i += 4;
    const Alg& hat = ctx.hat;
    UElt<Rat> arg(hat);
    lx.skip();
    if (lx.s.compare(lx.i, 2, "e(") == 0) {
        lx.i += 2;
        int a = lex_index(lx, hat);
        lx.expect(',');
        int b = lex_index(lx, hat);
        lx.expect(')');
        arg = u_gen<Rat>(hat, a, b);
    } else if (lx.peek() == 'G') {
        ++lx.i;
        lx.eat('_');
        arg = gelfand(hat, static_cast<int>(lx.integer()));
    } else if (lx.s.compare(lx.i, 2, "r(") == 0) {
        lx.i += 2;
        long k = lx.integer();
        lx.expect(',');
        int a = lex_index(lx, hat);
        lx.expect(',');
        int b = lex_index(lx, hat);
        lx.expect(')');
        arg = r_element(hat, static_cast<int>(k), a, b);
    } else {
        lx.fail("expected e(i,j), G<k> or r(k,i,j)");
    }
    lx.expect(')');
    return phi_apply(ctx, arg);
}

inline TElt<Rat> p_term(Lexer& lx, const PhiContext<Rat>& ctx) {
    Rat c(1);
    if (lx.at_number()) {
        c = lx.rational();
        if (!lx.eat('*')) return c * t_one<Rat>(ctx.hat);
    }
    TElt<Rat> acc = p_factor(lx, ctx);
    while (lx.eat('*')) acc = acc * p_factor(lx, ctx);
    return c * acc;
}

}  // namespace textdetail

inline TElt<Rat> parse_phi_expr(const PhiContext<Rat>& ctx, std::string_view text) {
    textdetail::Lexer lx(text);
    if (lx.eof()) lx.fail("empty expression");
    Rat sign(1);
    if (!lx.at_number() && lx.peek() == '-') {
        ++lx.i;
        sign = Rat(-1);
    }
    TElt<Rat> acc = sign * textdetail::p_term(lx, ctx);
    while (!lx.eof()) {
        if (lx.eat('+'))
            acc = acc + textdetail::p_term(lx, ctx);
        else if (lx.eat('-'))
            acc = acc - textdetail::p_term(lx, ctx);
        else
            lx.fail("expected '+' or '-'");
    }
    return acc;
}

// --- weights and fixture lines -------------------------------------------------------

inline std::vector<Rat> parse_weights(const std::string& s) {
    std::vector<Rat> out;
    size_t start = 0;
    for (;;) {
        size_t comma = s.find(',', start);
        std::string piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        size_t a = piece.find_first_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty weight entry in \"" + s + "\"");
        size_t b = piece.find_last_not_of(" \t");
        out.push_back(rat_parse(piece.substr(a, b - a + 1)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

struct FixtureLine {
    std::string id;
    std::string lhs;
    std::string rhs;
};

inline std::string fixture_render(const FixtureLine& f) { return "CHECK " + f.id + " | " + f.lhs + " | " + f.rhs; }

// nullopt for blank lines and '#' comments; throws on malformed CHECK lines
inline std::optional<FixtureLine> fixture_parse_line(const std::string& line) {
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') return std::nullopt;
    if (line.compare(a, 6, "CHECK ") != 0) throw std::invalid_argument("fixture line is not a CHECK: " + line);
    size_t p1 = line.find('|', a);
    size_t p2 = p1 == std::string::npos ? std::string::npos : line.find('|', p1 + 1);
    if (p2 == std::string::npos) throw std::invalid_argument("fixture line needs two separators: " + line);
    auto trim = [](std::string s) {
        size_t x = s.find_first_not_of(" \t\r");
        size_t y = s.find_last_not_of(" \t\r");
        return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    FixtureLine f;
    f.id = trim(line.substr(a + 6, p1 - a - 6));
    f.lhs = trim(line.substr(p1 + 1, p2 - p1 - 1));
    f.rhs = trim(line.substr(p2 + 1));
    if (f.id.empty() || f.lhs.empty() || f.rhs.empty()) throw std::invalid_argument("fixture line has an empty field: " + line);
    return f;
}

}  // namespace capelli
