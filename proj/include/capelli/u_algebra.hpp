#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "capelli/gl.hpp"
#include "capelli/laurent.hpp"
#include "capelli/rational.hpp"
#include "capelli/scalar_poly.hpp"

namespace capelli {

// --- generators -----------------------------------------------------------

// Generator e_{ab} encoded as a*dim + b.
inline int gen_id(const Alg& g, int a, int b) { return a * g.dim() + b; }
inline int gen_row(const Alg& g, int id) { return id / g.dim(); }
inline int gen_col(const Alg& g, int id) { return id % g.dim(); }
inline int gen_parity(const Alg& g, int id) {
    return idx_parity(g, gen_row(g, id)) ^ idx_parity(g, gen_col(g, id));
}

// PBW order: lowering (a > b), then Cartan (a = b), then raising (a < b),
// lexicographic by (a, b) inside each block.
inline int pbw_key(const Alg& g, int id) {
    int a = gen_row(g, id), b = gen_col(g, id);
    int block = a > b ? 0 : (a == b ? 1 : 2);
    return block * g.dim() * g.dim() + id;
}

inline std::vector<int> pbw_gen_order(const Alg& g) {
    std::vector<int> ids;
    ids.reserve(static_cast<size_t>(g.dim()) * g.dim());
    int d = g.dim();
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (a > b) ids.push_back(gen_id(g, a, b));
    for (int i = 0; i < d; ++i) ids.push_back(gen_id(g, i, i));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (a < b) ids.push_back(gen_id(g, a, b));
    return ids;
}

// [e_ab, e_cd] = delta_bc e_ad - (-1)^{(|a|+|b|)(|c|+|d|)} delta_da e_cb,
// returned as up to two (generator, sign) pairs.
inline std::array<std::pair<int, int>, 2> gen_bracket(const Alg& g, int x, int y, int* count) {
    int a = gen_row(g, x), b = gen_col(g, x), c = gen_row(g, y), d = gen_col(g, y);
    std::array<std::pair<int, int>, 2> out{};
    *count = 0;
    if (b == c) out[(*count)++] = {gen_id(g, a, d), 1};
    if (d == a) out[(*count)++] = {gen_id(g, c, b), (gen_parity(g, x) & gen_parity(g, y)) ? 1 : -1};
    return out;
}

// --- packed PBW monomials ---------------------------------------------------

// Exponent vector over all dim^2 generator slots, 4 bits per slot (dim <= 5).
// The monomial it denotes is the product of generators in PBW order with
// these exponents; odd generators carry exponent at most 1.
struct UKey {
    std::uint64_t lo = 0, hi = 0;
    auto operator<=>(const UKey&) const = default;
};

inline int ukey_get(const UKey& k, int slot) {
    return slot < 16 ? static_cast<int>((k.lo >> (4 * slot)) & 15)
                     : static_cast<int>((k.hi >> (4 * (slot - 16))) & 15);
}

inline void ukey_set(UKey& k, int slot, int v) {
    if (v < 0 || v > 15) throw std::overflow_error("UKey exponent out of range");
    if (slot < 16) {
        k.lo = (k.lo & ~(15ULL << (4 * slot))) | (static_cast<std::uint64_t>(v) << (4 * slot));
    } else {
        int s = slot - 16;
        k.hi = (k.hi & ~(15ULL << (4 * s))) | (static_cast<std::uint64_t>(v) << (4 * s));
    }
}

inline bool ukey_is_one(const UKey& k) { return k.lo == 0 && k.hi == 0; }

inline int umono_degree(const Alg& g, const UKey& k) {
    int d = 0, n = g.dim() * g.dim();
    for (int s = 0; s < n; ++s) d += ukey_get(k, s);
    return d;
}

inline int umono_parity(const Alg& g, const UKey& k) {
    int p = 0, n = g.dim() * g.dim();
    for (int s = 0; s < n; ++s)
        if (ukey_get(k, s)) p ^= (gen_parity(g, s) & ukey_get(k, s));
    return p & 1;
}

inline std::vector<int> umono_word(const Alg& g, const UKey& k) {
    std::vector<int> w;
    for (int id : pbw_gen_order(g))
        for (int e = ukey_get(k, id); e > 0; --e) w.push_back(id);
    return w;
}

// --- elements ---------------------------------------------------------------

template <class C>
C c_one();
template <>
inline Rat c_one<Rat>() { return Rat(1); }
template <>
inline ScalarPoly c_one<ScalarPoly>() { return poly_const(Rat(1)); }

template <class C>
struct UElt {
    Alg alg{0, 0, 1};
    std::map<UKey, C> t;

    UElt() = default;
    explicit UElt(const Alg& g) : alg(g) {}

    bool is_zero() const { return t.empty(); }

    std::optional<Rat> as_scalar() const {
        if (t.empty()) return Rat(0);
        if (t.size() != 1 || !ukey_is_one(t.begin()->first)) return std::nullopt;
        return coeffs::scalar_of(t.begin()->second);
    }
};

template <class C>
void u_add_term(UElt<C>& x, const UKey& k, const C& c) {
    if (coeffs::cz(c)) return;
    auto it = x.t.find(k);
    if (it == x.t.end()) {
        x.t.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (coeffs::cz(it->second)) x.t.erase(it);
    }
}

namespace detail {
inline void check_same_alg(const Alg& a, const Alg& b) {
    if (a != b) throw std::invalid_argument("mixed gl ranks in one operation");
}
}  // namespace detail

template <class C>
UElt<C> u_zero(const Alg& g) { return UElt<C>(g); }

template <class C>
UElt<C> u_scalar(const Alg& g, const C& c) {
    UElt<C> x(g);
    u_add_term(x, UKey{}, c);
    return x;
}

template <class C>
UElt<C> u_one(const Alg& g) { return u_scalar<C>(g, c_one<C>()); }

template <class C>
UElt<C> u_gen(const Alg& g, int a, int b, const C& c = c_one<C>()) {
    UElt<C> x(g);
    UKey k;
    ukey_set(k, gen_id(g, a, b), 1);
    u_add_term(x, k, c);
    return x;
}

template <class C>
UElt<C> operator+(const UElt<C>& a, const UElt<C>& b) {
    detail::check_same_alg(a.alg, b.alg);
    UElt<C> r = a;
    for (const auto& [k, c] : b.t) u_add_term(r, k, c);
    return r;
}

template <class C>
UElt<C> operator-(const UElt<C>& a, const UElt<C>& b) {
    detail::check_same_alg(a.alg, b.alg);
    UElt<C> r = a;
    for (const auto& [k, c] : b.t) u_add_term(r, k, -c);
    return r;
}

template <class C>
UElt<C> operator-(const UElt<C>& a) {
    UElt<C> r(a.alg);
    for (const auto& [k, c] : a.t) r.t.emplace(k, -c);
    return r;
}

template <class C, class S>
UElt<C> operator*(const S& s, const UElt<C>& a) {
    UElt<C> r(a.alg);
    for (const auto& [k, c] : a.t) u_add_term(r, k, s * c);
    return r;
}

template <class C>
bool operator==(const UElt<C>& a, const UElt<C>& b) {
    return a.alg == b.alg && a.t == b.t;
}

// --- PBW straightening ------------------------------------------------------

// Rewrites an arbitrary word of generators into the PBW basis.  The only
// rule is e_x e_y = (-1)^{|x||y|} e_y e_x + [e_x, e_y] applied at the
// leftmost out-of-order adjacent pair; words strictly shorten or lose
// inversions at each step, so this terminates.
template <class C>
void u_normalize_word_into(UElt<C>& out, const Alg& g, std::vector<int> word, C coeff) {
    std::vector<std::pair<std::vector<int>, C>> work;
    work.emplace_back(std::move(word), std::move(coeff));
    while (!work.empty()) {
        auto [w, c] = std::move(work.back());
        work.pop_back();
        bool rewrote = false;
        for (size_t i = 0; i + 1 < w.size(); ++i) {
            int x = w[i], y = w[i + 1];
            if (x == y && gen_parity(g, x)) {  // odd square vanishes
                rewrote = true;
                break;
            }
            if (pbw_key(g, x) <= pbw_key(g, y)) continue;
            int sign = (gen_parity(g, x) & gen_parity(g, y)) ? -1 : 1;
            std::vector<int> swapped = w;
            std::swap(swapped[i], swapped[i + 1]);
            work.emplace_back(std::move(swapped), sign < 0 ? C(-c) : c);
            int nb = 0;
            auto br = gen_bracket(g, x, y, &nb);
            for (int j = 0; j < nb; ++j) {
                std::vector<int> contracted;
                contracted.reserve(w.size() - 1);
                contracted.insert(contracted.end(), w.begin(), w.begin() + static_cast<long>(i));
                contracted.push_back(br[j].first);
                contracted.insert(contracted.end(), w.begin() + static_cast<long>(i) + 2, w.end());
                work.emplace_back(std::move(contracted), br[j].second < 0 ? C(-c) : c);
            }
            rewrote = true;
            break;
        }
        if (rewrote) continue;
        UKey k;
        bool dead = false;
        for (int id : w) {
            int e = ukey_get(k, id) + 1;
            if (e > 1 && gen_parity(g, id)) {
                dead = true;
                break;
            }
            ukey_set(k, id, e);
        }
        if (!dead) u_add_term(out, k, c);
    }
}

template <class C>
UElt<C> u_from_word(const Alg& g, const std::vector<int>& word, const C& coeff = c_one<C>()) {
    UElt<C> r(g);
    u_normalize_word_into(r, g, word, coeff);
    return r;
}

template <class C>
UElt<C> operator*(const UElt<C>& a, const UElt<C>& b) {
    detail::check_same_alg(a.alg, b.alg);
    UElt<C> r(a.alg);
    for (const auto& [ka, ca] : a.t) {
        std::vector<int> wa = umono_word(a.alg, ka);
        for (const auto& [kb, cb] : b.t) {
            std::vector<int> w = wa;
            for (int id : umono_word(b.alg, kb)) w.push_back(id);
            u_normalize_word_into(r, a.alg, std::move(w), C(ca * cb));
        }
    }
    return r;
}

template <class C>
UElt<C> u_pow(const UElt<C>& a, long e) {
    if (e < 0) throw std::domain_error("u_pow: negative exponent");
    UElt<C> acc = u_one<C>(a.alg);
    for (long i = 0; i < e; ++i) acc = acc * a;
    return acc;
}

// --- parity, brackets, centrality -------------------------------------------

template <class C>
std::pair<UElt<C>, UElt<C>> parity_split(const UElt<C>& x) {
    UElt<C> ev(x.alg), od(x.alg);
    for (const auto& [k, c] : x.t) (umono_parity(x.alg, k) ? od : ev).t.emplace(k, c);
    return {ev, od};
}

// Super bracket [x, y] = xy - (-1)^{|x||y|} yx on homogeneous pieces,
// extended bilinearly.
template <class C>
UElt<C> bracket(const UElt<C>& x, const UElt<C>& y) {
    auto [x0, x1] = parity_split(x);
    auto [y0, y1] = parity_split(y);
    UElt<C> r(x.alg);
    auto piece = [&r](const UElt<C>& u, const UElt<C>& v, bool both_odd) {
        if (u.is_zero() || v.is_zero()) return;
        UElt<C> uv = u * v, vu = v * u;
        r = r + (both_odd ? uv + vu : uv - vu);
    };
    piece(x0, y0, false);
    piece(x0, y1, false);
    piece(x1, y0, false);
    piece(x1, y1, true);
    return r;
}

template <class C>
bool is_central(const UElt<C>& x) {
    for (int a = 0; a < x.alg.dim(); ++a)
        for (int b = 0; b < x.alg.dim(); ++b)
            if (!bracket(x, u_gen<C>(x.alg, a, b)).is_zero()) return false;
    return true;
}

// --- Harish-Chandra projection ----------------------------------------------

// Shifted parameter names: l1..lm, l1bar..lnbar (label0 == 1) or l0..lm,
// l1bar..lnbar (label0 == 0).  Both pictures share names on common labels,
// which is what lets the transfer map land in one parameter list.
inline Params ell_params(const Alg& g) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(g.dim()));
    for (int i = 0; i < g.dim(); ++i) names.push_back("l" + idx_name(g, i));
    return make_params(std::move(names));
}

// Projection to the Cartan polynomial algebra along (lowering)U + U(raising),
// written in rho-shifted coordinates: e_ii -> l_i - rho_i.
inline ScalarPoly cartan_project(const UElt<Rat>& x, const Params& ell) {
    ScalarPoly out(ell);
    for (const auto& [k, c] : x.t) {
        ScalarPoly term = poly_const(c, ell);
        bool diagonal = true;
        for (int s = 0; s < x.alg.dim() * x.alg.dim() && diagonal; ++s) {
            int e = ukey_get(k, s);
            if (!e) continue;
            if (gen_row(x.alg, s) != gen_col(x.alg, s)) {
                diagonal = false;
                break;
            }
            int i = gen_row(x.alg, s);
            ScalarPoly lam = poly_var(ell, i) - poly_const(rho_entry(x.alg, i), ell);
            term = term * poly_pow(lam, e);
        }
        if (diagonal) out = out + term;
    }
    return out;
}

inline ScalarPoly hc_image(const UElt<Rat>& z) { return cartan_project(z, ell_params(z.alg)); }

// Scalar by which a central element acts on the highest weight module of
// highest weight lambda: evaluate the HC image at l = lambda + rho.
inline Rat central_character(const UElt<Rat>& z, const std::vector<Rat>& lambda) {
    ScalarPoly chi = hc_image(z);
    std::vector<Rat> pt(static_cast<size_t>(z.alg.dim()));
    for (int i = 0; i < z.alg.dim(); ++i) pt[static_cast<size_t>(i)] = lambda[static_cast<size_t>(i)] + rho_entry(z.alg, i);
    return poly_eval(chi, pt);
}

namespace coeffs {
inline std::optional<Rat> scalar_of(const UElt<Rat>& x) {
    if (x.t.empty()) return Rat(0);
    if (x.t.size() == 1 && ukey_is_one(x.t.begin()->first)) return x.t.begin()->second;
    return std::nullopt;
}
}  // namespace coeffs

}  // namespace capelli
