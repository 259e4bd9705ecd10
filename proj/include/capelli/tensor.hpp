#pragma once

#include <map>
#include <optional>
#include <utility>

#include "capelli/diffop.hpp"
#include "capelli/gl.hpp"
#include "capelli/u_algebra.hpp"

namespace capelli {

// The small algebra gl(m|n) sitting inside the hatted picture: the hatted
// variable/index v >= 1 corresponds to the small internal index v - 1.
inline Alg small_of_hat(const Alg& hat) { return Alg{hat.p - 1, hat.q, 1}; }
inline int hat_var(int small_idx) { return small_idx + 1; }
inline int small_idx(int hat_v) { return hat_v - 1; }

// Element of D'(m|n) (x) U(gl(m|n)).  Multiplication uses the sign rule
// (d (x) u)(d' (x) u') = (-1)^{|u||d'|} dd' (x) uu'.
template <class C>
struct TElt {
    Alg hat{1, 0, 0};
    std::map<std::pair<DKey, UKey>, C> t;

    TElt() = default;
    explicit TElt(const Alg& h) : hat(h) {}

    Alg small() const { return small_of_hat(hat); }
    bool is_zero() const { return t.empty(); }

    std::optional<Rat> as_scalar() const {
        if (t.empty()) return Rat(0);
        if (t.size() != 1) return std::nullopt;
        const auto& [k, v] = *t.begin();
        if (!dkey_is_one(k.first) || !ukey_is_one(k.second)) return std::nullopt;
        return coeffs::scalar_of(v);
    }
};

template <class C>
void t_add_term(TElt<C>& x, const DKey& dk, const UKey& uk, const C& c) {
    if (coeffs::cz(c)) return;
    auto key = std::make_pair(dk, uk);
    auto it = x.t.find(key);
    if (it == x.t.end()) {
        x.t.emplace(key, c);
    } else {
        it->second = it->second + c;
        if (coeffs::cz(it->second)) x.t.erase(it);
    }
}

template <class C>
TElt<C> t_zero(const Alg& hat) { return TElt<C>(hat); }

template <class C>
TElt<C> t_scalar(const Alg& hat, const C& c) {
    TElt<C> r(hat);
    t_add_term(r, dkey_empty(hat), UKey{}, c);
    return r;
}

template <class C>
TElt<C> t_one(const Alg& hat) { return t_scalar<C>(hat, c_one<C>()); }

template <class C>
TElt<C> t_from_dop(const DOp<C>& d) {
    TElt<C> r(d.hat);
    for (const auto& [k, c] : d.t) t_add_term(r, k, UKey{}, c);
    return r;
}

template <class C>
TElt<C> t_from_u(const Alg& hat, const UElt<C>& u) {
    detail::check_same_alg(small_of_hat(hat), u.alg);
    TElt<C> r(hat);
    for (const auto& [k, c] : u.t) t_add_term(r, dkey_empty(hat), k, c);
    return r;
}

template <class C>
TElt<C> operator+(const TElt<C>& a, const TElt<C>& b) {
    detail::check_same_alg(a.hat, b.hat);
    TElt<C> r = a;
    for (const auto& [k, c] : b.t) t_add_term(r, k.first, k.second, c);
    return r;
}

template <class C>
TElt<C> operator-(const TElt<C>& a, const TElt<C>& b) {
    detail::check_same_alg(a.hat, b.hat);
    TElt<C> r = a;
    for (const auto& [k, c] : b.t) t_add_term(r, k.first, k.second, -c);
    return r;
}

template <class C>
TElt<C> operator-(const TElt<C>& a) {
    TElt<C> r(a.hat);
    for (const auto& [k, c] : a.t) r.t.emplace(k, -c);
    return r;
}

template <class C, class S>
TElt<C> operator*(const S& s, const TElt<C>& a) {
    TElt<C> r(a.hat);
    for (const auto& [k, c] : a.t) t_add_term(r, k.first, k.second, s * c);
    return r;
}

template <class C>
bool operator==(const TElt<C>& a, const TElt<C>& b) {
    return a.hat == b.hat && a.t == b.t;
}

template <class C>
int t_term_parity(const TElt<C>& x, const std::pair<DKey, UKey>& k) {
    return dkey_parity(x.hat, k.first) ^ umono_parity(x.small(), k.second);
}

template <class C>
TElt<C> operator*(const TElt<C>& a, const TElt<C>& b) {
    detail::check_same_alg(a.hat, b.hat);
    Alg sm = a.small();
    TElt<C> r(a.hat);
    for (const auto& [ka, ca] : a.t) {
        int pu = umono_parity(sm, ka.second);
        std::vector<DSym> wda = dkey_word(a.hat, ka.first);
        std::vector<int> wua = umono_word(sm, ka.second);
        for (const auto& [kb, cb] : b.t) {
            int pd = dkey_parity(b.hat, kb.first);
            int sign = (pu & pd) ? -1 : 1;
            std::vector<DSym> wd = wda;
            for (const DSym& s : dkey_word(b.hat, kb.first)) wd.push_back(s);
            DOp<C> dprod(a.hat);
            d_normalize_word_into(dprod, a.hat, std::move(wd), sign < 0 ? C(-(ca * cb)) : C(ca * cb));
            if (dprod.is_zero()) continue;
            std::vector<int> wu = wua;
            for (int id : umono_word(sm, kb.second)) wu.push_back(id);
            UElt<Rat> uprod(sm);
            u_normalize_word_into(uprod, sm, std::move(wu), Rat(1));
            for (const auto& [dk, dc] : dprod.t)
                for (const auto& [uk, uc] : uprod.t) t_add_term(r, dk, uk, C(uc * dc));
        }
    }
    return r;
}

template <class C>
TElt<C> t_pow(const TElt<C>& a, long e) {
    if (e < 0) throw std::domain_error("t_pow: negative exponent");
    TElt<C> acc = t_one<C>(a.hat);
    for (long i = 0; i < e; ++i) acc = acc * a;
    return acc;
}

template <class C>
std::pair<TElt<C>, TElt<C>> t_parity_split(const TElt<C>& x) {
    TElt<C> ev(x.hat), od(x.hat);
    for (const auto& [k, c] : x.t) (t_term_parity(x, k) ? od : ev).t.emplace(k, c);
    return {ev, od};
}

template <class C>
TElt<C> t_bracket(const TElt<C>& x, const TElt<C>& y) {
    auto [x0, x1] = t_parity_split(x);
    auto [y0, y1] = t_parity_split(y);
    TElt<C> r(x.hat);
    auto piece = [&r](const TElt<C>& u, const TElt<C>& v, bool both_odd) {
        if (u.is_zero() || v.is_zero()) return;
        TElt<C> uv = u * v, vu = v * u;
        r = r + (both_odd ? uv + vu : uv - vu);
    };
    piece(x0, y0, false);
    piece(x0, y1, false);
    piece(x1, y0, false);
    piece(x1, y1, true);
    return r;
}

// Generators of the tensor algebra: t_a/t_0 (x) 1 (a in I), t_0 del_a (x) 1
// (a in the hatted set), 1 (x) e_ij.  Centrality certification brackets
// against every one of these.
template <class C>
std::vector<TElt<C>> t_generators(const Alg& hat) {
    std::vector<TElt<C>> gens;
    Alg sm = small_of_hat(hat);
    for (int v = 1; v < hat.dim(); ++v) gens.push_back(t_from_dop(d_t_frac<C>(hat, v)));
    for (int v = 0; v < hat.dim(); ++v) gens.push_back(t_from_dop(d_t_del<C>(hat, 0, v)));
    for (int i = 0; i < sm.dim(); ++i)
        for (int j = 0; j < sm.dim(); ++j) gens.push_back(t_from_u(hat, u_gen<C>(sm, i, j)));
    return gens;
}

template <class C>
bool t_is_central(const TElt<C>& x) {
    for (const auto& g : t_generators<C>(x.hat))
        if (!t_bracket(x, g).is_zero()) return false;
    return true;
}

namespace coeffs {
inline std::optional<Rat> scalar_of(const TElt<Rat>& x) {
    if (x.t.empty()) return Rat(0);
    if (x.t.size() == 1 && dkey_is_one(x.t.begin()->first.first) && ukey_is_one(x.t.begin()->first.second))
        return x.t.begin()->second;
    return std::nullopt;
}
}  // namespace coeffs

}  // namespace capelli
