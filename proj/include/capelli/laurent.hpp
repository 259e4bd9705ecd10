#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <type_traits>

#include "capelli/rational.hpp"

namespace capelli {

namespace coeffs {
// Uniform coefficient-ring hooks.  Rat is special-cased; every other ring
// (ScalarPoly, UElt, TElt) exposes is_zero() and as_scalar() members.
template <class C>
bool cz(const C& c) {
    if constexpr (std::is_same_v<C, Rat>)
        return c.is_zero();
    else
        return c.is_zero();
}
template <class C>
std::optional<Rat> scalar_of(const C& c) {
    if constexpr (std::is_same_v<C, Rat>)
        return c;
    else
        return c.as_scalar();
}
}  // namespace coeffs

// Truncated Laurent series in one variable T: finitely many terms above
// `floor`, everything at or above `floor` tracked exactly, everything below
// dropped.  Multiplication recomputes the sound floor from both operands'
// floors and top exponents, so accuracy never silently degrades.
template <class C>
struct Laurent {
    int floor = 0;
    std::map<int, C> c;  // exponent -> nonzero coefficient

    Laurent() = default;
    explicit Laurent(int fl) : floor(fl) {}

    bool tracked_zero() const { return c.empty(); }
    int top() const { return c.empty() ? floor - 1 : c.rbegin()->first; }

    void add(int k, const C& v) {
        if (k < floor || coeffs::cz(v)) return;
        auto it = c.find(k);
        if (it == c.end()) {
            c.emplace(k, v);
        } else {
            it->second = it->second + v;
            if (coeffs::cz(it->second)) c.erase(it);
        }
    }

    const C* coeff(int k) const {
        auto it = c.find(k);
        return it == c.end() ? nullptr : &it->second;
    }
};

template <class C>
Laurent<C> operator+(const Laurent<C>& a, const Laurent<C>& b) {
    Laurent<C> r(std::max(a.floor, b.floor));
    for (const auto& [k, v] : a.c) r.add(k, v);
    for (const auto& [k, v] : b.c) r.add(k, v);
    return r;
}

template <class C>
Laurent<C> operator-(const Laurent<C>& a, const Laurent<C>& b) {
    Laurent<C> r(std::max(a.floor, b.floor));
    for (const auto& [k, v] : a.c) r.add(k, v);
    for (const auto& [k, v] : b.c) r.add(k, -v);
    return r;
}

template <class C>
Laurent<C> operator-(const Laurent<C>& a) {
    Laurent<C> r(a.floor);
    for (const auto& [k, v] : a.c) r.c.emplace(k, -v);
    return r;
}

// Coefficients below a factor's floor are unknown, not zero; the product is
// exact at exponent k only once every unknown low coefficient of one factor
// would pair with a surely-zero coefficient (above the top) of the other.
template <class C>
Laurent<C> operator*(const Laurent<C>& a, const Laurent<C>& b) {
    Laurent<C> r(std::max(a.floor + b.top(), b.floor + a.top()));
    for (const auto& [ka, va] : a.c)
        for (const auto& [kb, vb] : b.c) {
            if (ka + kb < r.floor) continue;
            r.add(ka + kb, va * vb);
        }
    return r;
}

template <class C, class S>
Laurent<C> scale(const S& s, const Laurent<C>& a) {
    Laurent<C> r(a.floor);
    for (const auto& [k, v] : a.c) r.add(k, s * v);
    return r;
}

template <class C>
Laurent<C> monomial(int k, const C& v, int fl) {
    Laurent<C> r(fl);
    r.add(k, v);
    return r;
}

// Raise the floor to fl, dropping tracked terms below it.  Never lowers.
template <class C>
Laurent<C> series_clamp(const Laurent<C>& s, int fl) {
    if (fl <= s.floor) return s;
    Laurent<C> r(fl);
    for (const auto& [k, v] : s.c)
        if (k >= fl) r.c.emplace(k, v);
    return r;
}

// s(T) -> s(T + shift); `shift` must commute with the coefficients (all uses
// shift by rational scalars times the identity or by certified central
// elements).  Powers (T+shift)^k contribute only at or below exponent k, so
// the floor is preserved exactly.
template <class C>
Laurent<C> series_shift(const Laurent<C>& s, const C& shift, const C& one) {
    Laurent<C> r(s.floor);
    for (const auto& [k, v] : s.c) {
        int jmax = k - s.floor;
        if (k >= 0 && k < jmax) jmax = k;  // binom(k, j) = 0 past j = k
        C p = one;
        for (int j = 0; j <= jmax; ++j) {
            Rat bc(binom(k, j));
            if (!coeffs::cz(p) && !is_zero(bc)) r.add(k - j, bc * (v * p));
            if (j < jmax) p = p * shift;
        }
    }
    return r;
}

// Multiplicative inverse of a series whose leading coefficient is a nonzero
// rational multiple of `one`.  inv(s) has floor s.floor - 2L where L is the
// leading exponent of s.
template <class C>
Laurent<C> series_invert(const Laurent<C>& s, const C& one) {
    if (s.tracked_zero()) throw std::domain_error("series_invert: zero series");
    int L = s.top();
    auto lead = coeffs::scalar_of(s.c.rbegin()->second);
    if (!lead || is_zero(*lead)) throw std::domain_error("series_invert: leading coefficient is not an invertible scalar");
    // u = s / (lead * T^L) = 1 + (strictly lower order terms)
    Laurent<C> u(s.floor - L);
    Rat inv_lead = Rat(1) / *lead;
    for (const auto& [k, v] : s.c) u.add(k - L, inv_lead * v);
    Laurent<C> du(u.floor);  // du = 1 - u, top <= -1
    for (const auto& [k, v] : u.c)
        if (k != 0) du.add(k, -v);
    du.add(0, one - *u.coeff(0));
    Laurent<C> acc = monomial(0, one, u.floor);  // sum_j du^j
    Laurent<C> p = monomial(0, one, u.floor);
    for (int j = 1; j <= -u.floor; ++j) {
        p = series_clamp(p * du, u.floor);
        if (p.tracked_zero()) break;
        acc = acc + p;
    }
    Laurent<C> r(acc.floor - L);
    for (const auto& [k, v] : acc.c) r.add(k - L, inv_lead * v);
    return r;
}

// Exact comparison of every tracked coefficient at or above at_floor; both
// series must actually be tracked that deep.
template <class C>
bool series_equal(const Laurent<C>& a, const Laurent<C>& b, int at_floor) {
    if (a.floor > at_floor || b.floor > at_floor)
        throw std::domain_error("series_equal: operands not tracked to the requested floor");
    Laurent<C> d = a - b;
    for (const auto& [k, v] : d.c)
        if (k >= at_floor && !coeffs::cz(v)) return false;
    return true;
}

}  // namespace capelli
