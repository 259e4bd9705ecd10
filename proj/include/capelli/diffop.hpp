#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "capelli/gl.hpp"
#include "capelli/laurent.hpp"
#include "capelli/rational.hpp"
#include "capelli/u_algebra.hpp"

namespace capelli {

// Degree-preserving differential operators on C[t_0^{+-1}, t_1..t_m] (x)
// Lambda(t_1bar..t_nbar).  Variables are indexed by the hatted algebra's
// internal indices: 0..m even, m+1..m+n odd.  A term is the normally
// ordered word  t_0^{z} t^alpha del^beta  (t's ascending, then del's
// ascending); z may be negative, all other t exponents are nonnegative,
// odd exponents are 0 or 1.
struct DKey {
    std::vector<int> t;  // exponent of t_v; t[0] may be negative
    std::vector<int> d;  // exponent of del_v; all nonnegative

    auto operator<=>(const DKey&) const = default;
};

inline DKey dkey_empty(const Alg& hat) {
    return DKey{std::vector<int>(static_cast<size_t>(hat.dim()), 0),
                std::vector<int>(static_cast<size_t>(hat.dim()), 0)};
}

inline bool dkey_is_one(const DKey& k) {
    for (int e : k.t)
        if (e) return false;
    for (int e : k.d)
        if (e) return false;
    return true;
}

inline int dkey_parity(const Alg& hat, const DKey& k) {
    int p = 0;
    for (int v = hat.p; v < hat.dim(); ++v) p ^= (k.t[static_cast<size_t>(v)] + k.d[static_cast<size_t>(v)]) & 1;
    return p;
}

// total degree as an operator on the graded ring: sum t-exponents minus
// sum del-exponents; everything in D' has degree 0.
inline int dkey_degree(const DKey& k) {
    int s = 0;
    for (int e : k.t) s += e;
    for (int e : k.d) s -= e;
    return s;
}

template <class C>
struct DOp {
    Alg hat{1, 0, 0};
    std::map<DKey, C> t;

    DOp() = default;
    explicit DOp(const Alg& h) : hat(h) {}

    bool is_zero() const { return t.empty(); }
};

template <class C>
void d_add_term(DOp<C>& x, const DKey& k, const C& c) {
    if (coeffs::cz(c)) return;
    auto it = x.t.find(k);
    if (it == x.t.end()) {
        x.t.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (coeffs::cz(it->second)) x.t.erase(it);
    }
}

template <class C>
DOp<C> d_zero(const Alg& hat) { return DOp<C>(hat); }

template <class C>
DOp<C> d_scalar(const Alg& hat, const C& c) {
    DOp<C> r(hat);
    d_add_term(r, dkey_empty(hat), c);
    return r;
}

template <class C>
DOp<C> d_one(const Alg& hat) { return d_scalar<C>(hat, c_one<C>()); }

template <class C>
DOp<C> operator+(const DOp<C>& a, const DOp<C>& b) {
    detail::check_same_alg(a.hat, b.hat);
    DOp<C> r = a;
    for (const auto& [k, c] : b.t) d_add_term(r, k, c);
    return r;
}

template <class C>
DOp<C> operator-(const DOp<C>& a, const DOp<C>& b) {
    detail::check_same_alg(a.hat, b.hat);
    DOp<C> r = a;
    for (const auto& [k, c] : b.t) d_add_term(r, k, -c);
    return r;
}

template <class C>
DOp<C> operator-(const DOp<C>& a) {
    DOp<C> r(a.hat);
    for (const auto& [k, c] : a.t) r.t.emplace(k, -c);
    return r;
}

template <class C, class S>
DOp<C> operator*(const S& s, const DOp<C>& a) {
    DOp<C> r(a.hat);
    for (const auto& [k, c] : a.t) d_add_term(r, k, s * c);
    return r;
}

template <class C>
bool operator==(const DOp<C>& a, const DOp<C>& b) {
    return a.hat == b.hat && a.t == b.t;
}

// --- normal ordering --------------------------------------------------------

// One word symbol: either del_var, or t_var; t_0 carries an integer power.
struct DSym {
    bool is_d = false;
    int var = 0;
    int t0exp = 1;  // meaningful only for var == 0 t-symbols
};

inline std::vector<DSym> dkey_word(const Alg& hat, const DKey& k) {
    std::vector<DSym> w;
    if (k.t[0]) w.push_back({false, 0, k.t[0]});
    for (int v = 1; v < hat.dim(); ++v)
        for (int e = 0; e < k.t[static_cast<size_t>(v)]; ++e) w.push_back({false, v, 1});
    for (int v = 0; v < hat.dim(); ++v)
        for (int e = 0; e < k.d[static_cast<size_t>(v)]; ++e) w.push_back({true, v, 1});
    return w;
}

// Rewrites a composition of t's and del's into normal order using
// del_a t_a = 1 + (-1)^{|a|} t_a del_a  and super-commutation elsewhere.
template <class C>
void d_normalize_word_into(DOp<C>& out, const Alg& hat, std::vector<DSym> word, C coeff) {
    auto vodd = [&hat](int v) { return idx_odd(hat, v); };
    std::vector<std::pair<std::vector<DSym>, C>> work;
    work.emplace_back(std::move(word), std::move(coeff));
    while (!work.empty()) {
        auto [w, c] = std::move(work.back());
        work.pop_back();
        bool rewrote = false;
        for (size_t i = 0; i + 1 < w.size() && !rewrote; ++i) {
            DSym x = w[i], y = w[i + 1];
            rewrote = true;
            if (x.is_d && !y.is_d) {
                if (y.var == 0) {
                    if (x.var == 0) {
                        // del_0 t_0^z = z t_0^{z-1} + t_0^z del_0
                        std::vector<DSym> shorter = w;
                        shorter[i] = DSym{false, 0, y.t0exp - 1};
                        shorter.erase(shorter.begin() + static_cast<long>(i) + 1);
                        if (y.t0exp - 1 == 0) shorter.erase(shorter.begin() + static_cast<long>(i));
                        work.emplace_back(std::move(shorter), C(Rat(y.t0exp) * c));
                        std::swap(w[i], w[i + 1]);
                        work.emplace_back(std::move(w), std::move(c));
                    } else {
                        std::swap(w[i], w[i + 1]);  // t_0 is even: free swap
                        work.emplace_back(std::move(w), std::move(c));
                    }
                } else if (x.var == y.var) {
                    // del_a t_a = 1 + (-1)^{|a|} t_a del_a
                    std::vector<DSym> dropped = w;
                    dropped.erase(dropped.begin() + static_cast<long>(i), dropped.begin() + static_cast<long>(i) + 2);
                    work.emplace_back(std::move(dropped), c);
                    std::swap(w[i], w[i + 1]);
                    work.emplace_back(std::move(w), vodd(x.var) ? C(-c) : c);
                } else {
                    bool flip = vodd(x.var) && vodd(y.var);
                    std::swap(w[i], w[i + 1]);
                    work.emplace_back(std::move(w), flip ? C(-c) : c);
                }
            } else if (!x.is_d && !y.is_d) {
                if (x.var == y.var && x.var == 0) {
                    w[i].t0exp += y.t0exp;
                    w.erase(w.begin() + static_cast<long>(i) + 1);
                    if (w[i].t0exp == 0) w.erase(w.begin() + static_cast<long>(i));
                    work.emplace_back(std::move(w), std::move(c));
                } else if (x.var == y.var && vodd(x.var)) {
                    // odd square: drop the word
                } else if (x.var > y.var) {
                    bool flip = vodd(x.var) && vodd(y.var);
                    std::swap(w[i], w[i + 1]);
                    work.emplace_back(std::move(w), flip ? C(-c) : c);
                } else {
                    rewrote = false;
                }
            } else if (x.is_d && y.is_d) {
                if (x.var == y.var && vodd(x.var)) {
                    // odd square
                } else if (x.var > y.var) {
                    bool flip = vodd(x.var) && vodd(y.var);
                    std::swap(w[i], w[i + 1]);
                    work.emplace_back(std::move(w), flip ? C(-c) : c);
                } else {
                    rewrote = false;
                }
            } else {
                rewrote = false;  // t before del is fine
            }
        }
        if (rewrote) continue;
        DKey k = dkey_empty(hat);
        bool dead = false;
        for (const DSym& s : w) {
            auto& vec = s.is_d ? k.d : k.t;
            vec[static_cast<size_t>(s.var)] += (!s.is_d && s.var == 0) ? s.t0exp : 1;
            if (s.var >= hat.p && vec[static_cast<size_t>(s.var)] > 1) {
                dead = true;
                break;
            }
        }
        if (!dead) d_add_term(out, k, c);
    }
}

template <class C>
DOp<C> d_from_word(const Alg& hat, const std::vector<DSym>& word, const C& coeff = c_one<C>()) {
    DOp<C> r(hat);
    d_normalize_word_into(r, hat, word, coeff);
    return r;
}

template <class C>
DOp<C> operator*(const DOp<C>& a, const DOp<C>& b) {
    detail::check_same_alg(a.hat, b.hat);
    DOp<C> r(a.hat);
    for (const auto& [ka, ca] : a.t) {
        std::vector<DSym> wa = dkey_word(a.hat, ka);
        for (const auto& [kb, cb] : b.t) {
            std::vector<DSym> w = wa;
            for (const DSym& s : dkey_word(b.hat, kb)) w.push_back(s);
            d_normalize_word_into(r, a.hat, std::move(w), C(ca * cb));
        }
    }
    return r;
}

// --- standard operators -----------------------------------------------------

// t_a / t_0 (a in I)
template <class C>
DOp<C> d_t_frac(const Alg& hat, int a) {
    DKey k = dkey_empty(hat);
    k.t[0] = -1;
    k.t[static_cast<size_t>(a)] += 1;
    DOp<C> r(hat);
    d_add_term(r, k, c_one<C>());
    return r;
}

// t_a del_b for a, b in the hatted index set
template <class C>
DOp<C> d_t_del(const Alg& hat, int a, int b) {
    DKey k = dkey_empty(hat);
    k.t[static_cast<size_t>(a)] += 1;
    k.d[static_cast<size_t>(b)] += 1;
    DOp<C> r(hat);
    d_add_term(r, k, c_one<C>());
    return r;
}

// del_a t_b, normally ordered
template <class C>
DOp<C> d_del_t(const Alg& hat, int a, int b) {
    return d_from_word<C>(hat, {DSym{true, a, 1}, DSym{false, b, 1}});
}

// Euler operator sum_v t_v del_v; central in D' and acts as deg * Id.
template <class C>
DOp<C> d_euler(const Alg& hat) {
    DOp<C> r(hat);
    for (int v = 0; v < hat.dim(); ++v) r = r + d_t_del<C>(hat, v, v);
    return r;
}

template <class C>
std::pair<DOp<C>, DOp<C>> d_parity_split(const DOp<C>& x) {
    DOp<C> ev(x.hat), od(x.hat);
    for (const auto& [k, c] : x.t) (dkey_parity(x.hat, k) ? od : ev).t.emplace(k, c);
    return {ev, od};
}

template <class C>
DOp<C> d_bracket(const DOp<C>& x, const DOp<C>& y) {
    auto [x0, x1] = d_parity_split(x);
    auto [y0, y1] = d_parity_split(y);
    DOp<C> r(x.hat);
    auto piece = [&r](const DOp<C>& u, const DOp<C>& v, bool both_odd) {
        if (u.is_zero() || v.is_zero()) return;
        DOp<C> uv = u * v, vu = v * u;
        r = r + (both_odd ? uv + vu : uv - vu);
    };
    piece(x0, y0, false);
    piece(x0, y1, false);
    piece(x1, y0, false);
    piece(x1, y1, true);
    return r;
}

// --- action on the function space -------------------------------------------

// Monomial t_0^{t[0]} t^alpha; for the twisted spaces F_a the t_0 entry is
// an integer offset from the symbolic exponent a (see modules.hpp).
struct FKey {
    std::vector<int> t;
    auto operator<=>(const FKey&) const = default;
};

inline FKey fkey_empty(const Alg& hat) { return FKey{std::vector<int>(static_cast<size_t>(hat.dim()), 0)}; }

inline int fkey_parity(const Alg& hat, const FKey& k) {
    int p = 0;
    for (int v = hat.p; v < hat.dim(); ++v) p ^= k.t[static_cast<size_t>(v)] & 1;
    return p;
}

// Applies the single normally ordered term `op` to the monomial `f`.
// t0_factor(e) supplies the scalar produced when del_0 hits t_0^{e'} whose
// recorded offset entry is e (plain spaces: the exponent itself).
template <class C, class T0Factor, class Sink>
void d_apply_term(const Alg& hat, const DKey& op, const FKey& f, const C& coeff, T0Factor&& t0_factor, Sink&& sink) {
    FKey cur = f;
    C c = coeff;
    // del part, rightmost variable acts first
    for (int v = hat.dim() - 1; v >= 0; --v) {
        for (int rep = 0; rep < op.d[static_cast<size_t>(v)]; ++rep) {
            int& e = cur.t[static_cast<size_t>(v)];
            if (v == 0) {
                c = C(t0_factor(e) * c);
                if (coeffs::cz(c)) return;
                e -= 1;
            } else {
                if (e == 0) return;
                if (idx_odd(hat, v)) {
                    int crossings = 0;
                    for (int u = hat.p; u < v; ++u) crossings += cur.t[static_cast<size_t>(u)] & 1;
                    if (crossings & 1) c = C(-c);
                } else {
                    c = C(Rat(e) * c);
                }
                e -= 1;
            }
        }
    }
    // multiply by the t part on the left
    for (int v = hat.dim() - 1; v >= hat.p; --v) {
        if (!(op.t[static_cast<size_t>(v)] & 1)) continue;
        if (cur.t[static_cast<size_t>(v)] & 1) return;  // odd square
        int crossings = 0;
        for (int u = hat.p; u < v; ++u) crossings += cur.t[static_cast<size_t>(u)] & 1;
        if (crossings & 1) c = C(-c);
        cur.t[static_cast<size_t>(v)] += 1;
    }
    for (int v = 0; v < hat.p; ++v) cur.t[static_cast<size_t>(v)] += op.t[static_cast<size_t>(v)];
    sink(cur, c);
}

// Plain action on Laurent monomials in t_0 and polynomial/exterior variables.
template <class C>
std::map<FKey, C> dop_apply(const DOp<C>& x, const std::map<FKey, C>& f) {
    std::map<FKey, C> out;
    auto sink = [&out](const FKey& k, const C& c) {
        if (coeffs::cz(c)) return;
        auto it = out.find(k);
        if (it == out.end()) {
            out.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (coeffs::cz(it->second)) out.erase(it);
        }
    };
    for (const auto& [op, oc] : x.t)
        for (const auto& [fk, fc] : f)
            d_apply_term(x.hat, op, fk, C(oc * fc), [](int e) { return Rat(e); }, sink);
    return out;
}

namespace coeffs {
inline std::optional<Rat> scalar_of(const DOp<Rat>& x) {
    if (x.t.empty()) return Rat(0);
    if (x.t.size() == 1 && dkey_is_one(x.t.begin()->first)) return x.t.begin()->second;
    return std::nullopt;
}
}  // namespace coeffs

}  // namespace capelli
