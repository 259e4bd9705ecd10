#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "capelli/diffop.hpp"
#include "capelli/gl.hpp"
#include "capelli/phi.hpp"
#include "capelli/rational.hpp"
#include "capelli/rng.hpp"
#include "capelli/scalar_poly.hpp"
#include "capelli/tensor.hpp"
#include "capelli/u_algebra.hpp"

namespace capelli {

// Truncated weight modules: a Verma-type module over any rank, and the
// tensor product of the degree-a function space with a Verma module of the
// one-smaller algebra, acted on by the one-larger algebra through the
// homomorphism.  Everything is exact over Rat (or ScalarPoly for symbolic
// weights); truncation windows are tracked with an overflow flag, and all
// verdicts quantify over the clean part of the window only.

template <class S>
S s_const(const Rat& c);
template <>
inline Rat s_const<Rat>(const Rat& c) { return c; }
template <>
inline ScalarPoly s_const<ScalarPoly>(const Rat& c) { return poly_const(c); }

template <class S>
S s_pow(const S& b, int e) {
    S r = c_one<S>();
    for (int i = 0; i < e; ++i) r = S(r * b);
    return r;
}

// --- highest-weight evaluation ------------------------------------------------

// exponent sum over the strictly lower-triangular generator slots
inline int lowering_length(const Alg& g, const UKey& k) {
    int len = 0, d = g.dim();
    for (int a = 1; a < d; ++a)
        for (int b = 0; b < a; ++b) len += ukey_get(k, gen_id(g, a, b));
    return len;
}

// Splits a straightened PBW monomial over the highest-weight line: any
// raising factor kills it, the Cartan part contributes prod lambda_i^{e_i},
// and the lowering part is returned as the residual basis key.
template <class S>
std::optional<std::pair<UKey, S>> hw_eval(const Alg& g, const std::vector<S>& lambda, const UKey& k) {
    int d = g.dim();
    UKey low;
    S c = c_one<S>();
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            int e = ukey_get(k, gen_id(g, a, b));
            if (e == 0) continue;
            if (a < b) return std::nullopt;
            if (a == b)
                c = S(c * s_pow(lambda[static_cast<size_t>(a)], e));
            else
                ukey_set(low, gen_id(g, a, b), e);
        }
    return std::make_pair(low, c);
}

// --- Verma-type module ----------------------------------------------------------

template <class S>
struct Verma {
    Alg g;
    std::vector<S> lambda;
    int depth;  // basis keys are lowering monomials of length <= depth
};

template <class S>
Verma<S> verma(const Alg& g, std::vector<S> lambda, int depth) {
    if (static_cast<int>(lambda.size()) != g.dim()) throw std::invalid_argument("verma: weight arity mismatch");
    return Verma<S>{g, std::move(lambda), depth};
}

template <class S>
struct VermaVec {
    std::map<UKey, S> t;
    bool overflow = false;  // some action step left the window; t covers the clean part

    bool is_zero() const { return t.empty(); }
};

template <class S>
void vv_add(VermaVec<S>& v, const UKey& k, const S& c) {
    if (coeffs::cz(c)) return;
    auto it = v.t.find(k);
    if (it == v.t.end()) {
        v.t.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (coeffs::cz(it->second)) v.t.erase(it);
    }
}

template <class S>
bool operator==(const VermaVec<S>& a, const VermaVec<S>& b) { return a.t == b.t; }

template <class S>
VermaVec<S> operator+(const VermaVec<S>& a, const VermaVec<S>& b) {
    VermaVec<S> r = a;
    r.overflow = a.overflow || b.overflow;
    for (const auto& [k, c] : b.t) vv_add(r, k, c);
    return r;
}

template <class S>
VermaVec<S> operator-(const VermaVec<S>& a, const VermaVec<S>& b) {
    VermaVec<S> r = a;
    r.overflow = a.overflow || b.overflow;
    for (const auto& [k, c] : b.t) vv_add(r, k, S(-c));
    return r;
}

template <class S, class S2>
VermaVec<S> operator*(const S2& s, const VermaVec<S>& a) {
    VermaVec<S> r;
    r.overflow = a.overflow;
    for (const auto& [k, c] : a.t) vv_add(r, k, S(s * c));
    return r;
}

template <class S>
VermaVec<S> verma_hw(const Verma<S>&) {
    VermaVec<S> v;
    v.t.emplace(UKey{}, c_one<S>());
    return v;
}

template <class S>
VermaVec<S> verma_act(const Verma<S>& M, const UElt<S>& x, const VermaVec<S>& v) {
    detail::check_same_alg(M.g, x.alg);
    VermaVec<S> r;
    r.overflow = v.overflow;
    for (const auto& [wk, wc] : v.t) {
        UElt<S> w(M.g);
        u_add_term(w, wk, wc);
        UElt<S> prod = x * w;
        for (const auto& [pk, pc] : prod.t) {
            auto ev = hw_eval(M.g, M.lambda, pk);
            if (!ev) continue;
            if (lowering_length(M.g, ev->first) > M.depth) {
                r.overflow = true;
                continue;
            }
            vv_add(r, ev->first, S(pc * ev->second));
        }
    }
    return r;
}

// Scalar by which x acts on the top vector, when it acts by one.
template <class S>
std::optional<S> hw_scalar(const Verma<S>& M, const UElt<S>& x) {
    VermaVec<S> r = verma_act(M, x, verma_hw(M));
    if (r.t.empty()) return s_const<S>(Rat(0));
    if (r.t.size() != 1 || !ukey_is_one(r.t.begin()->first)) return std::nullopt;
    return r.t.begin()->second;
}

inline std::vector<UKey> lowering_keys_up_to(const Alg& g, int lmax) {
    std::vector<std::pair<int, int>> slots;
    for (int a = 1; a < g.dim(); ++a)
        for (int b = 0; b < a; ++b) slots.emplace_back(a, b);
    std::vector<UKey> out;
    UKey cur;
    std::function<void(size_t, int)> rec = [&](size_t s, int left) {
        if (s == slots.size()) {
            out.push_back(cur);
            return;
        }
        auto [a, b] = slots[s];
        int id = gen_id(g, a, b);
        int emax = gen_parity(g, id) ? (left < 1 ? left : 1) : left;
        for (int e = 0; e <= emax; ++e) {
            ukey_set(cur, id, e);
            rec(s + 1, left - e);
        }
        ukey_set(cur, id, 0);
    };
    rec(0, lmax);
    return out;
}

// --- the tensor product module --------------------------------------------------

template <class S>
struct Inflated {
    Alg hat;
    S a;
    std::vector<S> lambda;  // weight for the one-smaller algebra
    PhiContext<S> ctx;
    int depth;  // window: function degree <= depth and lowering length <= depth

    Alg small() const { return small_of_hat(hat); }
};

template <class S>
Inflated<S> inflated(const Alg& hat, const S& a, std::vector<S> lambda, const TElt<S>& R, int depth) {
    if (static_cast<int>(lambda.size()) != small_of_hat(hat).dim())
        throw std::invalid_argument("inflated: weight arity mismatch");
    return Inflated<S>{hat, a, std::move(lambda), phi_context(hat, R), depth};
}

// Basis monomial t_0^{a + t[0]} t^k (x) lowering monomial.  The t[0] entry of
// the function key is the integer offset from the symbolic exponent a; the
// action preserves total function degree a, so t[0] == -(k_1 + ...) always.
using InfKey = std::pair<FKey, UKey>;

inline int f_degree(const FKey& k) {
    int s = 0;
    for (size_t v = 1; v < k.t.size(); ++v) s += k.t[v];
    return s;
}

template <class S>
struct InfVec {
    std::map<InfKey, S> t;
    bool overflow = false;  // some lowering step left the window

    bool is_zero() const { return t.empty(); }
};

template <class S>
void iv_add(InfVec<S>& v, const InfKey& k, const S& c) {
    if (coeffs::cz(c)) return;
    auto it = v.t.find(k);
    if (it == v.t.end()) {
        v.t.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (coeffs::cz(it->second)) v.t.erase(it);
    }
}

template <class S>
bool operator==(const InfVec<S>& a, const InfVec<S>& b) { return a.t == b.t; }

template <class S>
InfVec<S> operator+(const InfVec<S>& a, const InfVec<S>& b) {
    InfVec<S> r = a;
    r.overflow = a.overflow || b.overflow;
    for (const auto& [k, c] : b.t) iv_add(r, k, c);
    return r;
}

template <class S>
InfVec<S> operator-(const InfVec<S>& a, const InfVec<S>& b) {
    InfVec<S> r = a;
    r.overflow = a.overflow || b.overflow;
    for (const auto& [k, c] : b.t) iv_add(r, k, S(-c));
    return r;
}

template <class S, class S2>
InfVec<S> operator*(const S2& s, const InfVec<S>& a) {
    InfVec<S> r;
    r.overflow = a.overflow;
    for (const auto& [k, c] : a.t) iv_add(r, k, S(s * c));
    return r;
}

template <class S>
InfVec<S> inf_hw(const Inflated<S>& M) {
    InfVec<S> v;
    v.t.emplace(InfKey{fkey_empty(M.hat), UKey{}}, c_one<S>());
    return v;
}

// Action of one element of the operator (x) enveloping ring.  The enveloping
// factor crosses the function factor, picking up the sign of parities.
template <class S>
InfVec<S> act_telt(const Inflated<S>& M, const TElt<S>& x, const InfVec<S>& v) {
    detail::check_same_alg(M.hat, x.hat);
    Alg sm = M.small();
    InfVec<S> r;
    r.overflow = v.overflow;
    for (const auto& [key, vc] : v.t) {
        const FKey& fk = key.first;
        int fpar = fkey_parity(M.hat, fk);
        UElt<S> w(sm);
        u_add_term(w, key.second, c_one<S>());
        for (const auto& [xk, xc] : x.t) {
            const UKey& uk = xk.second;
            UElt<S> u(sm);
            u_add_term(u, uk, c_one<S>());
            UElt<S> prod = u * w;
            std::vector<std::pair<UKey, S>> upart;
            for (const auto& [pk, pc] : prod.t) {
                auto ev = hw_eval(sm, M.lambda, pk);
                if (!ev) continue;
                if (lowering_length(sm, ev->first) > M.depth) {
                    r.overflow = true;
                    continue;
                }
                upart.emplace_back(ev->first, S(pc * ev->second));
            }
            if (upart.empty()) continue;
            S base = S(xc * vc);
            if (umono_parity(sm, uk) && fpar) base = S(Rat(-1) * base);
            d_apply_term(
                M.hat, xk.first, fk, base, [&M](int e) { return S(M.a + s_const<S>(Rat(e))); },
                [&](const FKey& fk2, const S& c2) {
                    if (f_degree(fk2) > M.depth) {
                        r.overflow = true;
                        return;
                    }
                    for (const auto& [lk, lc] : upart) iv_add(r, InfKey{fk2, lk}, S(c2 * lc));
                });
        }
    }
    return r;
}

template <class S>
InfVec<S> act(const Inflated<S>& M, const UElt<S>& x, const InfVec<S>& v) {
    return act_telt(M, phi_apply(M.ctx, x), v);
}

// R acts on the whole product by one scalar; read it off the top vector.
template <class S>
S twist_scalar(const Inflated<S>& M) {
    InfVec<S> r = act_telt(M, M.ctx.R, inf_hw(M));
    if (r.t.empty()) return s_const<S>(Rat(0));
    if (r.t.size() != 1 || !(r.t.begin()->first == InfKey{fkey_empty(M.hat), UKey{}}))
        throw std::logic_error("twist does not act on the top vector by a scalar");
    return r.t.begin()->second;
}

// Top weight of the product: a + twist in the new coordinate, the old weight
// shifted by the twist with the sign of the coordinate's parity.
template <class S>
std::vector<S> lambda_tilde(const Inflated<S>& M) {
    S tw = twist_scalar(M);
    Alg sm = M.small();
    std::vector<S> out;
    out.reserve(static_cast<size_t>(M.hat.dim()));
    out.push_back(S(M.a + tw));
    for (int i = 0; i < sm.dim(); ++i) {
        const S& li = M.lambda[static_cast<size_t>(i)];
        out.push_back(idx_odd(sm, i) ? S(li - tw) : S(li + tw));
    }
    return out;
}

// --- drops and bases ------------------------------------------------------------

// Integer drop of a basis monomial below the top weight, in the root lattice.
inline std::vector<int> inf_drop(const Alg& hat, const InfKey& key) {
    int d = hat.dim();
    Alg sm = small_of_hat(hat);
    std::vector<int> out(static_cast<size_t>(d), 0);
    out[0] = f_degree(key.first);
    for (int v = 1; v < d; ++v) out[static_cast<size_t>(v)] = -key.first.t[static_cast<size_t>(v)];
    for (int a = 1; a < sm.dim(); ++a)
        for (int b = 0; b < a; ++b) {
            int e = ukey_get(key.second, gen_id(sm, a, b));
            if (!e) continue;
            out[static_cast<size_t>(a) + 1] -= e;
            out[static_cast<size_t>(b) + 1] += e;
        }
    return out;
}

// sum of the simple-root coefficients: partial sums of the coordinates
inline int drop_height(const std::vector<int>& beta) {
    int h = 0, run = 0;
    for (size_t i = 0; i + 1 < beta.size(); ++i) {
        run += beta[static_cast<size_t>(i)];
        h += run;
    }
    return h;
}

template <class S>
std::vector<S> weight_below(const std::vector<S>& top, const std::vector<int>& drop) {
    std::vector<S> out = top;
    for (size_t i = 0; i < out.size(); ++i) out[i] = S(out[i] - s_const<S>(Rat(drop[i])));
    return out;
}

inline std::vector<FKey> fkeys_up_to(const Alg& hat, int dmax) {
    std::vector<FKey> out;
    FKey cur = fkey_empty(hat);
    std::function<void(int, int)> rec = [&](int v, int left) {
        if (v == hat.dim()) {
            out.push_back(cur);
            return;
        }
        int kmax = idx_odd(hat, v) ? (left < 1 ? left : 1) : left;
        for (int k = 0; k <= kmax; ++k) {
            cur.t[static_cast<size_t>(v)] = k;
            cur.t[0] -= k;
            rec(v + 1, left - k);
            cur.t[0] += k;
        }
        cur.t[static_cast<size_t>(v)] = 0;
    };
    rec(1, dmax);
    return out;
}

inline std::vector<InfKey> inf_basis(const Alg& hat, int depth) {
    std::vector<InfKey> out;
    for (const FKey& fk : fkeys_up_to(hat, depth))
        for (const UKey& wk : lowering_keys_up_to(small_of_hat(hat), depth)) out.emplace_back(fk, wk);
    return out;
}

template <class S>
size_t inf_dimension(const Inflated<S>& M) {
    return inf_basis(M.hat, M.depth).size();
}

// --- linear algebra over Rat ------------------------------------------------------

namespace detail {

// Incrementally row-reduced span; rows keyed by the pivot position.
struct Echelon {
    std::map<size_t, std::vector<Rat>> rows;

    void reduce(std::vector<Rat>& v) const {
        for (const auto& [p, row] : rows) {
            if (is_zero(v[p])) continue;
            Rat c = v[p];
            for (size_t i = p; i < v.size(); ++i) v[i] = v[i] - c * row[i];
        }
    }

    bool contains(std::vector<Rat> v) const {
        reduce(v);
        for (const Rat& x : v)
            if (!is_zero(x)) return false;
        return true;
    }

    // true when v was independent and got inserted
    bool insert(std::vector<Rat> v) {
        reduce(v);
        size_t p = v.size();
        for (size_t i = 0; i < v.size(); ++i)
            if (!is_zero(v[i])) {
                p = i;
                break;
            }
        if (p == v.size()) return false;
        Rat inv = Rat(1) / v[p];
        for (size_t i = p; i < v.size(); ++i) v[i] = inv * v[i];
        rows.emplace(p, std::move(v));
        return true;
    }

    size_t dim() const { return rows.size(); }
};

// Nullspace basis of the row list, ncols columns.
inline std::vector<std::vector<Rat>> nullspace(std::vector<std::vector<Rat>> m, size_t ncols) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < m.size(); ++c) {
        size_t sel = m.size();
        for (size_t i = r; i < m.size(); ++i)
            if (!is_zero(m[i][c])) {
                sel = i;
                break;
            }
        if (sel == m.size()) continue;
        std::swap(m[sel], m[r]);
        Rat inv = Rat(1) / m[r][c];
        for (size_t i = c; i < ncols; ++i) m[r][i] = inv * m[r][i];
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || is_zero(m[i][c])) continue;
            Rat f = m[i][c];
            for (size_t j = c; j < ncols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rat>> out;
    for (size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rat> x(ncols, Rat(0));
        x[f] = Rat(1);
        for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -m[i][f];
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace detail

// --- singular vectors -------------------------------------------------------------

// All vectors in the window killed by every raising generator, found drop
// block by drop block.  Raising actions never leave the window, so these are
// genuine kernel vectors of the untruncated module that happen to lie inside.
inline std::vector<InfVec<Rat>> highest_weight_vectors(const Inflated<Rat>& M) {
    std::map<std::vector<int>, std::vector<InfKey>> blocks;
    for (const InfKey& k : inf_basis(M.hat, M.depth)) blocks[inf_drop(M.hat, k)].push_back(k);
    int d = M.hat.dim();
    std::vector<InfVec<Rat>> out;
    for (const auto& [beta, keys] : blocks) {
        std::map<std::pair<int, InfKey>, std::map<size_t, Rat>> rows;
        for (size_t c = 0; c < keys.size(); ++c) {
            InfVec<Rat> e;
            e.t.emplace(keys[c], Rat(1));
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b) {
                    InfVec<Rat> img = act(M, u_gen<Rat>(M.hat, a, b), e);
                    if (img.overflow) throw std::logic_error("raising action left the window");
                    for (const auto& [k2, v2] : img.t) rows[{gen_id(M.hat, a, b), k2}][c] = v2;
                }
        }
        std::vector<std::vector<Rat>> m;
        m.reserve(rows.size());
        for (const auto& [rk, entries] : rows) {
            std::vector<Rat> row(keys.size(), Rat(0));
            for (const auto& [c, v] : entries) row[c] = v;
            m.push_back(std::move(row));
        }
        for (const std::vector<Rat>& x : detail::nullspace(std::move(m), keys.size())) {
            InfVec<Rat> v;
            for (size_t c = 0; c < keys.size(); ++c) iv_add(v, keys[c], x[c]);
            out.push_back(std::move(v));
        }
    }
    return out;
}

inline std::vector<int> verma_drop(const Alg& g, const UKey& k) {
    std::vector<int> out(static_cast<size_t>(g.dim()), 0);
    for (int a = 1; a < g.dim(); ++a)
        for (int b = 0; b < a; ++b) {
            int e = ukey_get(k, gen_id(g, a, b));
            if (!e) continue;
            out[static_cast<size_t>(a)] -= e;
            out[static_cast<size_t>(b)] += e;
        }
    return out;
}

// Same search inside a plain Verma-type window.
inline std::vector<VermaVec<Rat>> verma_highest_weight_vectors(const Verma<Rat>& M) {
    std::map<std::vector<int>, std::vector<UKey>> blocks;
    for (const UKey& k : lowering_keys_up_to(M.g, M.depth)) blocks[verma_drop(M.g, k)].push_back(k);
    int d = M.g.dim();
    std::vector<VermaVec<Rat>> out;
    for (const auto& [beta, keys] : blocks) {
        std::map<std::pair<int, UKey>, std::map<size_t, Rat>> rows;
        for (size_t c = 0; c < keys.size(); ++c) {
            VermaVec<Rat> e;
            e.t.emplace(keys[c], Rat(1));
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b) {
                    VermaVec<Rat> img = verma_act(M, u_gen<Rat>(M.g, a, b), e);
                    if (img.overflow) throw std::logic_error("raising action left the window");
                    for (const auto& [k2, v2] : img.t) rows[{gen_id(M.g, a, b), k2}][c] = v2;
                }
        }
        std::vector<std::vector<Rat>> m;
        m.reserve(rows.size());
        for (const auto& [rk, entries] : rows) {
            std::vector<Rat> row(keys.size(), Rat(0));
            for (const auto& [c, v] : entries) row[c] = v;
            m.push_back(std::move(row));
        }
        for (const std::vector<Rat>& x : detail::nullspace(std::move(m), keys.size())) {
            VermaVec<Rat> v;
            for (size_t c = 0; c < keys.size(); ++c) vv_add(v, keys[c], x[c]);
            out.push_back(std::move(v));
        }
    }
    return out;
}

// --- top-weight criteria -----------------------------------------------------------

// signed count of earlier indices: +1 for even, -1 for odd
inline std::vector<int> parity_prefix(const Alg& g) {
    std::vector<int> f(static_cast<size_t>(g.dim()), 0);
    int run = 0;
    for (int i = 0; i < g.dim(); ++i) {
        f[static_cast<size_t>(i)] = run;
        run += idx_odd(g, i) ? -1 : 1;
    }
    return f;
}

struct WeightTest {
    int idx;
    Rat value;
    bool holds;
};

// One test per coordinate of the smaller algebra; all passing forces the top
// vector to generate a highest-weight submodule equal to the whole product.
inline std::vector<WeightTest> inflation_condition(const Alg& sm, const Rat& a, const std::vector<Rat>& lambda) {
    std::vector<int> f = parity_prefix(sm);
    std::vector<WeightTest> out;
    for (int i = 0; i < sm.dim(); ++i) {
        Rat sign = idx_odd(sm, i) ? Rat(-1) : Rat(1);
        Rat v = a + Rat(f[static_cast<size_t>(i)]) - sign * lambda[static_cast<size_t>(i)];
        out.push_back({i, v, !is_nonneg_integer(v)});
    }
    return out;
}

// The same criterion expressed through the shifted top weight: for each
// index v >= 1 of the extended algebra, test the pair (0, v).
inline std::vector<WeightTest> top_pair_condition(const Alg& hat, const std::vector<Rat>& tilde) {
    std::vector<Rat> s = tilde;
    for (int v = 0; v < hat.dim(); ++v) s[static_cast<size_t>(v)] += rho_entry(hat, v);
    std::vector<WeightTest> out;
    for (int v = 1; v < hat.dim(); ++v) {
        if (idx_odd(hat, v)) {
            Rat val = s[0] + s[static_cast<size_t>(v)];
            out.push_back({v, val, !is_nonneg_integer(val)});
        } else {
            Rat val = s[0] - s[static_cast<size_t>(v)];
            out.push_back({v, val, !is_pos_integer(val)});
        }
    }
    return out;
}

inline bool antidominant(const Alg& g, const std::vector<Rat>& wt) {
    std::vector<Rat> s = wt;
    for (int i = 0; i < g.dim(); ++i) s[static_cast<size_t>(i)] += rho_entry(g, i);
    for (int i = 0; i < g.dim(); ++i)
        for (int j = i + 1; j < g.dim(); ++j) {
            if (idx_parity(g, i) != idx_parity(g, j)) continue;
            if (is_pos_integer(s[static_cast<size_t>(i)] - s[static_cast<size_t>(j)])) return false;
        }
    return true;
}

inline bool typical(const Alg& g, const std::vector<Rat>& wt) {
    std::vector<Rat> s = wt;
    for (int i = 0; i < g.dim(); ++i) s[static_cast<size_t>(i)] += rho_entry(g, i);
    for (int i = 0; i < g.p; ++i)
        for (int j = g.p; j < g.dim(); ++j)
            if (is_zero(s[static_cast<size_t>(i)] + s[static_cast<size_t>(j)])) return false;
    return true;
}

// Regime where the product of the function space with a Verma module is again
// a Verma module: typical antidominant weight with no coordinate congruent to
// the degree modulo the integers.
inline bool verma_regime(const Alg& sm, const Rat& a, const std::vector<Rat>& lambda) {
    if (!typical(sm, lambda) || !antidominant(sm, lambda)) return false;
    for (int i = 0; i < sm.dim(); ++i) {
        Rat sign = idx_odd(sm, i) ? Rat(-1) : Rat(1);
        if (is_integer(lambda[static_cast<size_t>(i)] - sign * a)) return false;
    }
    return true;
}

// --- descent to the bottom layer ----------------------------------------------------

// total function degree across terms; strictly decreases along descent
template <class S>
int s_value(const InfVec<S>& v) {
    int s = 0;
    for (const auto& [k, c] : v.t) s += f_degree(k.first);
    return s;
}

// One step: find the smallest index j with t_j present in some term and apply
// t_0 del_j (x) 1.  That operator is injective on the surviving monomials, so
// the step never kills a vector with positive function degree.
template <class S>
std::optional<InfVec<S>> descent_step(const Inflated<S>& M, const InfVec<S>& v) {
    int jmin = 0;
    for (const auto& [k, c] : v.t)
        for (int j = 1; j < M.hat.dim(); ++j)
            if (k.first.t[static_cast<size_t>(j)] > 0 && (jmin == 0 || j < jmin)) jmin = j;
    if (jmin == 0) return std::nullopt;
    return act_telt(M, t_from_dop(d_t_del<S>(M.hat, 0, jmin)), v);
}

template <class S>
InfVec<S> s_descent(const Inflated<S>& M, InfVec<S> v) {
    while (auto w = descent_step(M, v)) v = std::move(*w);
    return v;
}

// --- generation probes ----------------------------------------------------------------

namespace detail {

template <class Key>
std::map<Key, size_t> index_of(const std::vector<Key>& keys) {
    std::map<Key, size_t> out;
    for (size_t i = 0; i < keys.size(); ++i) out.emplace(keys[i], i);
    return out;
}

}  // namespace detail

struct SimplicityReport {
    bool generated_from_top = false;  // orbit of the top vector spans the window
    bool descent_reaches_top = false;  // every sampled vector leads back to the top line
    int trials = 0;
    bool overflow = false;  // some closure step was truncated

    bool simple() const { return generated_from_top && descent_reaches_top; }
};

// Two-sided generation probe on the window.  A failed first part exhibits a
// proper submodule through the top vector; a failed second part exhibits a
// vector whose submodule misses the top line.  Both passing supports (never
// proves) simplicity at this truncation depth.
inline SimplicityReport simplicity_probe(const Inflated<Rat>& M, int trials, std::uint64_t seed) {
    SimplicityReport rep;
    rep.trials = trials;
    Alg sm = M.small();
    int d = M.hat.dim();

    std::vector<InfKey> basis = inf_basis(M.hat, M.depth);
    std::map<InfKey, size_t> idx = detail::index_of(basis);
    auto dense = [&](const InfVec<Rat>& v) {
        std::vector<Rat> row(basis.size(), Rat(0));
        for (const auto& [k, c] : v.t) row[idx.at(k)] = c;
        return row;
    };

    std::vector<UElt<Rat>> gens;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) gens.push_back(u_gen<Rat>(M.hat, a, b));

    detail::Echelon span;
    std::vector<InfVec<Rat>> queue{inf_hw(M)};
    span.insert(dense(queue.front()));
    while (!queue.empty()) {
        InfVec<Rat> v = std::move(queue.back());
        queue.pop_back();
        for (const UElt<Rat>& x : gens) {
            InfVec<Rat> img = act(M, x, v);
            rep.overflow = rep.overflow || img.overflow;
            if (img.is_zero()) continue;
            if (span.insert(dense(img))) queue.push_back(img);
        }
    }
    rep.generated_from_top = span.dim() == basis.size();

    // pull random vectors down to the bottom layer, then close up the bottom
    // factor under the smaller algebra and ask for the top line
    std::vector<UKey> vbasis = lowering_keys_up_to(sm, M.depth);
    std::map<UKey, size_t> vidx = detail::index_of(vbasis);
    auto vdense = [&](const VermaVec<Rat>& v) {
        std::vector<Rat> row(vbasis.size(), Rat(0));
        for (const auto& [k, c] : v.t) row[vidx.at(k)] = c;
        return row;
    };
    std::vector<UElt<Rat>> sgens;
    for (int a = 0; a < sm.dim(); ++a)
        for (int b = 0; b < sm.dim(); ++b) sgens.push_back(u_gen<Rat>(sm, a, b));
    Verma<Rat> bottom{sm, M.lambda, M.depth};

    Rng rng(seed);
    rep.descent_reaches_top = true;
    for (int trial = 0; trial < trials; ++trial) {
        InfVec<Rat> v;
        for (const InfKey& k : basis) iv_add(v, k, rng.small_rat_or_zero());
        if (v.is_zero()) iv_add(v, basis[static_cast<size_t>(rng.range(0, static_cast<long>(basis.size()) - 1))], Rat(1));
        InfVec<Rat> low = s_descent(M, v);
        VermaVec<Rat> w;
        for (const auto& [k, c] : low.t) vv_add(w, k.second, c);
        if (w.is_zero()) {
            rep.descent_reaches_top = false;
            continue;
        }
        detail::Echelon vspan;
        std::vector<VermaVec<Rat>> vq{w};
        vspan.insert(vdense(w));
        while (!vq.empty()) {
            VermaVec<Rat> u = std::move(vq.back());
            vq.pop_back();
            for (const UElt<Rat>& x : sgens) {
                VermaVec<Rat> img = verma_act(bottom, x, u);
                rep.overflow = rep.overflow || img.overflow;
                if (img.is_zero()) continue;
                if (vspan.insert(vdense(img))) vq.push_back(img);
            }
        }
        std::vector<Rat> top(vbasis.size(), Rat(0));
        top[vidx.at(UKey{})] = Rat(1);
        if (!vspan.contains(std::move(top))) rep.descent_reaches_top = false;
    }
    return rep;
}

// --- layer dimension tables --------------------------------------------------------------

namespace detail {

template <class Fn>
void lowering_drop_walk(const Alg& g, int budget, int off, std::vector<int>& drop, Fn&& emit) {
    std::vector<std::pair<int, int>> slots;
    for (int a = 1; a < g.dim(); ++a)
        for (int b = 0; b < a; ++b) slots.emplace_back(a, b);
    std::function<void(size_t, int)> rec = [&](size_t s, int left) {
        if (s == slots.size()) {
            emit();
            return;
        }
        auto [a, b] = slots[s];
        int unit = a - b;
        int emax = left / unit;
        if (gen_parity(g, gen_id(g, a, b)) && emax > 1) emax = 1;
        for (int e = 0; e <= emax; ++e) {
            drop[static_cast<size_t>(a) + static_cast<size_t>(off)] -= e;
            drop[static_cast<size_t>(b) + static_cast<size_t>(off)] += e;
            rec(s + 1, left - e * unit);
            drop[static_cast<size_t>(a) + static_cast<size_t>(off)] += e;
            drop[static_cast<size_t>(b) + static_cast<size_t>(off)] -= e;
        }
    };
    rec(0, budget);
}

}  // namespace detail

// Multiplicity of each integer drop of height <= hmax in a module with free
// lowering basis.  Purely combinatorial: independent of the top weight.
inline std::map<std::vector<int>, long> verma_character(const Alg& g, int hmax) {
    std::map<std::vector<int>, long> out;
    std::vector<int> drop(static_cast<size_t>(g.dim()), 0);
    detail::lowering_drop_walk(g, hmax, 0, drop, [&] { ++out[drop]; });
    return out;
}

// The same table for the product module: function monomials against lowering
// monomials of the smaller algebra.
inline std::map<std::vector<int>, long> product_character(const Alg& hat, int hmax) {
    Alg sm = small_of_hat(hat);
    std::map<std::vector<int>, long> out;
    std::vector<int> drop(static_cast<size_t>(hat.dim()), 0);
    std::function<void(int, int)> frec = [&](int v, int left) {
        if (v == hat.dim()) {
            detail::lowering_drop_walk(sm, left, 1, drop, [&] { ++out[drop]; });
            return;
        }
        int kmax = left / v;
        if (idx_odd(hat, v) && kmax > 1) kmax = 1;
        for (int k = 0; k <= kmax; ++k) {
            drop[0] += k;
            drop[static_cast<size_t>(v)] -= k;
            frec(v + 1, left - k * v);
            drop[0] -= k;
            drop[static_cast<size_t>(v)] += k;
        }
    };
    frec(1, hmax);
    return out;
}

}  // namespace capelli
