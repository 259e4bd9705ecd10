#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "capelli/rational.hpp"

namespace capelli {

// gl(p|q) index bookkeeping.  Internally indices run 0..p+q-1 with the first
// p even and the last q odd.  Display labels follow the usual two pictures:
// label0 == 1 gives the index set {1..p, 1bar..qbar}, label0 == 0 gives
// {0..p-1, 1bar..qbar} (the "one extra even index" picture, where the extra
// index is labeled 0).  The internal total order (plain int comparison)
// matches the displayed order in both pictures.
struct Alg {
    int p = 0;       // number of even indices
    int q = 0;       // number of odd indices
    int label0 = 1;  // display label of the first even index (0 or 1)

    int dim() const { return p + q; }
    bool operator==(const Alg& o) const { return p == o.p && q == o.q && label0 == o.label0; }
    bool operator!=(const Alg& o) const { return !(*this == o); }
};

// gl(m|n) with indices 1..m, 1bar..nbar.
inline Alg gl(int m, int n) { return Alg{m, n, 1}; }
// gl(m+1|n) with indices 0..m, 1bar..nbar.
inline Alg gl_hat(int m, int n) { return Alg{m + 1, n, 0}; }

inline bool idx_odd(const Alg& g, int i) { return i >= g.p; }
inline int idx_parity(const Alg& g, int i) { return i >= g.p ? 1 : 0; }

inline std::string idx_name(const Alg& g, int i) {
    if (i < 0 || i >= g.dim()) throw std::out_of_range("index");
    if (i < g.p) return std::to_string(i + g.label0);
    return std::to_string(i - g.p + 1) + "bar";
}

inline int idx_parse(const Alg& g, const std::string& s) {
    bool bar = s.size() > 3 && s.substr(s.size() - 3) == "bar";
    std::string num = bar ? s.substr(0, s.size() - 3) : s;
    int v;
    try {
        v = std::stoi(num);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad index: " + s);
    }
    int i = bar ? g.p + (v - 1) : v - g.label0;
    if (bar ? (v < 1 || v > g.q) : (i < 0 || i >= g.p)) throw std::invalid_argument("index out of range: " + s);
    return i;
}

// Weyl-vector entry: rho = (p, p-1, ..., 1, -1, -2, ..., -q) in display order,
// shifted so that in the label0==0 picture the leading entry is p (= m+1).
inline Rat rho_entry(const Alg& g, int i) {
    if (i < g.p) return Rat(g.p - i);
    return Rat(-(i - g.p + 1));
}

inline std::vector<Rat> rho(const Alg& g) {
    std::vector<Rat> v(g.dim());
    for (int i = 0; i < g.dim(); ++i) v[i] = rho_entry(g, i);
    return v;
}

// Signed count of indices strictly below i: sum_{j<i} (-1)^{|j|}.
inline int signed_count_below(const Alg& g, int i) {
    if (i < g.p) return i;
    return g.p - (i - g.p);
}

// Nondegenerate invariant form on weights: (u, v) = sum (-1)^{|i|} u_i v_i.
inline Rat weight_form(const Alg& g, const std::vector<Rat>& u, const std::vector<Rat>& v) {
    Rat s(0);
    for (int i = 0; i < g.dim(); ++i) {
        Rat term = u[i] * v[i];
        s += idx_odd(g, i) ? -term : term;
    }
    return s;
}

}  // namespace capelli
