#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "capelli/rational.hpp"

namespace capelli {

using Params = std::shared_ptr<const std::vector<std::string>>;

inline Params make_params(std::vector<std::string> names) {
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

// Exact multivariate polynomial over Rat in a declared parameter list.
// Every exponent vector has arity params->size(); zero coefficients are
// never stored.  Binary ops align parameter lists by name (union).
struct ScalarPoly {
    Params params;
    std::map<std::vector<int>, Rat> terms;

    ScalarPoly() : params(make_params({})) {}
    explicit ScalarPoly(Params ps) : params(std::move(ps)) {}

    bool is_zero() const { return terms.empty(); }

    bool is_constant() const {
        if (terms.empty()) return true;
        if (terms.size() != 1) return false;
        const auto& e = terms.begin()->first;
        return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
    }

    Rat constant_value() const {
        if (terms.empty()) return Rat(0);
        if (!is_constant()) throw std::domain_error("poly is not constant");
        return terms.begin()->second;
    }

    std::optional<Rat> as_scalar() const {
        if (!is_constant()) return std::nullopt;
        return constant_value();
    }
};

inline ScalarPoly poly_const(const Rat& c, Params ps = make_params({})) {
    ScalarPoly p(std::move(ps));
    if (!is_zero(c)) p.terms[std::vector<int>(p.params->size(), 0)] = c;
    return p;
}

inline ScalarPoly poly_var(const Params& ps, int which, const Rat& coeff = Rat(1)) {
    ScalarPoly p(ps);
    if (is_zero(coeff)) return p;
    std::vector<int> e(ps->size(), 0);
    e.at(static_cast<size_t>(which)) = 1;
    p.terms[e] = coeff;
    return p;
}

inline int param_index(const Params& ps, const std::string& name) {
    for (size_t i = 0; i < ps->size(); ++i)
        if ((*ps)[i] == name) return static_cast<int>(i);
    return -1;
}

// Re-express p over the (super)set `target`; every current name must appear.
inline ScalarPoly poly_align(const ScalarPoly& p, const Params& target) {
    if (p.params == target || *p.params == *target) {
        ScalarPoly r(target);
        r.terms = p.terms;
        return r;
    }
    std::vector<int> where(p.params->size());
    for (size_t i = 0; i < p.params->size(); ++i) {
        int j = param_index(target, (*p.params)[i]);
        if (j < 0) throw std::invalid_argument("poly_align: missing parameter " + (*p.params)[i]);
        where[i] = j;
    }
    ScalarPoly r(target);
    for (const auto& [e, c] : p.terms) {
        std::vector<int> ne(target->size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[static_cast<size_t>(where[i])] = e[i];
        r.terms[ne] = c;
    }
    return r;
}

inline Params param_union(const Params& a, const Params& b) {
    if (a == b || *a == *b) return a;
    std::vector<std::string> names = *a;
    for (const auto& n : *b)
        if (param_index(a, n) < 0) names.push_back(n);
    return make_params(std::move(names));
}

namespace detail {
template <class F>
ScalarPoly poly_zip(const ScalarPoly& a, const ScalarPoly& b, F&& add_into) {
    Params ps = param_union(a.params, b.params);
    ScalarPoly ra = poly_align(a, ps), rb = poly_align(b, ps);
    add_into(ra, rb);
    return ra;
}
}  // namespace detail

inline void poly_add_term(ScalarPoly& p, const std::vector<int>& e, const Rat& c) {
    if (is_zero(c)) return;
    auto it = p.terms.find(e);
    if (it == p.terms.end()) {
        p.terms.emplace(e, c);
    } else {
        it->second += c;
        if (is_zero(it->second)) p.terms.erase(it);
    }
}

inline ScalarPoly operator+(const ScalarPoly& a, const ScalarPoly& b) {
    return detail::poly_zip(a, b, [](ScalarPoly& x, const ScalarPoly& y) {
        for (const auto& [e, c] : y.terms) poly_add_term(x, e, c);
    });
}

inline ScalarPoly operator-(const ScalarPoly& a, const ScalarPoly& b) {
    return detail::poly_zip(a, b, [](ScalarPoly& x, const ScalarPoly& y) {
        for (const auto& [e, c] : y.terms) poly_add_term(x, e, -c);
    });
}

inline ScalarPoly operator-(const ScalarPoly& a) {
    ScalarPoly r(a.params);
    for (const auto& [e, c] : a.terms) r.terms[e] = -c;
    return r;
}

inline ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
    Params ps = param_union(a.params, b.params);
    ScalarPoly ra = poly_align(a, ps), rb = poly_align(b, ps);
    ScalarPoly r(ps);
    for (const auto& [ea, ca] : ra.terms)
        for (const auto& [eb, cb] : rb.terms) {
            std::vector<int> e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            poly_add_term(r, e, ca * cb);
        }
    return r;
}

inline ScalarPoly operator*(const Rat& c, const ScalarPoly& a) {
    ScalarPoly r(a.params);
    if (is_zero(c)) return r;
    for (const auto& [e, k] : a.terms) r.terms[e] = c * k;
    return r;
}

inline bool operator==(const ScalarPoly& a, const ScalarPoly& b) {
    Params ps = param_union(a.params, b.params);
    return poly_align(a, ps).terms == poly_align(b, ps).terms;
}

inline ScalarPoly poly_pow(const ScalarPoly& a, long e) {
    if (e < 0) throw std::domain_error("poly_pow: negative exponent");
    ScalarPoly acc = poly_const(Rat(1), a.params);
    for (long i = 0; i < e; ++i) acc = acc * a;
    return acc;
}

inline Rat poly_eval(const ScalarPoly& p, const std::vector<Rat>& point) {
    if (point.size() != p.params->size()) throw std::invalid_argument("poly_eval: arity mismatch");
    Rat s(0);
    for (const auto& [e, c] : p.terms) {
        Rat t = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= rat_pow(point[i], e[i]);
        s += t;
    }
    return s;
}

// Simultaneous substitution param_i -> images[i]; images share a codomain list.
inline ScalarPoly poly_subst(const ScalarPoly& p, const std::vector<ScalarPoly>& images) {
    if (images.size() != p.params->size()) throw std::invalid_argument("poly_subst: arity mismatch");
    Params out = images.empty() ? make_params({}) : images[0].params;
    for (const auto& im : images) out = param_union(out, im.params);
    ScalarPoly s(out);
    for (const auto& [e, c] : p.terms) {
        ScalarPoly t = poly_const(c, out);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = t * poly_pow(images[i], e[i]);
        s = s + t;
    }
    return s;
}

// Apply a permutation of the parameter positions: result(x_{perm[i]}) with
// the exponent of old position i moved to perm[i].  Names are unchanged;
// this implements a group action on exponent vectors (Weyl-type checks).
inline ScalarPoly poly_permute(const ScalarPoly& p, const std::vector<int>& perm) {
    if (perm.size() != p.params->size()) throw std::invalid_argument("poly_permute: arity mismatch");
    ScalarPoly r(p.params);
    for (const auto& [e, c] : p.terms) {
        std::vector<int> ne(e.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[static_cast<size_t>(perm[i])] = e[i];
        r.terms[ne] = c;
    }
    return r;
}

namespace coeffs {
inline std::optional<Rat> scalar_of(const ScalarPoly& p) {
    if (p.is_constant()) return p.constant_value();
    return std::nullopt;
}
}  // namespace coeffs

inline std::string poly_text(const ScalarPoly& p) {
    if (p.terms.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : p.terms) {
        Rat a = c < 0 ? Rat(-c) : c;
        out += (c < 0 ? "-" : "+") + rat_text(a);
        bool any = false;
        for (size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            any = true;
            out += " " + (*p.params)[i];
            if (e[i] != 1) out += "^" + std::to_string(e[i]);
        }
        if (!any) out += " 1";
        out += " ";
    }
    out.pop_back();
    return out;
}

}  // namespace capelli
