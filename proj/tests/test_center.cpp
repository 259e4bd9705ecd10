#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "capelli/center.hpp"

using namespace capelli;

static std::string first_failure(const std::vector<std::string>& v) { return v.empty() ? "" : v.front(); }

// r_k(a,b) by direct enumeration of index chains:
//   sum over (i_1..i_{k-1}) of (-1)^{|i_1|+...+|i_{k-1}|} e_{a i_1} e_{i_1 i_2} ... e_{i_{k-1} b}
static UElt<Rat> r_direct(const Alg& g, int k, int a, int b) {
    if (k == 0) return a == b ? u_scalar<Rat>(g, idx_odd(g, a) ? Rat(-1) : Rat(1)) : u_zero<Rat>(g);
    int d = g.dim();
    UElt<Rat> s(g);
    std::vector<int> mid(static_cast<size_t>(k - 1), 0);
    while (true) {
        int sgn = 0;
        std::vector<int> word;
        int prev = a;
        for (int i : mid) {
            word.push_back(gen_id(g, prev, i));
            sgn ^= idx_parity(g, i);
            prev = i;
        }
        word.push_back(gen_id(g, prev, b));
        s = s + u_from_word<Rat>(g, word, sgn ? Rat(-1) : Rat(1));
        int t = k - 2;
        while (t >= 0 && mid[static_cast<size_t>(t)] == d - 1) mid[static_cast<size_t>(t--)] = 0;
        if (t < 0) break;
        ++mid[static_cast<size_t>(t)];
    }
    return s;
}

static TElt<Rat> euler_t(const Alg& hat) { return t_from_dop(d_euler<Rat>(hat)); }

static TElt<Rat> e_tensor_g(const Alg& hat, int i, int k) {
    TElt<Rat> r = t_pow(euler_t(hat), i);
    return r * t_from_u(hat, gelfand(small_of_hat(hat), k));
}

TEST_CASE("entry recursion matches direct enumeration and matrix powers") {
    for (Alg g : {gl(1, 1), gl(2, 1), gl(1, 2)}) {
        std::vector<UElt<Rat>> pw = mat_identity(g);
        for (int k = 0; k <= 5; ++k) {
            if (k > 0) pw = mat_mul(g, pw, signed_matrix(g));
            REQUIRE(str_of(g, pw) == gelfand(g, k));
            if (k <= 4)
                for (int a = 0; a < g.dim(); ++a)
                    for (int b = 0; b < g.dim(); ++b) {
                        UElt<Rat> rk = r_element(g, k, a, b);
                        REQUIRE(rk == r_direct(g, k, a, b));
                        UElt<Rat> signed_rk = idx_odd(g, a) ? -rk : rk;
                        REQUIRE(pw[static_cast<size_t>(a * g.dim() + b)] == signed_rk);
                    }
        }
        REQUIRE(gelfand(g, 0) == u_scalar<Rat>(g, Rat(g.p - g.q)));
        REQUIRE(gelfand(g, 1) == first_invariant<Rat>(g));
    }
}

TEST_CASE("invariants are central") {
    for (Alg g : {gl(1, 1), gl(2, 1)})
        for (int k = 1; k <= 4; ++k) REQUIRE(is_central(gelfand(g, k)));
    for (int k = 1; k <= 3; ++k) REQUIRE(is_central(gelfand(gl(1, 2), k)));
}

TEST_CASE("determinant series pinned at small rank") {
    {
        Alg g = gl(1, 0);
        Laurent<UElt<Rat>> cb = capelli_berezinian(g, -4);
        REQUIRE(cb.top() == 1);
        REQUIRE(cb.c.size() == 2);
        REQUIRE(*cb.coeff(1) == -u_one<Rat>(g));
        REQUIRE(*cb.coeff(0) == u_gen<Rat>(g, 0, 0));
    }
    {
        Alg g = gl(2, 0);
        Laurent<UElt<Rat>> cb = capelli_berezinian(g, -4);
        UElt<Rat> e11 = u_gen<Rat>(g, 0, 0), e22 = u_gen<Rat>(g, 1, 1);
        UElt<Rat> e21 = u_gen<Rat>(g, 1, 0), e12 = u_gen<Rat>(g, 0, 1);
        REQUIRE(cb.top() == 2);
        REQUIRE(*cb.coeff(2) == u_one<Rat>(g));
        REQUIRE(*cb.coeff(1) == -(e11 + e22 - u_one<Rat>(g)));
        REQUIRE(*cb.coeff(0) == e11 * e22 - e11 - e21 * e12);
    }
    {
        Alg g = gl(0, 1);
        Laurent<UElt<Rat>> cb = capelli_berezinian(g, -4);
        UElt<Rat> e = u_gen<Rat>(g, 0, 0), one = u_one<Rat>(g);
        REQUIRE(cb.top() == -1);
        for (int k = 0; k <= 2; ++k) REQUIRE(*cb.coeff(-1 - k) == -u_pow(one - e, k));
    }
    {
        // leading coefficients: sign (-1)^{p+q} at T^{p-q}
        Laurent<UElt<Rat>> cb = capelli_berezinian(gl(1, 1), -3);
        REQUIRE(cb.top() == 0);
        REQUIRE(*cb.coeff(0) == u_one<Rat>(gl(1, 1)));
        Laurent<UElt<Rat>> cb21 = capelli_berezinian(gl(2, 1), -3);
        REQUIRE(cb21.top() == 1);
        REQUIRE(*cb21.coeff(1) == -u_one<Rat>(gl(2, 1)));
    }
}

TEST_CASE("series coefficients are central") {
    for (Alg g : {gl(1, 0), gl(0, 1), gl(1, 1), gl(2, 1)}) {
        Laurent<UElt<Rat>> cb = capelli_berezinian(g, -6);
        for (const auto& [k, v] : cb.c)
            if (k >= -6) REQUIRE(is_central(v));
    }
}

TEST_CASE("shifted-series quotient lists the invariants") {
    for (Alg g : {gl(1, 0), gl(0, 1), gl(1, 1), gl(2, 1)}) {
        CenterReport rep = newton_identity(g, 6);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
}

TEST_CASE("generator-matrix Berezinian cross-check") {
    for (Alg g : {gl(1, 0), gl(0, 1)}) {
        CenterReport rep = berezinian_relation(g, 6);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    for (Alg g : {gl(1, 1), gl(1, 2)}) {
        CenterReport rep = berezinian_relation(g, 4);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    {
        CenterReport rep = berezinian_relation(gl(2, 1), 4);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
}

TEST_CASE("diagonal evaluation of invariants") {
    {
        Alg g = gl(1, 1);
        Params lp = ell_params(g);
        REQUIRE(hc_image(gelfand(g, 1)) == poly_var(lp, 0) + poly_var(lp, 1));
    }
    for (Alg g : {gl(1, 1), gl(2, 1), gl(1, 2)})
        for (int k = 1; k <= 4; ++k) REQUIRE(is_supersymmetric(hc_image(gelfand(g, k)), g));
    {
        // negative controls: a bare variable fails the matched-line condition,
        // an uneven mix of even variables fails the block symmetry
        Alg g = gl(1, 1);
        REQUIRE_FALSE(is_supersymmetric(poly_var(ell_params(g), 0), g));
        Alg h = gl(2, 1);
        Params lp = ell_params(h);
        REQUIRE_FALSE(is_supersymmetric(poly_var(lp, 0) + poly_var(lp, 2), h));
    }
}

TEST_CASE("factorized diagonal evaluation of the series") {
    for (Alg g : {gl(1, 0), gl(0, 1), gl(1, 1), gl(2, 1)}) {
        CenterReport rep = chi_capelli_identity(g, 6);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
}

TEST_CASE("degree-variable decomposition") {
    Alg hat = gl_hat(1, 1);
    Alg sm = small_of_hat(hat);
    Params l0p = make_params({"l0"});
    Params lp = ell_params(sm);
    ScalarPoly l0 = poly_var(l0p, 0);
    ScalarPoly lsum = poly_var(lp, 0) + poly_var(lp, 1);

    REQUIRE(chi_zero(euler_t(hat)) == l0);
    REQUIRE(chi_zero(t_from_u(hat, gelfand(sm, 1))) == lsum);
    REQUIRE(chi_zero(e_tensor_g(hat, 2, 1)) == poly_pow(l0, 2) * lsum);
    REQUIRE(chi_zero(t_scalar<Rat>(hat, Rat(1))) == poly_const(Rat(1), l0p));
    REQUIRE(chi_zero(t_zero<Rat>(hat)) == ScalarPoly(l0p));

    // operator part outside the degree-operator polynomial ring
    REQUIRE_THROWS_AS(chi_zero(t_from_dop(d_t_del<Rat>(hat, 1, 2))), std::domain_error);
    // non-central tensor factor is rejected unless certification is waived
    REQUIRE_THROWS_AS(chi_zero(t_from_u(hat, u_gen<Rat>(sm, 0, 1))), std::domain_error);
    REQUIRE(chi_zero(t_from_u(hat, u_gen<Rat>(sm, 0, 1)), false) == ScalarPoly(l0p));

    for (Alg h : {gl_hat(1, 1), gl_hat(2, 1), gl_hat(1, 0)})
        REQUIRE(chi_zero(r_canonical<Rat>(h)) == ell_canonical(h));
    REQUIRE_THROWS_AS(ell_canonical(gl_hat(0, 1)), std::domain_error);
}

TEST_CASE("transfer substitution") {
    Alg hat = gl_hat(1, 1);
    Params l0p = make_params({"l0"});
    ScalarPoly zero(l0p);
    // with a zero twist only the added slot shifts, by #even
    REQUIRE(hc_transfer(poly_var(l0p, 0), hat, zero) == poly_var(l0p, 0) + poly_const(Rat(2), l0p));
    // algebra map
    ScalarPoly p = hc_image(gelfand(hat, 1)), q = hc_image(gelfand(hat, 2));
    ScalarPoly ell = ell_canonical(hat);
    REQUIRE(hc_transfer(p * q, hat, ell) == hc_transfer(p, hat, ell) * hc_transfer(q, hat, ell));
}

TEST_CASE("transfer square commutes") {
    {
        Alg hat = gl_hat(1, 0);
        CenterReport rep = verify_hc_transfer(hat, t_zero<Rat>(hat), 3);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    {
        Alg hat = gl_hat(1, 1);
        for (TElt<Rat> R : {t_zero<Rat>(hat), r_canonical<Rat>(hat), euler_t(hat)}) {
            CenterReport rep = verify_hc_transfer(hat, R, 3);
            INFO(first_failure(rep.failures));
            REQUIRE(rep.all_pass);
        }
    }
    {
        Alg hat = gl_hat(2, 1);
        CenterReport rep = verify_hc_transfer(hat, r_canonical<Rat>(hat), 2);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
}

TEST_CASE("image of the one-larger determinant series") {
    {
        Alg hat = gl_hat(1, 0);
        for (TElt<Rat> R : {t_zero<Rat>(hat), r_canonical<Rat>(hat)}) {
            CenterReport rep = capelli_phi_identity(hat, R, 4);
            INFO(first_failure(rep.failures));
            REQUIRE(rep.all_pass);
        }
    }
    {
        Alg hat = gl_hat(0, 1);
        CenterReport rep = capelli_phi_identity(hat, t_zero<Rat>(hat), 4);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    {
        Alg hat = gl_hat(1, 1);
        for (TElt<Rat> R : {t_zero<Rat>(hat), r_canonical<Rat>(hat)}) {
            CenterReport rep = capelli_phi_identity(hat, R, 3);
            INFO(first_failure(rep.failures));
            REQUIRE(rep.all_pass);
        }
    }
}

TEST_CASE("closed-form invariant images pinned by hand") {
    Alg hat = gl_hat(1, 0);
    Alg sm = small_of_hat(hat);
    TElt<Rat> zero = t_zero<Rat>(hat);
    PhiContext<Rat> ctx = phi_context(hat, zero);

    // k = 1: degree operator plus the embedded first invariant
    TElt<Rat> k1 = euler_t(hat) + t_from_u(hat, gelfand(sm, 1));
    REQUIRE(gelfand_image(hat, zero, 1) == k1);
    REQUIRE(phi_apply(ctx, gelfand(hat, 1)) == k1);

    // k = 2 at zero twist
    DOp<Rat> e = d_euler<Rat>(hat);
    UElt<Rat> e11 = u_gen<Rat>(sm, 0, 0);
    TElt<Rat> k2 = t_from_dop(e * e + e) + t_from_u(hat, e11 * e11 - e11);
    REQUIRE(gelfand_image(hat, zero, 2) == k2);
    REQUIRE(phi_apply(ctx, gelfand(hat, 2)) == k2);

    // the canonical twist kills k = 1
    for (Alg h : {gl_hat(1, 1), gl_hat(2, 1)})
        REQUIRE(gelfand_image(h, r_canonical<Rat>(h), 1).is_zero());
}

TEST_CASE("closed-form images match the homomorphism") {
    {
        Alg hat = gl_hat(1, 1);
        for (TElt<Rat> R : {t_zero<Rat>(hat), r_canonical<Rat>(hat), euler_t(hat) * t_from_u(hat, gelfand(small_of_hat(hat), 1))}) {
            CenterReport rep = gelfand_images_check(hat, R, 4);
            INFO(first_failure(rep.failures));
            REQUIRE(rep.all_pass);
        }
        for (TElt<Rat> R : {t_zero<Rat>(hat), euler_t(hat)}) {
            CenterReport rep = rk_images_check(hat, R, 3);
            INFO(first_failure(rep.failures));
            REQUIRE(rep.all_pass);
        }
    }
    {
        Alg hat = gl_hat(2, 1);
        for (TElt<Rat> R : {t_zero<Rat>(hat), r_canonical<Rat>(hat)}) {
            CenterReport rep = gelfand_images_check(hat, R, 3);
            INFO(first_failure(rep.failures));
            REQUIRE(rep.all_pass);
        }
        CenterReport rep = rk_images_check(hat, t_zero<Rat>(hat), 2);
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    {
        Alg hat = gl_hat(1, 2);
        CenterReport g = gelfand_images_check(hat, e_tensor_g(hat, 1, 1), 3);
        INFO(first_failure(g.failures));
        REQUIRE(g.all_pass);
        CenterReport r = rk_images_check(hat, euler_t(hat), 2);
        INFO(first_failure(r.failures));
        REQUIRE(r.all_pass);
    }
}
