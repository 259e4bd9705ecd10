#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "capelli/phi.hpp"
#include "capelli/scalar_poly.hpp"

using namespace capelli;

static std::string first_failure(const std::vector<std::string>& v) { return v.empty() ? "" : v.front(); }

// hat indices at rank (1,1): 0 is the extra even slot, 1 the even one, 2 the
// odd one; the small algebra renumbers 1 -> 0, 2 -> 1.

TEST_CASE("generator images follow the defining formulas") {
    Alg hat = gl_hat(1, 1);
    Alg sm = small_of_hat(hat);
    PhiContext<Rat> ctx0 = phi_context_r0<Rat>(hat);
    TElt<Rat> R = r_canonical<Rat>(hat);
    PhiContext<Rat> ctx1 = phi_context(hat, R);

    auto img = [&](const PhiContext<Rat>& c, int a, int b) { return phi_apply(c, u_gen<Rat>(hat, a, b)); };

    // row 0 acts purely by operators
    REQUIRE(img(ctx0, 0, 1) == t_from_dop(d_t_del<Rat>(hat, 0, 1)));
    REQUIRE(img(ctx0, 0, 2) == t_from_dop(d_t_del<Rat>(hat, 0, 2)));
    REQUIRE(img(ctx0, 0, 0) == t_from_dop(d_t_del<Rat>(hat, 0, 0)));
    REQUIRE(img(ctx1, 0, 0) == t_from_dop(d_t_del<Rat>(hat, 0, 0)) + R);

    // both-small generators split into an operator part and a right factor,
    // with the twist entering only on the diagonal (sign by parity)
    REQUIRE(img(ctx0, 1, 2) == t_from_dop(d_t_del<Rat>(hat, 1, 2)) + t_from_u(hat, u_gen<Rat>(sm, 0, 1)));
    REQUIRE(img(ctx1, 1, 1) ==
            t_from_dop(d_t_del<Rat>(hat, 1, 1)) + t_from_u(hat, u_gen<Rat>(sm, 0, 0)) + R);
    REQUIRE(img(ctx1, 2, 2) ==
            t_from_dop(d_t_del<Rat>(hat, 2, 2)) + t_from_u(hat, u_gen<Rat>(sm, 1, 1)) - R);

    // column 0 mixes in every small column, odd rows flipping the sign on
    // even partners
    TElt<Rat> want = t_from_dop(d_t_del<Rat>(hat, 2, 0));
    want = want - t_from_dop(d_t_frac<Rat>(hat, 1)) * t_from_u(hat, u_gen<Rat>(sm, 1, 0));
    want = want + t_from_dop(d_t_frac<Rat>(hat, 2)) * t_from_u(hat, u_gen<Rat>(sm, 1, 1));
    REQUIRE(img(ctx0, 2, 0) == want);

    TElt<Rat> want_even = t_from_dop(d_t_del<Rat>(hat, 1, 0));
    want_even = want_even - t_from_dop(d_t_frac<Rat>(hat, 1)) * t_from_u(hat, u_gen<Rat>(sm, 0, 0));
    want_even = want_even - t_from_dop(d_t_frac<Rat>(hat, 2)) * t_from_u(hat, u_gen<Rat>(sm, 0, 1));
    REQUIRE(img(ctx0, 1, 0) == want_even);
}

TEST_CASE("the twist must be central") {
    Alg hat = gl_hat(1, 1);
    Alg sm = small_of_hat(hat);
    TElt<Rat> bad = t_from_u(hat, u_gen<Rat>(sm, 0, 0));
    REQUIRE_FALSE(t_is_central(bad));
    REQUIRE_THROWS_AS(phi_context(hat, bad), std::invalid_argument);
    // certification can be waived to study the broken family
    PhiContext<Rat> ctx = phi_context(hat, bad, false);
    REQUIRE(ctx.images.size() == 9);
}

static void hom_sweep(const Alg& hat) {
    std::vector<TElt<Rat>> twists;
    twists.push_back(t_zero<Rat>(hat));
    if (hat.p != hat.q) twists.push_back(r_canonical<Rat>(hat));
    twists.push_back(t_from_dop(d_euler<Rat>(hat)));
    twists.push_back(t_from_u(hat, first_invariant<Rat>(small_of_hat(hat))));
    size_t n2 = static_cast<size_t>(hat.dim()) * hat.dim();
    for (size_t r = 0; r < twists.size(); ++r) {
        INFO("p=" << hat.p << " q=" << hat.q << " twist#" << r);
        HomReport rep = verify_homomorphism(phi_context(hat, twists[r]));
        REQUIRE(rep.checks.size() == n2 * n2);
        for (const auto& hc : rep.checks) {
            INFO("x=" << hc.x_gen << " y=" << hc.y_gen << " case " << hc.case_label << " " << hc.detail);
            REQUIRE(hc.pass);
        }
        REQUIRE(rep.all_pass);
    }
}

TEST_CASE("bracket compatibility for every generator pair") {
    hom_sweep(gl_hat(1, 0));
    hom_sweep(gl_hat(0, 1));
    hom_sweep(gl_hat(1, 1));
    hom_sweep(gl_hat(2, 1));
}

TEST_CASE("images multiply like their sources") {
    // not built in: products are straightened before images are taken
    Alg hat = gl_hat(1, 1);
    PhiContext<Rat> ctx = phi_context(hat, r_canonical<Rat>(hat));
    Rng rng(77);
    int n2 = hat.dim() * hat.dim();
    for (int it = 0; it < 20; ++it) {
        std::vector<int> wx{static_cast<int>(rng.range(0, n2 - 1)), static_cast<int>(rng.range(0, n2 - 1))};
        std::vector<int> wy{static_cast<int>(rng.range(0, n2 - 1)), static_cast<int>(rng.range(0, n2 - 1))};
        UElt<Rat> x = u_from_word<Rat>(hat, wx, rng.small_rat());
        UElt<Rat> y = u_from_word<Rat>(hat, wy, rng.small_rat());
        REQUIRE(phi_apply(ctx, x * y) == phi_apply(ctx, x) * phi_apply(ctx, y));
    }
}

TEST_CASE("commutator case taxonomy") {
    Alg hat = gl_hat(2, 1);
    int n2 = hat.dim() * hat.dim();
    // reversal swaps the two chain patterns and fixes everything else
    for (int x = 0; x < n2; ++x)
        for (int y = 0; y < n2; ++y) {
            int l = hom_case_label(hat, x, y), r = hom_case_label(hat, y, x);
            REQUIRE(r == (l == 2 ? 3 : l == 3 ? 2 : l));
        }
    // every case is realized at this rank
    std::set<int> seen;
    for (int x = 0; x < n2; ++x)
        for (int y = 0; y < n2; ++y) seen.insert(hom_case_label(hat, x, y));
    REQUIRE(seen == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14});
    // spot values
    REQUIRE(hom_case_label(hat, gen_id(hat, 1, 2), gen_id(hat, 2, 1)) == 1);
    REQUIRE(hom_case_label(hat, gen_id(hat, 1, 2), gen_id(hat, 2, 3)) == 2);
    REQUIRE(hom_case_label(hat, gen_id(hat, 1, 2), gen_id(hat, 0, 0)) == 7);
    REQUIRE(hom_case_label(hat, gen_id(hat, 1, 0), gen_id(hat, 0, 2)) == 9);
    REQUIRE(hom_case_label(hat, gen_id(hat, 0, 1), gen_id(hat, 0, 2)) == 11);
    REQUIRE(hom_case_label(hat, gen_id(hat, 0, 0), gen_id(hat, 0, 0)) == 7);
}

TEST_CASE("a non-central twist is detected by the sweep") {
    Alg hat = gl_hat(1, 1);
    Alg sm = small_of_hat(hat);
    PhiContext<Rat> ctx = phi_context(hat, t_from_u(hat, u_gen<Rat>(sm, 0, 0)), false);
    HomReport rep = verify_homomorphism(ctx);
    REQUIRE_FALSE(rep.all_pass);
    // the twist enters diagonal images, so a pair of an off-diagonal
    // generator against the corner one must break
    int bad_x = gen_id(hat, 1, 2), bad_y = gen_id(hat, 0, 0);
    bool found = false;
    for (const auto& hc : rep.checks)
        if (hc.x_gen == bad_x && hc.y_gen == bad_y) {
            found = true;
            REQUIRE(hc.case_label == 7);
            REQUIRE_FALSE(hc.pass);
        }
    REQUIRE(found);
}

TEST_CASE("canonical twist kills the diagonal sum") {
    for (Alg hat : {gl_hat(1, 0), gl_hat(1, 1), gl_hat(2, 1)}) {
        PhiContext<Rat> ctx = phi_context(hat, r_canonical<Rat>(hat));
        REQUIRE(phi_apply(ctx, first_invariant<Rat>(hat)).is_zero());
    }
    REQUIRE_THROWS_WITH(r_canonical<Rat>(gl_hat(0, 1)), "division by m+1-n");
    REQUIRE_THROWS_AS(r_canonical<Rat>(gl_hat(1, 2)), std::domain_error);
}

TEST_CASE("traceless projection and the embeddings") {
    Alg hat = gl_hat(1, 1);
    Alg sm = small_of_hat(hat);

    // p - q = 1 here, so the corner generator projects to minus the rest of
    // the diagonal
    REQUIRE(pi_g(u_gen<Rat>(hat, 0, 0)) == -(u_gen<Rat>(hat, 1, 1) + u_gen<Rat>(hat, 2, 2)));
    REQUIRE(pi_g(u_gen<Rat>(hat, 1, 2)) == u_gen<Rat>(hat, 1, 2));
    REQUIRE(pi_g(first_invariant<Rat>(hat)).is_zero());

    Alg hat2 = gl_hat(2, 1);
    REQUIRE(pi_g(u_gen<Rat>(hat2, 0, 0)) ==
            u_gen<Rat>(hat2, 0, 0) - Rat(1, 2) * first_invariant<Rat>(hat2));
    REQUIRE(pi_g(first_invariant<Rat>(hat2)).is_zero());

    // small generators embed with the corner compensating their supertrace
    REQUIRE(iota_g(hat, u_gen<Rat>(sm, 0, 0)) == u_gen<Rat>(hat, 1, 1) - u_gen<Rat>(hat, 0, 0));
    REQUIRE(iota_g(hat, u_gen<Rat>(sm, 0, 1)) == u_gen<Rat>(hat, 1, 2));
    REQUIRE(iota_g(hat, u_gen<Rat>(sm, 1, 1)) == u_gen<Rat>(hat, 2, 2) + u_gen<Rat>(hat, 0, 0));
}

TEST_CASE("composition diagram") {
    DiagramReport rep = verify_diagram(gl_hat(1, 1));
    {
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    rep = verify_diagram(gl_hat(2, 1));
    {
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    REQUIRE_THROWS_AS(verify_diagram(gl_hat(0, 1)), std::domain_error);
}

TEST_CASE("operator side left inverse") {
    Alg hat = gl_hat(1, 1);

    REQUIRE(psi_prime(d_t_del<Rat>(hat, 1, 2)) == u_gen<Rat>(hat, 1, 2));
    REQUIRE(psi_prime(d_t_del<Rat>(hat, 0, 0) + Rat(3) * d_t_del<Rat>(hat, 2, 1)) ==
            u_gen<Rat>(hat, 0, 0) + Rat(3) * u_gen<Rat>(hat, 2, 1));
    // quadratic operators are outside the domain
    REQUIRE_THROWS_AS(psi_prime(d_t_del<Rat>(hat, 1, 1) * d_t_del<Rat>(hat, 1, 1)), std::domain_error);

    // the counit keeps exactly the operator-only part of an image
    TElt<Rat> im = phi_apply(phi_context_r0<Rat>(hat), u_gen<Rat>(hat, 2, 0));
    REQUIRE(counit_u(im) == d_t_del<Rat>(hat, 2, 0));

    PsiReport rep = psi_left_inverse(hat);
    {
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
    rep = psi_left_inverse(gl_hat(2, 1));
    {
        INFO(first_failure(rep.failures));
        REQUIRE(rep.all_pass);
    }
}

TEST_CASE("kernel membership with certificates") {
    Alg hat = gl_hat(1, 1);
    UElt<Rat> g1 = first_invariant<Rat>(hat);

    KernelCertificate cert = kernel_membership(g1);
    REQUIRE(cert.in_kernel);
    REQUIRE(cert.certified);
    REQUIRE(cert.witness == u_one<Rat>(hat));

    cert = kernel_membership(u_gen<Rat>(hat, 1, 2) * g1);
    REQUIRE(cert.certified);
    REQUIRE(cert.witness == u_gen<Rat>(hat, 1, 2));

    cert = kernel_membership(u_pow(g1, 2));
    REQUIRE(cert.certified);
    REQUIRE(cert.witness == g1);

    cert = kernel_membership(u_pow(g1, 2) + u_gen<Rat>(hat, 1, 2) * g1);
    REQUIRE(cert.certified);
    REQUIRE(g1 * cert.witness == u_pow(g1, 2) + u_gen<Rat>(hat, 1, 2) * g1);

    // two-sided products stay in the ideal because the generator is central
    Rng rng(31);
    int n2 = hat.dim() * hat.dim();
    for (int it = 0; it < 10; ++it) {
        std::vector<int> wu{static_cast<int>(rng.range(0, n2 - 1))};
        std::vector<int> wv{static_cast<int>(rng.range(0, n2 - 1)), static_cast<int>(rng.range(0, n2 - 1))};
        UElt<Rat> x = u_from_word<Rat>(hat, wu, rng.small_rat()) * g1 * u_from_word<Rat>(hat, wv);
        KernelCertificate kc = kernel_membership(x);
        REQUIRE(kc.in_kernel);
        REQUIRE(kc.certified);
        REQUIRE(g1 * kc.witness == x);
    }

    REQUIRE_FALSE(kernel_membership(u_gen<Rat>(hat, 1, 2)).in_kernel);
    REQUIRE_FALSE(kernel_membership(u_gen<Rat>(hat, 0, 0)).in_kernel);
    REQUIRE_FALSE(kernel_membership(u_one<Rat>(hat)).in_kernel);

    // rank (2,1) once, with a mixed element
    Alg hat2 = gl_hat(2, 1);
    UElt<Rat> g1b = first_invariant<Rat>(hat2);
    UElt<Rat> x2 = u_gen<Rat>(hat2, 0, 3) * g1b + Rat(2) * g1b;
    KernelCertificate kc2 = kernel_membership(x2);
    REQUIRE(kc2.certified);
    REQUIRE(g1b * kc2.witness == x2);

    REQUIRE_THROWS_WITH(kernel_membership(u_gen<Rat>(gl_hat(0, 1), 0, 1)), "division by m+1-n");
}

TEST_CASE("polynomial coefficients run through the same family") {
    Alg hat = gl_hat(1, 0);
    PhiContext<ScalarPoly> ctx = phi_context(hat, r_canonical<ScalarPoly>(hat));
    REQUIRE(verify_homomorphism(ctx).all_pass);
}
