#include <catch2/catch_amalgamated.hpp>

#include "capelli/laurent.hpp"
#include "capelli/rational.hpp"
#include "capelli/rng.hpp"
#include "capelli/scalar_poly.hpp"

using namespace capelli;

TEST_CASE("rational helpers") {
    REQUIRE(rat_parse("3/4") == Rat(3, 4));
    REQUIRE(rat_parse("-12") == Rat(-12));
    REQUIRE(rat_text(Rat(-5, 3)) == "-5/3");
    REQUIRE(rat_text(Rat(7)) == "7");
    REQUIRE_THROWS_AS(rat_parse("x"), std::invalid_argument);
    REQUIRE_THROWS_AS(rat_parse("1/0"), std::invalid_argument);

    REQUIRE(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    REQUIRE(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
    REQUIRE(rat_pow(Rat(5), 0) == Rat(1));

    REQUIRE(is_nonneg_integer(Rat(0)));
    REQUIRE(is_nonneg_integer(Rat(4)));
    REQUIRE_FALSE(is_nonneg_integer(Rat(-1)));
    REQUIRE_FALSE(is_nonneg_integer(Rat(1, 2)));
    REQUIRE(is_pos_integer(Rat(3)));
    REQUIRE_FALSE(is_pos_integer(Rat(0)));
}

TEST_CASE("generalized binomial") {
    REQUIRE(binom(4, 2) == 6);
    REQUIRE(binom(0, 0) == 1);
    REQUIRE(binom(3, 5) == 0);
    REQUIRE(binom(-1, 3) == -1);
    REQUIRE(binom(-2, 3) == -4);
    REQUIRE(binom(-3, 2) == 6);

    // Pascal recurrence holds for every integer upper argument.
    for (long k = -6; k <= 6; ++k)
        for (long j = 1; j <= 8; ++j)
            REQUIRE(binom(k, j) == binom(k - 1, j) + binom(k - 1, j - 1));
}

TEST_CASE("polynomial ring") {
    Params xy = make_params({"x", "y"});
    ScalarPoly x = poly_var(xy, 0), y = poly_var(xy, 1);

    ScalarPoly sq = (x + y) * (x + y);
    ScalarPoly expect = x * x + Rat(2) * (x * y) + y * y;
    REQUIRE(sq == expect);
    REQUIRE(poly_eval(sq, {Rat(2), Rat(-5)}) == Rat(9));

    ScalarPoly z = sq - expect;
    REQUIRE(z.is_zero());
    REQUIRE(poly_const(Rat(7)).is_constant());
    REQUIRE(poly_pow(x, 3) * poly_pow(x, 2) == poly_pow(x, 5));
}

TEST_CASE("parameter alignment") {
    Params px = make_params({"x"});
    Params py = make_params({"y"});
    ScalarPoly x = poly_var(px, 0), y = poly_var(py, 0);

    ScalarPoly s = x + y;  // lives in the union list
    REQUIRE(s.params->size() == 2);
    REQUIRE(poly_eval(s, {Rat(3), Rat(4)}) == Rat(7));

    Params pz = make_params({"z"});
    REQUIRE_THROWS_AS(poly_align(x, pz), std::invalid_argument);
}

TEST_CASE("substitution is the evaluation homomorphism") {
    Params xy = make_params({"x", "y"});
    Params uv = make_params({"u", "v"});
    ScalarPoly x = poly_var(xy, 0), y = poly_var(xy, 1);
    ScalarPoly u = poly_var(uv, 0), v = poly_var(uv, 1);

    ScalarPoly p = x * x * y + Rat(3) * x - poly_const(Rat(2), xy);
    std::vector<ScalarPoly> images = {u + v, u * v};
    ScalarPoly q = poly_subst(p, images);

    Rng rng(11);
    for (int it = 0; it < 20; ++it) {
        Rat a = rng.small_rat_or_zero(), b = rng.small_rat_or_zero();
        Rat xa = a + b, yb = a * b;
        REQUIRE(poly_eval(q, {a, b}) == poly_eval(p, {xa, yb}));
    }
}

TEST_CASE("exponent permutation") {
    Params xy = make_params({"x", "y"});
    ScalarPoly x = poly_var(xy, 0), y = poly_var(xy, 1);
    ScalarPoly p = x * x * y;
    REQUIRE(poly_permute(p, {1, 0}) == y * y * x);
    REQUIRE(poly_permute(p, {0, 1}) == p);
}

static Laurent<Rat> rand_series(Rng& rng, int fl, int top, bool unit_lead) {
    Laurent<Rat> s(fl);
    for (int k = fl; k <= top; ++k) s.add(k, rng.small_rat_or_zero());
    if (unit_lead) s.add(top, s.coeff(top) ? Rat(1) - *s.coeff(top) : Rat(1));
    return s;
}

TEST_CASE("laurent floor bookkeeping") {
    Laurent<Rat> a = monomial(-1, Rat(1), -1);
    Laurent<Rat> b(-5);
    b.add(0, Rat(1));
    b.add(-5, Rat(1));

    Laurent<Rat> p = a * b;
    REQUIRE(p.floor == -1);
    REQUIRE(p.coeff(-1) != nullptr);
    REQUIRE(*p.coeff(-1) == Rat(1));
    REQUIRE(p.coeff(-6) == nullptr);

    // with floors far below the support, polynomial products stay exact
    Laurent<Rat> f(-10), g(-10);
    f.add(0, Rat(1));
    f.add(2, Rat(3));
    g.add(1, Rat(-2));
    Laurent<Rat> fg = f * g;
    REQUIRE(fg.floor == -8);
    REQUIRE(*fg.coeff(1) == Rat(-2));
    REQUIRE(*fg.coeff(3) == Rat(-6));

    // operands that declare unknowns below zero yield a raised product floor:
    // an untracked g coefficient could pair with f's top term
    Laurent<Rat> f0(0), g0(0);
    f0.add(0, Rat(1));
    f0.add(2, Rat(3));
    g0.add(1, Rat(-2));
    REQUIRE((f0 * g0).floor == 2);
}

TEST_CASE("series inversion") {
    // geometric series: (1 - T^{-1})^{-1} = 1 + T^{-1} + T^{-2} + ...
    Laurent<Rat> s(-5);
    s.add(0, Rat(1));
    s.add(-1, Rat(-1));
    Laurent<Rat> inv = series_invert(s, Rat(1));
    for (int k = 0; k >= -5; --k) {
        REQUIRE(inv.coeff(k) != nullptr);
        REQUIRE(*inv.coeff(k) == Rat(1));
    }

    Rng rng(23);
    for (int it = 0; it < 25; ++it) {
        int L = static_cast<int>(rng.range(-2, 2));
        Laurent<Rat> r = rand_series(rng, L - 5, L, true);
        Laurent<Rat> ri = series_invert(r, Rat(1));
        Laurent<Rat> prod = r * ri;
        Laurent<Rat> one = monomial(0, Rat(1), prod.floor);
        REQUIRE(series_equal(prod, one, prod.floor));
    }

    Laurent<Rat> z(-3);
    REQUIRE_THROWS_AS(series_invert(z, Rat(1)), std::domain_error);
}

TEST_CASE("argument shift") {
    // (T+1)^{-1} expanded down to T^{-3}
    Laurent<Rat> s = monomial(-1, Rat(1), -3);
    Laurent<Rat> sh = series_shift(s, Rat(1), Rat(1));
    REQUIRE(*sh.coeff(-1) == Rat(1));
    REQUIRE(*sh.coeff(-2) == Rat(-1));
    REQUIRE(*sh.coeff(-3) == Rat(1));
    REQUIRE(sh.floor == -3);

    // polynomial case is exact: (T+1)^2
    Laurent<Rat> q = monomial(2, Rat(1), 0);
    Laurent<Rat> qs = series_shift(q, Rat(1), Rat(1));
    REQUIRE(*qs.coeff(2) == Rat(1));
    REQUIRE(*qs.coeff(1) == Rat(2));
    REQUIRE(*qs.coeff(0) == Rat(1));

    Rng rng(31);
    for (int it = 0; it < 25; ++it) {
        Laurent<Rat> r = rand_series(rng, -6, static_cast<int>(rng.range(-1, 3)), false);
        Rat h = rng.small_rat();
        Laurent<Rat> back = series_shift(series_shift(r, h, Rat(1)), Rat(-h), Rat(1));
        REQUIRE(series_equal(back, r, r.floor));
    }
}

TEST_CASE("series comparison depth guard") {
    Laurent<Rat> a(-2), b(-4);
    a.add(0, Rat(1));
    b.add(0, Rat(1));
    REQUIRE(series_equal(a, b, -2));
    REQUIRE_THROWS_AS(series_equal(a, b, -3), std::domain_error);
}
