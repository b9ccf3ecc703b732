#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laurent.hpp"

using namespace swancond;

namespace {

LaurentSeries series(FieldCtxPtr W, std::initializer_list<std::pair<long, long>> terms) {
    LaurentSeries s(W);
    for (auto& [d, c] : terms) s.set_coeff(d, Elem::from_integer(W, c));
    return s;
}

}  // namespace

TEST_CASE("Gauss valuations") {
    auto W = make_field(3, 1, 2, 48);
    LaurentSeries F = series(W, {{0, 1}, {-1, 27}, {-2, 72}});
    CHECK(F.gauss_valuation(rat(1, 2)) == Rat(0));
    CHECK(LaurentSeries::monomial(Elem::one(W), 1).gauss_valuation(rat(1, 2)) == rat(1, 2));
    CHECK(LaurentSeries::monomial(Elem::one(W), 1).gauss_valuation(rat(7, 5)) == rat(7, 5));
    CHECK(series(W, {{-1, 27}}).gauss_valuation(rat(1, 2)) == rat(5, 2));
}

TEST_CASE("v_r is a valuation") {
    auto W = make_field(2, 1, 1, 48);
    LaurentSeries A = series(W, {{0, 1}, {1, 6}, {-2, 8}});
    LaurentSeries B = series(W, {{0, 3}, {-1, 2}});
    for (long num = 1; num <= 4; ++num) {
        Rat r(num, 3);
        r.canonicalize();
        CHECK((A * B).gauss_valuation(r) == A.gauss_valuation(r) + B.gauss_valuation(r));
        Rat va = A.gauss_valuation(r), vb = B.gauss_valuation(r);
        CHECK((A + B).gauss_valuation(r) >= std::min(va, vb));
    }
}

TEST_CASE("reductions at a radius") {
    auto W = make_field(3, 1, 2, 48);
    auto fq = W->fq();
    // 72 T^-2 at r = 1/2 reduces to 2 t^-2
    LaurentSeries F = series(W, {{-2, 72}});
    RationalFn g = F.reduce(rat(1, 2));
    CHECK(g == RationalFn(FqPoly::constant(FqElem(fq, 2ul)), FqPoly::t(fq).pow(2)));

    // only the constant term achieves the minimum here
    LaurentSeries G = series(W, {{0, 1}, {-1, 27}, {-2, 72}});
    CHECK(G.reduce(rat(1, 2)) == RationalFn::one(fq));

    auto W1 = make_field(3, 1, 1, 48);
    LaurentSeries T = LaurentSeries::monomial(Elem::one(W1), 1);
    CHECK(T.reduce(Rat(1)) == RationalFn::from_poly(FqPoly::t(W1->fq())));
}

TEST_CASE("reduce requires e*r integral and suggests the multiplier") {
    auto W = make_field(3, 1, 1, 48);
    LaurentSeries T = LaurentSeries::monomial(Elem::one(W), 1);
    try {
        (void)T.reduce(rat(1, 2));
        CHECK(false);
    } catch (const ExtensionRequiredError& e) {
        CHECK(e.e_mult() == 2);
    }
}

TEST_CASE("ring operations") {
    auto W = make_field(2, 1, 1, 48);
    LaurentSeries a = series(W, {{0, 1}, {-1, 2}});
    LaurentSeries sq = a * a;
    CHECK(sq.coeff(0).indistinguishable(Elem::one(W)));
    CHECK(sq.coeff(-1).indistinguishable(Elem::from_integer(W, 4)));
    CHECK(sq.coeff(-2).indistinguishable(Elem::from_integer(W, 4)));
    CHECK(sq.terms().size() == 3);

    LaurentSeries b = series(W, {{0, 1}, {1, 1}});
    LaurentSeries c = series(W, {{0, 1}, {1, -1}});
    LaurentSeries prod = b * c;
    CHECK(prod.coeff(0).indistinguishable(Elem::one(W)));
    CHECK(prod.coeff(1).is_exact_zero());
    CHECK(prod.coeff(2).indistinguishable(Elem::from_integer(W, -1)));

    LaurentSeries t = series(W, {{0, 1}, {-1, 3}, {-3, 5}});
    LaurentSeries tr = t.truncate(2);
    CHECK(tr.coeff(-3).is_exact_zero());
    CHECK(tr.coeff(-1).indistinguishable(Elem::from_integer(W, 3)));
}

TEST_CASE("concavity of r -> v_r (Newton polygon of the series)") {
    auto W = make_field(3, 1, 2, 48);
    LaurentSeries F = series(W, {{0, 9}, {-1, 27}, {-2, 72}, {1, 3}});
    auto vr = [&](const Rat& r) { return F.gauss_valuation(r); };
    for (long k = 1; k <= 6; ++k) {
        Rat r1(k, 4), r2(k + 1, 4), mid = (Rat(k, 4) + Rat(k + 1, 4)) / 2;
        r1.canonicalize();
        r2.canonicalize();
        mid.canonicalize();
        CHECK(vr(mid) * 2 >= vr(r1) + vr(r2));
    }
}

TEST_CASE("tail certificates bound omitted coefficients") {
    auto W = make_field(3, 1, 1, 48);
    LaurentSeries F = series(W, {{0, 1}, {-1, 3}});
    F.set_neg_tail(TailCertificate{Rat(1)});  // omitted a_i have v >= i
    // below the slope the tail cannot dominate
    CHECK(F.gauss_valuation(rat(1, 2)) == Rat(0));
    // above the slope it could
    CHECK_THROWS_AS((void)F.gauss_valuation(Rat(2)), SwanError);
}

TEST_CASE("zero-at-precision series refuses Gauss valuation") {
    auto W = make_field(3, 1, 1, 48);
    LaurentSeries z(W);
    CHECK_THROWS_AS((void)z.gauss_valuation(Rat(1)), SwanError);
    Elem a = Elem::from_integer(W, 10);
    LaurentSeries tiny = LaurentSeries::monomial(a - a, 0);
    CHECK_THROWS_AS((void)tiny.gauss_valuation(Rat(1)), SwanError);
}
