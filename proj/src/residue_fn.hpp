#ifndef SWANCOND_RESIDUE_FN_HPP
#define SWANCOND_RESIDUE_FN_HPP

#include <vector>

#include "fq.hpp"

namespace swancond {

// Element of F_q(t), stored reduced with monic denominator.
class RationalFn {
  public:
    RationalFn() = default;
    explicit RationalFn(FqCtxPtr ctx)
        : num_(FqPoly(ctx)), den_(FqPoly::constant(FqElem::one(ctx))) {}
    RationalFn(FqPoly num, FqPoly den);

    static RationalFn from_poly(FqPoly p);
    static RationalFn one(FqCtxPtr ctx) { return from_poly(FqPoly::constant(FqElem::one(ctx))); }

    const FqPoly& num() const { return num_; }
    const FqPoly& den() const { return den_; }
    FqCtxPtr ctx() const { return den_.ctx(); }
    bool is_zero() const { return num_.is_zero(); }

    RationalFn operator+(const RationalFn& o) const;
    RationalFn operator-(const RationalFn& o) const;
    RationalFn operator-() const;
    RationalFn operator*(const RationalFn& o) const;
    RationalFn operator/(const RationalFn& o) const;
    RationalFn inverse() const;
    RationalFn derivative() const;  // d/dt by the quotient rule

    // deg num - deg den; the order of pole at infinity of the function.
    long degree() const;

    bool operator==(const RationalFn& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFn& o) const { return !(*this == o); }

    std::string str() const;

  private:
    void reduce();
    FqPoly num_, den_;
};

// g in F_q(t) is a p-th power iff every irreducible factor multiplicity is
// divisible by p; equivalently numerator and denominator are p-th powers of
// polynomials (the field is perfect, so constants always are).
bool is_pth_power(const RationalFn& g);
RationalFn pth_root(const RationalFn& g);  // throws NotAPthPower

// Places of P^1 over F_q: the point at infinity or a monic irreducible of
// F_q[t] (t itself is the place "0").
struct Place {
    enum class Kind { Finite, Infinity } kind;
    FqPoly poly;  // monic irreducible, Finite only

    static Place infinity(FqCtxPtr ctx) { return {Kind::Infinity, FqPoly(std::move(ctx))}; }
    static Place zero(FqCtxPtr ctx) { return {Kind::Finite, FqPoly::t(std::move(ctx))}; }
    static Place finite(FqPoly p) { return {Kind::Finite, std::move(p)}; }

    long degree() const { return kind == Kind::Infinity ? 1 : poly.degree(); }
    bool operator==(const Place& o) const { return kind == o.kind && poly == o.poly; }
};

// Meromorphic differential g * dt on the residue line.
class ResidueDifferential {
  public:
    ResidueDifferential() = default;
    explicit ResidueDifferential(RationalFn coefficient) : coeff_(std::move(coefficient)) {}

    const RationalFn& coefficient() const { return coeff_; }
    bool is_zero() const { return coeff_.is_zero(); }

    ResidueDifferential operator+(const ResidueDifferential& o) const {
        return ResidueDifferential(coeff_ + o.coeff_);
    }
    ResidueDifferential scale(const FqElem& c) const {
        return ResidueDifferential(coeff_ * RationalFn::from_poly(FqPoly::constant(c)));
    }

    // ord at a place; ord_inf(g dt) = -deg(g) - 2 via the substitution s = 1/t.
    long ord_at(const Place& place) const;

    // Distinct places where the differential has a zero or pole, with orders;
    // includes infinity.  Requires a nonzero differential.
    std::vector<std::pair<Place, long>> divisor() const;

    // Sum of deg(P) * ord_P over the divisor; must equal -2.
    long degree_check() const;

    bool operator==(const ResidueDifferential& o) const { return coeff_ == o.coeff_; }

    std::string str() const { return "(" + coeff_.str() + ") dt"; }

  private:
    RationalFn coeff_;
};

// d(g) as a differential: g' dt.
ResidueDifferential d_of(const RationalFn& g);
// dlog(g) = dg / g.
ResidueDifferential dlog_of(const RationalFn& g);

}  // namespace swancond

#endif
