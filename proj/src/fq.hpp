#ifndef SWANCOND_FQ_HPP
#define SWANCOND_FQ_HPP

#include <cstdint>
#include <memory>
#include <vector>
#include <string>

#include "errors.hpp"

namespace swancond {

// The residue field F_q, q = p^f, realized as F_p[w]/(modulus).  The modulus
// is the canonical (first in lexicographic order) monic irreducible of
// degree f, so two contexts with equal (p, f) are interchangeable.
class FqCtx {
  public:
    FqCtx(unsigned long p, unsigned long f);

    unsigned long p() const { return p_; }
    unsigned long f() const { return f_; }
    // q as unsigned long; throws ExtensionCapExceeded if p^f does not fit.
    unsigned long q() const { return q_; }
    const std::vector<unsigned long>& modulus() const { return modulus_; }

    bool same(const FqCtx& other) const { return p_ == other.p_ && f_ == other.f_; }

  private:
    unsigned long p_, f_, q_;
    std::vector<unsigned long> modulus_;  // degree f, monic, coefficients in [0,p)
};

using FqCtxPtr = std::shared_ptr<const FqCtx>;

class FqElem {
  public:
    FqElem() = default;
    FqElem(FqCtxPtr ctx, unsigned long scalar);             // image of an integer
    FqElem(FqCtxPtr ctx, std::vector<unsigned long> coords);

    static FqElem zero(FqCtxPtr ctx) { return FqElem(ctx, 0ul); }
    static FqElem one(FqCtxPtr ctx) { return FqElem(ctx, 1ul); }
    // Element with enumeration index k in [0, q): base-p digits of k.
    static FqElem from_index(FqCtxPtr ctx, unsigned long k);

    const FqCtxPtr& ctx() const { return ctx_; }
    const std::vector<unsigned long>& coords() const { return coords_; }
    unsigned long index() const;  // inverse of from_index

    bool is_zero() const;
    bool is_one() const;

    FqElem operator+(const FqElem& o) const;
    FqElem operator-(const FqElem& o) const;
    FqElem operator-() const;
    FqElem operator*(const FqElem& o) const;
    FqElem inverse() const;  // throws on zero
    FqElem pow(unsigned long long exp) const;
    FqElem frobenius() const { return pow_p(1); }
    FqElem pth_root() const;  // inverse Frobenius (F_q is perfect)

    bool operator==(const FqElem& o) const { return coords_ == o.coords_; }
    bool operator!=(const FqElem& o) const { return !(*this == o); }

    std::string str() const;

  private:
    FqElem pow_p(unsigned long times) const;  // x^(p^times)
    FqCtxPtr ctx_;
    std::vector<unsigned long> coords_;
};

// Dense univariate polynomial over F_q; coefficient i of t^i; normalized so
// the leading coefficient is nonzero (empty = zero polynomial).
class FqPoly {
  public:
    FqPoly() = default;
    explicit FqPoly(FqCtxPtr ctx) : ctx_(std::move(ctx)) {}
    FqPoly(FqCtxPtr ctx, std::vector<FqElem> coeffs);

    static FqPoly constant(const FqElem& c);
    static FqPoly monomial(const FqElem& c, std::size_t deg);
    static FqPoly t(FqCtxPtr ctx);  // the variable

    const FqCtxPtr& ctx() const { return ctx_; }
    bool is_zero() const { return coeffs_.empty(); }
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }  // -1 for zero
    const std::vector<FqElem>& coeffs() const { return coeffs_; }
    FqElem coeff(std::size_t i) const;
    FqElem leading() const;
    bool is_monic() const;

    FqPoly operator+(const FqPoly& o) const;
    FqPoly operator-(const FqPoly& o) const;
    FqPoly operator*(const FqPoly& o) const;
    FqPoly operator*(const FqElem& c) const;
    FqPoly monic() const;

    // Quotient and remainder; divisor must be nonzero.
    std::pair<FqPoly, FqPoly> divmod(const FqPoly& d) const;
    FqPoly operator/(const FqPoly& d) const { return divmod(d).first; }
    FqPoly operator%(const FqPoly& d) const { return divmod(d).second; }
    bool divides(const FqPoly& multiple) const;

    FqPoly derivative() const;
    FqElem eval(const FqElem& x) const;
    FqPoly pow_mod(unsigned long long exp, const FqPoly& mod) const;
    FqPoly pow(unsigned long exp) const;

    static FqPoly gcd(FqPoly a, FqPoly b);  // monic gcd

    // Multiplicity of the monic irreducible `f` in *this (0 if no division).
    long multiplicity(const FqPoly& f) const;

    // True iff the polynomial is of the form h(t)^p; if so *root = h.
    bool pth_power_root(FqPoly* root) const;

    bool operator==(const FqPoly& o) const;
    bool operator!=(const FqPoly& o) const { return !(*this == o); }

    std::string str() const;

  private:
    void normalize();
    FqCtxPtr ctx_;
    std::vector<FqElem> coeffs_;
};

// Full factorization into monic irreducibles (with multiplicities) and the
// leading constant.  Deterministic: equal-degree splitting sweeps candidate
// polynomials in a fixed enumeration order.
struct FqFactorization {
    FqElem lead;
    std::vector<std::pair<FqPoly, long>> factors;  // (monic irreducible, multiplicity)
};
FqFactorization fq_factor(const FqPoly& poly);

// All roots in F_q with multiplicities, by deflation.
std::vector<std::pair<FqElem, long>> fq_roots(const FqPoly& poly);

// Smallest degree among irreducible factors of a nonconstant polynomial.
long fq_min_factor_degree(const FqPoly& poly);

}  // namespace swancond

#endif
