#ifndef SWANCOND_LAURENT_HPP
#define SWANCOND_LAURENT_HPP

#include <map>
#include <optional>

#include "local_field.hpp"
#include "residue_fn.hpp"

namespace swancond {

// Certificate for an omitted tail: every omitted coefficient at |degree| = i
// has valuation >= sigma * i.
struct TailCertificate {
    Rat sigma;
};

// Finite-support two-sided series sum a_d T^d over W, with optional tail
// certificates in each direction.  Coefficients may individually be
// below-precision unknowns; valuation queries stay sound either way.
class LaurentSeries {
  public:
    LaurentSeries() = default;
    explicit LaurentSeries(FieldCtxPtr ctx) : ctx_(std::move(ctx)) {}

    static LaurentSeries one(FieldCtxPtr ctx);
    static LaurentSeries monomial(const Elem& coeff, long degree);

    const FieldCtxPtr& ctx() const { return ctx_; }
    const std::map<long, Elem>& terms() const { return terms_; }
    bool stored_empty() const { return terms_.empty(); }

    Elem coeff(long d) const;
    void set_coeff(long d, Elem c);
    std::optional<long> min_degree() const;
    std::optional<long> max_degree() const;

    const std::optional<TailCertificate>& neg_tail() const { return neg_tail_; }
    const std::optional<TailCertificate>& pos_tail() const { return pos_tail_; }
    void set_neg_tail(std::optional<TailCertificate> c) { neg_tail_ = std::move(c); }
    void set_pos_tail(std::optional<TailCertificate> c) { pos_tail_ = std::move(c); }

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator-() const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries scale(const Elem& c) const;
    LaurentSeries shift_degrees(long m) const;  // multiply by T^m
    LaurentSeries pth_power(unsigned long p) const;
    LaurentSeries pow(unsigned long k) const;

    // Degree-s truncation: keeps degrees with |d| <= s, drops certificates.
    LaurentSeries truncate(long s) const;

    // v_r = min over terms of v(a_d) + d*r, exact; raises TailUnbounded when
    // an uncertified or invalid tail could dominate and PrecisionLoss when a
    // below-precision coefficient could.
    Rat gauss_valuation(const Rat& r) const;

    // [F]_r: image of p^(-v_r(F)) F in the residue field k(t); needs e*r
    // integral (ExtensionRequired otherwise).
    RationalFn reduce(const Rat& r) const;

    LaurentSeries embed(const FieldEmbedding& emb) const;

    std::string str() const;

  private:
    // Minimum of v(a_d) + d*r over everything not stored exactly; nullopt if
    // nothing hidden.  Throws TailUnbounded if a tail is unbounded at r.
    std::optional<Rat> hidden_floor(const Rat& r) const;

    // Stored coefficient, or the certified tail bound as a bounded unknown.
    Elem coeff_or_tail(long d) const;

    FieldCtxPtr ctx_;
    std::map<long, Elem> terms_;
    std::optional<TailCertificate> neg_tail_, pos_tail_;
};

}  // namespace swancond

#endif
