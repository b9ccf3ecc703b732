#ifndef SWANCOND_LOCAL_FIELD_HPP
#define SWANCOND_LOCAL_FIELD_HPP

#include <memory>
#include <optional>
#include <vector>

#include "fq.hpp"
#include "rational.hpp"

namespace swancond {

// Working local field W: the unramified extension of Q_p of degree f, with a
// uniformizer pi adjoined satisfying pi^e = p.  Elements are known to N
// p-adic digits; the valuation is normalized so v(p) = 1, v(pi) = 1/e.
class FieldCtx {
  public:
    FieldCtx(unsigned long p, unsigned long f, unsigned long e, long precision);

    unsigned long p() const { return p_; }
    unsigned long f() const { return f_; }
    unsigned long e() const { return e_; }
    long precision() const { return N_; }

    const Int& p_int() const { return p_mpz_; }
    const Int& p_pow_N() const { return pN_; }
    const FqCtxPtr& fq() const { return fq_; }
    // Monic integer lift of the residue-field modulus, degree f.
    const std::vector<Int>& unram_modulus() const { return modulus_; }

    long pi_precision() const { return static_cast<long>(e_) * N_; }
    // Valuations at or above N-2 fall in the guard band and are not reported.
    Rat guard() const { return Rat(N_ - 2); }

    bool same(const FieldCtx& o) const {
        return p_ == o.p_ && f_ == o.f_ && e_ == o.e_ && N_ == o.N_;
    }

  private:
    unsigned long p_, f_, e_;
    long N_;
    Int p_mpz_, pN_;
    FqCtxPtr fq_;
    std::vector<Int> modulus_;
};

using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

FieldCtxPtr make_field(unsigned long p, unsigned long f, unsigned long e, long precision);

// One element of W, in the canonical form pi^j * (d_0 + d_1 pi + ... +
// d_{e-1} pi^{e-1}) with d_i in the unramified part mod p^N and d_0 a unit.
// Beyond exact values there are two degenerate states: exactly zero, and
// "vanishes at working precision" (all trusted digits cancelled), which
// carries only a valuation lower bound.
class Elem {
  public:
    Elem() = default;

    static Elem zero(FieldCtxPtr ctx);
    static Elem one(FieldCtxPtr ctx) { return from_integer(std::move(ctx), 1); }
    // Unknown element with a certified valuation lower bound.
    static Elem bounded_unknown(FieldCtxPtr ctx, Rat bound);
    static Elem from_integer(FieldCtxPtr ctx, Int n);
    static Elem from_rational(FieldCtxPtr ctx, const Rat& q);
    static Elem pi_power(FieldCtxPtr ctx, long j);
    static Elem from_residue_lift(FieldCtxPtr ctx, const FqElem& c);
    // Raw constructor from the serialized form: pi^j * sum digits[i] pi^i,
    // digits[i] given as f coordinates.
    static Elem from_digits(FieldCtxPtr ctx, long pi_shift,
                            std::vector<std::vector<Int>> digits);

    const FieldCtxPtr& ctx() const { return ctx_; }
    bool is_exact_zero() const { return state_ == State::ExactZero; }
    bool is_below_precision() const { return state_ == State::Below; }
    bool is_normal() const { return state_ == State::Normal; }
    // Zero for all purposes at working precision.
    bool is_zeroish() const { return state_ != State::Normal; }

    // Never throws; AtLeast carries the certified lower bound.
    Valuation val_info() const;
    // The valuation operation: nullopt means +infinity (exact zero); raises
    // PrecisionLoss inside the guard band or for below-precision elements.
    std::optional<Rat> valuation() const;

    FqElem residue() const;  // requires valuation exactly 0, else NonUnit

    Elem operator+(const Elem& o) const;
    Elem operator-(const Elem& o) const;
    Elem operator-() const;
    Elem operator*(const Elem& o) const;
    Elem operator/(const Elem& o) const;
    Elem inverse() const;
    Elem pow(unsigned long k) const;
    Elem scale_pi(long shift) const;  // multiply by pi^shift

    // Representation access (Normal state).
    long pi_shift() const { return j_; }
    long pi_prec() const { return pi_prec_; }
    const std::vector<std::vector<Int>>& digits() const { return digits_; }

    // Deterministic total order used to pick "the first root": exact zeros
    // first, then higher valuation, then lexicographic on digit coordinates.
    static bool order_before(const Elem& a, const Elem& b);

    // Equal at working precision (difference not Normal).
    bool indistinguishable(const Elem& o) const { return (*this - o).is_zeroish(); }

    std::string str() const;

  private:
    enum class State { ExactZero, Normal, Below };

    // Value-level exact tag: the element equals (sum coeffs[k] w^k) * pi^m
    // with rational coefficients, 0 <= m < e.  Carried through +,-,*, pi
    // shifts (and inversion for f = 1) so that genuine cancellations are
    // recognized as exact zeros rather than below-precision fuzz.
    struct ExactTag {
        std::vector<Rat> coeffs;
        long pi_m = 0;
        bool all_zero() const;
        std::size_t bit_size() const;
    };

    void normalize();
    static void check_same_ctx(const Elem& a, const Elem& b);
    static std::optional<ExactTag> tag_scalar(const FieldCtx& ctx, Rat q, long pi_exp);
    static std::optional<ExactTag> tag_add(const FieldCtx& ctx,
                                           const std::optional<ExactTag>& a,
                                           const std::optional<ExactTag>& b);
    static std::optional<ExactTag> tag_mul(const FieldCtx& ctx,
                                           const std::optional<ExactTag>& a,
                                           const std::optional<ExactTag>& b);
    static std::optional<ExactTag> tag_neg(const std::optional<ExactTag>& a);
    static std::optional<ExactTag> tag_pi_shift(const FieldCtx& ctx,
                                                const std::optional<ExactTag>& a, long shift);
    static std::optional<ExactTag> tag_inverse(const FieldCtx& ctx,
                                               const std::optional<ExactTag>& a);

    FieldCtxPtr ctx_;
    State state_ = State::ExactZero;
    long j_ = 0;
    std::vector<std::vector<Int>> digits_;
    long pi_prec_ = 0;
    Rat lower_;
    std::optional<ExactTag> exact_;

    friend class FieldEmbedding;
};

// Embedding of W into an extension with e' = e * e_mult, f' = f * f_mult,
// compatible with valuations and residues.
class FieldEmbedding {
  public:
    FieldEmbedding(FieldCtxPtr from, long e_mult, long f_mult, long ef_cap);

    const FieldCtxPtr& from() const { return from_; }
    const FieldCtxPtr& to() const { return to_; }
    long e_mult() const { return e_mult_; }
    long f_mult() const { return f_mult_; }

    Elem apply(const Elem& x) const;
    FqElem apply_residue(const FqElem& c) const;

  private:
    FieldCtxPtr from_, to_;
    long e_mult_, f_mult_;
    // images of omega_old^k in the new unramified part, k < f_old
    std::vector<std::vector<Int>> omega_powers_;
};

}  // namespace swancond

#endif
