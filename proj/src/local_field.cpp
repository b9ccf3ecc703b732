#include "local_field.hpp"

#include <algorithm>
#include <sstream>

namespace swancond {

namespace {

long vp_int(const Int& c, const Int& p, long cap) {
    if (c == 0) return cap;
    Int tmp;
    long v = static_cast<long>(mpz_remove(tmp.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t()));
    return std::min(v, cap);
}

Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

}  // namespace

FieldCtx::FieldCtx(unsigned long p, unsigned long f, unsigned long e, long precision)
    : p_(p), f_(f), e_(e), N_(precision) {
    if (f < 1 || e < 1 || N_ < 3) throw_error(ErrorKind::Schema, "bad field configuration");
    // primality of p
    if (p < 2) throw_error(ErrorKind::Schema, "p must be prime");
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw_error(ErrorKind::Schema, "p must be prime");
    p_mpz_ = Int(static_cast<unsigned long>(p));
    mpz_pow_ui(pN_.get_mpz_t(), p_mpz_.get_mpz_t(), static_cast<unsigned long>(N_));
    fq_ = std::make_shared<const FqCtx>(p, f);
    modulus_.resize(f + 1);
    for (unsigned long i = 0; i <= f; ++i) modulus_[i] = Int(fq_->modulus()[i]);
}

FieldCtxPtr make_field(unsigned long p, unsigned long f, unsigned long e, long precision) {
    return std::make_shared<const FieldCtx>(p, f, e, precision);
}

// ----- unramified-part helpers: vectors of f coordinates mod p^N -----

namespace {

using UVec = std::vector<Int>;

UVec u_zero(const FieldCtx& ctx) { return UVec(ctx.f(), Int(0)); }

bool u_is_zero(const UVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Int& c) { return c == 0; });
}

UVec u_add(const FieldCtx& ctx, const UVec& a, const UVec& b) {
    UVec r(ctx.f());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_pos(a[i] + b[i], ctx.p_pow_N());
    return r;
}

UVec u_neg(const FieldCtx& ctx, const UVec& a) {
    UVec r(ctx.f());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_pos(-a[i], ctx.p_pow_N());
    return r;
}

UVec u_scale(const FieldCtx& ctx, const UVec& a, const Int& c) {
    UVec r(ctx.f());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_pos(a[i] * c, ctx.p_pow_N());
    return r;
}

UVec u_mul(const FieldCtx& ctx, const UVec& a, const UVec& b) {
    const unsigned long f = ctx.f();
    std::vector<Int> prod(2 * f - 1, Int(0));
    for (unsigned long i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (unsigned long jj = 0; jj < f; ++jj)
            prod[i + jj] = mod_pos(prod[i + jj] + a[i] * b[jj], ctx.p_pow_N());
    }
    const auto& m = ctx.unram_modulus();
    for (std::size_t d = prod.size(); d-- > f;) {
        Int c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (unsigned long i = 0; i < f; ++i)
            prod[d - f + i] = mod_pos(prod[d - f + i] - c * m[i], ctx.p_pow_N());
    }
    prod.resize(f);
    return prod;
}

long u_vp(const FieldCtx& ctx, const UVec& a) {
    long best = ctx.precision();
    for (const Int& c : a) best = std::min(best, vp_int(c, ctx.p_int(), ctx.precision()));
    return best;
}

UVec u_div_p(const FieldCtx& ctx, const UVec& a, long k) {
    if (k == 0) return a;
    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), ctx.p_int().get_mpz_t(), static_cast<unsigned long>(k));
    UVec r(ctx.f());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!mpz_divisible_p(a[i].get_mpz_t(), pk.get_mpz_t()))
            throw_error(ErrorKind::InternalInconsistency, "inexact division by p^k");
        mpz_divexact(r[i].get_mpz_t(), a[i].get_mpz_t(), pk.get_mpz_t());
    }
    return r;
}

UVec u_mul_p(const FieldCtx& ctx, const UVec& a, long k) {
    if (k == 0) return a;
    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), ctx.p_int().get_mpz_t(), static_cast<unsigned long>(k));
    return u_scale(ctx, a, pk);
}

}  // namespace

// ----- exact value tags -----

bool Elem::ExactTag::all_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rat& q) { return q == 0; });
}

std::size_t Elem::ExactTag::bit_size() const {
    std::size_t total = 0;
    for (const Rat& q : coeffs)
        total += mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
                 mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
    return total;
}

std::optional<Elem::ExactTag> Elem::tag_scalar(const FieldCtx& ctx, Rat q, long pi_exp) {
    ExactTag t;
    t.coeffs.assign(ctx.f(), Rat(0));
    t.coeffs[0] = std::move(q);
    t.pi_m = 0;
    return tag_pi_shift(ctx, t, pi_exp);
}

std::optional<Elem::ExactTag> Elem::tag_pi_shift(const FieldCtx& ctx,
                                                 const std::optional<ExactTag>& a, long shift) {
    if (!a) return std::nullopt;
    ExactTag t = *a;
    long m = t.pi_m + shift;
    long e = static_cast<long>(ctx.e());
    long k = m >= 0 ? m / e : -(((-m) + e - 1) / e);
    t.pi_m = m - k * e;
    if (k != 0) {
        Rat pk(ctx.p_int());
        Rat factor = 1;
        for (long i = 0; i < (k > 0 ? k : -k); ++i) factor *= pk;
        if (k < 0) factor = 1 / factor;
        for (Rat& c : t.coeffs) c *= factor;
    }
    return t;
}

std::optional<Elem::ExactTag> Elem::tag_add(const FieldCtx& ctx,
                                            const std::optional<ExactTag>& a,
                                            const std::optional<ExactTag>& b) {
    if (!a || !b) return std::nullopt;
    if (a->all_zero()) return b;
    if (b->all_zero()) return a;
    if (a->pi_m != b->pi_m) return std::nullopt;
    ExactTag t = *a;
    for (std::size_t i = 0; i < t.coeffs.size(); ++i) t.coeffs[i] += b->coeffs[i];
    if (t.bit_size() > 64 * static_cast<std::size_t>(ctx.precision())) return std::nullopt;
    return t;
}

std::optional<Elem::ExactTag> Elem::tag_mul(const FieldCtx& ctx,
                                            const std::optional<ExactTag>& a,
                                            const std::optional<ExactTag>& b) {
    if (!a || !b) return std::nullopt;
    const unsigned long f = ctx.f();
    std::vector<Rat> prod(2 * f - 1, Rat(0));
    for (unsigned long i = 0; i < f; ++i) {
        if (a->coeffs[i] == 0) continue;
        for (unsigned long jj = 0; jj < f; ++jj) prod[i + jj] += a->coeffs[i] * b->coeffs[jj];
    }
    const auto& m = ctx.unram_modulus();
    for (std::size_t d = prod.size(); d-- > f;) {
        Rat c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (unsigned long i = 0; i < f; ++i) prod[d - f + i] -= c * Rat(m[i]);
    }
    prod.resize(f);
    ExactTag t;
    t.coeffs = std::move(prod);
    t.pi_m = 0;
    auto shifted = tag_pi_shift(ctx, t, a->pi_m + b->pi_m);
    if (shifted && shifted->bit_size() > 64 * static_cast<std::size_t>(ctx.precision()))
        return std::nullopt;
    return shifted;
}

std::optional<Elem::ExactTag> Elem::tag_neg(const std::optional<ExactTag>& a) {
    if (!a) return std::nullopt;
    ExactTag t = *a;
    for (Rat& c : t.coeffs) c = -c;
    return t;
}

std::optional<Elem::ExactTag> Elem::tag_inverse(const FieldCtx& ctx,
                                                const std::optional<ExactTag>& a) {
    if (!a || ctx.f() != 1) return std::nullopt;  // rational inverses only
    if (a->coeffs[0] == 0) return std::nullopt;
    ExactTag t;
    t.coeffs = {1 / a->coeffs[0]};
    t.pi_m = 0;
    return tag_pi_shift(ctx, t, -a->pi_m);
}

// ----- Elem -----

Elem Elem::zero(FieldCtxPtr ctx) {
    Elem z;
    z.ctx_ = std::move(ctx);
    z.state_ = State::ExactZero;
    return z;
}

Elem Elem::bounded_unknown(FieldCtxPtr ctx, Rat bound) {
    Elem z;
    z.ctx_ = std::move(ctx);
    z.state_ = State::Below;
    z.lower_ = std::move(bound);
    return z;
}

Elem Elem::from_integer(FieldCtxPtr ctx, Int n) {
    if (n == 0) return zero(std::move(ctx));
    Int u;
    long a = static_cast<long>(
        mpz_remove(u.get_mpz_t(), n.get_mpz_t(), ctx->p_int().get_mpz_t()));
    Elem x;
    x.ctx_ = ctx;
    x.state_ = State::Normal;
    x.j_ = a * static_cast<long>(ctx->e());
    x.digits_.assign(ctx->e(), u_zero(*ctx));
    x.digits_[0][0] = mod_pos(u, ctx->p_pow_N());
    x.pi_prec_ = ctx->pi_precision();
    x.exact_ = tag_scalar(*ctx, Rat(n), 0);
    x.normalize();
    return x;
}

Elem Elem::from_rational(FieldCtxPtr ctx, const Rat& q) {
    Elem num = from_integer(ctx, Int(q.get_num()));
    Elem den = from_integer(ctx, Int(q.get_den()));
    Elem r = num / den;
    r.exact_ = tag_scalar(*ctx, q, 0);
    return r;
}

Elem Elem::pi_power(FieldCtxPtr ctx, long j) {
    Elem x;
    x.ctx_ = std::move(ctx);
    x.state_ = State::Normal;
    x.j_ = j;
    x.digits_.assign(x.ctx_->e(), u_zero(*x.ctx_));
    x.digits_[0][0] = 1;
    x.pi_prec_ = x.ctx_->pi_precision();
    x.exact_ = tag_scalar(*x.ctx_, Rat(1), j);
    return x;
}

Elem Elem::from_residue_lift(FieldCtxPtr ctx, const FqElem& c) {
    if (c.is_zero()) return zero(std::move(ctx));
    Elem x;
    x.ctx_ = std::move(ctx);
    x.state_ = State::Normal;
    x.j_ = 0;
    x.digits_.assign(x.ctx_->e(), u_zero(*x.ctx_));
    for (unsigned long i = 0; i < x.ctx_->f(); ++i) x.digits_[0][i] = Int(c.coords()[i]);
    x.pi_prec_ = x.ctx_->pi_precision();
    ExactTag t;
    t.coeffs.assign(x.ctx_->f(), Rat(0));
    for (unsigned long i = 0; i < x.ctx_->f(); ++i) t.coeffs[i] = Rat(c.coords()[i]);
    t.pi_m = 0;
    x.exact_ = t;
    x.normalize();
    return x;
}

Elem Elem::from_digits(FieldCtxPtr ctx, long pi_shift, std::vector<std::vector<Int>> digits) {
    Elem x;
    x.ctx_ = std::move(ctx);
    x.state_ = State::Normal;
    x.j_ = pi_shift;
    digits.resize(x.ctx_->e());
    for (auto& d : digits) {
        d.resize(x.ctx_->f(), Int(0));
        for (auto& c : d) c = mod_pos(c, x.ctx_->p_pow_N());
    }
    x.digits_ = std::move(digits);
    x.pi_prec_ = x.ctx_->pi_precision();
    std::optional<ExactTag> tag = tag_scalar(*x.ctx_, Rat(0), 0);
    for (unsigned long i = 0; i < x.ctx_->e() && tag; ++i) {
        ExactTag part;
        part.coeffs.assign(x.ctx_->f(), Rat(0));
        for (unsigned long k = 0; k < x.ctx_->f(); ++k) part.coeffs[k] = Rat(x.digits_[i][k]);
        part.pi_m = 0;
        tag = tag_add(*x.ctx_, tag, tag_pi_shift(*x.ctx_, part, pi_shift + static_cast<long>(i)));
    }
    x.exact_ = tag;
    x.normalize();
    return x;
}

void Elem::normalize() {
    if (state_ != State::Normal) return;
    const FieldCtx& ctx = *ctx_;
    long e = static_cast<long>(ctx.e());
    long w = ctx.pi_precision() + e;  // above any real digit
    for (long i = 0; i < e; ++i)
        w = std::min(w, e * u_vp(ctx, digits_[i]) + i);
    if (w == 0) return;
    if (w >= pi_prec_) {
        if (exact_ && exact_->all_zero()) {
            state_ = State::ExactZero;
            digits_.clear();
            exact_.reset();
            return;
        }
        state_ = State::Below;
        lower_ = Rat(j_ + pi_prec_, e);
        lower_.canonicalize();
        digits_.clear();
        exact_.reset();
        return;
    }
    std::vector<UVec> shifted(e, u_zero(ctx));
    for (long i = 0; i < e; ++i) {
        if (u_is_zero(digits_[i])) continue;
        long pos = i - w;
        long q = pos >= 0 ? pos / e : -(((-pos) + e - 1) / e);
        long s = pos - q * e;
        UVec moved = q >= 0 ? u_mul_p(ctx, digits_[i], q) : u_div_p(ctx, digits_[i], -q);
        shifted[s] = u_add(ctx, shifted[s], moved);
    }
    digits_ = std::move(shifted);
    j_ += w;
    pi_prec_ -= w;
}

void Elem::check_same_ctx(const Elem& a, const Elem& b) {
    if (!a.ctx_ || !b.ctx_ || !a.ctx_->same(*b.ctx_))
        throw_error(ErrorKind::InternalInconsistency, "mixed field contexts");
}

Valuation Elem::val_info() const {
    switch (state_) {
        case State::ExactZero: return Valuation::infinite();
        case State::Below: return Valuation::at_least(lower_);
        case State::Normal: {
            Rat v(j_, static_cast<long>(ctx_->e()));
            v.canonicalize();
            return Valuation::exact(v);
        }
    }
    throw_error(ErrorKind::InternalInconsistency, "bad element state");
}

std::optional<Rat> Elem::valuation() const {
    Valuation v = val_info();
    if (v.is_infinite()) return std::nullopt;
    if (!v.is_exact())
        throw_error(ErrorKind::PrecisionLoss,
                    "element indistinguishable from zero at working precision");
    if (v.value >= ctx_->guard())
        throw_error(ErrorKind::PrecisionLoss, "valuation inside the precision guard band");
    return v.value;
}

FqElem Elem::residue() const {
    if (state_ != State::Normal || j_ != 0)
        throw_error(ErrorKind::NonUnit, "residue requires valuation exactly 0");
    std::vector<unsigned long> coords(ctx_->f());
    for (unsigned long i = 0; i < ctx_->f(); ++i) {
        Int r = mod_pos(digits_[0][i], ctx_->p_int());
        coords[i] = r.get_ui();
    }
    return FqElem(ctx_->fq(), std::move(coords));
}

Elem Elem::operator+(const Elem& o) const {
    check_same_ctx(*this, o);
    if (is_exact_zero()) return o;
    if (o.is_exact_zero()) return *this;
    const FieldCtx& ctx = *ctx_;
    long e = static_cast<long>(ctx.e());
    if (state_ == State::Below || o.state_ == State::Below) {
        // sum of a value and a below-precision fuzz: keep the dominant part
        // when it is clearly below the fuzz bound, otherwise give up exactness
        const Elem* val = this;
        const Elem* fuzz = &o;
        if (state_ == State::Below) std::swap(val, fuzz);
        if (val->state_ == State::Below) {
            Elem r;
            r.ctx_ = ctx_;
            r.state_ = State::Below;
            r.lower_ = std::min(lower_, o.lower_);
            return r;
        }
        // exact knowledge does not survive adding an unknown
        Rat vv(val->j_, e);
        vv.canonicalize();
        if (vv < fuzz->lower_) {
            // value dominates; trusted digits shrink to the fuzz bound
            Elem r = *val;
            r.exact_.reset();
            Rat rel = (fuzz->lower_ - vv) * e;
            long rel_l = static_cast<long>(rat_floor(rel).get_si());
            r.pi_prec_ = std::min(r.pi_prec_, rel_l);
            if (r.pi_prec_ <= 0) {
                r.state_ = State::Below;
                r.lower_ = std::min(vv, fuzz->lower_);
                r.digits_.clear();
            }
            return r;
        }
        Elem r;
        r.ctx_ = ctx_;
        r.state_ = State::Below;
        r.lower_ = std::min(vv, fuzz->lower_);
        return r;
    }
    long j = std::min(j_, o.j_);
    long abs_prec = std::min(j_ + pi_prec_, o.j_ + o.pi_prec_);
    Elem r;
    r.ctx_ = ctx_;
    r.state_ = State::Normal;
    r.j_ = j;
    r.pi_prec_ = std::min(abs_prec - j, ctx.pi_precision());
    r.digits_.assign(ctx.e(), u_zero(ctx));
    r.exact_ = tag_add(ctx, exact_, o.exact_);
    auto accumulate = [&](const Elem& x) {
        long m = x.j_ - j;
        for (long i = 0; i < e; ++i) {
            if (u_is_zero(x.digits_[i])) continue;
            long pos = i + m;
            long q = pos / e, s = pos % e;
            r.digits_[s] = u_add(ctx, r.digits_[s], u_mul_p(ctx, x.digits_[i], q));
        }
    };
    accumulate(*this);
    accumulate(o);
    r.normalize();
    return r;
}

Elem Elem::operator-() const {
    if (!is_normal()) return *this;
    Elem r = *this;
    for (auto& d : r.digits_) d = u_neg(*ctx_, d);
    r.exact_ = tag_neg(exact_);
    return r;
}

Elem Elem::operator-(const Elem& o) const { return *this + (-o); }

Elem Elem::operator*(const Elem& o) const {
    check_same_ctx(*this, o);
    if (is_exact_zero() || o.is_exact_zero()) return zero(ctx_);
    if (state_ == State::Below || o.state_ == State::Below) {
        Elem r;
        r.ctx_ = ctx_;
        r.state_ = State::Below;
        Rat va = state_ == State::Below ? lower_ : val_info().value;
        Rat vb = o.state_ == State::Below ? o.lower_ : o.val_info().value;
        r.lower_ = va + vb;
        return r;
    }
    const FieldCtx& ctx = *ctx_;
    long e = static_cast<long>(ctx.e());
    Elem r;
    r.ctx_ = ctx_;
    r.state_ = State::Normal;
    r.j_ = j_ + o.j_;
    r.pi_prec_ = std::min(pi_prec_, o.pi_prec_);
    r.digits_.assign(ctx.e(), u_zero(ctx));
    r.exact_ = tag_mul(ctx, exact_, o.exact_);
    for (long i1 = 0; i1 < e; ++i1) {
        if (u_is_zero(digits_[i1])) continue;
        for (long i2 = 0; i2 < e; ++i2) {
            if (u_is_zero(o.digits_[i2])) continue;
            UVec prod = u_mul(ctx, digits_[i1], o.digits_[i2]);
            long pos = i1 + i2;
            r.digits_[pos % e] = u_add(ctx, r.digits_[pos % e], u_mul_p(ctx, prod, pos / e));
        }
    }
    r.normalize();
    return r;
}

Elem Elem::inverse() const {
    if (is_exact_zero())
        throw_error(ErrorKind::InternalInconsistency, "division by exact zero");
    if (state_ == State::Below)
        throw_error(ErrorKind::PrecisionLoss, "division by a below-precision element");
    // Invert the unit part u (pi-shift 0) by Newton iteration x <- x(2 - ux),
    // starting from the inverse of the residue.
    Elem u = *this;
    u.j_ = 0;
    Elem x = from_residue_lift(ctx_, u.residue().inverse());
    Elem two = from_integer(ctx_, 2);
    long target = ctx_->pi_precision();
    for (long reached = 1; reached < target; reached *= 2) x = x * (two - u * x);
    Elem r = x;
    r.j_ = x.j_ - j_;
    r.pi_prec_ = std::min(x.pi_prec_, pi_prec_);
    r.exact_ = tag_inverse(*ctx_, exact_);
    return r;
}

Elem Elem::operator/(const Elem& o) const { return *this * o.inverse(); }

Elem Elem::pow(unsigned long k) const {
    Elem r = one(ctx_), b = *this;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

Elem Elem::scale_pi(long shift) const {
    if (!is_normal()) {
        if (state_ == State::Below) {
            Elem r = *this;
            r.lower_ += Rat(shift, static_cast<long>(ctx_->e()));
            r.lower_.canonicalize();
            return r;
        }
        return *this;
    }
    Elem r = *this;
    r.j_ += shift;
    r.exact_ = tag_pi_shift(*ctx_, exact_, shift);
    return r;
}

bool Elem::order_before(const Elem& a, const Elem& b) {
    auto rank = [](const Elem& x) {
        return x.is_exact_zero() ? 0 : (x.is_below_precision() ? 1 : 2);
    };
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    if (!a.is_normal()) return false;
    Rat va = a.val_info().value, vb = b.val_info().value;
    if (va != vb) return va > vb;  // closer to zero first
    for (std::size_t i = 0; i < a.digits_.size(); ++i)
        for (std::size_t k = 0; k < a.digits_[i].size(); ++k) {
            int c = cmp(a.digits_[i][k], b.digits_[i][k]);
            if (c != 0) return c < 0;
        }
    return false;
}

std::string Elem::str() const {
    switch (state_) {
        case State::ExactZero: return "0";
        case State::Below: return "O(pi^inf; v>=" + rat_str(lower_) + ")";
        case State::Normal: break;
    }
    std::ostringstream os;
    os << "pi^" << j_ << "*(";
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i) os << " + ";
        if (ctx_->f() == 1) {
            os << digits_[i][0].get_str();
        } else {
            os << "[";
            for (std::size_t k = 0; k < digits_[i].size(); ++k) {
                if (k) os << ",";
                os << digits_[i][k].get_str();
            }
            os << "]";
        }
        if (i) os << "*pi^" << i;
    }
    os << ")";
    return os.str();
}

// ----- field extension -----

FieldEmbedding::FieldEmbedding(FieldCtxPtr from, long e_mult, long f_mult, long ef_cap)
    : from_(std::move(from)), e_mult_(e_mult), f_mult_(f_mult) {
    if (e_mult < 1 || f_mult < 1)
        throw_error(ErrorKind::Schema, "extension multipliers must be >= 1");
    long new_e = static_cast<long>(from_->e()) * e_mult;
    long new_f = static_cast<long>(from_->f()) * f_mult;
    if (new_e * new_f > ef_cap)
        throw_error(ErrorKind::ExtensionCapExceeded,
                    "requested extension exceeds e*f cap of " + std::to_string(ef_cap));
    to_ = make_field(from_->p(), new_f, new_e, from_->precision());

    omega_powers_.assign(from_->f(), UVec(to_->f(), Int(0)));
    if (f_mult == 1) {
        for (unsigned long k = 0; k < from_->f(); ++k) omega_powers_[k][k] = 1;
        return;
    }
    // Image of the old unramified generator: a root of the old modulus in the
    // new unramified part.  Find it in the residue field, then Hensel-lift.
    const auto& mod_old = from_->unram_modulus();
    auto fq_new = to_->fq();
    FqElem root_bar(fq_new, 0ul);
    bool found = false;
    for (unsigned long k = 0; k < fq_new->q(); ++k) {
        FqElem c = FqElem::from_index(fq_new, k);
        FqElem acc(fq_new, 0ul);
        for (std::size_t i = mod_old.size(); i-- > 0;) {
            Int ci = mod_pos(mod_old[i], to_->p_int());
            acc = acc * c + FqElem(fq_new, ci.get_ui());
        }
        if (acc.is_zero()) {
            root_bar = c;
            found = true;
            break;
        }
    }
    if (!found)
        throw_error(ErrorKind::InternalInconsistency,
                    "old modulus has no root in the extended residue field");
    // Newton iteration on the integer-lifted modulus.
    auto eval_mod = [&](const Elem& x, bool deriv) {
        Elem acc = Elem::zero(to_);
        if (!deriv) {
            for (std::size_t i = mod_old.size(); i-- > 0;)
                acc = acc * x + Elem::from_integer(to_, mod_old[i]);
        } else {
            for (std::size_t i = mod_old.size(); i-- > 1;)
                acc = acc * x + Elem::from_integer(to_, mod_old[i] * static_cast<long>(i));
        }
        return acc;
    };
    Elem x = Elem::from_residue_lift(to_, root_bar);
    for (long step = 0; step < 64; ++step) {
        Elem fx = eval_mod(x, false);
        if (fx.is_zeroish()) break;
        x = x - fx / eval_mod(x, true);
    }
    if (!eval_mod(x, false).is_zeroish())
        throw_error(ErrorKind::InternalInconsistency, "Hensel lift of modulus root failed");
    // cache powers of the image
    Elem pw = Elem::one(to_);
    for (unsigned long k = 0; k < from_->f(); ++k) {
        if (pw.is_normal() && pw.pi_shift() == 0) {
            omega_powers_[k] = pw.digits()[0];
        } else if (k == 0) {
            omega_powers_[0][0] = 1;
        } else {
            throw_error(ErrorKind::InternalInconsistency, "unramified image not a unit");
        }
        pw = pw * x;
    }
}

Elem FieldEmbedding::apply(const Elem& x) const {
    if (x.is_exact_zero()) return Elem::zero(to_);
    if (x.is_below_precision()) {
        Elem r = Elem::zero(to_);
        r.state_ = Elem::State::Below;
        r.ctx_ = to_;
        r.lower_ = x.lower_;
        return r;
    }
    Elem r;
    r.ctx_ = to_;
    r.state_ = Elem::State::Normal;
    r.j_ = x.pi_shift() * e_mult_;
    r.pi_prec_ = std::min(x.pi_prec() * e_mult_, to_->pi_precision());
    r.digits_.assign(to_->e(), UVec(to_->f(), Int(0)));
    for (unsigned long i = 0; i < from_->e(); ++i) {
        const auto& d = x.digits()[i];
        // digit at pi_old^i lands at pi_new^(i*e_mult)
        UVec img(to_->f(), Int(0));
        for (unsigned long k = 0; k < from_->f(); ++k) {
            if (d[k] == 0) continue;
            img = u_add(*to_, img, u_scale(*to_, omega_powers_[k], d[k]));
        }
        r.digits_[i * e_mult_] = u_add(*to_, r.digits_[i * e_mult_], img);
    }
    if (f_mult_ == 1 && x.exact_) {
        Elem::ExactTag t;
        t.coeffs = x.exact_->coeffs;
        t.pi_m = 0;
        r.exact_ = Elem::tag_pi_shift(*to_, t, x.exact_->pi_m * e_mult_);
    }
    r.normalize();
    return r;
}

FqElem FieldEmbedding::apply_residue(const FqElem& c) const {
    Elem lifted = Elem::from_residue_lift(from_, c);
    Elem img = apply(lifted);
    if (img.is_zeroish()) return FqElem(to_->fq(), 0ul);
    return img.residue();
}

}  // namespace swancond
