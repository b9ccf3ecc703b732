#include "laurent.hpp"

#include <sstream>

namespace swancond {

LaurentSeries LaurentSeries::one(FieldCtxPtr ctx) {
    LaurentSeries s(ctx);
    s.set_coeff(0, Elem::one(ctx));
    return s;
}

LaurentSeries LaurentSeries::monomial(const Elem& coeff, long degree) {
    LaurentSeries s(coeff.ctx());
    s.set_coeff(degree, coeff);
    return s;
}

Elem LaurentSeries::coeff(long d) const {
    auto it = terms_.find(d);
    if (it == terms_.end()) return Elem::zero(ctx_);
    return it->second;
}

void LaurentSeries::set_coeff(long d, Elem c) {
    if (c.is_exact_zero())
        terms_.erase(d);
    else
        terms_[d] = std::move(c);
}

std::optional<long> LaurentSeries::min_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
}

std::optional<long> LaurentSeries::max_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
}

Elem LaurentSeries::coeff_or_tail(long d) const {
    auto it = terms_.find(d);
    if (it != terms_.end()) return it->second;
    auto md = min_degree();
    auto xd = max_degree();
    if (neg_tail_ && (!md || d < *md) && d < 0)
        return Elem::bounded_unknown(ctx_, neg_tail_->sigma * Rat(-d));
    if (pos_tail_ && (!xd || d > *xd) && d > 0)
        return Elem::bounded_unknown(ctx_, pos_tail_->sigma * Rat(d));
    return Elem::zero(ctx_);
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    LaurentSeries r(ctx_);
    // materialize certified-tail coefficients over the other summand's
    // stored window so cancellation bookkeeping stays sound
    for (auto& [d, c] : terms_) r.set_coeff(d, c + o.coeff_or_tail(d));
    for (auto& [d, c] : o.terms_)
        if (!terms_.count(d)) r.set_coeff(d, c + coeff_or_tail(d));
    if (neg_tail_ || o.neg_tail_)
        r.neg_tail_ = TailCertificate{
            std::min(neg_tail_ ? neg_tail_->sigma : o.neg_tail_->sigma,
                     o.neg_tail_ ? o.neg_tail_->sigma : neg_tail_->sigma)};
    if (pos_tail_ || o.pos_tail_)
        r.pos_tail_ = TailCertificate{
            std::min(pos_tail_ ? pos_tail_->sigma : o.pos_tail_->sigma,
                     o.pos_tail_ ? o.pos_tail_->sigma : pos_tail_->sigma)};
    return r;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    for (auto& [d, c] : r.terms_) c = -c;
    return r;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const { return *this + (-o); }

LaurentSeries LaurentSeries::scale(const Elem& c) const {
    LaurentSeries r(ctx_);
    for (auto& [d, a] : terms_) r.set_coeff(d, a * c);
    r.neg_tail_ = neg_tail_;
    r.pos_tail_ = pos_tail_;
    return r;
}

LaurentSeries LaurentSeries::shift_degrees(long m) const {
    // only used on finite series; a shifted tail bound would change form
    if (m != 0 && (neg_tail_ || pos_tail_))
        throw_error(ErrorKind::InternalInconsistency,
                    "degree shift is not supported on certified tails");
    LaurentSeries r(ctx_);
    for (auto& [d, a] : terms_) r.terms_[d + m] = a;
    return r;
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    if (!ctx_->same(*o.ctx_))
        throw_error(ErrorKind::InternalInconsistency, "mixed contexts in series product");
    LaurentSeries r(ctx_);
    for (auto& [d1, c1] : terms_) {
        for (auto& [d2, c2] : o.terms_) {
            long d = d1 + d2;
            r.set_coeff(d, r.coeff(d) + c1 * c2);
        }
    }
    // certified-tail cross terms that land inside the stored result window
    if ((neg_tail_ || pos_tail_ || o.neg_tail_ || o.pos_tail_) && !terms_.empty() &&
        !o.terms_.empty()) {
        auto window_lo = r.min_degree(), window_hi = r.max_degree();
        if (window_lo && window_hi) {
            for (long d = *window_lo; d <= *window_hi; ++d) {
                Elem extra = Elem::zero(ctx_);
                for (auto& [d2, c2] : o.terms_) {
                    Elem a = coeff_or_tail(d - d2);
                    if (a.is_below_precision()) extra = extra + a * c2;
                }
                for (auto& [d1, c1] : terms_) {
                    Elem b = o.coeff_or_tail(d - d1);
                    if (b.is_below_precision()) extra = extra + c1 * b;
                }
                if (!extra.is_exact_zero()) r.set_coeff(d, r.coeff(d) + extra);
            }
        }
    }
    // Tail certificates survive a product when the other factor is integral
    // (all stored valuations >= 0) and certified/finite on the same side;
    // otherwise the certificate is dropped and later tail-sensitive queries
    // will refuse.
    auto integral = [](const LaurentSeries& s) {
        for (auto& [d, c] : s.terms_) {
            Valuation v = c.val_info();
            if (!v.is_infinite() && v.lower_bound() < 0) return false;
        }
        return true;
    };
    auto respects = [](const LaurentSeries& s, const Rat& sigma, bool neg) {
        for (auto& [d, c] : s.terms_) {
            if (neg ? d >= 0 : d <= 0) continue;
            Valuation v = c.val_info();
            long a = neg ? -d : d;
            if (!v.is_infinite() && v.lower_bound() < sigma * a) return false;
        }
        return true;
    };
    bool both_integral = integral(*this) && integral(o);
    if ((neg_tail_ || o.neg_tail_) && both_integral) {
        Rat sigma = neg_tail_ && o.neg_tail_ ? std::min(neg_tail_->sigma, o.neg_tail_->sigma)
                                             : (neg_tail_ ? neg_tail_->sigma : o.neg_tail_->sigma);
        if (sigma >= 0 && respects(*this, sigma, true) && respects(o, sigma, true))
            r.neg_tail_ = TailCertificate{sigma};
    }
    if ((pos_tail_ || o.pos_tail_) && both_integral) {
        Rat sigma = pos_tail_ && o.pos_tail_ ? std::min(pos_tail_->sigma, o.pos_tail_->sigma)
                                             : (pos_tail_ ? pos_tail_->sigma : o.pos_tail_->sigma);
        if (sigma >= 0 && respects(*this, sigma, false) && respects(o, sigma, false))
            r.pos_tail_ = TailCertificate{sigma};
    }
    return r;
}

LaurentSeries LaurentSeries::pow(unsigned long k) const {
    LaurentSeries r = one(ctx_), b = *this;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

LaurentSeries LaurentSeries::pth_power(unsigned long p) const { return pow(p); }

LaurentSeries LaurentSeries::truncate(long s) const {
    LaurentSeries r(ctx_);
    for (auto& [d, c] : terms_)
        if (d >= -s && d <= s) r.terms_[d] = c;
    return r;
}

std::optional<Rat> LaurentSeries::hidden_floor(const Rat& r) const {
    std::optional<Rat> floor;
    auto note = [&](const Rat& b) {
        if (!floor || b < *floor) floor = b;
    };
    // below-precision stored coefficients
    for (auto& [d, c] : terms_) {
        Valuation v = c.val_info();
        if (v.is_infinite() || v.is_exact()) continue;
        note(v.lower_bound() + d * r);
    }
    // negative-direction tail: omitted degrees -i for i > last stored index
    long neg_from = 1, pos_from = 1;
    if (auto md = min_degree(); md && *md < 0) neg_from = -*md + 1;
    if (auto xd = max_degree(); xd && *xd > 0) pos_from = *xd + 1;
    if (neg_tail_) {
        Rat gap = neg_tail_->sigma - r;  // v_r(a_{-i} T^{-i}) >= i * gap
        if (gap < 0)
            throw_error(ErrorKind::TailUnbounded,
                        "radius outside the validity of the T^-1 tail certificate");
        note(gap * neg_from);
    }
    if (pos_tail_) {
        Rat gap = pos_tail_->sigma + r;
        if (gap < 0)
            throw_error(ErrorKind::TailUnbounded,
                        "radius outside the validity of the T tail certificate");
        note(gap * pos_from);
    }
    return floor;
}

Rat LaurentSeries::gauss_valuation(const Rat& r) const {
    std::optional<Rat> best;
    for (auto& [d, c] : terms_) {
        Valuation v = c.val_info();
        if (!v.is_exact()) continue;
        Rat cand = v.value + d * r;
        if (!best || cand < *best) best = cand;
    }
    std::optional<Rat> hidden = hidden_floor(r);
    if (!best) {
        throw_error(ErrorKind::PrecisionLoss,
                    "series is zero at working precision; Gauss valuation undefined");
    }
    if (hidden && *hidden < *best)
        throw_error(ErrorKind::PrecisionLoss,
                    "unresolved coefficients could dominate the Gauss valuation");
    return *best;
}

RationalFn LaurentSeries::reduce(const Rat& r) const {
    long e = static_cast<long>(ctx_->e());
    Rat er = r * e;
    if (!is_integer(er)) {
        long den = static_cast<long>(er.get_den().get_si());
        throw ExtensionRequiredError(den, 1,
                                     "reduction radius needs e multiplied by " +
                                         std::to_string(den));
    }
    Rat m = gauss_valuation(r);
    std::map<long, FqElem> picked;
    long dmin = 0, dmax = 0;
    bool any = false;
    for (auto& [d, c] : terms_) {
        Valuation v = c.val_info();
        if (!v.is_exact()) continue;
        if (v.value + d * r != m) continue;
        Rat shift = (Rat(d) * r - m) * e;
        Elem unit = c.scale_pi(static_cast<long>(shift.get_num().get_si()));
        picked[d] = unit.residue();
        if (!any || d < dmin) dmin = d;
        if (!any || d > dmax) dmax = d;
        any = true;
    }
    if (!any)
        throw_error(ErrorKind::InternalInconsistency, "no terms achieved the Gauss minimum");
    auto fq = ctx_->fq();
    std::vector<FqElem> num(dmax - dmin + 1, FqElem::zero(fq));
    for (auto& [d, res] : picked) num[d - dmin] = res;
    FqPoly numerator(fq, std::move(num));
    if (dmin >= 0) return RationalFn::from_poly(numerator * FqPoly::t(fq).pow(dmin));
    return RationalFn(numerator, FqPoly::t(fq).pow(-dmin));
}

LaurentSeries LaurentSeries::embed(const FieldEmbedding& emb) const {
    LaurentSeries r(emb.to());
    for (auto& [d, c] : terms_) r.set_coeff(d, emb.apply(c));
    r.neg_tail_ = neg_tail_;
    r.pos_tail_ = pos_tail_;
    return r;
}

std::string LaurentSeries::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [d, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (d != 0) os << "*T^" << d;
    }
    return os.str();
}

}  // namespace swancond
