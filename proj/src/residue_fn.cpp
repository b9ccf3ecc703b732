#include "residue_fn.hpp"

#include <algorithm>

namespace swancond {

RationalFn::RationalFn(FqPoly num, FqPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        throw_error(ErrorKind::InternalInconsistency, "zero denominator in residue function");
    reduce();
}

RationalFn RationalFn::from_poly(FqPoly p) {
    auto ctx = p.ctx();
    return RationalFn(std::move(p), FqPoly::constant(FqElem::one(ctx)));
}

void RationalFn::reduce() {
    if (num_.is_zero()) {
        den_ = FqPoly::constant(FqElem::one(den_.ctx()));
        return;
    }
    FqPoly g = FqPoly::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
    FqElem lead = den_.leading();
    if (!lead.is_one()) {
        FqElem inv = lead.inverse();
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFn RationalFn::operator-(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFn RationalFn::operator-() const { return RationalFn(FqPoly(num_.ctx()) - num_, den_); }

RationalFn RationalFn::operator*(const RationalFn& o) const {
    return RationalFn(num_ * o.num_, den_ * o.den_);
}

RationalFn RationalFn::operator/(const RationalFn& o) const { return *this * o.inverse(); }

RationalFn RationalFn::inverse() const {
    if (is_zero()) throw_error(ErrorKind::InternalInconsistency, "inverse of zero function");
    return RationalFn(den_, num_);
}

RationalFn RationalFn::derivative() const {
    return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

long RationalFn::degree() const {
    if (is_zero()) throw_error(ErrorKind::InternalInconsistency, "degree of zero function");
    return num_.degree() - den_.degree();
}

std::string RationalFn::str() const {
    if (den_.degree() == 0) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

bool is_pth_power(const RationalFn& g) {
    if (g.is_zero())
        throw_error(ErrorKind::InternalInconsistency, "p-th power test on zero");
    return g.num().pth_power_root(nullptr) && g.den().pth_power_root(nullptr);
}

RationalFn pth_root(const RationalFn& g) {
    FqPoly rn, rd;
    if (g.is_zero() || !g.num().pth_power_root(&rn) || !g.den().pth_power_root(&rd))
        throw_error(ErrorKind::NotAPthPower, "not a p-th power in the residue field");
    return RationalFn(rn, rd);
}

long ResidueDifferential::ord_at(const Place& place) const {
    if (is_zero())
        throw_error(ErrorKind::InternalInconsistency, "ord of the zero differential");
    if (place.kind == Place::Kind::Infinity) return -coeff_.degree() - 2;
    return coeff_.num().multiplicity(place.poly) - coeff_.den().multiplicity(place.poly);
}

std::vector<std::pair<Place, long>> ResidueDifferential::divisor() const {
    if (is_zero())
        throw_error(ErrorKind::InternalInconsistency, "divisor of the zero differential");
    std::vector<std::pair<Place, long>> out;
    auto add_factors = [&](const FqPoly& poly, long sign) {
        if (poly.degree() < 1) return;
        auto fac = fq_factor(poly);
        for (auto& [irr, mult] : fac.factors) {
            Place pl = Place::finite(irr);
            bool merged = false;
            for (auto& [q, o] : out) {
                if (q == pl) {
                    o += sign * mult;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.emplace_back(pl, sign * mult);
        }
    };
    add_factors(coeff_.num(), +1);
    add_factors(coeff_.den(), -1);
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& pr) { return pr.second == 0; }),
              out.end());
    out.emplace_back(Place::infinity(coeff_.ctx()), ord_at(Place::infinity(coeff_.ctx())));
    return out;
}

long ResidueDifferential::degree_check() const {
    long total = 0;
    for (auto& [place, ord] : divisor()) total += place.degree() * ord;
    if (total != -2)
        throw_error(ErrorKind::InternalInconsistency,
                    "differential degree sum is not -2: " + std::to_string(total));
    return total;
}

ResidueDifferential d_of(const RationalFn& g) { return ResidueDifferential(g.derivative()); }

ResidueDifferential dlog_of(const RationalFn& g) {
    return ResidueDifferential(g.derivative() / g);
}

}  // namespace swancond
