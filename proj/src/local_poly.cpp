#include "local_poly.hpp"

#include <algorithm>

namespace swancond {

Elem lpoly_eval(const LPoly& poly, const Elem& x) {
    if (poly.empty()) return Elem::zero(x.ctx());
    Elem acc = Elem::zero(x.ctx());
    for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
    return acc;
}

LPoly lpoly_derivative(const LPoly& poly) {
    LPoly d;
    if (poly.size() <= 1) return d;
    d.reserve(poly.size() - 1);
    for (std::size_t i = 1; i < poly.size(); ++i) {
        Elem k = Elem::from_integer(poly[i].ctx(), Int(static_cast<long>(i)));
        d.push_back(poly[i] * k);
    }
    return d;
}

LPoly lpoly_shift(const LPoly& poly, const Elem& c) {
    LPoly b = poly;
    long n = static_cast<long>(b.size());
    for (long j = 0; j < n; ++j)
        for (long i = n - 2; i >= j; --i) b[i] = b[i] + b[i + 1] * c;
    return b;
}

LPoly lpoly_scale_arg(const LPoly& poly, long pi_shift) {
    LPoly b = poly;
    for (std::size_t k = 0; k < b.size(); ++k)
        b[k] = b[k].scale_pi(pi_shift * static_cast<long>(k));
    return b;
}

void RootSearchResult::note_extension(long e_mult, long f_mult) {
    if (!extension_needed) {
        extension_needed = {e_mult, f_mult};
        return;
    }
    auto [ce, cf] = *extension_needed;
    if (e_mult * f_mult < ce * cf) extension_needed = {e_mult, f_mult};
}

namespace {

constexpr long kNewtonCap = 200;

long rat_to_long(const Rat& q) {
    if (!is_integer(q))
        throw_error(ErrorKind::InternalInconsistency, "expected an integer rational");
    return static_cast<long>(q.get_num().get_si());
}

struct Worker {
    FieldCtxPtr ctx;
    LPoly target;  // polynomial whose roots this worker reports
    RootSearchResult out;

    void accept(const Elem& root) {
        Elem value = lpoly_eval(target, root);
        Valuation v = value.val_info();
        if (!v.is_infinite() && v.lower_bound() < ctx->guard())
            throw_error(ErrorKind::PrecisionLoss, "candidate root does not vanish to precision");
        out.roots.push_back(root);
    }

    void hensel(const Elem& start) {
        Elem x = start;
        LPoly deriv = lpoly_derivative(target);
        for (long it = 0; it < kNewtonCap; ++it) {
            Elem fx = lpoly_eval(target, x);
            Valuation v = fx.val_info();
            if (v.is_infinite() || v.lower_bound() >= ctx->guard()) {
                out.roots.push_back(x);
                return;
            }
            Elem dfx = lpoly_eval(deriv, x);
            if (!dfx.is_normal())
                throw_error(ErrorKind::PrecisionLoss, "derivative vanishes during Hensel lift");
            x = x - fx / dfx;
        }
        throw_error(ErrorKind::PrecisionLoss, "Hensel lift did not converge");
    }

    void search(long depth) {
        if (depth > 2 * ctx->pi_precision() + 16)
            throw_error(ErrorKind::PrecisionLoss, "root search recursion exceeded depth cap");
        const long e = static_cast<long>(ctx->e());

        LPoly q = target;
        while (!q.empty() && q.back().is_exact_zero()) q.pop_back();
        if (q.empty())
            throw_error(ErrorKind::PrecisionLoss, "polynomial vanishes to precision");
        std::size_t low = 0;
        while (low < q.size() && q[low].is_exact_zero()) ++low;
        if (low == q.size())
            throw_error(ErrorKind::PrecisionLoss, "polynomial vanishes to precision");
        for (std::size_t i = 0; i < low; ++i) out.roots.push_back(Elem::zero(ctx));
        if (low > 0) q.erase(q.begin(), q.begin() + low);
        target = q;  // subsequent roots are nonzero, so verify against the deflation
        if (q.size() <= 1) return;

        // The polygon is built from coefficients resolvable below the guard.
        // A constant term at or beyond the guard means a root cluster that is
        // indistinguishable from the center at working precision: report the
        // center once and keep processing the resolvable segments.
        const Rat guard = ctx->guard();
        {
            Valuation v0 = q[0].val_info();
            if (!v0.is_infinite() && v0.lower_bound() >= guard) {
                accept(Elem::zero(ctx));
            } else if (!v0.is_exact()) {
                throw_error(ErrorKind::PrecisionLoss,
                            "constant term ambiguous below the precision guard");
            }
        }

        struct Pt {
            long k;
            Rat v;
        };
        std::vector<Pt> pts;
        for (std::size_t k = 0; k < q.size(); ++k) {
            Valuation vi = q[k].val_info();
            if (vi.is_infinite() || !vi.is_exact()) continue;
            if (vi.value >= guard) continue;  // belongs to the unresolvable cluster
            pts.push_back({static_cast<long>(k), vi.value});
        }
        if (pts.size() <= 1) return;
        std::vector<Pt> hull;
        for (const Pt& pt : pts) {
            while (hull.size() >= 2) {
                const Pt& a = hull[hull.size() - 2];
                const Pt& b = hull[hull.size() - 1];
                if ((b.v - a.v) * (pt.k - a.k) >= (pt.v - a.v) * (b.k - a.k))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(pt);
        }
        // below-precision coefficients must stay strictly above the hull
        for (std::size_t k = 0; k < q.size(); ++k) {
            if (!q[k].is_below_precision()) continue;
            if (q[k].val_info().lower_bound() >= guard) continue;  // cluster region
            long kk = static_cast<long>(k);
            if (kk > hull.back().k)
                throw_error(ErrorKind::PrecisionLoss,
                            "leading coefficients below precision obscure the Newton polygon");
            for (std::size_t si = 0; si + 1 < hull.size(); ++si) {
                const Pt& a = hull[si];
                const Pt& b = hull[si + 1];
                if (kk < a.k || kk > b.k) continue;
                Rat line = a.v + (b.v - a.v) * Rat(kk - a.k) / Rat(b.k - a.k);
                if (q[k].val_info().lower_bound() <= line)
                    throw_error(ErrorKind::PrecisionLoss,
                                "coefficient below precision near the Newton polygon");
            }
        }

        for (std::size_t si = 0; si + 1 < hull.size(); ++si) {
            const Pt& a = hull[si];
            const Pt& b = hull[si + 1];
            Rat s = (a.v - b.v) / Rat(b.k - a.k);  // valuation of roots on this segment
            Rat w_rat = s * e;
            if (!is_integer(w_rat)) {
                out.note_extension(static_cast<long>(w_rat.get_den().get_si()), 1);
                out.approaches.push_back(Elem::zero(ctx));  // best stay-put point
                continue;
            }
            long w = rat_to_long(w_rat);
            Rat minv = a.v + s * a.k;
            long minv_pi = rat_to_long(minv * e);
            auto fq = ctx->fq();
            std::vector<FqElem> rbar(q.size(), FqElem::zero(fq));
            for (std::size_t k = 0; k < q.size(); ++k) {
                Elem c = q[k].scale_pi(w * static_cast<long>(k) - minv_pi);
                if (!c.is_normal()) continue;
                if (c.pi_shift() == 0)
                    rbar[k] = c.residue();
                else if (c.pi_shift() < 0)
                    throw_error(ErrorKind::InternalInconsistency, "point below the Newton hull");
            }
            FqPoly residual(fq, std::move(rbar));
            auto rroots = fq_roots(residual);
            long linear_total = 0;
            for (auto& [rho, mult] : rroots) {
                if (rho.is_zero()) continue;  // belongs to other segments
                linear_total += mult;
                Elem rho_lift = Elem::from_residue_lift(ctx, rho);
                if (mult == 1) {
                    hensel(rho_lift.scale_pi(w));
                } else {
                    Worker sub;
                    sub.ctx = ctx;
                    sub.target = lpoly_shift(lpoly_scale_arg(q, w), rho_lift);
                    sub.search(depth + 1);
                    if (sub.out.extension_needed)
                        out.note_extension(sub.out.extension_needed->first,
                                           sub.out.extension_needed->second);
                    auto inside = [](const Elem& z) {
                        Valuation zv = z.val_info();
                        return zv.is_infinite() ||
                               (zv.is_exact() ? zv.value > 0 : zv.lower_bound() > 0);
                    };
                    for (const Elem& z : sub.out.roots)
                        if (inside(z)) accept((rho_lift + z).scale_pi(w));
                    for (const Elem& z : sub.out.approaches)
                        if (inside(z)) out.approaches.push_back((rho_lift + z).scale_pi(w));
                }
            }
            long seg_len = b.k - a.k;
            if (linear_total < seg_len) {
                FqPoly rest = residual;
                FqPoly tvar = FqPoly::t(fq);
                while (!rest.is_zero() && rest.coeff(0).is_zero()) rest = rest / tvar;
                for (auto& [rho, mult] : rroots) {
                    if (rho.is_zero()) continue;
                    FqPoly lin = tvar - FqPoly::constant(rho);
                    for (long m = 0; m < mult; ++m) rest = rest / lin;
                }
                if (rest.degree() > 0) {
                    out.note_extension(1, fq_min_factor_degree(rest));
                    out.approaches.push_back(Elem::zero(ctx));
                }
            }
        }
    }
};

}  // namespace

RootSearchResult find_roots(const LPoly& poly) {
    if (poly.empty())
        throw_error(ErrorKind::PrecisionLoss, "root search on the zero polynomial");
    FieldCtxPtr ctx;
    for (const Elem& c : poly)
        if (c.ctx()) { ctx = c.ctx(); break; }
    if (!ctx) throw_error(ErrorKind::InternalInconsistency, "polynomial without context");

    Worker w;
    w.ctx = ctx;
    w.target = poly;
    w.search(0);
    std::sort(w.out.roots.begin(), w.out.roots.end(), Elem::order_before);
    std::sort(w.out.approaches.begin(), w.out.approaches.end(), Elem::order_before);
    return w.out;
}

}  // namespace swancond
