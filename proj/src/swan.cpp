#include "swan.hpp"

#include <algorithm>

#include "local_poly.hpp"

namespace swancond {

void CoverSpec::validate() const {
    if (!ctx) throw_error(ErrorKind::Schema, "cover without field configuration");
    long p = static_cast<long>(ctx->p());
    if (alpha0 < 0 || alpha0 >= p) throw_error(ErrorKind::Schema, "alpha0 out of range");
    if (r0 <= 0) throw_error(ErrorKind::Schema, "r0 must be positive");
    if (genus < 0 || outside_branch_bound < 0)
        throw_error(ErrorKind::Schema, "genus and outside-branch bound must be >= 0");
    for (std::size_t i = 0; i < branch.size(); ++i) {
        const auto& bp = branch[i];
        if (bp.alpha < 1 || bp.alpha >= p)
            throw_error(ErrorKind::Schema, "branch multiplicity out of 1..p-1");
        auto v = bp.x.valuation();
        if (!v || *v < r0)
            throw_error(ErrorKind::Schema,
                        "branch points must satisfy v(x) >= r0 (no branching near the boundary)");
        for (std::size_t k = 0; k < i; ++k)
            if (branch[k].x.indistinguishable(bp.x))
                throw_error(ErrorKind::Schema, "branch points must be distinct");
    }
    // U = 1 + (degrees >= 1), integral coefficients
    if (!unit_u.coeff(0).indistinguishable(Elem::one(ctx)))
        throw_error(ErrorKind::Schema, "unit part must have constant term 1");
    for (auto& [d, c] : unit_u.terms()) {
        if (d < 0) throw_error(ErrorKind::Schema, "unit part must be a series in T");
        Valuation v = c.val_info();
        if (!v.is_infinite() && v.lower_bound() < 0)
            throw_error(ErrorKind::Schema, "unit part coefficients must be integral");
    }
    if (unit_u.neg_tail())
        throw_error(ErrorKind::Schema, "unit part cannot carry a T^-1 tail");
}

bool CoverSpec::zero_is_branch() const {
    long total = alpha0;
    for (auto& bp : branch) total -= bp.alpha;
    long p = static_cast<long>(ctx->p());
    return (total % p + p) % p != 0;
}

long CoverSpec::branch_count_in_disk() const {
    return static_cast<long>(branch.size()) + (zero_is_branch() ? 1 : 0);
}

LaurentSeries CoverSpec::f_tilde_unit() const {
    LaurentSeries prod = LaurentSeries::one(ctx);
    for (auto& bp : branch) {
        LaurentSeries factor = LaurentSeries::one(ctx);
        factor.set_coeff(-1, -bp.x);
        prod = prod * factor.pow(static_cast<unsigned long>(bp.alpha));
    }
    return prod;
}

CoverSpec CoverSpec::embedded(const FieldEmbedding& emb) const {
    CoverSpec out = *this;
    out.ctx = emb.to();
    out.branch.clear();
    for (auto& bp : branch) out.branch.push_back({emb.apply(bp.x), bp.alpha});
    out.unit_u = unit_u.embed(emb);
    return out;
}

// ----- elimination -----

namespace {

Elem binomial_elem(const FieldCtxPtr& ctx, unsigned long n, unsigned long k) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Elem::from_integer(ctx, b);
}

bool target_needs_solving(const Elem& c, const Rat& guard) {
    Valuation v = c.val_info();
    if (v.is_infinite()) return false;
    if (!v.is_exact()) return false;  // bounded unknowns cannot be improved
    return v.value < guard;
}

}  // namespace

EliminationResult eliminate_degrees(const LaurentSeries& G, std::vector<long> degrees,
                                    RootChoice rc) {
    FieldCtxPtr ctx = G.ctx();
    const unsigned long p = ctx->p();
    const Rat guard = ctx->guard();
    const Rat step(1, static_cast<long>(ctx->e()));
    std::sort(degrees.begin(), degrees.end());

    LaurentSeries I = LaurentSeries::one(ctx);
    std::map<long, std::pair<long, long>> stalled;  // keyed by target degree
    const long action_cap =
        (4 * ctx->pi_precision() + 16) * std::max<long>(1, degrees.size());
    long actions = 0;
    bool done = false;
    while (!done) {
        done = true;
        for (long d : degrees) {
            long tau = static_cast<long>(p) * d;
            if (stalled.count(tau)) continue;
            LaurentSeries Ip = I.pow(p);
            Elem current = G.coeff(tau) - Ip.coeff(tau);
            if (!target_needs_solving(current, guard)) continue;
            if (++actions > action_cap)
                throw_error(ErrorKind::NoConvergence,
                            "elimination sweeps exceeded the iteration cap");
            // coefficient of T^tau in G - (I + x T^d)^p as a polynomial in x
            LPoly phi(p + 1, Elem::zero(ctx));
            for (unsigned long j = 0; j <= p; ++j) {
                unsigned long ij = p - j;  // need coeff of I^(p-j) at (p-j)d
                LaurentSeries Ipj = I.pow(ij);
                phi[j] = binomial_elem(ctx, p, j) * Ipj.coeff(static_cast<long>(ij) * d);
            }
            phi[0] = phi[0] - G.coeff(tau);
            auto roots = find_roots(phi);
            std::vector<Elem> integral;
            for (auto& rt : roots.roots) {
                Valuation v = rt.val_info();
                if (v.is_infinite() || v.lower_bound() >= 0) integral.push_back(rt);
            }
            if (!integral.empty()) {
                const Elem& x = rc == RootChoice::First ? integral.front() : integral.back();
                I.set_coeff(d, I.coeff(d) + x);
                done = false;
                continue;
            }
            // no exact root in the field family: take the best stalling
            // approach if it still improves the target coefficient
            Rat current_v = current.val_info().lower_bound();
            std::optional<Elem> best;
            std::optional<Rat> best_v;
            for (auto& a : roots.approaches) {
                Valuation av = a.val_info();
                if (!av.is_infinite() && av.lower_bound() < 0) continue;
                Elem residual = lpoly_eval(phi, a);
                Valuation rv = residual.val_info();
                Rat score = rv.is_infinite() ? guard : rv.lower_bound();
                if (!best_v || score > *best_v ||
                    (score == *best_v && Elem::order_before(a, *best))) {
                    if (!best_v || score > *best_v) {
                        best = a;
                        best_v = score;
                    }
                }
            }
            if (best && *best_v >= current_v + step && !best->is_exact_zero()) {
                I.set_coeff(d, I.coeff(d) + *best);
                done = false;
                continue;
            }
            if (roots.extension_needed)
                stalled[tau] = *roots.extension_needed;
            else
                stalled[tau] = {static_cast<long>(p), 1};
        }
    }

    EliminationResult out;
    out.corrector = I;
    out.remainder = G - I.pow(p);
    out.corrector_degrees = degrees;
    for (long d : degrees) out.target_degrees.push_back(static_cast<long>(p) * d);
    out.stalled = std::move(stalled);
    return out;
}

EliminationResult eliminate(const LaurentSeries& G, long s, bool t_inverse_side, RootChoice rc) {
    if (!G.coeff(0).indistinguishable(Elem::one(G.ctx())))
        throw_error(ErrorKind::Schema, "elimination input must have constant term 1");
    if (s < 0) throw_error(ErrorKind::Schema, "elimination order must be >= 0");
    std::vector<long> degrees;
    for (long d = 1; d <= s; ++d) degrees.push_back(t_inverse_side ? -d : d);
    return eliminate_degrees(G, std::move(degrees), rc);
}

// ----- cover analysis -----

CoverAnalysis::CoverAnalysis(CoverSpec cover, AnalysisOptions opts)
    : cover_(std::move(cover)), opts_(opts) {
    if (!cover_.unit_u.ctx()) cover_.unit_u = LaurentSeries::one(cover_.ctx);
    cover_.validate();
    branch_count_ = cover_.branch_count_in_disk();

    LaurentSeries u = cover_.unit_u;
    LaurentSeries f0 = cover_.f_tilde_unit();
    remainder_total_ = LaurentSeries(ctx());
    if (auto xd = u.max_degree(); xd && *xd >= 1) {
        elim_u_ = eliminate(u, *xd, false, opts_.rc);
        remainder_total_ = remainder_total_ + elim_u_->remainder;
        stalled_.insert(elim_u_->stalled.begin(), elim_u_->stalled.end());
    } else if (u.pos_tail()) {
        throw_error(ErrorKind::Schema, "unit tail certificate without stored terms");
    }
    if (auto md = f0.min_degree(); md && *md <= -1) {
        elim_f_ = eliminate(f0, -*md, true, opts_.rc);
        remainder_total_ = remainder_total_ + elim_f_->remainder;
        stalled_.insert(elim_f_->stalled.begin(), elim_f_->stalled.end());
    }
    f_full_ = (u * f0).shift_degrees(cover_.alpha0);
}

void CoverAnalysis::check_radius(const Rat& r, bool need_reduction) const {
    if (r <= 0 || r > cover_.r0)
        throw_error(ErrorKind::Schema, "radius outside (0, r0]");
    if (need_reduction) {
        Rat er = r * static_cast<long>(ctx()->e());
        if (!is_integer(er))
            throw ExtensionRequiredError(static_cast<long>(er.get_den().get_si()), 1,
                                         "radius needs e*r integral");
    }
}

CoverAnalysis::VrInfo CoverAnalysis::vr_info(const Rat& r) const {
    VrInfo info;
    bool have = false;
    for (auto& [d, c] : remainder_total_.terms()) {
        Valuation v = c.val_info();
        if (v.is_infinite()) continue;
        Rat cand = v.lower_bound() + d * r;
        if (auto it = stalled_.find(d); it != stalled_.end()) {
            if (!info.stalled_floor || cand < *info.stalled_floor) {
                info.stalled_floor = cand;
                info.stall_suggestion = it->second;
            }
            continue;
        }
        if (!v.is_exact()) {
            if (!info.hidden_floor || cand < *info.hidden_floor) info.hidden_floor = cand;
            continue;
        }
        if (!have || cand < *info.exact_min) {
            info.exact_min = cand;
            info.min_degree = info.max_degree = d;
            have = true;
        } else if (cand == *info.exact_min) {
            info.min_degree = std::min(info.min_degree, d);
            info.max_degree = std::max(info.max_degree, d);
        }
    }
    return info;
}

bool CoverAnalysis::stall_relevant(const VrInfo& info) const {
    if (!info.stalled_floor) return false;
    if (*info.stalled_floor >= depth_cap()) return false;
    if (info.exact_min && *info.exact_min <= *info.stalled_floor) return false;
    return true;
}

SwanValue CoverAnalysis::resolve_stalled(const VrInfo& info, const Rat& r) const {
    // A p-divisible remainder term we could not kill dominates here.  If the
    // raw reduction is visibly not a p-th power, the depth tops out exactly;
    // otherwise the answer needs a field beyond the current one.
    RationalFn g0 = f_full_.reduce(r);
    if (!is_pth_power(g0)) return {depth_cap(), dlog_of(g0), SwanRegime::Logarithmic};
    throw ExtensionRequiredError(info.stall_suggestion.first, info.stall_suggestion.second,
                                 "stalled elimination target dominates at this radius");
}

Rat CoverAnalysis::depth_at(const Rat& r) const {
    check_radius(r, false);
    if (cover_.alpha0 != 0) return depth_cap();
    VrInfo info = vr_info(r);
    if (stall_relevant(info)) return resolve_stalled(info, r).depth;
    Rat cap = depth_cap();
    if (!info.exact_min) {
        // remainder vanished entirely: depth 0 provided nothing hidden dips
        if (info.hidden_floor && *info.hidden_floor < cap)
            throw_error(ErrorKind::PrecisionLoss, "depth is not determined at this precision");
        return Rat(0);
    }
    Rat v = *info.exact_min;
    if (info.hidden_floor && *info.hidden_floor < v && *info.hidden_floor < cap)
        throw_error(ErrorKind::PrecisionLoss, "depth is not determined at this precision");
    if (v >= cap) return Rat(0);
    Rat depth = cap - v;
    if (r < cover_.r0 && depth >= cap)
        throw_error(ErrorKind::InternalInconsistency,
                    "depth reached p/(p-1) strictly inside the disk with alpha0 = 0");
    return depth;
}

void CoverAnalysis::check_slope_unambiguous(const VrInfo& info) const {
    if (!info.hidden_floor) return;
    Rat cap = depth_cap();
    if (!info.exact_min) {
        if (*info.hidden_floor < cap)
            throw_error(ErrorKind::PrecisionLoss, "slope is not determined at this precision");
        return;
    }
    if (*info.hidden_floor > *info.exact_min) return;
    if (*info.hidden_floor >= cap && *info.exact_min >= cap) return;  // clamped to 0 anyway
    throw_error(ErrorKind::PrecisionLoss, "slope is not determined at this precision");
}

std::pair<Rat, long> CoverAnalysis::limit_at_zero() const {
    if (cover_.alpha0 != 0) return {depth_cap(), 0};
    Rat cap = depth_cap();
    std::optional<Rat> vmin;          // min coefficient valuation over clean lines
    long dmin = 0;                    // smallest degree among the argmin
    std::optional<Rat> stall_top, hidden_top;  // their line values cap - v at 0+
    for (auto& [d, c] : remainder_total_.terms()) {
        Valuation v = c.val_info();
        if (v.is_infinite()) continue;
        if (stalled_.count(d)) {
            Rat lv = cap - v.lower_bound();
            if (!stall_top || lv > *stall_top) stall_top = lv;
            continue;
        }
        if (!v.is_exact()) {
            Rat lv = cap - v.lower_bound();
            if (!hidden_top || lv > *hidden_top) hidden_top = lv;
            continue;
        }
        if (!vmin || v.value < *vmin) {
            vmin = v.value;
            dmin = d;
        } else if (v.value == *vmin) {
            dmin = std::min(dmin, d);
        }
    }
    Rat l0 = vmin ? cap - *vmin : Rat(0);
    Rat clamped = std::max(l0, Rat(0));
    if (stall_top && *stall_top > clamped)
        throw_error(ErrorKind::Inconclusive,
                    "a stalled elimination target dominates the profile near 0");
    if (hidden_top && *hidden_top > clamped)
        throw_error(ErrorKind::PrecisionLoss, "profile near 0 not determined at precision");
    if (!vmin || l0 < 0) return {Rat(0), 0};
    long slope = -dmin;
    if (l0 == 0 && slope < 0) return {Rat(0), 0};
    return {l0, slope};
}

long CoverAnalysis::left_slope_at(const Rat& r) const {
    check_radius(r, false);
    if (cover_.alpha0 != 0) return 0;
    VrInfo info = vr_info(r);
    if (stall_relevant(info)) {
        SwanValue v = resolve_stalled(info, r);
        return v.form->ord_at(Place::infinity(ctx()->fq())) + 1;
    }
    check_slope_unambiguous(info);
    if (!info.exact_min) return 0;
    Rat lval = depth_cap() - *info.exact_min;
    if (lval < 0) return 0;
    long slope_of_lines = -info.max_degree;
    if (lval == 0) return std::min(0l, slope_of_lines);
    return slope_of_lines;
}

long CoverAnalysis::right_slope_at(const Rat& r) const {
    check_radius(r, false);
    if (cover_.alpha0 != 0) return 0;
    VrInfo info = vr_info(r);
    if (stall_relevant(info)) {
        SwanValue v = resolve_stalled(info, r);
        return -v.form->ord_at(Place::zero(ctx()->fq())) - 1;
    }
    check_slope_unambiguous(info);
    if (!info.exact_min) return 0;
    Rat lval = depth_cap() - *info.exact_min;
    if (lval < 0) return 0;
    long slope_of_lines = -info.min_degree;
    if (lval == 0) return std::max(0l, slope_of_lines);
    return slope_of_lines;
}

SwanValue CoverAnalysis::swan_at(const Rat& r) const {
    check_radius(r, true);
    if (cover_.alpha0 != 0) {
        RationalFn g = f_full_.reduce(r);
        return {depth_cap(), dlog_of(g), SwanRegime::Logarithmic};
    }
    if (VrInfo info = vr_info(r); stall_relevant(info)) return resolve_stalled(info, r);
    Rat depth = depth_at(r);
    if (depth == 0) return {Rat(0), std::nullopt, SwanRegime::ZeroDepth};
    if (depth == depth_cap()) {
        // logarithmic boundary case: the form is dlog of the full reduction
        RationalFn g = f_full_.reduce(r);
        return {depth, dlog_of(g), SwanRegime::Logarithmic};
    }
    RationalFn g = remainder_total_.reduce(r);
    ResidueDifferential omega = d_of(g);
    if (omega.is_zero()) {
        // the eliminated reduction can only be a p-th power if something is
        // inconsistent; fall back to a direct product elimination
        SwanValue fb = swan_of_product_series(f_full_, 0, r, opts_.rc);
        if (!fb.form || fb.form->is_zero())
            throw_error(ErrorKind::Inconclusive,
                        "differential cancelled on the fallback path at working precision");
        return fb;
    }
    return {depth, omega, SwanRegime::ExactDifferential};
}

// ----- workspace with automatic extensions -----

CoverWorkspace::CoverWorkspace(CoverSpec cover, AnalysisOptions opts)
    : original_(std::move(cover)), current_(original_), opts_(opts) {
    rebuild();
}

void CoverWorkspace::rebuild() {
    for (int rounds = 0;; ++rounds) {
        try {
            analysis_ = std::make_shared<CoverAnalysis>(current_, opts_);
            return;
        } catch (const ExtensionRequiredError& e) {
            if (rounds >= 16)
                throw_error(ErrorKind::ExtensionCapExceeded, "extension retries exhausted");
            FieldEmbedding emb(current_.ctx, e.e_mult(), e.f_mult(), opts_.ef_cap);
            current_ = current_.embedded(emb);
        }
    }
}

void CoverWorkspace::extend(long e_mult, long f_mult) {
    FieldEmbedding emb(current_.ctx, e_mult, f_mult, opts_.ef_cap);
    current_ = current_.embedded(emb);
    rebuild();
}

void CoverWorkspace::ensure_radius(const Rat& r) {
    Rat er = r * static_cast<long>(current_.ctx->e());
    if (!is_integer(er)) extend(static_cast<long>(er.get_den().get_si()), 1);
}

// ----- raw series entries -----

namespace {

SwanValue swan_from_remainder(const LaurentSeries& remainder, const LaurentSeries& f_full,
                              unsigned long p, const Rat& r,
                              const std::map<long, std::pair<long, long>>& stalled) {
    Rat cap = rat(static_cast<long>(p), static_cast<long>(p) - 1);
    std::optional<Rat> exact_min, hidden, stall_floor;
    std::pair<long, long> suggestion{1, 1};
    for (auto& [d, c] : remainder.terms()) {
        Valuation vi = c.val_info();
        if (vi.is_infinite()) continue;
        Rat cand = vi.lower_bound() + d * r;
        if (auto it = stalled.find(d); it != stalled.end()) {
            if (!stall_floor || cand < *stall_floor) {
                stall_floor = cand;
                suggestion = it->second;
            }
            continue;
        }
        if (vi.is_exact()) {
            if (!exact_min || cand < *exact_min) exact_min = cand;
        } else if (!hidden || cand < *hidden) {
            hidden = cand;
        }
    }
    if (stall_floor && *stall_floor < cap && (!exact_min || *stall_floor < *exact_min)) {
        RationalFn g0 = f_full.reduce(r);
        if (!is_pth_power(g0)) return {cap, dlog_of(g0), SwanRegime::Logarithmic};
        throw ExtensionRequiredError(suggestion.first, suggestion.second,
                                     "stalled elimination target dominates at this radius");
    }
    if (!exact_min) {
        if (hidden && *hidden < cap)
            throw_error(ErrorKind::PrecisionLoss, "depth is not determined at this precision");
        return {Rat(0), std::nullopt, SwanRegime::ZeroDepth};
    }
    Rat v = *exact_min;
    if (hidden && *hidden < v && *hidden < cap)
        throw_error(ErrorKind::PrecisionLoss, "depth is not determined at this precision");
    if (v >= cap) return {Rat(0), std::nullopt, SwanRegime::ZeroDepth};
    if (v == 0) {
        RationalFn g = f_full.reduce(r);
        return {cap, dlog_of(g), SwanRegime::Logarithmic};
    }
    RationalFn g = remainder.reduce(r);
    ResidueDifferential omega = d_of(g);
    return {cap - v, omega, SwanRegime::ExactDifferential};
}

template <typename Fn>
SwanValue run_with_series_extensions(FieldCtxPtr ctx, std::vector<LaurentSeries> series,
                                     long ef_cap, Fn&& fn) {
    for (int round = 0;; ++round) {
        try {
            return fn(ctx, series);
        } catch (const ExtensionRequiredError& e) {
            if (round >= 16)
                throw_error(ErrorKind::ExtensionCapExceeded, "extension retries exhausted");
            FieldEmbedding emb(ctx, e.e_mult(), e.f_mult(), ef_cap);
            ctx = emb.to();
            for (auto& s : series) s = s.embed(emb);
        }
    }
}

}  // namespace

SwanValue swan_of_series_auto(const LaurentSeries& u_side, const LaurentSeries& f_side,
                              long t_exp, const Rat& r, AnalysisOptions opts) {
    FieldCtxPtr ctx = u_side.ctx() ? u_side.ctx() : f_side.ctx();
    return run_with_series_extensions(
        ctx, {u_side, f_side}, opts.ef_cap,
        [&](const FieldCtxPtr&, const std::vector<LaurentSeries>& s) {
            return swan_of_series(s[0], s[1], t_exp, r, opts.rc);
        });
}

SwanValue swan_of_product_series_auto(const LaurentSeries& full, long t_exp, const Rat& r,
                                      AnalysisOptions opts) {
    return run_with_series_extensions(
        full.ctx(), {full}, opts.ef_cap,
        [&](const FieldCtxPtr&, const std::vector<LaurentSeries>& s) {
            return swan_of_product_series(s[0], t_exp, r, opts.rc);
        });
}

SwanValue swan_of_series(const LaurentSeries& u_side, const LaurentSeries& f_side, long t_exp,
                         const Rat& r, RootChoice rc) {
    FieldCtxPtr ctx = u_side.ctx() ? u_side.ctx() : f_side.ctx();
    const unsigned long p = ctx->p();
    long alpha0 = ((t_exp % static_cast<long>(p)) + p) % p;
    LaurentSeries f_full = (u_side * f_side).shift_degrees(alpha0);
    if (alpha0 != 0) {
        RationalFn g = f_full.reduce(r);
        return {rat(static_cast<long>(p), static_cast<long>(p) - 1), dlog_of(g), SwanRegime::Logarithmic};
    }
    LaurentSeries remainder(ctx);
    std::map<long, std::pair<long, long>> stalled;
    if (auto xd = u_side.max_degree(); xd && *xd >= 1) {
        auto res = eliminate(u_side, *xd, false, rc);
        remainder = remainder + res.remainder;
        stalled.insert(res.stalled.begin(), res.stalled.end());
    }
    if (auto md = f_side.min_degree(); md && *md <= -1) {
        auto res = eliminate(f_side, -*md, true, rc);
        remainder = remainder + res.remainder;
        stalled.insert(res.stalled.begin(), res.stalled.end());
    }
    return swan_from_remainder(remainder, f_full, p, r, stalled);
}

SwanValue swan_of_product_series(const LaurentSeries& full, long t_exp, const Rat& r,
                                 RootChoice rc) {
    FieldCtxPtr ctx = full.ctx();
    const unsigned long p = ctx->p();
    long alpha0 = ((t_exp % static_cast<long>(p)) + p) % p;
    LaurentSeries f_full = full.shift_degrees(alpha0);
    if (alpha0 != 0) {
        RationalFn g = f_full.reduce(r);
        return {rat(static_cast<long>(p), static_cast<long>(p) - 1), dlog_of(g), SwanRegime::Logarithmic};
    }
    // two-sided elimination with the constant degree included
    std::vector<long> degrees;
    long lo = full.min_degree().value_or(0), hi = full.max_degree().value_or(0);
    for (long d = lo; d <= hi; ++d) degrees.push_back(d);
    EliminationResult elim = eliminate_degrees(full, std::move(degrees), rc);
    LaurentSeries remainder = elim.remainder;
    if (!elim.stalled.count(0))
        remainder.set_coeff(0, Elem::zero(ctx));  // constant settled by the degree-0 target
    return swan_from_remainder(remainder, f_full, p, r, elim.stalled);
}

SwanValue swan_power_twist(const SwanValue& value, long m, unsigned long p) {
    if (((m % static_cast<long>(p)) + p) % p == 0)
        throw_error(ErrorKind::Schema, "twist exponent must be prime to p");
    if (!value.form) return value;
    SwanValue out = value;
    auto fq = value.form->coefficient().ctx();
    out.form = value.form->scale(FqElem(fq, static_cast<unsigned long>(((m % (long)p) + p) % p)));
    return out;
}

// ----- mu and the closed-form lambda -----

MuResult mu_invariant(const CoverAnalysis& analysis, long s_u, long m) {
    const long p = static_cast<long>(analysis.p());
    if (m % p == 0) throw_error(ErrorKind::UnsupportedSlope, "mu needs p not dividing m");
    if (-s_u >= m) throw_error(ErrorKind::Schema, "mu needs -s_u < m");
    const Rat guard = analysis.ctx()->guard();

    Valuation vm = analysis.c_valuation(m);
    if (vm.is_infinite() || (!vm.is_exact() && vm.lower_bound() >= guard))
        return {true, Rat(0)};
    if (!vm.is_exact())
        throw_error(ErrorKind::PrecisionLoss, "c_m is ambiguous at working precision");

    Rat best(0);
    std::vector<std::pair<long, Rat>> pending;  // ambiguous indices with bounds
    for (long i = -s_u; i < m; ++i) {
        if (i == 0 || i % p == 0) continue;
        Valuation vi = analysis.c_valuation(i);
        if (vi.is_infinite()) continue;
        Rat denom(m - i);
        if (!vi.is_exact()) {
            pending.emplace_back(i, (vm.value - vi.lower_bound()) / denom);
            continue;
        }
        Rat term = (vm.value - vi.value) / denom;
        if (term > best) best = term;
    }
    for (auto& [i, bound] : pending)
        if (bound > best)
            throw_error(ErrorKind::PrecisionLoss,
                        "an ambiguous c_i could raise mu beyond the exact terms");
    return {false, best};
}

LambdaResult lambda_closed_form(const CoverAnalysis& analysis) {
    const CoverSpec& cover = analysis.cover();
    const long p = static_cast<long>(analysis.p());
    LambdaResult out;
    out.m = analysis.branch_count() - 1;

    if (cover.alpha0 != 0) {
        out.branch = "constant-depth";
        out.value = out.m > 0 ? cover.r0 : Rat(0);
        return out;
    }
    if (out.m == 0)
        throw_error(ErrorKind::InternalInconsistency,
                    "a single branch point forces alpha0 != 0");
    if (out.m > 0 && out.m % p == 0) {
        // the slope can never equal m: it is bounded by m and p | m slopes
        // force depth p/(p-1), excluded strictly inside the disk
        out.branch = "slope-divisible-by-p";
        out.value = cover.r0;
        return out;
    }
    if (analysis.branch_count() == 0 && !cover.assume_connected)
        throw_error(ErrorKind::ConnectednessNotEstablished,
                    "unbranched cover: caller must assert a connected preimage");

    Rat su_bound = rat(2 * p * cover.genus, p - 1) + cover.outside_branch_bound - 1;
    long s_u = std::max<long>(1, static_cast<long>(rat_floor(su_bound).get_si()) + 1);
    if (out.m == -1) s_u = std::max<long>(s_u, 2);
    out.s_u = s_u;

    MuResult mu = mu_invariant(analysis, s_u, out.m);
    out.mu = mu;
    if (mu.infinite) {
        out.branch = "c_m-vanishes";
        out.cm_vanished = true;
        out.value = cover.r0;
        return out;
    }
    if (out.m > 0) {
        Valuation vm = analysis.c_valuation(out.m);
        Rat alt = (vm.value - rat(p, p - 1)) / out.m;
        out.branch = "kink-formula";
        out.value = std::min(cover.r0, std::max(mu.value, alt));
        return out;
    }
    out.branch = "kink-formula-unbranched";
    out.value = std::min(cover.r0, mu.value);
    return out;
}

void slope_divisibility_guard(const SwanValue& value, long slope, unsigned long p) {
    if (value.depth == 0) return;
    long pl = static_cast<long>(p);
    if (((slope % pl) + pl) % pl != 0) return;
    if (value.depth != rat(static_cast<long>(p), static_cast<long>(p) - 1) || slope != 0)
        throw_error(ErrorKind::InternalInconsistency,
                    "nonzero depth with a p-divisible slope must be constant p/(p-1)");
}

}  // namespace swancond
