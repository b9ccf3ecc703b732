#include "selfcheck.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "profile.hpp"

namespace swancond {

namespace {

std::string describe(const CoverSpec& c) {
    std::ostringstream os;
    os << "p=" << c.ctx->p() << " e=" << c.ctx->e() << " alpha0=" << c.alpha0 << " branch=[";
    for (auto& bp : c.branch) os << bp.x.str() << "^" << bp.alpha << " ";
    os << "] U-terms=" << c.unit_u.terms().size();
    return os.str();
}

}  // namespace

CoverSpec random_cover_in(std::mt19937_64& rng, const CoverGenOptions& gen, FieldCtxPtr W) {
    unsigned long p = W->p();
    CoverSpec c;
    c.ctx = W;
    c.r0 = Rat(1);
    long branch_count = static_cast<long>(rng() % (gen.max_branch + 1));
    if (branch_count == 0 && !(rng() % 3)) branch_count = 1;
    std::vector<std::string> seen;
    for (long i = 0; i < branch_count; ++i) {
        for (int attempt = 0; attempt < 32; ++attempt) {
            long a = 1 + static_cast<long>(rng() % 2);        // v(x) in {1, 2}
            long u = 1 + static_cast<long>(rng() % 6);
            if (u % p == 0) continue;
            Int x = 1;
            for (long k = 0; k < a; ++k) x *= static_cast<long>(p);
            x *= u;
            std::string key = x.get_str();
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
            seen.push_back(key);
            long alpha = 1 + static_cast<long>(rng() % (p - 1));
            c.branch.push_back({Elem::from_integer(W, x), alpha});
            break;
        }
    }
    if (gen.allow_alpha0 && !(rng() % 4))
        c.alpha0 = 1 + static_cast<long>(rng() % (p - 1));
    c.unit_u = LaurentSeries::one(W);
    long unit_degree = 0;
    if (gen.allow_unit_part && !(rng() % 2)) {
        unit_degree = 1 + static_cast<long>(rng() % 2);
        for (long d = 1; d <= unit_degree; ++d) {
            long b = static_cast<long>(rng() % 5);
            if (b) c.unit_u.set_coeff(d, Elem::from_integer(W, b));
        }
        if (auto xd = c.unit_u.max_degree()) unit_degree = std::max<long>(*xd, 0);
        else unit_degree = 0;
    }
    // bound on branch points outside the disk: the unit part's outside zeros
    // plus the pole at infinity when the origin order is prime to p
    c.outside_branch_bound = unit_degree + 1;
    c.genus = 0;
    if (c.branch.empty() && c.alpha0 == 0) c.assume_connected = false;
    return c;
}

CoverSpec random_cover(std::mt19937_64& rng, const CoverGenOptions& gen) {
    unsigned long p = gen.primes[rng() % gen.primes.size()];
    unsigned long e = (rng() % 2) ? 2 : 4;
    return random_cover_in(rng, gen, make_field(p, 1, e, 48));
}

std::vector<Rat> sample_radii(const CoverSpec& cover) {
    std::vector<Rat> out;
    long e = static_cast<long>(cover.ctx->e());
    for (long k = 1; k <= e; ++k) {
        Rat r = cover.r0 * Rat(k) / e;
        out.push_back(r);
    }
    return out;
}

void check_cover_invariants(const CoverSpec& cover, const AnalysisOptions& opts,
                            long* radii_checked, std::vector<std::string>& failures) {
    auto fail = [&](const std::string& what) {
        failures.push_back(what + " [" + describe(cover) + "]");
    };
    try {
        CoverWorkspace ws(cover, opts);
        PLProfile profile = build_profile(ws);
        if (!profile.nonnegative()) fail("negative depth profile");
        const long bound = ws.analysis().branch_count() - 1;
        for (const Rat& r : sample_radii(cover)) {
            ws.ensure_radius(r);
            SwanValue v = ws.with_retry(
                [&](const CoverAnalysis& an) { return an.swan_at(r); });
            if (radii_checked) ++*radii_checked;
            if (v.depth < 0 || v.depth > rat(cover.ctx->p(), cover.ctx->p() - 1))
                fail("depth outside [0, p/(p-1)] at r=" + rat_str(r));
            bool has_form = v.form.has_value();
            if (has_form != (v.depth > 0)) fail("form presence disagrees with depth");
            long left = ws.with_retry(
                [&](const CoverAnalysis& an) { return an.left_slope_at(r); });
            long right = ws.with_retry(
                [&](const CoverAnalysis& an) { return an.right_slope_at(r); });
            if (v.depth > 0) {
                auto fq = ws.analysis().ctx()->fq();
                long dual_left = v.form->ord_at(Place::infinity(fq)) + 1;
                long dual_right = -v.form->ord_at(Place::zero(fq)) - 1;
                if (left != dual_left) fail("left slope fails ord duality at r=" + rat_str(r));
                if (right != dual_right)
                    fail("right slope fails ord duality at r=" + rat_str(r));
                if (v.form->degree_check() != -2) fail("degree identity failed");
                slope_divisibility_guard(v, left, cover.ctx->p());
                slope_divisibility_guard(v, right, cover.ctx->p());
                VcReport vc = vanishing_cycles_report(ws, r);
                if (!vc.smooth_matches_disk) fail("vanishing-cycles mismatch");
            }
            if (left > bound) fail("universal slope bound violated at r=" + rat_str(r));
            if (profile.left_slope_at(r) != Rat(left))
                fail("profile left slope disagrees with the analysis at r=" + rat_str(r));
            if (r < cover.r0 && profile.right_slope_at(r) != Rat(right))
                fail("profile right slope disagrees with the analysis at r=" + rat_str(r));
        }
    } catch (const SwanError& e) {
        fail(std::string("exception: ") + error_kind_name(e.kind()) + ": " + e.what());
    }
}

void check_pair_invariants(const CoverSpec& a, const CoverSpec& b,
                           const AnalysisOptions& opts, std::vector<std::string>& failures) {
    auto fail = [&](const std::string& what) {
        failures.push_back(what + " [" + describe(a) + " x " + describe(b) + "]");
    };
    try {
        Rat r = a.r0 / 2;
        {
            Rat er = r * static_cast<long>(a.ctx->e());
            if (!is_integer(er)) r = a.r0;
        }
        LaurentSeries ua = a.unit_u, fa = a.f_tilde_unit();
        LaurentSeries ub = b.unit_u, fb = b.f_tilde_unit();
        SwanValue va = swan_of_series_auto(ua, fa, a.alpha0, r, opts);
        SwanValue vb = swan_of_series_auto(ub, fb, b.alpha0, r, opts);
        SwanValue vp = swan_of_series_auto(ua * ub, fa * fb, a.alpha0 + b.alpha0, r, opts);
        Rat expected_max = std::max(va.depth, vb.depth);
        if (vp.depth > expected_max) fail("additivity upper bound violated");
        if (va.depth != vb.depth) {
            if (vp.depth != expected_max) fail("additivity equality (distinct depths) failed");
            const SwanValue& dominant = va.depth > vb.depth ? va : vb;
            if (dominant.form && vp.form && !(*vp.form == *dominant.form))
                fail("dominant form not inherited");
        } else if (va.form && vb.form) {
            ResidueDifferential sum = *va.form + *vb.form;
            if (!sum.is_zero()) {
                if (vp.depth != expected_max) fail("additivity equality (tied depths) failed");
                if (!vp.form || !(*vp.form == sum)) fail("form additivity failed");
            }
        }
        // twist invariance: F^m for m prime to p
        unsigned long p = a.ctx->p();
        long m = p == 2 ? 3 : 2;
        SwanValue vt = swan_of_series_auto(ua.pow(m), fa.pow(m), a.alpha0 * m, r, opts);
        if (vt.depth != va.depth) fail("twist changed the depth");
        if (va.form) {
            ResidueDifferential scaled =
                va.form->scale(FqElem(va.form->coefficient().ctx(),
                                      static_cast<unsigned long>(m % p)));
            if (!vt.form || !(*vt.form == scaled)) fail("twist form scaling failed");
        }
    } catch (const SwanError& e) {
        fail(std::string("exception: ") + error_kind_name(e.kind()) + ": " + e.what());
    }
}

void check_elimination_invariants(std::mt19937_64& rng, unsigned long p,
                                  std::vector<std::string>& failures) {
    FieldCtxPtr W = make_field(p, 1, 2, 48);
    LaurentSeries G = LaurentSeries::one(W);
    long support = 2 + static_cast<long>(rng() % 3);
    for (long d = 1; d <= support; ++d) {
        long scale = static_cast<long>(rng() % 4);
        if (!scale) continue;
        Int c = scale;
        for (long k = 0; k < d; ++k) c *= static_cast<long>(p);  // v(c_d) >= d
        G.set_coeff(-d, Elem::from_integer(W, c));
    }
    if (G.terms().size() == 1) G.set_coeff(-1, Elem::from_integer(W, static_cast<long>(p)));
    try {
        auto run = [&](RootChoice rc) {
            for (int round = 0;; ++round) {
                try {
                    return eliminate(G, support, true, rc);
                } catch (const ExtensionRequiredError& e) {
                    if (round >= 8) throw;
                    FieldEmbedding emb(G.ctx(), e.e_mult(), e.f_mult(), 128);
                    G = G.embed(emb);
                }
            }
        };
        EliminationResult first = run(RootChoice::First);
        EliminationResult last = run(RootChoice::Last);
        const Rat guard = G.ctx()->guard();
        for (long tau : first.target_degrees) {
            if (first.stalled.count(tau)) continue;
            Valuation v = first.remainder.coeff(tau).val_info();
            if (!v.is_infinite() && v.lower_bound() < guard)
                failures.push_back("elimination target above guard failed at degree " +
                                   std::to_string(tau));
        }
        long lo = std::min(first.remainder.min_degree().value_or(0),
                           last.remainder.min_degree().value_or(0));
        for (long d = lo; d < 0; ++d) {
            Valuation a = first.remainder.coeff(d).val_info();
            Valuation b = last.remainder.coeff(d).val_info();
            bool a_small = a.is_exact() && a.value < guard;
            bool b_small = b.is_exact() && b.value < guard;
            if (a_small != b_small || (a_small && a.value != b.value))
                failures.push_back("c-valuations depend on the root choice at degree " +
                                   std::to_string(d));
        }
    } catch (const SwanError& e) {
        failures.push_back(std::string("elimination exception: ") + e.what());
    }
}

void check_tower_identities(std::mt19937_64& rng, long vectors,
                            std::vector<std::string>& failures, long* vectors_checked) {
    for (long trial = 0; trial < vectors; ++trial) {
        unsigned long p = trial % 2 ? 2 : 3;
        long n = 1 + static_cast<long>(rng() % 4);
        std::vector<long> by_index(n);
        by_index[0] = 1 + static_cast<long>(rng() % 4);
        for (long i = 1; i < n; ++i) by_index[i] = static_cast<long>(rng() % 4);
        std::vector<long> levels = level_counts_from_index_counts(by_index, p);
        if (Rat(m_swan_cyclic(by_index)) != m_swan(levels, p, 0))
            failures.push_back("cyclic m_swan identity failed");
        if (vectors_checked) ++*vectors_checked;
    }
    auto rnd_profile = [&]() {
        Rat mid = rat(1 + static_cast<long>(rng() % 6), 8);
        Rat v0 = rat(static_cast<long>(rng() % 5), 6);
        Rat v1 = v0 + rat(static_cast<long>(rng() % 5), 6);
        Rat v2 = v1 + rat(static_cast<long>(rng() % 5), 6);
        return PLProfile::from_points({Rat(0), mid, Rat(1)}, {v0, v1, v2});
    };
    for (long trial = 0; trial < std::max<long>(vectors / 10, 5); ++trial) {
        PLProfile a = rnd_profile(), b = rnd_profile(), c = rnd_profile();
        if (compose_differents({compose_differents({a, b}), c}) !=
            compose_differents({a, compose_differents({b, c})}))
            failures.push_back("composition associativity failed");
        if (compose_differents({a, b}) != compose_differents({b, a}))
            failures.push_back("composition commutativity failed");
        unsigned long p = trial % 2 ? 2 : 3;
        if (cyclic_depth_from_berk(a, b, p) != lin_combo_depth({a, b}, 0, p))
            failures.push_back("cyclic depth formula disagrees with the linear combination");
        if (berk_from_depth(depth_from_berk(a, p), p) != a)
            failures.push_back("berk/depth scaling is not an inverse pair");
    }
}

void check_worked_instance(std::vector<std::string>& failures) {
    auto W = make_field(3, 1, 8, 48);
    CoverSpec c;
    c.ctx = W;
    c.alpha0 = 0;
    c.branch = {{Elem::from_integer(W, 3), 1}, {Elem::from_integer(W, 24), 1}};
    c.unit_u = LaurentSeries::one(W);
    c.r0 = Rat(1);
    try {
        CoverWorkspace ws(c, {});
        if (ws.analysis().depth_at(rat(1, 2)) != rat(1, 2))
            failures.push_back("worked instance: depth at 1/2");
        if (ws.analysis().depth_at(rat(1, 8)) != Rat(0))
            failures.push_back("worked instance: depth at 1/8");
        PLProfile prof = build_profile(ws);
        if (prof.kinks() != std::vector<Rat>{rat(1, 4)})
            failures.push_back("worked instance: kink location");
        LambdaResult l = lambda_closed_form(ws.analysis());
        if (l.value != rat(1, 4) || lambda_by_scan(prof, Rat(l.m)) != rat(1, 4))
            failures.push_back("worked instance: lambda");
        if (!closed_disk_at(ws, rat(1, 2)).is_closed_disk)
            failures.push_back("worked instance: disk at 1/2");
        if (closed_disk_at(ws, rat(1, 8)).is_closed_disk)
            failures.push_back("worked instance: disk at 1/8");
    } catch (const SwanError& e) {
        failures.push_back(std::string("worked instance exception: ") + e.what());
    }
}

SelfCheckReport run_selfcheck(const SelfCheckOptions& opts) {
    SelfCheckReport rep;
    std::mt19937_64 rng(opts.seed);

    // pre-generate the corpus so results are independent of the thread count
    std::vector<CoverSpec> corpus;
    CoverGenOptions gen;
    for (long i = 0; i < opts.covers; ++i) corpus.push_back(random_cover(rng, gen));

    std::vector<std::vector<std::string>> fail_by_cover(corpus.size());
    std::vector<long> radii_by_cover(corpus.size(), 0);
    long threads = std::max<long>(1, opts.threads);
    std::vector<std::thread> pool;
    std::size_t chunk = (corpus.size() + threads - 1) / std::max<long>(threads, 1);
    for (long t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk, hi = std::min(corpus.size(), (t + 1) * chunk);
        if (lo >= hi) continue;
        pool.emplace_back([&, lo, hi]() {
            for (std::size_t i = lo; i < hi; ++i)
                check_cover_invariants(corpus[i], opts.analysis, &radii_by_cover[i],
                                       fail_by_cover[i]);
        });
    }
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        rep.covers_checked++;
        rep.radii_checked += radii_by_cover[i];
        for (auto& f : fail_by_cover[i]) rep.failures.push_back(f);
    }

    CoverGenOptions pair_gen;
    pair_gen.max_branch = 2;
    for (long i = 0; i < opts.pairs; ++i) {
        CoverSpec a = random_cover(rng, pair_gen);
        CoverSpec b = random_cover_in(rng, pair_gen, a.ctx);
        check_pair_invariants(a, b, opts.analysis, rep.failures);
        rep.pairs_checked++;
    }

    for (long i = 0; i < opts.eliminations; ++i) {
        unsigned long p = i % 2 ? 2 : 3;
        check_elimination_invariants(rng, p, rep.failures);
        rep.eliminations_checked++;
    }

    check_tower_identities(rng, opts.count_vectors, rep.failures, &rep.vectors_checked);
    check_worked_instance(rep.failures);

    rep.ok = rep.failures.empty();
    return rep;
}

}  // namespace swancond
