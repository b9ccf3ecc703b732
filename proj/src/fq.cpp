#include "fq.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace swancond {

namespace {

// p^f with overflow check against the extension cap.
unsigned long pow_checked(unsigned long p, unsigned long f) {
    unsigned long q = 1;
    for (unsigned long i = 0; i < f; ++i) {
        if (q > (1ul << 40) / p)
            throw_error(ErrorKind::ExtensionCapExceeded,
                        "residue field too large: p^f exceeds cap");
        q *= p;
    }
    return q;
}

// Polynomials over F_p as coefficient vectors, little-endian, used only to
// find the canonical irreducible modulus.
using PPoly = std::vector<unsigned long>;

void ppoly_trim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly ppoly_mulmod(const PPoly& a, const PPoly& b, const PPoly& m, unsigned long p) {
    PPoly prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    // reduce mod m (monic)
    long dm = static_cast<long>(m.size()) - 1;
    for (long d = static_cast<long>(prod.size()) - 1; d >= dm; --d) {
        unsigned long c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (long i = 0; i < dm; ++i)
            prod[d - dm + i] = (prod[d - dm + i] + c * (p - m[i] % p)) % p;
    }
    prod.resize(dm > 0 ? dm : 1, 0);
    ppoly_trim(prod);
    return prod;
}

PPoly ppoly_powmod(PPoly base, unsigned long long e, const PPoly& m, unsigned long p) {
    PPoly r{1};
    while (e) {
        if (e & 1) r = ppoly_mulmod(r, base, m, p);
        base = ppoly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

PPoly ppoly_gcd(PPoly a, PPoly b, unsigned long p) {
    ppoly_trim(a);
    ppoly_trim(b);
    while (!b.empty()) {
        // a mod b
        long db = static_cast<long>(b.size()) - 1;
        unsigned long lead_inv = 1;
        {  // inverse of b's leading coefficient mod p
            unsigned long l = b.back() % p, x = 1, acc = l;
            unsigned long e = p - 2;
            x = 1;
            while (e) {
                if (e & 1) x = (x * acc) % p;
                acc = (acc * acc) % p;
                e >>= 1;
            }
            lead_inv = x;
        }
        PPoly r = a;
        for (long d = static_cast<long>(r.size()) - 1; d >= db; --d) {
            unsigned long c = (r[d] * lead_inv) % p;
            if (c == 0) continue;
            for (long i = 0; i <= db; ++i)
                r[d - db + i] = (r[d - db + i] + c * (p - b[i] % p)) % p;
        }
        ppoly_trim(r);
        a = b;
        b = r;
    }
    return a;
}

bool ppoly_irreducible(const PPoly& m, unsigned long p, unsigned long f) {
    // x^(p^f) == x mod m, and gcd(x^(p^(f/d)) - x, m) == 1 for prime d | f.
    PPoly x{0, 1};
    auto frob_iter = [&](unsigned long k) {
        PPoly r = x;
        for (unsigned long i = 0; i < k; ++i) r = ppoly_powmod(r, p, m, p);
        return r;
    };
    PPoly xf = frob_iter(f);
    if (xf != x) return false;
    for (unsigned long d = 2; d <= f; ++d) {
        if (f % d != 0) continue;
        bool prime = true;
        for (unsigned long t = 2; t * t <= d; ++t)
            if (d % t == 0) { prime = false; break; }
        if (!prime) continue;
        PPoly xe = frob_iter(f / d);
        // xe - x
        PPoly diff = xe;
        diff.resize(std::max(diff.size(), x.size()), 0);
        for (std::size_t i = 0; i < x.size(); ++i)
            diff[i] = (diff[i] + p - x[i]) % p;
        ppoly_trim(diff);
        PPoly g = ppoly_gcd(diff, m, p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace

FqCtx::FqCtx(unsigned long p, unsigned long f) : p_(p), f_(f) {
    if (p < 2 || f < 1) throw_error(ErrorKind::Schema, "bad residue field parameters");
    q_ = pow_checked(p, f);
    if (f == 1) {
        modulus_ = {0, 1};  // t, unused
        return;
    }
    // First monic irreducible of degree f in lexicographic order of the
    // low-coefficient vector.
    unsigned long count = pow_checked(p, f);
    for (unsigned long k = 0; k < count; ++k) {
        PPoly m(f + 1, 0);
        unsigned long v = k;
        for (unsigned long i = 0; i < f; ++i) {
            m[i] = v % p;
            v /= p;
        }
        m[f] = 1;
        if (m[0] == 0) continue;  // reducible: divisible by t
        if (ppoly_irreducible(m, p, f)) {
            modulus_.assign(m.begin(), m.end());
            return;
        }
    }
    throw_error(ErrorKind::InternalInconsistency, "no irreducible modulus found");
}

FqElem::FqElem(FqCtxPtr ctx, unsigned long scalar) : ctx_(std::move(ctx)) {
    coords_.assign(ctx_->f(), 0);
    coords_[0] = scalar % ctx_->p();
}

FqElem::FqElem(FqCtxPtr ctx, std::vector<unsigned long> coords) : ctx_(std::move(ctx)) {
    coords.resize(ctx_->f(), 0);
    for (auto& c : coords) c %= ctx_->p();
    coords_ = std::move(coords);
}

FqElem FqElem::from_index(FqCtxPtr ctx, unsigned long k) {
    std::vector<unsigned long> coords(ctx->f(), 0);
    for (unsigned long i = 0; i < ctx->f(); ++i) {
        coords[i] = k % ctx->p();
        k /= ctx->p();
    }
    return FqElem(std::move(ctx), std::move(coords));
}

unsigned long FqElem::index() const {
    unsigned long k = 0;
    for (std::size_t i = coords_.size(); i-- > 0;) k = k * ctx_->p() + coords_[i];
    return k;
}

bool FqElem::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](unsigned long c) { return c == 0; });
}

bool FqElem::is_one() const {
    if (coords_.empty() || coords_[0] != 1) return false;
    for (std::size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return false;
    return true;
}

FqElem FqElem::operator+(const FqElem& o) const {
    std::vector<unsigned long> r(coords_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (coords_[i] + o.coords_[i]) % ctx_->p();
    FqElem out;
    out.ctx_ = ctx_;
    out.coords_ = std::move(r);
    return out;
}

FqElem FqElem::operator-() const {
    std::vector<unsigned long> r(coords_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (ctx_->p() - coords_[i]) % ctx_->p();
    FqElem out;
    out.ctx_ = ctx_;
    out.coords_ = std::move(r);
    return out;
}

FqElem FqElem::operator-(const FqElem& o) const { return *this + (-o); }

FqElem FqElem::operator*(const FqElem& o) const {
    const unsigned long p = ctx_->p(), f = ctx_->f();
    std::vector<unsigned long> prod(2 * f - 1, 0);
    for (std::size_t i = 0; i < f; ++i) {
        if (coords_[i] == 0) continue;
        for (std::size_t j = 0; j < f; ++j)
            prod[i + j] = (prod[i + j] + coords_[i] * o.coords_[j]) % p;
    }
    const auto& m = ctx_->modulus();
    for (std::size_t d = prod.size(); d-- > f;) {
        unsigned long c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (std::size_t i = 0; i < f; ++i)
            prod[d - f + i] = (prod[d - f + i] + c * (p - m[i] % p)) % p;
    }
    prod.resize(f);
    FqElem out;
    out.ctx_ = ctx_;
    out.coords_ = std::move(prod);
    return out;
}

FqElem FqElem::pow(unsigned long long e) const {
    FqElem r = FqElem::one(ctx_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

FqElem FqElem::inverse() const {
    if (is_zero()) throw_error(ErrorKind::InternalInconsistency, "inverse of zero in F_q");
    return pow(ctx_->q() - 2);
}

FqElem FqElem::pow_p(unsigned long times) const {
    FqElem r = *this;
    for (unsigned long i = 0; i < times; ++i) r = r.pow(ctx_->p());
    return r;
}

FqElem FqElem::pth_root() const {
    // Frobenius has order f, so x^(p^(f-1)) is the p-th root.
    return pow_p(ctx_->f() - 1);
}

std::string FqElem::str() const {
    if (ctx_->f() == 1) return std::to_string(coords_[0]);
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << ',';
        os << coords_[i];
    }
    os << ']';
    return os.str();
}

FqPoly::FqPoly(FqCtxPtr ctx, std::vector<FqElem> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    normalize();
}

void FqPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FqPoly FqPoly::constant(const FqElem& c) {
    FqPoly p(c.ctx());
    if (!c.is_zero()) p.coeffs_ = {c};
    return p;
}

FqPoly FqPoly::monomial(const FqElem& c, std::size_t deg) {
    FqPoly p(c.ctx());
    if (!c.is_zero()) {
        p.coeffs_.assign(deg + 1, FqElem::zero(c.ctx()));
        p.coeffs_[deg] = c;
    }
    return p;
}

FqPoly FqPoly::t(FqCtxPtr ctx) { return monomial(FqElem::one(ctx), 1); }

FqElem FqPoly::coeff(std::size_t i) const {
    if (i < coeffs_.size()) return coeffs_[i];
    return FqElem::zero(ctx_);
}

FqElem FqPoly::leading() const {
    if (is_zero()) return FqElem::zero(ctx_);
    return coeffs_.back();
}

bool FqPoly::is_monic() const { return !is_zero() && coeffs_.back().is_one(); }

FqPoly FqPoly::operator+(const FqPoly& o) const {
    std::vector<FqElem> r(std::max(coeffs_.size(), o.coeffs_.size()), FqElem::zero(ctx_));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return FqPoly(ctx_, std::move(r));
}

FqPoly FqPoly::operator-(const FqPoly& o) const {
    std::vector<FqElem> r(std::max(coeffs_.size(), o.coeffs_.size()), FqElem::zero(ctx_));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return FqPoly(ctx_, std::move(r));
}

FqPoly FqPoly::operator*(const FqPoly& o) const {
    if (is_zero() || o.is_zero()) return FqPoly(ctx_);
    std::vector<FqElem> r(coeffs_.size() + o.coeffs_.size() - 1, FqElem::zero(ctx_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            r[i + j] = r[i + j] + coeffs_[i] * o.coeffs_[j];
    return FqPoly(ctx_, std::move(r));
}

FqPoly FqPoly::operator*(const FqElem& c) const { return *this * constant(c); }

FqPoly FqPoly::monic() const {
    if (is_zero() || is_monic()) return *this;
    return *this * leading().inverse();
}

std::pair<FqPoly, FqPoly> FqPoly::divmod(const FqPoly& d) const {
    if (d.is_zero()) throw_error(ErrorKind::InternalInconsistency, "division by zero polynomial");
    FqPoly q(ctx_), r = *this;
    FqElem lead_inv = d.leading().inverse();
    long dd = d.degree();
    if (r.degree() >= dd)
        q.coeffs_.assign(r.degree() - dd + 1, FqElem::zero(ctx_));
    while (!r.is_zero() && r.degree() >= dd) {
        long shift = r.degree() - dd;
        FqElem c = r.leading() * lead_inv;
        q.coeffs_[shift] = c;
        r = r - monomial(c, shift) * d;
    }
    q.normalize();
    return {q, r};
}

bool FqPoly::divides(const FqPoly& multiple) const { return (multiple % *this).is_zero(); }

FqPoly FqPoly::derivative() const {
    if (coeffs_.size() <= 1) return FqPoly(ctx_);
    std::vector<FqElem> r(coeffs_.size() - 1, FqElem::zero(ctx_));
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        r[i - 1] = coeffs_[i] * FqElem(ctx_, i % ctx_->p());
    return FqPoly(ctx_, std::move(r));
}

FqElem FqPoly::eval(const FqElem& x) const {
    FqElem acc = FqElem::zero(ctx_);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

FqPoly FqPoly::pow_mod(unsigned long long e, const FqPoly& mod) const {
    FqPoly r = constant(FqElem::one(ctx_)), b = *this % mod;
    while (e) {
        if (e & 1) r = (r * b) % mod;
        b = (b * b) % mod;
        e >>= 1;
    }
    return r;
}

FqPoly FqPoly::pow(unsigned long e) const {
    FqPoly r = constant(FqElem::one(ctx_)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

FqPoly FqPoly::gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = a % b;
        a = b;
        b = r;
    }
    return a.monic();
}

long FqPoly::multiplicity(const FqPoly& f) const {
    long m = 0;
    FqPoly cur = *this;
    while (!cur.is_zero() && cur.degree() >= f.degree()) {
        auto [q, r] = cur.divmod(f);
        if (!r.is_zero()) break;
        ++m;
        cur = q;
    }
    return m;
}

bool FqPoly::pth_power_root(FqPoly* root) const {
    const unsigned long p = ctx_->p();
    if (is_zero()) {
        if (root) *root = FqPoly(ctx_);
        return true;
    }
    if (static_cast<unsigned long>(degree()) % p != 0) return false;
    std::vector<FqElem> r(degree() / p + 1, FqElem::zero(ctx_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i % p == 0) {
            r[i / p] = coeffs_[i].pth_root();
        } else if (!coeffs_[i].is_zero()) {
            return false;
        }
    }
    if (root) *root = FqPoly(ctx_, std::move(r));
    return true;
}

bool FqPoly::operator==(const FqPoly& o) const { return coeffs_ == o.coeffs_; }

std::string FqPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (coeffs_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || !coeffs_[i].is_one()) os << coeffs_[i].str();
        if (i >= 1) {
            if (!coeffs_[i].is_one()) os << "*";
            os << "t";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

namespace {

// Squarefree decomposition in characteristic p.
void squarefree_decompose(const FqPoly& f, long outer_mult,
                          std::vector<std::pair<FqPoly, long>>& out) {
    if (f.degree() <= 0) return;
    FqPoly d = f.derivative();
    if (d.is_zero()) {
        FqPoly root;
        if (!f.pth_power_root(&root))
            throw_error(ErrorKind::InternalInconsistency, "zero derivative but not a p-th power");
        squarefree_decompose(root, outer_mult * static_cast<long>(f.ctx()->p()), out);
        return;
    }
    FqPoly c = FqPoly::gcd(f, d);
    FqPoly w = (f / c).monic();
    long i = 1;
    while (w.degree() > 0) {
        FqPoly y = FqPoly::gcd(w, c);
        FqPoly z = (w / y).monic();
        if (z.degree() > 0) out.emplace_back(z, outer_mult * i);
        w = y;
        c = (c / y).monic();
        ++i;
    }
    if (c.degree() > 0) {
        // remaining part has all multiplicities divisible by p
        FqPoly root;
        if (!c.pth_power_root(&root))
            throw_error(ErrorKind::InternalInconsistency, "squarefree residue not a p-th power");
        squarefree_decompose(root, outer_mult * static_cast<long>(f.ctx()->p()), out);
    }
}

// Deterministic equal-degree splitting of a monic squarefree product of
// irreducibles all of degree d.
void edf(const FqPoly& f, long d, std::vector<FqPoly>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    auto ctx = f.ctx();
    const unsigned long p = ctx->p();
    FqPoly one = FqPoly::constant(FqElem::one(ctx));
    // sweep candidate polynomials in enumeration order
    for (unsigned long counter = 1;; ++counter) {
        // candidate = polynomial with base-q digits of counter
        std::vector<FqElem> cc;
        unsigned long v = counter;
        while (v) {
            cc.push_back(FqElem::from_index(ctx, v % ctx->q()));
            v /= ctx->q();
        }
        FqPoly a(ctx, std::move(cc));
        if (a.degree() < 1) continue;
        FqPoly g;
        if (p == 2) {
            // trace map over F_2: a + a^2 + a^4 + ... (f*d summands)
            FqPoly tr(ctx), cur = a % f;
            for (unsigned long i = 0; i < ctx->f() * static_cast<unsigned long>(d); ++i) {
                tr = tr + cur;
                cur = (cur * cur) % f;
            }
            g = FqPoly::gcd(tr, f);
        } else {
            unsigned long long qd = 1;
            for (long i = 0; i < d; ++i) qd *= ctx->q();
            FqPoly b = a.pow_mod((qd - 1) / 2, f);
            g = FqPoly::gcd(b - one, f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            edf(g, d, out);
            edf((f / g).monic(), d, out);
            return;
        }
        if (counter > 4096)
            throw_error(ErrorKind::InternalInconsistency, "equal-degree splitting failed");
    }
}

}  // namespace

FqFactorization fq_factor(const FqPoly& poly) {
    if (poly.is_zero())
        throw_error(ErrorKind::InternalInconsistency, "factoring the zero polynomial");
    FqFactorization out;
    out.lead = poly.leading();
    FqPoly f = poly.monic();
    std::vector<std::pair<FqPoly, long>> sqfree;
    squarefree_decompose(f, 1, sqfree);
    for (auto& [part, mult] : sqfree) {
        // distinct-degree on the squarefree part
        FqPoly rest = part.monic();
        FqPoly x = FqPoly::t(part.ctx());
        FqPoly h = x;
        long d = 0;
        while (rest.degree() > 0) {
            ++d;
            if (2 * d > rest.degree()) {
                out.factors.emplace_back(rest, mult);  // rest itself irreducible
                break;
            }
            h = h.pow_mod(part.ctx()->q(), rest);
            FqPoly g = FqPoly::gcd(h - x, rest);
            if (g.degree() > 0) {
                std::vector<FqPoly> pieces;
                edf(g, d, pieces);
                for (auto& irr : pieces) out.factors.emplace_back(irr, mult);
                rest = (rest / g).monic();
                h = h % rest;
            }
        }
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) {
                  if (a.first.degree() != b.first.degree())
                      return a.first.degree() < b.first.degree();
                  for (long i = a.first.degree(); i >= 0; --i) {
                      unsigned long ia = a.first.coeff(i).index(), ib = b.first.coeff(i).index();
                      if (ia != ib) return ia < ib;
                  }
                  return false;
              });
    return out;
}

std::vector<std::pair<FqElem, long>> fq_roots(const FqPoly& poly) {
    std::vector<std::pair<FqElem, long>> roots;
    if (poly.is_zero() || poly.degree() == 0) return roots;
    auto ctx = poly.ctx();
    for (unsigned long k = 0; k < ctx->q(); ++k) {
        FqElem c = FqElem::from_index(ctx, k);
        if (!poly.eval(c).is_zero()) continue;
        long mult = 0;
        FqPoly lin = FqPoly::t(ctx) - FqPoly::constant(c);
        FqPoly cur = poly;
        while (!cur.is_zero() && cur.eval(c).is_zero() && cur.degree() >= 1) {
            cur = cur / lin;
            ++mult;
        }
        roots.emplace_back(c, mult);
    }
    return roots;
}

long fq_min_factor_degree(const FqPoly& poly) {
    auto fac = fq_factor(poly);
    long best = poly.degree();
    for (auto& [f, m] : fac.factors) best = std::min(best, f.degree());
    return best;
}

}  // namespace swancond
