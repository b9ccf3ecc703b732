#ifndef SWANCOND_RATIONAL_HPP
#define SWANCOND_RATIONAL_HPP

#include <gmpxx.h>
#include <optional>
#include <string>
#include <stdexcept>

namespace swancond {

// Exact rational arithmetic throughout; no floating point anywhere.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Parses "num", "num/den", or "-num/den".  Throws std::invalid_argument on junk.
Rat rat_parse(const std::string& s);

// True iff q * k is an integer.
inline bool is_integral_multiple(const Rat& q, long k) {
    Rat t = q * k;
    return t.get_den() == 1;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// floor(q) as mpz
inline Int rat_floor(const Rat& q) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return f;
}

inline Int rat_ceil(const Rat& q) {
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return c;
}

// Valuation of an element: either an exact rational, a lower bound (the
// element is indistinguishable from 0 at working precision), or +infinity
// (exactly zero).
struct Valuation {
    enum class Kind { Exact, AtLeast, Infinite } kind;
    Rat value;  // meaningful for Exact and AtLeast

    static Valuation exact(Rat v) { return {Kind::Exact, std::move(v)}; }
    static Valuation at_least(Rat v) { return {Kind::AtLeast, std::move(v)}; }
    static Valuation infinite() { return {Kind::Infinite, Rat(0)}; }

    bool is_exact() const { return kind == Kind::Exact; }
    bool is_infinite() const { return kind == Kind::Infinite; }

    // Sound lower bound in every state.
    const Rat& lower_bound() const { return value; }
};

}  // namespace swancond

#endif
