#ifndef SIGMAFORGE_RATIONAL_HPP
#define SIGMAFORGE_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sigmaforge {

// Exact rational scalar. mpq_class arithmetic keeps values canonical
// (reduced, positive denominator) as long as every value starts out
// canonical, so raw two-argument construction is confined to make_rat.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p" or "p/q" with optional sign; q > 0 after canonicalization.
inline Rat parse_rat(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class n(text);
            return Rat(n);
        }
        mpz_class n(text.substr(0, slash));
        mpz_class d(text.substr(slash + 1));
        return make_rat(n, d);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational '" + text + "'");
    }
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline mpz_class factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

inline mpz_class binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return b;
}

// 2-adic valuation of the denominator, or -1 if the denominator is not a
// power of two. Used by the integrality classifier.
inline int den_two_valuation(const Rat& r) {
    mpz_class d = r.get_den();
    if (d == 1) return 0;
    auto v = mpz_scan1(d.get_mpz_t(), 0);
    mpz_class odd;
    mpz_tdiv_q_2exp(odd.get_mpz_t(), d.get_mpz_t(), v);
    return odd == 1 ? static_cast<int>(v) : -1;
}

}  // namespace sigmaforge

#endif
