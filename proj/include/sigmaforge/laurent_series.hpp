#ifndef SIGMAFORGE_LAURENT_SERIES_HPP
#define SIGMAFORGE_LAURENT_SERIES_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigmaforge/mu_poly.hpp"

namespace sigmaforge {

// Truncated Laurent series in one variable over MuPoly, with a finite
// principal part. Coefficients are stored densely from lo() upward;
// everything above prec() is unknown, not zero. Every operation computes
// the exact certified precision of its result -- silent precision loss is
// the dominant bug class in this kind of code, so the rules live here and
// nowhere else.
class LSeries {
  public:
    explicit LSeries(char var = 't', int prec = -1) : var_(var), prec_(prec) {}

    static LSeries zero(char var, int prec) { return LSeries(var, prec); }

    static LSeries monomial(char var, int exp, MuPoly c, int prec) {
        LSeries s(var, prec);
        s.set_coeff(exp, std::move(c));
        return s;
    }

    // The identity series: one times the variable.
    static LSeries identity(char var, int prec) {
        return monomial(var, 1, MuPoly::one(), prec);
    }

    static LSeries constant(char var, MuPoly c, int prec) {
        return monomial(var, 0, std::move(c), prec);
    }

    char var() const { return var_; }
    int prec() const { return prec_; }

    // Lowest exponent with a nonzero coefficient; prec()+1 when the series
    // is zero to its precision.
    int valuation() const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) return lo_ + static_cast<int>(i);
        return prec_ + 1;
    }

    int lo() const { return coeffs_.empty() ? 0 : lo_; }

    bool is_zero() const { return valuation() > prec_; }

    const MuPoly& coeff(int n) const {
        if (n > prec_)
            throw std::invalid_argument("coefficient beyond certified precision");
        static const MuPoly kZero;
        if (coeffs_.empty() || n < lo_ ||
            n >= lo_ + static_cast<int>(coeffs_.size()))
            return kZero;
        return coeffs_[static_cast<std::size_t>(n - lo_)];
    }

    void set_coeff(int n, MuPoly c) {
        if (n > prec_) return;
        if (coeffs_.empty()) {
            lo_ = n;
            coeffs_.push_back(std::move(c));
            return;
        }
        if (n < lo_) {
            coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(lo_ - n), MuPoly());
            lo_ = n;
        } else if (n >= lo_ + static_cast<int>(coeffs_.size())) {
            coeffs_.resize(static_cast<std::size_t>(n - lo_ + 1));
        }
        coeffs_[static_cast<std::size_t>(n - lo_)] = std::move(c);
    }

    void add_coeff(int n, const MuPoly& c) {
        if (n > prec_ || c.is_zero()) return;
        set_coeff(n, coeff(n) + c);
    }

    LSeries truncated(int new_prec) const {
        LSeries r(var_, std::min(prec_, new_prec));
        for (int n = lo(); n <= r.prec_ && n < lo() + size(); ++n)
            if (!coeff_raw(n).is_zero()) r.set_coeff(n, coeff_raw(n));
        return r;
    }

    // Multiplication by t^k (exact; shifts precision too).
    LSeries shifted(int k) const {
        LSeries r(var_, prec_ + k);
        r.lo_ = lo_ + k;
        r.coeffs_ = coeffs_;
        return r;
    }

    LSeries with_var(char v) const {
        LSeries r = *this;
        r.var_ = v;
        return r;
    }

    LSeries operator-() const {
        LSeries r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend LSeries operator+(const LSeries& a, const LSeries& b) {
        a.check_same_var(b);
        LSeries r(a.var_, std::min(a.prec_, b.prec_));
        int lo = std::min(a.lo(), b.lo());
        for (int n = lo; n <= r.prec_; ++n) {
            MuPoly c = a.safe_coeff(n) + b.safe_coeff(n);
            if (!c.is_zero()) r.set_coeff(n, std::move(c));
        }
        return r;
    }

    friend LSeries operator-(const LSeries& a, const LSeries& b) {
        return a + (-b);
    }

    // Certified precision of a product: coefficient n needs a_i for
    // i <= n - val(b) and b_j for j <= n - val(a). Accumulation is
    // output-centric: one consolidation per result coefficient.
    friend LSeries operator*(const LSeries& a, const LSeries& b) {
        a.check_same_var(b);
        int va = a.valuation(), vb = b.valuation();
        long prec = std::min(static_cast<long>(a.prec_) + vb,
                             static_cast<long>(b.prec_) + va);
        LSeries r(a.var_, static_cast<int>(prec));
        if (a.is_zero() || b.is_zero()) return r;
        MuTermAccumulator acc;
        for (long n = static_cast<long>(va) + vb; n <= r.prec_; ++n) {
            int ilo = std::max<long>(va, n - b.prec_);
            int ihi = std::min<long>(a.prec_, n - vb);
            for (int i = ilo; i <= ihi; ++i) {
                const MuPoly& ca = a.coeff(i);
                if (ca.is_zero()) continue;
                const MuPoly& cb = b.coeff(static_cast<int>(n) - i);
                if (!cb.is_zero()) acc.add_product(ca, cb);
            }
            MuPoly c = acc.consolidate();
            if (!c.is_zero()) r.set_coeff(static_cast<int>(n), std::move(c));
        }
        return r;
    }

    LSeries scaled(const Rat& c) const {
        LSeries r(var_, prec_);
        if (c == 0) return r;
        r.lo_ = lo_;
        r.coeffs_ = coeffs_;
        for (auto& cc : r.coeffs_) cc = cc.scaled(c);
        return r;
    }

    LSeries scaled(const MuPoly& m) const {
        LSeries r(var_, prec_);
        for (int n = lo(); n < lo() + size(); ++n) {
            MuPoly c = coeff_raw(n) * m;
            if (!c.is_zero()) r.set_coeff(n, std::move(c));
        }
        return r;
    }

    // Substitution t -> c*t (used for sigma(n u)).
    LSeries var_scaled(const Rat& c) const {
        if (c == 0) throw std::invalid_argument("var_scaled by zero");
        LSeries r(var_, prec_);
        for (int n = lo(); n < lo() + size(); ++n) {
            if (coeff_raw(n).is_zero()) continue;
            Rat factor(1);
            if (n >= 0) {
                for (int i = 0; i < n; ++i) factor *= c;
            } else {
                for (int i = 0; i < -n; ++i) factor /= c;
            }
            r.set_coeff(n, coeff_raw(n).scaled(factor));
        }
        return r;
    }

    bool equals_to_prec(const LSeries& b, int N) const {
        if (prec_ < N || b.prec_ < N) return false;
        int lo = std::min(this->lo(), b.lo());
        for (int n = lo; n <= N; ++n)
            if (!(safe_coeff(n) == b.safe_coeff(n))) return false;
        return true;
    }

    // First exponent where the two series disagree, up to N.
    std::optional<int> first_difference(const LSeries& b, int N) const {
        int lo = std::min(this->lo(), b.lo());
        for (int n = lo; n <= N; ++n)
            if (!(safe_coeff(n) == b.safe_coeff(n))) return n;
        return std::nullopt;
    }

    // Coefficient-of-t^n has weight n + w for a series of weight label w;
    // returns the first offending exponent if the grading fails.
    std::optional<int> weight_violation(int label) const {
        for (int n = lo(); n < lo() + size(); ++n) {
            const MuPoly& c = coeff_raw(n);
            if (c.is_zero()) continue;
            if (!c.is_homogeneous_of_weight(n + label)) return n;
        }
        return std::nullopt;
    }

  private:
    int size() const { return static_cast<int>(coeffs_.size()); }

    const MuPoly& coeff_raw(int n) const {
        static const MuPoly kZero;
        if (coeffs_.empty() || n < lo_ || n >= lo_ + size()) return kZero;
        return coeffs_[static_cast<std::size_t>(n - lo_)];
    }

    const MuPoly& safe_coeff(int n) const { return coeff_raw(n); }

    void check_same_var(const LSeries& b) const {
        if (var_ != b.var_)
            throw std::invalid_argument(std::string("variable mismatch: ") +
                                        var_ + " vs " + b.var_);
    }

    friend LSeries invert_unit(const LSeries&);
    friend LSeries compose(const LSeries&, const LSeries&);

    char var_;
    int lo_ = 0;
    int prec_;
    std::vector<MuPoly> coeffs_;
};

// 1/a for a series whose leading coefficient is a nonzero rational.
// Certified to prec(a) - 2*val(a).
inline LSeries invert_unit(const LSeries& a) {
    int v = a.valuation();
    if (v > a.prec())
        throw std::invalid_argument("invert_unit of zero series");
    const MuPoly& lead = a.coeff(v);
    if (!lead.is_unit())
        throw std::invalid_argument("invert_unit: leading coefficient is not a rational unit");
    Rat c0 = lead.constant_term();
    int rel = a.prec() - v;  // relative precision of the unit cofactor
    LSeries inv(a.var(), rel);
    std::vector<MuPoly> g(static_cast<std::size_t>(rel) + 1);
    for (int n = 1; n <= rel; ++n) g[n] = a.coeff(v + n).scaled(1 / c0);
    std::vector<MuPoly> b(static_cast<std::size_t>(rel) + 1);
    b[0] = MuPoly::one();
    MuTermAccumulator acc;
    for (int n = 1; n <= rel; ++n) {
        for (int k = 1; k <= n; ++k)
            if (!g[k].is_zero() && !b[n - k].is_zero()) acc.add_product(g[k], b[n - k], -1);
        b[n] = acc.consolidate();
    }
    for (int n = 0; n <= rel; ++n)
        if (!b[n].is_zero()) inv.set_coeff(n, b[n].scaled(1 / c0));
    return inv.shifted(-v);
}

inline LSeries differentiate(const LSeries& a) {
    LSeries r(a.var(), a.prec() - 1);
    for (int n = a.lo(); n <= a.prec(); ++n) {
        if (n == 0) continue;
        const MuPoly& c = a.coeff(n);
        if (!c.is_zero()) r.set_coeff(n - 1, c.scaled(Rat(n)));
    }
    return r;
}

// Term-wise primitive with integration constant 0. A t^-1 term signals a
// logarithm, which this ring does not represent.
inline LSeries integrate_formal(const LSeries& a) {
    LSeries r(a.var(), a.prec() + 1);
    for (int n = a.lo(); n <= a.prec(); ++n) {
        const MuPoly& c = a.coeff(n);
        if (c.is_zero()) continue;
        if (n == -1)
            throw std::invalid_argument("integrate_formal: t^-1 term would produce a log");
        r.set_coeff(n + 1, c.scaled(make_rat(1, n + 1)));
    }
    return r;
}

// Formal substitution outer(inner). Inner must have positive valuation; a
// Laurent outer additionally needs an invertible leading coefficient on
// the inner series so that negative powers exist. The certified precision
// is the minimum over the truncation bound and the precision of every
// power of inner that actually contributes.
inline LSeries compose(const LSeries& outer, const LSeries& inner) {
    int v = inner.valuation();
    if (v < 1)
        throw std::invalid_argument("compose: inner series must have positive valuation");
    int No = outer.prec(), Ni = inner.prec();
    long prec = static_cast<long>(No + 1) * v - 1;  // truncation of outer
    int k_pos = 0;                                   // smallest k >= 1 present
    for (int n = std::max(1, outer.valuation()); n <= No; ++n)
        if (!outer.coeff(n).is_zero()) { k_pos = n; break; }
    if (k_pos > 0)
        prec = std::min(prec, static_cast<long>(Ni) + static_cast<long>(k_pos - 1) * v);
    int k_neg = 0;  // most negative exponent present
    for (int n = outer.lo(); n < 0; ++n)
        if (!outer.coeff(n).is_zero()) { k_neg = n; break; }
    if (k_neg < 0)
        prec = std::min(prec, static_cast<long>(Ni) - static_cast<long>(-k_neg + 1) * v);
    LSeries result(inner.var(), static_cast<int>(prec));
    if (No >= 0 && !outer.coeff(0).is_zero()) result.set_coeff(0, outer.coeff(0));
    // positive powers
    if (k_pos > 0) {
        LSeries pw = inner.truncated(result.prec());
        for (int k = 1; k <= No; ++k) {
            if (k > 1) {
                pw = (pw * inner).truncated(result.prec());
                if (pw.is_zero() && pw.valuation() > result.prec()) break;
            }
            const MuPoly& c = outer.coeff(k);
            if (!c.is_zero()) result = result + pw.scaled(c);
        }
    }
    // negative powers
    if (k_neg < 0) {
        LSeries innerinv = invert_unit(inner);
        LSeries pw = innerinv.truncated(result.prec());
        for (int k = -1; k >= k_neg; --k) {
            if (k < -1) pw = (pw * innerinv).truncated(result.prec());
            const MuPoly& c = outer.coeff(k);
            if (!c.is_zero()) result = result + pw.scaled(c);
        }
    }
    return result;
}

// Compositional inverse of a = t + a2 t^2 + ..., solved order by order
// with a table of powers of the partial answer.
inline LSeries revert(const LSeries& a, char out_var) {
    if (a.valuation() != 1 || !(a.coeff(1) == MuPoly::one()))
        throw std::invalid_argument("revert: series must be t + O(t^2)");
    int N = a.prec();
    // P[k][n] = coefficient of u^n in b(u)^k
    std::vector<std::vector<MuPoly>> P(static_cast<std::size_t>(N) + 1,
                                       std::vector<MuPoly>(static_cast<std::size_t>(N) + 1));
    std::vector<MuPoly> b(static_cast<std::size_t>(N) + 1);
    b[1] = MuPoly::one();
    if (N >= 1) P[1][1] = MuPoly::one();
    MuTermAccumulator acc;
    for (int n = 2; n <= N; ++n) {
        for (int k = 2; k <= n; ++k) {
            for (int m = 1; m <= n - k + 1; ++m) {
                if (b[m].is_zero()) continue;
                const MuPoly& t = P[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(n - m)];
                if (!t.is_zero()) acc.add_product(b[m], t);
            }
            P[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)] = acc.consolidate();
        }
        for (int k = 2; k <= n; ++k) {
            const MuPoly& ak = a.coeff(k);
            if (ak.is_zero()) continue;
            const MuPoly& t = P[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)];
            if (!t.is_zero()) acc.add_product(ak, t, -1);
        }
        b[static_cast<std::size_t>(n)] = acc.consolidate();
        P[1][static_cast<std::size_t>(n)] = b[static_cast<std::size_t>(n)];
    }
    LSeries r(out_var, N);
    for (int n = 1; n <= N; ++n)
        if (!b[static_cast<std::size_t>(n)].is_zero())
            r.set_coeff(n, b[static_cast<std::size_t>(n)]);
    return r;
}

inline LSeries revert(const LSeries& a) {
    char out = a.var() == 't' ? 'u' : (a.var() == 'u' ? 't' : a.var());
    return revert(a, out);
}

// exp of a series with valuation >= 1, by the standard D(exp a) = a' exp a
// recurrence.
inline LSeries exp_series(const LSeries& a) {
    if (a.valuation() < 1)
        throw std::invalid_argument("exp_series: valuation must be >= 1");
    int N = a.prec();
    std::vector<MuPoly> E(static_cast<std::size_t>(std::max(N, 0)) + 1);
    E[0] = MuPoly::one();
    MuTermAccumulator acc;
    for (int n = 1; n <= N; ++n) {
        for (int k = 1; k <= n; ++k) {
            const MuPoly& ak = a.coeff(k);
            if (ak.is_zero() || E[static_cast<std::size_t>(n - k)].is_zero()) continue;
            acc.add_product_scaled(ak, E[static_cast<std::size_t>(n - k)], Rat(k));
        }
        E[static_cast<std::size_t>(n)] = acc.consolidate().scaled(make_rat(1, n));
    }
    LSeries r(a.var(), N);
    for (int n = 0; n <= N; ++n)
        if (!E[static_cast<std::size_t>(n)].is_zero()) r.set_coeff(n, E[static_cast<std::size_t>(n)]);
    return r;
}

// log of a series with constant term 1.
inline LSeries log_series(const LSeries& h) {
    if (h.valuation() != 0 || !(h.coeff(0) == MuPoly::one()))
        throw std::invalid_argument("log_series: constant term must be 1");
    int N = h.prec();
    std::vector<MuPoly> L(static_cast<std::size_t>(std::max(N, 0)) + 1);
    MuTermAccumulator acc;
    for (int n = 1; n <= N; ++n) {
        acc.add(h.coeff(n));
        for (int k = 1; k < n; ++k) {
            if (L[static_cast<std::size_t>(k)].is_zero() || h.coeff(n - k).is_zero()) continue;
            acc.add_product_scaled(L[static_cast<std::size_t>(k)], h.coeff(n - k),
                                   make_rat(-k, n));
        }
        L[static_cast<std::size_t>(n)] = acc.consolidate();
    }
    LSeries r(h.var(), N);
    for (int n = 1; n <= N; ++n)
        if (!L[static_cast<std::size_t>(n)].is_zero()) r.set_coeff(n, L[static_cast<std::size_t>(n)]);
    return r;
}

// Square root of h = 1 + ..., normalized phi(0) = 1. When h satisfies the
// evenness hypothesis 2a_n/n! over a ring A, every Hurwitz coefficient of
// the result lies in A; the arithmetic here is plain exact rationals.
inline LSeries sqrt_hurwitz(const LSeries& h) {
    if (h.valuation() != 0 || !(h.coeff(0) == MuPoly::one()))
        throw std::invalid_argument("sqrt_hurwitz: constant term must be 1");
    int N = h.prec();
    std::vector<MuPoly> phi(static_cast<std::size_t>(std::max(N, 0)) + 1);
    phi[0] = MuPoly::one();
    MuTermAccumulator acc;
    for (int n = 1; n <= N; ++n) {
        acc.add(h.coeff(n));
        for (int k = 1; k < n; ++k) {
            if (phi[static_cast<std::size_t>(k)].is_zero() ||
                phi[static_cast<std::size_t>(n - k)].is_zero())
                continue;
            acc.add_product(phi[static_cast<std::size_t>(k)],
                            phi[static_cast<std::size_t>(n - k)], -1);
        }
        phi[static_cast<std::size_t>(n)] = acc.consolidate().scaled(make_rat(1, 2));
    }
    LSeries r(h.var(), N);
    for (int n = 0; n <= N; ++n)
        if (!phi[static_cast<std::size_t>(n)].is_zero()) r.set_coeff(n, phi[static_cast<std::size_t>(n)]);
    return r;
}

// Hurwitz integrality of a power series: classifies n! * (coefficient of
// u^n) for every certified n.
struct HurwitzReport {
    IntegralityClass overall = IntegralityClass::ZMu;
    std::vector<IntegralityClass> per_index;           // index n -> class
    std::optional<int> first_not_zmu;                  // and witnesses
    MuExpo witness_not_zmu = 0;
    std::optional<int> first_not_zhalf;
    MuExpo witness_not_zhalf = 0;
};

inline HurwitzReport hurwitz_report(const LSeries& a) {
    if (a.valuation() < 0)
        throw std::invalid_argument("hurwitz_report: series has a principal part");
    HurwitzReport rep;
    rep.per_index.resize(static_cast<std::size_t>(std::max(a.prec(), -1)) + 1,
                         IntegralityClass::ZMu);
    for (int n = 0; n <= a.prec(); ++n) {
        const MuPoly& c = a.coeff(n);
        if (c.is_zero()) continue;
        MuPoly hn = c.scaled(Rat(factorial(n)));
        IntegralityResult ir = hn.integrality();
        rep.per_index[static_cast<std::size_t>(n)] = ir.cls;
        if (ir.cls != IntegralityClass::ZMu && !rep.first_not_zmu) {
            rep.first_not_zmu = n;
            rep.witness_not_zmu = ir.witness;
        }
        if (ir.cls == IntegralityClass::Neither && !rep.first_not_zhalf) {
            rep.first_not_zhalf = n;
            rep.witness_not_zhalf = ir.witness;
        }
        if (static_cast<int>(ir.cls) > static_cast<int>(rep.overall)) rep.overall = ir.cls;
    }
    return rep;
}

}  // namespace sigmaforge

#endif
