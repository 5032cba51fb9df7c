#ifndef SIGMAFORGE_BISERIES_HPP
#define SIGMAFORGE_BISERIES_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sigmaforge/laurent_series.hpp"

namespace sigmaforge {

// Truncated bivariate power series over MuPoly, dense by total-degree
// slab: slab d holds the coefficients of t1^i t2^(d-i) for i = 0..d.
// Only slabs up to the certified total-degree precision are stored; there
// are no negative exponents in this ring (poles are cleared upstream by
// explicit monomial factors).
class BSeries {
  public:
    BSeries(char v1, char v2, int prec)
        : var1_(v1), var2_(v2), prec_(std::max(prec, -1)) {
        rows_.resize(static_cast<std::size_t>(prec_ + 1));
        for (int d = 0; d <= prec_; ++d)
            rows_[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(d) + 1);
    }

    static BSeries zero(char v1, char v2, int prec) { return BSeries(v1, v2, prec); }

    char var1() const { return var1_; }
    char var2() const { return var2_; }
    int prec() const { return prec_; }

    const MuPoly& coeff(int i, int j) const {
        static const MuPoly kZero;
        if (i < 0 || j < 0) return kZero;
        int d = i + j;
        if (d > prec_)
            throw std::invalid_argument("bivariate coefficient beyond certified precision");
        return rows_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
    }

    void set_coeff(int i, int j, MuPoly c) {
        int d = i + j;
        if (d > prec_) return;
        rows_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] = std::move(c);
    }

    void add_coeff(int i, int j, const MuPoly& c) {
        int d = i + j;
        if (d > prec_ || c.is_zero()) return;
        auto& slot = rows_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
        slot = slot + c;
    }

    // Lowest total degree with a nonzero coefficient; prec()+1 if none.
    int valuation() const {
        for (int d = 0; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i)
                if (!rows_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)].is_zero())
                    return d;
        return prec_ + 1;
    }

    bool is_zero() const { return valuation() > prec_; }

    BSeries truncated(int new_prec) const {
        BSeries r(var1_, var2_, std::min(prec_, new_prec));
        for (int d = 0; d <= r.prec_; ++d) r.rows_[static_cast<std::size_t>(d)] = rows_[static_cast<std::size_t>(d)];
        return r;
    }

    BSeries operator-() const {
        BSeries r = *this;
        for (auto& row : r.rows_)
            for (auto& c : row) c = -c;
        return r;
    }

    friend BSeries operator+(const BSeries& a, const BSeries& b) {
        a.check_same_vars(b);
        BSeries r(a.var1_, a.var2_, std::min(a.prec_, b.prec_));
        for (int d = 0; d <= r.prec_; ++d)
            for (int i = 0; i <= d; ++i) {
                MuPoly c = a.coeff(i, d - i) + b.coeff(i, d - i);
                if (!c.is_zero()) r.set_coeff(i, d - i, std::move(c));
            }
        return r;
    }

    friend BSeries operator-(const BSeries& a, const BSeries& b) { return a + (-b); }

    friend BSeries operator*(const BSeries& a, const BSeries& b) {
        a.check_same_vars(b);
        int va = a.valuation(), vb = b.valuation();
        long prec = std::min(static_cast<long>(a.prec_) + vb,
                             static_cast<long>(b.prec_) + va);
        prec = std::min(prec, static_cast<long>(a.prec_) + b.prec_ + 1);
        BSeries r(a.var1_, a.var2_, static_cast<int>(prec));
        MuTermAccumulator acc;
        for (int m = va + vb; m <= r.prec_; ++m)
            for (int i = 0; i <= m; ++i) {
                for (int d1 = std::max(va, m - b.prec_); d1 <= std::min(a.prec_, m - vb); ++d1) {
                    int d2 = m - d1;
                    for (int i1 = std::max(0, i - d2); i1 <= std::min(d1, i); ++i1) {
                        const MuPoly& c1 = a.coeff(i1, d1 - i1);
                        if (c1.is_zero()) continue;
                        const MuPoly& c2 = b.coeff(i - i1, d2 - (i - i1));
                        if (!c2.is_zero()) acc.add_product(c1, c2);
                    }
                }
                if (!acc.empty()) r.set_coeff(i, m - i, acc.consolidate());
            }
        return r;
    }

    BSeries scaled(const Rat& c) const {
        BSeries r(var1_, var2_, prec_);
        if (c == 0) return r;
        for (int d = 0; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i)
                if (!coeff(i, d - i).is_zero()) r.set_coeff(i, d - i, coeff(i, d - i).scaled(c));
        return r;
    }

    BSeries scaled(const MuPoly& m) const {
        BSeries r(var1_, var2_, prec_);
        for (int d = 0; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i)
                if (!coeff(i, d - i).is_zero()) r.set_coeff(i, d - i, coeff(i, d - i) * m);
        return r;
    }

    // Multiply by a univariate series (times var^shift) living in slot
    // `which` (1 or 2). The univariate factor must be regular after the
    // shift.
    BSeries mul_univariate(const LSeries& u, int which, int shift = 0) const {
        int vu = u.valuation() + shift;
        if (vu < 0)
            throw std::invalid_argument("mul_univariate: factor has a pole");
        long prec = std::min(static_cast<long>(prec_) + vu,
                             static_cast<long>(u.prec()) + shift + valuation());
        prec = std::min(prec, static_cast<long>(prec_) + u.prec() + shift + 1);
        BSeries r(var1_, var2_, static_cast<int>(prec));
        MuTermAccumulator acc;
        for (int m = 0; m <= r.prec(); ++m)
            for (int i = 0; i <= m; ++i) {
                int j = m - i;
                int along = which == 1 ? i : j;  // exponent eaten by u
                for (int n = u.valuation(); n <= u.prec() && n + shift <= along; ++n) {
                    int k = n + shift;
                    if (k < 0) continue;
                    int ii = which == 1 ? i - k : i;
                    int jj = which == 1 ? j : j - k;
                    if (ii + jj > prec_) continue;
                    const MuPoly& cu = u.coeff(n);
                    if (cu.is_zero()) continue;
                    const MuPoly& c = coeff(ii, jj);
                    if (!c.is_zero()) acc.add_product(c, cu);
                }
                if (!acc.empty()) r.set_coeff(i, j, acc.consolidate());
            }
        return r;
    }

    BSeries transposed() const {
        BSeries r(var1_, var2_, prec_);
        for (int d = 0; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i)
                if (!coeff(i, d - i).is_zero()) r.set_coeff(d - i, i, coeff(i, d - i));
        return r;
    }

    bool is_symmetric() const {
        for (int d = 0; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i)
                if (!(coeff(i, d - i) == coeff(d - i, i))) return false;
        return true;
    }

    // Restriction to slot `which` = 0, as a univariate series in the other
    // variable.
    LSeries restricted_to_zero(int which) const {
        LSeries r(which == 1 ? var2_ : var1_, prec_);
        for (int d = 0; d <= prec_; ++d) {
            const MuPoly& c = which == 1 ? coeff(0, d) : coeff(d, 0);
            if (!c.is_zero()) r.set_coeff(d, c);
        }
        return r;
    }

    // Diagonal restriction t2 = t1.
    LSeries diagonal(char out_var) const {
        LSeries r(out_var, prec_);
        for (int d = 0; d <= prec_; ++d) {
            MuPoly s;
            for (int i = 0; i <= d; ++i) s = s + coeff(i, d - i);
            if (!s.is_zero()) r.set_coeff(d, std::move(s));
        }
        return r;
    }

    BSeries derivative(int which) const {
        BSeries r(var1_, var2_, prec_ - 1);
        for (int d = 1; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i) {
                const MuPoly& c = coeff(i, d - i);
                if (c.is_zero()) continue;
                int j = d - i;
                if (which == 1 && i >= 1) r.add_coeff(i - 1, j, c.scaled(Rat(i)));
                if (which == 2 && j >= 1) r.add_coeff(i, j - 1, c.scaled(Rat(j)));
            }
        return r;
    }

    // Primitive in one variable, integration constant 0.
    BSeries integrate(int which) const {
        BSeries r(var1_, var2_, prec_ + 1);
        for (int d = 0; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i) {
                const MuPoly& c = coeff(i, d - i);
                if (c.is_zero()) continue;
                int j = d - i;
                if (which == 1)
                    r.set_coeff(i + 1, j, c.scaled(make_rat(1, i + 1)));
                else
                    r.set_coeff(i, j + 1, c.scaled(make_rat(1, j + 1)));
            }
        return r;
    }

    bool equals_to_degree(const BSeries& b, int D) const {
        if (prec_ < D || b.prec_ < D) return false;
        for (int d = 0; d <= D; ++d)
            for (int i = 0; i <= d; ++i)
                if (!(coeff(i, d - i) == b.coeff(i, d - i))) return false;
        return true;
    }

    std::optional<std::pair<int, int>> first_difference(const BSeries& b, int D) const {
        for (int d = 0; d <= D; ++d)
            for (int i = 0; i <= d; ++i)
                if (!(coeff(i, d - i) == b.coeff(i, d - i))) return std::make_pair(i, d - i);
        return std::nullopt;
    }

    // Coefficient of t1^i t2^j must be homogeneous of weight i + j + label.
    std::optional<std::pair<int, int>> weight_violation(int label) const {
        for (int d = 0; d <= prec_; ++d)
            for (int i = 0; i <= d; ++i) {
                const MuPoly& c = coeff(i, d - i);
                if (c.is_zero()) continue;
                if (!c.is_homogeneous_of_weight(d + label)) return std::make_pair(i, d - i);
            }
        return std::nullopt;
    }

  private:
    void check_same_vars(const BSeries& b) const {
        if (var1_ != b.var1_ || var2_ != b.var2_)
            throw std::invalid_argument("bivariate variable mismatch");
    }

    char var1_, var2_;
    int prec_;
    std::vector<std::vector<MuPoly>> rows_;
};

// Embeds a univariate series into slot `which` of a bivariate ring.
inline BSeries embed(const LSeries& u, int which, char v1, char v2, int cap) {
    if (u.valuation() < 0) throw std::invalid_argument("embed: principal part present");
    BSeries r(v1, v2, std::min(u.prec(), cap));
    for (int n = std::max(0, u.lo()); n <= r.prec(); ++n) {
        const MuPoly& c = u.coeff(n);
        if (c.is_zero()) continue;
        if (which == 1)
            r.set_coeff(n, 0, c);
        else
            r.set_coeff(0, n, c);
    }
    return r;
}

// Outer product (v1^shift1 * a(v1)) x (v2^shift2 * b(v2)), truncated at
// total degree cap. Both shifted factors must be regular.
inline BSeries outer_product(const LSeries& a, const LSeries& b, int shift1, int shift2,
                             char v1, char v2, int cap) {
    int va = a.valuation() + shift1, vb = b.valuation() + shift2;
    if (va < 0 || vb < 0)
        throw std::invalid_argument("outer_product: factor has a pole after shift");
    long prec = std::min({static_cast<long>(a.prec()) + shift1 + vb,
                          static_cast<long>(b.prec()) + shift2 + va,
                          static_cast<long>(cap)});
    BSeries r(v1, v2, static_cast<int>(prec));
    for (int n1 = a.valuation(); n1 <= a.prec(); ++n1) {
        int i = n1 + shift1;
        if (i > r.prec()) break;
        const MuPoly& ca = a.coeff(n1);
        if (ca.is_zero()) continue;
        for (int n2 = b.valuation(); n2 <= b.prec(); ++n2) {
            int j = n2 + shift2;
            if (i + j > r.prec()) break;
            const MuPoly& cb = b.coeff(n2);
            if (!cb.is_zero()) r.add_coeff(i, j, ca * cb);
        }
    }
    return r;
}

// Quotient by (t1 - t2) of a series vanishing on the diagonal. The
// leftover equation at each degree is exactly the diagonal-vanishing
// condition, checked as we go; failure signals an upstream algebra bug.
inline BSeries diagonal_divide(const BSeries& g) {
    BSeries q(g.var1(), g.var2(), g.prec() - 1);
    for (int m = 0; m <= q.prec(); ++m) {
        // g[i+1, j] = q[i, j] - q[i+1, j-1]
        q.set_coeff(m, 0, g.coeff(m + 1, 0));
        for (int i = m - 1; i >= 0; --i) {
            MuPoly c = g.coeff(i + 1, m - i) + q.coeff(i + 1, m - i - 1);
            if (!c.is_zero()) q.set_coeff(i, m - i, std::move(c));
        }
        MuPoly residual = g.coeff(0, m + 1) + q.coeff(0, m);
        if (!residual.is_zero())
            throw std::logic_error("diagonal_divide: series does not vanish on the diagonal at degree " +
                                   std::to_string(m + 1));
    }
    return q;
}

// Exact division by a series whose lowest slab is the linear form
// a*t1 + b*t2 with a an invertible rational. Solved slab by slab with a
// consistency check at every degree.
inline BSeries divide_linear_lead(const BSeries& g, const BSeries& d) {
    if (d.valuation() != 1)
        throw std::invalid_argument("divide_linear_lead: divisor valuation must be 1");
    const MuPoly& a1 = d.coeff(1, 0);
    const MuPoly& b1 = d.coeff(0, 1);
    if (!a1.is_unit())
        throw std::invalid_argument("divide_linear_lead: t1 coefficient must be a rational unit");
    Rat a0 = a1.constant_term();
    int vg = g.valuation();
    if (vg < 1) throw std::logic_error("divide_linear_lead: dividend valuation too small");
    int vq = vg - 1;
    long prec = std::min(static_cast<long>(g.prec()), static_cast<long>(d.prec()) + vq) - 1;
    BSeries q(g.var1(), g.var2(), static_cast<int>(prec));
    MuTermAccumulator acc;
    for (int m = vq; m <= q.prec(); ++m) {
        // rhs_{m+1} = g_{m+1} - sum_{k >= 2} d_k q_{m+1-k}
        std::vector<MuPoly> rhs(static_cast<std::size_t>(m) + 2);
        for (int ii = 0; ii <= m + 1; ++ii) {
            acc.add(g.coeff(ii, m + 1 - ii));
            for (int k = 2; k <= m + 1 - vq && k <= d.prec(); ++k)
                for (int i2 = std::max(0, ii - (m + 1 - k)); i2 <= std::min(k, ii); ++i2) {
                    const MuPoly& dk = d.coeff(i2, k - i2);
                    if (dk.is_zero()) continue;
                    const MuPoly& qk = q.coeff(ii - i2, m + 1 - k - (ii - i2));
                    if (!qk.is_zero()) acc.add_product(dk, qk, -1);
                }
            rhs[static_cast<std::size_t>(ii)] = acc.consolidate();
        }
        // back-substitute a*q[i-1, j] + b*q[i, j-1] = rhs[i]
        q.set_coeff(m, 0, rhs[static_cast<std::size_t>(m) + 1].scaled(1 / a0));
        for (int i = m - 1; i >= 0; --i) {
            MuPoly t = rhs[static_cast<std::size_t>(i) + 1];
            if (!b1.is_zero() && !q.coeff(i + 1, m - i - 1).is_zero())
                t = t - b1 * q.coeff(i + 1, m - i - 1);
            if (!t.is_zero()) q.set_coeff(i, m - i, t.scaled(1 / a0));
        }
        MuPoly residual = rhs[0];
        if (!b1.is_zero() && !q.coeff(0, m).is_zero()) residual = residual - b1 * q.coeff(0, m);
        if (!residual.is_zero())
            throw std::logic_error("divide_linear_lead: inexact division at degree " +
                                   std::to_string(m + 1));
    }
    return q;
}

// Division by a series with unit constant term.
inline BSeries divide_unit(const BSeries& g, const BSeries& d) {
    const MuPoly& c0 = d.coeff(0, 0);
    if (!c0.is_unit())
        throw std::invalid_argument("divide_unit: divisor constant term must be a rational unit");
    Rat a0 = c0.constant_term();
    long prec = std::min(static_cast<long>(g.prec()),
                         static_cast<long>(d.prec()) + g.valuation());
    BSeries q(g.var1(), g.var2(), static_cast<int>(prec));
    MuTermAccumulator acc;
    for (int m = 0; m <= q.prec(); ++m)
        for (int i = 0; i <= m; ++i) {
            if (m <= g.prec()) acc.add(g.coeff(i, m - i));
            for (int k = 1; k <= m && k <= d.prec(); ++k)
                for (int i2 = 0; i2 <= std::min(k, i); ++i2) {
                    const MuPoly& dk = d.coeff(i2, k - i2);
                    if (dk.is_zero()) continue;
                    if (m - i - (k - i2) < 0) continue;
                    const MuPoly& qk = q.coeff(i - i2, m - i - (k - i2));
                    if (!qk.is_zero()) acc.add_product(dk, qk, -1);
                }
            MuPoly t = acc.consolidate();
            if (!t.is_zero()) q.set_coeff(i, m - i, t.scaled(1 / a0));
        }
    return q;
}

// Euler-operator recurrence for exp: if E = exp(a) and theta is
// t1 d/dt1 + t2 d/dt2, then theta(E) = theta(a) E slab by slab.
inline BSeries exp_series(const BSeries& a) {
    if (a.valuation() < 1)
        throw std::invalid_argument("exp_series: constant term must vanish");
    BSeries e(a.var1(), a.var2(), a.prec());
    e.set_coeff(0, 0, MuPoly::one());
    MuTermAccumulator acc;
    for (int n = 1; n <= e.prec(); ++n) {
        // n * E_n = sum_{k=1..n} k * a_k (*) E_{n-k}   (slab product)
        for (int i = 0; i <= n; ++i) {
            for (int k = 1; k <= n; ++k)
                for (int i1 = std::max(0, i - (n - k)); i1 <= std::min(k, i); ++i1) {
                    const MuPoly& ak = a.coeff(i1, k - i1);
                    if (ak.is_zero()) continue;
                    const MuPoly& en = e.coeff(i - i1, n - k - (i - i1));
                    if (!en.is_zero()) acc.add_product_scaled(ak, en, Rat(k));
                }
            MuPoly s = acc.consolidate();
            if (!s.is_zero()) e.set_coeff(i, n - i, s.scaled(make_rat(1, n)));
        }
    }
    return e;
}

inline BSeries log_series(const BSeries& h) {
    if (!(h.coeff(0, 0) == MuPoly::one()))
        throw std::invalid_argument("log_series: constant term must be 1");
    BSeries l(h.var1(), h.var2(), h.prec());
    MuTermAccumulator acc;
    for (int n = 1; n <= l.prec(); ++n) {
        // n * h_n = sum_{k=1..n} k * L_k (*) h_{n-k}; solve for L_n.
        for (int i = 0; i <= n; ++i) {
            acc.add(h.coeff(i, n - i).scaled(Rat(n)));
            for (int k = 1; k < n; ++k)
                for (int i1 = std::max(0, i - (n - k)); i1 <= std::min(k, i); ++i1) {
                    const MuPoly& lk = l.coeff(i1, k - i1);
                    if (lk.is_zero()) continue;
                    const MuPoly& hn = h.coeff(i - i1, n - k - (i - i1));
                    if (!hn.is_zero()) acc.add_product_scaled(lk, hn, Rat(-k));
                }
            MuPoly s = acc.consolidate();
            if (!s.is_zero()) l.set_coeff(i, n - i, s.scaled(make_rat(1, n)));
        }
    }
    return l;
}

// B(f(.), g(.)) where f and g are regular univariate series with positive
// valuation, each tagged with the variable it lives in. When the tags
// differ the result is bivariate (slot 1 -> f's variable).
inline BSeries substitute_bi(const BSeries& B, const LSeries& f, const LSeries& g) {
    if (f.var() == g.var())
        throw std::invalid_argument("substitute_bi: replacement variables must differ");
    if (f.valuation() < 1 || g.valuation() < 1)
        throw std::invalid_argument("substitute_bi: replacements must have positive valuation");
    int v = std::min(f.valuation(), g.valuation());
    long prec = static_cast<long>(B.prec() + 1) * v - 1;
    prec = std::min({prec, static_cast<long>(f.prec()), static_cast<long>(g.prec())});
    int P = static_cast<int>(prec);
    BSeries r(f.var(), g.var(), P);
    // powers of f and g, truncated at P
    std::vector<LSeries> gp, fp;
    gp.push_back(LSeries::constant(g.var(), MuPoly::one(), P));
    fp.push_back(LSeries::constant(f.var(), MuPoly::one(), P));
    for (int k = 1; k <= B.prec(); ++k) {
        gp.push_back((gp.back() * g).truncated(P));
        fp.push_back((fp.back() * f).truncated(P));
    }
    // inner_j = sum_i B[i,j] f^i, assembled one output coefficient at a time
    std::vector<LSeries> inner;
    MuTermAccumulator acc;
    for (int j = 0; j <= B.prec(); ++j) {
        LSeries in(f.var(), P);
        for (int n = 0; n <= P; ++n) {
            for (int i = 0; i + j <= B.prec(); ++i) {
                const MuPoly& c = B.coeff(i, j);
                if (c.is_zero()) continue;
                const MuPoly& fc = fp[static_cast<std::size_t>(i)].coeff(n);
                if (!fc.is_zero()) acc.add_product(c, fc);
            }
            if (!acc.empty()) in.set_coeff(n, acc.consolidate());
        }
        inner.push_back(std::move(in));
    }
    // r[n,m] = sum_j inner_j[n] * (g^j)[m]
    for (int n = 0; n <= P; ++n)
        for (int m = 0; n + m <= P; ++m) {
            for (int j = 0; j <= B.prec(); ++j) {
                const MuPoly& a = inner[static_cast<std::size_t>(j)].coeff(n);
                if (a.is_zero()) continue;
                const MuPoly& b = gp[static_cast<std::size_t>(j)].coeff(m);
                if (!b.is_zero()) acc.add_product(a, b);
            }
            if (!acc.empty()) r.set_coeff(n, m, acc.consolidate());
        }
    return r;
}

// Same but both replacements live in one variable; the result is
// univariate.
inline LSeries substitute_uni(const BSeries& B, const LSeries& f, const LSeries& g) {
    if (f.var() != g.var())
        throw std::invalid_argument("substitute_uni: replacement variables must agree");
    bool fz = f.is_zero(), gz = g.is_zero();
    if ((!fz && f.valuation() < 1) || (!gz && g.valuation() < 1))
        throw std::invalid_argument("substitute_uni: replacements must have positive valuation");
    int v = std::min(fz ? B.prec() + 1 : f.valuation(), gz ? B.prec() + 1 : g.valuation());
    v = std::max(v, 1);
    long prec = static_cast<long>(B.prec() + 1) * v - 1;
    prec = std::min(prec, static_cast<long>(std::min(f.prec(), g.prec())));
    int P = static_cast<int>(prec);
    LSeries r(f.var(), P);
    std::vector<LSeries> gp, fp;
    gp.push_back(LSeries::constant(g.var(), MuPoly::one(), P));
    fp.push_back(LSeries::constant(f.var(), MuPoly::one(), P));
    for (int k = 1; k <= B.prec(); ++k) {
        gp.push_back((gp.back() * g).truncated(P));
        fp.push_back((fp.back() * f).truncated(P));
    }
    MuTermAccumulator acc;
    std::vector<LSeries> inner;
    for (int j = 0; j <= B.prec(); ++j) {
        LSeries in(f.var(), P);
        for (int n = 0; n <= P; ++n) {
            for (int i = 0; i + j <= B.prec(); ++i) {
                const MuPoly& c = B.coeff(i, j);
                if (c.is_zero()) continue;
                const MuPoly& fc = fp[static_cast<std::size_t>(i)].coeff(n);
                if (!fc.is_zero()) acc.add_product(c, fc);
            }
            if (!acc.empty()) in.set_coeff(n, acc.consolidate());
        }
        inner.push_back(std::move(in));
    }
    for (int n = 0; n <= P; ++n) {
        for (int j = 0; j <= B.prec(); ++j) {
            const LSeries& in = inner[static_cast<std::size_t>(j)];
            const LSeries& gj = gp[static_cast<std::size_t>(j)];
            for (int k = std::max(0, n - gj.prec()); k <= n; ++k) {
                const MuPoly& a = in.coeff(k);
                if (a.is_zero()) continue;
                const MuPoly& b = gj.coeff(n - k);
                if (!b.is_zero()) acc.add_product(a, b);
            }
        }
        if (!acc.empty()) r.set_coeff(n, acc.consolidate());
    }
    return r;
}

// sigma(u +/- v)-style embedding: maps sum_n c_n w^n to the bivariate
// series with w = u + sign*v, via binomials.
inline BSeries embed_binomial(const LSeries& a, int sign, char v1, char v2, int cap) {
    if (a.valuation() < 0)
        throw std::invalid_argument("embed_binomial: principal part present");
    BSeries r(v1, v2, std::min(a.prec(), cap));
    for (int n = std::max(0, a.lo()); n <= r.prec(); ++n) {
        const MuPoly& c = a.coeff(n);
        if (c.is_zero()) continue;
        for (int i = 0; i <= n; ++i) {
            Rat factor(binomial(n, i));
            if (sign < 0 && ((n - i) % 2)) factor = -factor;
            r.add_coeff(i, n - i, c.scaled(factor));
        }
    }
    return r;
}

}  // namespace sigmaforge

#endif
