#ifndef SIGMAFORGE_DIVISION_HPP
#define SIGMAFORGE_DIVISION_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sigmaforge/sigma.hpp"
#include "sigmaforge/xy_poly.hpp"

namespace sigmaforge {

// The n-plication polynomial psi_n = sigma(nu)/sigma(u)^{n^2} written as a
// canonical polynomial in (x, y) with y-degree <= 1.
struct PsiPoly {
    int n = 1;
    XYPoly poly;

    friend bool operator==(const PsiPoly& a, const PsiPoly& b) {
        return a.n == b.n && a.poly == b.poly;
    }
};

// sigma(n u)/sigma(u)^{n^2} as a Laurent series with pole order n^2 - 1.
inline LSeries psi_series(const SigmaKit& kit, int n) {
    if (n < 1) throw std::invalid_argument("psi_series: n must be >= 1");
    const LSeries& sig = kit.sigma();
    if (kit.order() < n * n + 2)
        throw std::invalid_argument("psi_series: sigma precision " +
                                    std::to_string(kit.order()) + " too low for n = " +
                                    std::to_string(n) + " (need >= n^2 + 2)");
    LSeries sig_nu = sig.var_scaled(Rat(n));
    LSeries inv = invert_unit(sig.shifted(-1));  // 1/(sigma/u)
    LSeries pw = LSeries::constant('u', MuPoly::one(), inv.prec());
    int left = n * n;
    LSeries base = inv;
    while (left > 0) {  // binary powering, truncating along the way
        if (left & 1) pw = (pw * base).truncated(inv.prec());
        left >>= 1;
        if (left) base = (base * base).truncated(inv.prec());
    }
    return (sig_nu * pw).shifted(-(n * n));
}

// Greedy pole stripping: subtracts multiples of x^a y^b (b in {0,1},
// 2a + 3b = pole order) until the series vanishes to precision. A nonzero
// remainder means the sigma pipeline and the n-plication shape disagree.
inline PsiPoly reduce_to_xy(const LSeries& series, int n, const SigmaKit& kit) {
    if (series.valuation() != -(n * n - 1) && n > 1)
        throw std::invalid_argument("reduce_to_xy: pole order is not n^2 - 1");
    const LSeries& xu = kit.x_u();
    const LSeries& yu = kit.y_u();
    PsiPoly out;
    out.n = n;
    // power cache for x^a and x^a y
    std::vector<LSeries> xpow;
    xpow.push_back(LSeries::constant('u', MuPoly::one(), xu.prec() + 2 * ((n * n + 1) / 2)));
    int amax = n % 2 ? (n * n - 1) / 2 : (n * n - 2) / 2;
    for (int a = 1; a <= amax; ++a) xpow.push_back(xpow.back() * xu);
    LSeries cur = series;
    while (true) {
        int v = cur.valuation();
        if (v > cur.prec() || v > 0) break;
        int m = -v;
        int a, b;
        if (m == 0) {
            a = 0; b = 0;
        } else if (m == 1) {
            throw std::logic_error("reduce_to_xy: impossible pole order 1");
        } else if (m % 2 == 0) {
            a = m / 2; b = 0;
        } else {
            a = (m - 3) / 2; b = 1;
        }
        // x^a y^b has leading coefficient (-1)^b at u^-m
        MuPoly c = b ? -cur.coeff(v) : cur.coeff(v);
        out.poly.add(a, b, c);
        LSeries pw = b ? xpow[static_cast<std::size_t>(a)] * yu
                       : xpow[static_cast<std::size_t>(a)];
        cur = cur - pw.scaled(c);
        if (m == 0) break;
    }
    if (!cur.is_zero())
        throw std::logic_error("reduce_to_xy: nonzero remainder at order " +
                               std::to_string(cur.valuation()) +
                               " -- sigma pipeline and psi shape disagree");
    return out;
}

// Tabulated closed formulas for the coefficients C_j. Odd n: Eq-402-style
// table for j <= 6; even n: j <= 5. C_j is weight-homogeneous of weight j.
inline MuPoly cj_formula(int n, int j) {
    MuPoly m1 = MuPoly::gen(1), m2 = MuPoly::gen(2), m3 = MuPoly::gen(3),
           m4 = MuPoly::gen(4), m6 = MuPoly::gen(6);
    Rat N(n);
    Rat n2 = N * N;
    if (n % 2 == 1) {
        Rat f1 = N * (n2 - 1);
        Rat f3 = f1 * (n2 - 9);
        Rat f5 = f3 * (n2 - 25);
        Rat g = f1 * (n2 * n2 + n2 + 15);
        switch (j) {
            case 1: case 3: case 5: return MuPoly();
            case 2:
                return (m1 * m1).scaled(f1 / 24) + m2.scaled(f1 / 6);
            case 4:
                return (m1 * m1 * m1 * m1).scaled(f3 / 1920) +
                       (m2 * m1 * m1).scaled(f3 / 240) +
                       (m3 * m1).scaled(f1 * (n2 + 6) / 120) +
                       (m2 * m2).scaled(f3 / 120) + m4.scaled(f1 * (n2 + 6) / 60);
            case 6:
                return (m1 * m1 * m1 * m1 * m1 * m1).scaled(f5 / 322560) +
                       (m2 * m1 * m1 * m1 * m1).scaled(f5 / 26880) +
                       (m3 * m1 * m1 * m1).scaled(f3 * (n2 + 10) / 6720) +
                       (m2 * m2 * m1 * m1).scaled(f5 / 6720) +
                       (m4 * m1 * m1).scaled(f3 * (n2 + 10) / 3360) +
                       (m3 * m2 * m1).scaled(f3 * (n2 + 10) / 1680) +
                       (m2 * m2 * m2).scaled(f5 / 5040) +
                       (m4 * m2).scaled(f3 * (n2 + 10) / 840) +
                       (m3 * m3).scaled(g / 840) + m6.scaled(g / 210);
            default:
                throw std::invalid_argument("cj_formula: odd n tabulates j <= 6");
        }
    }
    Rat e2 = N * (n2 - 4);
    Rat e4 = e2 * (n2 - 16);
    switch (j) {
        case 1: return m1.scaled(-N / 2);
        case 2: return (m1 * m1).scaled(-e2 / 24) + m2.scaled(-e2 / 6);
        case 3:
            return (m1 * m1 * m1).scaled(-e2 / 48) + (m2 * m1).scaled(-e2 / 12) +
                   m3.scaled(-N / 2);
        case 4:
            return (m1 * m1 * m1 * m1).scaled(-e4 / 1920) +
                   (m2 * m1 * m1).scaled(-e4 / 240) +
                   (m3 * m1).scaled(-e2 * (n2 + 9) / 120) +
                   (m2 * m2).scaled(-e4 / 120) + m4.scaled(-e2 * (n2 + 9) / 60);
        case 5:
            return (m1 * m1 * m1 * m1 * m1).scaled(-e4 / 3840) +
                   (m2 * m1 * m1 * m1).scaled(-e4 / 480) +
                   (m3 * m1 * m1).scaled(-e2 * (n2 + 14) / 240) +
                   (m2 * m2 * m1).scaled(-e4 / 240) +
                   (m4 * m1).scaled(-e2 * (n2 + 9) / 120) + (m3 * m2).scaled(-e2 / 12);
        default:
            throw std::invalid_argument("cj_formula: even n tabulates j <= 5");
    }
}

// Standard division-polynomial recurrence on the general Weierstrass
// model, reduced to y-degree <= 1 modulo the curve. Even entries divide
// exactly by psi_2 via psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
class DivisionPolynomials {
  public:
    explicit DivisionPolynomials(const CurveParams& params) : params_(params) {
        Invariants inv = invariants_D(params);
        b2_ = inv.b2; b4_ = inv.b4; b6_ = inv.b6; b8_ = inv.b8;
        psi_.resize(5);
        psi_[0] = XYPoly();                 // psi_0 = 0
        psi_[1] = XYPoly::constant(MuPoly::one());
        XYPoly fy;                          // psi_2 = 2y + mu1 x + mu3
        fy.add(0, 1, MuPoly::constant(Rat(2)));
        fy.add(1, 0, params.mu(1));
        fy.add(0, 0, params.mu(3));
        psi_[2] = fy;
        XYPoly p3;                          // 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8
        p3.add(4, 0, MuPoly::constant(Rat(3)));
        p3.add(3, 0, b2_);
        p3.add(2, 0, b4_.scaled(Rat(3)));
        p3.add(1, 0, b6_.scaled(Rat(3)));
        p3.add(0, 0, b8_);
        psi_[3] = p3;
        XYPoly g;  // psi_4 = psi_2 * (2x^6 + b2 x^5 + 5b4 x^4 + 10b6 x^3 + 10b8 x^2 + ...)
        g.add(6, 0, MuPoly::constant(Rat(2)));
        g.add(5, 0, b2_);
        g.add(4, 0, b4_.scaled(Rat(5)));
        g.add(3, 0, b6_.scaled(Rat(10)));
        g.add(2, 0, b8_.scaled(Rat(10)));
        g.add(1, 0, b2_ * b8_ - b4_ * b6_);
        g.add(0, 0, b4_ * b8_ - b6_ * b6_);
        psi_[4] = (psi_[2] * g).reduced_mod_curve(params_.mu_array());
    }

    // psi_n in canonical y-degree <= 1 form.
    const XYPoly& psi(int n) {
        if (n < 0) throw std::invalid_argument("psi index must be >= 0");
        while (static_cast<int>(psi_.size()) <= n) grow();
        return psi_[static_cast<std::size_t>(n)];
    }

    PsiPoly oracle(int n) {
        PsiPoly p;
        p.n = n;
        p.poly = psi(n);
        return p;
    }

  private:
    void grow() {
        int n = static_cast<int>(psi_.size());
        if (n % 2 == 1) {
            int m = (n - 1) / 2;  // n = 2m + 1
            XYPoly t = psi(m + 2) * psi(m) * psi(m) * psi(m) -
                       psi(m - 1) * psi(m + 1) * psi(m + 1) * psi(m + 1);
            psi_.push_back(t.reduced_mod_curve(params_.mu_array()));
        } else {
            int m = n / 2;  // psi_2 psi_2m = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2)
            XYPoly t = psi(m) * (psi(m + 2) * psi(m - 1) * psi(m - 1) -
                                 psi(m - 2) * psi(m + 1) * psi(m + 1));
            // multiply by psi_2 and divide by psi_2^2 = B(x), exactly
            XYPoly q = (psi_[2] * t).reduced_mod_curve(params_.mu_array());
            psi_.push_back(divide_by_B(q));
        }
    }

    // Exact division of a y-degree <= 1 polynomial by B(x) = 4x^3 + b2 x^2
    // + 2 b4 x + b6, coefficient-wise in x.
    XYPoly divide_by_B(const XYPoly& q) {
        std::map<int, MuPoly> part[2];
        int deg[2] = {-1, -1};
        for (const auto& [k, c] : q.terms()) {
            part[k.second][k.first] = c;
            deg[k.second] = std::max(deg[k.second], k.first);
        }
        XYPoly out;
        for (int b = 0; b < 2; ++b) {
            std::map<int, MuPoly> rem = part[b];
            int d = deg[b];
            while (d >= 3) {
                auto it = rem.find(d);
                if (it == rem.end() || it->second.is_zero()) { --d; continue; }
                MuPoly lead = it->second.scaled(make_rat(1, 4));
                out.add(d - 3, b, lead);
                // rem -= lead * x^{d-3} * B(x)
                sub(rem, d, lead.scaled(Rat(4)));
                sub(rem, d - 1, lead * b2_);
                sub(rem, d - 2, lead * b4_.scaled(Rat(2)));
                sub(rem, d - 3, lead * b6_);
            }
            for (const auto& [a, c] : rem)
                if (!c.is_zero())
                    throw std::logic_error("division polynomial recurrence: psi_2 does not divide");
        }
        return out;
    }

    static void sub(std::map<int, MuPoly>& m, int key, const MuPoly& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = m.try_emplace(key, -c);
        if (!inserted) {
            it->second = it->second - c;
            if (it->second.is_zero()) m.erase(it);
        }
    }

    CurveParams params_;
    MuPoly b2_, b4_, b6_, b8_;
    std::vector<XYPoly> psi_;
};

inline PsiPoly classical_oracle(const CurveParams& params, int n) {
    DivisionPolynomials dp(params);
    return dp.oracle(n);
}

// ---------------------------------------------------------------------
// Chord-tangent group law on the affine model, for numeric parameters.
// ---------------------------------------------------------------------

struct AffinePoint {
    Rat x, y;
    friend bool operator==(const AffinePoint& a, const AffinePoint& b) {
        return a.x == b.x && a.y == b.y;
    }
};

// The point at infinity is nullopt.
using ECPoint = std::optional<AffinePoint>;

inline bool on_curve(const CurveParams& cp, const AffinePoint& P) {
    const auto& m = cp.values();
    Rat lhs = P.y * P.y + (m[0] * P.x + m[2]) * P.y;
    Rat rhs = P.x * P.x * P.x + m[1] * P.x * P.x + m[3] * P.x + m[4];
    return lhs == rhs;
}

inline ECPoint ec_negate(const CurveParams& cp, const ECPoint& P) {
    if (!P) return P;
    const auto& m = cp.values();
    return AffinePoint{P->x, -P->y - m[0] * P->x - m[2]};
}

inline ECPoint ec_add(const CurveParams& cp, const ECPoint& P, const ECPoint& Q) {
    if (!P) return Q;
    if (!Q) return P;
    const auto& m = cp.values();
    Rat a1 = m[0], a2 = m[1], a3 = m[2], a4 = m[3];
    Rat lambda, nu;
    if (P->x == Q->x) {
        if (Q->y == -P->y - a1 * P->x - a3) return std::nullopt;  // P + (-P)
        Rat den = Rat(2) * P->y + a1 * P->x + a3;
        lambda = (Rat(3) * P->x * P->x + Rat(2) * a2 * P->x + a4 - a1 * P->y) / den;
        nu = P->y - lambda * P->x;
    } else {
        lambda = (Q->y - P->y) / (Q->x - P->x);
        nu = P->y - lambda * P->x;
    }
    Rat x3 = lambda * lambda + a1 * lambda - a2 - P->x - Q->x;
    Rat y3 = -(lambda + a1) * x3 - nu - a3;
    return AffinePoint{x3, y3};
}

inline ECPoint ec_multiply(const CurveParams& cp, int n, const ECPoint& P) {
    if (n < 0) return ec_negate(cp, ec_multiply(cp, -n, P));
    ECPoint acc = std::nullopt, base = P;
    while (n > 0) {
        if (n & 1) acc = ec_add(cp, acc, base);
        base = ec_add(cp, base, base);
        n >>= 1;
    }
    return acc;
}

struct TorsionReport {
    bool point_on_curve = false;
    bool n_torsion_confirmed = false;  // [n]P = O by the group law
    Rat psi_value;
    bool psi_vanishes = false;
    bool ok = false;
};

// Evaluates psi_n at an affine point and cross-checks against the group
// law: psi_n vanishes exactly at the nontrivial n-torsion points.
inline TorsionReport torsion_check(const CurveParams& cp, int n, const AffinePoint& P,
                                   const PsiPoly& psi) {
    TorsionReport rep;
    rep.point_on_curve = on_curve(cp, P);
    if (!rep.point_on_curve) return rep;
    rep.n_torsion_confirmed = !ec_multiply(cp, n, P).has_value();
    rep.psi_value = psi.poly.evaluate(P.x, P.y, cp.values());
    rep.psi_vanishes = rep.psi_value == 0;
    rep.ok = rep.psi_vanishes == rep.n_torsion_confirmed;
    return rep;
}

}  // namespace sigmaforge

#endif
