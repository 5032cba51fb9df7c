#ifndef SIGMAFORGE_XY_POLY_HPP
#define SIGMAFORGE_XY_POLY_HPP

#include <array>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sigmaforge/mu_poly.hpp"

namespace sigmaforge {

// Polynomials in the coordinate functions x, y over Q[mu], reduced modulo
// the curve relation to y-degree <= 1 when asked. Keys are (x-exponent,
// y-exponent); the map order makes printing and comparison deterministic.
class XYPoly {
  public:
    using Key = std::pair<int, int>;

    XYPoly() = default;

    static XYPoly term(int a, int b, MuPoly c) {
        XYPoly p;
        if (!c.is_zero()) p.terms_[{a, b}] = std::move(c);
        return p;
    }

    static XYPoly constant(MuPoly c) { return term(0, 0, std::move(c)); }
    static XYPoly x(int a = 1) { return term(a, 0, MuPoly::one()); }
    static XYPoly y() { return term(0, 1, MuPoly::one()); }

    const std::map<Key, MuPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    MuPoly coeff(int a, int b) const {
        auto it = terms_.find({a, b});
        return it == terms_.end() ? MuPoly() : it->second;
    }

    friend bool operator==(const XYPoly& p, const XYPoly& q) {
        return p.terms_ == q.terms_;
    }

    XYPoly operator-() const {
        XYPoly r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    friend XYPoly operator+(const XYPoly& p, const XYPoly& q) {
        XYPoly r = p;
        for (const auto& [k, c] : q.terms_) r.add(k.first, k.second, c);
        return r;
    }

    friend XYPoly operator-(const XYPoly& p, const XYPoly& q) { return p + (-q); }

    friend XYPoly operator*(const XYPoly& p, const XYPoly& q) {
        XYPoly r;
        for (const auto& [k1, c1] : p.terms_)
            for (const auto& [k2, c2] : q.terms_)
                r.add(k1.first + k2.first, k1.second + k2.second, c1 * c2);
        return r;
    }

    XYPoly scaled(const MuPoly& m) const {
        XYPoly r;
        for (const auto& [k, c] : terms_) r.add(k.first, k.second, c * m);
        return r;
    }

    XYPoly scaled(const Rat& c) const { return scaled(MuPoly::constant(c)); }

    void add(int a, int b, const MuPoly& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace({a, b}, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // Canonical form modulo f = 0: replaces y^2 by
    // -(mu1 x + mu3) y + x^3 + mu2 x^2 + mu4 x + mu6 until y-degree <= 1.
    // The coefficients are (mu1, mu2, mu3, mu4, mu6), symbolic or numeric.
    XYPoly reduced_mod_curve(const std::array<MuPoly, 5>& mu) const {
        XYPoly ysq;
        ysq.add(1, 1, -mu[0]);
        ysq.add(0, 1, -mu[2]);
        ysq.add(3, 0, MuPoly::one());
        ysq.add(2, 0, mu[1]);
        ysq.add(1, 0, mu[3]);
        ysq.add(0, 0, mu[4]);
        XYPoly cur = *this;
        for (;;) {
            XYPoly high, low;
            for (const auto& [k, c] : cur.terms_) {
                if (k.second >= 2)
                    high.add(k.first, k.second, c);
                else
                    low.add(k.first, k.second, c);
            }
            if (high.is_zero()) return low;
            XYPoly next = low;
            for (const auto& [k, c] : high.terms_)
                next = next + term(k.first, k.second - 2, c) * ysq;
            cur = std::move(next);
        }
    }

    XYPoly reduced_mod_curve() const {
        return reduced_mod_curve({MuPoly::gen(1), MuPoly::gen(2), MuPoly::gen(3),
                                  MuPoly::gen(4), MuPoly::gen(6)});
    }

    int y_degree() const {
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }

    int x_degree() const {
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }

    Rat evaluate(const Rat& xv, const Rat& yv, const std::array<Rat, 5>& mu) const {
        Rat acc(0);
        for (const auto& [k, c] : terms_) {
            Rat t = c.evaluate(mu);
            for (int i = 0; i < k.first; ++i) t *= xv;
            for (int i = 0; i < k.second; ++i) t *= yv;
            acc += t;
        }
        return acc;
    }

  private:
    std::map<Key, MuPoly> terms_;
};

// The symmetric pairing polynomial F(x,y;z,w): a polynomial in two points,
// stored as a list of (x^a y^b, z^c w^d, coefficient) triples so it can be
// evaluated on pairs of series expansions.
struct PairTerm {
    int a, b, c, d;
    MuPoly coeff;
};

inline std::vector<PairTerm> pairing_F_terms(const std::array<MuPoly, 5>& mu) {
    const MuPoly &mu1 = mu[0], &mu2 = mu[1], &mu3 = mu[2], &mu4 = mu[3], &mu6 = mu[4];
    std::vector<PairTerm> t;
    t.push_back({2, 0, 1, 0, MuPoly::one()});            // x^2 z
    t.push_back({1, 0, 2, 0, MuPoly::one()});            // x z^2
    t.push_back({1, 0, 1, 0, mu1 * mu1 + Rat(2) * mu2}); // (mu1^2 + 2 mu2) xz
    t.push_back({0, 1, 1, 0, mu1});                      // mu1 z y
    t.push_back({1, 0, 0, 1, mu1});                      // mu1 x w
    t.push_back({1, 0, 0, 0, mu3 * mu1 + mu4});          // (mu3 mu1 + mu4) x
    t.push_back({0, 0, 1, 0, mu3 * mu1 + mu4});          // (mu3 mu1 + mu4) z
    t.push_back({0, 1, 0, 1, MuPoly::constant(Rat(2))}); // 2 y w
    t.push_back({0, 1, 0, 0, mu3});                      // mu3 y
    t.push_back({0, 0, 0, 1, mu3});                      // mu3 w
    t.push_back({0, 0, 0, 0, mu3 * mu3 + Rat(2) * mu6}); // mu3^2 + 2 mu6
    return t;
}

inline std::vector<PairTerm> pairing_F_terms() {
    return pairing_F_terms({MuPoly::gen(1), MuPoly::gen(2), MuPoly::gen(3),
                            MuPoly::gen(4), MuPoly::gen(6)});
}

// F with both points identified, as an XYPoly (used to check that
// F(x,y;x,y) reduces to f_y^2 modulo the curve).
inline XYPoly pairing_F_diagonal() {
    XYPoly p;
    for (const auto& t : pairing_F_terms()) p.add(t.a + t.c, t.b + t.d, t.coeff);
    return p;
}

}  // namespace sigmaforge

#endif
