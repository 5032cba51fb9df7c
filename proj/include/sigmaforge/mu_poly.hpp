#ifndef SIGMAFORGE_MU_POLY_HPP
#define SIGMAFORGE_MU_POLY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sigmaforge/rational.hpp"

namespace sigmaforge {

// Monomials in (mu1, mu2, mu3, mu4, mu6). Exponents are packed into a
// uint64 with 10 bits per variable so that monomial products are plain
// integer additions and lexicographic comparison is integer comparison.
// There is no mu5, matching the curve model.
using MuExpo = std::uint64_t;

namespace detail {
constexpr int kMuShift[5] = {40, 30, 20, 10, 0};
constexpr MuExpo kMuMask = 0x3ff;
constexpr int kMuWeight[5] = {1, 2, 3, 4, 6};
}  // namespace detail

constexpr MuExpo mu_expo(int e1, int e2, int e3, int e4, int e6) {
    return (MuExpo(e1) << 40) | (MuExpo(e2) << 30) | (MuExpo(e3) << 20) |
           (MuExpo(e4) << 10) | MuExpo(e6);
}

inline int mu_expo_get(MuExpo e, int var) {
    return static_cast<int>((e >> detail::kMuShift[var]) & detail::kMuMask);
}

inline std::array<int, 5> mu_expo_unpack(MuExpo e) {
    return {mu_expo_get(e, 0), mu_expo_get(e, 1), mu_expo_get(e, 2),
            mu_expo_get(e, 3), mu_expo_get(e, 4)};
}

// Grading with wt mu_j = j.
inline int mu_weight(MuExpo e) {
    int w = 0;
    for (int v = 0; v < 5; ++v) w += detail::kMuWeight[v] * mu_expo_get(e, v);
    return w;
}

// Canonical term order: graded by weight, then descending lexicographic on
// the exponent vector, so e.g. b2 prints as "mu1^2 + 4*mu2".
inline bool mu_expo_less(MuExpo a, MuExpo b) {
    int wa = mu_weight(a), wb = mu_weight(b);
    if (wa != wb) return wa < wb;
    return a > b;
}

enum class IntegralityClass { ZMu = 0, ZHalfMu1 = 1, Neither = 2 };

inline const char* to_string(IntegralityClass c) {
    switch (c) {
        case IntegralityClass::ZMu: return "Z[mu]";
        case IntegralityClass::ZHalfMu1: return "Z[mu1/2,mu2,mu3,mu4,mu6]";
        default: return "neither";
    }
}

struct IntegralityResult {
    IntegralityClass cls = IntegralityClass::ZMu;
    MuExpo witness = 0;  // monomial that forced the class, when cls != ZMu
};

// Sparse polynomial in Q[mu1,mu2,mu3,mu4,mu6], terms kept in canonical
// order with no zero coefficients. Immutable in spirit: every operation
// returns a fresh value.
class MuPoly {
  public:
    using Term = std::pair<MuExpo, Rat>;

    MuPoly() = default;

    static MuPoly zero() { return MuPoly(); }

    static MuPoly constant(Rat c) {
        MuPoly p;
        if (c != 0) p.terms_.emplace_back(MuExpo(0), std::move(c));
        return p;
    }

    static MuPoly one() { return constant(Rat(1)); }

    // gen(k) is mu_k for k in {1,2,3,4,6}; there is deliberately no mu5.
    static MuPoly gen(int k) {
        int idx;
        switch (k) {
            case 1: idx = 0; break;
            case 2: idx = 1; break;
            case 3: idx = 2; break;
            case 4: idx = 3; break;
            case 6: idx = 4; break;
            default: throw std::invalid_argument("mu index must be 1,2,3,4,6");
        }
        MuPoly p;
        p.terms_.emplace_back(MuExpo(1) << detail::kMuShift[idx], Rat(1));
        return p;
    }

    static MuPoly monomial(MuExpo e, Rat c) {
        MuPoly p;
        if (c != 0) p.terms_.emplace_back(e, std::move(c));
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
    }

    Rat constant_term() const {
        for (const auto& [e, c] : terms_)
            if (e == 0) return c;
        return Rat(0);
    }

    // A nonzero rational multiple of the unit monomial.
    bool is_unit() const {
        return terms_.size() == 1 && terms_[0].first == 0;
    }

    Rat coeff(MuExpo e) const {
        for (const auto& [ee, c] : terms_)
            if (ee == e) return c;
        return Rat(0);
    }

    friend bool operator==(const MuPoly& a, const MuPoly& b) {
        return a.terms_ == b.terms_;
    }

    MuPoly operator-() const {
        MuPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend MuPoly operator+(const MuPoly& a, const MuPoly& b) {
        return merge(a, b, 1);
    }
    friend MuPoly operator-(const MuPoly& a, const MuPoly& b) {
        return merge(a, b, -1);
    }

    friend MuPoly operator*(const MuPoly& a, const MuPoly& b);

    MuPoly scaled(const Rat& c) const {
        if (c == 0) return MuPoly();
        MuPoly r = *this;
        for (auto& [e, cc] : r.terms_) cc *= c;
        return r;
    }

    // Common weight of a homogeneous polynomial, nullopt if mixed.
    // The zero polynomial has no defined weight.
    std::optional<int> weight() const {
        if (terms_.empty())
            throw std::invalid_argument("weight of zero polynomial is undefined");
        int w = mu_weight(terms_.front().first);
        for (const auto& [e, c] : terms_)
            if (mu_weight(e) != w) return std::nullopt;
        return w;
    }

    bool is_homogeneous_of_weight(int w) const {
        for (const auto& [e, c] : terms_)
            if (mu_weight(e) != w) return false;
        return true;
    }

    // Classifies membership in Z[mu] / Z[mu1/2,mu2,mu3,mu4,mu6] / neither.
    // A coefficient c of a monomial with mu1-exponent e1 is admissible in
    // the middle ring iff c * 2^e1 is an integer.
    IntegralityResult integrality() const {
        IntegralityResult r;
        for (const auto& [e, c] : terms_) {
            if (is_integer(c)) continue;
            int v = den_two_valuation(c);
            if (v >= 0 && v <= mu_expo_get(e, 0)) {
                if (r.cls == IntegralityClass::ZMu) {
                    r.cls = IntegralityClass::ZHalfMu1;
                    r.witness = e;
                }
            } else {
                r.cls = IntegralityClass::Neither;
                r.witness = e;
                return r;
            }
        }
        return r;
    }

    Rat evaluate(const std::array<Rat, 5>& mu) const {
        Rat acc(0);
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (int v = 0; v < 5; ++v) {
                int k = mu_expo_get(e, v);
                for (int i = 0; i < k; ++i) t *= mu[v];
            }
            acc += t;
        }
        return acc;
    }

  private:
    friend class MuTermAccumulator;

    static MuPoly merge(const MuPoly& a, const MuPoly& b, int sign) {
        MuPoly r;
        r.terms_.reserve(a.size() + b.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() && ib != b.terms_.end()) {
            if (ia->first == ib->first) {
                Rat c = sign > 0 ? Rat(ia->second + ib->second)
                                 : Rat(ia->second - ib->second);
                if (c != 0) r.terms_.emplace_back(ia->first, std::move(c));
                ++ia;
                ++ib;
            } else if (mu_expo_less(ia->first, ib->first)) {
                r.terms_.push_back(*ia++);
            } else {
                r.terms_.emplace_back(ib->first, sign > 0 ? ib->second : -ib->second);
                ++ib;
            }
        }
        for (; ia != a.terms_.end(); ++ia) r.terms_.push_back(*ia);
        for (; ib != b.terms_.end(); ++ib)
            r.terms_.emplace_back(ib->first, sign > 0 ? ib->second : -ib->second);
        return r;
    }

    std::vector<Term> terms_;
};

// Single-comparison sort key: weight in the high bits, complemented
// exponents below, so that ascending key order is the canonical term
// order (graded by weight, then descending lexicographic exponents).
inline std::uint64_t mu_sort_key(MuExpo e) {
    constexpr std::uint64_t kMask50 = (std::uint64_t(1) << 50) - 1;
    return (static_cast<std::uint64_t>(mu_weight(e)) << 50) | (kMask50 & ~e);
}

// Flat accumulator for the hot loops: raw (monomial, coefficient) pairs
// are appended without any ordering, then consolidated with one sort and
// one fold. This keeps coefficient accumulation linear in the number of
// term products instead of rebuilding polynomials per contribution.
class MuTermAccumulator {
  public:
    void add(const MuPoly& a, int sign = 1) {
        for (const auto& [e, c] : a.terms())
            buf_.emplace_back(e, sign > 0 ? c : Rat(-c));
    }

    void add_product(const MuPoly& a, const MuPoly& b, int sign = 1) {
        for (const auto& [e1, c1] : a.terms())
            for (const auto& [e2, c2] : b.terms()) {
                Rat c = c1 * c2;
                if (sign < 0) c = -c;
                buf_.emplace_back(e1 + e2, std::move(c));
            }
    }

    void add_product_scaled(const MuPoly& a, const MuPoly& b, const Rat& s) {
        for (const auto& [e1, c1] : a.terms())
            for (const auto& [e2, c2] : b.terms())
                buf_.emplace_back(e1 + e2, Rat(c1 * c2 * s));
    }

    bool empty() const { return buf_.empty(); }

    // Sorts, folds equal monomials, prunes zeros, and resets the buffer.
    MuPoly consolidate() {
        MuPoly out;
        if (buf_.empty()) return out;
        keys_.clear();
        keys_.reserve(buf_.size());
        for (std::uint32_t i = 0; i < buf_.size(); ++i)
            keys_.emplace_back(mu_sort_key(buf_[i].first), i);
        std::sort(keys_.begin(), keys_.end());
        out.terms_.reserve(keys_.size());
        for (std::size_t k = 0; k < keys_.size();) {
            std::uint64_t key = keys_[k].first;
            auto& first = buf_[keys_[k].second];
            Rat sum = std::move(first.second);
            MuExpo e = first.first;
            for (++k; k < keys_.size() && keys_[k].first == key; ++k)
                sum += buf_[keys_[k].second].second;
            if (sum != 0) out.terms_.emplace_back(e, std::move(sum));
        }
        buf_.clear();
        return out;
    }

  private:
    std::vector<std::pair<MuExpo, Rat>> buf_;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keys_;
};

inline MuPoly operator*(const MuPoly& a, const MuPoly& b) {
    if (a.is_zero() || b.is_zero()) return MuPoly();
    MuTermAccumulator acc;
    acc.add_product(a, b);
    return acc.consolidate();
}

inline MuPoly operator*(const Rat& c, const MuPoly& p) { return p.scaled(c); }
inline MuPoly operator*(const MuPoly& p, const Rat& c) { return p.scaled(c); }
inline MuPoly operator+(const MuPoly& p, const Rat& c) {
    return p + MuPoly::constant(c);
}

inline std::string mu_monomial_string(MuExpo e, bool latex = false) {
    static const char* names[5] = {"mu1", "mu2", "mu3", "mu4", "mu6"};
    static const char* lnames[5] = {"\\mu_1", "\\mu_2", "\\mu_3", "\\mu_4", "\\mu_6"};
    std::string s;
    for (int v = 0; v < 5; ++v) {
        int k = mu_expo_get(e, v);
        if (k == 0) continue;
        if (!s.empty()) s += latex ? " " : "*";
        s += latex ? lnames[v] : names[v];
        if (k > 1) s += latex ? ("^{" + std::to_string(k) + "}") : ("^" + std::to_string(k));
    }
    return s;
}

}  // namespace sigmaforge

#endif
