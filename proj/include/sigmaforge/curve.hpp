#ifndef SIGMAFORGE_CURVE_HPP
#define SIGMAFORGE_CURVE_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "sigmaforge/biseries.hpp"
#include "sigmaforge/laurent_series.hpp"
#include "sigmaforge/xy_poly.hpp"

namespace sigmaforge {

// Coefficients of y^2 + (mu1 x + mu3) y = x^3 + mu2 x^2 + mu4 x + mu6,
// either the symbolic generators or a full numeric specialization.
class CurveParams {
  public:
    static CurveParams symbolic() {
        CurveParams p;
        p.symbolic_ = true;
        p.mu_ = {MuPoly::gen(1), MuPoly::gen(2), MuPoly::gen(3), MuPoly::gen(4),
                 MuPoly::gen(6)};
        return p;
    }

    static CurveParams numeric(const std::array<Rat, 5>& values) {
        CurveParams p;
        p.symbolic_ = false;
        for (int i = 0; i < 5; ++i) p.mu_[static_cast<std::size_t>(i)] = MuPoly::constant(values[static_cast<std::size_t>(i)]);
        p.values_ = values;
        return p;
    }

    bool is_symbolic() const { return symbolic_; }

    // mu(k) for k in {1,2,3,4,6}.
    const MuPoly& mu(int k) const {
        switch (k) {
            case 1: return mu_[0];
            case 2: return mu_[1];
            case 3: return mu_[2];
            case 4: return mu_[3];
            case 6: return mu_[4];
            default: throw std::invalid_argument("mu index must be 1,2,3,4,6");
        }
    }

    const std::array<Rat, 5>& values() const {
        if (symbolic_) throw std::logic_error("symbolic parameters have no numeric values");
        return values_;
    }

    const std::array<MuPoly, 5>& mu_array() const { return mu_; }

  private:
    CurveParams() = default;
    bool symbolic_ = true;
    std::array<MuPoly, 5> mu_;
    std::array<Rat, 5> values_{};
};

struct Invariants {
    MuPoly b2, b4, b6, b8, disc;
};

inline Invariants invariants_D(const CurveParams& cp) {
    const MuPoly &m1 = cp.mu(1), &m2 = cp.mu(2), &m3 = cp.mu(3), &m4 = cp.mu(4),
                 &m6 = cp.mu(6);
    Invariants v;
    v.b2 = m1 * m1 + Rat(4) * m2;
    v.b4 = Rat(2) * m4 + m1 * m3;
    v.b6 = m3 * m3 + Rat(4) * m6;
    v.b8 = m1 * m1 * m6 + Rat(4) * m2 * m6 - m1 * m3 * m4 + m2 * m3 * m3 - m4 * m4;
    v.disc = -(v.b2 * v.b2 * v.b8) - Rat(8) * (v.b4 * v.b4 * v.b4) -
             Rat(27) * (v.b6 * v.b6) + Rat(9) * (v.b2 * v.b4 * v.b6);
    return v;
}

// All curve-level expansions in the arithmetic local parameter t = -x/y.
// Everything is computed once, eagerly, at construction precision; the kit
// is immutable afterwards and safe to share.
class CurveKit {
  public:
    CurveKit(const CurveParams& params, int order)
        : params_(params), order_(order), inv_(invariants_D(params)) {
        if (order < 2) throw std::invalid_argument("curve expansion order must be >= 2");
        build();
    }

    const CurveParams& params() const { return params_; }
    int order() const { return order_; }
    const Invariants& invariants() const { return inv_; }

    // Eq (1.27) fixed point; coefficients in Z[mu].
    const LSeries& s() const { return s_; }
    // x = 1/s, y = -x/t; Laurent with poles of order 2 and 3.
    const LSeries& x() const { return x_; }
    const LSeries& y() const { return y_; }
    // f_y(x<t>, y<t>) = 2y + mu1 x + mu3.
    const LSeries& fy() const { return fy_; }
    const LSeries& dxdt() const { return dxdt_; }
    // omega1 / dt, constant term 1.
    const LSeries& omega1() const { return w1_; }
    // eta1 / dt = -x * omega1/dt.
    const LSeries& eta1() const { return eta1_; }
    // Conjugate parameter t' with x<t'> = x<t>.
    const LSeries& tprime() const { return tp_; }
    // q(t) = -x<t> t t'.
    const LSeries& q() const { return q_; }
    // u(t) = integral of omega1.
    const LSeries& u_of_t() const { return u_; }
    // Reversion t(u), with t = u + O(u^2).
    const LSeries& t_of_u() const { return tu_; }

    // p(t1,t2) from x2^-1 - x1^-1 = -(t2 - t1)(t2' - t1) p(t1,t2).
    const BSeries& pairing_p() const { return p_; }

    // (t2'<t2> - t1) as a bivariate series, the Weierstrass-preparation
    // divisor used throughout the xi pipeline.
    const BSeries& conjugate_divisor() const { return dms_; }

    std::array<Rat, 5> numeric_values() const { return params_.values(); }

  private:
    void build() {
        int N = order_;
        const MuPoly &m1 = params_.mu(1), &m2 = params_.mu(2), &m3 = params_.mu(3),
                     &m4 = params_.mu(4), &m6 = params_.mu(6);
        // s = (1 + mu2 s + mu4 s^2 + mu6 s^3) t^2 + (mu1 s + mu3 s^2) t,
        // iterated from s = 0; each pass gains at least one order.
        LSeries s = LSeries::zero('t', N);
        for (int pass = 0; pass <= N; ++pass) {
            LSeries s2 = (s * s).truncated(N);
            LSeries s3 = (s2 * s).truncated(N);
            LSeries rhs = LSeries::monomial('t', 2, MuPoly::one(), N) +
                          s.scaled(m2).shifted(2).truncated(N) +
                          s2.scaled(m4).shifted(2).truncated(N) +
                          s3.scaled(m6).shifted(2).truncated(N) +
                          s.scaled(m1).shifted(1).truncated(N) +
                          s2.scaled(m3).shifted(1).truncated(N);
            rhs = rhs.truncated(N);
            if (rhs.equals_to_prec(s, N)) { s = rhs; break; }
            s = rhs;
        }
        s_ = s;
        x_ = invert_unit(s_);
        y_ = (-x_).shifted(-1);
        fy_ = y_.scaled(Rat(2)) + x_.scaled(m1) + LSeries::constant('t', m3, y_.prec());
        dxdt_ = differentiate(x_);
        w1_ = dxdt_ * invert_unit(fy_);
        eta1_ = -(x_ * w1_);
        LSeries den = y_ + x_.scaled(m1) + LSeries::constant('t', m3, y_.prec());
        tp_ = x_ * invert_unit(den);
        q_ = -(x_.shifted(1) * tp_);
        u_ = integrate_formal(w1_).truncated(N);
        tu_ = revert(u_, 'u');

        // p(t1,t2): divide s<t2> - s<t1> by (t1 - t2), then by (t2' - t1).
        int D = s_.prec();
        BSeries g = embed(s_, 2, 't', 'T', D) - embed(s_, 1, 't', 'T', D);
        dms_ = embed(tp_, 2, 't', 'T', D);
        dms_.add_coeff(1, 0, MuPoly::constant(Rat(-1)));
        p_ = divide_linear_lead(diagonal_divide(g), dms_);

        if (params_.is_symbolic()) assert_weights();
    }

    void assert_weights() const {
        struct { const LSeries* s; int label; const char* name; } uni[] = {
            {&s_, -2, "s"},    {&x_, 2, "x"},     {&y_, 3, "y"},
            {&fy_, 3, "f_y"},  {&w1_, 0, "omega1"}, {&eta1_, 2, "eta1"},
            {&tp_, -1, "t'"},  {&q_, 0, "q"},     {&u_, -1, "u(t)"},
            {&tu_, -1, "t(u)"},
        };
        for (const auto& e : uni)
            if (auto n = e.s->weight_violation(e.label))
                throw std::logic_error(std::string("weight grading violated in ") + e.name +
                                       " at order " + std::to_string(*n));
        if (p_.weight_violation(0))
            throw std::logic_error("weight grading violated in p(t1,t2)");
    }

    CurveParams params_;
    int order_;
    Invariants inv_;
    LSeries s_{'t'}, x_{'t'}, y_{'t'}, fy_{'t'}, dxdt_{'t'}, w1_{'t'}, eta1_{'t'},
        tp_{'t'}, q_{'t'}, u_{'t'}, tu_{'u'};
    BSeries p_{'t', 'T', -1}, dms_{'t', 'T', -1};
};

}  // namespace sigmaforge

#endif
