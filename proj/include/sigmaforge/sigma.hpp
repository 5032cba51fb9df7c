#ifndef SIGMAFORGE_SIGMA_HPP
#define SIGMAFORGE_SIGMA_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigmaforge/curve.hpp"

namespace sigmaforge {

struct IdentityCheck {
    std::string name;
    bool ok = false;
    int order = 0;          // order the identity was verified through
    std::string detail;     // first failing position when !ok
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool all_ok() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
};

// The sigma-function pipeline: xi's regular part, the r series, the
// two-variable product for sigma(u-v)^2, sigma itself, wp and wp', plus
// the identity checks. Construction runs the whole chain eagerly at a
// fixed precision budget; the kit is immutable afterwards.
//
// Precision budget: delivering sigma to order N in u needs the univariate
// t-pipeline at N + 8 and the bivariate (t1,t2) objects capped at total
// degree N + 6 (each division against (t2'-t1) costs one order, the two
// diagonal divisions cost two, and sqrt/compose consume the rest).
class SigmaKit {
  public:
    SigmaKit(const CurveParams& params, int order)
        : order_(order),
          curve_(params, order + 6),
          xi_(BSeries::zero('t', 'T', -1)),
          corr_(BSeries::zero('t', 'T', -1)),
          A_(BSeries::zero('t', 'T', -1)) {
        if (order < 1) throw std::invalid_argument("sigma order must be >= 1");
        build();
    }

    int order() const { return order_; }
    const CurveKit& curve() const { return curve_; }

    // Regular part of the 2-form xi: xi - dt1 dt2/(t1-t2)^2, in Z[mu].
    const BSeries& xi_regular() const { return xi_; }
    // The integrand correction series of the third-kind differential.
    const BSeries& third_kind_correction() const { return corr_; }
    // Double primitive of xi_regular (integrated in slot 1 then slot 2).
    const BSeries& xi_primitive() const { return A_; }
    // r(t, 0), the univariate corner combination.
    const LSeries& r_t0() const { return r_t0_; }
    // sigma as a series in the local parameter t.
    const LSeries& sigma_t() const { return sigma_t_; }
    // sigma(u)^2 and sigma(u).
    const LSeries& sigma_sq() const { return sigma_sq_u_; }
    const LSeries& sigma() const { return sigma_u_; }
    const LSeries& wp() const { return wp_; }
    const LSeries& wp_prime() const { return wpp_; }
    // x(u) = wp(u) and y(u) = (wp' - mu1 wp - mu3)/2, the inversion of the
    // expansion problem.
    const LSeries& x_u() const { return wp_; }
    const LSeries& y_u() const { return y_u_; }

    // Bivariate r(t1,t2) at total degree cap M.
    BSeries r_series(int M) const {
        int cap = std::min(M, A_.prec() - 1);
        LSeries att_t = corner_tt_.truncated(cap);
        BSeries arg = embed(att_t.with_var('T'), 2, 't', 'T', cap) -
                      substitute_bi(A_, curve_.tprime().truncated(cap),
                                    LSeries::identity('T', cap)) -
                      substitute_bi(A_, LSeries::identity('t', cap),
                                    curve_.tprime().truncated(cap).with_var('T')) +
                      embed(att_t, 1, 't', 'T', cap);
        return exp_series(arg.truncated(cap));
    }

    // sigma(u - v)^2 as a two-variable series, built from the Theorem-style
    // product (t2-t1)^2 q(t1) q(t2) p(t1,t2) p(t2,t1) r(t1,t2) and the
    // substitution t = t(u).
    BSeries sigma_sq_two_var(int M) const {
        int cap = std::min(M + 2, A_.prec() - 1);
        BSeries r = r_series(cap);
        BSeries sqfac('t', 'T', cap);
        sqfac.set_coeff(2, 0, MuPoly::one());
        sqfac.set_coeff(1, 1, MuPoly::constant(Rat(-2)));
        sqfac.set_coeff(0, 2, MuPoly::one());
        const BSeries& p = curve_.pairing_p();
        BSeries prod = sqfac * p.truncated(cap) * p.transposed().truncated(cap) * r;
        prod = prod.mul_univariate(curve_.q().truncated(cap), 1);
        prod = prod.mul_univariate(curve_.q().truncated(cap).with_var('T'), 2);
        LSeries tu = curve_.t_of_u().truncated(M);
        BSeries out = substitute_bi(prod.truncated(M), tu, tu.with_var('v'));
        return out;
    }

    IdentityReport identity_suite(int order) const;

    HurwitzReport sigma_report() const { return hurwitz_report(sigma_u_); }
    HurwitzReport sigma_sq_report() const { return hurwitz_report(sigma_sq_u_); }

  private:
    void build() {
        const CurveKit& k = curve_;
        int D = order_ + 4;  // bivariate total-degree cap

        // U(t) = (s/t^2)^2 * omega1/dt, the per-variable unit cofactor of
        // 1/(x^2) * dx/dt / f_y.
        LSeries s_t2 = k.s().shifted(-2);
        LSeries U = s_t2 * s_t2 * k.omega1();

        // FB = t1^4 t2^4 F(x1,y1;x2,y2), poles cleared by the shifts.
        BSeries FB = BSeries::zero('t', 'T', D);
        {
            LSeries pow_cache[3][2] = {
                {LSeries::constant('t', MuPoly::one(), k.x().prec() + 8), k.y()},
                {k.x(), k.x() * k.y()},
                {k.x() * k.x(), LSeries('t')}};
            auto xy = [&](int a, int b) -> const LSeries& { return pow_cache[a][b]; };
            bool first = true;
            for (const auto& t : pairing_F_terms(k.params().mu_array())) {
                BSeries term = outer_product(xy(t.a, t.b).scaled(t.coeff),
                                             xy(t.c, t.d).with_var('T'), 4, 4, 't', 'T', D);
                FB = first ? term : FB + term;
                first = false;
            }
        }
        BSeries NUM = FB.mul_univariate(U, 1).mul_univariate(U.with_var('T'), 2);

        const BSeries& dms = k.conjugate_divisor();
        BSeries C = divide_linear_lead(divide_linear_lead(NUM, dms), dms);
        C = divide_unit(divide_unit(C, k.pairing_p()), k.pairing_p());

        // The diagonal value of the cofactor is forced to be 1.
        LSeries diag = C.diagonal('t');
        if (diag.valuation() != 0 || !(diag.coeff(0) == MuPoly::one()) ||
            !(diag - LSeries::constant('t', MuPoly::one(), diag.prec())).is_zero())
            throw std::logic_error("xi cofactor is not 1 on the diagonal");

        BSeries Cm1 = C;
        Cm1.set_coeff(0, 0, C.coeff(0, 0) - MuPoly::one());
        xi_ = diagonal_divide(diagonal_divide(Cm1));
        if (!xi_.is_symmetric())
            throw std::logic_error("xi regular part is not symmetric");
        A_ = xi_.integrate(1).integrate(2);

        // Univariate corner combination for r(t,0):
        //   +A(0,0) - A(0,t') - A(t,0) + A(t,t')  with t2' (0) = 0.
        LSeries id_t = LSeries::identity('t', k.tprime().prec() + 4);
        LSeries zero_t = LSeries::zero('t', k.tprime().prec() + 4);
        corner_tt_ = substitute_uni(A_, id_t, k.tprime());
        LSeries a0t = substitute_uni(A_, zero_t, k.tprime());
        LSeries at0 = substitute_uni(A_, id_t, zero_t);
        LSeries rarg = corner_tt_ - a0t - at0;
        r_t0_ = exp_series(rarg);

        // sigma(u)^2 = t^2 q(t) p(t,0) p(0,t) r(t,0) under t = t(u).
        LSeries p_t0 = k.pairing_p().restricted_to_zero(2);
        LSeries p_0t = k.pairing_p().restricted_to_zero(1).with_var('t');
        LSeries sig2t = (k.q() * p_t0 * p_0t * r_t0_).shifted(2);
        sigma_t_ = sqrt_hurwitz(sig2t.shifted(-2)).shifted(1);
        sigma_u_ = compose(sigma_t_, k.t_of_u());
        sigma_sq_u_ = sigma_u_ * sigma_u_;

        // wp = -(log(sigma/u))'' + 1/u^2, avoiding the log of the pole.
        LSeries logS = log_series(sigma_u_.shifted(-1));
        LSeries d2 = differentiate(differentiate(logS));
        wp_ = LSeries::monomial('u', -2, MuPoly::one(), d2.prec()) - d2;
        wpp_ = differentiate(wp_);
        y_u_ = (wpp_ - wp_.scaled(k.params().mu(1)) -
                LSeries::constant('u', k.params().mu(3), wpp_.prec()))
                   .scaled(make_rat(1, 2));

        // Third-kind correction series of Theorem 1.43:
        //   ((y1+y2+mu1 x2+mu3)/(x2-x1) - 1/t1 + 1/t2) omega1<t1> + 1/(t1-t2).
        // Multiplying through by t1 t2 (t1 - t2) keeps every intermediate in
        // the regular bivariate ring; the three divisions are exact.
        {
            LSeries one_big = LSeries::constant('t', MuPoly::one(), k.y().prec() + 8);
            BSeries NB = outer_product(k.y(), one_big.with_var('T'), 3, 3, 't', 'T', D) +
                         outer_product(one_big, k.y().with_var('T'), 3, 3, 't', 'T', D) +
                         outer_product(one_big, k.x().scaled(k.params().mu(1)).with_var('T'), 3, 3, 't', 'T', D) +
                         outer_product(LSeries::constant('t', k.params().mu(3), one_big.prec()),
                                       one_big.with_var('T'), 3, 3, 't', 'T', D);
            BSeries R = NB.mul_univariate(s_t2, 1).mul_univariate(s_t2.with_var('T'), 2);
            BSeries T = -(divide_unit(divide_linear_lead(R, dms), k.pairing_p())
                              .mul_univariate(k.omega1(), 1));
            BSeries sq('t', 'T', T.prec());
            sq.set_coeff(2, 0, MuPoly::one());
            sq.set_coeff(1, 1, MuPoly::constant(Rat(-2)));
            sq.set_coeff(0, 2, MuPoly::one());
            T = T + sq.mul_univariate(k.omega1(), 1);
            BSeries tt('t', 'T', T.prec());
            tt.set_coeff(1, 1, MuPoly::one());
            T = T + tt;
            corr_ = shift_down(shift_down(diagonal_divide(T), 1), 2);
        }

        if (k.params().is_symbolic()) assert_weights();
        if (sigma_u_.prec() < order_ || wp_.prec() < order_)
            throw std::logic_error("sigma pipeline lost more precision than budgeted");
    }

    // Exact division by t1 or t2 (every coefficient must carry the factor).
    static BSeries shift_down(const BSeries& b, int which) {
        BSeries r(b.var1(), b.var2(), b.prec() - 1);
        for (int d = 0; d <= b.prec(); ++d)
            for (int i = 0; i <= d; ++i) {
                const MuPoly& c = b.coeff(i, d - i);
                if (c.is_zero()) continue;
                int j = d - i;
                if ((which == 1 && i == 0) || (which == 2 && j == 0))
                    throw std::logic_error("shift_down: series is not divisible by the variable");
                if (which == 1)
                    r.set_coeff(i - 1, j, c);
                else
                    r.set_coeff(i, j - 1, c);
            }
        return r;
    }

    void assert_weights() const {
        struct { const LSeries* s; int label; const char* name; } uni[] = {
            {&r_t0_, 0, "r(t,0)"},       {&sigma_t_, -1, "sigma<t>"},
            {&sigma_u_, -1, "sigma(u)"}, {&sigma_sq_u_, -2, "sigma(u)^2"},
            {&wp_, 2, "wp"},             {&wpp_, 3, "wp'"},
        };
        for (const auto& e : uni)
            if (auto n = e.s->weight_violation(e.label))
                throw std::logic_error(std::string("weight grading violated in ") + e.name +
                                       " at order " + std::to_string(*n));
        struct { const BSeries* b; int label; const char* name; } bi[] = {
            {&xi_, 2, "xi_regular"}, {&A_, 0, "xi primitive"}, {&corr_, 1, "third-kind correction"},
        };
        for (const auto& e : bi)
            if (auto ij = e.b->weight_violation(e.label))
                throw std::logic_error(std::string("weight grading violated in ") + e.name);
    }

    int order_;
    CurveKit curve_;
    BSeries xi_, corr_, A_;
    LSeries corner_tt_{'t'};
    LSeries r_t0_{'t'}, sigma_t_{'t'}, sigma_u_{'u'}, sigma_sq_u_{'u'};
    LSeries wp_{'u'}, wpp_{'u'}, y_u_{'u'};
};

inline IdentityReport SigmaKit::identity_suite(int order) const {
    IdentityReport rep;
    const CurveKit& k = curve_;

    auto push_uni = [&rep](const std::string& name, const LSeries& lhs, const LSeries& rhs,
                           int N) {
        IdentityCheck c{name, false, N, ""};
        if (lhs.prec() < N || rhs.prec() < N) {
            c.detail = "insufficient precision";
        } else if (auto d = lhs.first_difference(rhs, N)) {
            c.detail = "first differing coefficient at order " + std::to_string(*d);
        } else {
            c.ok = true;
        }
        rep.checks.push_back(std::move(c));
    };

    // (a) Frobenius-Stickelberger, regularized:
    //     sigma(u+v) sigma(u-v) = sigma(u)^2 sigma(v)^2 (x(v) - x(u)).
    {
        BSeries lhs = embed_binomial(sigma_u_, +1, 'u', 'v', order + 2) *
                      embed_binomial(sigma_u_, -1, 'u', 'v', order + 2);
        LSeries s2x = sigma_sq_u_ * wp_;  // regular, valuation 0
        BSeries rhs = outer_product(sigma_sq_u_, s2x.with_var('v'), 0, 0, 'u', 'v', order + 2) -
                      outer_product(s2x, sigma_sq_u_.with_var('v'), 0, 0, 'u', 'v', order + 2);
        int N = std::min({order, lhs.prec(), rhs.prec()});
        IdentityCheck c{"frobenius_stickelberger", false, N, ""};
        if (auto ij = lhs.first_difference(rhs, N)) {
            c.detail = "first differing coefficient at (u^" + std::to_string(ij->first) +
                       ", v^" + std::to_string(ij->second) + ")";
        } else {
            c.ok = true;
        }
        rep.checks.push_back(std::move(c));
    }

    // (b) duplication: sigma(2u)/sigma(u)^4 = -wp'(u), the sign being the
    //     one the computed expansion actually satisfies.
    {
        LSeries sig2u = sigma_u_.var_scaled(Rat(2));
        LSeries inv = invert_unit(sigma_u_.shifted(-1));
        LSeries inv2 = inv * inv;
        LSeries dup = (sig2u * (inv2 * inv2)).shifted(-4);
        int N = std::min({order, dup.prec(), wpp_.prec()});
        push_uni("duplication", dup, -wpp_, N);
    }

    // (c) inversion problem: wp = x o t(u), wp' = f_y o t(u).
    {
        LSeries xu = compose(k.x(), k.t_of_u());
        int N = std::min({order, wp_.prec(), xu.prec()});
        push_uni("inversion_x", wp_, xu, N);
        LSeries fyu = compose(k.fy(), k.t_of_u());
        N = std::min({order, wpp_.prec(), fyu.prec()});
        push_uni("inversion_y", wpp_, fyu, N);
    }

    // (d) curve relation: f(wp(u), y(u)) = 0 with y = (wp' - mu1 wp - mu3)/2,
    //     equivalently wp'^2 = 4 wp^3 + b2 wp^2 + 2 b4 wp + b6.
    {
        const Invariants& inv = k.invariants();
        LSeries wp2 = wp_ * wp_;
        LSeries lhs = wpp_ * wpp_;
        LSeries rhs = (wp2 * wp_).scaled(Rat(4)) + wp2.scaled(inv.b2) +
                      wp_.scaled(inv.b4.scaled(Rat(2))) +
                      LSeries::constant('u', inv.b6, wp2.prec());
        int N = std::min({order, lhs.prec(), rhs.prec()});
        push_uni("curve_relation", lhs, rhs, N);
    }
    return rep;
}

}  // namespace sigmaforge

#endif
