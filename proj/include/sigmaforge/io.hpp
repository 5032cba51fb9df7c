#ifndef SIGMAFORGE_IO_HPP
#define SIGMAFORGE_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "sigmaforge/biseries.hpp"
#include "sigmaforge/division.hpp"
#include "sigmaforge/laurent_series.hpp"
#include "sigmaforge/mu_poly.hpp"

namespace sigmaforge {

using json = nlohmann::ordered_json;

enum class Format { Text, Json, Latex };

inline Format parse_format(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "json") return Format::Json;
    if (s == "latex") return Format::Latex;
    throw std::invalid_argument("unknown format '" + s + "'");
}

// ----- rationals and monomial coefficients -----

inline std::string rat_latex(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    std::string num = mpz_class(abs(r.get_num())).get_str();
    std::string s = (r < 0 ? "-" : "");
    return s + "\\tfrac{" + num + "}{" + r.get_den().get_str() + "}";
}

// ----- MuPoly -----

inline std::string to_text(const MuPoly& p, bool latex = false) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        Rat a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (first) {
            if (neg) out += latex ? "-" : "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        std::string mono = mu_monomial_string(e, latex);
        if (mono.empty()) {
            out += latex ? rat_latex(a) : a.get_str();
        } else if (a == 1) {
            out += mono;
        } else {
            out += (latex ? rat_latex(a) : a.get_str()) + (latex ? " " : "*") + mono;
        }
    }
    return out;
}

inline std::string to_latex(const MuPoly& p) { return to_text(p, true); }

inline json to_json(const MuPoly& p) {
    json arr = json::array();
    for (const auto& [e, c] : p.terms()) {
        auto ev = mu_expo_unpack(e);
        arr.push_back(json{{"e", {ev[0], ev[1], ev[2], ev[3], ev[4]}},
                           {"n", c.get_num().get_str()},
                           {"d", c.get_den().get_str()}});
    }
    return arr;
}

inline MuPoly mu_poly_from_json(const json& j) {
    MuPoly p;
    for (const auto& term : j) {
        const auto& ev = term.at("e");
        MuExpo e = mu_expo(ev.at(0).get<int>(), ev.at(1).get<int>(), ev.at(2).get<int>(),
                           ev.at(3).get<int>(), ev.at(4).get<int>());
        Rat c = make_rat(mpz_class(term.at("n").get<std::string>()),
                         mpz_class(term.at("d").get<std::string>()));
        p = p + MuPoly::monomial(e, c);
    }
    return p;
}

// ----- LSeries -----

inline std::string var_text(char v, int n, bool latex) {
    std::string name(1, v);
    if (n == 0) return "";
    if (n == 1) return name;
    if (latex) return name + "^{" + std::to_string(n) + "}";
    return name + "^" + std::to_string(n);
}

inline std::string to_text(const LSeries& s, bool latex = false) {
    std::string out;
    bool first = true;
    for (int n = s.lo(); n <= s.prec(); ++n) {
        const MuPoly& c = s.coeff(n);
        if (c.is_zero()) continue;
        std::string coeff;
        bool neg = false;
        if (c.is_unit()) {
            Rat a = c.constant_term();
            neg = a < 0;
            Rat mag = neg ? -a : a;
            if (mag == 1 && n != 0)
                coeff = "";
            else
                coeff = latex ? rat_latex(mag) : mag.get_str();
        } else if (c.size() == 1) {
            MuPoly mag = c;
            Rat a = c.terms()[0].second;
            if (a < 0) { neg = true; mag = -c; }
            coeff = to_text(mag, latex);
        } else {
            coeff = "(" + to_text(c, latex) + ")";
        }
        std::string var = var_text(s.var(), n, latex);
        std::string term = coeff.empty() ? var
                          : var.empty() ? coeff
                                        : coeff + (latex ? " " : "*") + var;
        if (first) {
            out += (neg ? "-" : "") + term;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + term;
        }
    }
    if (first) out += "0";
    out += latex ? (" + O(" + var_text(s.var(), s.prec() + 1, true) + ")")
                 : (" + O(" + std::string(1, s.var()) + "^" + std::to_string(s.prec() + 1) + ")");
    return out;
}

inline std::string to_latex(const LSeries& s) { return to_text(s, true); }

inline json to_json(const LSeries& s) {
    json coeffs = json::object();
    for (int n = s.lo(); n <= s.prec(); ++n)
        if (!s.coeff(n).is_zero()) coeffs[std::to_string(n)] = to_json(s.coeff(n));
    return json{{"var", std::string(1, s.var())},
                {"lo", s.is_zero() ? 0 : s.valuation()},
                {"prec", s.prec()},
                {"coeffs", coeffs}};
}

inline LSeries lseries_from_json(const json& j) {
    LSeries s(j.at("var").get<std::string>().at(0), j.at("prec").get<int>());
    for (const auto& [key, val] : j.at("coeffs").items())
        s.set_coeff(std::stoi(key), mu_poly_from_json(val));
    return s;
}

// ----- BSeries -----

inline std::string bivar_name(const BSeries& b, int which, bool latex) {
    char c = which == 1 ? b.var1() : b.var2();
    if (c == 't') return latex ? "t_1" : "t1";
    if (c == 'T') return latex ? "t_2" : "t2";
    return std::string(1, c);
}

inline std::string to_text(const BSeries& b, bool latex = false) {
    std::string out;
    bool first = true;
    std::string n1 = bivar_name(b, 1, latex), n2 = bivar_name(b, 2, latex);
    for (int d = 0; d <= b.prec(); ++d)
        for (int i = d; i >= 0; --i) {
            const MuPoly& c = b.coeff(i, d - i);
            if (c.is_zero()) continue;
            std::string coeff;
            bool neg = false;
            if (c.is_unit()) {
                Rat a = c.constant_term();
                neg = a < 0;
                Rat mag = neg ? -a : a;
                coeff = (mag == 1 && d != 0) ? "" : (latex ? rat_latex(mag) : mag.get_str());
            } else if (c.size() == 1) {
                MuPoly mag = c;
                if (c.terms()[0].second < 0) { neg = true; mag = -c; }
                coeff = to_text(mag, latex);
            } else {
                coeff = "(" + to_text(c, latex) + ")";
            }
            std::string mono;
            int j = d - i;
            auto piece = [&](const std::string& nm, int k) -> std::string {
                if (k == 0) return "";
                if (k == 1) return nm;
                return nm + (latex ? "^{" + std::to_string(k) + "}" : "^" + std::to_string(k));
            };
            mono = piece(n1, i);
            std::string m2 = piece(n2, j);
            if (!mono.empty() && !m2.empty()) mono += latex ? " " : "*";
            mono += m2;
            std::string term = coeff.empty() ? mono
                              : mono.empty() ? coeff
                                             : coeff + (latex ? " " : "*") + mono;
            if (first) {
                out += (neg ? "-" : "") + term;
                first = false;
            } else {
                out += (neg ? " - " : " + ") + term;
            }
        }
    if (first) out += "0";
    out += " + O(deg " + std::to_string(b.prec() + 1) + ")";
    return out;
}

inline json to_json(const BSeries& b) {
    json coeffs = json::object();
    for (int d = 0; d <= b.prec(); ++d)
        for (int i = d; i >= 0; --i) {
            const MuPoly& c = b.coeff(i, d - i);
            if (!c.is_zero())
                coeffs[std::to_string(i) + "," + std::to_string(d - i)] = to_json(c);
        }
    return json{{"vars", {bivar_name(b, 1, false), bivar_name(b, 2, false)}},
                {"prec", b.prec()},
                {"coeffs", coeffs}};
}

// ----- PsiPoly -----

// Display order of Eqs 4.01/4.05: descending pole order 2a + 3b.
inline std::vector<std::pair<int, int>> psi_display_order(const PsiPoly& p) {
    std::vector<std::pair<int, int>> keys;
    for (const auto& [k, c] : p.poly.terms()) keys.push_back(k);
    std::sort(keys.begin(), keys.end(), [](auto a, auto b) {
        return 2 * a.first + 3 * a.second > 2 * b.first + 3 * b.second;
    });
    return keys;
}

inline std::string to_text(const PsiPoly& p, bool latex = false) {
    if (p.poly.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto [a, b] : psi_display_order(p)) {
        MuPoly c = p.poly.coeff(a, b);
        bool neg = false;
        std::string coeff;
        if (c.is_unit()) {
            Rat r = c.constant_term();
            neg = r < 0;
            Rat mag = neg ? -r : r;
            coeff = (mag == 1 && (a || b)) ? "" : (latex ? rat_latex(mag) : mag.get_str());
        } else if (c.size() == 1) {
            if (c.terms()[0].second < 0) { neg = true; c = -c; }
            coeff = to_text(c, latex);
        } else {
            coeff = "(" + to_text(c, latex) + ")";
        }
        std::string mono;
        auto piece = [&](const char* nm, int k) -> std::string {
            if (k == 0) return "";
            if (k == 1) return nm;
            return std::string(nm) + (latex ? "^{" + std::to_string(k) + "}" : "^" + std::to_string(k));
        };
        mono = piece("x", a);
        std::string ypart = piece("y", b);
        if (!mono.empty() && !ypart.empty()) mono += latex ? " " : "*";
        mono += ypart;
        std::string term = coeff.empty() ? mono
                          : mono.empty() ? coeff
                                         : coeff + (latex ? " " : "*") + mono;
        if (first) {
            out += (neg ? "-" : "") + term;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + term;
        }
    }
    return out;
}

inline json to_json(const PsiPoly& p) {
    json terms = json::array();
    for (auto [a, b] : psi_display_order(p))
        terms.push_back(json{{"x", a}, {"y", b}, {"poly", to_json(p.poly.coeff(a, b))}});
    return json{{"n", p.n}, {"terms", terms}};
}

inline PsiPoly psi_poly_from_json(const json& j) {
    PsiPoly p;
    p.n = j.at("n").get<int>();
    for (const auto& t : j.at("terms"))
        p.poly.add(t.at("x").get<int>(), t.at("y").get<int>(),
                   mu_poly_from_json(t.at("poly")));
    return p;
}

}  // namespace sigmaforge

#endif
