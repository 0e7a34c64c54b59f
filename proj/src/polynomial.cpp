#include "stochnewton/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stochnewton/errors.hpp"

namespace stochnewton {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) == 0.0)
        coeffs_.pop_back();
    if (coeffs_.empty() || (coeffs_.size() == 1 && std::abs(coeffs_[0]) == 0.0))
        throw BadConfig("zero polynomial");
    for (cplx c : coeffs_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw BadConfig("polynomial coefficients must be finite");
}

cplx Polynomial::eval(cplx z) const {
    cplx acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

std::pair<cplx, cplx> Polynomial::eval_with_deriv(cplx z) const {
    cplx p = coeffs_.back();
    cplx dp = 0.0;
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

Polynomial Polynomial::derivative() const {
    if (degree() < 1)
        throw BadConfig("derivative of a constant");
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

double Polynomial::coeff_scale_at(cplx z) const {
    double az = std::abs(z);
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * az + std::abs(*it);
    return acc;
}

double Polynomial::cauchy_root_bound() const {
    if (degree() < 1)
        throw BadConfig("root bound needs degree >= 1");
    double lead = std::abs(coeffs_.back());
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < coeffs_.size(); ++k)
        worst = std::max(worst, std::abs(coeffs_[k]) / lead);
    return 1.0 + worst;
}

Polynomial Polynomial::scaled(cplx factor) const {
    if (std::abs(factor) == 0.0)
        throw BadConfig("scale factor must be nonzero");
    std::vector<cplx> c = coeffs_;
    for (cplx& v : c) v *= factor;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const cplx> roots, cplx leading) {
    if (roots.empty())
        throw BadConfig("from_roots needs at least one root");
    std::vector<cplx> a{leading};
    for (cplx r : roots) {
        a.push_back(0.0);
        for (std::size_t k = a.size() - 1; k >= 1; --k)
            a[k] = a[k - 1] - r * a[k];
        a[0] = -r * a[0];
    }
    return Polynomial(std::move(a));
}

namespace {

struct Parser {
    std::string s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    double number() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'))
            ++i;
        if (i == start) throw BadConfig("expected number in polynomial near '" + s.substr(start) + "'");
        if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
            if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                i = j;
            }
        }
        return std::stod(s.substr(start, i - start));
    }
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text) {
    // Fold U+2212 (unicode minus) into ASCII '-' so pasted formulas parse.
    std::string cleaned;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x88 &&
            static_cast<unsigned char>(text[i + 2]) == 0x92) {
            cleaned += '-';
            i += 2;
        } else {
            cleaned += text[i];
        }
    }

    Parser p{cleaned};
    std::vector<cplx> coeffs;
    auto bump = [&](int power, cplx value) {
        if (power >= static_cast<int>(coeffs.size()))
            coeffs.resize(power + 1, cplx(0.0));
        coeffs[power] += value;
    };

    bool first = true;
    while (!p.eof()) {
        double sign = 1.0;
        if (p.accept('+')) sign = 1.0;
        else if (p.accept('-')) sign = -1.0;
        else if (!first) throw BadConfig("expected '+' or '-' between polynomial terms");
        first = false;

        p.skip_ws();
        double mag = 1.0;
        bool saw_number = false;
        if (p.i < p.s.size() &&
            (std::isdigit(static_cast<unsigned char>(p.s[p.i])) || p.s[p.i] == '.')) {
            mag = p.number();
            saw_number = true;
        }
        bool imaginary = p.accept('i');
        p.accept('*');
        int power = 0;
        p.skip_ws();
        if (p.i < p.s.size() && (p.s[p.i] == 'z' || p.s[p.i] == 'x')) {
            ++p.i;
            power = 1;
            if (p.accept('^'))
                power = static_cast<int>(p.number());
        } else if (!saw_number && !imaginary) {
            throw BadConfig("malformed polynomial term in '" + text + "'");
        }
        cplx value = imaginary ? cplx(0.0, sign * mag) : cplx(sign * mag, 0.0);
        bump(power, value);
    }
    if (coeffs.empty()) throw BadConfig("empty polynomial string");
    return Polynomial(std::move(coeffs));
}

std::string Polynomial::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        cplx c = coeffs_[k];
        if (std::abs(c) == 0.0 && degree() > 0) continue;
        if (!first) os << " + ";
        first = false;
        if (c.imag() == 0.0)
            os << c.real();
        else
            os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
        if (k >= 1) os << "z";
        if (k >= 2) os << "^" << k;
    }
    return os.str();
}

Polynomial deflate(const Polynomial& p, cplx x, double tol, double* remainder_out) {
    int n = p.degree();
    if (n < 2)
        throw BadConfig("deflate requires degree >= 2");
    const auto& c = p.coeffs();

    double rem = std::abs(p.eval(x));
    if (remainder_out) *remainder_out = rem;
    double scale = p.coeff_scale_at(x);
    if (rem > tol * scale)
        throw RemainderTooLarge("deflation remainder " + std::to_string(rem) +
                                    " exceeds tolerance at the given point",
                                rem);

    std::vector<cplx> q(n);
    if (std::abs(x) >= 1.0) {
        // Forward recurrence: safe direction when dividing out large roots.
        q[n - 1] = c[n];
        for (int k = n - 1; k >= 1; --k)
            q[k - 1] = c[k] + x * q[k];
    } else if (std::abs(x) < 1e-300) {
        // Root at the origin: quotient is an exact coefficient shift.
        for (int k = 0; k < n; ++k)
            q[k] = c[k + 1];
    } else {
        // Backward recurrence from the constant term: safe for small roots;
        // the rounding mismatch lands on the well-conditioned leading side.
        q[0] = -c[0] / x;
        for (int k = 1; k < n - 1; ++k)
            q[k] = (q[k - 1] - c[k]) / x;
        q[n - 1] = c[n];
    }
    return Polynomial(std::move(q));
}

std::pair<Polynomial, double> normalize(const Polynomial& p) {
    double a = p.cauchy_root_bound();
    std::vector<cplx> h(p.coeffs());
    double ak = 1.0;
    for (std::size_t k = 1; k < h.size(); ++k) {
        ak *= a;
        h[k] *= ak;
    }
    return {Polynomial(std::move(h)), a};
}

int estimate_multiplicity(const Polynomial& p, cplx x, bool* low_confidence) {
    if (low_confidence) *low_confidence = false;
    int n = p.degree();

    // Taylor coefficients t_m = p^(m)(x)/m! by repeated synthetic division,
    // and the same shift on |coefficients| at |x| as a magnitude bound, so
    // the significance test is invariant under scaling of p, x and m!.
    std::vector<cplx> t(p.coeffs());
    std::vector<double> b(n + 1);
    for (int k = 0; k <= n; ++k) b[k] = std::abs(t[k]);
    double ax = std::abs(x);
    for (int j = 0; j <= n; ++j)
        for (int k = n - 1; k >= j; --k) {
            t[k] += x * t[k + 1];
            b[k] += ax * b[k + 1];
        }

    for (int m = 1; m <= n; ++m) {
        if (std::abs(t[m]) > 1e-6 * std::max(b[m], 1e-300)) {
            if (low_confidence && std::abs(t[m]) < 1e-3 * b[m])
                *low_confidence = true;
            return m;
        }
    }
    if (low_confidence) *low_confidence = true;
    return 1;
}

}  // namespace stochnewton
