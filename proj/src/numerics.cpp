#include "tuplesieve/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace tuplesieve {

Rational rational_from_decimal(const std::string& s) {
    std::string t = s;
    bool neg = false;
    size_t pos = 0;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
        neg = t[pos] == '-';
        ++pos;
    }
    std::string digits;
    long frac_digits = -1;
    for (; pos < t.size(); ++pos) {
        char c = t[pos];
        if (c == '.') {
            if (frac_digits >= 0) throw std::invalid_argument("bad decimal: " + s);
            frac_digits = 0;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (frac_digits >= 0) ++frac_digits;
        } else {
            throw std::invalid_argument("bad decimal: " + s);
        }
    }
    if (digits.empty()) throw std::invalid_argument("bad decimal: " + s);
    BigInt num(digits, 10);
    BigInt den = 1;
    for (long i = 0; i < std::max<long>(frac_digits, 0); ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

BigInt binomial_exact(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

double binomial(uint64_t n, uint64_t k) {
    return binomial_exact(n, k).get_d();
}

double factorial_d(unsigned n) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f.get_d();
}

bool identity_812(unsigned u, unsigned v, unsigned d) {
    BigInt ufact, vdfact;
    mpz_fac_ui(ufact.get_mpz_t(), u);
    Rational lhs = 0;
    for (unsigned i = 0; i <= u; ++i) {
        BigInt rising = 1;  // d(d+1)...(d+i-1), empty product = 1
        for (unsigned t = 0; t < i; ++t) rising *= d + t;
        BigInt fac;
        mpz_fac_ui(fac.get_mpz_t(), v + d + i);
        Rational term(binomial_exact(u, i) * rising, fac);
        term.canonicalize();
        if (i % 2) lhs -= term; else lhs += term;
    }
    lhs /= Rational(ufact);
    BigInt fac;
    mpz_fac_ui(fac.get_mpz_t(), u + v + d);
    Rational rhs(binomial_exact(u + v, u), fac);
    rhs.canonicalize();
    return lhs == rhs;
}

double bessel_j(unsigned order, double x) {
    if (order > 64) throw std::invalid_argument("bessel_j: order too large");
    if (x < 0.0) throw std::invalid_argument("bessel_j: negative argument");
    if (x > 50.0) throw numeric_failure("bessel_j: x beyond series stability range");
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    long double half = static_cast<long double>(x) / 2.0L;
    long double q = half * half;
    // leading term (x/2)^order / order!
    long double term = 1.0L;
    for (unsigned i = 1; i <= order; ++i) term *= half / i;
    long double sum = term;
    for (unsigned m = 1; m < 400; ++m) {
        term *= -q / (static_cast<long double>(m) * (m + order));
        sum += term;
        if (std::abs(static_cast<double>(term)) <
            1e-18 * std::max(1e-300, std::abs(static_cast<double>(sum))))
            break;
    }
    return static_cast<double>(sum);
}

QuadratureRule gauss_legendre(int order) {
    if (order < 2 || order > 256)
        throw std::invalid_argument("gauss_legendre: order out of range");
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                converged = true;
                // one polishing step
                p0 = 1.0; p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        if (!converged) throw numeric_failure("gauss_legendre: Newton did not converge");
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        // map (-1,1) -> (0,1); nodes ascend
        rule.nodes[i] = (1.0 - x) / 2.0;
        rule.nodes[n - 1 - i] = (1.0 + x) / 2.0;
        rule.weights[i] = w / 2.0;
        rule.weights[n - 1 - i] = w / 2.0;
    }
    return rule;
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const size_t n = a.size();
    if (n == 0 || n > 64) throw std::invalid_argument("jacobi: dimension out of range");
    double amax = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw std::invalid_argument("jacobi: not square");
        for (size_t j = 0; j < n; ++j) amax = std::max(amax, std::abs(a[i][j]));
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (std::abs(a[i][j] - a[j][i]) > 1e-12 * std::max(1.0, amax))
                throw std::invalid_argument("jacobi: matrix not symmetric");

    double fro = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) fro += a[i][j] * a[i][j];
    fro = std::sqrt(fro);
    const double target = 1e-14 * fro;

    auto offdiag = [&]() {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) s += 2.0 * a[i][j] * a[i][j];
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 50; ++sweep) {
        if (offdiag() <= target) break;
        if (sweep == 49) throw numeric_failure("jacobi: no convergence in 50 sweeps");
        for (size_t p = 0; p < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double apq = a[p][q];
                if (apq == 0.0) continue;
                double tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                double t = (tau >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                double app = a[p][p], aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = a[p][i] = c * aip - s * aiq;
                    a[i][q] = a[q][i] = s * aip + c * aiq;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (size_t i = 0; i < n; ++i) eig[i] = a[i][i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace tuplesieve
