#pragma once

// Shared numeric kernel: exact rationals, Bessel series, Gauss-Legendre
// quadrature, bisection, and a dense symmetric eigensolver.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tuplesieve/errors.hpp"

namespace tuplesieve {

// Exact rational arithmetic. mpq_class keeps values canonical
// (gcd 1, positive denominator) after every operation.
using Rational = mpq_class;
using BigInt = mpz_class;

// Parses decimal strings like "0.95", "1", ".55" into an exact rational.
Rational rational_from_decimal(const std::string& s);

// Compensated (Kahan) accumulator for long floating sums.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Exact binomial coefficient; k > n yields 0 by convention.
BigInt binomial_exact(uint64_t n, uint64_t k);
double binomial(uint64_t n, uint64_t k);

// n! as a double (exact up to 22!, correctly rounded beyond).
double factorial_d(unsigned n);

// Checks, in exact rational arithmetic,
//   (1/u!) sum_{i=0}^{u} C(u,i) (-1)^i d(d+1)...(d+i-1) / (v+d+i)!
//     == C(u+v,u) / (u+v+d)!
// with the empty rising product equal to 1.
bool identity_812(unsigned u, unsigned v, unsigned d);

// Bessel function of the first kind, integer order, by power series.
// Series terms are accumulated in extended precision and truncated when
// the term drops below 1e-18 of the partial sum. Arguments beyond the
// series' stable range (x > 50) raise numeric_failure.
double bessel_j(unsigned order, double x);

struct QuadratureRule {
    std::vector<double> nodes;    // on (0,1)
    std::vector<double> weights;  // sum to 1
    int order = 0;
};

// Gauss-Legendre rule mapped to (0,1); exact for polynomials of degree
// <= 2*order-1. Newton iteration on the Legendre recurrence.
QuadratureRule gauss_legendre(int order);

// Bisection root finding; requires a sign change on [lo, hi].
template <typename F>
double bisect(F&& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (std::isnan(flo) || std::isnan(fhi) || flo * fhi > 0.0)
        throw bracket_error("bisect: no sign change on bracket");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // hit float resolution
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
// ascending. Dimension capped at 64; the input must be symmetric to
// 1e-12 relative. Off-diagonal mass is annihilated below 1e-14 of the
// Frobenius norm; failure to converge in 50 sweeps raises numeric_failure.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a);

}  // namespace tuplesieve
