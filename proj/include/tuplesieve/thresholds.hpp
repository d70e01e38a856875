#pragma once

// The threshold calculus: the basic two-primes inequality and its table,
// the eigenvalue method for polynomial-weighted sieves, the Bessel
// variational threshold, the E_r gap bounds, and the interval-length
// polynomial machinery.

#include <cstdint>
#include <optional>
#include <vector>

#include "tuplesieve/numerics.hpp"

namespace tuplesieve {

struct ThresholdRow {
    double theta = 0.0;
    unsigned k = 0;
    unsigned ell_or_L = 0;
    int64_t h_k = -1;               // published minimal diameter, -1 unknown
    bool h_k_upper_bound = false;
};

// (k/(k+2l+1)) ((2l+1)/(l+1)) theta > 1, decided in exact rational
// arithmetic. The (k,l,theta)=(6,1,1) case sits exactly on the boundary
// and must be false.
bool condition_34(unsigned k, unsigned ell, const Rational& theta);

// For each theta: the smallest k admitting some ell (then the smallest
// such ell at that k, ell <= k) making condition_34 true. k is capped;
// rows with no solution come back empty.
std::vector<std::optional<ThresholdRow>> table_34(
    const std::vector<Rational>& thetas, unsigned k_cap = 10'000);

// Symmetric matrix of the quadratic form in the polynomial-weight method:
// entries[i][j] = C(i+j,i)/(k+i+j)! *
//                 (k(i+j+2)(i+j+1)/((i+1)(j+1)(k+i+j+1)) - 2/theta).
// Entries are built in exact rational arithmetic and then rounded once.
struct WeightMatrix {
    unsigned k = 0;
    unsigned L = 0;
    double theta = 0.0;
    std::vector<std::vector<double>> entries;
};

WeightMatrix weight_matrix(unsigned k, unsigned L, const Rational& theta);

// Largest eigenvalue via the Jacobi solver. Dimension <= 64.
double max_eigenvalue(const WeightMatrix& m);

// Sign of the largest eigenvalue, computed from entries exactly rescaled
// by (k+2L)! — the 1/(k+i+j)! factors underflow doubles for k+i+j > ~170,
// and a positive scalar multiple preserves eigenvalue signs.
int weight_matrix_sign(unsigned k, unsigned L, const Rational& theta);

// Infimum theta in (1/2, 1] with a positive eigenvalue, by bisection to
// 1e-8 after a grid scan that checks the sign change is unique.
// No positive eigenvalue anywhere -> nullopt.
std::optional<double> theta_threshold_matrix(unsigned k, unsigned L);

// 4(8 - sqrt(19))/15, the closed-form k=6, L=1 threshold.
double k6_closed_form();

// Threshold theta = 2*beta/(k(k-1)) where beta solves
//   1/beta = int_0^1 y^{k-2} q(y)^2 dy / int_0^1 y^{k-1} q'(y)^2 dy,
//   q(y) = J_{k-2}(2 sqrt(beta)) - y^{1-k/2} J_{k-2}(2 sqrt(beta y)).
// Gauss-Legendre quadrature; beta bracketed by a geometric scan, then
// bisection. The variational optimum over all polynomial weights.
double bessel_threshold(unsigned k);

// The derivative of y^{1-k/2} J_{k-2}(2 sqrt(beta y)) reduces to
// sqrt(beta) y^{-(k-1)/2} J_{k-1}(2 sqrt(beta y)); exposed for testing
// against finite differences.
double bessel_q_prime(unsigned k, double beta, double y);
double bessel_q(unsigned k, double beta, double y);

struct ErBounds {
    double simple = 0.0;                  // max(r - 2 theta, 0)
    std::optional<double> thm3;           // (sqrt r - sqrt(2 theta))^2, r >= 2
    double unconditional = 0.0;           // (sqrt r - 1)^2
};

ErBounds er_bounds(unsigned r, double theta);

// Parameters of the interval polynomial: phi = 1/(l+1), a = 2 - phi,
// Theta = theta0 (1 - phi)/2.
struct Thm3Params {
    unsigned k = 0;
    unsigned ell = 0;
    unsigned nu = 1;
    double theta0 = 0.5;
    double Theta = 0.0;
    double phi = 0.0;
    double a = 0.0;
    Thm3Params(unsigned k_, unsigned ell_, unsigned nu_, double theta0_);
};

// P_{k,l,nu}(x) = sum_{r=0}^{k} C(k,r)^2 x^r / ((r+1)...(r+2l)) *
//                (1 + x (4(1-phi/2)k/(r+2l+1) - nu/Theta)).
// Terms are evaluated in log space with sign tracking; the returned
// double saturates to +-inf when the true magnitude overflows.
double thm3_polynomial(const Thm3Params& params, unsigned nu, double x);
double thm3_polynomial(const Thm3Params& params, double x);

// Sign and log-magnitude form, safe for any k <= 300.
std::pair<int, double> thm3_polynomial_signed_log(const Thm3Params& params,
                                                  unsigned nu, double x);

// Smallest x > 0 with P <= 0 (geometric grid then bisection), mapped to
// the interval-length multiplier lambda = Theta / x_crit. The grid spans
// [1e-4, 1e4]; all-positive grids come back empty (unsat).
std::optional<double> min_lambda(unsigned k, unsigned ell, unsigned nu,
                                 double theta0);

}  // namespace tuplesieve
