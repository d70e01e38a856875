#pragma once

// Truncated divisor-sum weights Lambda_R, the generalized von Mangoldt
// function, moment and correlation sums by two independent paths with
// their predicted main terms, and the rho detector statistic.

#include <cstdint>
#include <string>
#include <vector>

#include "tuplesieve/primes.hpp"
#include "tuplesieve/singular_series.hpp"
#include "tuplesieve/tuples.hpp"

namespace tuplesieve {

// Smallest-prime-factor sieve for fast factorization of many small n.
class FactorSieve {
public:
    static FactorSieve build(uint64_t limit);
    uint64_t limit() const { return limit_; }

    // Distinct prime divisors of n, ascending, appended to out.
    void distinct_primes(uint64_t n, std::vector<uint64_t>& out) const;

private:
    FactorSieve() = default;
    uint64_t limit_ = 0;
    std::vector<uint32_t> spf_;
};

// Sieve parameters (R, ell) attached to a tuple.
struct WeightParams {
    HTuple H;
    unsigned ell = 0;
    double R = 2.0;
    WeightParams(HTuple tuple, unsigned l, double r);
};

// Lambda_R(n) = sum_{d | n, d <= R} mu(d) log(R/d).
double lambda_R(uint64_t n, double R);
double lambda_R(uint64_t n, double R, const FactorSieve& sieve);

// Lambda_k(n) = sum_{d | n} mu(d) (log n/d)^k; vanishes when n has more
// than k distinct prime factors.
double generalized_von_mangoldt(uint64_t n, unsigned k);

// Lambda_R(n; H, ell) =
//   (1/(k+ell)!) sum_{d | P_H(n), d <= R} mu(d) (log R/d)^{k+ell},
// where P_H(n) = (n+h_1)...(n+h_k). Works on the factored components
// n+h_i so P_H never has to fit an integer type.
double lambda_R_weight(uint64_t n, const WeightParams& params,
                       const FactorSieve& sieve);

// Exact #{1 <= n <= N : d | P_H(n)} for squarefree d, via the nu_d(H)
// residue roots mod d.
uint64_t divisor_residue_count(const HTuple& H, uint64_t d, uint64_t N);

enum class MomentPath { PerN, PerD, Both };

struct MomentReport {
    uint64_t N = 0;
    double R = 0.0;
    std::string params;
    double brute_force = 0.0;     // NaN when not computed
    double fast_path = 0.0;       // NaN when not computed
    double predicted_main = 0.0;
    double ratio = 0.0;           // brute_force / predicted_main
    std::vector<std::string> warnings;
};

// S_R(N;H) = sum_{n <= N} Lambda_R(n;H,0). The per-n path factors each
// component; the per-d path sums mu(d)(log R/d)^k residue counts over
// d <= R. The two are the same sum reorganized and must agree to float
// error. Prediction: S(H) * N.
MomentReport first_moment(const HTuple& H, double R, uint64_t N,
                          MomentPath path, const FactorSieve& sieve,
                          int workers = 1);

// sum_{n <= N} Lambda_R(n;H1,l1) Lambda_R(n;H2,l2), with the predicted
// main term C(l1+l2,l1) (log R)^{r+l1+l2} / (r+l1+l2)! * S(H1 u H2) * N,
// r = |H1 n H2|.
MomentReport pair_correlation(const HTuple& H1, const HTuple& H2,
                              unsigned l1, unsigned l2, double R, uint64_t N,
                              const FactorSieve& sieve, int workers = 1);

// Case constant C_R for the prime-weighted correlation, by membership
// of the evaluation shift h0.
struct Prop2Case {
    enum Kind { NotInH, InH1Only, InBoth } kind = NotInH;
    bool swapped = false;   // true when the roles of H1/H2 were relabeled
    double C_R = 1.0;
};

Prop2Case prop2_case(const HTuple& H1, const HTuple& H2, unsigned l1,
                     unsigned l2, uint64_t h0, double R);

// sum_{n <= N} Lambda_R(n;H1,l1) Lambda_R(n;H2,l2) theta(n+h0), with the
// case-dependent predicted main term
//   C_R * C(l1+l2,l1) * S(H^0) * N * (log R)^{r+l1+l2} / (r+l1+l2)!.
MomentReport weighted_correlation(const HTuple& H1, const HTuple& H2,
                                  unsigned l1, unsigned l2, uint64_t h0,
                                  double R, uint64_t N,
                                  const FactorSieve& sieve,
                                  const PrimeTable& table);

// Weight selector for the rho statistic.
struct RhoWeight {
    enum Kind { Ell, Product, Polynomial } kind = Ell;
    unsigned ell = 0;                // Ell
    std::vector<double> poly_b;      // Polynomial: f = sum b_l (log R)^-l Lambda_R(n;H,l)
};

// rho = Q2 / (Q1 log 3N) over n in (N, 2N], where Q1 sums f^2 and Q2 sums
// f^2 * sum_i theta(n+h_i). rho > r signals a tuple instance with at
// least r+1 prime components in the sampled range.
double rho_statistic(const HTuple& H, const RhoWeight& weight, double R,
                     uint64_t N, const FactorSieve& sieve,
                     const PrimeTable& table, int workers = 1);

}  // namespace tuplesieve
