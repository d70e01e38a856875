#pragma once

// Truncated Euler products for the singular series S(H) and its
// augmented form S(H union {h0}), plus the Gallagher window average.

#include <cstdint>
#include <optional>

#include "tuplesieve/primes.hpp"
#include "tuplesieve/tuples.hpp"

namespace tuplesieve {

struct SingularSeriesValue {
    double value = 0.0;            // 0 exactly iff some factor vanished
    uint64_t truncation_prime = 0; // product taken over p <= P
    double tail_bound = 0.0;       // bound on |log ratio| of omitted factors
    std::vector<uint64_t> shifts;  // the tuple evaluated
    bool admissible() const { return value != 0.0; }
};

// prod_{p <= P} (1 - 1/p)^{-k} (1 - nu_p(H)/p), factors accumulated in log
// space with compensated summation. Requires P >= max(2*diameter, 2k^2) so
// that every omitted factor has nu_p = k and satisfies
// |log factor| <= 2k^2/p^2; the tail bound is 2k^2/(P log P).
// Passing a prime table with limit >= P avoids an internal sieve.
SingularSeriesValue singular_series(const HTuple& H, uint64_t P,
                                    const PrimeTable* table = nullptr);

// S(H union {h0}); when h0 is already a member this is S(H).
SingularSeriesValue singular_series_augmented(const HTuple& H, uint64_t h0,
                                              uint64_t P,
                                              const PrimeTable* table = nullptr);

enum class GallagherConvention { Ordered, Unordered };

// Window average of S over k-tuples from {1..h}:
//   ordered:    sum over distinct ordered tuples of S(H) / h^k
//   unordered:  sum over sets of S(H) / (h^k / k!)
// Both tend to 1 as h grows. Cost is ~h^k singular-series evaluations
// (translation classes are cached); k > 3 is refused.
double gallagher_ratio(unsigned k, uint64_t h, GallagherConvention convention,
                       uint64_t truncation = 100'000,
                       const PrimeTable* table = nullptr);

}  // namespace tuplesieve
