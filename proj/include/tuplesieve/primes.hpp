#pragma once

// Prime sieving, Chebyshev theta sums in progressions, the remainder
// terms E/E'/E*, and generalized divisor-function sums.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tuplesieve/errors.hpp"

namespace tuplesieve {

// Primality bitset plus ascending prime list up to a fixed limit.
// Immutable after construction; safe to share across threads.
class PrimeTable {
public:
    static PrimeTable build(uint64_t limit);

    uint64_t limit() const { return limit_; }
    const std::vector<uint64_t>& primes() const { return primes_; }

    bool is_prime(uint64_t n) const {
        if (n > limit_) throw std::out_of_range("PrimeTable: n exceeds limit");
        return (bits_[n >> 6] >> (n & 63)) & 1;
    }

    // On-disk cache: "GPYP" magic, u32 version, u64 limit, u64 word count,
    // then the bitset words (bit i set iff i prime), all little endian.
    bool save(const std::string& path) const;
    static std::optional<PrimeTable> load(const std::string& path);

private:
    PrimeTable() = default;
    uint64_t limit_ = 0;
    std::vector<uint64_t> bits_;
    std::vector<uint64_t> primes_;
};

// theta(n) = log n if n prime, else 0.
double theta(uint64_t n, const PrimeTable& table);

// Chebyshev theta over the whole range [1, x].
double theta_sum(uint64_t x, const PrimeTable& table);

uint64_t euler_phi(uint64_t q);

// theta(x; q, a) with its main term and remainder E = theta - main.
struct ProgressionRemainder {
    uint64_t x = 0;
    uint64_t q = 1;
    uint64_t a = 0;
    double theta_value = 0.0;
    double main_term = 0.0;
    double E = 0.0;
};

ProgressionRemainder theta_progression(uint64_t x, uint64_t q, uint64_t a,
                                       const PrimeTable& table);

// E'(x,q): max over residues a coprime to q of |E(x;q,a)|.
double remainder_max(uint64_t x, uint64_t q, const PrimeTable& table);

// E*(x,q): max over 1 <= y <= x of E'(y,q). Between primes the theta sums
// are constant and the main term linear, so the scan only needs y at each
// prime, just before each prime, and at x.
double remainder_sup(uint64_t x, uint64_t q, const PrimeTable& table);

enum class RemainderMode { EPrime, EStar };

// sum_{q <= Q} E'(N,q) (or E*). Partitionable over q; partial sums are
// combined in worker order so results are deterministic for a fixed
// worker count.
double bv_sum(uint64_t N, uint64_t Q, const PrimeTable& table,
              RemainderMode mode, int workers = 1);

// d_m(q) = m^omega(q) for squarefree q, any real m > 0.
struct DivisorFunctionValue {
    uint64_t q = 1;
    double m = 1.0;
    unsigned omega = 0;
    double value = 1.0;
};

DivisorFunctionValue divisor_fn(uint64_t q, double m);

// D'(x,m) = sum of d_m(q)/q and D*(x,m) = sum of d_m(q), both over
// squarefree q <= x, by direct enumeration.
std::pair<double, double> lemma2_sums(uint64_t x, double m);

}  // namespace tuplesieve
