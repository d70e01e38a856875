#pragma once

// Shift tuples, residue-class counts nu_p/nu_d, admissibility, the
// pairwise-difference product, intersection counts, and exhaustive
// search for narrowest admissible tuples.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tuplesieve/errors.hpp"
#include "tuplesieve/numerics.hpp"

namespace tuplesieve {

// A set of k distinct non-negative integer shifts, kept sorted ascending.
class HTuple {
public:
    explicit HTuple(std::vector<uint64_t> shifts);
    static HTuple parse(const std::string& csv);  // "0,4,6,10,12,16"

    const std::vector<uint64_t>& shifts() const { return shifts_; }
    size_t k() const { return shifts_.size(); }
    uint64_t diameter() const { return shifts_.back() - shifts_.front(); }
    bool contains(uint64_t h) const;
    std::string to_string() const;

    bool operator==(const HTuple& o) const { return shifts_ == o.shifts_; }

private:
    std::vector<uint64_t> shifts_;
};

// Number of distinct residue classes mod p occupied by the shifts.
unsigned nu_p(const HTuple& H, uint64_t p);

// Multiplicative extension to squarefree d; nu_d(H) counts residues b mod d
// with d | (b+h_1)...(b+h_k).
uint64_t nu_d(const HTuple& H, uint64_t d);

struct AdmissibilityReport {
    bool admissible = true;
    std::optional<uint64_t> witness_prime;      // first p <= k with nu_p = p
    std::map<uint64_t, unsigned> nu_values;     // nu_p for each prime p <= k
};

// Admissibility needs checking only for p <= k: larger primes cannot be
// fully covered by k shifts.
AdmissibilityReport is_admissible(const HTuple& H);

// Product of pairwise shift differences; exact. Undefined for k = 1
// (empty product) -> invalid_argument; callers use u_bound directly.
BigInt delta_product(const HTuple& H);

// U = C k^2 log(2h), an upper bound for log(delta_product) when C >= 1.
// h is the largest shift, clamped to >= 1 so singletons at 0 stay finite.
double u_bound(const HTuple& H, double C);

// nu_p(H1) + nu_p(H2) - nu_p(H1 union H2): residues mod p occupied by both.
unsigned nu_bar_p(const HTuple& H1, const HTuple& H2, uint64_t p);

// nu_p(G union {h0}) - 1, the sieve-shifted class count.
unsigned nu_star_p(const HTuple& G, uint64_t h0, uint64_t p);

struct NarrowestResult {
    std::vector<uint64_t> shifts;
    uint64_t diameter = 0;
    bool proven_minimal = false;   // false when the node budget ran out
    uint64_t nodes = 0;
};

// Minimum-diameter admissible k-tuple with h_1 = 0, by iterative deepening
// on the diameter with depth-first search and per-prime occupied-residue
// pruning. If the node budget runs out the greedy tuple found up front is
// returned as an upper bound with proven_minimal = false.
NarrowestResult narrowest_admissible(unsigned k, uint64_t node_budget = 2'000'000'000);

// Number of unordered k-element tuples from {1..h}.
BigInt tuple_count(unsigned k, uint64_t h);

// Yields every unordered k-tuple from {1..h} once, with multiplicity k!
// when ordered semantics are requested (1 otherwise). The callback gets
// (shifts, multiplicity). Enumerations beyond ~10^8 tuples are refused.
template <typename F>
void enumerate_tuples(unsigned k, uint64_t h, bool ordered, F&& fn) {
    if (k == 0 || k > h) throw std::invalid_argument("enumerate_tuples: need 1 <= k <= h");
    BigInt total = tuple_count(k, h);
    if (total > 100'000'000) throw resource_limit_error("enumerate_tuples: too many tuples");
    double mult = 1.0;
    if (ordered)
        for (unsigned i = 2; i <= k; ++i) mult *= i;
    std::vector<uint64_t> cur(k);
    // lexicographic combinations
    for (unsigned i = 0; i < k; ++i) cur[i] = i + 1;
    while (true) {
        fn(cur, static_cast<uint64_t>(mult));
        // advance
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && cur[i] == h - (k - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (unsigned j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
}

// Published minimal diameters of admissible k-tuples (OEIS A008407),
// for the k values used by the threshold tables. The k=421 entry is only
// known as an upper bound; second element flags that.
std::optional<std::pair<uint64_t, bool>> known_min_diameter(unsigned k);

}  // namespace tuplesieve
