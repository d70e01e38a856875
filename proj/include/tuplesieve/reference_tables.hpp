#pragma once

// Embedded reference rows for the two published C(theta) tables: the
// smallest (k, ell) satisfying the basic two-primes inequality, and the
// smallest (k, L) with a positive eigenvalue in the polynomial-weight
// method, each with the known minimal admissible-tuple diameter.

#include <cstdint>
#include <vector>

namespace tuplesieve {

struct ReferenceRow {
    const char* theta;     // decimal string, exact
    unsigned k;
    unsigned ell_or_L;
    int64_t h_k;
    bool h_k_upper_bound;
};

const std::vector<ReferenceRow>& reference_table_condition();
const std::vector<ReferenceRow>& reference_table_matrix();

}  // namespace tuplesieve
