#include "tuplesieve/singular_series.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tuplesieve/numerics.hpp"

namespace tuplesieve {

namespace {

SingularSeriesValue euler_product(const HTuple& H, uint64_t P,
                                  const PrimeTable& table) {
    SingularSeriesValue out;
    out.truncation_prime = P;
    out.shifts = H.shifts();
    const double k = static_cast<double>(H.k());
    const uint64_t diameter = H.diameter();
    out.tail_bound = 2.0 * k * k / (static_cast<double>(P) * std::log(static_cast<double>(P)));

    KahanSum log_sum;
    for (uint64_t p : table.primes()) {
        if (p > P) break;
        unsigned nu = (p > diameter) ? static_cast<unsigned>(H.k()) : nu_p(H, p);
        if (nu == p) {
            out.value = 0.0;  // exact zero: inadmissible tuple
            return out;
        }
        double pd = static_cast<double>(p);
        log_sum.add(-k * std::log1p(-1.0 / pd));
        log_sum.add(std::log1p(-static_cast<double>(nu) / pd));
    }
    out.value = std::exp(log_sum.value());
    return out;
}

}  // namespace

SingularSeriesValue singular_series(const HTuple& H, uint64_t P,
                                    const PrimeTable* table) {
    uint64_t k = H.k();
    uint64_t min_P = std::max<uint64_t>(2 * H.diameter(), 2 * k * k);
    min_P = std::max<uint64_t>(min_P, 2);
    if (P < min_P)
        throw std::invalid_argument(
            "singular_series: truncation must be >= max(2*diameter, 2k^2) "
            "for the tail bound to apply");
    if (table && table->limit() >= P) return euler_product(H, P, *table);
    PrimeTable own = PrimeTable::build(P);
    return euler_product(H, P, own);
}

SingularSeriesValue singular_series_augmented(const HTuple& H, uint64_t h0,
                                              uint64_t P, const PrimeTable* table) {
    if (H.contains(h0)) return singular_series(H, P, table);
    std::vector<uint64_t> shifts = H.shifts();
    shifts.push_back(h0);
    std::sort(shifts.begin(), shifts.end());
    return singular_series(HTuple(std::move(shifts)), P, table);
}

double gallagher_ratio(unsigned k, uint64_t h, GallagherConvention convention,
                       uint64_t truncation, const PrimeTable* table) {
    if (k == 0) throw std::invalid_argument("gallagher_ratio: k must be >= 1");
    if (k > 3) throw resource_limit_error("gallagher_ratio: cost grows as h^k; k <= 3 only");
    if (h < k) throw std::invalid_argument("gallagher_ratio: need h >= k");

    std::optional<PrimeTable> own;
    const PrimeTable* pt = (table && table->limit() >= truncation) ? table : nullptr;
    if (!pt) {
        own = PrimeTable::build(truncation);
        pt = &*own;
    }

    // S is translation invariant; cache by the normalized (h1 = 0) tuple.
    std::map<std::vector<uint64_t>, double> cache;
    KahanSum sum;
    enumerate_tuples(k, h, /*ordered=*/false, [&](const std::vector<uint64_t>& shifts,
                                                  uint64_t) {
        std::vector<uint64_t> norm(shifts.size());
        for (size_t i = 0; i < shifts.size(); ++i) norm[i] = shifts[i] - shifts[0];
        auto it = cache.find(norm);
        double s;
        if (it != cache.end()) {
            s = it->second;
        } else {
            s = singular_series(HTuple(norm), truncation, pt).value;
            cache.emplace(std::move(norm), s);
        }
        sum.add(s);
    });

    double hk = std::pow(static_cast<double>(h), static_cast<double>(k));
    double kfact = factorial_d(k);
    if (convention == GallagherConvention::Ordered)
        return kfact * sum.value() / hk;        // ordered tuples / h^k
    return sum.value() / (hk / kfact);          // sets / (h^k / k!)
}

}  // namespace tuplesieve
