#include "tuplesieve/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <thread>

#include "tuplesieve/numerics.hpp"

namespace tuplesieve {

namespace {
constexpr uint64_t kSegmentBits = 1u << 20;  // numbers per sieve segment
constexpr char kCacheMagic[4] = {'G', 'P', 'Y', 'P'};
constexpr uint32_t kCacheVersion = 1;
}  // namespace

PrimeTable PrimeTable::build(uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("PrimeTable: limit must be >= 2");
    PrimeTable t;
    t.limit_ = limit;
    t.bits_.assign((limit >> 6) + 1, 0);

    // base primes up to sqrt(limit)
    uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    while (root * root > limit) --root;
    std::vector<uint8_t> base(root + 1, 1);
    std::vector<uint64_t> base_primes;
    for (uint64_t p = 2; p <= root; ++p) {
        if (!base[p]) continue;
        base_primes.push_back(p);
        for (uint64_t m = p * p; m <= root; m += p) base[m] = 0;
    }

    std::vector<uint8_t> seg(kSegmentBits);
    for (uint64_t lo = 2; lo <= limit; lo += kSegmentBits) {
        uint64_t hi = std::min(limit, lo + kSegmentBits - 1);
        std::fill(seg.begin(), seg.begin() + (hi - lo + 1), 1);
        for (uint64_t p : base_primes) {
            if (p * p > hi) break;
            uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (uint64_t m = start; m <= hi; m += p) seg[m - lo] = 0;
        }
        for (uint64_t n = lo; n <= hi; ++n) {
            if (seg[n - lo]) {
                t.bits_[n >> 6] |= 1ull << (n & 63);
                t.primes_.push_back(n);
            }
        }
    }
    return t;
}

bool PrimeTable::save(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) return false;
    bool ok = std::fwrite(kCacheMagic, 1, 4, f) == 4;
    uint32_t ver = kCacheVersion;
    uint64_t lim = limit_;
    uint64_t nwords = bits_.size();
    ok = ok && std::fwrite(&ver, sizeof ver, 1, f) == 1;
    ok = ok && std::fwrite(&lim, sizeof lim, 1, f) == 1;
    ok = ok && std::fwrite(&nwords, sizeof nwords, 1, f) == 1;
    ok = ok && std::fwrite(bits_.data(), sizeof(uint64_t), nwords, f) == nwords;
    std::fclose(f);
    return ok;
}

std::optional<PrimeTable> PrimeTable::load(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return std::nullopt;
    char magic[4];
    uint32_t ver = 0;
    uint64_t lim = 0, nwords = 0;
    bool ok = std::fread(magic, 1, 4, f) == 4 &&
              std::memcmp(magic, kCacheMagic, 4) == 0 &&
              std::fread(&ver, sizeof ver, 1, f) == 1 && ver == kCacheVersion &&
              std::fread(&lim, sizeof lim, 1, f) == 1 &&
              std::fread(&nwords, sizeof nwords, 1, f) == 1 &&
              nwords == (lim >> 6) + 1;
    if (!ok) {
        std::fclose(f);
        return std::nullopt;
    }
    PrimeTable t;
    t.limit_ = lim;
    t.bits_.resize(nwords);
    ok = std::fread(t.bits_.data(), sizeof(uint64_t), nwords, f) == nwords;
    std::fclose(f);
    if (!ok) return std::nullopt;
    for (uint64_t n = 2; n <= lim; ++n)
        if ((t.bits_[n >> 6] >> (n & 63)) & 1) t.primes_.push_back(n);
    return t;
}

double theta(uint64_t n, const PrimeTable& table) {
    if (n > table.limit()) throw std::out_of_range("theta: n exceeds table limit");
    if (n < 2) return 0.0;
    return table.is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
}

double theta_sum(uint64_t x, const PrimeTable& table) {
    if (x > table.limit()) throw std::out_of_range("theta_sum: x exceeds table limit");
    KahanSum s;
    for (uint64_t p : table.primes()) {
        if (p > x) break;
        s.add(std::log(static_cast<double>(p)));
    }
    return s.value();
}

uint64_t euler_phi(uint64_t q) {
    if (q == 0) throw std::invalid_argument("euler_phi: q must be positive");
    uint64_t result = q;
    uint64_t n = q;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

ProgressionRemainder theta_progression(uint64_t x, uint64_t q, uint64_t a,
                                       const PrimeTable& table) {
    if (q < 1) throw std::invalid_argument("theta_progression: q must be >= 1");
    if (x > table.limit())
        throw std::out_of_range("theta_progression: x exceeds table limit");
    ProgressionRemainder r;
    r.x = x;
    r.q = q;
    r.a = a % q;
    KahanSum s;
    for (uint64_t p : table.primes()) {
        if (p > x) break;
        if (p % q == r.a) s.add(std::log(static_cast<double>(p)));
    }
    r.theta_value = s.value();
    uint64_t g = std::gcd(r.a == 0 ? q : r.a, q);
    r.main_term = (g == 1) ? static_cast<double>(x) / static_cast<double>(euler_phi(q)) : 0.0;
    r.E = r.theta_value - r.main_term;
    return r;
}

namespace {

// theta accumulated per residue class, one pass over the primes <= x.
std::vector<KahanSum> theta_by_class(uint64_t x, uint64_t q, const PrimeTable& table) {
    std::vector<KahanSum> th(q);
    for (uint64_t p : table.primes()) {
        if (p > x) break;
        th[p % q].add(std::log(static_cast<double>(p)));
    }
    return th;
}

std::vector<uint64_t> coprime_residues(uint64_t q) {
    std::vector<uint64_t> out;
    for (uint64_t a = 0; a < q; ++a)
        if (std::gcd(a == 0 ? q : a, q) == 1) out.push_back(a);
    return out;
}

}  // namespace

double remainder_max(uint64_t x, uint64_t q, const PrimeTable& table) {
    if (q < 1) throw std::invalid_argument("remainder_max: q must be >= 1");
    if (x > table.limit())
        throw std::out_of_range("remainder_max: x exceeds table limit");
    if (x == 0) return 0.0;
    if (q == 1) return std::abs(theta_sum(x, table) - static_cast<double>(x));
    auto th = theta_by_class(x, q, table);
    double main = static_cast<double>(x) / static_cast<double>(euler_phi(q));
    double best = 0.0;
    for (uint64_t a : coprime_residues(q))
        best = std::max(best, std::abs(th[a].value() - main));
    return best;
}

double remainder_sup(uint64_t x, uint64_t q, const PrimeTable& table) {
    if (q < 1) throw std::invalid_argument("remainder_sup: q must be >= 1");
    if (x > table.limit())
        throw std::out_of_range("remainder_sup: x exceeds table limit");
    if (x == 0) return 0.0;

    // E'(y,q) can only attain its running max at a prime, just before a
    // prime, or at x: theta is constant between primes and the main term
    // moves linearly, so each |E| is extremal at interval endpoints.
    std::vector<uint64_t> events;
    for (uint64_t p : table.primes()) {
        if (p > x) break;
        if (p >= 2) events.push_back(p - 1);
        events.push_back(p);
    }
    events.push_back(x);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    while (!events.empty() && events.front() == 0) events.erase(events.begin());

    auto copr = coprime_residues(q);
    double phi = static_cast<double>(euler_phi(q));
    std::vector<KahanSum> th(q);
    size_t pi = 0;
    const auto& primes = table.primes();
    double best = 0.0;
    for (uint64_t y : events) {
        if (y > x) break;
        while (pi < primes.size() && primes[pi] <= y) {
            th[primes[pi] % q].add(std::log(static_cast<double>(primes[pi])));
            ++pi;
        }
        double main = static_cast<double>(y) / phi;
        for (uint64_t a : copr)
            best = std::max(best, std::abs(th[a % q].value() - main));
    }
    return best;
}

double bv_sum(uint64_t N, uint64_t Q, const PrimeTable& table,
              RemainderMode mode, int workers) {
    if (Q > N) throw std::invalid_argument("bv_sum: need Q <= N");
    if (N > table.limit()) throw std::out_of_range("bv_sum: N exceeds table limit");
    workers = std::max(1, workers);
    auto term = [&](uint64_t q) {
        return mode == RemainderMode::EPrime ? remainder_max(N, q, table)
                                             : remainder_sup(N, q, table);
    };
    if (workers == 1 || Q < 8) {
        KahanSum s;
        for (uint64_t q = 1; q <= Q; ++q) s.add(term(q));
        return s.value();
    }
    std::vector<KahanSum> partial(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() {
            for (uint64_t q = 1 + w; q <= Q; q += workers) partial[w].add(term(q));
        });
    }
    for (auto& t : threads) t.join();
    KahanSum s;
    for (int w = 0; w < workers; ++w) s.add(partial[w].value());
    return s.value();
}

DivisorFunctionValue divisor_fn(uint64_t q, double m) {
    if (q < 1) throw std::invalid_argument("divisor_fn: q must be >= 1");
    DivisorFunctionValue v;
    v.q = q;
    v.m = m;
    uint64_t n = q;
    unsigned omega = 0;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) throw std::invalid_argument("divisor_fn: q not squarefree");
            ++omega;
        }
    }
    if (n > 1) ++omega;
    v.omega = omega;
    v.value = std::pow(m, static_cast<double>(omega));
    return v;
}

std::pair<double, double> lemma2_sums(uint64_t x, double m) {
    if (x < 1) throw std::invalid_argument("lemma2_sums: x must be >= 1");
    if (m <= 0.0) throw std::invalid_argument("lemma2_sums: m must be positive");
    if (x > 200'000'000) throw resource_limit_error("lemma2_sums: x beyond enumeration budget");
    std::vector<uint8_t> omega(x + 1, 0);
    std::vector<uint8_t> squarefree(x + 1, 1);
    for (uint64_t p = 2; p <= x; ++p) {
        if (omega[p] != 0) continue;  // composite, already touched by a smaller prime
        for (uint64_t mlt = p; mlt <= x; mlt += p) ++omega[mlt];
        if (p <= x / p)
            for (uint64_t sq = p * p; sq <= x; sq += p * p) squarefree[sq] = 0;
    }
    // powers of m up to the largest omega in range
    unsigned maxo = 0;
    for (uint64_t qq = 1; qq <= x; ++qq) maxo = std::max<unsigned>(maxo, omega[qq]);
    std::vector<double> mpow(maxo + 1, 1.0);
    for (unsigned i = 1; i <= maxo; ++i) mpow[i] = mpow[i - 1] * m;
    KahanSum dprime, dstar;
    for (uint64_t qq = 1; qq <= x; ++qq) {
        if (!squarefree[qq]) continue;
        double dm = mpow[omega[qq]];
        dprime.add(dm / static_cast<double>(qq));
        dstar.add(dm);
    }
    return {dprime.value(), dstar.value()};
}

}  // namespace tuplesieve
