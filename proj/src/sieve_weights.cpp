#include "tuplesieve/sieve_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "tuplesieve/numerics.hpp"

namespace tuplesieve {

FactorSieve FactorSieve::build(uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("FactorSieve: limit must be >= 2");
    if (limit > 4'000'000'000ull)
        throw resource_limit_error("FactorSieve: limit beyond 32-bit factor range");
    FactorSieve s;
    s.limit_ = limit;
    s.spf_.assign(limit + 1, 0);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (s.spf_[i] == 0) {
            for (uint64_t j = i; j <= limit; j += i)
                if (s.spf_[j] == 0) s.spf_[j] = static_cast<uint32_t>(i);
        }
    }
    return s;
}

void FactorSieve::distinct_primes(uint64_t n, std::vector<uint64_t>& out) const {
    if (n > limit_) throw std::out_of_range("FactorSieve: n exceeds limit");
    while (n > 1) {
        uint64_t p = spf_[n];
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
}

WeightParams::WeightParams(HTuple tuple, unsigned l, double r)
    : H(std::move(tuple)), ell(l), R(r) {
    if (ell > H.k()) throw std::invalid_argument("WeightParams: need ell <= k");
    if (R < 2.0) throw std::invalid_argument("WeightParams: need R >= 2");
}

namespace {

void distinct_primes_trial(uint64_t n, std::vector<uint64_t>& out) {
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
}

double pow_int(double base, unsigned e) {
    double r = 1.0;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// sum of mu(d) (log R/d)^e over squarefree divisors d <= R assembled from
// the given distinct primes (ascending).
double divisor_sum_pow(const std::vector<uint64_t>& primes, double R, unsigned e) {
    const uint64_t Rf = static_cast<uint64_t>(R);
    const double logR = std::log(R);
    KahanSum sum;
    // iterative DFS over subsets with product <= R
    struct Frame { size_t idx; uint64_t d; int mu; };
    std::vector<Frame> stack;
    stack.push_back({0, 1, +1});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        sum.add(f.mu * pow_int(logR - std::log(static_cast<double>(f.d)), e));
        for (size_t j = f.idx; j < primes.size(); ++j) {
            // overflow-free d * p <= Rf test; primes ascend, so later ones
            // exceed R too
            if (primes[j] > Rf / f.d) break;
            stack.push_back({j + 1, f.d * primes[j], -f.mu});
        }
    }
    return sum.value();
}

}  // namespace

double lambda_R(uint64_t n, double R) {
    if (n < 1) throw std::invalid_argument("lambda_R: n must be >= 1");
    if (R < 2.0) throw std::invalid_argument("lambda_R: need R >= 2");
    std::vector<uint64_t> ps;
    distinct_primes_trial(n, ps);
    return divisor_sum_pow(ps, R, 1);
}

double lambda_R(uint64_t n, double R, const FactorSieve& sieve) {
    std::vector<uint64_t> ps;
    sieve.distinct_primes(n, ps);
    return divisor_sum_pow(ps, R, 1);
}

double generalized_von_mangoldt(uint64_t n, unsigned k) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("generalized_von_mangoldt: need n >= 1, k >= 1");
    if (n > 1'000'000'000'000ull)
        throw resource_limit_error("generalized_von_mangoldt: n beyond factoring budget");
    std::vector<uint64_t> ps;
    distinct_primes_trial(n, ps);
    // full divisor sum, no truncation: sum mu(d) (log n/d)^k over d | rad(n)
    const double logn = std::log(static_cast<double>(n));
    KahanSum sum;
    struct Frame { size_t idx; double logd; int mu; };
    std::vector<Frame> stack;
    stack.push_back({0, 0.0, +1});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        sum.add(f.mu * pow_int(logn - f.logd, k));
        for (size_t j = f.idx; j < ps.size(); ++j)
            stack.push_back({j + 1, f.logd + std::log(static_cast<double>(ps[j])), -f.mu});
    }
    return sum.value();
}

double lambda_R_weight(uint64_t n, const WeightParams& params, const FactorSieve& sieve) {
    if (n < 1) throw std::invalid_argument("lambda_R_weight: n must be >= 1");
    std::vector<uint64_t> ps;
    for (uint64_t h : params.H.shifts()) sieve.distinct_primes(n + h, ps);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    unsigned e = static_cast<unsigned>(params.H.k()) + params.ell;
    return divisor_sum_pow(ps, params.R, e) / factorial_d(e);
}

namespace {

// residues b mod d (squarefree) with d | (b+h_1)...(b+h_k), via CRT over
// the prime factors of d.
std::vector<uint64_t> polynomial_roots_mod(const HTuple& H, uint64_t d) {
    std::vector<uint64_t> primes;
    {
        uint64_t n = d;
        for (uint64_t p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                n /= p;
                if (n % p == 0)
                    throw std::invalid_argument("divisor_residue_count: d not squarefree");
                primes.push_back(p);
            }
        }
        if (n > 1) primes.push_back(n);
    }
    std::vector<uint64_t> roots{0};
    uint64_t mod = 1;
    for (uint64_t p : primes) {
        // roots mod p: distinct -h mod p
        std::vector<uint64_t> rp;
        for (uint64_t h : H.shifts()) rp.push_back((p - h % p) % p);
        std::sort(rp.begin(), rp.end());
        rp.erase(std::unique(rp.begin(), rp.end()), rp.end());
        // CRT lift
        std::vector<uint64_t> next;
        next.reserve(roots.size() * rp.size());
        // x = r (mod mod), x = s (mod p): x = r + mod * t, t = (s - r) * mod^{-1} mod p
        uint64_t minv = 1;
        {
            // Fermat inverse of mod (coprime to p) modulo the prime p
            uint64_t e = p - 2, base = mod % p;
            while (e) {
                if (e & 1) minv = (minv * base) % p;
                base = (base * base) % p;
                e >>= 1;
            }
        }
        for (uint64_t r : roots) {
            for (uint64_t s : rp) {
                uint64_t t = ((s + p - r % p) % p * minv) % p;
                next.push_back(r + mod * t);
            }
        }
        roots.swap(next);
        mod *= p;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

uint64_t divisor_residue_count(const HTuple& H, uint64_t d, uint64_t N) {
    if (d < 1) throw std::invalid_argument("divisor_residue_count: d must be >= 1");
    if (d == 1) return N;
    uint64_t count = 0;
    for (uint64_t b : polynomial_roots_mod(H, d)) {
        if (b == 0)
            count += N / d;
        else if (b <= N)
            count += (N - b) / d + 1;
    }
    return count;
}

namespace {

// Partition [1,N] into chunks, accumulate per-chunk compensated sums, and
// combine in chunk order so results don't depend on thread scheduling.
template <typename PerN>
double parallel_sum(uint64_t N, int workers, PerN&& per_n) {
    workers = std::max(1, workers);
    if (workers == 1) {
        KahanSum s;
        for (uint64_t n = 1; n <= N; ++n) s.add(per_n(n));
        return s.value();
    }
    uint64_t chunk = (N + workers - 1) / workers;
    std::vector<KahanSum> partial(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() {
            uint64_t lo = 1 + w * chunk;
            uint64_t hi = std::min<uint64_t>(N, lo + chunk - 1);
            for (uint64_t n = lo; n <= hi; ++n) partial[w].add(per_n(n));
        });
    }
    for (auto& t : threads) t.join();
    KahanSum s;
    for (int w = 0; w < workers; ++w) s.add(partial[w].value());
    return s.value();
}

uint64_t singular_truncation_for(const HTuple& H) {
    uint64_t k = H.k();
    uint64_t p = std::max<uint64_t>(2 * H.diameter(), 2 * k * k);
    return std::max<uint64_t>(p, 100'000);
}

void warn_moment_ranges(MomentReport& report, double R, uint64_t N, unsigned M,
                        bool prop2) {
    // soft guidance only: desk-scale experiments deliberately stress these
    double logN = std::log(static_cast<double>(N));
    double cap = prop2 ? std::pow(static_cast<double>(N), 0.25)
                       : std::sqrt(static_cast<double>(N)) / std::pow(logN, 4.0 * M);
    if (R > cap)
        report.warnings.push_back(prop2 ? "R above the N^(1/4) guidance range"
                                        : "R above the N^(1/2)(log N)^(-4M) guidance range");
}

}  // namespace

MomentReport first_moment(const HTuple& H, double R, uint64_t N, MomentPath path,
                          const FactorSieve& sieve, int workers) {
    if (R < 2.0) throw std::invalid_argument("first_moment: need R >= 2");
    const unsigned k = static_cast<unsigned>(H.k());
    MomentReport report;
    report.N = N;
    report.R = R;
    report.params = "H=" + H.to_string() + " ell=0";
    report.brute_force = std::numeric_limits<double>::quiet_NaN();
    report.fast_path = std::numeric_limits<double>::quiet_NaN();

    if (path == MomentPath::PerN || path == MomentPath::Both) {
        if (N + H.shifts().back() > sieve.limit())
            throw std::out_of_range("first_moment: factor sieve too small");
        WeightParams params(H, 0, R);
        report.brute_force = parallel_sum(
            N, workers, [&](uint64_t n) { return lambda_R_weight(n, params, sieve); });
    }
    if (path == MomentPath::PerD || path == MomentPath::Both) {
        // (1/k!) sum_{d <= R squarefree} mu(d) (log R/d)^k #{n <= N : d | P_H(n)}
        const uint64_t Rf = static_cast<uint64_t>(R);
        if (Rf > 100'000'000) throw resource_limit_error("first_moment: R too large for per_d path");
        // total root count grows like R (log R)^{k-1}
        if (R * pow_int(std::log(R), k - 1) > 2e10)
            throw resource_limit_error("first_moment: per_d root enumeration too costly for this R, k");
        const double logR = std::log(R);
        // Moebius mu up to R by sieving
        std::vector<int8_t> mu(Rf + 1, 1);
        {
            std::vector<uint8_t> comp(Rf + 1, 0);
            for (uint64_t p = 2; p <= Rf; ++p) {
                if (comp[p]) continue;
                for (uint64_t j = p; j <= Rf; j += p) {
                    if (j > p) comp[j] = 1;
                    mu[j] = -mu[j];
                }
                if (p <= Rf / p)
                    for (uint64_t j = p * p; j <= Rf; j += p * p) mu[j] = 0;
            }
        }
        KahanSum s;
        for (uint64_t d = 1; d <= Rf; ++d) {
            if (mu[d] == 0) continue;
            double term = mu[d] * pow_int(logR - std::log(static_cast<double>(d)), k) *
                          static_cast<double>(divisor_residue_count(H, d, N));
            s.add(term);
        }
        report.fast_path = s.value() / factorial_d(k);
    }

    SingularSeriesValue ss = singular_series(H, singular_truncation_for(H));
    report.predicted_main = ss.value * static_cast<double>(N);
    double basis = std::isnan(report.brute_force) ? report.fast_path : report.brute_force;
    if (report.predicted_main != 0.0) {
        report.ratio = basis / report.predicted_main;
    } else {
        report.ratio = std::numeric_limits<double>::quiet_NaN();
        report.warnings.push_back("prediction-degenerate: inadmissible tuple, S(H) = 0");
    }
    warn_moment_ranges(report, R, N, k, /*prop2=*/false);
    return report;
}

MomentReport pair_correlation(const HTuple& H1, const HTuple& H2, unsigned l1,
                              unsigned l2, double R, uint64_t N,
                              const FactorSieve& sieve, int workers) {
    MomentReport report;
    report.N = N;
    report.R = R;
    report.params = "H1=" + H1.to_string() + " H2=" + H2.to_string() +
                    " l1=" + std::to_string(l1) + " l2=" + std::to_string(l2);
    uint64_t hmax = std::max(H1.shifts().back(), H2.shifts().back());
    if (N + hmax > sieve.limit())
        throw std::out_of_range("pair_correlation: factor sieve too small");

    WeightParams p1(H1, l1, R), p2(H2, l2, R);
    report.brute_force = parallel_sum(N, workers, [&](uint64_t n) {
        return lambda_R_weight(n, p1, sieve) * lambda_R_weight(n, p2, sieve);
    });
    report.fast_path = std::numeric_limits<double>::quiet_NaN();

    // union and intersection
    std::vector<uint64_t> uni = H1.shifts();
    uni.insert(uni.end(), H2.shifts().begin(), H2.shifts().end());
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    HTuple H(uni);
    unsigned r = 0;
    for (uint64_t h : H1.shifts())
        if (H2.contains(h)) ++r;

    SingularSeriesValue ss = singular_series(H, singular_truncation_for(H));
    unsigned e = r + l1 + l2;
    double logR = std::log(R);
    report.predicted_main = binomial(l1 + l2, l1) * pow_int(logR, e) /
                            factorial_d(e) * ss.value * static_cast<double>(N);
    if (report.predicted_main != 0.0) {
        report.ratio = report.brute_force / report.predicted_main;
    } else {
        report.ratio = std::numeric_limits<double>::quiet_NaN();
        report.warnings.push_back("prediction-degenerate: inadmissible union, S(H) = 0");
    }
    warn_moment_ranges(report, R, N, static_cast<unsigned>(H1.k() + H2.k()) + l1 + l2,
                       /*prop2=*/false);
    return report;
}

Prop2Case prop2_case(const HTuple& H1, const HTuple& H2, unsigned l1, unsigned l2,
                     uint64_t h0, double R) {
    Prop2Case c;
    const bool in1 = H1.contains(h0);
    const bool in2 = H2.contains(h0);
    unsigned r = 0;
    for (uint64_t h : H1.shifts())
        if (H2.contains(h)) ++r;
    const double logR = std::log(R);
    const double l1d = l1, l2d = l2, rd = r;
    if (!in1 && !in2) {
        c.kind = Prop2Case::NotInH;
        c.C_R = 1.0;
    } else if (in1 && in2) {
        c.kind = Prop2Case::InBoth;
        c.C_R = (l1d + l2d + 2.0) * (l1d + l2d + 1.0) * logR /
                ((l1d + 1.0) * (l2d + 1.0) * (rd + l1d + l2d + 1.0));
    } else {
        c.kind = Prop2Case::InH1Only;
        c.swapped = !in1;  // h0 in H2 only: same formula with l1 <-> l2
        double la = c.swapped ? l2d : l1d;
        c.C_R = (l1d + l2d + 1.0) * logR / ((la + 1.0) * (rd + l1d + l2d + 1.0));
    }
    return c;
}

MomentReport weighted_correlation(const HTuple& H1, const HTuple& H2, unsigned l1,
                                  unsigned l2, uint64_t h0, double R, uint64_t N,
                                  const FactorSieve& sieve, const PrimeTable& table) {
    MomentReport report;
    report.N = N;
    report.R = R;
    report.params = "H1=" + H1.to_string() + " H2=" + H2.to_string() +
                    " l1=" + std::to_string(l1) + " l2=" + std::to_string(l2) +
                    " h0=" + std::to_string(h0);
    if (N + h0 > table.limit())
        throw std::out_of_range("weighted_correlation: N + h0 exceeds prime table");
    uint64_t hmax = std::max(H1.shifts().back(), H2.shifts().back());
    if (N + hmax > sieve.limit())
        throw std::out_of_range("weighted_correlation: factor sieve too small");

    WeightParams p1(H1, l1, R), p2(H2, l2, R);
    // only n with n + h0 prime contribute
    KahanSum s;
    for (uint64_t p : table.primes()) {
        if (p <= h0) continue;
        if (p > N + h0) break;
        uint64_t n = p - h0;
        if (n < 1) continue;
        s.add(lambda_R_weight(n, p1, sieve) * lambda_R_weight(n, p2, sieve) *
              std::log(static_cast<double>(p)));
    }
    report.brute_force = s.value();
    report.fast_path = std::numeric_limits<double>::quiet_NaN();

    std::vector<uint64_t> uni = H1.shifts();
    uni.insert(uni.end(), H2.shifts().begin(), H2.shifts().end());
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    HTuple H(uni);
    unsigned r = 0;
    for (uint64_t h : H1.shifts())
        if (H2.contains(h)) ++r;

    Prop2Case cs = prop2_case(H1, H2, l1, l2, h0, R);
    // H^0 = H union {h0}; equal to H when h0 is a member
    std::vector<uint64_t> h0shifts = H.shifts();
    if (!H.contains(h0)) {
        h0shifts.push_back(h0);
        std::sort(h0shifts.begin(), h0shifts.end());
    }
    HTuple H0(h0shifts);
    SingularSeriesValue ss = singular_series(H0, singular_truncation_for(H0));

    unsigned e = r + l1 + l2;
    report.predicted_main = cs.C_R * binomial(l1 + l2, l1) * ss.value *
                            static_cast<double>(N) * pow_int(std::log(R), e) /
                            factorial_d(e);
    if (report.predicted_main != 0.0) {
        report.ratio = report.brute_force / report.predicted_main;
    } else {
        report.ratio = std::numeric_limits<double>::quiet_NaN();
        report.warnings.push_back("prediction-degenerate: S(H^0) = 0");
    }
    warn_moment_ranges(report, R, N, static_cast<unsigned>(H1.k() + H2.k()) + l1 + l2,
                       /*prop2=*/true);
    return report;
}

double rho_statistic(const HTuple& H, const RhoWeight& weight, double R, uint64_t N,
                     const FactorSieve& sieve, const PrimeTable& table, int workers) {
    if (R < 2.0) throw std::invalid_argument("rho_statistic: need R >= 2");
    uint64_t hmax = H.shifts().back();
    if (2 * N + hmax > table.limit())
        throw std::out_of_range("rho_statistic: 2N + diameter exceeds prime table");
    if (2 * N + hmax > sieve.limit())
        throw std::out_of_range("rho_statistic: factor sieve too small");

    std::vector<WeightParams> params;
    if (weight.kind == RhoWeight::Ell) {
        params.emplace_back(H, weight.ell, R);
    } else if (weight.kind == RhoWeight::Polynomial) {
        for (size_t l = 0; l < weight.poly_b.size(); ++l)
            params.emplace_back(H, static_cast<unsigned>(l), R);
    }
    const double logR = std::log(R);

    auto f_of = [&](uint64_t n) -> double {
        switch (weight.kind) {
            case RhoWeight::Ell:
                return lambda_R_weight(n, params[0], sieve);
            case RhoWeight::Product: {
                double f = 1.0;
                for (uint64_t h : H.shifts()) f *= lambda_R(n + h, R, sieve);
                return f;
            }
            case RhoWeight::Polynomial: {
                double f = 0.0, invlog = 1.0;
                for (size_t l = 0; l < weight.poly_b.size(); ++l) {
                    if (weight.poly_b[l] != 0.0)
                        f += weight.poly_b[l] * invlog * lambda_R_weight(n, params[l], sieve);
                    invlog /= logR;
                }
                return f;
            }
        }
        return 0.0;
    };

    // Q1 and Q2 over (N, 2N]
    workers = std::max(1, workers);
    std::vector<KahanSum> q1(workers), q2(workers);
    uint64_t span = N;
    uint64_t chunk = (span + workers - 1) / workers;
    auto work = [&](int w) {
        uint64_t lo = N + 1 + w * chunk;
        uint64_t hi = std::min<uint64_t>(2 * N, lo + chunk - 1);
        for (uint64_t n = lo; n <= hi; ++n) {
            double f = f_of(n);
            double f2 = f * f;
            q1[w].add(f2);
            double t = 0.0;
            for (uint64_t h : H.shifts()) {
                uint64_t m = n + h;
                if (table.is_prime(m)) t += std::log(static_cast<double>(m));
            }
            if (t != 0.0) q2[w].add(f2 * t);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    KahanSum Q1, Q2;
    for (int w = 0; w < workers; ++w) {
        Q1.add(q1[w].value());
        Q2.add(q2[w].value());
    }
    if (Q1.value() == 0.0)
        throw degenerate_weight_error("rho_statistic: Q1 = 0, weight vanishes on range");
    return Q2.value() / (Q1.value() * std::log(3.0 * static_cast<double>(N)));
}

}  // namespace tuplesieve
