#include "tuplesieve/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tuplesieve {

namespace {

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::vector<uint64_t> primes_upto(uint64_t n) {
    std::vector<uint64_t> out;
    for (uint64_t p = 2; p <= n; ++p)
        if (is_prime_u64(p)) out.push_back(p);
    return out;
}

}  // namespace

HTuple::HTuple(std::vector<uint64_t> shifts) : shifts_(std::move(shifts)) {
    if (shifts_.empty()) throw std::invalid_argument("HTuple: needs at least one shift");
    for (size_t i = 1; i < shifts_.size(); ++i)
        if (shifts_[i] <= shifts_[i - 1])
            throw std::invalid_argument("HTuple: shifts must be strictly increasing");
}

HTuple HTuple::parse(const std::string& csv) {
    std::vector<uint64_t> shifts;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("HTuple: empty shift in '" + csv + "'");
        shifts.push_back(std::stoull(item.substr(a, b - a + 1)));
    }
    std::sort(shifts.begin(), shifts.end());
    return HTuple(std::move(shifts));
}

bool HTuple::contains(uint64_t h) const {
    return std::binary_search(shifts_.begin(), shifts_.end(), h);
}

std::string HTuple::to_string() const {
    std::string s;
    for (size_t i = 0; i < shifts_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(shifts_[i]);
    }
    return s;
}

unsigned nu_p(const HTuple& H, uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("nu_p: p must be prime");
    std::vector<uint64_t> res;
    res.reserve(H.k());
    for (uint64_t h : H.shifts()) res.push_back(h % p);
    std::sort(res.begin(), res.end());
    res.erase(std::unique(res.begin(), res.end()), res.end());
    return static_cast<unsigned>(res.size());
}

uint64_t nu_d(const HTuple& H, uint64_t d) {
    if (d < 1) throw std::invalid_argument("nu_d: d must be >= 1");
    uint64_t result = 1;
    uint64_t n = d;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) throw std::invalid_argument("nu_d: d not squarefree");
            result *= nu_p(H, p);
        }
    }
    if (n > 1) result *= nu_p(H, n);
    return result;
}

AdmissibilityReport is_admissible(const HTuple& H) {
    AdmissibilityReport report;
    // nu_p <= k < p holds automatically for p > k
    for (uint64_t p : primes_upto(H.k())) {
        unsigned nu = nu_p(H, p);
        report.nu_values[p] = nu;
        if (nu == p && !report.witness_prime) {
            report.admissible = false;
            report.witness_prime = p;
        }
    }
    return report;
}

BigInt delta_product(const HTuple& H) {
    if (H.k() < 2)
        throw std::invalid_argument("delta_product: undefined for k = 1 (empty product)");
    BigInt prod = 1;
    const auto& s = H.shifts();
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j)
            prod *= BigInt(s[j] - s[i]);
    return prod;
}

double u_bound(const HTuple& H, double C) {
    if (C <= 0.0) throw std::invalid_argument("u_bound: C must be positive");
    double k = static_cast<double>(H.k());
    double h = static_cast<double>(std::max<uint64_t>(H.shifts().back(), 1));
    return C * k * k * std::log(2.0 * h);
}

unsigned nu_bar_p(const HTuple& H1, const HTuple& H2, uint64_t p) {
    std::vector<uint64_t> u = H1.shifts();
    u.insert(u.end(), H2.shifts().begin(), H2.shifts().end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    HTuple uni(std::move(u));
    return nu_p(H1, p) + nu_p(H2, p) - nu_p(uni, p);
}

unsigned nu_star_p(const HTuple& G, uint64_t h0, uint64_t p) {
    std::vector<uint64_t> g0 = G.shifts();
    if (!G.contains(h0)) {
        g0.push_back(h0);
        std::sort(g0.begin(), g0.end());
    }
    return nu_p(HTuple(std::move(g0)), p) - 1;
}

namespace {

struct TupleSearch {
    unsigned k;
    uint64_t D;                       // diameter cap for this round
    std::vector<uint64_t> primes;     // primes <= k
    std::vector<std::vector<uint16_t>> count;  // per prime, per residue
    std::vector<unsigned> occupied;   // distinct residues in use per prime
    std::vector<uint64_t> current;
    uint64_t budget;
    uint64_t nodes = 0;
    bool out_of_budget = false;
    std::vector<uint64_t> found;

    TupleSearch(unsigned k_, uint64_t budget_) : k(k_), budget(budget_) {
        primes = primes_upto(k);
        for (uint64_t p : primes) count.emplace_back(p, 0);
        occupied.assign(primes.size(), 0);
    }

    bool blocked(uint64_t s) const {
        // would a prime's residue classes become fully covered?
        for (size_t i = 0; i < primes.size(); ++i) {
            uint64_t r = s % primes[i];
            if (count[i][r] == 0 && occupied[i] + 1 == primes[i]) return true;
        }
        return false;
    }

    void push(uint64_t s) {
        for (size_t i = 0; i < primes.size(); ++i) {
            uint64_t r = s % primes[i];
            if (count[i][r]++ == 0) ++occupied[i];
        }
        current.push_back(s);
    }

    void pop() {
        uint64_t s = current.back();
        current.pop_back();
        for (size_t i = 0; i < primes.size(); ++i) {
            uint64_t r = s % primes[i];
            if (--count[i][r] == 0) --occupied[i];
        }
    }

    bool dfs() {
        if (++nodes > budget) {
            out_of_budget = true;
            return false;
        }
        if (current.size() == k) {
            found = current;
            return true;
        }
        unsigned remaining = k - static_cast<unsigned>(current.size());
        uint64_t last = current.back();
        for (uint64_t s = last + 1; s + (remaining - 1) <= D; ++s) {
            if (blocked(s)) continue;
            push(s);
            if (dfs()) return true;
            pop();
            if (out_of_budget) return false;
        }
        return false;
    }

    // admissible tuple at diameter <= D with first shift 0, or empty
    bool run() {
        current.clear();
        found.clear();
        for (auto& c : count) std::fill(c.begin(), c.end(), 0);
        std::fill(occupied.begin(), occupied.end(), 0);
        push(0);
        bool ok = dfs();
        pop();
        return ok;
    }
};

// Greedy admissible tuple: accept candidate shifts in increasing order
// whenever they leave every prime p <= k a free residue class.
std::vector<uint64_t> greedy_admissible(unsigned k) {
    TupleSearch s(k, ~0ull);
    std::vector<uint64_t> out;
    uint64_t cand = 0;
    while (out.size() < k) {
        if (!s.blocked(cand)) {
            s.push(cand);
            out.push_back(cand);
        }
        ++cand;
    }
    return out;
}

}  // namespace

NarrowestResult narrowest_admissible(unsigned k, uint64_t node_budget) {
    if (k < 2) throw std::invalid_argument("narrowest_admissible: k must be >= 2");
    NarrowestResult result;
    std::vector<uint64_t> greedy = greedy_admissible(k);
    uint64_t upper = greedy.back();

    TupleSearch search(k, node_budget);
    for (uint64_t D = k - 1; D < upper; ++D) {
        search.D = D;
        if (search.run()) {
            result.shifts = search.found;
            result.diameter = search.found.back();
            result.proven_minimal = true;
            result.nodes = search.nodes;
            return result;
        }
        if (search.out_of_budget) {
            result.shifts = greedy;
            result.diameter = upper;
            result.proven_minimal = false;  // upper bound only
            result.nodes = search.nodes;
            return result;
        }
    }
    result.shifts = greedy;
    result.diameter = upper;
    result.proven_minimal = true;  // every smaller diameter failed exhaustively
    result.nodes = search.nodes;
    return result;
}

BigInt tuple_count(unsigned k, uint64_t h) {
    return binomial_exact(h, k);
}

std::optional<std::pair<uint64_t, bool>> known_min_diameter(unsigned k) {
    switch (k) {
        case 2: return {{2, false}};
        case 3: return {{6, false}};
        case 4: return {{8, false}};
        case 5: return {{12, false}};
        case 6: return {{16, false}};
        case 7: return {{20, false}};
        case 8: return {{26, false}};
        case 9: return {{30, false}};
        case 10: return {{32, false}};
        case 11: return {{36, false}};
        case 12: return {{42, false}};
        case 16: return {{60, false}};
        case 21: return {{84, false}};
        case 22: return {{90, false}};
        case 31: return {{140, false}};
        case 35: return {{158, false}};
        case 51: return {{252, false}};
        case 65: return {{336, false}};
        case 111: return {{634, false}};
        case 193: return {{1204, false}};
        case 421: return {{2956, true}};  // upper bound only
        default: return std::nullopt;
    }
}

}  // namespace tuplesieve
