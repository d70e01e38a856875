#include "tuplesieve/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tuplesieve/tuples.hpp"

namespace tuplesieve {

bool condition_34(unsigned k, unsigned ell, const Rational& theta) {
    if (k < 1) throw std::invalid_argument("condition_34: k must be >= 1");
    Rational th = theta;
    th.canonicalize();  // tolerate un-reduced inputs like 12/20
    // k (2l+1) theta > (k+2l+1)(l+1), exactly
    Rational lhs = Rational(static_cast<unsigned long>(k)) *
                   Rational(static_cast<unsigned long>(2 * ell + 1)) * th;
    Rational rhs = Rational(static_cast<unsigned long>(k + 2 * ell + 1)) *
                   Rational(static_cast<unsigned long>(ell + 1));
    return lhs > rhs;
}

std::vector<std::optional<ThresholdRow>> table_34(const std::vector<Rational>& thetas,
                                                  unsigned k_cap) {
    std::vector<std::optional<ThresholdRow>> rows;
    for (const Rational& theta : thetas) {
        std::optional<ThresholdRow> row;
        // smallest k first, then smallest ell at that k (caption ambiguity
        // resolved in favour of k-priority)
        for (unsigned k = 1; k <= k_cap && !row; ++k) {
            for (unsigned ell = 0; ell <= k; ++ell) {
                if (condition_34(k, ell, theta)) {
                    ThresholdRow r;
                    r.theta = theta.get_d();
                    r.k = k;
                    r.ell_or_L = ell;
                    if (auto hk = known_min_diameter(k)) {
                        r.h_k = static_cast<int64_t>(hk->first);
                        r.h_k_upper_bound = hk->second;
                    }
                    row = r;
                    break;
                }
            }
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

// entry (i,j) of the quadratic-form matrix, exact; optionally rescaled by
// (k+2L)! so the smallest magnitudes stay representable for large k.
Rational matrix_entry_exact(unsigned k, unsigned L, unsigned i, unsigned j,
                            const Rational& theta, bool scaled) {
    unsigned s = i + j;
    Rational th = theta;
    th.canonicalize();
    Rational bracket =
        Rational(static_cast<unsigned long>(k)) *
            Rational(static_cast<unsigned long>((s + 2) * (s + 1)),
                     static_cast<unsigned long>((i + 1) * (j + 1) * (k + s + 1))) -
        Rational(2) / th;
    bracket.canonicalize();
    Rational entry = Rational(binomial_exact(s, i)) * bracket;
    if (scaled) {
        // multiply by (k+2L)!/(k+s)! = (k+s+1)(k+s+2)...(k+2L)
        BigInt ratio = 1;
        for (unsigned t = k + s + 1; t <= k + 2 * L; ++t) ratio *= t;
        entry *= Rational(ratio);
    } else {
        BigInt fac;
        mpz_fac_ui(fac.get_mpz_t(), k + s);
        entry /= Rational(fac);
    }
    entry.canonicalize();
    return entry;
}

std::vector<std::vector<double>> matrix_entries(unsigned k, unsigned L,
                                                const Rational& theta, bool scaled) {
    std::vector<std::vector<double>> m(L + 1, std::vector<double>(L + 1, 0.0));
    for (unsigned i = 0; i <= L; ++i) {
        for (unsigned j = i; j <= L; ++j) {
            double v = matrix_entry_exact(k, L, i, j, theta, scaled).get_d();
            m[i][j] = v;
            m[j][i] = v;  // mirrored, exactly symmetric
        }
    }
    return m;
}

}  // namespace

WeightMatrix weight_matrix(unsigned k, unsigned L, const Rational& theta) {
    if (k < 1) throw std::invalid_argument("weight_matrix: k must be >= 1");
    if (L > 63) throw std::invalid_argument("weight_matrix: dimension above 64");
    WeightMatrix m;
    m.k = k;
    m.L = L;
    m.theta = theta.get_d();
    m.entries = matrix_entries(k, L, theta, /*scaled=*/false);
    return m;
}

double max_eigenvalue(const WeightMatrix& m) {
    auto eig = jacobi_eigenvalues(m.entries);
    return eig.back();
}

int weight_matrix_sign(unsigned k, unsigned L, const Rational& theta) {
    auto eig = jacobi_eigenvalues(matrix_entries(k, L, theta, /*scaled=*/true));
    double lmax = eig.back();
    return (lmax > 0.0) - (lmax < 0.0);
}

std::optional<double> theta_threshold_matrix(unsigned k, unsigned L) {
    // lambda_max is continuous and non-decreasing in theta; scan a grid to
    // locate (and sanity-check the uniqueness of) the sign change, then
    // bisect to 1e-8.
    const int grid = 40;
    const double lo0 = 0.5, hi0 = 1.0;
    auto sign_at = [&](double th) {
        return weight_matrix_sign(k, L, Rational(th));
    };
    int prev = sign_at(lo0 + 1e-12);
    if (prev > 0) return lo0;  // positive through the whole interval
    double lo = lo0 + 1e-12, hi = hi0;
    bool change_found = false;
    double change_lo = lo, change_hi = hi;
    for (int i = 1; i <= grid; ++i) {
        double th = lo0 + (hi0 - lo0) * i / grid;
        int s = sign_at(th);
        if (prev <= 0 && s > 0) {
            if (change_found)
                throw numeric_failure("theta_threshold_matrix: sign change not unique");
            change_found = true;
            change_lo = lo0 + (hi0 - lo0) * (i - 1) / grid;
            change_hi = th;
        }
        if (change_found && s <= 0)
            throw numeric_failure("theta_threshold_matrix: sign not monotone on grid");
        prev = s;
    }
    if (!change_found) return std::nullopt;  // unsat in (1/2, 1]
    lo = change_lo;
    hi = change_hi;
    while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        if (sign_at(mid) > 0) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

double k6_closed_form() {
    return 4.0 * (8.0 - std::sqrt(19.0)) / 15.0;
}

double bessel_q(unsigned k, double beta, double y) {
    const unsigned n = k - 2;
    double qa = bessel_j(n, 2.0 * std::sqrt(beta));
    double tail;
    if (y < 1e-8) {
        // removable point: y^{1-k/2} J_{k-2}(2 sqrt(beta y)) -> beta^{(k-2)/2}/(k-2)!
        tail = std::pow(beta, 0.5 * (k - 2)) / factorial_d(n);
    } else {
        tail = std::pow(y, 1.0 - 0.5 * k) * bessel_j(n, 2.0 * std::sqrt(beta * y));
    }
    return qa - tail;
}

double bessel_q_prime(unsigned k, double beta, double y) {
    // d/dy [ y^{1-k/2} J_{k-2}(2 sqrt(beta y)) ] = -sqrt(beta) y^{-(k-1)/2} J_{k-1}(...)
    // and q' is its negative.
    if (y < 1e-8)
        return std::sqrt(beta) * std::pow(beta, 0.5 * (k - 1)) / factorial_d(k - 1);
    return std::sqrt(beta) * std::pow(y, -0.5 * (k - 1)) *
           bessel_j(k - 1, 2.0 * std::sqrt(beta * y));
}

double bessel_threshold(unsigned k) {
    if (k < 3) throw std::invalid_argument("bessel_threshold: k must be >= 3");
    if (k - 1 > 64)
        throw numeric_failure("bessel_threshold: order k-1 beyond the series range");
    static const QuadratureRule rule = gauss_legendre(64);

    auto g = [&](double beta) {
        KahanSum i1, i2;
        for (int i = 0; i < rule.order; ++i) {
            double y = rule.nodes[i], w = rule.weights[i];
            double q = bessel_q(k, beta, y);
            double qp = bessel_q_prime(k, beta, y);
            i1.add(w * std::pow(y, static_cast<double>(k) - 2.0) * q * q);
            i2.add(w * std::pow(y, static_cast<double>(k) - 1.0) * qp * qp);
        }
        if (i2.value() == 0.0) throw numeric_failure("bessel_threshold: vanishing integral");
        return 1.0 / beta - i1.value() / i2.value();
    };

    // geometric bracket scan; the root sits near theta*k(k-1)/2
    double blo = 0.25;
    double glo = g(blo);
    double bhi = blo;
    bool bracketed = false;
    while (bhi < static_cast<double>(k) * k) {
        bhi = bhi * 1.05;
        if (2.0 * std::sqrt(bhi) > 50.0)
            throw numeric_failure("bessel_threshold: argument beyond series range");
        double ghi = g(bhi);
        if (glo > 0.0 && ghi <= 0.0) {
            bracketed = true;
            break;
        }
        blo = bhi;
        glo = ghi;
    }
    if (!bracketed) throw numeric_failure("bessel_threshold: no bracket for beta");
    double beta = bisect(g, blo, bhi, 1e-12 * bhi);
    return 2.0 * beta / (static_cast<double>(k) * (k - 1));
}

ErBounds er_bounds(unsigned r, double theta) {
    if (r < 1) throw std::invalid_argument("er_bounds: r must be >= 1");
    if (theta < 0.5 || theta > 1.0)
        throw std::invalid_argument("er_bounds: theta must lie in [1/2, 1]");
    ErBounds b;
    b.simple = std::max(static_cast<double>(r) - 2.0 * theta, 0.0);
    if (r >= 2) {
        double d = std::sqrt(static_cast<double>(r)) - std::sqrt(2.0 * theta);
        b.thm3 = d * d;
    }
    double u = std::sqrt(static_cast<double>(r)) - 1.0;
    b.unconditional = u * u;
    return b;
}

Thm3Params::Thm3Params(unsigned k_, unsigned ell_, unsigned nu_, double theta0_)
    : k(k_), ell(ell_), nu(nu_), theta0(theta0_) {
    if (nu < 1) throw std::invalid_argument("Thm3Params: nu must be >= 1");
    if (theta0 < 0.5 || theta0 > 1.0)
        throw std::invalid_argument("Thm3Params: theta0 must lie in [1/2, 1]");
    phi = 1.0 / (ell + 1.0);
    a = 2.0 - phi;
    Theta = theta0 * (1.0 - phi) / 2.0;
}

std::pair<int, double> thm3_polynomial_signed_log(const Thm3Params& params,
                                                  unsigned nu, double x) {
    if (x <= 0.0) throw std::invalid_argument("thm3_polynomial: x must be positive");
    if (params.k > 300)
        throw resource_limit_error("thm3_polynomial: k beyond float range for C(k,r)^2");
    const unsigned k = params.k, ell = params.ell;
    const double logx = std::log(x);

    // per-term log magnitudes and signs
    std::vector<double> logs(k + 1);
    std::vector<int> signs(k + 1);
    double logmax = -std::numeric_limits<double>::infinity();
    for (unsigned r = 0; r <= k; ++r) {
        double lt = 2.0 * (std::lgamma(k + 1.0) - std::lgamma(r + 1.0) -
                           std::lgamma(k - r + 1.0)) +
                    r * logx;
        // divide by (r+1)...(r+2l)
        lt -= std::lgamma(r + 2.0 * ell + 1.0) - std::lgamma(r + 1.0);
        double lin = 1.0 + x * (4.0 * (1.0 - params.phi / 2.0) * k /
                                    (r + 2.0 * ell + 1.0) -
                                nu / params.Theta);
        if (lin == 0.0) {
            logs[r] = -std::numeric_limits<double>::infinity();
            signs[r] = 0;
            continue;
        }
        logs[r] = lt + std::log(std::abs(lin));
        signs[r] = lin > 0.0 ? 1 : -1;
        logmax = std::max(logmax, logs[r]);
    }
    KahanSum total;
    for (unsigned r = 0; r <= k; ++r) {
        if (signs[r] == 0) continue;
        total.add(signs[r] * std::exp(logs[r] - logmax));
    }
    double t = total.value();
    if (t == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    return {t > 0.0 ? 1 : -1, logmax + std::log(std::abs(t))};
}

double thm3_polynomial(const Thm3Params& params, unsigned nu, double x) {
    auto [sign, lg] = thm3_polynomial_signed_log(params, nu, x);
    if (sign == 0) return 0.0;
    return sign * std::exp(lg);  // saturates to +-inf on overflow
}

double thm3_polynomial(const Thm3Params& params, double x) {
    return thm3_polynomial(params, params.nu, x);
}

std::optional<double> min_lambda(unsigned k, unsigned ell, unsigned nu, double theta0) {
    if (nu == 2 && theta0 == 1.0)
        throw std::invalid_argument(
            "min_lambda: the (nu, theta0) = (2, 1) case is covered by the simple "
            "E_r bound, not by this polynomial");
    Thm3Params params(k, ell, nu, theta0);
    auto sign_at = [&](double x) { return thm3_polynomial_signed_log(params, nu, x).first; };

    double x = 1e-4;
    int prev = sign_at(x);
    double xlo = x, xhi = 0.0;
    bool bracketed = false;
    while (x < 1e4) {
        double nx = x * 1.05;
        int s = sign_at(nx);
        if (prev > 0 && s <= 0) {
            xlo = x;
            xhi = nx;
            bracketed = true;
            break;
        }
        prev = s;
        x = nx;
    }
    if (!bracketed) return std::nullopt;  // P positive across the grid
    // bisect in log space to 1e-8 relative
    while (xhi / xlo > 1.0 + 1e-8) {
        double mid = std::sqrt(xlo * xhi);
        if (sign_at(mid) > 0) xlo = mid; else xhi = mid;
    }
    double x_crit = std::sqrt(xlo * xhi);
    return params.Theta / x_crit;
}

}  // namespace tuplesieve
