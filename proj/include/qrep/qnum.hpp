#pragma once

// q-deformed arithmetic: q-integers, q-binomials, complex powers of q, and
// tolerance-aware membership tests for lattices of the form
//   { r + i*k*step : r in a real subset, k in Z }.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qrep {

using cplx = std::complex<double>;

struct QContext {
    double q;
    double log_q;           // natural log of q, negative
    double tol;
    double lattice_period;  // 2*pi/|log q|, imaginary period of q^z

    explicit QContext(double q_, double tol_ = 1e-9) : q(q_), tol(tol_) {
        if (!(q > 1e-3 && q < 0.999))
            throw std::invalid_argument("QContext: q must lie in [1e-3, 0.999)");
        if (!(tol > 0.0))
            throw std::invalid_argument("QContext: tol must be positive");
        log_q = std::log(q);
        lattice_period = 2.0 * std::numbers::pi / std::abs(log_q);
    }
};

inline cplx q_power(const QContext& ctx, cplx z) {
    return std::exp(z * ctx.log_q);
}

// n_q = (q^n - q^-n)/(q - q^-1); odd in n, q_int(0) = 0.
inline double q_int(const QContext& ctx, long n) {
    if (n == 0) return 0.0;
    const double qn = std::pow(ctx.q, static_cast<double>(n));
    return (qn - 1.0 / qn) / (ctx.q - 1.0 / ctx.q);
}

inline double q_factorial(const QContext& ctx, long n) {
    double r = 1.0;
    for (long k = 2; k <= n; ++k) r *= q_int(ctx, k);
    return r;
}

inline double q_binomial(const QContext& ctx, long n, long m) {
    if (n < 0 || m < 0 || m > n)
        throw std::invalid_argument("q_binomial: require 0 <= m <= n");
    // product form n_q!/(m_q!(n-m)_q!) evaluated incrementally for stability
    if (m > n - m) m = n - m;
    double r = 1.0;
    for (long k = 1; k <= m; ++k) r *= q_int(ctx, n - m + k) / q_int(ctx, k);
    return r;
}

enum class RealLattice {
    Integers,
    PositiveIntegers,   // {1, 2, ...}
    NegativeIntegers,   // {-1, -2, ...}
    EvenIntegers,
    EvenNonzero,
    EvenPositive,       // {2, 4, ...}
    EvenNegative,       // {-2, -4, ...}
    FiniteSet,
};

// distance from x to the nearest point of the given real subset
inline double real_lattice_distance(RealLattice which, double x,
                                    const std::vector<double>& finite_set = {}) {
    auto dist_to = [&](double p) { return std::abs(x - p); };
    switch (which) {
        case RealLattice::Integers:
            return dist_to(std::round(x));
        case RealLattice::PositiveIntegers:
            return dist_to(std::max(1.0, std::round(x)));
        case RealLattice::NegativeIntegers:
            return dist_to(std::min(-1.0, std::round(x)));
        case RealLattice::EvenIntegers:
            return dist_to(2.0 * std::round(x / 2.0));
        case RealLattice::EvenNonzero: {
            double p = 2.0 * std::round(x / 2.0);
            if (p == 0.0) p = (x >= 0.0) ? 2.0 : -2.0;
            return dist_to(p);
        }
        case RealLattice::EvenPositive:
            return dist_to(std::max(2.0, 2.0 * std::round(x / 2.0)));
        case RealLattice::EvenNegative:
            return dist_to(std::min(-2.0, 2.0 * std::round(x / 2.0)));
        case RealLattice::FiniteSet: {
            double best = std::numeric_limits<double>::infinity();
            for (double p : finite_set) best = std::min(best, dist_to(p));
            return best;
        }
    }
    return std::numeric_limits<double>::infinity();
}

// true iff z is within ctx.tol of { r + i*k*imag_step : r in lattice, k in Z };
// imag_step == 0 means the purely real lattice.
inline bool lattice_member(const QContext& ctx, cplx z, RealLattice which,
                           double imag_step,
                           const std::vector<double>& finite_set = {}) {
    double im = z.imag();
    if (imag_step > 0.0) im -= imag_step * std::round(im / imag_step);
    const double dre = real_lattice_distance(which, z.real(), finite_set);
    return std::hypot(dre, im) < ctx.tol;
}

}  // namespace qrep
