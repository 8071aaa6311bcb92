#pragma once

// Type A_{n-1} root and weight combinatorics in the trace-zero coordinate
// model of h* inside C^n: roots are e_i - e_j, the Weyl group is S_n acting
// by coordinate permutation, and the bilinear form is the standard dot
// product (so (alpha, alpha) = 2 for every root).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrep/qnum.hpp"

#include <json.hpp>

namespace qrep {

struct Weight {
    std::vector<cplx> coords;  // trace-zero vector in C^n

    Weight() = default;
    explicit Weight(std::vector<cplx> c) : coords(std::move(c)) {}
    explicit Weight(std::vector<double> c) {
        coords.reserve(c.size());
        for (double x : c) coords.emplace_back(x, 0.0);
    }

    std::size_t n() const { return coords.size(); }

    cplx trace() const {
        cplx s = 0.0;
        for (const cplx& x : coords) s += x;
        return s;
    }

    bool is_trace_zero(double tol) const { return std::abs(trace()) < tol * static_cast<double>(n()); }

    Weight operator+(const Weight& o) const {
        Weight r = *this;
        for (std::size_t k = 0; k < coords.size(); ++k) r.coords[k] += o.coords[k];
        return r;
    }
    Weight operator-(const Weight& o) const {
        Weight r = *this;
        for (std::size_t k = 0; k < coords.size(); ++k) r.coords[k] -= o.coords[k];
        return r;
    }
    Weight operator*(cplx s) const {
        Weight r = *this;
        for (auto& x : r.coords) x *= s;
        return r;
    }
    Weight operator-() const { return *this * cplx(-1.0); }

    Weight conj() const {
        Weight r = *this;
        for (auto& x : r.coords) x = std::conj(x);
        return r;
    }
};

inline cplx pairing(const Weight& mu, const Weight& nu) {
    if (mu.n() != nu.n()) throw std::invalid_argument("pairing: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t k = 0; k < mu.n(); ++k) s += mu.coords[k] * nu.coords[k];
    return s;
}

// JSON array of [re, im] pairs; round-trips exactly for doubles.
inline nlohmann::json weight_to_json(const Weight& w) {
    nlohmann::json j = nlohmann::json::array();
    for (const cplx& x : w.coords) j.push_back({x.real(), x.imag()});
    return j;
}

inline Weight weight_from_json(const nlohmann::json& j) {
    Weight w;
    for (const auto& p : j) w.coords.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return w;
}

// Dominant integral weight as a partition (nonincreasing, last entry 0).
struct DominantWeight {
    std::vector<long> partition;  // length n, nonincreasing, nonnegative, last = 0

    DominantWeight() = default;
    // accepts <= n entries, pads with zeros, then normalizes so the minimum is 0
    DominantWeight(std::vector<long> part, std::size_t n) : partition(std::move(part)) {
        if (partition.size() > n)
            throw std::invalid_argument("DominantWeight: too many parts");
        partition.resize(n, 0);
        for (std::size_t k = 0; k + 1 < partition.size(); ++k)
            if (partition[k] < partition[k + 1])
                throw std::invalid_argument("DominantWeight: partition must be nonincreasing");
        const long last = partition.back();
        for (long& p : partition) p -= last;
    }

    std::size_t n() const { return partition.size(); }

    bool operator==(const DominantWeight& o) const { return partition == o.partition; }
    bool operator<(const DominantWeight& o) const { return partition < o.partition; }

    // trace-zero coordinates: partition minus its mean
    Weight coords() const {
        const double mean =
            static_cast<double>(std::accumulate(partition.begin(), partition.end(), 0L)) /
            static_cast<double>(partition.size());
        Weight w;
        for (long p : partition) w.coords.emplace_back(static_cast<double>(p) - mean, 0.0);
        return w;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t k = 0; k < partition.size(); ++k) {
            if (k) s += ",";
            s += std::to_string(partition[k]);
        }
        return s + "]";
    }
};

struct CartanData {
    std::size_t n;                      // sl_n
    std::vector<Weight> simple_roots;   // alpha_k = e_k - e_{k+1}
    std::vector<Weight> positive_roots; // e_i - e_j, i < j
    Weight rho;                         // ((n-1)/2, (n-3)/2, ..., (1-n)/2)
    std::vector<Weight> fundamental_weights;

    explicit CartanData(std::size_t n_) : n(n_) {
        if (n < 2) throw std::invalid_argument("CartanData: need n >= 2");
        auto unit_diff = [&](std::size_t i, std::size_t j) {
            Weight w;
            w.coords.assign(n, 0.0);
            w.coords[i] = 1.0;
            w.coords[j] = -1.0;
            return w;
        };
        for (std::size_t k = 0; k + 1 < n; ++k) simple_roots.push_back(unit_diff(k, k + 1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) positive_roots.push_back(unit_diff(i, j));
        rho.coords.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            rho.coords[k] = (static_cast<double>(n) - 1.0) / 2.0 - static_cast<double>(k);
        // omega_k = e_1 + ... + e_k - (k/n) * (e_1 + ... + e_n)
        for (std::size_t k = 1; k < n; ++k) {
            Weight w;
            w.coords.assign(n, cplx(-static_cast<double>(k) / static_cast<double>(n), 0.0));
            for (std::size_t j = 0; j < k; ++j) w.coords[j] += 1.0;
            fundamental_weights.push_back(w);
        }
    }

    Weight two_rho() const { return rho * 2.0; }
};

namespace detail {

inline bool weights_close(const Weight& a, const Weight& b, double tol) {
    for (std::size_t k = 0; k < a.n(); ++k)
        if (std::abs(a.coords[k] - b.coords[k]) >= tol) return false;
    return true;
}

// all permutations of indices 0..n-1
inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline Weight permute(const Weight& w, const std::vector<std::size_t>& p) {
    Weight r;
    r.coords.resize(w.n());
    for (std::size_t k = 0; k < w.n(); ++k) r.coords[k] = w.coords[p[k]];
    return r;
}

// tolerance-aware lexicographic comparison on (Re, Im) coordinate pairs:
// returns true if a precedes b strictly
inline bool lex_less(const Weight& a, const Weight& b, double tol) {
    for (std::size_t k = 0; k < a.n(); ++k) {
        const double dr = a.coords[k].real() - b.coords[k].real();
        if (std::abs(dr) >= tol) return dr < 0.0;
        const double di = a.coords[k].imag() - b.coords[k].imag();
        if (std::abs(di) >= tol) return di < 0.0;
    }
    return false;
}

}  // namespace detail

inline std::vector<Weight> weyl_orbit(const CartanData& cd, const Weight& nu,
                                      double tol = 1e-9) {
    std::vector<Weight> out;
    for (const auto& p : detail::all_permutations(cd.n)) {
        Weight w = detail::permute(nu, p);
        bool seen = false;
        for (const auto& o : out)
            if (detail::weights_close(o, w, tol)) { seen = true; break; }
        if (!seen) out.push_back(std::move(w));
    }
    return out;
}

// orbit element maximal in lexicographic (Re, Im) order; constant on orbits
inline Weight weyl_canonical(const CartanData& cd, const Weight& nu, double tol = 1e-9) {
    Weight best = nu;
    for (const auto& p : detail::all_permutations(cd.n)) {
        Weight w = detail::permute(nu, p);
        if (detail::lex_less(best, w, tol)) best = std::move(w);
    }
    return best;
}

// representative of nu modulo i*(2*pi/|log q|)*Q.  The integer trace-zero
// lattice Q translates the first n-1 imaginary parts independently (the last
// is determined by trace zero), so Im(rep_k) in [0, 2*pi/|log q|) for
// k = 1..n-1 is an exact fundamental domain and the canonical choice here.
struct XPoint {
    Weight rep;
    QContext ctx;
};

inline XPoint x_reduce(const QContext& ctx, const CartanData& cd, const Weight& nu) {
    if (nu.n() != cd.n) throw std::invalid_argument("x_reduce: dimension mismatch");
    const double T = ctx.lattice_period;
    Weight rep = nu;
    const std::size_t last = cd.n - 1;
    for (std::size_t k = 0; k + 1 < cd.n; ++k) {
        // snap within tol so lattice points map to 0, not to T - epsilon
        const double m = std::floor(nu.coords[k].imag() / T + ctx.tol);
        rep.coords[k] -= cplx(0.0, m * T);
        rep.coords[last] += cplx(0.0, m * T);
    }
    return XPoint{rep, ctx};
}

// true iff a == b modulo i*(2*pi/|log q|)*Q
inline bool congruent_mod_itq(const QContext& ctx, const Weight& a, const Weight& b) {
    const double T = ctx.lattice_period;
    const std::size_t n = a.n();
    cplx dlast = a.coords[n - 1] - b.coords[n - 1];
    // a - b must be i*T*m with m integer trace-zero; equivalently each
    // coordinate difference is i*T*(integer) and the real parts agree
    double ksum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cplx d = a.coords[j] - b.coords[j];
        if (std::abs(d.real()) >= ctx.tol) return false;
        double k = d.imag() / T;
        if (std::abs(k - std::round(k)) >= ctx.tol) return false;
        ksum += std::round(k);
    }
    (void)dlast;
    return std::abs(ksum) < 0.5;  // integers: trace zero means exactly 0
}

// coset representatives of P/Q: k * omega_1, k = 0..n-1
inline std::vector<Weight> p_mod_q_reps(const CartanData& cd) {
    std::vector<Weight> reps;
    Weight zero;
    zero.coords.assign(cd.n, 0.0);
    reps.push_back(zero);
    for (std::size_t k = 1; k < cd.n; ++k)
        reps.push_back(cd.fundamental_weights[0] * static_cast<double>(k));
    return reps;
}

// true iff a == b modulo i*(2*pi/|log q|)*P
inline bool congruent_mod_itp(const QContext& ctx, const CartanData& cd, const Weight& a,
                              const Weight& b) {
    const double T = ctx.lattice_period;
    for (const Weight& r : p_mod_q_reps(cd)) {
        Weight shifted = b + r * cplx(0.0, T);
        if (congruent_mod_itq(ctx, a, shifted)) return true;
    }
    return false;
}

}  // namespace qrep
