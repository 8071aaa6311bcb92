#pragma once

// Finite-dimensional sl_n representation combinatorics: weight multiplicities
// (Freudenthal recursion), character evaluation Tr_lambda(K_nu), q-dimension,
// tensor-product decomposition (Brauer-Klimyk), dual weights.  Multiplicities
// of type-1 quantum modules at generic q equal the classical ones, so all of
// this is classical combinatorics.

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qrep/qnum.hpp"
#include "qrep/weyl.hpp"

namespace qrep {

// integral weights as integer vectors (not trace-normalized): partition-like
// coordinates, compared as raw vectors
using IntWeight = std::vector<long>;

struct WeightMultiplicityTable {
    DominantWeight highest;
    // integral weights in partition-shifted coordinates: entries of
    // highest.partition minus nonnegative root-lattice elements; all share the
    // same coordinate sum
    std::map<IntWeight, long> entries;

    long dim() const {
        long d = 0;
        for (const auto& [w, m] : entries) d += m;
        return d;
    }

    long zero_weight_multiplicity() const {
        // the "zero" weight in these coordinates is the constant vector
        const long n = static_cast<long>(highest.n());
        long sum = 0;
        for (long p : highest.partition) sum += p;
        if (sum % n != 0) return 0;
        IntWeight z(highest.n(), sum / n);
        auto it = entries.find(z);
        return it == entries.end() ? 0 : it->second;
    }
};

namespace detail {

inline long weyl_dim(const CartanData& cd, const DominantWeight& lambda) {
    // prod over positive roots of (lambda+rho, alpha)/(rho, alpha); for type A
    // with partition coordinates l_i + (n-i): prod_{i<j} (a_i - a_j)/(j - i)
    const std::size_t n = cd.n;
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = static_cast<double>(lambda.partition[i]) + static_cast<double>(n - 1 - i);
    double num = 1.0, den = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            num *= a[i] - a[j];
            den *= static_cast<double>(j - i);
        }
    return std::lround(num / den);
}

// dominant (nonincreasing) rearrangement of an integer vector
inline IntWeight dominant_sort(IntWeight w) {
    std::sort(w.begin(), w.end(), std::greater<long>());
    return w;
}

// true iff mu <= lambda in the dominance order (equal sum, partial sums of the
// sorted vector bounded by those of lambda) -- both already nonincreasing
inline bool dominated(const IntWeight& mu, const IntWeight& lambda) {
    long ps_mu = 0, ps_la = 0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        ps_mu += mu[k];
        ps_la += lambda[k];
        if (ps_mu > ps_la) return false;
    }
    return ps_mu == ps_la;
}

// enumerate all dominant integral weights mu with mu <= lambda
inline void dominant_below(const IntWeight& lambda, std::size_t pos, long remaining,
                           long prev, IntWeight& cur, std::vector<IntWeight>& out) {
    const std::size_t n = lambda.size();
    if (pos == n) {
        if (remaining == 0 && dominated(cur, lambda)) out.push_back(cur);
        return;
    }
    // entries may go negative (trace-zero model uses shifted coordinates), but
    // dominance bounds them: cur[pos] <= prev and the partial-sum constraint
    for (long v = std::min(prev, remaining - 0); ; --v) {
        // lower bound: remaining - v*(n-pos-1) ... iterate until infeasible
        if (v * static_cast<long>(n - pos) < remaining) break;  // can't fill the rest
        cur[pos] = v;
        dominant_below(lambda, pos + 1, remaining - v, v, cur, out);
    }
}

inline std::vector<IntWeight> dominant_weights_below(const IntWeight& lambda) {
    long total = 0;
    for (long p : lambda) total += p;
    std::vector<IntWeight> out;
    IntWeight cur(lambda.size(), 0);
    dominant_below(lambda, 0, total, lambda[0], cur, out);
    return out;
}

// (a,b) dot product on integer vectors shifted to common-sum coordinates; the
// bilinear form of the trace-zero model applied to differences is the plain
// dot product, which is all Freudenthal needs
inline double idot(const IntWeight& a, const IntWeight& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += static_cast<double>(a[k]) * static_cast<double>(b[k]);
    return s;
}

}  // namespace detail

inline WeightMultiplicityTable freudenthal(const CartanData& cd, const DominantWeight& lambda) {
    const std::size_t n = cd.n;
    if (lambda.n() != n) throw std::invalid_argument("freudenthal: rank mismatch");
    const IntWeight top = lambda.partition;

    // positive roots as integer vectors e_i - e_j
    std::vector<IntWeight> proots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            IntWeight r(n, 0);
            r[i] = 1;
            r[j] = -1;
            proots.push_back(r);
        }
    // rho in doubled-integer coordinates: use 2*rho = (n-1, n-3, ..., 1-n) to
    // stay integral; the recursion is scaled accordingly
    std::vector<double> rho(n);
    for (std::size_t k = 0; k < n; ++k)
        rho[k] = (static_cast<double>(n) - 1.0) / 2.0 - static_cast<double>(k);

    auto norm2_shift = [&](const IntWeight& w) {
        // (w + rho, w + rho)
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double x = static_cast<double>(w[k]) + rho[k];
            s += x * x;
        }
        return s;
    };

    const std::vector<IntWeight> dominants = detail::dominant_weights_below(top);
    // process dominant weights from highest down (dominance-compatible order:
    // sort by decreasing partial-sum vector, i.e. lexicographic descending)
    std::vector<IntWeight> order = dominants;
    std::sort(order.begin(), order.end(), std::greater<IntWeight>());

    std::map<IntWeight, long> mult;  // on dominant weights only
    const double top_norm = norm2_shift(top);

    auto mult_of = [&](const IntWeight& w) -> long {
        auto it = mult.find(detail::dominant_sort(w));
        return it == mult.end() ? 0 : it->second;
    };

    for (const IntWeight& mu : order) {
        if (mu == top) {
            mult[mu] = 1;
            continue;
        }
        // Freudenthal: ((l+r,l+r) - (m+r,m+r)) * mult(m)
        //   = 2 * sum_{alpha>0} sum_{k>=1} mult(m + k*alpha) * (m + k*alpha, alpha)
        double denom = top_norm - norm2_shift(mu);
        double acc = 0.0;
        for (const IntWeight& alpha : proots) {
            IntWeight w = mu;
            for (long k = 1;; ++k) {
                for (std::size_t t = 0; t < n; ++t) w[t] += alpha[t];
                long m = mult_of(w);
                // stop once w exceeds the weight polytope: when the dominant
                // sort of w is no longer <= top
                if (!detail::dominated(detail::dominant_sort(w), top)) break;
                if (m != 0) acc += static_cast<double>(m) * detail::idot(w, alpha);
                (void)k;
            }
        }
        double value = 2.0 * acc / denom;
        mult[mu] = std::lround(value);
        if (std::abs(value - std::lround(value)) > 1e-6)
            throw std::runtime_error("freudenthal: non-integer multiplicity");
    }

    WeightMultiplicityTable table;
    table.highest = lambda;
    // fill full W-orbits
    for (const auto& [mu, m] : mult) {
        if (m == 0) continue;
        IntWeight w = mu;
        std::sort(w.begin(), w.end());
        do {
            table.entries[w] = m;
        } while (std::next_permutation(w.begin(), w.end()));
    }

    if (table.dim() != detail::weyl_dim(cd, lambda))
        throw std::runtime_error("freudenthal: dimension check failed");
    return table;
}

// memoized access; safe for concurrent use
inline const WeightMultiplicityTable& weight_table(const CartanData& cd,
                                                   const DominantWeight& lambda) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::vector<long>>,
                    std::unique_ptr<WeightMultiplicityTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(cd.n, lambda.partition);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto table = std::make_unique<WeightMultiplicityTable>(freudenthal(cd, lambda));
        it = cache.emplace(key, std::move(table)).first;
    }
    return *it->second;
}

inline long weyl_dimension(const CartanData& cd, const DominantWeight& lambda) {
    return detail::weyl_dim(cd, lambda);
}

// Tr_lambda(K_nu) = sum_mu mult(mu) q^{(nu, mu)} with mu taken in trace-zero
// coordinates (the shift to trace-zero drops out because nu is trace-zero)
inline cplx char_value(const QContext& ctx, const CartanData& cd,
                       const DominantWeight& lambda, const Weight& nu) {
    const auto& table = weight_table(cd, lambda);
    cplx s = 0.0;
    for (const auto& [mu, m] : table.entries) {
        cplx e = 0.0;
        for (std::size_t k = 0; k < cd.n; ++k)
            e += nu.coords[k] * static_cast<double>(mu[k]);
        s += static_cast<double>(m) * q_power(ctx, e);
    }
    return s;
}

inline double qdim(const QContext& ctx, const CartanData& cd, const DominantWeight& lambda) {
    return char_value(ctx, cd, lambda, cd.two_rho()).real();
}

struct FusionDecomposition {
    std::map<DominantWeight, long> summands;
};

// Brauer-Klimyk: V(lambda) (x) V(mu) = sum over weights w of mu of the
// sign-reflected shift lambda + rho + w
inline FusionDecomposition tensor_decompose(const CartanData& cd, const DominantWeight& lambda,
                                            const DominantWeight& mu) {
    const std::size_t n = cd.n;
    const auto& table = weight_table(cd, mu);
    // lambda + rho in strictly-decreasing integer coordinates: use
    // lambda_i + (n-1-i) (rho shifted by the constant (n-1)/2, harmless)
    std::vector<long> lr(n);
    for (std::size_t i = 0; i < n; ++i)
        lr[i] = lambda.partition[i] + static_cast<long>(n - 1 - i);

    std::map<DominantWeight, long> acc;
    for (const auto& [w, m] : table.entries) {
        std::vector<long> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = lr[i] + w[i];
        // repeated entry: the term is killed by the sign rule
        // sign: parity of the permutation sorting v into decreasing order
        long inversions = 0;
        bool zero = false;
        for (std::size_t i = 0; i < n && !zero; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (v[i] == v[j]) { zero = true; break; }
                if (v[i] < v[j]) ++inversions;
            }
        if (zero) continue;
        const int sign = (inversions % 2 == 0) ? 1 : -1;
        std::sort(v.begin(), v.end(), std::greater<long>());
        // subtract the rho shift back
        std::vector<long> part(n);
        for (std::size_t i = 0; i < n; ++i) part[i] = v[i] - static_cast<long>(n - 1 - i);
        DominantWeight target(part, n);
        acc[target] += sign * m;
    }
    FusionDecomposition out;
    for (const auto& [k, m] : acc) {
        if (m < 0) throw std::runtime_error("tensor_decompose: negative multiplicity");
        if (m > 0) out.summands[k] = m;
    }
    return out;
}

// lambda* = -w0 lambda: (l1 - l_n, l1 - l_{n-1}, ..., l1 - l_1)
inline DominantWeight dual_weight(const CartanData& cd, const DominantWeight& lambda) {
    const std::size_t n = lambda.n();
    std::vector<long> part(n);
    for (std::size_t i = 0; i < n; ++i)
        part[i] = lambda.partition[0] - lambda.partition[n - 1 - i];
    return DominantWeight(part, cd.n);
}

}  // namespace qrep
