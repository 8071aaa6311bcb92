#pragma once

// Decision procedures on the spherical parameter nu: invariant-form
// existence, cyclicity / cosphericality / irreducibility of L(0,nu), the PRV
// determinant, spherical multiplicities, the SU_q(3) classifier, the
// norm-bound test, the property-(T) isolation certificate, and the
// fiber-functor dimension bound.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrep/charrep.hpp"
#include "qrep/qnum.hpp"
#include "qrep/unitary_class.hpp"
#include "qrep/weyl.hpp"

namespace qrep {

// ---------------------------------------------------------------------------
// invariant form and rank criteria
// ---------------------------------------------------------------------------

struct InvariantFormWitness {
    bool exists = false;
    std::vector<std::size_t> perm;  // w with -conj(nu) == w nu mod i*T*Q
};

inline InvariantFormWitness has_invariant_form(const QContext& ctx, const CartanData& cd,
                                               const Weight& nu) {
    const Weight target = -nu.conj();
    for (const auto& p : detail::all_permutations(cd.n)) {
        Weight w = detail::permute(nu, p);
        if (congruent_mod_itq(ctx, target, w)) return InvariantFormWitness{true, p};
    }
    return {};
}

// (nu, alpha-check) avoids 2Z_- + 2*pi*i/log(q) Z for every positive root
inline bool is_spherical_cyclic(const QContext& ctx, const CartanData& cd, const Weight& nu) {
    for (const auto& alpha : cd.positive_roots) {
        // alpha-check = alpha for type A with (alpha,alpha) = 2
        if (lattice_member(ctx, pairing(nu, alpha), RealLattice::EvenNegative,
                           ctx.lattice_period))
            return false;
    }
    return true;
}

inline bool is_cospherical(const QContext& ctx, const CartanData& cd, const Weight& nu) {
    for (const auto& alpha : cd.positive_roots)
        if (lattice_member(ctx, pairing(nu, alpha), RealLattice::EvenPositive,
                           ctx.lattice_period))
            return false;
    return true;
}

inline bool is_L_irreducible(const QContext& ctx, const CartanData& cd, const Weight& nu) {
    for (const auto& alpha : cd.positive_roots)
        if (lattice_member(ctx, pairing(nu, alpha), RealLattice::EvenNonzero,
                           ctx.lattice_period))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// PRV determinant
// ---------------------------------------------------------------------------

// det P_lambda evaluated at nu:
//   prod_{n >= 1, alpha > 0} (q^{(nu,alpha)} - q^{2(n-(rho,alpha-check))} q^{-(nu,alpha)})
//     ^ dim V(lambda)_{n alpha}
inline cplx prv_determinant(const QContext& ctx, const CartanData& cd,
                            const DominantWeight& lambda, const Weight& nu) {
    const auto& table = weight_table(cd, lambda);
    // weights of V(lambda) live in lambda + root lattice; n*alpha is a weight
    // only when |lambda| is divisible by n (= cd.n) in partition coordinates
    long total = 0;
    for (long p : lambda.partition) total += p;
    const long n_coords = static_cast<long>(cd.n);
    cplx det = 1.0;
    if (total % n_coords != 0) return det;  // no weights on the root lattice
    const long shift = total / n_coords;

    for (const auto& alpha : cd.positive_roots) {
        const double rho_pair = pairing(cd.rho, alpha).real();  // (rho, alpha-check)
        for (long n = 1;; ++n) {
            // dim V(lambda)_{n alpha}: key = n*alpha + shift*(1,...,1)
            IntWeight key(cd.n, shift);
            for (std::size_t k = 0; k < cd.n; ++k)
                key[k] += static_cast<long>(std::lround(n * alpha.coords[k].real()));
            auto it = table.entries.find(key);
            if (it == table.entries.end()) break;
            const cplx ka = q_power(ctx, pairing(nu, alpha));
            const cplx factor =
                ka - q_power(ctx, 2.0 * (static_cast<double>(n) - rho_pair)) / ka;
            for (long m = 0; m < it->second; ++m) det *= factor;
        }
    }
    return det;
}

// (nu + rho, alpha-check) avoids Z_+ + pi*i/log(q) Z for every positive root
// (the pi -- not 2*pi -- period is deliberate and kept verbatim)
inline bool prv_invertible(const QContext& ctx, const CartanData& cd, const Weight& nu) {
    const double half_period = 0.5 * ctx.lattice_period;
    const Weight shifted = nu + cd.rho;
    for (const auto& alpha : cd.positive_roots)
        if (lattice_member(ctx, pairing(shifted, alpha), RealLattice::PositiveIntegers,
                           half_period))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// spherical multiplicity
// ---------------------------------------------------------------------------

// multiplicity of V(lambda) in the spherical part of L(0,nu):
//   * nu = -2mu - 2rho for dominant integral mu: [V(mu) (x) V(mu)* : V(lambda)]
//   * generic nu (cyclic and cospherical): dim V(lambda)_0
//   * otherwise: nullopt ("not computed")
inline std::optional<long> spherical_multiplicity(const QContext& ctx, const CartanData& cd,
                                                  const DominantWeight& lambda,
                                                  const Weight& nu) {
    // try nu = -2mu - 2rho
    const Weight mu_cand = (-nu - cd.two_rho()) * 0.5;
    bool integral = true;
    std::vector<double> parts(cd.n);
    for (std::size_t k = 0; k < cd.n; ++k) {
        if (std::abs(mu_cand.coords[k].imag()) > ctx.tol) { integral = false; break; }
        parts[k] = mu_cand.coords[k].real();
    }
    if (integral) {
        // dominant integral in trace-zero coordinates: differences to the last
        // coordinate are nonnegative integers, nonincreasing
        std::vector<long> partition(cd.n);
        for (std::size_t k = 0; k < cd.n; ++k) {
            const double d = parts[k] - parts[cd.n - 1];
            const long r = std::lround(d);
            if (std::abs(d - r) > ctx.tol || r < 0) { integral = false; break; }
            partition[k] = r;
        }
        if (integral)
            for (std::size_t k = 0; k + 1 < cd.n; ++k)
                if (partition[k] < partition[k + 1]) { integral = false; break; }
        if (integral) {
            DominantWeight mu(partition, cd.n);
            FusionDecomposition fd = tensor_decompose(cd, mu, dual_weight(cd, mu));
            auto it = fd.summands.find(lambda);
            return it == fd.summands.end() ? 0L : it->second;
        }
    }
    if (is_spherical_cyclic(ctx, cd, nu) && is_cospherical(ctx, cd, nu))
        return weight_table(cd, lambda).zero_weight_multiplicity();
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// norm bound
// ---------------------------------------------------------------------------

struct NormBoundResult {
    bool holds = true;
    std::optional<DominantWeight> violator;
};

// necessary condition for unitarizability of V(0,mu):
// |Tr_lambda(K_mu)| <= Tr_lambda(K_{2rho}) for each lambda
inline NormBoundResult norm_bound_test(const QContext& ctx, const CartanData& cd,
                                       const Weight& mu,
                                       const std::vector<DominantWeight>& lambda_set) {
    for (const auto& lambda : lambda_set) {
        const double lhs = std::abs(char_value(ctx, cd, lambda, mu));
        const double rhs = qdim(ctx, cd, lambda);
        if (lhs > rhs + ctx.tol) return NormBoundResult{false, lambda};
    }
    return {};
}

// first dominant weights of sl_n ordered by dimension (ties by partition)
inline std::vector<DominantWeight> first_dominant_weights(const CartanData& cd,
                                                          std::size_t count) {
    std::vector<std::pair<long, DominantWeight>> pool;
    const long cap = 12;  // partition entries up to cap: ample for desk scale
    std::vector<long> part(cd.n, 0);
    // enumerate nonincreasing partitions with last entry 0 and entries <= cap
    std::function<void(std::size_t, long)> rec = [&](std::size_t pos, long prev) {
        if (pos + 1 == cd.n) {
            part[pos] = 0;
            DominantWeight dw(part, cd.n);
            pool.emplace_back(weyl_dimension(cd, dw), dw);
            return;
        }
        for (long v = 0; v <= prev; ++v) {
            part[pos] = v;
            rec(pos + 1, v);
        }
    };
    rec(0, cap);
    std::sort(pool.begin(), pool.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return a.second < b.second;
              });
    std::vector<DominantWeight> out;
    for (const auto& [d, w] : pool) {
        if (out.size() == count) break;
        out.push_back(w);
    }
    return out;
}

// ---------------------------------------------------------------------------
// SU_q(3) classification (Main Theorem)
// ---------------------------------------------------------------------------

// classes, in precedence order:
//   (iii) nu == (2,-2,0) modulo i*T*P x W           -> Character
//   (ii)  nu == (t+is,-t+is,-2is) mod i*T*P x W,
//         0 < |t| <= 1                              -> Complementary(t, s)
//   (i)   nu imaginary                              -> Principal
//   otherwise NotUnitarizable (NoInvariantForm when no sesquilinear invariant
//   form exists, else FormIndefinite)
inline UnitaryClass classify_su3(const QContext& ctx, const CartanData& cd, const Weight& nu) {
    if (cd.n != 3 || nu.n() != 3)
        throw std::invalid_argument("classify_su3: expected 3 coordinates");
    const double T = ctx.lattice_period;
    UnitaryClass out;

    auto perm_str = [](const std::vector<std::size_t>& p) {
        std::string s = "w=(";
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k) s += " ";
            s += std::to_string(p[k] + 1);
        }
        return s + ")";
    };

    // (iii) character: real part (2,-2,0), imaginary part in T*P
    for (const auto& p : detail::all_permutations(3)) {
        const Weight w = detail::permute(nu, p);
        const double re[3] = {w.coords[0].real(), w.coords[1].real(), w.coords[2].real()};
        const double im[3] = {w.coords[0].imag(), w.coords[1].imag(), w.coords[2].imag()};
        if (std::abs(re[0] - 2.0) < ctx.tol && std::abs(re[1] + 2.0) < ctx.tol &&
            std::abs(re[2]) < ctx.tol) {
            const double d12 = (im[0] - im[1]) / T;
            const double d23 = (im[1] - im[2]) / T;
            if (std::abs(d12 - std::round(d12)) < ctx.tol &&
                std::abs(d23 - std::round(d23)) < ctx.tol) {
                out.tag = ClassTag::Character;
                out.witness = perm_str(p);
                return out;
            }
        }
    }

    // (ii) complementary: real part (t,-t,0) with 0 < |t| <= 1 and the
    // imaginary part (A,B,C) matching (s,s,-2s) modulo T*P, which reduces to
    // (A - B)/T integral
    for (const auto& p : detail::all_permutations(3)) {
        const Weight w = detail::permute(nu, p);
        const double re[3] = {w.coords[0].real(), w.coords[1].real(), w.coords[2].real()};
        const double im[3] = {w.coords[0].imag(), w.coords[1].imag(), w.coords[2].imag()};
        if (std::abs(re[0] + re[1]) < ctx.tol && std::abs(re[2]) < ctx.tol) {
            const double t = re[0];
            if (std::abs(t) < ctx.tol) continue;  // t = 0 belongs to (i)
            if (std::abs(t) > 1.0 + ctx.tol) continue;
            const double d12 = (im[0] - im[1]) / T;
            if (std::abs(d12 - std::round(d12)) >= ctx.tol) continue;
            // normal-form s: B - C - 3s in T*Z, reduced to the smallest |s|
            double s = (im[1] - im[2]) / 3.0;
            s -= (T / 3.0) * std::round(3.0 * s / T);
            out.tag = ClassTag::Complementary;
            out.t = t;
            out.s = s;
            out.witness = perm_str(p);
            return out;
        }
    }

    // (i) principal: nu imaginary
    bool imaginary = true;
    for (const auto& z : nu.coords)
        if (std::abs(z.real()) >= ctx.tol) { imaginary = false; break; }
    if (imaginary) {
        out.tag = ClassTag::Principal;
        out.witness = "w=(1 2 3)";
        return out;
    }

    out.tag = ClassTag::NotUnitarizable;
    const InvariantFormWitness form = has_invariant_form(ctx, cd, nu);
    out.reason = form.exists ? NonUnitaryReason::FormIndefinite
                             : NonUnitaryReason::NoInvariantForm;
    if (form.exists) out.witness = perm_str(form.perm);
    return out;
}

// ---------------------------------------------------------------------------
// property (T): conditions and the isolation certificate
// ---------------------------------------------------------------------------

namespace detail {

// proper subsets of the index set {m, ..., -m} (positions 0..n-1 for sl_n,
// n = 2m+1 odd) that contain the top index and are closed under negation,
// returned as position masks
inline std::vector<std::vector<bool>> symmetric_subsets(std::size_t n) {
    // positions pair as (k, n-1-k); the middle position is self-paired.
    // choose any subset of pairs that includes the pair {0, n-1}, plus
    // optionally the middle element
    const std::size_t m = n / 2;  // number of (+,-) pairs
    std::vector<std::vector<bool>> out;
    const std::size_t free_pairs = m - 1;  // pair 0 is forced
    for (std::size_t bits = 0; bits < (std::size_t{1} << free_pairs); ++bits)
        for (int mid = 0; mid < 2; ++mid) {
            std::vector<bool> mask(n, false);
            mask[0] = mask[n - 1] = true;
            for (std::size_t k = 0; k < free_pairs; ++k)
                if (bits & (std::size_t{1} << k)) mask[k + 1] = mask[n - 2 - k] = true;
            if (mid) mask[m] = true;
            // exclude the full set (subsets must be proper)
            bool full = true;
            for (bool b : mask) full = full && b;
            if (!full) out.push_back(std::move(mask));
        }
    return out;
}

}  // namespace detail

// the two conditions of the property-(T) proof, evaluated literally:
//   (1) |nu_k - 2k| < min{1, pi/|log q|} for every k (coords ordered from
//       k = m down to k = -m, so 2k runs through 2rho)
//   (2) for every proper symmetric subset p containing the top index,
//       sum_{k in p} q^{Re nu_k} > [#p]_q
inline std::pair<bool, bool> propT_conditions(const QContext& ctx, const CartanData& cd,
                                              const Weight& nu) {
    if (cd.n % 2 == 0) throw std::invalid_argument("propT_conditions: rank must be odd");
    if (cd.n > 9) throw std::invalid_argument("propT_conditions: rank capped at 9");
    const double width = std::min(1.0, 0.5 * ctx.lattice_period);
    const Weight two_rho = cd.two_rho();
    bool cond1 = true;
    for (std::size_t k = 0; k < cd.n; ++k)
        if (std::abs(nu.coords[k] - two_rho.coords[k]) >= width) { cond1 = false; break; }

    bool cond2 = true;
    for (const auto& mask : detail::symmetric_subsets(cd.n)) {
        double lhs = 0.0;
        long card = 0;
        for (std::size_t k = 0; k < cd.n; ++k)
            if (mask[k]) {
                lhs += std::pow(ctx.q, nu.coords[k].real());
                ++card;
            }
        // [card]_q = sum_{l=1}^{card} q^{-card + 2l - 1}
        const double rhs = q_int(ctx, card);
        if (!(lhs > rhs)) { cond2 = false; break; }
    }
    return {cond1, cond2};
}

enum class IsolationVerdict { NotUnitarizable, Inconclusive, IsTrivialPoint };

struct IsolationCertificate {
    Weight nu;
    IsolationVerdict verdict = IsolationVerdict::Inconclusive;
    bool symmetry_holds = false;       // nu_{-k} = -conj(nu_k)
    std::vector<bool> p_mask;          // index set p (positions)
    Weight nu_tilde;                   // the permutation used
    cplx t = 0.0, s = 0.0;             // block means (imaginary on success)
    double inequality_lhs = 0.0;       // sum_{k in p} q^{Re nu~_k}
    double inequality_rhs = 0.0;       // [#p]_q
    std::string note;
};

inline std::string to_string(IsolationVerdict v) {
    switch (v) {
        case IsolationVerdict::NotUnitarizable: return "NotUnitarizable";
        case IsolationVerdict::Inconclusive: return "Inconclusive";
        case IsolationVerdict::IsTrivialPoint: return "IsTrivialPoint";
    }
    return "?";
}

// replay of the property-(T) proof at a concrete nu near 2rho
inline IsolationCertificate isolation_witness(const QContext& ctx, const CartanData& cd,
                                              const Weight& nu) {
    auto [c1, c2] = propT_conditions(ctx, cd, nu);
    if (!c1 || !c2)
        throw std::invalid_argument(std::string("isolation_witness: condition (") +
                                    (c1 ? "2" : "1") + ") fails at this point");
    const double T = ctx.lattice_period;
    const std::size_t n = cd.n;
    IsolationCertificate cert;
    cert.nu = nu;

    // symmetry nu_{-k} = -conj(nu_k) (positions k and n-1-k)
    cert.symmetry_holds = true;
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(nu.coords[n - 1 - k] + std::conj(nu.coords[k])) >= ctx.tol) {
            cert.symmetry_holds = false;
            break;
        }
    if (!cert.symmetry_holds) {
        // -conj(nu) cannot be a permutation of nu compatible with condition
        // (1), so no invariant form exists
        cert.verdict = IsolationVerdict::NotUnitarizable;
        cert.note = "symmetry nu_{-k} = -conj(nu_k) fails";
        return cert;
    }

    // p: indices k with nu_k - nu_top or -conj(nu_k) - nu_top in 2Z + i T Z
    cert.p_mask.assign(n, false);
    const cplx top = nu.coords[0];
    for (std::size_t k = 0; k < n; ++k) {
        const cplx d1 = nu.coords[k] - top;
        const cplx d2 = -std::conj(nu.coords[k]) - top;
        if (lattice_member(ctx, d1, RealLattice::EvenIntegers, T) ||
            lattice_member(ctx, d2, RealLattice::EvenIntegers, T))
            cert.p_mask[k] = true;
    }

    bool full = true;
    for (bool b : cert.p_mask) full = full && b;
    if (full) {
        // the proof's contradiction step: p can only be everything at nu = 2rho
        const Weight two_rho = cd.two_rho();
        bool at_trivial = true;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(nu.coords[k] - two_rho.coords[k]) >= ctx.tol) {
                at_trivial = false;
                break;
            }
        cert.verdict = at_trivial ? IsolationVerdict::IsTrivialPoint
                                  : IsolationVerdict::Inconclusive;
        cert.note = at_trivial ? "nu = 2rho" : "p covers all indices away from 2rho";
        return cert;
    }

    // nu~: p-indices first, real parts decreasing within each block
    std::vector<std::size_t> in_p, out_p;
    for (std::size_t k = 0; k < n; ++k) (cert.p_mask[k] ? in_p : out_p).push_back(k);
    auto by_re_desc = [&](std::size_t a, std::size_t b) {
        return nu.coords[a].real() > nu.coords[b].real();
    };
    std::stable_sort(in_p.begin(), in_p.end(), by_re_desc);
    std::stable_sort(out_p.begin(), out_p.end(), by_re_desc);
    cert.nu_tilde.coords.clear();
    for (std::size_t k : in_p) cert.nu_tilde.coords.push_back(nu.coords[k]);
    for (std::size_t k : out_p) cert.nu_tilde.coords.push_back(nu.coords[k]);

    // block means t (over p) and s (over the complement) must be imaginary
    cplx tsum = 0.0, ssum = 0.0;
    for (std::size_t k : in_p) tsum += nu.coords[k];
    for (std::size_t k : out_p) ssum += nu.coords[k];
    cert.t = tsum / static_cast<double>(in_p.size());
    cert.s = out_p.empty() ? cplx(0.0) : ssum / static_cast<double>(out_p.size());
    if (std::abs(cert.t.real()) >= ctx.tol || std::abs(cert.s.real()) >= ctx.tol) {
        cert.verdict = IsolationVerdict::Inconclusive;
        cert.note = "block means not imaginary";
        return cert;
    }

    // fundamental-weight character inequality on the p-block (condition (2)):
    // Tr(K_{nu~^1}) has modulus sum_{k in p} q^{Re nu~_k} > [#p]_q = Tr(K_{2rho^Sigma1})
    double lhs = 0.0;
    for (std::size_t k : in_p) lhs += std::pow(ctx.q, nu.coords[k].real());
    const double rhs = q_int(ctx, static_cast<long>(in_p.size()));
    cert.inequality_lhs = lhs;
    cert.inequality_rhs = rhs;
    if (lhs > rhs) {
        cert.verdict = IsolationVerdict::NotUnitarizable;
        cert.note = "norm bound violated on the p-block factor";
    } else {
        cert.verdict = IsolationVerdict::Inconclusive;
        cert.note = "character inequality not strict";
    }
    return cert;
}

// ---------------------------------------------------------------------------
// fiber-functor dimension bound
// ---------------------------------------------------------------------------

struct FiberVerdict {
    bool allowed = false;
    double t = 0.0;
};

// N = q^t + 1 + q^{-t} with t >= 0; allowed iff t <= 1 or t = 2
inline FiberVerdict fiber_dimension_allowed(const QContext& ctx, double N) {
    if (N < 3.0 - ctx.tol) throw std::invalid_argument("fiber_dimension_allowed: need N >= 3");
    const double M = std::max(N - 1.0, 2.0);  // q^t + q^{-t}
    // y^2 - M y + 1 = 0, take the root y <= 1 so t = log y / log q >= 0
    const double disc = std::max(M * M - 4.0, 0.0);
    const double y = (M - std::sqrt(disc)) / 2.0;
    const double t = std::log(y) / ctx.log_q;
    FiberVerdict v;
    v.t = t;
    v.allowed = (t <= 1.0 + ctx.tol) || (std::abs(t - 2.0) <= ctx.tol);
    return v;
}

// ---------------------------------------------------------------------------
// grid scan (CSV schema: nu_re_1..n, nu_im_1..n, class, t, s, reason)
// ---------------------------------------------------------------------------

struct ScanRow {
    Weight nu;
    UnitaryClass cls;
};

inline std::string scan_csv_header(std::size_t n) {
    std::ostringstream os;
    for (std::size_t k = 1; k <= n; ++k) os << "nu_re_" << k << ",";
    for (std::size_t k = 1; k <= n; ++k) os << "nu_im_" << k << ",";
    os << "class,t,s,reason";
    return os.str();
}

inline std::string scan_csv_row(const ScanRow& row) {
    std::ostringstream os;
    os.precision(12);
    for (const auto& z : row.nu.coords) os << z.real() << ",";
    for (const auto& z : row.nu.coords) os << z.imag() << ",";
    os << to_string(row.cls.tag) << ",";
    if (row.cls.tag == ClassTag::Complementary)
        os << row.cls.t << "," << row.cls.s << ",";
    else
        os << ",,";
    os << to_string(row.cls.reason);
    return os.str();
}

}  // namespace qrep
