#pragma once

// Explicit Drinfeld-double model for SU_q(2): U_q(sl_2) modules, Clebsch-
// Gordan isometries, the matrix-coefficient calculus for O(SU_q(2)), the
// truncated spherical principal series L(0,nu) with its pi^nu action, the
// dual Haar weight, the invariant pairing, and the intertwiner
// L(0,nu) -> L(0,-nu) in closed form and by least squares.
//
// Conventions.  h* = C with form (x,y) = 2xy, so the single positive root is
// alpha = 1, rho = 1/2, and K_lambda acts on the weight-m vector by q^{2*lambda*m}.
// Module matrices use the coproduct-compatible scaling
//   K v_m = q^{2m} v_m,
//   E v_m = q^{m+1} sqrt([s-m]_q [s+m+1]_q) v_{m+1},
//   F v_m = q^{-m}  sqrt([s-m+1]_q [s+m]_q) v_{m-1},
// for which Delta(E) = E(x)1 + K(x)E yields Clebsch-Gordan injections with
// orthonormal, mutually orthogonal columns.  Matrix coefficients c^s_{ij} of
// the spin-s corepresentation are indexed so that row/column 0 carries the
// highest weight; the fundamental corepresentation supplies the generators
//   a = c_{00},  c = c_{01},  b = c_{10},  d = c_{11},
// the assignment forced by the skew pairing between O(SU_q(2)) and U_q(sl_2)
// together with the antipode table S(a) = d, S(c) = -q c, S(b) = -q^{-1} b,
// S(d) = a (itself derived, not assumed, in antipode_table below).

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrep/qnum.hpp"
#include "qrep/unitary_class.hpp"

namespace qrep {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct SU2Module {
    int two_s;
    MatrixXd E, F, K, K_inv;

    int dim() const { return two_s + 1; }
    // weight of basis vector i is m = s - i (doubled: two_s - 2i)
    double weight(int i) const { return 0.5 * (two_s - 2 * i); }
};

inline SU2Module uq_sl2_module(const QContext& ctx, int two_s) {
    if (two_s < 0) throw std::invalid_argument("uq_sl2_module: two_s must be >= 0");
    const int d = two_s + 1;
    SU2Module mod;
    mod.two_s = two_s;
    mod.E = MatrixXd::Zero(d, d);
    mod.F = MatrixXd::Zero(d, d);
    mod.K = MatrixXd::Zero(d, d);
    mod.K_inv = MatrixXd::Zero(d, d);
    const double s = two_s / 2.0;
    for (int i = 0; i < d; ++i) {
        const double m = s - i;
        mod.K(i, i) = std::pow(ctx.q, 2.0 * m);
        mod.K_inv(i, i) = std::pow(ctx.q, -2.0 * m);
        if (i > 0) {
            // E v_m = q^{m+1} sqrt([s-m]_q [s+m+1]_q) v_{m+1}
            mod.E(i - 1, i) = std::pow(ctx.q, m + 1.0) *
                              std::sqrt(q_int(ctx, std::lround(s - m)) *
                                        q_int(ctx, std::lround(s + m + 1)));
        }
        if (i < d - 1) {
            // F v_m = q^{-m} sqrt([s-m+1]_q [s+m]_q) v_{m-1}
            mod.F(i + 1, i) = std::pow(ctx.q, -m) *
                              std::sqrt(q_int(ctx, std::lround(s - m + 1)) *
                                        q_int(ctx, std::lround(s + m)));
        }
    }
    return mod;
}

struct CGIsometry {
    int two_s1, two_s2;
    // target twice-spin -> injection matrix of shape (d1*d2) x (target+1)
    // with orthonormal columns; tensor index (i1, i2) flattened as i1*d2 + i2
    std::map<int, MatrixXd> injections;
};

namespace detail {

struct CGKey {
    double q;
    int s1, s2;
    bool operator<(const CGKey& o) const {
        if (q != o.q) return q < o.q;
        if (s1 != o.s1) return s1 < o.s1;
        return s2 < o.s2;
    }
};

}  // namespace detail

inline CGIsometry cg_decompose_uncached(const QContext& ctx, int two_s1, int two_s2) {
    const SU2Module m1 = uq_sl2_module(ctx, two_s1);
    const SU2Module m2 = uq_sl2_module(ctx, two_s2);
    const int d1 = m1.dim(), d2 = m2.dim(), D = d1 * d2;
    const MatrixXd I1 = MatrixXd::Identity(d1, d1);
    const MatrixXd I2 = MatrixXd::Identity(d2, d2);
    // coproduct action: Delta(E) = E(x)1 + K(x)E, Delta(F) = F(x)K^-1 + 1(x)F
    MatrixXd dE = Eigen::kroneckerProduct(m1.E, I2).eval() +
                  Eigen::kroneckerProduct(m1.K, m2.E).eval();
    MatrixXd dF = Eigen::kroneckerProduct(m1.F, m2.K_inv).eval() +
                  Eigen::kroneckerProduct(I1, m2.F).eval();

    std::vector<int> two_wt(D);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j)
            two_wt[i * d2 + j] = (two_s1 - 2 * i) + (two_s2 - 2 * j);

    CGIsometry out;
    out.two_s1 = two_s1;
    out.two_s2 = two_s2;
    // columns of already-built (higher-spin) targets, grouped by weight; in
    // exact arithmetic the weight spaces split orthogonally across targets,
    // so projecting each new column onto the orthocomplement of these is a
    // no-op -- numerically it strips the error accumulated along the F-chain
    std::map<int, std::vector<VectorXd>> built;
    auto purify = [&](int two_m, VectorXd w) {
        auto it = built.find(two_m);
        if (it != built.end())
            for (const VectorXd& u : it->second) w -= u.dot(w) * u;
        const double n = w.norm();
        if (n < 1e-12)
            throw std::runtime_error("cg_decompose: degenerate column in the F-chain");
        return VectorXd(w / n);
    };

    for (int two_t = two_s1 + two_s2; two_t >= std::abs(two_s1 - two_s2); two_t -= 2) {
        // highest-weight vectors of spin t: kernel of Delta(E) on the
        // weight-t subspace
        std::vector<int> idx;
        for (int p = 0; p < D; ++p)
            if (two_wt[p] == two_t) idx.push_back(p);
        MatrixXd A(D, static_cast<int>(idx.size()));
        for (int c = 0; c < A.cols(); ++c) A.col(c) = dE.col(idx[c]);
        Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        int rank = 0;
        const double cut = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
        for (int k = 0; k < sv.size(); ++k)
            if (sv(k) > cut) ++rank;
        const int nullity = static_cast<int>(idx.size()) - rank;
        if (nullity != 1)
            throw std::runtime_error(
                "cg_decompose: highest-weight space has dimension " +
                std::to_string(nullity) + " (expected 1) at target " +
                std::to_string(two_t));
        VectorXd hwv = VectorXd::Zero(D);
        for (std::size_t c = 0; c < idx.size(); ++c)
            hwv(idx[c]) = svd.matrixV()(static_cast<int>(c), svd.matrixV().cols() - 1);

        MatrixXd inj(D, two_t + 1);
        inj.col(0) = purify(two_t, hwv);
        for (int k = 1; k <= two_t; ++k)
            inj.col(k) = purify(two_t - 2 * k, dF * inj.col(k - 1));
        for (int k = 0; k <= two_t; ++k) built[two_t - 2 * k].push_back(inj.col(k));
        out.injections.emplace(two_t, std::move(inj));
    }
    return out;
}

// memoized per (q, s1, s2); safe for concurrent use
inline const CGIsometry& cg_decompose(const QContext& ctx, int two_s1, int two_s2) {
    static std::mutex mu;
    static std::map<detail::CGKey, std::unique_ptr<CGIsometry>> cache;
    std::lock_guard<std::mutex> lock(mu);
    detail::CGKey key{ctx.q, two_s1, two_s2};
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto iso = std::make_unique<CGIsometry>(cg_decompose_uncached(ctx, two_s1, two_s2));
        it = cache.emplace(key, std::move(iso)).first;
    }
    return *it->second;
}

// ----------------------------------------------------------------------------
// c_c(G_q-hat) = (+) End(V(s)) elements and the O(SU_q(2)) coefficient calculus
// ----------------------------------------------------------------------------

// finitely supported block element: twice-spin -> matrix block
using CcElement = std::map<int, MatrixXcd>;

inline double cc_max_abs(const CcElement& f) {
    double m = 0.0;
    for (const auto& [s, A] : f) m = std::max(m, A.cwiseAbs().maxCoeff());
    return m;
}

inline void cc_accumulate(CcElement& into, const CcElement& f, cplx scale = 1.0) {
    for (const auto& [s, A] : f) {
        auto it = into.find(s);
        if (it == into.end())
            into[s] = scale * A;
        else
            it->second += scale * A;
    }
}

inline void cc_prune(CcElement& f, double eps = 1e-13) {
    for (auto it = f.begin(); it != f.end();) {
        if (it->second.cwiseAbs().maxCoeff() <= eps)
            it = f.erase(it);
        else
            ++it;
    }
}

inline CcElement cc_unit(int two_s, int i, int j) {
    CcElement f;
    f[two_s] = MatrixXcd::Zero(two_s + 1, two_s + 1);
    f[two_s](i, j) = 1.0;
    return f;
}

// the Haar state phi = p^0
inline CcElement cc_haar_state() { return cc_unit(0, 0, 0); }

// An element f = sum f^s_{ij} c^s_{ij} of O(SU_q(2)) is stored the same way
// (finitely many coefficient blocks); its evaluation on x in U_q is
// sum f^s_{ij} pi_s(x)_{ij}.  The product of two such elements decomposes
// through the CG injections:
//   c^{s}_{ij} c^{t}_{kl} = sum_r sum_{p,q} M_r[(i,k),p] M_r[(j,l),q] c^r_{pq}.
inline CcElement o_mul(const QContext& ctx, const CcElement& f, const CcElement& g) {
    CcElement out;
    for (const auto& [s, A] : f) {
        for (const auto& [t, B] : g) {
            const CGIsometry& iso = cg_decompose(ctx, s, t);
            MatrixXcd AB = Eigen::kroneckerProduct(A, B).eval();
            for (const auto& [r, M] : iso.injections) {
                MatrixXcd C = M.transpose() * AB * M;
                auto it = out.find(r);
                if (it == out.end())
                    out[r] = std::move(C);
                else
                    it->second += C;
            }
        }
    }
    cc_prune(out);
    return out;
}

enum class HitSide { Left, Right };

// coefficient_action: the actions of the spin-1/2 matrix coefficient c_{kl}
// on omega in c_c(G_q-hat),
//   (x |> omega)(y) = omega(y x)   [HitSide::Left]
//   (omega <| x)(y) = omega(x y)   [HitSide::Right]
// computed blockwise through the CG injections.
inline CcElement coefficient_action(const QContext& ctx, int k, int l,
                                    const CcElement& omega, HitSide side) {
    CcElement out;
    // candidate output spins are input spins +- 1/2
    std::vector<int> targets;
    for (const auto& [t, B] : omega) {
        if (t - 1 >= 0) targets.push_back(t - 1);
        targets.push_back(t + 1);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    for (int s : targets) {
        const int d = s + 1;
        MatrixXcd res = MatrixXcd::Zero(d, d);
        bool any = false;
        if (side == HitSide::Right) {
            // (omega <| c_{kl})^s_{ij} = omega(c_{kl} c^s_{ij})
            //   = sum_t sum_pq M_t[(k,i),p] M_t[(l,j),q] (omega_t)_{pq}
            const CGIsometry& iso = cg_decompose(ctx, 1, s);
            for (const auto& [t, M] : iso.injections) {
                auto it = omega.find(t);
                if (it == omega.end()) continue;
                // rows (k,i) of the (2d x (t+1)) injection: block k*d .. k*d+d-1
                MatrixXd T1 = M.middleRows(k * d, d);
                MatrixXd T2 = M.middleRows(l * d, d);
                res += T1 * it->second * T2.transpose();
                any = true;
            }
        } else {
            // (c_{kl} |> omega)^s_{ij} = omega(c^s_{ij} c_{kl})
            //   = sum_t sum_pq M_t[(i,k),p] M_t[(j,l),q] (omega_t)_{pq}
            const CGIsometry& iso = cg_decompose(ctx, s, 1);
            for (const auto& [t, M] : iso.injections) {
                auto it = omega.find(t);
                if (it == omega.end()) continue;
                // rows (i,k) with i = 0..d-1 at stride 2
                MatrixXd T1(d, M.cols()), T2(d, M.cols());
                for (int i = 0; i < d; ++i) {
                    T1.row(i) = M.row(i * 2 + k);
                    T2.row(i) = M.row(i * 2 + l);
                }
                res += T1 * it->second * T2.transpose();
                any = true;
            }
        }
        if (any && res.cwiseAbs().maxCoeff() > 1e-14) out[s] = std::move(res);
    }
    return out;
}

// ----------------------------------------------------------------------------
// generators of O(SU_q(2)) and the derived antipode / star tables
// ----------------------------------------------------------------------------

// generator order a, b, c, d with matrix-coefficient indices
//   a = c_{00}, c = c_{01}, b = c_{10}, d = c_{11}
enum class OGen : int { A = 0, B = 1, C = 2, D = 3 };

inline std::pair<int, int> gen_index(OGen g) {
    switch (g) {
        case OGen::A: return {0, 0};
        case OGen::B: return {1, 0};
        case OGen::C: return {0, 1};
        case OGen::D: return {1, 1};
    }
    throw std::logic_error("gen_index");
}

inline OGen gen_of_index(int i, int j) {
    if (i == 0 && j == 0) return OGen::A;
    if (i == 1 && j == 0) return OGen::B;
    if (i == 0 && j == 1) return OGen::C;
    return OGen::D;
}

inline char gen_name(OGen g) { return "abcd"[static_cast<int>(g)]; }

inline CcElement gen_element(OGen g) {
    auto [i, j] = gen_index(g);
    return cc_unit(1, i, j);
}

// antipode image of a generator: a scalar multiple of a single generator
struct GenImage {
    OGen gen;
    double coeff;
};

// Derive the antipode on the generators from the corepresentation-inverse
// (convolution) identity.  The pairing with U_q is skew, so the coproduct on
// matrix coefficients reads Delta(c_{ij}) = sum_k c_{kj} (x) c_{ik}, and
// S * id = unit . counit becomes sum_k S(c_{kj}) c_{ik} = delta_{ij} 1.
// Expanding each S(c_{kj}) in the generator basis and solving yields
// S(a) = d, S(d) = a, S(c) = -q c, S(b) = -q^{-1} b, asserted below.
inline std::array<GenImage, 4> antipode_table(const QContext& ctx) {
    // unknowns X[(k,j), g]: 16 reals; equations: for each (i,j), the element
    // sum_{k,g} X[(k,j),g] (c_g c_{ik}) - delta_{ij} * unit vanishes, where the
    // O(SU_q(2)) unit is c^0_{00}.  Each product is supported on spins 0 and 2,
    // giving 1 + 9 = 10 scalar equation coordinates per (i,j).
    auto flat = [](const CcElement& f, std::vector<cplx>& row) {
        // fixed layout: block 0 entry, then block 2 entries row-major
        row.assign(10, 0.0);
        auto it0 = f.find(0);
        if (it0 != f.end()) row[0] = it0->second(0, 0);
        auto it2 = f.find(2);
        if (it2 != f.end())
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) row[1 + 3 * r + c] = it2->second(r, c);
    };

    MatrixXd Amat = MatrixXd::Zero(4 * 10, 16);
    VectorXd bvec = VectorXd::Zero(4 * 10);
    std::vector<cplx> row;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const int eq_base = (i * 2 + j) * 10;
            if (i == j) bvec(eq_base + 0) = 1.0;  // delta_{ij} * unit c^0_{00}
            for (int k = 0; k < 2; ++k)
                for (int g = 0; g < 4; ++g) {
                    CcElement p = o_mul(ctx, gen_element(static_cast<OGen>(g)),
                                        cc_unit(1, i, k));
                    flat(p, row);
                    const int var = (k * 2 + j) * 4 + g;
                    for (int e = 0; e < 10; ++e) {
                        if (std::abs(row[e].imag()) > 1e-12)
                            throw std::runtime_error("antipode_table: unexpected complex product");
                        Amat(eq_base + e, var) += row[e].real();
                    }
                }
        }
    VectorXd x = Amat.colPivHouseholderQr().solve(bvec);
    if ((Amat * x - bvec).cwiseAbs().maxCoeff() > 1e-8)
        throw std::runtime_error("antipode_table: inverse-identity solve failed");

    // read off S(c_{ik}) and insist each is a single-generator multiple
    std::array<GenImage, 4> table{};
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            int found = -1;
            double coeff = 0.0;
            for (int g = 0; g < 4; ++g) {
                const double v = x((i * 2 + k) * 4 + g);
                if (std::abs(v) > 1e-8) {
                    if (found != -1)
                        throw std::runtime_error("antipode_table: non-monomial antipode image");
                    found = g;
                    coeff = v;
                }
            }
            if (found == -1) throw std::runtime_error("antipode_table: vanishing antipode image");
            table[static_cast<int>(gen_of_index(i, k))] = GenImage{static_cast<OGen>(found), coeff};
        }

    // assert the expected table
    auto expect = [&](OGen g, OGen img, double c) {
        const GenImage& got = table[static_cast<int>(g)];
        if (got.gen != img || std::abs(got.coeff - c) > 1e-8)
            throw std::runtime_error(std::string("antipode_table: derived S(") + gen_name(g) +
                                     ") disagrees with the expected table");
    };
    expect(OGen::A, OGen::D, 1.0);
    expect(OGen::D, OGen::A, 1.0);
    expect(OGen::C, OGen::C, -ctx.q);
    expect(OGen::B, OGen::B, -1.0 / ctx.q);
    return table;
}

inline GenImage antipode_gen(const QContext& ctx, OGen g) {
    return antipode_table(ctx)[static_cast<int>(g)];
}

// star on generators: (c_{ij})* = conj-coefficient antipode of c_{ji};
// explicitly a* = d, d* = a, b* = -q c, c* = -q^{-1} b
inline GenImage star_gen(const QContext& ctx, OGen g) {
    auto [i, j] = gen_index(g);
    GenImage im = antipode_gen(ctx, gen_of_index(j, i));
    return im;  // coefficients are real, so conjugation is a no-op
}

// ----------------------------------------------------------------------------
// truncated principal series
// ----------------------------------------------------------------------------

struct PrincipalSeriesModel {
    cplx nu;
    int S_max;  // integer spins 0..S_max; basis Lambda(e^{(s)}_{i,0})
    // basis index of e^{(s)}_{i,0} is s*s + i; total dimension (S_max+1)^2
    std::array<MatrixXcd, 4> gen_action;  // indexed by OGen
    bool truncated = false;               // some block above S_max was discarded

    int dim() const { return (S_max + 1) * (S_max + 1); }
    static int pos(int s, int i) { return s * s + i; }
    int spin_of(int p) const { return static_cast<int>(std::sqrt(static_cast<double>(p)) + 1e-9); }

    const MatrixXcd& action(OGen g) const { return gen_action[static_cast<int>(g)]; }
};

// pi^nu(c_{ij}) Lambda(omega) prior to the weight-0 projection:
//   sum_k K_{nu-2rho}(c_{kk}) (c_{ik} |> omega <| S(c_{kj}))
// with K_{nu-2rho}(a) = q^{nu-1}, K_{nu-2rho}(d) = q^{1-nu}.
inline CcElement pi_nu_apply(const QContext& ctx, cplx nu, int i, int j,
                             const CcElement& omega,
                             const std::array<GenImage, 4>& S) {
    const cplx kfac[2] = {q_power(ctx, nu - 1.0), q_power(ctx, 1.0 - nu)};
    CcElement total;
    for (int k = 0; k < 2; ++k) {
        const GenImage& sk = S[static_cast<int>(gen_of_index(k, j))];
        auto [p, r] = gen_index(sk.gen);
        CcElement tmp = coefficient_action(ctx, p, r, omega, HitSide::Right);
        for (auto& [s, A] : tmp) A *= sk.coeff;
        CcElement res = coefficient_action(ctx, i, k, tmp, HitSide::Left);
        cc_accumulate(total, res, kfac[k]);
    }
    cc_prune(total);
    return total;
}

inline PrincipalSeriesModel principal_series(const QContext& ctx, cplx nu, int S_max) {
    if (S_max < 2) throw std::invalid_argument("principal_series: S_max must be >= 2");
    const std::array<GenImage, 4> S = antipode_table(ctx);
    PrincipalSeriesModel model;
    model.nu = nu;
    model.S_max = S_max;
    const int N = model.dim();
    for (auto& M : model.gen_action) M = MatrixXcd::Zero(N, N);

    for (int s = 0; s <= S_max; ++s) {
        for (int i = 0; i <= 2 * s; ++i) {
            // e^{(s)}_{i,0}: block 2s, entry (i, s) -- column s is weight 0
            const CcElement omega = cc_unit(2 * s, i, s);
            const int col = PrincipalSeriesModel::pos(s, i);
            for (int g = 0; g < 4; ++g) {
                auto [gi, gj] = gen_index(static_cast<OGen>(g));
                CcElement res = pi_nu_apply(ctx, nu, gi, gj, omega, S);
                for (const auto& [t, A] : res) {
                    if (t % 2 != 0) continue;  // half-integer spins have no weight-0 column
                    const int sp = t / 2;
                    if (sp > S_max) {
                        model.truncated = true;
                        continue;
                    }
                    for (int r = 0; r <= t; ++r) {
                        const cplx v = A(r, sp);
                        if (std::abs(v) > 1e-15)
                            model.gen_action[g](PrincipalSeriesModel::pos(sp, r), col) += v;
                    }
                }
            }
        }
    }
    return model;
}

// phi-hat(omega) = sum_s Tr_s(K_{2rho}) Tr_s(K_{-2rho} omega_s)
// with Tr_s(K_{2rho}) = [2s+1]_q and (K_{-2rho})_{ii} = q^{-2(s-i)}
inline cplx haar_dual_weight(const QContext& ctx, const CcElement& omega) {
    cplx total = 0.0;
    for (const auto& [two_s, A] : omega) {
        const double s = two_s / 2.0;
        cplx tr = 0.0;
        for (int i = 0; i <= two_s; ++i) tr += std::pow(ctx.q, -2.0 * (s - i)) * A(i, i);
        total += q_int(ctx, two_s + 1) * tr;
    }
    return total;
}

// invariant pairing (Lambda(x), Lambda(y)) = phi-hat(y* x) restricted to the
// truncated basis: basis vectors are orthogonal with squared norm [2s+1]_q
inline cplx invariant_pairing(const QContext& ctx, const PrincipalSeriesModel& model,
                              const VectorXcd& v, const VectorXcd& w) {
    if (v.size() != model.dim() || w.size() != model.dim())
        throw std::invalid_argument("invariant_pairing: dimension mismatch");
    cplx total = 0.0;
    for (int s = 0; s <= model.S_max; ++s) {
        const double norm2 = q_int(ctx, 2 * s + 1);
        for (int i = 0; i <= 2 * s; ++i) {
            const int p = PrincipalSeriesModel::pos(s, i);
            total += std::conj(w(p)) * v(p) * norm2;
        }
    }
    return total;
}

// ----------------------------------------------------------------------------
// intertwiner T : L(0,nu) -> L(0,-nu)
// ----------------------------------------------------------------------------

struct SingularParameterError : std::runtime_error {
    int r;
    explicit SingularParameterError(int r_)
        : std::runtime_error("intertwiner: pole at factor r = " + std::to_string(r_)), r(r_) {}
};

// hypothesis of the intertwiner construction:
// nu must avoid (Z \ {0}) + (pi/|log q|) i Z
inline void check_intertwiner_hypothesis(const QContext& ctx, cplx nu) {
    const double half_period = 0.5 * ctx.lattice_period;
    const double re_round = std::round(nu.real());
    const double im_res = nu.imag() - half_period * std::round(nu.imag() / half_period);
    if (std::abs(nu.real() - re_round) < ctx.tol && std::abs(im_res) < ctx.tol &&
        std::abs(re_round) > 0.5)
        throw SingularParameterError(static_cast<int>(std::abs(re_round)));
}

// T^s = prod_{1<=r<=s} (q^{r-nu} - q^{-r+nu}) / (q^{r+nu} - q^{-r-nu}); T^0 = 1
inline cplx intertwiner_closed_form(const QContext& ctx, cplx nu, int s) {
    check_intertwiner_hypothesis(ctx, nu);
    cplx prod = 1.0;
    for (int r = 1; r <= s; ++r) {
        const cplx num = q_power(ctx, static_cast<double>(r) - nu) -
                         q_power(ctx, -static_cast<double>(r) + nu);
        const cplx den = q_power(ctx, static_cast<double>(r) + nu) -
                         q_power(ctx, -static_cast<double>(r) - nu);
        if (std::abs(den) < ctx.tol) throw SingularParameterError(r);
        prod *= num / den;
    }
    return prod;
}

// block scalars of T on isotypic components, solved from
// T pi^nu(x) = pi^{-nu}(x) T by least squares on the truncation interior
inline std::vector<cplx> intertwiner_numeric(const QContext& ctx, cplx nu, int S_max) {
    check_intertwiner_hypothesis(ctx, nu);
    const PrincipalSeriesModel mp = principal_series(ctx, nu, S_max);
    const PrincipalSeriesModel mm = principal_series(ctx, -nu, S_max);
    const int nvar = S_max + 1;  // t_0 .. t_Smax, t_0 fixed to 1
    std::vector<Eigen::RowVectorXcd> rows;
    for (int g = 0; g < 4; ++g) {
        const MatrixXcd& X = mp.gen_action[g];
        const MatrixXcd& Y = mm.gen_action[g];
        for (int sr = 0; sr <= S_max - 2; ++sr)
            for (int ir = 0; ir <= 2 * sr; ++ir) {
                const int rn = PrincipalSeriesModel::pos(sr, ir);
                for (int sc = 0; sc <= S_max - 2; ++sc)
                    for (int ic = 0; ic <= 2 * sc; ++ic) {
                        const int cn = PrincipalSeriesModel::pos(sc, ic);
                        if (std::abs(X(rn, cn)) < 1e-13 && std::abs(Y(rn, cn)) < 1e-13)
                            continue;
                        Eigen::RowVectorXcd eq = Eigen::RowVectorXcd::Zero(nvar);
                        eq(sr) += X(rn, cn);
                        eq(sc) -= Y(rn, cn);
                        rows.push_back(std::move(eq));
                    }
            }
    }
    MatrixXcd A(static_cast<int>(rows.size()), nvar);
    for (std::size_t k = 0; k < rows.size(); ++k) A.row(static_cast<int>(k)) = rows[k];
    // fix t_0 = 1: move column 0 to the right-hand side
    VectorXcd b = -A.col(0);
    MatrixXcd A1 = A.rightCols(nvar - 1);
    VectorXcd sol = A1.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    VectorXcd t(nvar);
    t(0) = 1.0;
    t.tail(nvar - 1) = sol;
    const double resid = (A * t).cwiseAbs().maxCoeff();
    if (resid > 1e-7)
        throw std::runtime_error("intertwiner_numeric: residual " + std::to_string(resid) +
                                 " too large; increase S_max");
    std::vector<cplx> out;
    for (int s = 0; s <= S_max - 2; ++s) out.push_back(t(s));
    return out;
}

// SU_q(2) spherical unitary dual: nu in iR -> principal series;
// nu in R + (pi/|log q|) i Z with 0 < |Re nu| < 1 -> complementary;
// |Re nu| = 1 on that line -> character; everything else not unitarizable
inline UnitaryClass classify_su2(const QContext& ctx, cplx nu) {
    const double half_period = 0.5 * ctx.lattice_period;  // pi/|log q|
    UnitaryClass out;
    if (std::abs(nu.real()) < ctx.tol) {
        out.tag = ClassTag::Principal;
        out.witness = "w=+1";
        return out;
    }
    const double im_res = nu.imag() - half_period * std::round(nu.imag() / half_period);
    if (std::abs(im_res) < ctx.tol) {
        const double t = nu.real();
        if (std::abs(std::abs(t) - 1.0) < ctx.tol) {
            out.tag = ClassTag::Character;
            out.t = t;
            out.witness = "w=-1";
        } else if (std::abs(t) < 1.0) {
            out.tag = ClassTag::Complementary;
            out.t = t;
            out.s = 0.0;
            out.witness = "w=-1";
        } else {
            out.tag = ClassTag::NotUnitarizable;
            out.reason = NonUnitaryReason::FormIndefinite;
        }
        return out;
    }
    out.tag = ClassTag::NotUnitarizable;
    out.reason = NonUnitaryReason::NoInvariantForm;
    return out;
}

// JSON model dump: nu, S_max, dense per-generator matrices (row-major [re,im])
inline nlohmann::json model_to_json(const PrincipalSeriesModel& model) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["nu"] = {model.nu.real(), model.nu.imag()};
    j["S_max"] = model.S_max;
    j["dim"] = model.dim();
    j["truncated"] = model.truncated;
    for (int g = 0; g < 4; ++g) {
        nlohmann::json rowsj = nlohmann::json::array();
        const MatrixXcd& M = model.gen_action[g];
        for (int r = 0; r < M.rows(); ++r) {
            nlohmann::json rowj = nlohmann::json::array();
            for (int c = 0; c < M.cols(); ++c)
                rowj.push_back({M(r, c).real(), M(r, c).imag()});
            rowsj.push_back(std::move(rowj));
        }
        j["generators"][std::string(1, gen_name(static_cast<OGen>(g)))] = std::move(rowsj);
    }
    return j;
}

}  // namespace qrep
