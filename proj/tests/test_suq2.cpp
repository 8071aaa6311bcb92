#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qrep/suq2.hpp"

using namespace qrep;
using Catch::Approx;

namespace {

// evaluation pairing between a functional omega and an element f of the
// coefficient algebra, both stored blockwise: sum_s sum_ij omega^s_ij f^s_ij
cplx cc_eval(const CcElement& omega, const CcElement& f) {
    cplx s = 0.0;
    for (const auto& [t, A] : f) {
        auto it = omega.find(t);
        if (it == omega.end()) continue;
        s += (it->second.array() * A.array()).sum();
    }
    return s;
}

// weight-0 column extraction: Lambda of a blockwise element in the
// (S_max+1)^2-dimensional principal-series basis
VectorXcd lambda_of(const CcElement& f, int S_max) {
    VectorXcd v = VectorXcd::Zero((S_max + 1) * (S_max + 1));
    for (const auto& [t, A] : f) {
        if (t % 2 != 0) continue;
        const int s = t / 2;
        if (s > S_max) continue;
        for (int i = 0; i <= t; ++i) v(PrincipalSeriesModel::pos(s, i)) = A(i, s);
    }
    return v;
}

double rel_err(const MatrixXcd& got, const MatrixXcd& want) {
    const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
    return (got - want).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("uq_sl2_module satisfies the algebra relations") {
    QContext ctx(0.5);
    for (int two_s : {0, 1, 2, 3, 5, 8, 13, 24}) {
        SU2Module m = uq_sl2_module(ctx, two_s);
        const double qq = ctx.q - 1.0 / ctx.q;
        auto rel = [](const MatrixXd& got, const MatrixXd& want) {
            const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
            return (got - want).cwiseAbs().maxCoeff() / scale;
        };
        CHECK(rel(m.K * m.E * m.K_inv, (ctx.q * ctx.q) * m.E) < 1e-12);
        CHECK(rel(m.K * m.F * m.K_inv, (1.0 / (ctx.q * ctx.q)) * m.F) < 1e-12);
        CHECK(rel(m.E * m.F - m.F * m.E, (m.K - m.K_inv) / qq) < 1e-12);
        CHECK(rel(m.K * m.K_inv, MatrixXd::Identity(m.dim(), m.dim())) < 1e-14);
    }
}

TEST_CASE("spin-1 module: explicit [E,F] diagonal") {
    QContext ctx(0.5);
    SU2Module m = uq_sl2_module(ctx, 2);
    MatrixXd comm = m.E * m.F - m.F * m.E;
    const double qq = ctx.q - 1.0 / ctx.q;
    CHECK(comm(0, 0) == Approx((ctx.q * ctx.q - 1.0 / (ctx.q * ctx.q)) / qq));
    CHECK(comm(1, 1) == Approx(0.0).margin(1e-13));
    CHECK(comm(2, 2) == Approx(-comm(0, 0)));
}

TEST_CASE("Clebsch-Gordan isometries: orthonormal, orthogonal, intertwining") {
    QContext ctx(0.5);
    for (int s1 = 0; s1 <= 8; ++s1)
        for (int s2 = 0; s2 <= 8 - s1 + 8; ++s2) {
            if (s1 + s2 > 16 || s2 > 8) continue;
            const CGIsometry& iso = cg_decompose(ctx, s1, s2);
            const SU2Module m1 = uq_sl2_module(ctx, s1), m2 = uq_sl2_module(ctx, s2);
            const MatrixXd dE =
                Eigen::kroneckerProduct(m1.E, MatrixXd::Identity(m2.dim(), m2.dim())).eval() +
                Eigen::kroneckerProduct(m1.K, m2.E).eval();
            const MatrixXd dF =
                Eigen::kroneckerProduct(m1.F, m2.K_inv).eval() +
                Eigen::kroneckerProduct(MatrixXd::Identity(m1.dim(), m1.dim()), m2.F).eval();
            // completeness: total target dimension = d1*d2
            int total = 0;
            for (const auto& [t, M] : iso.injections) total += t + 1;
            CHECK(total == m1.dim() * m2.dim());
            for (const auto& [t, M] : iso.injections) {
                CHECK((M.transpose() * M - MatrixXd::Identity(t + 1, t + 1))
                          .cwiseAbs()
                          .maxCoeff() < 1e-10);
                // intertwining with the coproduct action
                const SU2Module tgt = uq_sl2_module(ctx, t);
                CHECK((dE * M - M * tgt.E).cwiseAbs().maxCoeff() <
                      1e-10 * std::max(1.0, tgt.E.cwiseAbs().maxCoeff()));
                CHECK((dF * M - M * tgt.F).cwiseAbs().maxCoeff() <
                      1e-10 * std::max(1.0, tgt.F.cwiseAbs().maxCoeff()));
                // mutual orthogonality with every other target
                for (const auto& [u, N] : iso.injections) {
                    if (u == t) continue;
                    CHECK((M.transpose() * N).cwiseAbs().maxCoeff() < 1e-10);
                }
            }
        }
}

TEST_CASE("CG special cases") {
    QContext ctx(0.5);
    // (s, 0): single identity injection
    const CGIsometry& triv = cg_decompose(ctx, 5, 0);
    REQUIRE(triv.injections.size() == 1);
    CHECK((triv.injections.at(5) - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    // (1/2, 1/2): targets spin 0 and spin 1
    const CGIsometry& half = cg_decompose(ctx, 1, 1);
    REQUIRE(half.injections.size() == 2);
    CHECK(half.injections.count(0) == 1);
    CHECK(half.injections.count(2) == 1);
}

TEST_CASE("coefficient_action moves the Haar state into the spin-1/2 block") {
    QContext ctx(0.5);
    const CcElement phi = cc_haar_state();
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (HitSide side : {HitSide::Left, HitSide::Right}) {
                CcElement r = coefficient_action(ctx, k, l, phi, side);
                REQUIRE(r.size() == 1);
                CHECK(r.count(1) == 1);
            }
}

TEST_CASE("coefficient_action agrees with the product pairing") {
    QContext ctx(0.5);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        // random functional supported on spins 0..3/2
        CcElement omega;
        for (int t = 0; t <= 3; ++t) {
            MatrixXcd A(t + 1, t + 1);
            for (int r = 0; r <= t; ++r)
                for (int c = 0; c <= t; ++c) A(r, c) = cplx(u(rng), u(rng));
            omega[t] = A;
        }
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                const CcElement gen = cc_unit(1, k, l);
                for (int t = 0; t <= 4; ++t)
                    for (int i = 0; i <= t; ++i)
                        for (int j = 0; j <= t; ++j) {
                            const CcElement y = cc_unit(t, i, j);
                            // (c_{kl} |> omega)(y) = omega(y c_{kl})
                            const cplx lhs_left =
                                cc_eval(coefficient_action(ctx, k, l, omega, HitSide::Left), y);
                            const cplx rhs_left = cc_eval(omega, o_mul(ctx, y, gen));
                            CHECK(std::abs(lhs_left - rhs_left) < 1e-11);
                            // (omega <| c_{kl})(y) = omega(c_{kl} y)
                            const cplx lhs_right =
                                cc_eval(coefficient_action(ctx, k, l, omega, HitSide::Right), y);
                            const cplx rhs_right = cc_eval(omega, o_mul(ctx, gen, y));
                            CHECK(std::abs(lhs_right - rhs_right) < 1e-11);
                        }
            }
    }
}

TEST_CASE("iterated coefficient actions compose through the product") {
    QContext ctx(0.5);
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CcElement omega;
    for (int t = 0; t <= 2; ++t) {
        MatrixXcd A(t + 1, t + 1);
        for (int r = 0; r <= t; ++r)
            for (int c = 0; c <= t; ++c) A(r, c) = cplx(u(rng), u(rng));
        omega[t] = A;
    }
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n) {
                    const CcElement g1 = cc_unit(1, k, l), g2 = cc_unit(1, m, n);
                    for (int t = 0; t <= 3; ++t)
                        for (int i = 0; i <= t; ++i) {
                            const CcElement y = cc_unit(t, i, std::min(i + 1, t));
                            // (c_kl |> (c_mn |> omega))(y) = omega(y c_kl c_mn)
                            const cplx lhs = cc_eval(
                                coefficient_action(
                                    ctx, k, l,
                                    coefficient_action(ctx, m, n, omega, HitSide::Left),
                                    HitSide::Left),
                                y);
                            const cplx rhs =
                                cc_eval(omega, o_mul(ctx, o_mul(ctx, y, g1), g2));
                            CHECK(std::abs(lhs - rhs) < 1e-10);
                            // ((omega <| c_kl) <| c_mn)(y) = omega(c_kl c_mn y)
                            const cplx lhs2 = cc_eval(
                                coefficient_action(
                                    ctx, m, n,
                                    coefficient_action(ctx, k, l, omega, HitSide::Right),
                                    HitSide::Right),
                                y);
                            const cplx rhs2 =
                                cc_eval(omega, o_mul(ctx, o_mul(ctx, g1, g2), y));
                            CHECK(std::abs(lhs2 - rhs2) < 1e-10);
                        }
                }
}

TEST_CASE("antipode and star tables") {
    for (double q : {0.3, 0.5, 0.8}) {
        QContext ctx(q);
        auto S = antipode_table(ctx);
        CHECK(S[static_cast<int>(OGen::A)].gen == OGen::D);
        CHECK(S[static_cast<int>(OGen::A)].coeff == Approx(1.0));
        CHECK(S[static_cast<int>(OGen::D)].gen == OGen::A);
        CHECK(S[static_cast<int>(OGen::D)].coeff == Approx(1.0));
        CHECK(S[static_cast<int>(OGen::C)].gen == OGen::C);
        CHECK(S[static_cast<int>(OGen::C)].coeff == Approx(-q));
        CHECK(S[static_cast<int>(OGen::B)].gen == OGen::B);
        CHECK(S[static_cast<int>(OGen::B)].coeff == Approx(-1.0 / q));
        // S^2 acts by q^{-2} on b and q^2 on c, identity on a, d
        auto sq = [&](OGen g) {
            GenImage im1 = S[static_cast<int>(g)];
            GenImage im2 = S[static_cast<int>(im1.gen)];
            return std::make_pair(im2.gen, im1.coeff * im2.coeff);
        };
        CHECK(sq(OGen::A).first == OGen::A);
        CHECK(sq(OGen::A).second == Approx(1.0));
        CHECK(sq(OGen::B).first == OGen::B);
        CHECK(sq(OGen::B).second == Approx(1.0 / (q * q)));
        CHECK(sq(OGen::C).second == Approx(q * q));
        // star: a* = d, d* = a, b* = -q c, c* = -q^{-1} b
        CHECK(star_gen(ctx, OGen::A).gen == OGen::D);
        CHECK(star_gen(ctx, OGen::D).gen == OGen::A);
        CHECK(star_gen(ctx, OGen::B).gen == OGen::C);
        CHECK(star_gen(ctx, OGen::B).coeff == Approx(-q));
        CHECK(star_gen(ctx, OGen::C).gen == OGen::B);
        CHECK(star_gen(ctx, OGen::C).coeff == Approx(-1.0 / q));
    }
}

TEST_CASE("principal series satisfies the coordinate-algebra relations") {
    QContext ctx(0.5);
    const int S_max = 6;
    for (cplx nu : {cplx(0.3, 0.0), cplx(1.2, 0.0), cplx(0.0, 2.0), cplx(0.4, 1.1)}) {
        PrincipalSeriesModel m = principal_series(ctx, nu, S_max);
        const MatrixXcd& A = m.action(OGen::A);
        const MatrixXcd& B = m.action(OGen::B);
        const MatrixXcd& C = m.action(OGen::C);
        const MatrixXcd& D = m.action(OGen::D);
        const int N = m.dim();
        const MatrixXcd I = MatrixXcd::Identity(N, N);
        // compare only on columns whose spin is <= S_max - 2 so no truncation
        // enters the two-step products
        auto check_cols = [&](const MatrixXcd& lhs, const MatrixXcd& rhs) {
            for (int s = 0; s <= S_max - 2; ++s)
                for (int i = 0; i <= 2 * s; ++i) {
                    const int c = PrincipalSeriesModel::pos(s, i);
                    CHECK((lhs.col(c) - rhs.col(c)).cwiseAbs().maxCoeff() <
                          1e-9 * std::max(1.0, rhs.col(c).cwiseAbs().maxCoeff()));
                }
        };
        check_cols(A * B, ctx.q * B * A);
        check_cols(A * C, ctx.q * C * A);
        check_cols(B * C, C * B);
        check_cols(A * D - ctx.q * B * C, I);
        check_cols(D * A - (1.0 / ctx.q) * B * C, I);
    }
}

TEST_CASE("pi^nu(a) moves the spherical vector into the spin-1 block") {
    QContext ctx(0.5);
    PrincipalSeriesModel m = principal_series(ctx, 0.7, 4);
    const VectorXcd col = m.action(OGen::A).col(PrincipalSeriesModel::pos(0, 0));
    double spin1_mass = 0.0;
    for (int i = 0; i <= 2; ++i) spin1_mass += std::abs(col(PrincipalSeriesModel::pos(1, i)));
    CHECK(spin1_mass > 1e-3);
}

TEST_CASE("iterated action of c on the spherical vector: one-step recursion") {
    QContext ctx(0.5);
    const int S_max = 6;
    const auto S = antipode_table(ctx);
    for (cplx nu : {cplx(0.5, 0.0), cplx(0.0, 2.0)}) {
        // omega_r = phi <| (c^r a^r), applying the c's first
        CcElement omega = cc_haar_state();
        std::vector<CcElement> chain;  // chain[r] = omega_r
        chain.push_back(omega);
        for (int r = 1; r <= 3; ++r) {
            CcElement w = cc_haar_state();
            for (int k = 0; k < r; ++k) w = coefficient_action(ctx, 0, 1, w, HitSide::Right);
            for (int k = 0; k < r; ++k) w = coefficient_action(ctx, 0, 0, w, HitSide::Right);
            chain.push_back(w);
        }
        for (int r = 0; r <= 2; ++r) {
            CcElement lhs = pi_nu_apply(ctx, nu, 0, 1, chain[r], S);
            const cplx scalar =
                q_power(ctx, static_cast<double>(r + 2)) *
                (-q_power(ctx, static_cast<double>(r + 1) + nu) +
                 q_power(ctx, -static_cast<double>(r + 1) - nu));
            VectorXcd l = lambda_of(lhs, S_max);
            VectorXcd rr = scalar * lambda_of(chain[r + 1], S_max);
            CHECK((l - rr).cwiseAbs().maxCoeff() <
                  1e-9 * std::max(1.0, rr.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("haar_dual_weight examples") {
    QContext ctx(0.5);
    CHECK(std::abs(haar_dual_weight(ctx, cc_haar_state()) - 1.0) < 1e-12);
    for (int s = 0; s <= 4; ++s) {
        CcElement idblock;
        idblock[2 * s] = MatrixXcd::Identity(2 * s + 1, 2 * s + 1);
        const double d = q_int(ctx, 2 * s + 1);
        CHECK(std::abs(haar_dual_weight(ctx, idblock) - d * d) < 1e-9 * d * d);
        CHECK(std::abs(haar_dual_weight(ctx, cc_unit(2 * s, s, s)) - d) < 1e-10 * d);
    }
}

TEST_CASE("invariant pairing: norms and orthogonality") {
    QContext ctx(0.5);
    PrincipalSeriesModel m = principal_series(ctx, 0.3, 4);
    const int N = m.dim();
    VectorXcd e00 = VectorXcd::Zero(N), e10 = VectorXcd::Zero(N), e11 = VectorXcd::Zero(N);
    e00(PrincipalSeriesModel::pos(0, 0)) = 1.0;
    e10(PrincipalSeriesModel::pos(1, 0)) = 1.0;
    e11(PrincipalSeriesModel::pos(1, 1)) = 1.0;
    CHECK(std::abs(invariant_pairing(ctx, m, e00, e00) - 1.0) < 1e-12);
    CHECK(std::abs(invariant_pairing(ctx, m, e10, e10) - q_int(ctx, 3)) < 1e-12);
    CHECK(std::abs(invariant_pairing(ctx, m, e10, e11)) < 1e-12);
    CHECK(std::abs(invariant_pairing(ctx, m, e00, e10)) < 1e-12);
}

TEST_CASE("adjointness of pi^nu under the invariant pairing") {
    QContext ctx(0.5);
    const int S_max = 5;
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (cplx nu : {cplx(0.6, 0.0), cplx(0.0, 1.3), cplx(0.5, 0.9)}) {
        PrincipalSeriesModel mp = principal_series(ctx, nu, S_max);
        PrincipalSeriesModel ms = principal_series(ctx, -std::conj(nu), S_max);
        const int N = mp.dim();
        // vectors supported on spins <= S_max - 1 so a single generator
        // application stays inside the truncation
        VectorXcd v = VectorXcd::Zero(N), w = VectorXcd::Zero(N);
        for (int s = 0; s <= S_max - 1; ++s)
            for (int i = 0; i <= 2 * s; ++i) {
                v(PrincipalSeriesModel::pos(s, i)) = cplx(u(rng), u(rng));
                w(PrincipalSeriesModel::pos(s, i)) = cplx(u(rng), u(rng));
            }
        // the adjoint involution pairs the generators through the inverse
        // antipode: x^+ = S^{-1}(c_{ji}) for x = c_{ij}, explicitly
        // a^+ = d, d^+ = a, b^+ = -q^{-1} c, c^+ = -q b
        auto dagger = [&](OGen x) -> GenImage {
            switch (x) {
                case OGen::A: return {OGen::D, 1.0};
                case OGen::D: return {OGen::A, 1.0};
                case OGen::B: return {OGen::C, -1.0 / ctx.q};
                case OGen::C: return {OGen::B, -ctx.q};
            }
            throw std::logic_error("dagger");
        };
        for (int g = 0; g < 4; ++g) {
            const OGen x = static_cast<OGen>(g);
            const GenImage xs = dagger(x);
            const cplx lhs = invariant_pairing(ctx, mp, mp.action(x) * v, w);
            const cplx rhs = invariant_pairing(
                ctx, mp, v, (xs.coeff * (ms.action(xs.gen) * w)).eval());
            CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("intertwiner: closed form vs numeric solve") {
    QContext ctx(0.5);
    const int S_max = 8;
    for (cplx nu : {cplx(0.3, 0.0), cplx(0.9, 0.0), cplx(1.2, 0.0), cplx(0.0, 2.0)}) {
        auto numeric = intertwiner_numeric(ctx, nu, S_max);
        for (int s = 0; s < static_cast<int>(numeric.size()); ++s) {
            const cplx closed = intertwiner_closed_form(ctx, nu, s);
            CHECK(std::abs(numeric[s] - closed) < 1e-7 * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("intertwiner closed form: values and positivity") {
    QContext ctx(0.5);
    CHECK(std::abs(intertwiner_closed_form(ctx, 0.5, 0) - 1.0) < 1e-15);
    // T^1 at q = 1/2, nu = 1/2: (q^{1/2} - q^{-1/2})/(q^{3/2} - q^{-3/2}) = 2/7
    CHECK(std::abs(intertwiner_closed_form(ctx, 0.5, 1) - cplx(2.0 / 7.0)) < 1e-12);
    // nu = 0: every factor equals 1
    for (int s = 0; s <= 6; ++s)
        CHECK(std::abs(intertwiner_closed_form(ctx, 0.0, s) - 1.0) < 1e-12);
    // all T^s positive iff 0 <= nu < 1 on the real axis
    for (double nu = 0.05; nu < 1.96; nu += 0.05) {
        if (std::abs(nu - 1.0) < 1e-9) continue;
        bool all_pos = true;
        for (int s = 0; s <= 6; ++s)
            if (intertwiner_closed_form(ctx, nu, s).real() <= 0.0) all_pos = false;
        CHECK(all_pos == (nu < 1.0));
    }
}

TEST_CASE("intertwiner hypothesis failures raise SingularParameterError") {
    QContext ctx(0.5);
    CHECK_THROWS_AS(intertwiner_closed_form(ctx, 1.0, 3), SingularParameterError);
    CHECK_THROWS_AS(intertwiner_closed_form(ctx, -2.0, 3), SingularParameterError);
    const double hp = 0.5 * ctx.lattice_period;
    CHECK_THROWS_AS(intertwiner_closed_form(ctx, cplx(1.0, hp), 3), SingularParameterError);
    CHECK_THROWS_AS(intertwiner_numeric(ctx, 1.0, 6), SingularParameterError);
    try {
        intertwiner_closed_form(ctx, 2.0, 3);
        FAIL("expected throw");
    } catch (const SingularParameterError& e) {
        CHECK(e.r == 2);
    }
    // nu = 0 and half-integers are fine
    CHECK_NOTHROW(intertwiner_closed_form(ctx, 0.0, 3));
    CHECK_NOTHROW(intertwiner_closed_form(ctx, 1.5, 3));
}

TEST_CASE("classify_su2 examples") {
    QContext ctx(0.5);
    const double hp = 0.5 * ctx.lattice_period;
    CHECK(classify_su2(ctx, cplx(0.0, 2.0)).tag == ClassTag::Principal);
    auto comp = classify_su2(ctx, 0.5);
    CHECK(comp.tag == ClassTag::Complementary);
    CHECK(comp.t == Approx(0.5));
    CHECK(comp.s == Approx(0.0));
    CHECK(classify_su2(ctx, cplx(0.5, hp)).tag == ClassTag::Complementary);
    CHECK(classify_su2(ctx, 1.0).tag == ClassTag::Character);
    CHECK(classify_su2(ctx, -1.0).tag == ClassTag::Character);
    auto bad = classify_su2(ctx, 1.7);
    CHECK(bad.tag == ClassTag::NotUnitarizable);
    CHECK(bad.reason == NonUnitaryReason::FormIndefinite);
    auto off = classify_su2(ctx, cplx(0.3, 0.4));
    CHECK(off.tag == ClassTag::NotUnitarizable);
    CHECK(off.reason == NonUnitaryReason::NoInvariantForm);
}

TEST_CASE("model_to_json carries the schema and generator blocks") {
    QContext ctx(0.5);
    PrincipalSeriesModel m = principal_series(ctx, 0.3, 2);
    nlohmann::json j = model_to_json(m);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("dim") == 9);
    CHECK(j.at("generators").contains("a"));
    CHECK(j.at("generators").contains("d"));
    CHECK(j.at("generators").at("a").size() == 9);
}
