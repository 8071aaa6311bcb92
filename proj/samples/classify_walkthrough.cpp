// Walkthrough: classify a handful of SU_q(3) spherical parameters and print
// the supporting evidence (invariant form, norm bound, isolation certificate).

#include <cstdio>
#include <vector>

#include "qrep/spectra.hpp"

using namespace qrep;

int main() {
    QContext ctx(0.5);
    CartanData cd(3);

    const std::vector<Weight> points = {
        Weight(std::vector<cplx>{cplx(0, 1), 0.0, cplx(0, -1)}),  // unitary axis
        Weight(std::vector<double>{0.5, -0.5, 0}),                // complementary
        Weight(std::vector<double>{2, 0, -2}),                    // trivial character
        Weight(std::vector<double>{1.5, -1.5, 0}),                // past the endpoint
        Weight(std::vector<double>{1, 2, -3}),                    // no invariant form
    };

    const auto lambdas = first_dominant_weights(cd, 10);
    for (const Weight& nu : points) {
        const UnitaryClass cls = classify_su3(ctx, cd, nu);
        std::printf("nu = (");
        for (std::size_t k = 0; k < 3; ++k)
            std::printf("%s%.2f%+.2fi", k ? ", " : "", nu.coords[k].real(),
                        nu.coords[k].imag());
        std::printf(")\n  class: %s", to_string(cls.tag).c_str());
        if (cls.tag == ClassTag::Complementary)
            std::printf("  (t = %.3f, s = %.3f)", cls.t, cls.s);
        if (cls.reason != NonUnitaryReason::None)
            std::printf("  [%s]", to_string(cls.reason).c_str());
        std::printf("\n  invariant form: %s\n",
                    has_invariant_form(ctx, cd, nu).exists ? "yes" : "no");
        const auto nb = norm_bound_test(ctx, cd, nu, lambdas);
        std::printf("  norm bound (first 10 weights): %s\n", nb.holds ? "holds" : "violated");
    }

    // isolation of the trivial point: a symmetric perturbation of 2*rho
    const Weight near_triv(std::vector<double>{2.1, 0, -2.1});
    const IsolationCertificate cert = isolation_witness(ctx, cd, near_triv);
    std::printf("\nisolation at (2.1, 0, -2.1): %s  (lhs %.4f > rhs %.4f)\n",
                to_string(cert.verdict).c_str(), cert.inequality_lhs, cert.inequality_rhs);
    return 0;
}
