// Tabulate the rank-one intertwiner diagonal T^s : L(0,nu) -> L(0,-nu),
// comparing the closed-form product with the least-squares extraction from
// the truncated principal-series model.

#include <cstdio>
#include <vector>

#include "qrep/suq2.hpp"

using namespace qrep;

int main() {
    QContext ctx(0.5);
    const int S_max = 8;

    for (cplx nu : {cplx(0.5, 0.0), cplx(0.9, 0.0), cplx(1.2, 0.0), cplx(0.0, 2.0)}) {
        std::printf("nu = %.2f%+.2fi   (class: %s)\n", nu.real(), nu.imag(),
                    to_string(classify_su2(ctx, nu).tag).c_str());
        const std::vector<cplx> numeric = intertwiner_numeric(ctx, nu, S_max);
        std::printf("  %2s  %22s  %22s  %10s\n", "s", "closed form", "numeric", "abs diff");
        for (std::size_t s = 0; s < numeric.size(); ++s) {
            const cplx closed = intertwiner_closed_form(ctx, nu, static_cast<int>(s));
            std::printf("  %2zu  %10.6f%+10.6fi  %10.6f%+10.6fi  %10.2e\n", s,
                        closed.real(), closed.imag(), numeric[s].real(), numeric[s].imag(),
                        std::abs(closed - numeric[s]));
        }
        std::printf("\n");
    }

    // the singular parameter nu = 1 is rejected up front
    try {
        intertwiner_closed_form(ctx, 1.0, 3);
    } catch (const SingularParameterError& e) {
        std::printf("nu = 1: %s\n", e.what());
    }
    return 0;
}
