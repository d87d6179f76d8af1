// Shows why the radial weight needs extended precision near mu = 1: the
// closed form evaluated in plain doubles loses every significant digit and
// even crosses zero, while the series route stays smooth.

#include <cstdio>

#include "sepvol/jacobian.hpp"

int main() {
    const auto real_ev = sepvol::JacobianEvaluator::make(sepvol::Ensemble::real);
    const auto cplx_ev = sepvol::JacobianEvaluator::make(sepvol::Ensemble::cplx);

    std::printf("%-8s  %-22s  %-22s  %-22s  %-22s\n", "mu", "real stable", "real naive",
                "complex stable", "complex naive");
    for (double mu = 0.90; mu < 1.0005; mu += 0.01) {
        std::printf("%-8.2f  %-22.15e  %-22.15e  %-22.15e  %-22.15e\n", mu, real_ev(mu),
                    real_ev.naive(mu), cplx_ev(mu), cplx_ev.naive(mu));
    }
    return 0;
}
