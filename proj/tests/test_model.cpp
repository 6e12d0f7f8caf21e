#include <doctest.h>

#include "shellrg/model.hpp"
#include "shellrg/rng.hpp"

using namespace shellrg;

namespace {

std::vector<Complex> window(std::initializer_list<double> re) {
    std::vector<Complex> w;
    for (double x : re) w.emplace_back(x, 0.0);
    return w;
}

} // namespace

TEST_CASE("coupling: dyadic direct values") {
    const ModelSpec m = dyadicModel();
    CHECK(coupling(m, window({0, 0, 0})) == Complex(0, 0));
    // f = u_{n-1}^2 - 2 u_n u_{n+1} on the all-ones window
    CHECK(coupling(m, window({1, 1, 1})).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(coupling(m, window({2, 3, 5})).real() == doctest::Approx(4.0 - 30.0).epsilon(1e-15));
}

TEST_CASE("coupling: gledzer direct value on the all-ones window") {
    const ModelSpec m = gledzerModel();
    // 9/40 + 11/20 - 2 + 2 - 1 = -9/40
    CHECK(coupling(m, window({1, 1, 1, 1, 1})).real() ==
          doctest::Approx(-9.0 / 40).epsilon(1e-15));
}

TEST_CASE("coupling: sabra direct value on the all-ones window") {
    const ModelSpec m = sabraModel();
    const Complex f = coupling(m, std::vector<Complex>(5, Complex(1, 0)));
    CHECK(f.real() == doctest::Approx(0.0));
    CHECK(f.imag() == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("coupling: contract violations") {
    CHECK_THROWS_AS((void)coupling(dyadicModel(), window({1, 1, 1, 1, 1})), ContractViolation);
    CHECK_THROWS_AS((void)coupling(gledzerModel(), window({1, 1, 1})), ContractViolation);
    std::vector<Complex> cplx(3, Complex(0, 1));
    CHECK_THROWS_AS((void)coupling(dyadicModel(), cplx), ContractViolation);
}

TEST_CASE("coupling: quadratic homogeneity, randomized") {
    for (const ModelSpec m : {dyadicModel(), gledzerModel(), sabraModel()}) {
        const int width = m.stencilWidth();
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<Complex> w(static_cast<size_t>(width));
            for (int i = 0; i < width; ++i) {
                const double re = uniformRange(rngKey(7, static_cast<uint64_t>(trial),
                                                      static_cast<uint64_t>(i), 0),
                                               -2.0, 2.0);
                const double im =
                    m.kind() == ScalarKind::Cplx
                        ? uniformRange(rngKey(7, static_cast<uint64_t>(trial),
                                              static_cast<uint64_t>(i), 1),
                                       -2.0, 2.0)
                        : 0.0;
                w[static_cast<size_t>(i)] = Complex(re, im);
            }
            const double c = uniformRange(rngKey(9, static_cast<uint64_t>(trial)), -3.0, 3.0);
            std::vector<Complex> wc = w;
            for (Complex& u : wc) u *= c;
            const Complex lhs = coupling(m, wc);
            const Complex rhs = c * c * coupling(m, w);
            CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("wavenumber is the exact power of two") {
    CHECK(wavenumber(0) == 1.0);
    CHECK(wavenumber(1) == 2.0);
    CHECK(wavenumber(-1) == 0.5);
    CHECK(wavenumber(20) == 1048576.0);
}
