#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helesim/field.hpp"
#include "support/test_fields.hpp"

using namespace helesim;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid(6), ContractError);          // below minimum
    CHECK_THROWS_AS(Grid(12), ContractError);         // not a power of two
    CHECK_THROWS_AS(Grid(64, -1.0), ContractError);   // bad period
    Grid g(64);
    CHECK(g.spacing(0) == doctest::Approx(two_pi / 64));
    CHECK(g.volume() == doctest::Approx(two_pi));
    Grid g2(32, 16, two_pi, 4.0);
    CHECK(g2.size() == 512);
    CHECK(g2.volume() == doctest::Approx(two_pi * 4.0));
}

TEST_CASE("identity multiplier leaves fields unchanged") {
    Grid g(64);
    std::mt19937_64 rng(11);
    Field f = testing::random_smooth(g, rng);
    Field r = apply_fourier_multiplier(f, symbols::identity());
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(r[i] == doctest::Approx(f[i]).epsilon(1e-14));
}

TEST_CASE("abs_xi multiplier on a single mode") {
    Grid g(64);
    Field f = Field::sample(g, [](double x) { return std::cos(3 * x); });
    Field r = apply_fourier_multiplier(f, symbols::abs_xi());
    Field expect = Field::sample(g, [](double x) { return 3 * std::cos(3 * x); });
    CHECK(l2_norm(r - expect) < 1e-12);
}

TEST_CASE("derivative symbol differentiates one mode exactly") {
    Grid g(64);
    Field f = Field::sample(g, [](double x) { return std::sin(x); });
    Field r = apply_fourier_multiplier(f, symbols::derivative(0));
    Field expect = Field::sample(g, [](double x) { return std::cos(x); });
    CHECK(l2_norm(r - expect) < 1e-13);
}

TEST_CASE("gradient") {
    Grid g(64);
    SUBCASE("constant maps to zero") {
        Field f = Field::constant(g, 2.5);
        CHECK(gradient(f)[0].sup_abs() < 1e-13);
    }
    SUBCASE("cos(2x)") {
        Field f = Field::sample(g, [](double x) { return std::cos(2 * x); });
        Field expect =
            Field::sample(g, [](double x) { return -2 * std::sin(2 * x); });
        CHECK(l2_norm(gradient(f)[0] - expect) < 1e-12);
    }
    SUBCASE("two dimensions, one mode per axis") {
        Grid g2(32, 32);
        Field f = Field::sample(
            g2, [](double x, double y) { return std::cos(x) + std::sin(y); });
        VectorField df = gradient(f);
        Field e0 = Field::sample(g2, [](double x, double) { return -std::sin(x); });
        Field e1 = Field::sample(g2, [](double, double y) { return std::cos(y); });
        CHECK(l2_norm(df[0] - e0) < 1e-12);
        CHECK(l2_norm(df[1] - e1) < 1e-12);
    }
    SUBCASE("period other than 2pi") {
        Grid gl(64, 4.0);
        Field f = Field::sample(gl, [](double x) { return std::cos(two_pi * x / 4.0); });
        Field e = Field::sample(gl, [](double x) {
            return -(two_pi / 4.0) * std::sin(two_pi * x / 4.0);
        });
        CHECK(l2_norm(gradient(f)[0] - e) < 1e-12);
    }
}

TEST_CASE("integrate") {
    Grid g(64);
    CHECK(integrate(Field::constant(g, 1.0)) == doctest::Approx(two_pi));
    Field c = Field::sample(g, [](double x) { return std::cos(x); });
    CHECK(integrate(c) == doctest::Approx(0.0).epsilon(1e-14));
    Field c2 = Field::sample(g, [](double x) { return std::cos(x) * std::cos(x); });
    CHECK(integrate(c2) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("round trip and Parseval over random fields") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (const int n : {8, 32, 256}) {
        Grid g(n);
        // raw noise exercises every bin, Nyquist included
        std::vector<double> v(g.size());
        for (double& x : v) x = unif(rng);
        Field f = Field::from_samples(g, v);
        Field back = Field::from_spectrum(g, f.spectrum());
        double scale = f.sup_abs();
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(std::abs(back[i] - f[i]) <= 1e-12 * scale);

        double coeff_sum = 0.0;
        for (const Complex& c : f.spectrum()) coeff_sum += std::norm(c);
        CHECK(integrate(f * f) ==
              doctest::Approx(g.volume() * coeff_sum).epsilon(1e-10));
    }
    // 2-d
    Grid g2(16, 32);
    std::vector<double> v(g2.size());
    for (double& x : v) x = unif(rng);
    Field f = Field::from_samples(g2, v);
    Field back = Field::from_spectrum(g2, f.spectrum());
    CHECK(l2_norm(back - f) < 1e-12 * l2_norm(f));
}

TEST_CASE("hermitian symmetry of real-field spectra") {
    Grid g(32);
    std::mt19937_64 rng(5);
    Field f = testing::random_smooth(g, rng);
    const auto& c = f.spectrum();
    for (int i = 1; i < 32; ++i) {
        const Complex a = c[i];
        const Complex b = c[(32 - i) % 32];
        CHECK(std::abs(b - std::conj(a)) < 1e-14);
    }
}

TEST_CASE("gradient commutes with diagonal multipliers") {
    Grid g(64);
    std::mt19937_64 rng(7);
    Field f = testing::random_smooth(g, rng);
    Field a = derivative(apply_fourier_multiplier(f, symbols::abs_xi()), 0);
    Field b = apply_fourier_multiplier(derivative(f, 0), symbols::abs_xi());
    CHECK(l2_norm(a - b) < 1e-12);
}

TEST_CASE("integral of a gradient component vanishes") {
    Grid g(64);
    std::mt19937_64 rng(9);
    Field f = testing::random_smooth(g, rng);
    CHECK(std::abs(integrate(gradient(f)[0])) < 1e-13);
    Grid g2(16, 16);
    Field f2 = testing::random_smooth(g2, rng);
    CHECK(std::abs(integrate(gradient(f2)[1])) < 1e-13);
}

TEST_CASE("dealiased product is exact for resolved bandwidths") {
    Grid g(64);
    Field a = Field::sample(g, [](double x) { return std::cos(5 * x); });
    Field b = Field::sample(g, [](double x) { return std::sin(7 * x); });
    Field exact = Field::sample(g, [](double x) {
        // cos 5x sin 7x = (sin 12x + sin 2x)/2, fully resolved at N=64
        return 0.5 * (std::sin(12 * x) + std::sin(2 * x));
    });
    CHECK(l2_norm(multiply_dealiased(a, b) - exact) < 1e-13);
}

TEST_CASE("dealiased product truncates unresolvable modes instead of aliasing") {
    Grid g(32);
    // product bandwidth 30+30 = 60 >> N/2; the aliased pointwise product
    // would fold sin(60x)/2 onto low modes, the dealiased one must keep only
    // the resolved sin(2x)/2 half (modes above the padded band are cut)
    Field a = Field::sample(g, [](double x) { return std::sin(15 * x); });
    Field exact = Field::sample(g, [](double x) {
        return 0.5 - 0.5 * std::cos(30 * x);  // sin^2(15x)
    });
    Field p = multiply_dealiased(a, a);
    // resolved part of the exact product is just the mean 1/2
    Field resolved = Field::constant(g, 0.5);
    CHECK(l2_norm(p - resolved) < 1e-13);
    (void)exact;
}

TEST_CASE("translate shifts samples exactly") {
    Grid g(32);
    Field f = Field::sample(g, [](double x) { return std::sin(x) + 0.3 * std::cos(4 * x); });
    Field t = translate(f, 5);
    for (int i = 0; i < 32; ++i) CHECK(t[g.flat((i + 5) % 32)] == f[g.flat(i)]);
}

TEST_CASE("error paths") {
    Grid g(32);
    std::vector<double> bad(g.size(), 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(Field::from_samples(g, bad), InvalidFieldError);

    Field f = Field::sample(g, [](double x) { return std::cos(x); });
    MultiplierSymbol not_hermitian{
        [](const WaveVector&) { return Complex{0.0, 1.0}; }, "i"};
    CHECK_THROWS_AS(apply_fourier_multiplier(f, not_hermitian), ContractError);

    Grid g2(64);
    Field f2 = Field::zeros(g2);
    CHECK_THROWS_AS(f + f2, ContractError);
    CHECK_THROWS_AS(derivative(f, 1), ContractError);
}
