#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "passync/plant.hpp"

using namespace passync;

TEST_CASE("paper parameters") {
    PlantParams p = paper_params(8);
    CHECK(p.J[7] == doctest::Approx(1.3));
    CHECK(p.B[7] == doctest::Approx(-2.1));
    PlantParams p1 = paper_params(1);
    CHECK(p1.J[0] == doctest::Approx(0.6));
    CHECK(p1.B[0] == doctest::Approx(-1.4));
    for (int m : {1, 8, 250})
        for (double j : paper_params(m).J) CHECK(j > 0.0);
}

TEST_CASE("vector field arithmetic") {
    double dx, dv, u, d, v;
    PlantParams p{{1.0}, {0.0}};
    u = 1.0;
    d = 0.0;
    v = 0.0;
    plant_deriv(p, &v, &u, &d, 1, &dx, &dv);
    CHECK(dv == 1.0);
    CHECK(dx == 0.0);

    p = {{2.0}, {-1.0}};
    u = 0.0;
    v = 1.0;
    plant_deriv(p, &v, &u, &d, 1, &dx, &dv);
    CHECK(dv == doctest::Approx(0.5));
    CHECK(dx == 1.0);

    p = {{1.0}, {0.0}};
    v = 0.0;
    d = 0.25;
    plant_deriv(p, &v, &u, &d, 1, &dx, &dv);
    CHECK(dv == doctest::Approx(0.25));
}

TEST_CASE("linearity in u") {
    PlantParams p = paper_params(3);
    Vec v{0.3, -0.7, 1.1}, d{0.1, 0.1, 0.1};
    Vec u1{1.0, -2.0, 0.5}, u2{0.3, 0.9, -1.4}, u12(3);
    for (int i = 0; i < 3; ++i) u12[i] = u1[i] + u2[i];
    Vec dx(3), a(3), b(3);
    plant_deriv(p, v.data(), u12.data(), d.data(), 3, dx.data(), a.data());
    plant_deriv(p, v.data(), u1.data(), d.data(), 3, dx.data(), b.data());
    for (int i = 0; i < 3; ++i)
        CHECK(a[i] - b[i] == doctest::Approx(u2[i] / p.J[i]).epsilon(1e-12));
}

TEST_CASE("open-loop instability with B < 0") {
    PlantParams p = paper_params(1);
    double x = 0.0, v = 0.1, u = 0.0, d = 0.0;
    const double dt = 1e-3;
    for (int k = 0; k < 5000; ++k) {  // explicit Euler is fine for a growth check
        double dx, dv;
        plant_deriv(p, &v, &u, &d, 1, &dx, &dv);
        x += dt * dx;
        v += dt * dv;
    }
    CHECK(std::abs(v) > 10.0);
}

TEST_CASE("non-finite input rejected") {
    PlantParams p = paper_params(1);
    double v = std::numeric_limits<double>::quiet_NaN(), u = 0.0, d = 0.0, dx, dv;
    CHECK_THROWS(plant_deriv(p, &v, &u, &d, 1, &dx, &dv));
}
