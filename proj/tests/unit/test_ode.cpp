#include <cmath>

#include "doctest.h"
#include "mastergeo/csv.hpp"
#include "mastergeo/error.hpp"
#include "mastergeo/ode.hpp"

using namespace mastergeo;

TEST_CASE("uniform time grid") {
    const auto g = uniform_time_grid(1.0, 0.25);
    REQUIRE(g.size() == 5);
    CHECK(g[2] == 0.5);
    CHECK(g.back() == 1.0);

    const auto ragged = uniform_time_grid(1.0, 0.3);
    REQUIRE(ragged.size() == 5);
    CHECK(ragged[3] == doctest::Approx(0.9));
    CHECK(ragged.back() == 1.0);

    CHECK(uniform_time_grid(10.0, 1e-3).size() == 10001);
    CHECK_THROWS_AS(uniform_time_grid(0.5, 1.0), ValidationError);
    CHECK_THROWS_AS(uniform_time_grid(1.0, -0.1), ValidationError);
}

TEST_CASE("rk4 is fourth order on dy/dt = y") {
    const VectorField f = [](const Vector& y) { return y; };
    const auto err = [&](double h) {
        const auto times = uniform_time_grid(1.0, h);
        return std::abs(integrate_rk4(f, Vector::Ones(1), times).back()(0) - std::exp(1.0));
    };
    const double ratio = err(0.1) / err(0.05);
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.05));

    Rk4Tableau broken;
    broken.weight[0] += 1e-3;
    const auto times = uniform_time_grid(1.0, 0.01);
    CHECK(std::abs(integrate_rk4(f, Vector::Ones(1), times, broken).back()(0) - std::exp(1.0)) > 1e-4);
}

TEST_CASE("simpson and fitted rate") {
    CHECK(simpson([](double x) { return x * x * x; }, 0.0, 2.0, 1) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(simpson([](double x) { return std::exp(-x); }, 0.0, 40.0, 1000) ==
          doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-8));

    std::vector<double> t, v;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.1 * i);
        v.push_back(3.0 * std::exp(-2.0 * t.back()));
    }
    CHECK(fitted_log_rate(t, v) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::isnan(fitted_log_rate(t, std::vector<double>(t.size(), 0.0))));
}

TEST_CASE("csv formatting") {
    CHECK(csv::format_double(0.1) == "0.10000000000000001");
    CHECK(csv::format_double(1.0) == "1");
    CHECK(std::stod(csv::format_double(std::exp(1.0))) == std::exp(1.0));
}
