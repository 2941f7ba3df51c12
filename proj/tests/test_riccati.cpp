#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "biham/fields.hpp"
#include "biham/riccati.hpp"

using namespace biham;

namespace {

const DiffConfig cfg2{DiffBackend::FiniteDifference, 1e-4, 2};

RiccatiCoefficients const_coeffs(double A, double B, double C, double s1, double ds) {
    return RiccatiCoefficients::from_functions([A](double) { return A; },
                                               [B](double) { return B; },
                                               [C](double) { return C; }, s1, ds);
}

// independent oracle: direct classical RK4 on the scalar Riccati equation
std::vector<double> direct_riccati(const RiccatiCoefficients& co, double mu0) {
    std::vector<double> mu(co.size());
    double m = mu0;
    const double ds = co.ds();
    auto rhs = [&co](double s, double m_) {
        const Vec3 abc = co.eval(s);
        return abc.x + abc.y * m_ + abc.z * m_ * m_;
    };
    for (int k = 0; k < co.size(); ++k) {
        mu[k] = m;
        if (k + 1 == co.size()) break;
        const double s = co.s[k];
        const double k1 = rhs(s, m);
        const double k2 = rhs(s + 0.5 * ds, m + 0.5 * ds * k1);
        const double k3 = rhs(s + 0.5 * ds, m + 0.5 * ds * k2);
        const double k4 = rhs(s + ds, m + ds * k3);
        m += ds / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return mu;
}

}  // namespace

TEST_CASE("riccati_coeffs: zero and constant cases") {
    const auto co = const_coeffs(0, 0, 0, 1.0, 1e-2);
    const auto sol = solve_mu(co, 0.7);
    for (int k = 0; k < sol.size(); ++k) CHECK(sol.mu(k) == Catch::Approx(0.7).margin(1e-13));

    // constant field: every structure function vanishes
    const auto cf = fields::constant({{"dx", 1.0}, {"dy", -0.5}});
    const AdaptedFrame frame = build_frame(cf.field);
    const Streamline line = integrate_streamline(cf.field, {0, 0, 0}, 1.0, 1e-2);
    const auto rc = riccati_coeffs(line, frame, cfg2);
    for (int k = 0; k < rc.size(); ++k) {
        CHECK(std::abs(rc.A[k]) < 1e-11);
        CHECK(std::abs(rc.B[k]) < 1e-11);
        CHECK(std::abs(rc.C[k]) < 1e-11);
    }
}

TEST_CASE("riccati_coeffs: cylindrical oracle on the planar radial field") {
    // frame (e_r, e_z, -e_theta): only C^3_31 = 1/r is nonzero, so
    // A = 0, B = -(C^3_31 + C^2_12) = -1/r, C = 0, with r(s) = r0 + s.
    const auto pr = fields::planar_radial();
    const AdaptedFrame frame = build_frame(pr.field, {0, 0, 1});
    const double r0 = 1.0;
    const Streamline line = integrate_streamline(pr.field, {r0, 0, 0}, 0.5, 1e-2);
    const auto sc = streamline_coefficients(line, frame, cfg2);
    for (int k = 0; k < sc.riccati.size(); ++k) {
        const double r = r0 + sc.riccati.s[k];
        CHECK(sc.riccati.A[k] == Catch::Approx(0.0).margin(1e-7));
        CHECK(sc.riccati.B[k] == Catch::Approx(-1.0 / r).margin(1e-7));
        CHECK(sc.riccati.C[k] == Catch::Approx(0.0).margin(1e-7));
        CHECK(sc.c331_s[k] == Catch::Approx(1.0 / r).margin(1e-7));
        CHECK(sc.speed_s[k] == Catch::Approx(r).margin(1e-9));
    }
}

TEST_CASE("solve_mu: tanh closed form") {
    const auto co = const_coeffs(1, 0, -1, 2.0, 1e-3);
    const auto sol = solve_mu(co, 0.0);
    for (int k = 0; k < sol.size(); ++k)
        CHECK(sol.mu(k) == Catch::Approx(std::tanh(co.s[k])).margin(1e-8));
    CHECK(sol.markers.empty());
    CHECK(sol.pole_spans.empty());
}

TEST_CASE("solve_mu: tan closed form crosses the blow-up") {
    const auto co = const_coeffs(1, 0, 1, 2.5, 1e-3);
    const auto sol = solve_mu(co, 0.0);

    // the lift records the pole near pi/2 and continues smoothly
    REQUIRE_FALSE(sol.pole_spans.empty());
    bool covers = false;
    for (const auto& [a, b] : sol.pole_spans)
        if (a <= M_PI_2 && M_PI_2 <= b) covers = true;
    CHECK(covers);

    CHECK(sol.mu_at(0.75 * M_PI) == Catch::Approx(-1.0).margin(1e-6));
    for (double s : {0.3, 1.0, 2.2})
        CHECK(sol.mu_at(s) == Catch::Approx(std::tan(s)).margin(1e-6));

    // unit-circle normalization of the lift
    for (int k = 0; k < sol.size(); ++k)
        CHECK(std::abs(sol.p[k] * sol.p[k] + sol.q[k] * sol.q[k] - 1.0) <= 1e-10);
}

TEST_CASE("solve_mu: lift agrees with direct scalar integration away from poles") {
    const auto co = RiccatiCoefficients::from_functions(
        [](double s) { return std::sin(s); }, [](double s) { return 0.3 * std::cos(2 * s); },
        [](double s) { return -0.8 + 0.1 * s; }, 1.5, 1e-3);
    const auto lift = solve_mu(co, 0.2);
    REQUIRE(lift.span_clear(0, lift.size() - 1));
    const auto direct = direct_riccati(co, 0.2);
    for (int k = 0; k < lift.size(); ++k)
        CHECK(lift.mu(k) == Catch::Approx(direct[k]).margin(1e-6));
}

TEST_CASE("solve_mu: cross-ratio of four solutions is constant") {
    const auto co = RiccatiCoefficients::from_functions(
        [](double s) { return 0.5 * std::cos(s); }, [](double s) { return 0.2 * s; },
        [](double s) { return 0.4 * std::sin(s); }, 1.0, 1e-3);
    const auto m1 = solve_mu(co, 0.0), m2 = solve_mu(co, 1.0), m3 = solve_mu(co, -1.0),
               m4 = solve_mu(co, 2.0);
    auto cross_ratio = [&](int k) {
        return (m1.mu(k) - m3.mu(k)) * (m2.mu(k) - m4.mu(k)) /
               ((m1.mu(k) - m4.mu(k)) * (m2.mu(k) - m3.mu(k)));
    };
    const double c0 = cross_ratio(0);
    for (int k = 0; k < m1.size(); k += 50)
        CHECK(cross_ratio(k) == Catch::Approx(c0).margin(1e-6));
}

TEST_CASE("solve_alpha: trivial cases") {
    const auto co = const_coeffs(0, 0, 0, 1.0, 1e-2);
    const auto mu = solve_mu(co, 0.0);

    SECTION("zero coefficients, unit speed") {
        const auto a = solve_alpha(mu, [](double) { return 0.0; }, [](double) { return 0.0; },
                                   [](double) { return 1.0; }, 2.0);
        for (double av : a.alpha) CHECK(av == Catch::Approx(2.0).margin(1e-13));
    }
    SECTION("zero structure functions, varying speed: alpha tracks |v|") {
        auto speed = [](double s) { return 1.0 + 0.5 * std::sin(3.0 * s); };
        const auto a = solve_alpha(mu, [](double) { return 0.0; }, [](double) { return 0.0; },
                                   speed, 3.0);
        for (int k = 0; k < (int)a.alpha.size(); ++k)
            CHECK(a.alpha[k] == Catch::Approx(3.0 * speed(a.s[k]) / speed(0.0)).margin(1e-12));
    }
    SECTION("alpha0 must be positive") {
        CHECK_THROWS_AS(solve_alpha(mu, [](double) { return 0.0; },
                                    [](double) { return 0.0; }, [](double) { return 1.0; },
                                    -1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("solve_alpha: positivity is preserved under strong downscaling") {
    const auto co = const_coeffs(0, 0, 0, 2.0, 1e-3);
    const auto mu = solve_mu(co, 0.0);
    const auto a = solve_alpha(mu, [](double) { return -8.0; }, [](double) { return 0.0; },
                               [](double) { return 1.0; }, 1.0);
    for (double av : a.alpha) CHECK(av > 0.0);
    CHECK(a.alpha.back() == Catch::Approx(std::exp(-16.0)).epsilon(1e-6));
}

TEST_CASE("solve_alpha: blow-up inside the span splits it") {
    const auto co = const_coeffs(1, 0, 1, 2.5, 1e-3);  // tan family, pole at pi/2
    const auto mu = solve_mu(co, 0.0);
    CHECK_THROWS_AS(solve_alpha(mu, [](double) { return 0.0; }, [](double) { return 1.0; },
                                [](double) { return 1.0; }, 1.0),
                    SpanSplitError);
}

TEST_CASE("re-substitution residuals on an ABC streamline") {
    const auto abc = fields::abc();
    const AdaptedFrame frame = build_frame(abc.field);
    const double ds = 1e-3, h = 1e-4;
    const Streamline line = integrate_streamline(abc.field, {0, 0, 0}, 1.0, ds);
    const auto sc = streamline_coefficients(line, frame, {DiffBackend::FiniteDifference, h, 2});

    const auto mu1 = solve_mu(sc.riccati, 0.0);
    const auto mu2 = solve_mu(sc.riccati, 1.0);
    REQUIRE(mu1.span_clear(0, mu1.size() - 1));
    REQUIRE(mu2.span_clear(0, mu2.size() - 1));

    const double tol = 10.0 * ds * ds * ds * ds + 10.0 * h * h;
    for (double r : mu_residual(mu1, sc.riccati)) CHECK(std::abs(r) <= tol);
    for (double r : mu_residual(mu2, sc.riccati)) CHECK(std::abs(r) <= tol);

    const double speed0 = abc.field.eval({0, 0, 0}).norm();
    const auto a1 = solve_alpha(mu1, sc.c331, sc.c312, sc.speed, speed0);
    const auto a2 = solve_alpha(mu2, sc.c331, sc.c312, sc.speed, speed0);
    for (double r : alpha_residual(a1, mu1, sc.c331_s, sc.c312_s)) CHECK(std::abs(r) <= tol);
    for (double r : alpha_residual(a2, mu2, sc.c331_s, sc.c312_s)) CHECK(std::abs(r) <= tol);

    // compatibility along the streamline follows from the alpha equations
    const auto rc = compatibility_residual(mu1, mu2, a1, a2, sc.c312_s);
    for (double r : rc) CHECK(std::abs(r) <= tol);
}

TEST_CASE("compatibility_residual: constant field and injected fault") {
    const auto co = const_coeffs(0, 0, 0, 1.0, 1e-3);
    const auto mu1 = solve_mu(co, 0.0), mu2 = solve_mu(co, 1.0);
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    const auto a1 = solve_alpha(mu1, zero, zero, one, 1.0);
    auto a2 = solve_alpha(mu2, zero, zero, one, 1.0);
    const std::vector<double> c312(co.size(), 0.0);

    for (double r : compatibility_residual(mu1, mu2, a1, a2, c312))
        CHECK(std::abs(r) <= 1e-12);

    // deliberate mismatch alpha2 -> alpha2 * e^s has d/ds ln(a1/a2) error = 1
    for (int k = 0; k < co.size(); ++k) a2.alpha[k] *= std::exp(co.s[k]);
    double worst = 0.0;
    for (double r : compatibility_residual(mu1, mu2, a1, a2, c312))
        worst = std::max(worst, std::abs(r));
    CHECK(worst == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("lemma3_check: K = 0 reduces to mu1") {
    const auto co = RiccatiCoefficients::from_functions(
        [](double s) { return std::cos(s); }, [](double) { return 0.1; },
        [](double s) { return -0.5 * std::sin(s); }, 1.0, 1e-3);
    const auto mu1 = solve_mu(co, 0.0), mu2 = solve_mu(co, 1.0);
    const auto res = lemma3_check(mu1, mu2, 0.0, co);
    CHECK(res.max_residual <= 1e-8);
    CHECK(res.blow_up_samples.empty());
}

TEST_CASE("lemma3_check: constant-coefficient tanh family, K = 0.5") {
    const auto co = const_coeffs(1, 0, -1, 2.0, 1e-3);
    const auto mu1 = solve_mu(co, 0.0);  // tanh(s)
    const auto mu2 = solve_mu(co, 1.0);  // the fixed point mu = 1
    const auto res = lemma3_check(mu1, mu2, 0.5, co);
    CHECK(res.max_residual <= 1e-6);
}

TEST_CASE("lemma3_check: random K on smooth coefficients") {
    const auto co = RiccatiCoefficients::from_functions(
        [](double s) { return 0.6 * std::sin(2.0 * s); },
        [](double s) { return 0.2 * std::cos(s); },
        [](double s) { return 0.5 + 0.3 * std::sin(s); }, 1.0, 1e-3);
    const auto mu1 = solve_mu(co, 0.0), mu2 = solve_mu(co, 1.0);
    REQUIRE(mu1.span_clear(0, mu1.size() - 1));
    REQUIRE(mu2.span_clear(0, mu2.size() - 1));
    std::mt19937 rng(314);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int t = 0; t < 10; ++t) {
        const auto res = lemma3_check(mu1, mu2, d(rng), co);
        CHECK(res.max_residual <= 1e-5);
    }
}
