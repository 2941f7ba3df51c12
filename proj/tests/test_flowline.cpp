#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "biham/fields.hpp"
#include "biham/flowline.hpp"

using namespace biham;

TEST_CASE("integrate_streamline: constant field endpoint") {
    const auto cf = fields::constant({{"dx", 1.0}});
    const Streamline line = integrate_streamline(cf.field, {0, 0, 0}, 1.0, 1e-3);
    REQUIRE(line.full_horizon());
    CHECK((line.samples.back().x - Point3{1, 0, 0}).norm() <= 1e-12);
    CHECK(line.samples.back().s == Catch::Approx(1.0));
}

TEST_CASE("integrate_streamline: rotation field closes after 2 pi") {
    const auto rot = fields::rotation();
    const double ds = 1e-3;
    const Streamline line =
        integrate_streamline(rot.field, {1, 0, 0}, 2.0 * M_PI + 10.0 * ds, ds);
    REQUIRE(line.full_horizon());
    CHECK((line.position(2.0 * M_PI) - Point3{1, 0, 0}).norm() <= 1e-8);
}

TEST_CASE("integrate_streamline: order estimate on the ABC flow >= 3.9") {
    const auto abc = fields::abc();
    CHECK(streamline_order_estimate(abc.field, {0.1, 0.2, 0.3}, 1.0, 0.05) >= 3.9);
}

TEST_CASE("integrate_streamline: reversibility within 100 ds^4") {
    const auto abc = fields::abc();
    const double ds = 1e-3, L = 1.0;
    const Streamline fwd = integrate_streamline(abc.field, {0, 0, 0}, L, ds);
    REQUIRE(fwd.full_horizon());
    VectorField back = abc.field;
    const auto fwd_eval = abc.field.eval;
    back.eval = [fwd_eval](const Point3& p) { return -fwd_eval(p); };
    const Streamline rev = integrate_streamline(back, fwd.samples.back().x, L, ds);
    REQUIRE(rev.full_horizon());
    CHECK((rev.samples.back().x - Point3{0, 0, 0}).norm() <= 100.0 * ds * ds * ds * ds);
}

TEST_CASE("integrate_streamline: tangent consistency of the interpolant") {
    const auto abc = fields::abc();
    const double ds = 1e-3;
    const Streamline line = integrate_streamline(abc.field, {0.3, 0.1, -0.2}, 0.5, ds);
    REQUIRE(line.full_horizon());
    double worst = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double s = 0.5 * i / 100.0 + 0.37 * ds;  // off-sample points
        const Vec3 t = line.tangent_at(s);
        const Vec3 e1 = abc.field.eval(line.position(s)).normalized();
        worst = std::max(worst, (t - e1).norm());
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("integrate_streamline: truncation is explicit data") {
    auto cf = fields::constant({{"dx", 1.0}});
    cf.field.domain.box_lo = Point3{-1, -1, -1};
    cf.field.domain.box_hi = Point3{0.5, 1, 1};
    const Streamline line = integrate_streamline(cf.field, {0, 0, 0}, 1.0, 1e-2);
    REQUIRE_FALSE(line.full_horizon());
    CHECK(line.truncation->reason == TruncationReason::LeftDomain);
    CHECK(line.truncation->s_reached < 1.0);
    CHECK(line.truncation->s_reached >= 0.49);
}

TEST_CASE("build_tube: constant field gives a straight cylinder") {
    const auto cf = fields::constant({{"dx", 1.0}});
    const AdaptedFrame frame = build_frame(cf.field);
    const StreamTube tube = build_tube(cf.field, frame, {0, 0, 0}, 0.1, 3, 8, 1.0, 1e-2);
    CHECK(tube.n_seeds() == 1 + 3 * 8);
    const Vec3 dir{1, 0, 0};
    for (int k = 0; k < tube.n_samples; k += 10) {
        for (int sd = 0; sd < tube.n_seeds(); ++sd) {
            // transverse sections stay planar
            CHECK(std::abs((tube.x(sd, k) - tube.x(0, k)).dot(dir)) <= 1e-10);
        }
    }
}

TEST_CASE("build_tube: rotation field gives an annular segment") {
    const auto rot = fields::rotation();
    const AdaptedFrame frame = build_frame(rot.field);
    const StreamTube tube = build_tube(rot.field, frame, {1, 0, 0}, 0.05, 3, 8, 1.0, 1e-3);
    for (int sd = 0; sd < tube.n_seeds(); ++sd) {
        const double r0 = std::hypot(tube.x(sd, 0).x, tube.x(sd, 0).y);
        const double z0 = tube.x(sd, 0).z;
        for (int k = 0; k < tube.n_samples; k += 100) {
            CHECK(std::hypot(tube.x(sd, k).x, tube.x(sd, k).y) ==
                  Catch::Approx(r0).margin(1e-8));
            CHECK(tube.x(sd, k).z == Catch::Approx(z0).margin(1e-10));
        }
    }
}

TEST_CASE("build_tube: ABC tube completes all seeds (regression fixture)") {
    const auto abc = fields::abc();
    const AdaptedFrame frame = build_frame(abc.field);
    const StreamTube tube = build_tube(abc.field, frame, {0, 0, 0}, 0.05, 5, 8, 1.0, 1e-3);
    CHECK(tube.n_seeds() == 41);
    for (const auto& line : tube.lines) CHECK(line.full_horizon());
}

TEST_CASE("build_tube: failing seeds are reported") {
    const auto rad = fields::radial();  // excluded ball of radius 0.05 at the origin
    const AdaptedFrame frame = build_frame(rad.field, {0, 1, 0});
    bool threw = false;
    try {
        // tube starts close to the excluded ball and outruns the domain going inward?
        // flow is outward, so aim inward instead by reversing
        VectorField inward = rad.field;
        const auto ev = rad.field.eval;
        inward.eval = [ev](const Point3& p) { return -ev(p); };
        const AdaptedFrame f2 = build_frame(inward, {0, 1, 0});
        (void)build_tube(inward, f2, {0.2, 0, 0}, 0.02, 2, 4, 0.5, 1e-3);
    } catch (const TubeConstructionError& e) {
        threw = true;
        CHECK(!e.failed_seeds.empty());
    }
    CHECK(threw);
}

TEST_CASE("transverse_derivative: constants and coordinate functions") {
    const auto abc = fields::abc();
    const AdaptedFrame frame = build_frame(abc.field);
    const StreamTube tube = build_tube(abc.field, frame, {0, 0, 0}, 0.05, 4, 8, 0.2, 1e-2);

    TubeScalar cq = tube.make_scalar();
    for (auto& row : cq.values) std::fill(row.begin(), row.end(), 3.25);
    TubeScalar aq = tube.make_scalar();
    for (int sd = 0; sd < tube.n_seeds(); ++sd)
        for (int k = 0; k < tube.n_samples; ++k) aq.values[sd][k] = tube.seeds[sd].a;

    for (int sd = 0; sd < tube.n_seeds(); ++sd) {
        CHECK(std::abs(tube.transverse_derivative(cq, TransverseDirection::E2, sd, 0)) <=
              1e-12);
        CHECK(std::abs(tube.transverse_derivative(cq, TransverseDirection::E3, sd, 0)) <=
              1e-12);
        CHECK(tube.transverse_derivative(aq, TransverseDirection::E2, sd, 0) ==
              Catch::Approx(1.0).margin(1e-10));
        CHECK(tube.transverse_derivative(aq, TransverseDirection::E3, sd, 0) ==
              Catch::Approx(0.0).margin(1e-10));
    }
    bool one_sided = false;
    (void)tube.transverse_derivative(aq, TransverseDirection::E2, tube.seed_id(4, 0), 0,
                                     &one_sided);
    CHECK(one_sided);  // outer ring uses a one-sided radial stencil
}

TEST_CASE("ambient_grad: recovers gradients of ambient functions on the tube") {
    const auto abc = fields::abc();
    const AdaptedFrame frame = build_frame(abc.field);
    const StreamTube tube = build_tube(abc.field, frame, {0, 0, 0}, 0.05, 4, 8, 0.2, 1e-3);

    // f(x, y, z) = x + 2y - z has a constant gradient; the tube-chart route
    // must recover it everywhere, including on the one-sided boundary.
    const TubeScalar f = tube.sample([](const Point3& p) { return p.x + 2.0 * p.y - p.z; });
    double worst = 0.0;
    for (int sd = 0; sd < tube.n_seeds(); ++sd)
        for (int k = 0; k < tube.n_samples; k += 20)
            worst = std::max(worst, (tube.ambient_grad(f, sd, k) - Vec3{1, 2, -1}).norm());
    CHECK(worst <= 1e-7);

    // smooth nonlinear function: second-order accuracy in the ring step
    const TubeScalar g = tube.sample([](const Point3& p) { return std::sin(p.x) * p.y + p.z * p.z; });
    auto exact = [](const Point3& p) {
        return Vec3{std::cos(p.x) * p.y, std::sin(p.x), 2.0 * p.z};
    };
    worst = 0.0;
    for (int sd = 0; sd < tube.n_seeds(); ++sd)
        for (int k = 0; k < tube.n_samples; k += 20)
            worst = std::max(worst, (tube.ambient_grad(g, sd, k) - exact(tube.x(sd, k))).norm());
    const double step = tube.ring_step();
    CHECK(worst <= 10.0 * step * step + 1e-6);
}

TEST_CASE("write_tube_csv: spec columns") {
    const auto cf = fields::constant();
    const AdaptedFrame frame = build_frame(cf.field);
    const StreamTube tube = build_tube(cf.field, frame, {0, 0, 0}, 0.1, 2, 4, 0.1, 1e-2);
    std::ostringstream os;
    write_tube_csv(os, tube);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "seed_i,seed_j,s,x,y,z");
    int rows = 0;
    std::string line;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == tube.n_seeds() * tube.n_samples);
}
