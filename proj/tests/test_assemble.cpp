#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "biham/assemble.hpp"
#include "biham/fields.hpp"

using namespace biham;

namespace {

const DiffConfig cfg2{DiffBackend::FiniteDifference, 1e-4, 2};

// constant field with reference +y: frame (x^, y^, z^), J1 = (0,1,0),
// J2 = (0,1,1), phi = -1, H1 = -y, H2 = y + z.
Construction constant_construction() {
    const auto cf = fields::constant({{"dx", 1.0}});
    const AdaptedFrame frame = build_frame(cf.field, {0, 1, 0});
    StreamTube tube = build_tube(cf.field, frame, {0, 0, 0}, 0.1, 3, 8, 1.0, 1e-2);
    ConstructOptions opts;
    opts.diff = cfg2;
    return construct_pair(frame, std::move(tube), opts);
}

Construction rotation_construction() {
    const auto rot = fields::rotation();
    const AdaptedFrame frame = build_frame(rot.field);
    StreamTube tube = build_tube(rot.field, frame, {1, 0, 0}, 0.05, 4, 8, 1.0, 1e-3);
    ConstructOptions opts;
    opts.diff = cfg2;
    return construct_pair(frame, std::move(tube), opts);
}

Construction abc_construction(double ds = 1e-3, double h = 1e-4, double r_d = 0.05,
                              int n_r = 5, int n_theta = 8, double L = 1.0) {
    const auto abc = fields::abc();
    const AdaptedFrame frame = build_frame(abc.field);
    StreamTube tube = build_tube(abc.field, frame, {0, 0, 0}, r_d, n_r, n_theta, L, ds);
    ConstructOptions opts;
    opts.diff = DiffConfig{DiffBackend::FiniteDifference, h, 2};
    return construct_pair(frame, std::move(tube), opts);
}

}  // namespace

TEST_CASE("constant field: the paper's global example, end to end") {
    const Construction cx = constant_construction();
    const StreamTube& tube = cx.tube;

    for (int sd = 0; sd < tube.n_seeds(); sd += 5) {
        for (int k = 0; k < tube.n_samples; k += 25) {
            const Point3& x = tube.x(sd, k);
            CHECK((cx.pair.J1.at(sd, k) - Vec3{0, 1, 0}).norm() <= 1e-10);
            CHECK((cx.pair.J2.at(sd, k) - Vec3{0, 1, 1}).norm() <= 1e-10);
            CHECK(cx.pair.phi.at(sd, k) == Catch::Approx(-1.0).margin(1e-10));
            CHECK(cx.pair.H1.at(sd, k) == Catch::Approx(-x.y).margin(1e-8));
            CHECK(cx.pair.H2.at(sd, k) == Catch::Approx(x.y + x.z).margin(1e-8));
        }
    }

    const auto tt = ToleranceTable::defaults(tube.ds, cfg2.h, tube.r_d);
    ToleranceTable strict = tt;
    strict.identity_default = 1e-8;
    strict.tol.clear();
    strict.tol["transversality"] = 1e-10;
    const ResidualReport rep = evaluate_residuals(cx, strict);
    for (const auto& st : rep.stats) {
        INFO(st.name << " max " << st.max_abs);
        CHECK(st.pass());
    }
    CHECK(cx.path_independence <= 1e-10);
    CHECK(cx.max_closedness_residual <= 1e-10);
}

TEST_CASE("assemble invariants: transversality, cross-product identity") {
    const Construction cx = rotation_construction();
    const StreamTube& tube = cx.tube;
    for (int sd = 0; sd < tube.n_seeds(); sd += 3) {
        for (int k = 0; k < tube.n_samples; k += 100) {
            const Vec3 v = cx.frame_data.frames[sd][k].e1 * cx.frame_data.speed.at(sd, k);
            const Vec3 j1 = cx.pair.J1.at(sd, k), j2 = cx.pair.J2.at(sd, k);
            CHECK(std::abs(j1.dot(v)) <= 1e-10 * j1.norm() * v.norm());
            CHECK(std::abs(j2.dot(v)) <= 1e-10 * j2.norm() * v.norm());

            // J1 x J2 = alpha1 alpha2 (mu2 - mu1) e1 = -phi v, componentwise
            const double a12 = cx.pair.J1.alpha.at(sd, k) * cx.pair.J2.alpha.at(sd, k) *
                               (cx.pair.J2.mu.at(sd, k) - cx.pair.J1.mu.at(sd, k));
            const Vec3 expected = cx.frame_data.frames[sd][k].e1 * a12;
            CHECK((j1.cross(j2) - expected).norm() <= 1e-10 * std::abs(a12));
            CHECK((j1.cross(j2) + v * cx.pair.phi.at(sd, k)).norm() <=
                  1e-10 * j1.norm() * j2.norm());
        }
    }
    CHECK(cx.pair.min_cross_norm > 0.0);
}

TEST_CASE("phi: label swap flips the sign") {
    const Construction cx = rotation_construction();
    const StreamTube& tube = cx.tube;
    const TubeScalar swapped =
        phi_field(tube, cx.pair.J2.alpha, cx.pair.J1.alpha, cx.pair.J2.mu, cx.pair.J1.mu,
                  cx.frame_data.speed);
    for (int sd = 0; sd < tube.n_seeds(); sd += 7)
        for (int k = 0; k < tube.n_samples; k += 200)
            CHECK(swapped.at(sd, k) == Catch::Approx(-cx.pair.phi.at(sd, k)));
}

TEST_CASE("phi: degenerate pair is an error") {
    const auto cf = fields::constant({{"dx", 1.0}});
    const AdaptedFrame frame = build_frame(cf.field, {0, 1, 0});
    StreamTube tube = build_tube(cf.field, frame, {0, 0, 0}, 0.1, 2, 4, 0.5, 1e-2);
    ConstructOptions opts;
    opts.diff = cfg2;
    opts.mu2_0 = opts.mu1_0;  // identical initial data -> dependent Hamiltonians
    CHECK_THROWS_AS(construct_pair(frame, std::move(tube), opts), DegeneratePairError);
}

TEST_CASE("jacobi_residual: analytic curl oracle") {
    VectorField J{[](const Point3& p) { return Vec3{p.z, p.x, p.y}; }, {}, {}};
    // curl (z, x, y) = (1, 1, 1), so J . curl J at (1,1,1) is 3
    CHECK(jacobi_residual(J, {1, 1, 1}, cfg2) == Catch::Approx(3.0).margin(1e-8));

    VectorField c{[](const Point3&) { return Vec3{0.3, -1.0, 2.0}; }, {}, {}};
    CHECK(jacobi_residual(c, {0, 0, 0}, cfg2) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("rotation tube: all identity residuals within tolerance") {
    const Construction cx = rotation_construction();
    const auto tt = ToleranceTable::defaults(cx.tube.ds, cfg2.h, cx.tube.r_d);
    const ResidualReport rep = evaluate_residuals(cx, tt);
    for (const auto& st : rep.stats) {
        INFO(st.name << " max " << st.max_abs << " tol " << st.tolerance);
        CHECK(st.pass());
    }
    CHECK(rep.pass());
}

TEST_CASE("ABC tube: regression fixture at documented resolution") {
    const Construction cx = abc_construction();
    const auto tt = ToleranceTable::defaults(cx.tube.ds, 1e-4, cx.tube.r_d);
    const ResidualReport rep = evaluate_residuals(cx, tt);
    for (const auto& st : rep.stats) {
        INFO(st.name << " max " << st.max_abs << " tol " << st.tolerance);
        CHECK(st.pass());
    }
    // homotopic integration paths agree
    CHECK(cx.path_independence <= 1e-7);
}

TEST_CASE("fault: alpha scaling violation shows up at O(1)") {
    Construction cx = constant_construction();
    const StreamTube& tube = cx.tube;
    // alpha2 -> alpha2 * exp(x): e1.grad x = 1 on the constant field
    TubeScalar a2 = cx.pair.J2.alpha;
    for (int sd = 0; sd < tube.n_seeds(); ++sd)
        for (int k = 0; k < tube.n_samples; ++k)
            a2.values[sd][k] *= std::exp(tube.x(sd, k).x);
    const PoissonField bad = make_poisson_field(tube, cx.frame_data, a2, cx.pair.J2.mu);
    double worst = 0.0;
    for (int sd = 0; sd < tube.n_seeds(); ++sd)
        for (int k = 0; k < tube.n_samples; ++k)
            worst = std::max(worst, std::abs(compatibility_residual_vec(
                                        tube, cx.frame_data, cx.pair.J1, bad, sd, k)));
    CHECK(worst >= 0.5);  // detected at O(1)
}

TEST_CASE("fault: swapped Hamiltonians are detected") {
    Construction cx = constant_construction();
    std::swap(cx.pair.H1, cx.pair.H2);
    double worst = 0.0;
    for (int sd = 0; sd < cx.tube.n_seeds(); sd += 3)
        for (int k = 0; k < cx.tube.n_samples; k += 20) {
            const auto [r1, r2] = bihamiltonian_residual(cx.tube, cx.frame_data, cx.pair, sd, k);
            worst = std::max(worst, std::max(r1, r2));
        }
    CHECK(worst >= 0.9);
}

TEST_CASE("fault: negated phi breaks the two-form identity by 2|v|") {
    const Construction cx = constant_construction();
    const double r = two_form_residual(cx.tube, cx.frame_data, cx.pair, 0, 5, -1.0);
    const double speed = cx.frame_data.speed.at(0, 5);
    CHECK(r == Catch::Approx(2.0 * speed).margin(1e-8));
}

TEST_CASE("dilatation: flow-invariant factors keep Jacobi, arclength breaks it") {
    const Construction cx = abc_construction(1e-3, 1e-4, 0.05, 4, 8, 0.5);
    const StreamTube& tube = cx.tube;

    // f constant along each streamline (a function of the seed label only)
    TubeScalar alpha_s = tube.make_scalar(), beta_s = tube.make_scalar();
    TubeScalar alpha_f = tube.make_scalar(), beta_f = tube.make_scalar();
    double scale = 0.0;
    for (int sd = 0; sd < tube.n_seeds(); ++sd) {
        const double f_inv = 0.7 + tube.seeds[sd].a - 0.3 * tube.seeds[sd].b;
        for (int k = 0; k < tube.n_samples; ++k) {
            const double fs = tube.s_at(k);  // arclength: e1.grad f = 1
            alpha_f.values[sd][k] =
                cx.pair.J1.alpha.at(sd, k) + f_inv * cx.pair.J2.alpha.at(sd, k);
            beta_f.values[sd][k] =
                cx.pair.J1.beta.at(sd, k) + f_inv * cx.pair.J2.beta.at(sd, k);
            alpha_s.values[sd][k] =
                cx.pair.J1.alpha.at(sd, k) + fs * cx.pair.J2.alpha.at(sd, k);
            beta_s.values[sd][k] =
                cx.pair.J1.beta.at(sd, k) + fs * cx.pair.J2.beta.at(sd, k);
            scale = std::max(scale, std::abs(cx.pair.J1.alpha.at(sd, k) *
                                             cx.pair.J2.alpha.at(sd, k) *
                                             (cx.pair.J2.mu.at(sd, k) -
                                              cx.pair.J1.mu.at(sd, k))));
        }
    }
    double worst_inv = 0.0, worst_arc = 0.0;
    for (int sd = 0; sd < tube.n_seeds(); ++sd)
        for (int k = 0; k < tube.n_samples; ++k) {
            worst_inv = std::max(worst_inv, std::abs(jacobi_residual_sample(
                                                tube, cx.frame_data, alpha_f, beta_f, sd, k)));
            worst_arc = std::max(worst_arc, std::abs(jacobi_residual_sample(
                                                tube, cx.frame_data, alpha_s, beta_s, sd, k)));
        }
    const auto tt = ToleranceTable::defaults(tube.ds, 1e-4, tube.r_d);
    CHECK(worst_inv <= 3.0 * tt.identity_default);  // |J'| is up to ~2x larger
    CHECK(worst_arc / scale >= 0.1);                // scenario-normalized lower bound
}

TEST_CASE("flow invariance of the reconstructed Hamiltonians") {
    const Construction cx = rotation_construction();
    double worst = 0.0;
    for (int sd = 0; sd < cx.tube.n_seeds(); ++sd)
        for (int k = 0; k < cx.tube.n_samples; ++k) {
            worst = std::max(worst, std::abs(cx.pair.H1.at(sd, k) - cx.pair.H1.at(sd, 0)));
            worst = std::max(worst, std::abs(cx.pair.H2.at(sd, k) - cx.pair.H2.at(sd, 0)));
        }
    CHECK(worst <= 1e-10);
}
