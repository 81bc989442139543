#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sph4r/io.hpp"
#include "sph4r/objective.hpp"
#include "test_util.hpp"

using namespace sph4r;
using namespace sph4r::testutil;

namespace {

TargetPath table1() {
    return TargetPath::from_points(load_points_csv(fixture("table1_points.csv")));
}

DesignVector table2() { return load_design(fixture("table2_design.txt")).design; }
DesignVector table45() { return load_design(fixture("table45_design.txt")).design; }

}  // namespace

TEST_CASE("prescribed_thetas: quarter spacing, published first angle, uniform gaps") {
    const auto quarters = prescribed_thetas(0.0, 4);
    REQUIRE(quarters.size() == 4);
    CHECK(quarters[0] == 0.0);
    CHECK(quarters[1] == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(quarters[2] == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(quarters[3] == doctest::Approx(3 * kPi / 2).epsilon(1e-15));

    const auto published = prescribed_thetas(0.48867, 64);
    CHECK(published[1] == doctest::Approx(0.48867 + kTwoPi / 64).epsilon(1e-15));

    for (std::size_t k = 1; k < published.size(); ++k) {
        CHECK(published[k] - published[k - 1] == doctest::Approx(kTwoPi / 64).epsilon(1e-12));
    }
}

TEST_CASE("design_dimension and bounds layout") {
    CHECK(design_dimension(DesignMode::prescribed, 64) == 11);
    CHECK(design_dimension(DesignMode::free_timing, 64) == 74);

    const DesignBounds b = design_bounds(DesignMode::free_timing, 16);
    REQUIRE(b.lower.size() == 26);
    CHECK(b.lower[16 + 1] == doctest::Approx(-kPi));  // gamma
    CHECK(b.upper[16 + 1] == doctest::Approx(kPi));
    for (int k = 0; k < 4; ++k) {
        CHECK(b.lower[static_cast<std::size_t>(16 + 6 + k)] == 0.0);
        CHECK(b.upper[static_cast<std::size_t>(16 + 6 + k)] == doctest::Approx(kPi));
        CHECK(b.kinds[static_cast<std::size_t>(16 + 6 + k)] == CoordKind::reflect);
    }
    CHECK(b.kinds[0] == CoordKind::periodic);
}

TEST_CASE("decode: published prescribed design reproduces the published link lengths") {
    const DecodedDesign d = decode(table2(), 64);
    CHECK(std::abs(d.mechanism.link_lengths()[0] - 0.40142) <= 1e-3);
    CHECK(std::abs(d.mechanism.link_lengths()[1] - 0.82033) <= 1e-3);
    CHECK(std::abs(d.mechanism.link_lengths()[2] - 0.92503) <= 1e-3);
    CHECK(std::abs(d.mechanism.link_lengths()[3] - 0.99484) <= 1e-3);
    REQUIRE(d.thetas.size() == 64);
    CHECK(d.thetas[0] == doctest::Approx(0.48867));
    CHECK(d.thetas[63] == doctest::Approx(0.48867 + 63 * kTwoPi / 64).epsilon(1e-12));
}

TEST_CASE("decode: published free design's link lengths are close to the prescribed ones") {
    const DecodedDesign d = decode(table45(), 64);
    CHECK(std::abs(d.mechanism.link_lengths()[0] - 0.40142) <= 2e-2);
    CHECK(std::abs(d.mechanism.link_lengths()[1] - 0.82033) <= 5e-2);
    CHECK(std::abs(d.mechanism.link_lengths()[2] - 0.92503) <= 9e-2);
    CHECK(std::abs(d.mechanism.link_lengths()[3] - 0.99484) <= 5e-2);
    REQUIRE(d.thetas.size() == 64);
    CHECK(d.thetas[63] == doctest::Approx(6.18493));
}

TEST_CASE("encode(decode(v)) is the identity") {
    for (const DesignVector& v : {table2(), table45()}) {
        const DecodedDesign d = decode(v, 64);
        const DesignVector back = encode(v.mode, d.mechanism, d.thetas);
        REQUIRE(back.values.size() == v.values.size());
        for (std::size_t j = 0; j < v.values.size(); ++j) {
            CHECK(back.values[j] == v.values[j]);
        }
    }
}

TEST_CASE("decode: length mismatch is rejected") {
    DesignVector bad = table2();
    bad.values.pop_back();
    CHECK_THROWS_AS(decode(bad, 64), std::invalid_argument);
}

TEST_CASE("structural_error: published prescribed optimum against the published path") {
    const EvaluationReport report = structural_error(table2(), table1());
    CHECK(report.feasible);
    CHECK(report.f_ob <= 1e-4);
    REQUIRE(report.per_point_errors.size() == 64);
    double sum = 0.0;
    for (double e : report.per_point_errors) sum += e;
    CHECK(std::abs(sum - report.f_ob) <= 1e-12);
}

TEST_CASE("structural_error: published free-timing optimum against the published path") {
    const EvaluationReport report = structural_error(table45(), table1());
    CHECK(report.feasible);
    CHECK(report.f_ob <= 1e-3);
}

TEST_CASE("structural_error: a path generated by the mechanism itself scores ~0") {
    const DesignVector design = table2();
    const DecodedDesign d = decode(design, 64);
    const Branch branch = select_branch(d.mechanism);
    std::vector<Vec3> pts;
    for (double theta : d.thetas) {
        pts.push_back(generated_point(d.mechanism, theta, branch).vec());
    }
    const EvaluationReport report = structural_error(design, TargetPath::from_points(pts));
    CHECK(report.feasible);
    CHECK(report.f_ob <= 1e-20);
}

TEST_CASE("structural_error: infeasible designs get the graded penalty, never throw") {
    // Same broken geometry as the mechanism tests: part of the sweep cannot close.
    DesignVector design;
    design.mode = DesignMode::prescribed;
    design.values = {0.0, 0.1, 0.1, 0.0, 0.2, 0.1, 0.0, 0.0, 1.4, 1.45, 1.4};
    const auto path = table1();
    const EvaluationReport report = structural_error(design, path);
    CHECK_FALSE(report.feasible);
    CHECK(report.infeasible_count > 0);
    CHECK(report.f_ob == kInfeasiblePenalty + report.infeasible_count);
    CHECK(std::any_of(report.per_point_errors.begin(), report.per_point_errors.end(),
                      [](double e) { return std::isnan(e); }));

    // Degenerate mechanism: coincident adjacent joints.
    DesignVector degenerate = design;
    degenerate.values = {0.0, 0.1, 0.1, 0.5, 0.5, 2.2, 2.0, 1.2, 1.2, 1.3, 1.3};
    const EvaluationReport dreport = structural_error(degenerate, path);
    CHECK_FALSE(dreport.feasible);
    CHECK(dreport.f_ob == kInfeasiblePenalty + 64);
}

TEST_CASE("geodesic_error: identities") {
    CHECK(geodesic_error(UnitVector3(1, 0, 0), UnitVector3(1, 0, 0)) == 0.0);
    CHECK(geodesic_error(UnitVector3(1, 0, 0), UnitVector3(0, 1, 0)) ==
          doctest::Approx(kPi / 2).epsilon(1e-15));
    const Vec3 diff = Vec3{1, 0, 0} - Vec3{0, 1, 0};
    CHECK(diff.squared_norm() == doctest::Approx(2.0));

    std::mt19937_64 rng(31);
    for (int i = 0; i < 10000; ++i) {
        const UnitVector3 a = random_unit(rng);
        const UnitVector3 b = random_unit(rng);
        const double delta = geodesic_error(a, b);
        const double chord2 = (a.vec() - b.vec()).squared_norm();
        CHECK(std::abs(chord2 - 2.0 * (1.0 - std::cos(delta))) <= 1e-12);
    }
}

TEST_CASE("squared chordal error grows monotonically with the geodesic error") {
    for (int i = 0; i + 1 < 100; ++i) {
        const double d0 = kPi * i / 100.0;
        const double d1 = kPi * (i + 1) / 100.0;
        CHECK(2.0 * (1.0 - std::cos(d0)) < 2.0 * (1.0 - std::cos(d1)));
    }
}

TEST_CASE("theta_differences: published free-timing angles and identities") {
    const DesignVector v = table45();
    const std::vector<double> thetas(v.values.begin(), v.values.begin() + 64);
    const ThetaDiffs d = theta_differences(thetas);
    REQUIRE(d.diffs.size() == 63);
    CHECK(std::abs(d.mean - 0.0981734) <= 1e-6);
    CHECK(std::abs(std::abs(d.mean - kTwoPi / 64) - 1.3e-6) <= 5e-7);

    const auto uniform_thetas = prescribed_thetas(0.25, 10);
    const ThetaDiffs du = theta_differences(uniform_thetas);
    for (double diff : du.diffs) CHECK(diff == doctest::Approx(kTwoPi / 10).epsilon(1e-12));
    CHECK(du.mean == doctest::Approx(kTwoPi / 10).epsilon(1e-12));

    std::mt19937_64 rng(37);
    std::vector<double> ascending{0.0};
    for (int k = 0; k < 20; ++k) ascending.push_back(ascending.back() + uniform(rng, 0.01, 0.3));
    const ThetaDiffs dr = theta_differences(ascending);
    CHECK(dr.mean == doctest::Approx((ascending.back() - ascending.front()) / 20.0).epsilon(1e-12));
}

TEST_CASE("structural_error: every coordinate influences the objective") {
    const TargetPath path = table1();
    for (const DesignVector& base : {table2(), table45()}) {
        const double f0 = structural_error(base, path).f_ob;
        for (std::size_t j = 0; j < base.values.size(); ++j) {
            DesignVector perturbed = base;
            perturbed.values[j] += 1e-4;
            const double fj = structural_error(perturbed, path).f_ob;
            CHECK(std::abs(fj - f0) > 0.0);
        }
    }
}

TEST_CASE("report: squared chordal and geodesic errors satisfy their identity") {
    const EvaluationReport report = structural_error(table2(), table1());
    REQUIRE(report.per_point_errors.size() == report.geodesic_errors.size());
    for (std::size_t i = 0; i < report.per_point_errors.size(); ++i) {
        const double expected = 2.0 * (1.0 - std::cos(report.geodesic_errors[i]));
        CHECK(std::abs(report.per_point_errors[i] - expected) <= 1e-12);
    }
}

TEST_CASE("theta_differences: two angles give a single difference equal to the mean") {
    const ThetaDiffs d = theta_differences({0.4, 1.1});
    REQUIRE(d.diffs.size() == 1);
    CHECK(d.diffs[0] == doctest::Approx(0.7));
    CHECK(d.mean == d.diffs[0]);
}
