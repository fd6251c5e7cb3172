#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rfrac/diagnostics.hpp"

using namespace rfrac;

namespace {

DiscreteField power_field(const GradedMesh& mesh, double expo) {
    DiscreteField f{mesh, std::vector<double>(mesh.node_count()), true};
    for (int j = 0; j < mesh.node_count(); ++j)
        f.values[j] = std::pow(mesh.boundary_distance_at(j), expo);
    return f;
}

} // namespace

TEST_CASE("boundary exponent recovers exact power laws") {
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 256, 4.0);
    const double s = 0.75;
    const auto u = power_field(mesh, 2.0 * s - 1.0);
    const auto fit = boundary_exponent(u, 0.1);
    CHECK(fit.exponent == doctest::Approx(2.0 * s - 1.0).epsilon(1e-10));
    CHECK(fit.residual < 1e-10);

    // negative control: a linear cutoff is not the Hopf rate
    const auto lin = power_field(mesh, 1.0);
    const auto lfit = boundary_exponent(lin, 0.1);
    CHECK(lfit.exponent == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(lfit.exponent - (2.0 * s - 1.0)) > 0.3);
}

TEST_CASE("boundary exponent needs enough nodes in the layer") {
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 16, 1.0);
    const auto u = power_field(mesh, 0.5);
    CHECK_THROWS_AS(boundary_exponent(u, 0.06), std::invalid_argument);
    CHECK_THROWS_AS(boundary_exponent(u, 1.0), std::invalid_argument); // layer > diam/4
    const auto zero = DiscreteField::constant(mesh, 0.0);
    CHECK_THROWS_AS(boundary_exponent(zero, 0.2), std::invalid_argument);
}

TEST_CASE("torsion field: exponent, hopf ratio, bounds at small scale") {
    const double s = 0.75;
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 512, 4.0);
    const auto assembly = assemble(mesh, s);
    const auto u = torsion(assembly, 1e-10);

    const auto hopf = hopf_ratio(u, s, 0.1);
    CHECK(hopf.pass);
    CHECK(hopf.epsilon0 > 0.0);
    CHECK(hopf.fitted_exponent == doctest::Approx(2.0 * s - 1.0).epsilon(0.25));

    const auto bounds = torsion_bounds(u, s);
    CHECK(bounds.pass);
    CHECK(bounds.c_lower > 0.0);
    CHECK(bounds.c_upper > 0.0);
    CHECK(bounds.c_lower * bounds.c_upper < 50.0);
}

TEST_CASE("hopf ratio: trivial branch and precondition violations") {
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 64, 2.0);
    const auto zero = DiscreteField::constant(mesh, 0.0);
    const auto report = hopf_ratio(zero, 0.75, 0.1);
    CHECK_FALSE(report.pass);
    CHECK(report.epsilon0 == 0.0);
    CHECK(report.verdict.find("trivial") != std::string::npos);

    auto bad = DiscreteField::constant(mesh, 0.0);
    bad.values[3] = -1.0;
    CHECK_THROWS_WITH_AS(hopf_ratio(bad, 0.75, 0.1) /* names the node */,
                         doctest::Contains("node 3"), std::invalid_argument);
}

TEST_CASE("hopf ratio is monotone when the layer set shrinks") {
    const double s = 0.75;
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 512, 4.0);
    const auto u = torsion(assemble(mesh, s), 1e-10);
    const auto narrow = hopf_ratio(u, s, 0.05);
    const auto wide = hopf_ratio(u, s, 0.2);
    CHECK(narrow.epsilon0 >= wide.epsilon0 - 1e-14);
}

TEST_CASE("torsion bounds: exact power law and zero-node failure") {
    const double s = 0.7;
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 64, 2.0);
    const auto u = power_field(mesh, 2.0 * s - 1.0);
    const auto report = torsion_bounds(u, s);
    CHECK(report.pass);
    CHECK(report.c_lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.c_upper == doctest::Approx(1.0).epsilon(1e-12));

    auto broken = u;
    broken.values[5] = 0.0;
    CHECK_FALSE(torsion_bounds(broken, s).pass);
}

TEST_CASE("smp probe: dichotomy branches and negative control") {
    const double s = 0.75;
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 128, 2.0);
    const auto u = torsion(assemble(mesh, s), 1e-10);
    const auto compacts = std::vector<Interval>{Interval(-0.5, 0.5)};
    const auto probe = smp_probe(u, compacts);
    CHECK(probe.pass);
    CHECK(probe.minima[0].min_value > 0.0);

    const auto zero = DiscreteField::constant(mesh, 0.0);
    const auto trivial = smp_probe(zero, default_compacts(mesh.domain));
    CHECK(trivial.pass);
    CHECK(trivial.verdict.find("identically zero") != std::string::npos);

    // hat supported in (0, 0.5) has min 0 on [-0.9, -0.1]: not a super-solution
    auto hat = DiscreteField::from_function(
        mesh, [](double x) { return std::max(0.0, 0.25 - std::abs(x - 0.25)); });
    const auto flagged = smp_probe(hat, {Interval(-0.9, -0.1)});
    CHECK_FALSE(flagged.pass);
    CHECK(flagged.minima[0].min_value == 0.0);

    CHECK_THROWS_AS(smp_probe(u, {Interval(-2.0, 0.0)}), std::invalid_argument);
}

TEST_CASE("supersolution check certifies solver output and catches sign flips") {
    const double s = 0.75;
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 96, 4.0);
    const auto assembly = assemble(mesh, s);
    const auto one = DiscreteField::constant(mesh, 1.0);
    const auto zero = DiscreteField::constant(mesh, 0.0);
    const auto u = solve_dirichlet(assembly, zero, one, 1e-10).first;

    // discrete-continuous consistency away from the first cells
    const auto verdicts = supersolution_check(u, zero, s, 0.25, 6, 1e-6);
    int passed = 0, total = 0;
    for (const auto& v : verdicts) {
        if (mesh.boundary_distance_at(v.node) < 0.05) continue;
        ++total;
        passed += v.pass ? 1 : 0;
    }
    CHECK(total > 0);
    CHECK(passed == total);

    // the constant field is an equality case: operator value 0
    const auto flat = supersolution_check(one, zero, s, 1e-5, 17, 1e-7);
    for (const auto& v : flat) {
        CHECK(v.pass);
        CHECK(std::abs(v.operator_value) < 1e-5);
    }

    // -delta^{2s-1} is a strict sub-solution near the boundary
    DiscreteField neg{mesh, std::vector<double>(mesh.node_count()), true};
    for (int j = 0; j < mesh.node_count(); ++j)
        neg.values[j] = -std::pow(mesh.boundary_distance_at(j), 2.0 * s - 1.0);
    const auto bad = supersolution_check(neg, zero, s, 1e-4, 3, 1e-6);
    bool failed_somewhere = false;
    for (const auto& v : bad) failed_somewhere |= !v.pass;
    CHECK(failed_somewhere);
}

TEST_CASE("dichotomy: computed nonnegative solutions are zero or positive on compacts") {
    const double s = 0.8;
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 96, 2.0);
    const auto assembly = assemble(mesh, s);
    const auto zero = DiscreteField::constant(mesh, 0.0);
    for (const double amp : {0.0, 1.0}) {
        const auto f = DiscreteField::from_function(
            mesh, [amp](double x) { return amp * std::max(0.0, x); });
        const auto u = solve_dirichlet(assembly, zero, f, 1e-10).first;
        const auto probe = smp_probe(u, default_compacts(mesh.domain));
        CHECK(probe.pass); // either branch of the dichotomy
        bool all_zero = true;
        for (const double v : u.values) all_zero &= v == 0.0;
        if (!all_zero)
            for (const auto& m : probe.minima) CHECK(m.min_value > 0.0);
    }
}

TEST_CASE("json reports carry the type fields") {
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 256, 4.0);
    const auto u = torsion(assemble(mesh, 0.75), 1e-10);
    const auto hopf = to_json(hopf_ratio(u, 0.75, 0.1));
    for (const char* key : {"s", "fitted_exponent", "epsilon0", "layer_width", "fit_residual",
                            "n", "pass", "verdict"})
        CHECK(hopf.contains(key));
    const auto bounds = to_json(torsion_bounds(u, 0.75));
    for (const char* key : {"c_lower", "c_upper", "pass", "verdict"}) CHECK(bounds.contains(key));
}

TEST_CASE("profile csv") {
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 16, 1.0);
    const auto u = DiscreteField::constant(mesh, 1.0);
    std::ostringstream os;
    write_profile_csv(os, u, 0.75);
    CHECK(os.str().rfind("delta,u,ratio\n", 0) == 0);
}
