#include <doctest.h>

#include <random>
#include <sstream>

#include "rfrac/geometry.hpp"

using namespace rfrac;

TEST_CASE("boundary distance on intervals") {
    const Interval iv(-1.0, 1.0);
    CHECK(boundary_distance(iv, 0.3) == doctest::Approx(0.7));
    CHECK(boundary_distance(iv, -1.0) == 0.0);
    CHECK(boundary_distance(iv, 1.0) == 0.0);
    CHECK_THROWS_AS(boundary_distance(iv, 1.5), std::domain_error);
    CHECK_THROWS_AS(boundary_distance(iv, -2.0), std::domain_error);
}

TEST_CASE("boundary distance on balls") {
    const Ball ball({0.0, 0.0}, 2.0);
    CHECK(boundary_distance(ball, {1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(boundary_distance(ball, {0.0, 0.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(boundary_distance(ball, {3.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(Ball({0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("boundary distance is 1-Lipschitz on sampled pairs") {
    const Interval iv(-2.0, 3.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-2.0, 3.0);
    for (int t = 0; t < 500; ++t) {
        const double x = uni(rng), y = uni(rng);
        CHECK(std::abs(boundary_distance(iv, x) - boundary_distance(iv, y)) <=
              std::abs(x - y) + 1e-15);
    }
}

TEST_CASE("graded mesh: uniform case") {
    const auto mesh = build_graded_mesh(Interval(0.0, 1.0), 8, 1.0);
    for (int j = 0; j <= 8; ++j) CHECK(mesh.nodes[j] == doctest::Approx(j / 8.0));
}

TEST_CASE("graded mesh: beta = 2 grading formula") {
    // Hand evaluation of a + (b-a)/2 (2j/n)^beta at n = 8: the even-index
    // nodes reproduce the n = 4 values {0, 0.125, 0.5, 0.875, 1}.
    const auto mesh = build_graded_mesh(Interval(0.0, 1.0), 8, 2.0);
    CHECK(mesh.nodes[0] == 0.0);
    CHECK(mesh.nodes[1] == doctest::Approx(0.5 * std::pow(0.25, 2))); // 0.03125
    CHECK(mesh.nodes[2] == doctest::Approx(0.125));
    CHECK(mesh.nodes[4] == doctest::Approx(0.5));
    CHECK(mesh.nodes[6] == doctest::Approx(0.875));
    CHECK(mesh.nodes[8] == 1.0);
}

TEST_CASE("graded mesh: symmetry under reflection") {
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 8, 2.0);
    for (int j = 0; j <= 8; ++j)
        CHECK(mesh.nodes[j] + mesh.nodes[8 - j] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("graded mesh: parameter validation") {
    CHECK_THROWS_AS(build_graded_mesh(Interval(0.0, 1.0), 4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_graded_mesh(Interval(0.0, 1.0), 16, 0.5), std::invalid_argument);
}

TEST_CASE("graded mesh: refinement never increases the maximum cell") {
    for (const double beta : {1.0, 2.0, 4.0}) {
        const auto coarse = build_graded_mesh(Interval(-1.0, 1.0), 32, beta);
        const auto fine = build_graded_mesh(Interval(-1.0, 1.0), 64, beta);
        CHECK(fine.h_max() <= coarse.h_max() + 1e-15);
    }
}

TEST_CASE("graded mesh: delta positive exactly at interior nodes") {
    const auto mesh = build_graded_mesh(Interval(-1.0, 1.0), 32, 4.0);
    CHECK(mesh.boundary_distance_at(0) == 0.0);
    CHECK(mesh.boundary_distance_at(32) == 0.0);
    for (int j = 1; j < 32; ++j) CHECK(mesh.boundary_distance_at(j) > 0.0);
}

TEST_CASE("default grading resolves the boundary layer") {
    CHECK(default_grading(0.75) == doctest::Approx(4.0));
    CHECK(default_grading(0.9) == doctest::Approx(2.5));
    CHECK(default_grading(0.4) == 1.0);
}

TEST_CASE("mesh csv export") {
    const auto mesh = build_graded_mesh(Interval(0.0, 1.0), 8, 1.0);
    std::ostringstream os;
    write_mesh_csv(os, mesh);
    const std::string text = os.str();
    CHECK(text.rfind("index,node,boundary_distance\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10); // header + 9 nodes
}
