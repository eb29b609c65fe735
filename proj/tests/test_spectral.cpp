#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "llb/diagnostics.hpp"

using namespace llb;
using std::numbers::pi;

TEST_CASE("basis is orthonormal under the collocation rule") {
  for (int dim : {1, 2}) {
    const auto g = build_grid<double>(dim, 6, 12);
    for (Eigen::Index i = 0; i < g->num_modes(); ++i) {
      Field e(g);
      e.coeffs()(i, 0) = 1.0;
      const auto p = synthesize(e);
      for (Eigen::Index j = 0; j < g->num_modes(); ++j) {
        Field f(g);
        f.coeffs()(j, 0) = 1.0;
        CHECK(inner(p, synthesize(f)) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(build_grid<double>(3, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid<double>(1, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid<double>(1, 8, 15), std::invalid_argument);
  CHECK_NOTHROW(build_grid<double>(1, 8, 16));
}

TEST_CASE("spectrum ordering in 2D") {
  const auto g = build_grid<double>(2, 3, 6);
  const std::vector<ModeIndex> expected{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2},
                                        {2, 0}, {1, 2}, {2, 1}, {2, 2}};
  CHECK(g->modes() == expected);
  const std::vector<double> lambda{0, 1, 1, 2, 4, 4, 5, 5, 8};
  for (std::size_t i = 0; i < lambda.size(); ++i) CHECK(g->eigenvalues()(Eigen::Index(i)) == lambda[i]);
  CHECK(g->mode_row(2, 1) == 7);
  CHECK(g->mode_row(3, 0) == -1);
}

TEST_CASE("projection and synthesis round trip") {
  const auto g = build_grid<double>(2, 5, 10);
  const Field f = random_field(g, 4, 3);
  const Field back = project(synthesize(f));
  CHECK((back.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gradient and Laplacian of cos x") {
  const auto g = build_grid<double>(1, 8, 16);
  FieldExpression e{Vec3d::Zero(), {{1, 0, Vec3d(1.0, 0.0, 0.0)}}};
  const Field f = e.to_field(g);
  const auto dx = synthesize_gradient(f, 0);
  const auto lap = synthesize(laplacian(f));
  for (Eigen::Index q = 0; q < g->num_points(); ++q) {
    const double x = g->point(q)[0];
    CHECK(dx.values()(q, 0) == doctest::Approx(-std::sin(x)).epsilon(1e-13));
    CHECK(lap.values()(q, 0) == doctest::Approx(-std::cos(x)).epsilon(1e-13));
  }
}

TEST_CASE("norms of cos x e1") {
  const auto g = build_grid<double>(1, 8, 16);
  const Field f = FieldExpression{Vec3d::Zero(), {{1, 0, Vec3d(1.0, 0.0, 0.0)}}}.to_field(g);
  const auto n = norms(f);
  CHECK(n.l2 * n.l2 == doctest::Approx(pi / 2).epsilon(1e-13));
  CHECK(n.h1 * n.h1 == doctest::Approx(pi).epsilon(1e-13));
  CHECK(std::pow(n.l4, 4) == doctest::Approx(3 * pi / 8).epsilon(1e-13));
  CHECK(n.linf == doctest::Approx(std::cos(pi / 32)).epsilon(1e-13));  // max over nodes
}

TEST_CASE("nonlinear drift of cos x e1") {
  // v x Lap v = 0 and (1 + |v|^2) v = (7/4) cos x + (1/4) cos 3x, so
  // F(v) = -(11/4) cos x - (1/4) cos 3x along e1.
  const auto g = build_grid<double>(1, 8, 16);
  const Field v = FieldExpression{Vec3d::Zero(), {{1, 0, Vec3d(1.0, 0.0, 0.0)}}}.to_field(g);
  const auto F = synthesize(nonlinear_F(v));
  for (Eigen::Index q = 0; q < g->num_points(); ++q) {
    const double x = g->point(q)[0];
    CHECK(F.values()(q, 0) == doctest::Approx(-2.75 * std::cos(x) - 0.25 * std::cos(3 * x)).epsilon(1e-12));
    CHECK(std::abs(F.values()(q, 1)) < 1e-14);
    CHECK(std::abs(F.values()(q, 2)) < 1e-14);
  }
}

TEST_CASE("gyromagnetic term of a rotating field") {
  // v = (cos x, cos 2x, 1), cross product formed by hand.
  const auto g = build_grid<double>(1, 8, 16);
  FieldExpression e{Vec3d(0.0, 0.0, 1.0), {{1, 0, Vec3d(1.0, 0.0, 0.0)}, {2, 0, Vec3d(0.0, 1.0, 0.0)}}};
  const Field v = e.to_field(g);
  const auto c = synthesize(cross_laplacian_term(v));
  for (Eigen::Index q = 0; q < g->num_points(); ++q) {
    const double x = g->point(q)[0];
    const Vec3d vv(std::cos(x), std::cos(2 * x), 1.0);
    const Vec3d lap(-std::cos(x), -4 * std::cos(2 * x), 0.0);
    const Vec3d expected = vv.cross(lap);
    for (int k = 0; k < 3; ++k) CHECK(c.values()(q, k) == doctest::Approx(expected(k)).epsilon(1e-12));
  }
}

TEST_CASE("transfer embeds and truncates") {
  const auto coarse = build_grid<double>(2, 3, 6);
  const auto fine = build_grid<double>(2, 6, 12);
  const Field f = random_field(coarse, 2, 9);
  const Field up = transfer(f, fine);
  CHECK(l2_norm(up) == doctest::Approx(l2_norm(f)).epsilon(1e-15));
  CHECK((transfer(up, coarse).coeffs() - f.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity suite on both dimensions") {
  FieldExpression h{Vec3d(0.0, 0.0, 0.4), {{1, 0, Vec3d(0.2, 0.0, 0.0)}}};
  CHECK(identity_suite(build_grid<double>(1, 16, 32), h, 50, 1).passed());
  CHECK(identity_suite(build_grid<double>(2, 8, 16), h, 50, 2).passed());
}

TEST_CASE("identity suite on the zero field alone") {
  const auto r = identity_suite(build_grid<double>(1, 8, 16), FieldExpression{}, 1, 1);
  for (const auto& m : r.metrics) CHECK(m.value == 0.0);
}

TEST_CASE("identity suite rejects an unresolved h") {
  FieldExpression h{Vec3d::Zero(), {{9, 0, Vec3d(1.0, 0.0, 0.0)}}};
  CHECK_THROWS(identity_suite(build_grid<double>(1, 8, 16), h, 1, 1));
}

TEST_CASE("templated core runs in long double") {
  const auto g = build_grid<long double>(1, 4, 8);
  BasicField<long double> f(g);
  f.coeffs()(1, 0) = 1.0L;
  CHECK(std::abs(static_cast<double>(inner(laplacian(f), f)) + 1.0) < 1e-15);
}
