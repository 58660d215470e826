// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <string>

#include <doctest.h>

#include "ckforms/chart.hpp"
#include "ckforms/curvature.hpp"
#include "ckforms/kaehler.hpp"

using namespace ckforms;

namespace {

Eigen::VectorXd chart_point(std::initializer_list<double> xs) {
  Eigen::VectorXd x(static_cast<int>(xs.size()));
  int i = 0;
  for (double v : xs) x(i++) = v;
  return x;
}

FormField kaehler_form_field(const ChartGeometry& g) {
  FormField f;
  f.dim = g.dim();
  f.degree = 2;
  f.eval = [g](const Eigen::VectorXd& x) { return kaehler_form_coords(g, x); };
  return f;
}

}  // namespace

TEST_CASE("Fubini-Study chart is normalized at the origin") {
  const ChartGeometry g = fubini_study(2);
  const Eigen::VectorXd o = Eigen::VectorXd::Zero(4);
  CHECK(g.metric(o).isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-14));
  for (const auto& dg : g.metric_partials(o)) CHECK(dg.norm() < 1e-14);
  for (const auto& gam : g.christoffel(o)) CHECK(gam.norm() < 1e-14);
  const Eigen::VectorXd x = chart_point({0.3, -0.2, 0.1, 0.4});
  CHECK((g.metric(x) - Eigen::MatrixXd::Identity(4, 4)).norm() > 1e-3);
}

TEST_CASE("metric partials agree with finite differences of the metric") {
  const ChartGeometry g = fubini_study(2);
  const Eigen::VectorXd x = chart_point({0.25, -0.1, 0.35, 0.05});
  const double h = 1e-5;
  const auto parts = g.metric_partials(x);
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const Eigen::MatrixXd fd = (g.metric(xp) - g.metric(xm)) / (2.0 * h);
    CHECK((fd - parts[static_cast<std::size_t>(k)]).norm() < 1e-8);
  }
}

TEST_CASE("flat chart has identity metric and no connection anywhere") {
  const ChartGeometry g = flat_torus(2);
  const Eigen::VectorXd x = chart_point({1.2, -0.7, 0.3, 2.1});
  CHECK(g.metric(x).isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-15));
  for (const auto& dg : g.metric_partials(x)) CHECK(dg.norm() == 0.0);
  for (const auto& gam : g.christoffel(x)) CHECK(gam.norm() == 0.0);
  const Eigen::MatrixXd j = g.complex_structure(x);
  CHECK((j * j + Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("complex structure is metric-compatible on the projective chart") {
  const ChartGeometry g = fubini_study(3);
  const Eigen::VectorXd x = chart_point({0.2, 0.1, -0.3, 0.4, 0.05, -0.15});
  const Eigen::MatrixXd gm = g.metric(x);
  const Eigen::MatrixXd j = g.complex_structure(x);
  CHECK((j * j + Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
  CHECK((j.transpose() * gm * j - gm).norm() < 1e-12);
}

TEST_CASE("adapted frame is orthonormal, oriented and J-interleaved") {
  const ChartGeometry g = fubini_study(2);
  const Eigen::VectorXd x = chart_point({0.4, -0.25, 0.15, 0.3});
  const Eigen::MatrixXd f = adapted_frame(g, x);
  CHECK((f.transpose() * g.metric(x) * f - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  const Eigen::MatrixXd j = g.complex_structure(x);
  for (int k = 0; k < 2; ++k)
    CHECK((f.col(2 * k + 1) - j * f.col(2 * k)).norm() < 1e-12);
  CHECK(f.determinant() > 0.0);
}

TEST_CASE("frame transport round-trips coordinate forms") {
  std::mt19937_64 rng(61);
  const ChartGeometry g = fubini_study(2);
  const Eigen::VectorXd x = chart_point({0.2, 0.3, -0.1, 0.25});
  const Eigen::MatrixXd f = adapted_frame(g, x);
  for (int p = 0; p <= 4; ++p) {
    const AlternatingForm a = random_form(4, p, rng);
    CHECK((from_frame(f, to_frame(f, a)) - a).norm() < 1e-12);
  }
}

TEST_CASE("coordinate Kaehler form matches the model form at the origin") {
  for (int m = 2; m <= 3; ++m) {
    const Eigen::VectorXd o = Eigen::VectorXd::Zero(2 * m);
    const AlternatingForm expected = KaehlerFrame(m).omega();
    CHECK((kaehler_form_coords(fubini_study(m), o) - expected).norm() < 1e-14);
    CHECK((kaehler_form_coords(flat_torus(m), o) - expected).norm() < 1e-14);
  }
}

TEST_CASE("the Kaehler form is parallel to discretization accuracy") {
  const ChartGeometry g = fubini_study(2);
  const FormField om = kaehler_form_field(g);
  const SamplePlan plan = make_sample_plan(4, 3, 1.0);
  for (const auto& x : plan.points) {
    const CovariantJet j = covariant_jet(g, om, x, plan);
    CHECK(j.grad_norm() < 1e-7);
    CHECK((j.value - KaehlerFrame(2).omega()).norm() < 1e-12);
  }
}

TEST_CASE("numeric exterior derivative squares to zero") {
  const ChartGeometry g = fubini_study(2);
  const FormField a = polynomial_test_field(4, 1, 1);
  const SamplePlan plan = make_sample_plan(4, 3, 1.0);
  const FormField da = numeric_operator(g, a, plan, FirstOrderOp::d);
  const FormField dda = numeric_operator(g, da, plan, FirstOrderOp::d);
  for (const auto& x : plan.points) CHECK(frame_norm(g, x, dda(x)) < 1e-6);
}

TEST_CASE("twisted differential of a scalar is the rotated gradient") {
  const ChartGeometry g = fubini_study(2);
  const FormField f = scalar_field(4, [](const Eigen::VectorXd& x) {
    return std::sin(x(0)) * x(1) + 0.5 * x(2) * x(3) * x(3);
  });
  const SamplePlan plan = make_sample_plan(4, 3, 1.0);
  const FormField df = numeric_operator(g, f, plan, FirstOrderOp::d);
  const FormField dcf = numeric_operator(g, f, plan, FirstOrderOp::dc);
  const FormField jdf = pointwise_map(
      g, df, 1, [](const KaehlerFrame& fr, const AlternatingForm& a) {
        return j_covector(fr, a);
      });
  for (const auto& x : plan.points) CHECK(frame_norm(g, x, dcf(x) - jdf(x)) < 1e-7);
}

TEST_CASE("twisted codifferential on a flat linear field") {
  const ChartGeometry g = flat_torus(2);
  FormField u;
  u.dim = 4;
  u.degree = 2;
  u.eval = [](const Eigen::VectorXd& x) { return AlternatingForm::basis(4, 0b0011, x(0)); };
  const SamplePlan plan = make_sample_plan(4, 2, 1.0);
  const FormField out = numeric_operator(g, u, plan, FirstOrderOp::deltac);
  const AlternatingForm expected = AlternatingForm::covector_basis(4, 0);
  for (const auto& x : plan.points) CHECK((out(x) - expected).norm() < 1e-10);
}

TEST_CASE("sample plans are deterministic and bounded") {
  const SamplePlan a = make_sample_plan(4, 12, 0.8, 5e-3, 4, 2);
  const SamplePlan b = make_sample_plan(4, 12, 0.8, 5e-3, 4, 2);
  REQUIRE(a.points.size() == 12);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK((a.points[i] - b.points[i]).norm() == 0.0);
    CHECK(a.points[i].norm() <= 0.8 + 1e-12);
  }
  const SamplePlan c = make_sample_plan(4, 12, 0.8, 5e-3, 4, 3);
  CHECK((a.points[0] - c.points[0]).norm() > 1e-6);
  const SamplePlan t = a.truncated(2);
  REQUIRE(t.points.size() == 2);
  CHECK(t.h == a.h);
  CHECK((t.points[1] - a.points[1]).norm() == 0.0);
}

TEST_CASE("plan construction rejects bad parameters") {
  CHECK_THROWS_AS(make_sample_plan(4, 5, 1.0, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(make_sample_plan(4, 5, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_sample_plan(4, 5, 1.0, 5e-3, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_sample_plan(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_sample_plan(4, 5, -1.0), std::invalid_argument);
}

TEST_CASE("eigenfunction family validates its matrix") {
  const ChartGeometry g = fubini_study(2);
  const FormField f = laplace_eigenfunction(g, default_eigenfunction_matrix(2));
  const Eigen::VectorXd o = Eigen::VectorXd::Zero(4);
  CHECK(f(o).coeff(0) == doctest::Approx(1.0));
  const FormField z = laplace_eigenfunction(g, Eigen::MatrixXcd::Zero(3, 3));
  CHECK(z(chart_point({0.3, 0.1, -0.2, 0.4})).is_zero());

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(3, 3);
  bad(0, 1) = std::complex<double>(0.0, 1.0);
  bad(1, 0) = std::complex<double>(0.0, 1.0);
  CHECK_THROWS_AS(laplace_eigenfunction(g, bad), std::invalid_argument);

  Eigen::MatrixXcd traceful = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(laplace_eigenfunction(g, traceful), std::invalid_argument);
  CHECK_THROWS_AS(laplace_eigenfunction(g, Eigen::MatrixXcd::Zero(4, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(laplace_eigenfunction(flat_torus(2), Eigen::MatrixXcd::Zero(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("trace of the derived 2-form field is proportional to the scalar") {
  for (int m = 2; m <= 3; ++m) {
    const ChartGeometry g = fubini_study(m);
    const FormField f = laplace_eigenfunction(g, default_eigenfunction_matrix(m));
    const FormField phi = build_phi_hat(g, f);
    const FormField lphi = pointwise_map(
        g, phi, 0, [](const KaehlerFrame& fr, const AlternatingForm& a) {
          return lefschetz_Lambda(fr, a);
        });
    const SamplePlan plan = make_sample_plan(2 * m, 2, 0.9);
    for (const auto& x : plan.points) {
      const double got = lphi(x).coeff(0);
      const double expected = (2.0 * m - 4.0) * f(x).coeff(0);
      CHECK(got == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("line integration of an exact 1-form telescopes") {
  FormField alpha;
  alpha.dim = 4;
  alpha.degree = 1;
  alpha.eval = [](const Eigen::VectorXd& x) {
    AlternatingForm a = AlternatingForm::covector_basis(4, 0, 2.0 * x(0) * x(1));
    a += AlternatingForm::covector_basis(4, 1, x(0) * x(0));
    return a;
  };
  const Eigen::VectorXd o = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd mid = chart_point({0.7, 0.0, 0.0, 0.0});
  const Eigen::VectorXd end = chart_point({0.7, 0.4, 0.0, 0.0});
  const double val = integrate_one_form_along(alpha, {o, mid, end});
  CHECK(val == doctest::Approx(0.7 * 0.7 * 0.4).epsilon(1e-12));
  CHECK(integrate_one_form_along(alpha, {o, mid, end, o}) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("generalized trace rejects a potential-free input") {
  const ChartGeometry g = fubini_study(2);
  const FormField phi = polynomial_test_field(4, 2, 4);
  const SamplePlan plan = make_sample_plan(4, 3, 0.9);
  try {
    generalized_trace(g, phi, plan);
    FAIL("expected the closedness precheck to fire");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("generalized trace rejected") != std::string::npos);
  }
}

TEST_CASE("numerical Riemann matrix reproduces the model curvature") {
  const ChartGeometry flat = flat_torus(2);
  const Eigen::VectorXd o4 = Eigen::VectorXd::Zero(4);
  CHECK(frame_riemann_matrix(flat, o4).norm() < 1e-10);

  const ChartGeometry line = fubini_study(1);
  const Eigen::MatrixXd r1 = frame_riemann_matrix(line, Eigen::VectorXd::Zero(2));
  REQUIRE(r1.rows() == 1);
  CHECK(r1(0, 0) == doctest::Approx(-4.0).epsilon(1e-4));

  const ChartGeometry plane = fubini_study(2);
  const Eigen::MatrixXd model = CurvatureOperator::complex_projective(2).matrix();
  CHECK((frame_riemann_matrix(plane, o4) - model).norm() < 1e-4);
  const Eigen::VectorXd x = chart_point({0.3, -0.1, 0.2, 0.15});
  CHECK((frame_riemann_matrix(plane, x) - model).norm() < 1e-3);
}

TEST_CASE("conformal rescaling with zero weight is the identity") {
  const ChartGeometry g = fubini_study(2);
  const ChartGeometry gc = conformal_rescale(g, [](const Eigen::VectorXd&) { return 0.0; });
  const Eigen::VectorXd x = chart_point({0.2, 0.4, -0.1, 0.3});
  CHECK((gc.metric(x) - g.metric(x)).norm() < 1e-14);
  const auto pa = g.metric_partials(x);
  const auto pb = gc.metric_partials(x);
  for (std::size_t k = 0; k < pa.size(); ++k) CHECK((pa[k] - pb[k]).norm() < 1e-12);
}

TEST_CASE("deterministic test fields are reproducible and variant-sensitive") {
  const FormField a = polynomial_test_field(4, 2, 3);
  const FormField b = polynomial_test_field(4, 2, 3);
  const FormField c = polynomial_test_field(4, 2, 5);
  CHECK(a.dim == 4);
  CHECK(a.degree == 2);
  const Eigen::VectorXd x = chart_point({0.3, -0.6, 0.2, 0.1});
  CHECK((a(x) - b(x)).norm() == 0.0);
  CHECK((a(x) - c(x)).norm() > 1e-8);
}

TEST_CASE("battery entry points validate their inputs") {
  std::mt19937_64 rng(67);
  const KaehlerFrame f(2);
  CHECK_THROWS_AS(primitive_structure_checks(f, {}, "x"), std::invalid_argument);
  CHECK_THROWS_AS(primitive_structure_checks(f, {random_jet(4, 3, rng)}, "x"),
                  std::invalid_argument);
  const SamplePlan plan = make_sample_plan(6, 2, 1.0);
  CHECK_THROWS_AS(degree4_structure_battery(flat_torus(3), plan), std::invalid_argument);
  CHECK_THROWS_AS(degree4_structure_battery(fubini_study(2), make_sample_plan(4, 2, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("commutator battery passes on a small plan") {
  const ChartGeometry g = fubini_study(2);
  const SamplePlan plan = make_sample_plan(4, 3, 1.2);
  const auto results = commutator_suite(g, plan);
  CHECK(results.size() == 18);
  for (const auto& r : results) {
    CAPTURE(r.name);
    CHECK(r.pass);
  }
}
