// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
//
// Chart-based numerical geometry: concrete Kaehler metrics in a single
// coordinate chart, finite-difference covariant jets pulled back to a
// J-adapted orthonormal frame, and coordinate-level first-order operators.
// Everything downstream of this header is a floating-point approximation;
// tolerances are the caller's business.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ckforms/alt_form.hpp"
#include "ckforms/jets.hpp"
#include "ckforms/kaehler.hpp"
#include "ckforms/report.hpp"

namespace ckforms {

// A p-form field in chart coordinates: components over the coordinate
// coframe dx^1..dx^n, not over an orthonormal frame.
struct FormField {
  int dim = 0;
  int degree = 0;
  std::function<AlternatingForm(const Eigen::VectorXd&)> eval;
  AlternatingForm operator()(const Eigen::VectorXd& x) const { return eval(x); }
};

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

// A Kaehler metric in one chart. `metric` returns the coordinate Gram matrix,
// `metric_partials` its coordinate derivatives (entry k is d(g)/dx^k), and
// `complex_structure` the matrix of J acting on coordinate vectors.
struct ChartGeometry {
  int m = 0;
  std::string model;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric;
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> metric_partials;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> complex_structure;

  int dim() const { return 2 * m; }

  // Levi-Civita symbols Gamma^k_{ij}, assembled from metric and partials.
  std::vector<Eigen::MatrixXd> christoffel(const Eigen::VectorXd& x) const;
};

// Fubini-Study metric on an affine chart of CP^m, normalized to holomorphic
// sectional curvature 4 (identity Gram matrix at the origin, Ric = 2(m+1)).
ChartGeometry fubini_study(int m);

// Flat Kaehler chart on R^{2m} with the standard constant complex structure.
ChartGeometry flat_torus(int m);

// Conformally rescaled geometry e^{2 lambda} g. The partials of lambda are
// taken by central differences with step `fd_step`.
ChartGeometry conformal_rescale(const ChartGeometry& g, const ScalarFn& lambda,
                                double fd_step = 1e-3);

// Evaluation points plus finite-difference parameters shared by a suite run.
struct SamplePlan {
  std::vector<Eigen::VectorXd> points;
  double h = 5e-3;
  int order = 4;  // stencil order, 2 or 4

  SamplePlan truncated(std::size_t count) const;
};

// Halton points in the ball |x| <= radius. Deterministic for a fixed
// (dim, count, seed_offset) triple.
SamplePlan make_sample_plan(int dim, int count, double radius = 1.5, double h = 5e-3,
                            int order = 4, unsigned seed_offset = 0);

// Orthonormal frame columns F_1..F_n at x, built by metric Gram-Schmidt and
// interleaved so that F_{2k} = J F_{2k-1} exactly; positively oriented.
Eigen::MatrixXd adapted_frame(const ChartGeometry& g, const Eigen::VectorXd& x);

// Linear substitution e^i -> sum_l T(l,i) e^l extended multiplicatively.
AlternatingForm transform_form(const Eigen::MatrixXd& t, const AlternatingForm& a);

// Coordinate components -> orthonormal frame components and back.
AlternatingForm to_frame(const Eigen::MatrixXd& frame, const AlternatingForm& a);
AlternatingForm from_frame(const Eigen::MatrixXd& frame, const AlternatingForm& a);

// Norm of a coordinate-component form measured in the metric at x.
double frame_norm(const ChartGeometry& g, const Eigen::VectorXd& x,
                  const AlternatingForm& coord_form);

// Kaehler form in coordinate components, omega(X,Y) = g(JX, Y).
AlternatingForm kaehler_form_coords(const ChartGeometry& g, const Eigen::VectorXd& x);

// Covariant jet of a field at x in the adapted frame. First derivatives use
// the plan stencil; the Hessian nests it (effective order drops to 2).
CovariantJet covariant_jet(const ChartGeometry& g, const FormField& f,
                           const Eigen::VectorXd& x, const SamplePlan& plan,
                           bool with_hess = false);

enum class FirstOrderOp { d, delta, dc, deltac };

// d, delta, d^c, delta^c as fields in coordinate components, evaluated by
// finite differences of f and the Levi-Civita connection of g.
FormField numeric_operator(const ChartGeometry& g, const FormField& f,
                           const SamplePlan& plan, FirstOrderOp which);

// Pointwise frame-level map applied to a coordinate field (J, L, Lambda,
// Hodge star, type projections, ...).
FormField pointwise_map(const ChartGeometry& g, const FormField& f, int out_degree,
                        const std::function<AlternatingForm(const KaehlerFrame&,
                                                            const AlternatingForm&)>& op);

// First eigenspace of the Laplacian on CP^m: f = (Z* A Z)/|Z|^2 for Hermitian
// traceless A over homogeneous coordinates Z = (1, z). Delta f = 4(m+1) f.
// A = 0 yields the zero field; otherwise A must be Hermitian and traceless.
FormField laplace_eigenfunction(const ChartGeometry& g, const Eigen::MatrixXcd& a);

// diag(1, -1/m, ..., -1/m), the default test eigenfunction.
Eigen::MatrixXcd default_eigenfunction_matrix(int m);

// The degree-2 test field dd^c f + 6 f omega built from a scalar field.
FormField build_phi_hat(const ChartGeometry& g, const FormField& f, double h = 5e-3,
                        int order = 4);

// Scalar field wrapper around a plain function.
FormField scalar_field(int dim, ScalarFn fn);

// Deterministic smooth trig/polynomial test field; `variant` decouples
// coefficient patterns between fields of the same shape.
FormField polynomial_test_field(int dim, int degree, unsigned variant);

// Worst relative symmetrized-gradient defect over the plan for a vector
// field handed over in lowered form (a 1-form field, e.g. df or d^c f):
// zero iff the raised field generates isometries.
double killing_field_check(const ChartGeometry& g, const FormField& k,
                           const SamplePlan& plan);

// Gauss-Legendre line integral of a 1-form field along straight segments
// between consecutive waypoints.
double integrate_one_form_along(const FormField& alpha,
                                const std::vector<Eigen::VectorXd>& waypoints);

// Potential f with df = delta^c phi and f(0) = 0, recovered by radial line
// integration from the chart origin. Throws if delta^c phi fails a closedness
// precheck over the plan points.
FormField generalized_trace(const ChartGeometry& g, const FormField& phi,
                            const SamplePlan& plan);

// Numerical Riemann tensor at x pulled back to the adapted frame, in the same
// bivector-basis convention as CurvatureOperator::matrix().
Eigen::MatrixXd frame_riemann_matrix(const ChartGeometry& g, const Eigen::VectorXd& x,
                                     double fd_step = 1e-3);

// The graded commutator identities tying d, delta, d^c, delta^c, L, Lambda, J
// and the Hodge star, evaluated on a family of scalar, polynomial and
// eigenfunction-derived fields over the plan.
std::vector<CheckResult> commutator_suite(const ChartGeometry& g, const SamplePlan& plan);

// Relation battery for twistor forms of even degree p = 2k: the primitive
// covectors carrying d and delta, their J-pairing, the Lambda L eigenvalues
// and the first-order links between the four differentials.  Jets are frame
// jets at scattered points; degenerate link coefficients come back skipped.
std::vector<CheckResult> primitive_structure_checks(const KaehlerFrame& f,
                                                    const std::vector<CovariantJet>& jets,
                                                    const std::string& label);

// Structure checks for the degree-4 twistor form on CP^3 built from the
// primitive part of dd^c f + 6 f omega and its generalized trace, plus the
// degree-2 companion checks on the form itself.
std::vector<CheckResult> degree4_structure_battery(const ChartGeometry& g,
                                                  const SamplePlan& plan);

}  // namespace ckforms
