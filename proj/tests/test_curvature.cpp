// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "ckforms/curvature.hpp"
#include "ckforms/jets.hpp"
#include "ckforms/kaehler.hpp"

using namespace ckforms;

TEST_CASE("projective line curvature matrix is the constant -4") {
  const CurvatureOperator r = CurvatureOperator::complex_projective(1);
  REQUIRE(r.matrix().rows() == 1);
  CHECK(r.matrix()(0, 0) == doctest::Approx(-4.0));
  CHECK(r.sectional(0, 1) == doctest::Approx(4.0));
}

TEST_CASE("sectional curvature pinches between 1 and 4") {
  const CurvatureOperator r = CurvatureOperator::complex_projective(2);
  CHECK(r.sectional(0, 1) == doctest::Approx(4.0));  // J-invariant plane
  CHECK(r.sectional(2, 3) == doctest::Approx(4.0));
  CHECK(r.sectional(0, 2) == doctest::Approx(1.0));  // totally real plane
  CHECK(r.sectional(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("Weitzenboeck term acts as the Ricci endomorphism on covectors") {
  for (int m = 1; m <= 3; ++m) {
    const CurvatureOperator r = CurvatureOperator::complex_projective(m);
    for (int i = 0; i < 2 * m; ++i) {
      const AlternatingForm e = AlternatingForm::covector_basis(2 * m, i);
      const AlternatingForm expected = (2.0 * (m + 1.0)) * e;
      CHECK((r.apply(e) - expected).norm() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("the Kaehler form sits in the kernel of the Weitzenboeck term") {
  for (int m = 1; m <= 3; ++m) {
    const CurvatureOperator r = CurvatureOperator::complex_projective(m);
    CHECK(r.apply(KaehlerFrame(m).omega()).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("primitive J-invariant 2-forms on the projective plane have eigenvalue 8") {
  const CurvatureOperator r = CurvatureOperator::complex_projective(2);
  const AlternatingForm a =
      AlternatingForm::basis(4, 0b0011) - AlternatingForm::basis(4, 0b1100);
  CHECK((r.apply(a) - 8.0 * a).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("double-sum oracle reproduces the packaged Weitzenboeck action") {
  std::mt19937_64 rng(41);
  for (int m = 2; m <= 3; ++m) {
    const CurvatureOperator r = CurvatureOperator::complex_projective(m);
    for (int p = 1; p <= 2 * m - 1; ++p) {
      const AlternatingForm a = random_form(2 * m, p, rng);
      CHECK(max_abs_diff(r.apply(a), curvature_action_double_sum(r, a)) < 1e-11);
    }
  }
}

TEST_CASE("Weitzenboeck action is independent of the bivector basis") {
  std::mt19937_64 rng(43);
  const CurvatureOperator r = CurvatureOperator::complex_projective(2);
  const std::vector<AlternatingForm> basis = random_bivector_basis(4, rng);
  const AlternatingForm a = random_form(4, 2, rng);
  CHECK(max_abs_diff(r.apply(a), curvature_action_in_basis(r, basis, a)) < 1e-10);
}

TEST_CASE("flat curvature annihilates everything") {
  std::mt19937_64 rng(47);
  const CurvatureOperator r = CurvatureOperator::flat(4);
  for (int p = 0; p <= 4; ++p)
    CHECK(r.apply(random_form(4, p, rng)).norm() == 0.0);
}

TEST_CASE("from_matrix rejects broken symmetry") {
  const CurvatureOperator cp = CurvatureOperator::complex_projective(2);
  CHECK_NOTHROW(CurvatureOperator::from_matrix(4, cp.matrix()));
  Eigen::MatrixXd bad = cp.matrix();
  bad(0, 1) += 0.5;
  CHECK_THROWS_AS(CurvatureOperator::from_matrix(4, bad), std::invalid_argument);
}

TEST_CASE("second-order residuals demand a hessian") {
  std::mt19937_64 rng(53);
  const CurvatureOperator r = CurvatureOperator::complex_projective(2);
  const CovariantJet j = random_jet(4, 2, rng);  // first-order only
  CHECK_THROWS_AS(integrability_residual(r, j), std::invalid_argument);
  CHECK_THROWS_AS(weitzenboeck_residual(r, j), std::invalid_argument);
  CHECK_THROWS_AS(middim_characterization_residual(r, j, 2), std::invalid_argument);
}

TEST_CASE("parallel jets satisfy the second-order identities trivially") {
  const CurvatureOperator r = CurvatureOperator::flat(4);
  CovariantJet j = CovariantJet::parallel(AlternatingForm::basis(4, 0b0011));
  j.hess.assign(4, std::vector<AlternatingForm>(4, AlternatingForm::zero(4, 2)));
  CHECK(weitzenboeck_residual(r, j) == 0.0);
  CHECK(integrability_residual(r, j) == 0.0);
  CHECK(middim_characterization_residual(r, j, 2) == 0.0);
}
