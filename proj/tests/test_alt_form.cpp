// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "ckforms/alt_form.hpp"

using namespace ckforms;

namespace {

double dot(const AlternatingForm& a, const AlternatingForm& b) {
  double s = 0.0;
  for (const auto& [mask, c] : a.terms()) s += c * b.coeff(mask);
  return s;
}

}  // namespace

TEST_CASE("basis masks enumerate binomially and sorted") {
  const auto masks = masks_of_degree(6, 3);
  CHECK(masks.size() == 20);
  for (std::size_t i = 1; i < masks.size(); ++i) CHECK(masks[i - 1] < masks[i]);
  CHECK(masks_of_degree(4, 0).size() == 1);
  CHECK(masks_of_degree(4, 5).empty());
}

TEST_CASE("wedge is graded anticommutative and associative") {
  std::mt19937_64 rng(7);
  const int n = 6;
  for (int pa = 0; pa <= 3; ++pa) {
    for (int pb = 0; pb <= 3; ++pb) {
      const AlternatingForm a = random_form(n, pa, rng);
      const AlternatingForm b = random_form(n, pb, rng);
      const AlternatingForm ab = wedge(a, b);
      const AlternatingForm ba = wedge(b, a);
      const double sign = (pa * pb) % 2 == 0 ? 1.0 : -1.0;
      CHECK((ab - sign * ba).norm() == doctest::Approx(0.0).epsilon(1e-13));
      const AlternatingForm c = random_form(n, 1, rng);
      CHECK((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).norm() ==
            doctest::Approx(0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("wedge of overlapping covectors vanishes and signs count transpositions") {
  const int n = 4;
  const AlternatingForm e0 = AlternatingForm::covector_basis(n, 0);
  const AlternatingForm e1 = AlternatingForm::covector_basis(n, 1);
  CHECK(wedge(e0, e0).is_zero());
  const AlternatingForm e01 = wedge(e0, e1);
  CHECK(e01.coeff(0b0011) == 1.0);
  CHECK(wedge(e1, e0).coeff(0b0011) == -1.0);
}

TEST_CASE("contraction is adjoint to exterior multiplication") {
  std::mt19937_64 rng(11);
  const int n = 6;
  for (int p = 1; p <= 4; ++p) {
    const AlternatingForm a = random_form(n, p, rng);
    const AlternatingForm b = random_form(n, p - 1, rng);
    for (int i = 0; i < n; ++i) {
      const AlternatingForm ei = AlternatingForm::covector_basis(n, i);
      CHECK(dot(contract_dir(i, a), b) == doctest::Approx(dot(a, wedge(ei, b))).epsilon(1e-12));
    }
  }
}

TEST_CASE("hodge star on the four-dimensional basis") {
  const int n = 4;
  const AlternatingForm e01 = AlternatingForm::basis(n, 0b0011);
  CHECK(hodge_star(e01).coeff(0b1100) == 1.0);
  const AlternatingForm e02 = AlternatingForm::basis(n, 0b0101);
  CHECK(hodge_star(e02).coeff(0b1010) == -1.0);
}

TEST_CASE("hodge star squares to the degree sign and preserves norm") {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 8; n += 2) {
    for (int p = 0; p <= n; ++p) {
      const AlternatingForm a = random_form(n, p, rng);
      const AlternatingForm ss = hodge_star(hodge_star(a));
      const double sign = (p * (n - p)) % 2 == 0 ? 1.0 : -1.0;
      CHECK((ss - sign * a).norm() == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(hodge_star(a).norm() == doctest::Approx(a.norm()).epsilon(1e-13));
    }
  }
}

TEST_CASE("relative residual conventions") {
  CHECK(relative_residual(0.0, 0.0) == 0.0);
  CHECK(relative_residual(0.0, 123.0) == 0.0);
  CHECK(relative_residual(1e-20, 0.0) > 0.0);
  CHECK(relative_residual(2.0, 4.0) == doctest::Approx(0.5));
}

TEST_CASE("random forms are deterministic under a fixed seed") {
  std::mt19937_64 a(42), b(42);
  const AlternatingForm fa = random_form(6, 3, a);
  const AlternatingForm fb = random_form(6, 3, b);
  CHECK((fa - fb).norm() == 0.0);
}

TEST_CASE("degenerate degrees give the empty form") {
  CHECK(AlternatingForm::zero(4, 6).is_zero());
  std::mt19937_64 rng(3);
  const AlternatingForm a = random_form(4, 4, rng);
  CHECK(wedge(a, AlternatingForm::covector_basis(4, 0)).is_zero());
}
