// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "ckforms/kaehler.hpp"

using namespace ckforms;

TEST_CASE("kaehler form pairs consecutive directions") {
  const KaehlerFrame f(2);
  const AlternatingForm om = f.omega();
  CHECK(om.coeff(0b0011) == 1.0);
  CHECK(om.coeff(0b1100) == 1.0);
  CHECK(om.terms().size() == 2);
}

TEST_CASE("complex structure on covectors") {
  const KaehlerFrame f(2);
  CHECK(f.j_index(0) == std::make_pair(1, 1));
  CHECK(f.j_index(1) == std::make_pair(0, -1));
  const Covector e0 = AlternatingForm::covector_basis(4, 0);
  const Covector e1 = AlternatingForm::covector_basis(4, 1);
  CHECK((j_covector(f, e0) - e1).norm() == 0.0);
  CHECK((j_covector(f, e1) + e0).norm() == 0.0);
}

TEST_CASE("trace contracts the even index first") {
  const KaehlerFrame f(2);
  const AlternatingForm e01 = AlternatingForm::basis(4, 0b0011);
  CHECK(lefschetz_Lambda(f, e01).coeff(0) == 1.0);
  CHECK(lefschetz_Lambda(f, f.omega()).coeff(0) == 2.0);  // <omega,omega> = m
}

TEST_CASE("derivation extension of J on a two-form") {
  const KaehlerFrame f(2);
  AlternatingForm a = AlternatingForm::basis(4, 0b0101);   // e0^e2
  a -= AlternatingForm::basis(4, 0b1010);                  // - e1^e3
  AlternatingForm expected = AlternatingForm::basis(4, 0b1001);  // e0^e3
  expected += AlternatingForm::basis(4, 0b0110);                 // + e1^e2
  expected *= 2.0;
  CHECK((j_extension(f, a) - expected).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(j_extension(f, f.omega()).is_zero());
}

TEST_CASE("type components: J squared acts as minus s squared") {
  std::mt19937_64 rng(5);
  for (int m = 1; m <= 3; ++m) {
    const KaehlerFrame f(m);
    const int n = f.dim();
    for (int p = 0; p <= n; ++p) {
      const AlternatingForm a = random_form(n, p, rng);
      AlternatingForm sum = AlternatingForm::zero(n, p);
      for (int s : admissible_types(m, p)) {
        const AlternatingForm c = type_project(f, a, s);
        sum += c;
        const AlternatingForm jj = j_extension(f, j_extension(f, c));
        CHECK((jj + static_cast<double>(s) * s * c).norm() ==
              doctest::Approx(0.0).epsilon(1e-11));
      }
      CHECK((sum - a).norm() == doctest::Approx(0.0).epsilon(1e-11));
    }
  }
}

TEST_CASE("admissible type spectrum") {
  CHECK(admissible_types(2, 1) == std::vector<int>{1});
  CHECK(admissible_types(2, 2) == std::vector<int>{0, 2});
  CHECK(admissible_types(3, 3) == std::vector<int>{1, 3});
}

TEST_CASE("bracket with a power of L has the closed-form coefficient") {
  std::mt19937_64 rng(17);
  for (int m = 1; m <= 4; ++m) {
    const KaehlerFrame f(m);
    const int n = f.dim();
    for (int p = 0; p <= n; ++p) {
      const AlternatingForm a = random_form(n, p, rng);
      for (int s = 1; s <= m + 1; ++s) {
        AlternatingForm closed = a;
        for (int t = 0; t < s - 1; ++t) closed = lefschetz_L(f, closed);
        closed *= static_cast<double>(s) * (m - p - s + 1);
        CHECK((commutator_Lambda_Ls(f, a, s) - closed).norm() ==
              doctest::Approx(0.0).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("power coefficient spot values") {
  CHECK(lambda_ls_coefficient(3, 1, 1, 1) == doctest::Approx(2.0));
  CHECK(lambda_ls_coefficient(3, 1, 2, 2) == doctest::Approx(4.0));
  CHECK(lambda_ls_coefficient(2, 1, 1, 1) == doctest::Approx(1.0));
  CHECK(lambda_ls_coefficient(4, 0, 1, 1) == doctest::Approx(4.0));
  CHECK(lambda_ls_coefficient(3, 1, 3, 2) == 0.0);  // one extra trace annihilates
}

TEST_CASE("lefschetz decomposition roundtrips with primitive components") {
  std::mt19937_64 rng(23);
  for (int m = 1; m <= 4; ++m) {
    const KaehlerFrame f(m);
    const int n = f.dim();
    for (int p = 0; p <= m; ++p) {
      const AlternatingForm a = random_form(n, p, rng);
      const LefschetzDecomposition dec = lefschetz_decompose(f, a);
      CHECK((lefschetz_reassemble(f, dec) - a).norm() ==
            doctest::Approx(0.0).epsilon(1e-11));
      for (const AlternatingForm& ui : dec.primitive)
        CHECK(lefschetz_Lambda(f, ui).norm() ==
              doctest::Approx(0.0).epsilon(1e-11));
    }
  }
}

TEST_CASE("level eigenvalues on a dim-four two-form") {
  const KaehlerFrame f(2);
  const AlternatingForm e01 = AlternatingForm::basis(4, 0b0011);
  const auto pairs = lambda_l_eigencheck(f, e01);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].level == 0);
  CHECK(pairs[0].eigenvalue == doctest::Approx(0.0));
  CHECK(pairs[1].level == 1);
  CHECK(pairs[1].eigenvalue == doctest::Approx(2.0));
  for (const auto& pr : pairs) CHECK(pr.residual < 1e-12);
}
