// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "ckforms/jets.hpp"
#include "ckforms/kaehler.hpp"

using namespace ckforms;

namespace {

// Gradient with the closed-form twistor two-form shape for a chosen covector.
CovariantJet shape_jet(const KaehlerFrame& f, const Covector& gamma, std::mt19937_64& rng) {
  const int n = f.dim();
  const Covector jgamma = j_covector(f, gamma);
  const AlternatingForm om = f.omega();
  CovariantJet j;
  j.value = random_form(n, 2, rng);
  j.grad.resize(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto [ji, js] = f.j_index(a);
    AlternatingForm g =
        wedge(gamma, AlternatingForm::covector_basis(n, ji, static_cast<double>(js)));
    g -= wedge(jgamma, AlternatingForm::covector_basis(n, a));
    g -= gamma.coeff(Mask(1) << a) * om;
    j.grad[a] = g;
  }
  return j;
}

}  // namespace

TEST_CASE("parallel jets have no derivatives and zero twistor residual") {
  std::mt19937_64 rng(3);
  const CovariantJet j = CovariantJet::parallel(random_form(6, 2, rng));
  CHECK(d_from_jet(j).is_zero());
  CHECK(delta_from_jet(j).is_zero());
  CHECK(twistor_residual(j) == 0.0);
}

TEST_CASE("exterior derivative and codifferential from explicit gradients") {
  const int n = 4;
  CovariantJet j;
  j.value = AlternatingForm::zero(n, 1);
  j.grad.assign(4, AlternatingForm::zero(n, 1));
  // nabla_0 u = e1 and nabla_2 u = e3: du = e0^e1 + e2^e3, delta u = 0.
  j.grad[0] = AlternatingForm::covector_basis(n, 1);
  j.grad[2] = AlternatingForm::covector_basis(n, 3);
  const AlternatingForm du = d_from_jet(j);
  CHECK(du.coeff(0b0011) == 1.0);
  CHECK(du.coeff(0b1100) == 1.0);
  CHECK(delta_from_jet(j).is_zero());
  // nabla_1 u = e1 contributes to the divergence instead.
  j.grad[1] = AlternatingForm::covector_basis(n, 1);
  CHECK(delta_from_jet(j).coeff(0) == -1.0);
}

TEST_CASE("complex differentials agree with the J-rotated real ones on scalars") {
  std::mt19937_64 rng(5);
  const KaehlerFrame f(3);
  CovariantJet j;
  j.value = AlternatingForm::constant(6, 0.7);
  j.grad.clear();
  for (int a = 0; a < 6; ++a)
    j.grad.push_back(random_form(6, 0, rng));
  const AlternatingForm df = d_from_jet(j);
  CHECK((dc_from_jet(f, j) - j_covector(f, df)).norm() ==
        doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("twistor split reassembles the gradient exactly") {
  std::mt19937_64 rng(9);
  for (int n = 4; n <= 8; n += 2) {
    for (int p = 1; p <= n - 1; ++p) {
      const CovariantJet j = random_jet(n, p, rng);
      const TwistorSplit ts = twistor_split(j);
      for (int a = 0; a < n; ++a) {
        AlternatingForm recon = (1.0 / (p + 1)) * contract_dir(a, ts.d_part);
        recon -= (1.0 / (n - p + 1)) *
                 wedge(AlternatingForm::covector_basis(n, a), ts.delta_part);
        recon += ts.twistor_part[static_cast<std::size_t>(a)];
        CHECK((recon - j.grad[static_cast<std::size_t>(a)]).norm() ==
              doctest::Approx(0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("hodge dual preserves the twistor residual") {
  std::mt19937_64 rng(11);
  for (int n = 4; n <= 6; n += 2) {
    for (int p = 1; p <= n - 1; ++p) {
      const CovariantJet j = random_jet(n, p, rng);
      CHECK(twistor_residual(hodge_dual_jet(j)) ==
            doctest::Approx(twistor_residual(j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form shape jets solve the twistor equation") {
  std::mt19937_64 rng(13);
  for (int m = 2; m <= 4; ++m) {
    const KaehlerFrame f(m);
    const int n = f.dim();
    const Covector gamma = random_form(n, 1, rng);
    const CovariantJet j = shape_jet(f, gamma, rng);
    CHECK(twistor_residual(j) < 1e-13);
    CHECK(twistor2_characterization_residual(f, j) < 1e-13);
    // delta u = -(2m-1) J gamma drops straight out of the shape.
    const AlternatingForm expected = (-(2.0 * m - 1.0)) * j_covector(f, gamma);
    CHECK((delta_from_jet(j) - expected).norm() == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("generic jets are far from the twistor kernel") {
  std::mt19937_64 rng(17);
  for (int m = 2; m <= 4; ++m) {
    const CovariantJet j = random_jet(2 * m, 2, rng);
    CHECK(twistor_residual(j) > 1e-3);
    CHECK(twistor2_characterization_residual(KaehlerFrame(m), j) > 1e-3);
  }
}

TEST_CASE("four-dimensional link certificate on shape jets") {
  std::mt19937_64 rng(19);
  const KaehlerFrame f(2);
  const Covector gamma = random_form(4, 1, rng);
  const CovariantJet j = shape_jet(f, gamma, rng);
  // delta u = -3 J gamma here, so gamma itself plays the role of d(tau).
  CHECK(dim4_hamiltonian_condition(f, j, gamma) < 1e-13);
  CHECK(dim4_hamiltonian_condition(f, j, 2.0 * gamma) > 1e-2);
}

TEST_CASE("structure form trace coefficient at k = 1") {
  std::mt19937_64 rng(23);
  for (int m = 2; m <= 4; ++m) {
    const KaehlerFrame f(m);
    const int n = f.dim();
    AlternatingForm phi = random_form(n, 2, rng);
    const double fval = 0.8;
    const AlternatingForm u = build_structure_form(f, phi, fval, 1);
    const double c = (m - 2.0) / (2.0 * (m * m - 1.0));
    const AlternatingForm expected = phi - (c * fval) * f.omega();
    CHECK((u - expected).norm() == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("hamiltonian and twistor trace shifts invert each other") {
  std::mt19937_64 rng(29);
  const KaehlerFrame f(3);
  const AlternatingForm a = random_form(6, 2, rng);
  const AlternatingForm psi = hamiltonian_twistor_convert(f, a, ConvertDirection::to_hamiltonian);
  const AlternatingForm back = hamiltonian_twistor_convert(f, psi, ConvertDirection::to_twistor);
  CHECK((back - a).norm() == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("the two special-form functionals coincide in dim four") {
  std::mt19937_64 rng(31);
  const KaehlerFrame f(2);
  for (int t = 0; t < 5; ++t) {
    const CovariantJet j = random_jet(4, 2, rng);
    CHECK(special2_residual(f, j) == doctest::Approx(specialm_residual(f, j)).epsilon(1e-12));
  }
}

TEST_CASE("middle-dimension split classifier") {
  std::mt19937_64 rng(37);
  const KaehlerFrame f(2);
  const Covector gamma = random_form(4, 1, rng);
  const CovariantJet a = shape_jet(f, gamma, rng);
  const CovariantJet b = shape_jet(f, j_covector(f, gamma), rng);
  CHECK(middim_split_check(f, {a, b}));
  const CovariantJet r1 = random_jet(4, 2, rng);
  const CovariantJet r2 = random_jet(4, 2, rng);
  CHECK(middim_split_check(f, {r1, r2}));
}
