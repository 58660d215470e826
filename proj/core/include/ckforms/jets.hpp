// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pointwise covariant jets (value, frame gradient, optional frame hessian)
// and the conformal Killing / twistor algebra built on them. All residuals
// are relative: defect norm over the larger competing norm, with 0/0 -> 0.

#pragma once

#include <optional>
#include <vector>

#include "ckforms/alt_form.hpp"
#include "ckforms/kaehler.hpp"

namespace ckforms {

struct CovariantJet {
  AlternatingForm value;
  std::vector<AlternatingForm> grad;              // grad[a] = (nabla_{E_a} u)
  std::vector<std::vector<AlternatingForm>> hess;  // hess[a][b] = (nabla^2 u)_{a,b}

  bool has_hess() const { return !hess.empty(); }
  int dim() const { return value.dim(); }
  int degree() const { return value.degree(); }

  static CovariantJet parallel(const AlternatingForm& value);

  double grad_norm() const;
  void check_shape() const;
};

CovariantJet random_jet(int dim, int degree, std::mt19937_64& rng);

// d and delta read off a first-order jet.
AlternatingForm d_from_jet(const CovariantJet& j);
AlternatingForm delta_from_jet(const CovariantJet& j);

// Twisted differentials d^c = sum J(e_a) ^ nabla_a, delta^c = -sum J(e_a) -| nabla_a.
AlternatingForm dc_from_jet(const KaehlerFrame& f, const CovariantJet& j);
AlternatingForm deltac_from_jet(const KaehlerFrame& f, const CovariantJet& j);

// Second-order combinations (hessian required).
AlternatingForm delta_d_from_jet(const CovariantJet& j);
AlternatingForm d_delta_from_jet(const CovariantJet& j);
AlternatingForm laplacian_from_jet(const CovariantJet& j);        // delta d + d delta
AlternatingForm rough_laplacian_from_jet(const CovariantJet& j);  // nabla* nabla

// nabla u = (X -| du)/(p+1) - (X ^ delta u)/(n-p+1) + T(X), the pointwise
// orthogonal split of the gradient.
struct TwistorSplit {
  AlternatingForm d_part;      // du
  AlternatingForm delta_part;  // delta u
  std::vector<AlternatingForm> twistor_part;
};

TwistorSplit twistor_split(const CovariantJet& j);

// |T| / |grad|, 0/0 -> 0. Zero exactly on conformal Killing (twistor) jets.
double twistor_residual(const CovariantJet& j);

// Star applied through value, gradient and hessian; twistor_residual is
// invariant under this map.
CovariantJet hodge_dual_jet(const CovariantJet& j);

// Defect of nabla_X phi = gamma ^ JX - J gamma ^ X - (2/m) gamma(X) omega with
// gamma = m/(2(m^2-1)) delta^c phi, plus primitivity and (1,1)-type penalties.
double special2_residual(const KaehlerFrame& f, const CovariantJet& j);

// Degree-m analogue: nabla_X psi = (m-1) tau ^ JX - J tau ^ X - (m-1) tau(X) omega
// with tau = delta^c psi/(m^2-1); same penalty structure. Coincides with
// special2_residual when m = 2.
double specialm_residual(const KaehlerFrame& f, const CovariantJet& j);

// Defect of nabla_X psi = (d sigma ^ JX - J d sigma ^ X)/2 for a given d sigma.
double hamiltonian_residual(const KaehlerFrame& f, const CovariantJet& j,
                            const Covector& sigma_grad);

// d<u, omega> read off the jet: a |-> <nabla_a u, omega>.
Covector omega_trace_gradient(const KaehlerFrame& f, const CovariantJet& j);

// Defect of the closed-form gradient shape of a twistor 2-form:
// nabla_X u = gamma ^ JX - J gamma ^ X - gamma(X) omega, gamma = J(delta u)/(2m-1).
double twistor2_characterization_residual(const KaehlerFrame& f, const CovariantJet& j);

// u = L^(k-1) phi - (m-p)/(p(m^2-1)) fval L^k 1 with p = 2k, for a primitive
// (1,1) 2-form phi and scalar trace value fval.
AlternatingForm build_structure_form(const KaehlerFrame& f, const AlternatingForm& phi,
                                     double fval, int k);

enum class ConvertDirection { to_twistor, to_hamiltonian };

// Trace shifts u = psi - <psi,omega>/2 omega and psi = u - <u,omega>/(m-2) omega
// (the latter requires m > 2).
AlternatingForm hamiltonian_twistor_convert(const KaehlerFrame& f, const AlternatingForm& a,
                                            ConvertDirection dir);
CovariantJet hamiltonian_twistor_convert(const KaehlerFrame& f, const CovariantJet& j,
                                         ConvertDirection dir);

// Four-dimensional link: for an anti-self-dual twistor 2-form jet u_0,
// u_0 + f omega is Hamiltonian exactly when delta u_0 = -3 J df. Returns
// |delta u_0 + 3 J df| / max(|delta u_0|, |df|).
double dim4_hamiltonian_condition(const KaehlerFrame& f, const CovariantJet& j,
                                  const Covector& df);

// For a parallel-decomposition family of degree-m jets: true iff the sum's
// twistor residual is < tol exactly when every component's is.
bool middim_split_check(const KaehlerFrame& f, const std::vector<CovariantJet>& jets,
                        double tol = 1e-10);

}  // namespace ckforms
