// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
//
// Kaehler linear algebra on the model frame: J e_{2k+1} = e_{2k+2} (0-based:
// J e_{2k} = e_{2k+1}) and omega = sum_k e_{2k} ^ e_{2k+1}. See
// docs/conventions.md for the full sign sheet.

#pragma once

#include <vector>

#include "ckforms/alt_form.hpp"

namespace ckforms {

struct KaehlerFrame {
  int m = 0;  // complex dimension; real dimension is 2m

  explicit KaehlerFrame(int m_) : m(m_) {
    if (m < 1 || 2 * m > kMaxDim) throw std::invalid_argument("complex dimension out of range");
  }

  int dim() const { return 2 * m; }

  AlternatingForm omega() const;

  // J-image of the basis covector e_i: pair (index, sign).
  std::pair<int, int> j_index(int i) const {
    return (i % 2 == 0) ? std::make_pair(i + 1, 1) : std::make_pair(i - 1, -1);
  }
};

// L = omega ^ . ; degree rises by two.
AlternatingForm lefschetz_L(const KaehlerFrame& f, const AlternatingForm& a);

// Metric adjoint of L; degree drops by two (zero form below degree 2).
AlternatingForm lefschetz_Lambda(const KaehlerFrame& f, const AlternatingForm& a);

// Derivation extension J u = sum_i J(e_i) ^ (e_i -| u). Vanishes exactly on
// the J-invariant part of a 2-form.
AlternatingForm j_extension(const KaehlerFrame& f, const AlternatingForm& a);

// J on a covector without the derivation detour.
Covector j_covector(const KaehlerFrame& f, const Covector& x);

// Admissible |p'-q'| values for bidegree components of a degree-p form.
std::vector<int> admissible_types(int m, int degree);

// Projection onto the J^2 eigenspace with eigenvalue -s^2 (the |p'-q'| = s
// part), via Lagrange interpolation over the admissible spectrum.
// Inadmissible s gives the zero form.
AlternatingForm type_project(const KaehlerFrame& f, const AlternatingForm& a, int s);

struct LefschetzDecomposition {
  int base_degree = 0;                     // degree of the decomposed form
  std::vector<AlternatingForm> primitive;  // primitive part u_i at level i
};

// a = sum_i L^i u_i with every u_i primitive; requires degree <= m (apply
// hodge_star first for the upper half).
LefschetzDecomposition lefschetz_decompose(const KaehlerFrame& f, const AlternatingForm& a);

AlternatingForm lefschetz_reassemble(const KaehlerFrame& f, const LefschetzDecomposition& d);

// [Lambda, L^s] a computed by explicit operator composition.
AlternatingForm commutator_Lambda_Ls(const KaehlerFrame& f, const AlternatingForm& a, int s);

// Closed-form coefficient with Lambda^r L^s alpha = c * L^(s-r) alpha for
// primitive alpha of degree p: c = s!/(s-r)! * prod_{t=1..r} (m-p-s+t).
// r > s gives 0.
double lambda_ls_coefficient(int m, int p, int r, int s);

struct LambdaLEigenpair {
  int level = 0;
  double eigenvalue = 0.0;
  double residual = 0.0;
};

// For each nonzero Lefschetz level i of a, the eigenvalue (i+1)(m-p+i) of
// Lambda L on L^i(primitive) and the verification residual.
std::vector<LambdaLEigenpair> lambda_l_eigencheck(const KaehlerFrame& f, const AlternatingForm& a);

}  // namespace ckforms
