// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ckforms/alt_form.hpp"
#include "ckforms/jets.hpp"
#include "ckforms/kaehler.hpp"

namespace ckforms {

// Riemannian curvature viewed as a symmetric operator on Lambda^2, stored as a
// dense matrix over the orthonormal bivector basis {e_i ^ e_j : i < j}.  The
// sign convention is fixed so that column (i,j) expands <R(e_i,e_j)e_k, e_l>
// over rows (k,l); with it the diagonal carries minus the sectional curvature
// and the induced Weitzenboeck term acts on 1-forms as the Ricci endomorphism.
class CurvatureOperator {
 public:
  // Curvature of complex projective space with the Fubini-Study metric
  // normalized to holomorphic sectional curvature 4 (Ric = 2(m+1) id),
  // assembled in a J-adapted orthonormal frame.
  static CurvatureOperator complex_projective(int m);

  static CurvatureOperator flat(int n);

  // Validates symmetry and the first Bianchi identity before accepting.
  static CurvatureOperator from_matrix(int n, Eigen::MatrixXd mat);

  int dim() const { return n_; }
  const std::vector<Mask>& bivector_basis() const { return basis_; }
  const Eigen::MatrixXd& matrix() const { return mat_; }

  int basis_index(Mask pair) const;

  // Column (i,j) as a 2-form.
  AlternatingForm curvature_of(int i, int j) const;

  // R applied to an arbitrary 2-form through the stored matrix.
  AlternatingForm curvature_of(const AlternatingForm& b) const;

  double sectional(int i, int j) const;

  // The Weitzenboeck curvature term: sum over i<j of the bivector action of
  // e_i^e_j composed with the bivector action of R(e_i^e_j).
  AlternatingForm apply(const AlternatingForm& a) const;

 private:
  CurvatureOperator(int n, Eigen::MatrixXd mat);
  void validate() const;
  double riemann(int i, int j, int k, int l) const;

  int n_ = 0;
  std::vector<Mask> basis_;
  Eigen::MatrixXd mat_;
};

// Derivation-style action of the bivector X^Y on forms:
//   Y ^ (X -| a) - X ^ (Y -| a)
// extended bilinearly over a general 2-form in the first slot.
AlternatingForm bivector_action(int i, int j, const AlternatingForm& a);
AlternatingForm bivector_action(const AlternatingForm& b, const AlternatingForm& a);

// Raw double sum  sum_{i != j} e_j ^ (e_i -| (R(e_i^e_j) . a)), kept as an
// independently coded oracle for CurvatureOperator::apply.
AlternatingForm curvature_action_double_sum(const CurvatureOperator& r,
                                            const AlternatingForm& a);

// Same contraction over an arbitrary orthonormal basis of Lambda^2, supplied
// as 2-forms.  Exercises basis independence of the Weitzenboeck term.
AlternatingForm curvature_action_in_basis(const CurvatureOperator& r,
                                          const std::vector<AlternatingForm>& basis,
                                          const AlternatingForm& a);

// Random orthonormal basis of Lambda^2 for the basis-independence check.
std::vector<AlternatingForm> random_bivector_basis(int n, std::mt19937_64& rng);

// Defect of  q(R) psi = p/(p+1) delta d psi + (n-p)/(n-p+1) d delta psi,
// the pointwise condition satisfied by twistor form jets.
double integrability_residual(const CurvatureOperator& r, const CovariantJet& j);

// Defect of the Weitzenboeck formula  delta d + d delta = nabla*nabla + q(R).
double weitzenboeck_residual(const CurvatureOperator& r, const CovariantJet& j);

// Defect of  Delta u = (m+1)/m q(R) u  for middle-degree forms (degree m on a
// 2m-dimensional space).
double middim_characterization_residual(const CurvatureOperator& r,
                                        const CovariantJet& j, int m);

}  // namespace ckforms
