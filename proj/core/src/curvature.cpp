// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
#include "ckforms/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ckforms {
namespace {

std::vector<Mask> bivector_masks(int n) { return masks_of_degree(n, 2); }

}  // namespace

CurvatureOperator::CurvatureOperator(int n, Eigen::MatrixXd mat)
    : n_(n), basis_(bivector_masks(n)), mat_(std::move(mat)) {
  if (n_ < 2 || n_ > kMaxDim) throw std::invalid_argument("dimension out of range");
  const auto sz = static_cast<Eigen::Index>(basis_.size());
  if (mat_.rows() != sz || mat_.cols() != sz)
    throw std::invalid_argument("curvature matrix size mismatch");
  validate();
}

int CurvatureOperator::basis_index(Mask pair) const {
  const auto it = std::lower_bound(basis_.begin(), basis_.end(), pair);
  if (it == basis_.end() || *it != pair)
    throw std::invalid_argument("not a bivector basis mask");
  return static_cast<int>(it - basis_.begin());
}

double CurvatureOperator::riemann(int i, int j, int k, int l) const {
  if (i == j || k == l) return 0.0;
  double sign = 1.0;
  if (i > j) { std::swap(i, j); sign = -sign; }
  if (k > l) { std::swap(k, l); sign = -sign; }
  const int col = basis_index((Mask{1} << i) | (Mask{1} << j));
  const int row = basis_index((Mask{1} << k) | (Mask{1} << l));
  return sign * mat_(row, col);
}

void CurvatureOperator::validate() const {
  const double scale = std::max(mat_.cwiseAbs().maxCoeff(), 1.0);
  if ((mat_ - mat_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("curvature matrix is not symmetric");
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          const double cyc =
              riemann(i, j, k, l) + riemann(j, k, i, l) + riemann(k, i, j, l);
          if (std::abs(cyc) > 1e-10 * scale)
            throw std::invalid_argument("first Bianchi identity fails");
        }
}

CurvatureOperator CurvatureOperator::complex_projective(int m) {
  if (m < 1) throw std::invalid_argument("complex dimension must be positive");
  const KaehlerFrame frame{m};
  const int n = frame.dim();
  const AlternatingForm omega = frame.omega();
  const auto basis = bivector_masks(n);
  const auto sz = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(sz, sz);
  for (Eigen::Index c = 0; c < sz; ++c) {
    int idx[2], t = 0;
    for (int b = 0; b < n; ++b)
      if (basis[static_cast<std::size_t>(c)] & (Mask{1} << b)) idx[t++] = b;
    const int i = idx[0], j = idx[1];
    const auto [ji, si] = frame.j_index(i);
    const auto [jj, sj] = frame.j_index(j);
    // R(e_i ^ e_j) = -(e_i^e_j + Je_i^Je_j + 2 omega(e_i,e_j) omega).
    AlternatingForm col = AlternatingForm::basis(n, (Mask{1} << i) | (Mask{1} << j));
    if (ji != jj) {
      AlternatingForm jpart =
          (si * sj) * wedge(AlternatingForm::covector_basis(n, ji),
                            AlternatingForm::covector_basis(n, jj));
      col += jpart;
    }
    const double om = (ji == j) ? si : 0.0;  // omega(e_i, e_j) = <Je_i, e_j>
    if (om != 0.0) col += (2.0 * om) * omega;
    col *= -1.0;
    for (const auto& [mask, v] : col.terms()) {
      const auto it = std::lower_bound(basis.begin(), basis.end(), mask);
      mat(static_cast<Eigen::Index>(it - basis.begin()), c) = v;
    }
  }
  return CurvatureOperator(n, std::move(mat));
}

CurvatureOperator CurvatureOperator::flat(int n) {
  const auto sz = static_cast<Eigen::Index>(bivector_masks(n).size());
  return CurvatureOperator(n, Eigen::MatrixXd::Zero(sz, sz));
}

CurvatureOperator CurvatureOperator::from_matrix(int n, Eigen::MatrixXd mat) {
  return CurvatureOperator(n, std::move(mat));
}

AlternatingForm CurvatureOperator::curvature_of(int i, int j) const {
  if (i == j) return AlternatingForm::zero(n_, 2);
  double sign = 1.0;
  if (i > j) { std::swap(i, j); sign = -sign; }
  const int col = basis_index((Mask{1} << i) | (Mask{1} << j));
  AlternatingForm out = AlternatingForm::zero(n_, 2);
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    const double v = mat_(static_cast<Eigen::Index>(r), col);
    if (v != 0.0) out.add_coeff(basis_[r], sign * v);
  }
  return out;
}

AlternatingForm CurvatureOperator::curvature_of(const AlternatingForm& b) const {
  if (b.dim() != n_ || b.degree() != 2)
    throw std::invalid_argument("curvature expects a 2-form");
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_.size()));
  for (const auto& [mask, v] : b.terms())
    coeffs(basis_index(mask)) = v;
  const Eigen::VectorXd image = mat_ * coeffs;
  AlternatingForm out = AlternatingForm::zero(n_, 2);
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    const double v = image(static_cast<Eigen::Index>(r));
    if (v != 0.0) out.add_coeff(basis_[r], v);
  }
  return out;
}

double CurvatureOperator::sectional(int i, int j) const {
  if (i == j) throw std::invalid_argument("sectional curvature needs a plane");
  return -riemann(i, j, i, j);
}

AlternatingForm bivector_action(int i, int j, const AlternatingForm& a) {
  // The derivation action vanishes on scalars; returning early keeps the
  // degree at 0 instead of the degree-1 shell the wedge would produce.
  if (a.degree() == 0) return AlternatingForm::zero(a.dim(), 0);
  AlternatingForm out =
      wedge(AlternatingForm::covector_basis(a.dim(), j), contract_dir(i, a));
  out -= wedge(AlternatingForm::covector_basis(a.dim(), i), contract_dir(j, a));
  return out;
}

AlternatingForm bivector_action(const AlternatingForm& b, const AlternatingForm& a) {
  if (b.degree() != 2) throw std::invalid_argument("bivector action expects a 2-form");
  if (b.dim() != a.dim()) throw std::invalid_argument("dimension mismatch");
  AlternatingForm out = AlternatingForm::zero(a.dim(), a.degree());
  for (const auto& [mask, v] : b.terms()) {
    int idx[2], t = 0;
    for (int bb = 0; bb < a.dim(); ++bb)
      if (mask & (Mask{1} << bb)) idx[t++] = bb;
    out += v * bivector_action(idx[0], idx[1], a);
  }
  return out;
}

AlternatingForm CurvatureOperator::apply(const AlternatingForm& a) const {
  if (a.dim() != n_) throw std::invalid_argument("dimension mismatch");
  AlternatingForm out = AlternatingForm::zero(n_, a.degree());
  for (std::size_t c = 0; c < basis_.size(); ++c) {
    int idx[2], t = 0;
    for (int b = 0; b < n_; ++b)
      if (basis_[c] & (Mask{1} << b)) idx[t++] = b;
    const AlternatingForm inner_part = bivector_action(curvature_of(idx[0], idx[1]), a);
    if (inner_part.terms().empty()) continue;
    out += bivector_action(idx[0], idx[1], inner_part);
  }
  return out;
}

AlternatingForm curvature_action_double_sum(const CurvatureOperator& r,
                                            const AlternatingForm& a) {
  const int n = r.dim();
  if (a.dim() != n) throw std::invalid_argument("dimension mismatch");
  AlternatingForm out = AlternatingForm::zero(n, a.degree());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const AlternatingForm rotated = bivector_action(r.curvature_of(i, j), a);
      if (rotated.terms().empty()) continue;
      out += wedge(AlternatingForm::covector_basis(n, j), contract_dir(i, rotated));
    }
  return out;
}

AlternatingForm curvature_action_in_basis(const CurvatureOperator& r,
                                          const std::vector<AlternatingForm>& basis,
                                          const AlternatingForm& a) {
  AlternatingForm out = AlternatingForm::zero(a.dim(), a.degree());
  for (const auto& b : basis) {
    const AlternatingForm inner_part = bivector_action(r.curvature_of(b), a);
    if (inner_part.terms().empty()) continue;
    out += bivector_action(b, inner_part);
  }
  return out;
}

std::vector<AlternatingForm> random_bivector_basis(int n, std::mt19937_64& rng) {
  const auto masks = bivector_masks(n);
  const auto sz = static_cast<Eigen::Index>(masks.size());
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd seed(sz, sz);
  for (Eigen::Index i = 0; i < sz; ++i)
    for (Eigen::Index j = 0; j < sz; ++j) seed(i, j) = gauss(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(seed).householderQ();
  std::vector<AlternatingForm> basis;
  basis.reserve(static_cast<std::size_t>(sz));
  for (Eigen::Index c = 0; c < sz; ++c) {
    AlternatingForm b = AlternatingForm::zero(n, 2);
    for (Eigen::Index rrow = 0; rrow < sz; ++rrow)
      b.add_coeff(masks[static_cast<std::size_t>(rrow)], q(rrow, c));
    basis.push_back(std::move(b));
  }
  return basis;
}

double integrability_residual(const CurvatureOperator& r, const CovariantJet& j) {
  if (!j.has_hess()) throw std::invalid_argument("integrability needs second derivatives");
  if (j.dim() != r.dim()) throw std::invalid_argument("dimension mismatch");
  const int n = j.dim();
  const int p = j.degree();
  const AlternatingForm lhs = r.apply(j.value);
  AlternatingForm rhs = (double(p) / double(p + 1)) * delta_d_from_jet(j);
  rhs += (double(n - p) / double(n - p + 1)) * d_delta_from_jet(j);
  return relative_residual(max_abs_diff(lhs, rhs),
                           std::max(lhs.max_abs(), rhs.max_abs()));
}

double weitzenboeck_residual(const CurvatureOperator& r, const CovariantJet& j) {
  if (!j.has_hess()) throw std::invalid_argument("Weitzenboeck needs second derivatives");
  if (j.dim() != r.dim()) throw std::invalid_argument("dimension mismatch");
  const AlternatingForm lhs = laplacian_from_jet(j);
  AlternatingForm rhs = rough_laplacian_from_jet(j);
  rhs += r.apply(j.value);
  return relative_residual(max_abs_diff(lhs, rhs),
                           std::max(lhs.max_abs(), rhs.max_abs()));
}

double middim_characterization_residual(const CurvatureOperator& r,
                                        const CovariantJet& j, int m) {
  if (!j.has_hess()) throw std::invalid_argument("characterization needs second derivatives");
  if (j.dim() != 2 * m || j.degree() != m)
    throw std::invalid_argument("characterization expects a middle-degree form");
  const AlternatingForm lhs = laplacian_from_jet(j);
  const AlternatingForm rhs = (double(m + 1) / double(m)) * r.apply(j.value);
  return relative_residual(max_abs_diff(lhs, rhs),
                           std::max(lhs.max_abs(), rhs.max_abs()));
}

}  // namespace ckforms
