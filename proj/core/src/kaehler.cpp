// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckforms/kaehler.hpp"

#include <algorithm>
#include <cmath>

namespace ckforms {

AlternatingForm KaehlerFrame::omega() const {
  AlternatingForm w = AlternatingForm::zero(dim(), 2);
  for (int k = 0; k < m; ++k) {
    w.set_coeff((Mask(1) << (2 * k)) | (Mask(1) << (2 * k + 1)), 1.0);
  }
  return w;
}

AlternatingForm lefschetz_L(const KaehlerFrame& f, const AlternatingForm& a) {
  if (a.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  return wedge(f.omega(), a);
}

AlternatingForm lefschetz_Lambda(const KaehlerFrame& f, const AlternatingForm& a) {
  if (a.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  if (a.degree() < 2) return AlternatingForm::zero(a.dim(), 0);
  AlternatingForm out = AlternatingForm::zero(a.dim(), a.degree() - 2);
  for (int k = 0; k < f.m; ++k) {
    out += contract_dir(2 * k + 1, contract_dir(2 * k, a));
  }
  return out;
}

AlternatingForm j_extension(const KaehlerFrame& f, const AlternatingForm& a) {
  if (a.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  AlternatingForm out = AlternatingForm::zero(a.dim(), a.degree());
  if (a.degree() == 0) return out;
  for (int i = 0; i < f.dim(); ++i) {
    auto [ji, sign] = f.j_index(i);
    out += wedge(AlternatingForm::covector_basis(f.dim(), ji, double(sign)),
                 contract_dir(i, a));
  }
  return out;
}

Covector j_covector(const KaehlerFrame& f, const Covector& x) {
  if (x.degree() != 1) throw std::invalid_argument("expected a covector");
  Covector out = AlternatingForm::zero(x.dim(), 1);
  for (const auto& [m, v] : x.terms()) {
    int i = 0;
    while (!(m & (Mask(1) << i))) ++i;
    auto [ji, sign] = f.j_index(i);
    out.add_coeff(Mask(1) << ji, sign * v);
  }
  return out;
}

std::vector<int> admissible_types(int m, int degree) {
  std::vector<int> out;
  const int top = std::min(degree, 2 * m - degree);
  if (top < 0) return out;
  for (int s = top % 2 == degree % 2 ? top : top - 1; s >= 0; s -= 2) out.push_back(s);
  std::reverse(out.begin(), out.end());
  return out;
}

AlternatingForm type_project(const KaehlerFrame& f, const AlternatingForm& a, int s) {
  if (a.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  const std::vector<int> types = admissible_types(f.m, a.degree());
  if (std::find(types.begin(), types.end(), s) == types.end())
    return AlternatingForm::zero(a.dim(), a.degree());
  if (types.size() == 1) return a;

  // Lagrange polynomial in J^2 over the eigenvalue nodes {-t^2 : t admissible}.
  AlternatingForm acc = a;
  double denom = 1.0;
  const double node = -double(s) * double(s);
  for (int t : types) {
    if (t == s) continue;
    const double other = -double(t) * double(t);
    acc = j_extension(f, j_extension(f, acc)) - other * acc;
    denom *= node - other;
  }
  return (1.0 / denom) * acc;
}

LefschetzDecomposition lefschetz_decompose(const KaehlerFrame& f, const AlternatingForm& a) {
  if (a.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  if (a.degree() > f.m)
    throw std::invalid_argument("decomposition requires degree <= m; apply hodge_star first");
  LefschetzDecomposition d;
  d.base_degree = a.degree();
  d.primitive.assign(a.degree() / 2 + 1, AlternatingForm());

  // Peel from the top level down: Lambda^l kills every lower level and maps
  // L^l u_l to l! (m-p+2l)!/(m-p+l)! u_l for primitive u_l of degree p-2l.
  AlternatingForm rest = a;
  for (int l = a.degree() / 2; l >= 0; --l) {
    const int p_l = a.degree() - 2 * l;
    AlternatingForm top = rest;
    for (int r = 0; r < l; ++r) top = lefschetz_Lambda(f, top);
    const double c = lambda_ls_coefficient(f.m, p_l, l, l);
    if (c != 0.0) top *= 1.0 / c;
    d.primitive[l] = top;
    AlternatingForm lifted = top;
    for (int r = 0; r < l; ++r) lifted = lefschetz_L(f, lifted);
    rest -= lifted;
  }
  return d;
}

AlternatingForm lefschetz_reassemble(const KaehlerFrame& f, const LefschetzDecomposition& d) {
  AlternatingForm out = AlternatingForm::zero(f.dim(), d.base_degree);
  for (std::size_t l = 0; l < d.primitive.size(); ++l) {
    AlternatingForm lifted = d.primitive[l];
    for (std::size_t r = 0; r < l; ++r) lifted = lefschetz_L(f, lifted);
    out += lifted;
  }
  return out;
}

AlternatingForm commutator_Lambda_Ls(const KaehlerFrame& f, const AlternatingForm& a, int s) {
  if (s < 0) throw std::invalid_argument("negative power");
  AlternatingForm ls = a;
  for (int t = 0; t < s; ++t) ls = lefschetz_L(f, ls);
  AlternatingForm lhs = lefschetz_Lambda(f, ls);
  AlternatingForm rhs = lefschetz_Lambda(f, a);
  for (int t = 0; t < s; ++t) rhs = lefschetz_L(f, rhs);
  // Lambda clamps inputs of degree < 2 to an empty 0-form, so one branch can
  // come back with a drifted formal degree; re-shape empty branches onto the
  // common target degree before subtracting.
  const int target = std::max(a.degree() + 2 * s - 2, 0);
  if (lhs.degree() != target && lhs.is_zero()) lhs = AlternatingForm::zero(a.dim(), target);
  if (rhs.degree() != target && rhs.is_zero()) rhs = AlternatingForm::zero(a.dim(), target);
  return lhs - rhs;
}

double lambda_ls_coefficient(int m, int p, int r, int s) {
  if (r < 0 || s < 0) throw std::invalid_argument("negative power");
  if (r > s) return 0.0;
  double c = 1.0;
  for (int t = s - r + 1; t <= s; ++t) c *= double(t);
  for (int t = 1; t <= r; ++t) c *= double(m - p - s + t);
  return c;
}

std::vector<LambdaLEigenpair> lambda_l_eigencheck(const KaehlerFrame& f, const AlternatingForm& a) {
  const int p = a.degree();
  LefschetzDecomposition d = lefschetz_decompose(f, a);
  std::vector<LambdaLEigenpair> out;
  for (std::size_t l = 0; l < d.primitive.size(); ++l) {
    if (d.primitive[l].is_zero()) continue;
    AlternatingForm level = d.primitive[l];
    for (std::size_t r = 0; r < l; ++r) level = lefschetz_L(f, level);
    LambdaLEigenpair e;
    e.level = int(l);
    e.eigenvalue = double(l + 1) * double(f.m - p + int(l));
    AlternatingForm defect =
        lefschetz_Lambda(f, lefschetz_L(f, level)) - e.eigenvalue * level;
    e.residual = relative_residual(defect.norm(), level.norm());
    out.push_back(e);
  }
  return out;
}

}  // namespace ckforms
