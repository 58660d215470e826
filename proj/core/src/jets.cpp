// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckforms/jets.hpp"

#include <cmath>

namespace ckforms {

namespace {

double joint_norm(const std::vector<AlternatingForm>& parts) {
  double s = 0.0;
  for (const auto& a : parts) {
    const double n = a.norm();
    s += n * n;
  }
  return std::sqrt(s);
}

Covector basis_cov(int dim, int i) { return AlternatingForm::covector_basis(dim, i); }

}  // namespace

CovariantJet CovariantJet::parallel(const AlternatingForm& value) {
  CovariantJet j;
  j.value = value;
  j.grad.assign(value.dim(), AlternatingForm::zero(value.dim(), value.degree()));
  return j;
}

double CovariantJet::grad_norm() const { return joint_norm(grad); }

void CovariantJet::check_shape() const {
  if (int(grad.size()) != dim()) throw std::invalid_argument("jet gradient arity mismatch");
  for (const auto& g : grad) {
    if (g.dim() != dim() || g.degree() != degree())
      throw std::invalid_argument("jet gradient shape mismatch");
  }
  if (!hess.empty()) {
    if (int(hess.size()) != dim()) throw std::invalid_argument("jet hessian arity mismatch");
    for (const auto& row : hess) {
      if (int(row.size()) != dim()) throw std::invalid_argument("jet hessian arity mismatch");
      for (const auto& h : row) {
        if (h.dim() != dim() || h.degree() != degree())
          throw std::invalid_argument("jet hessian shape mismatch");
      }
    }
  }
}

CovariantJet random_jet(int dim, int degree, std::mt19937_64& rng) {
  CovariantJet j;
  j.value = random_form(dim, degree, rng);
  j.grad.reserve(dim);
  for (int a = 0; a < dim; ++a) j.grad.push_back(random_form(dim, degree, rng));
  return j;
}

AlternatingForm d_from_jet(const CovariantJet& j) {
  j.check_shape();
  AlternatingForm out = AlternatingForm::zero(j.dim(), j.degree() + 1);
  for (int a = 0; a < j.dim(); ++a) out += wedge(basis_cov(j.dim(), a), j.grad[a]);
  return out;
}

AlternatingForm delta_from_jet(const CovariantJet& j) {
  j.check_shape();
  const int deg = j.degree() > 0 ? j.degree() - 1 : 0;
  AlternatingForm out = AlternatingForm::zero(j.dim(), deg);
  if (j.degree() == 0) return out;
  for (int a = 0; a < j.dim(); ++a) out -= contract_dir(a, j.grad[a]);
  return out;
}

AlternatingForm dc_from_jet(const KaehlerFrame& f, const CovariantJet& j) {
  j.check_shape();
  if (j.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  AlternatingForm out = AlternatingForm::zero(j.dim(), j.degree() + 1);
  for (int a = 0; a < j.dim(); ++a) {
    auto [ja, sign] = f.j_index(a);
    out += wedge(AlternatingForm::covector_basis(j.dim(), ja, double(sign)), j.grad[a]);
  }
  return out;
}

AlternatingForm deltac_from_jet(const KaehlerFrame& f, const CovariantJet& j) {
  j.check_shape();
  if (j.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  const int deg = j.degree() > 0 ? j.degree() - 1 : 0;
  AlternatingForm out = AlternatingForm::zero(j.dim(), deg);
  if (j.degree() == 0) return out;
  for (int a = 0; a < j.dim(); ++a) {
    auto [ja, sign] = f.j_index(a);
    out -= double(sign) * contract_dir(ja, j.grad[a]);
  }
  return out;
}

AlternatingForm delta_d_from_jet(const CovariantJet& j) {
  j.check_shape();
  if (!j.has_hess()) throw std::invalid_argument("hessian required");
  AlternatingForm out = AlternatingForm::zero(j.dim(), j.degree());
  for (int a = 0; a < j.dim(); ++a) {
    for (int b = 0; b < j.dim(); ++b) {
      out -= contract_dir(a, wedge(basis_cov(j.dim(), b), j.hess[a][b]));
    }
  }
  return out;
}

AlternatingForm d_delta_from_jet(const CovariantJet& j) {
  j.check_shape();
  if (!j.has_hess()) throw std::invalid_argument("hessian required");
  AlternatingForm out = AlternatingForm::zero(j.dim(), j.degree());
  if (j.degree() == 0) return out;
  for (int a = 0; a < j.dim(); ++a) {
    for (int b = 0; b < j.dim(); ++b) {
      out -= wedge(basis_cov(j.dim(), a), contract_dir(b, j.hess[a][b]));
    }
  }
  return out;
}

AlternatingForm laplacian_from_jet(const CovariantJet& j) {
  return delta_d_from_jet(j) + d_delta_from_jet(j);
}

AlternatingForm rough_laplacian_from_jet(const CovariantJet& j) {
  j.check_shape();
  if (!j.has_hess()) throw std::invalid_argument("hessian required");
  AlternatingForm out = AlternatingForm::zero(j.dim(), j.degree());
  for (int a = 0; a < j.dim(); ++a) out -= j.hess[a][a];
  return out;
}

TwistorSplit twistor_split(const CovariantJet& j) {
  j.check_shape();
  TwistorSplit s;
  s.d_part = d_from_jet(j);
  s.delta_part = delta_from_jet(j);
  const int n = j.dim();
  const int p = j.degree();
  const double cd = 1.0 / double(p + 1);
  const double cdelta = 1.0 / double(n - p + 1);
  s.twistor_part.reserve(n);
  for (int a = 0; a < n; ++a) {
    AlternatingForm t = j.grad[a];
    t -= cd * contract_dir(a, s.d_part);
    if (p > 0) t += cdelta * wedge(basis_cov(n, a), s.delta_part);
    s.twistor_part.push_back(t);
  }
  return s;
}

double twistor_residual(const CovariantJet& j) {
  TwistorSplit s = twistor_split(j);
  return relative_residual(joint_norm(s.twistor_part), j.grad_norm());
}

CovariantJet hodge_dual_jet(const CovariantJet& j) {
  j.check_shape();
  CovariantJet out;
  out.value = hodge_star(j.value);
  out.grad.reserve(j.dim());
  for (const auto& g : j.grad) out.grad.push_back(hodge_star(g));
  if (j.has_hess()) {
    out.hess.resize(j.dim());
    for (int a = 0; a < j.dim(); ++a) {
      out.hess[a].reserve(j.dim());
      for (int b = 0; b < j.dim(); ++b) out.hess[a].push_back(hodge_star(j.hess[a][b]));
    }
  }
  return out;
}

namespace {

// Shared defect for the structured gradient shapes
// nabla_X u = c1 gamma ^ JX - J gamma ^ X - c2 gamma(X) omega, plus optional
// primitivity penalty |Lambda u| and type penalty |J^2 u + s^2 u|.
double structured_gradient_residual(const KaehlerFrame& f, const CovariantJet& j,
                                    const Covector& gamma, double c_wedge_j,
                                    double c_jwedge, double c_trace, int type_s,
                                    bool penalize) {
  const int n = f.dim();
  const AlternatingForm omega = f.omega();
  const Covector jgamma = j_covector(f, gamma);
  std::vector<AlternatingForm> defect;
  defect.reserve(n);
  for (int a = 0; a < n; ++a) {
    auto [ja, jsign] = f.j_index(a);
    AlternatingForm rhs =
        wedge(gamma, AlternatingForm::covector_basis(n, ja, double(jsign) * c_wedge_j));
    rhs -= c_jwedge * wedge(jgamma, basis_cov(n, a));
    rhs -= (c_trace * gamma.coeff(Mask(1) << a)) * omega;
    defect.push_back(j.grad[a] - rhs);
  }
  double r = relative_residual(joint_norm(defect), j.grad_norm());
  if (penalize) {
    const double vnorm = j.value.norm();
    const AlternatingForm trace = lefschetz_Lambda(f, j.value);
    r += relative_residual(trace.norm(), vnorm);
    AlternatingForm off_type = j_extension(f, j_extension(f, j.value));
    off_type += double(type_s) * double(type_s) * j.value;
    r += relative_residual(off_type.norm(), vnorm);
  }
  return r;
}

}  // namespace

double special2_residual(const KaehlerFrame& f, const CovariantJet& j) {
  if (j.degree() != 2) throw std::invalid_argument("special2_residual expects a 2-form jet");
  if (j.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  if (f.m < 2) throw std::invalid_argument("complex dimension must be at least 2");
  const double mm = double(f.m);
  const Covector gamma = (mm / (2.0 * (mm * mm - 1.0))) * deltac_from_jet(f, j);
  return structured_gradient_residual(f, j, gamma, 1.0, 1.0, 2.0 / mm, 0, true);
}

double specialm_residual(const KaehlerFrame& f, const CovariantJet& j) {
  if (j.degree() != f.m) throw std::invalid_argument("specialm_residual expects a degree-m jet");
  if (j.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  if (f.m < 2) throw std::invalid_argument("complex dimension must be at least 2");
  const double mm = double(f.m);
  const Covector tau = (1.0 / (mm * mm - 1.0)) * deltac_from_jet(f, j);
  return structured_gradient_residual(f, j, tau, mm - 1.0, 1.0, mm - 1.0, f.m - 2, true);
}

double hamiltonian_residual(const KaehlerFrame& f, const CovariantJet& j,
                            const Covector& sigma_grad) {
  if (j.degree() != 2) throw std::invalid_argument("hamiltonian_residual expects a 2-form jet");
  if (j.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  const int n = f.dim();
  const Covector jds = j_covector(f, sigma_grad);
  std::vector<AlternatingForm> defect;
  defect.reserve(n);
  for (int a = 0; a < n; ++a) {
    auto [ja, jsign] = f.j_index(a);
    AlternatingForm rhs =
        wedge(sigma_grad, AlternatingForm::covector_basis(n, ja, 0.5 * double(jsign)));
    rhs -= 0.5 * wedge(jds, basis_cov(n, a));
    defect.push_back(j.grad[a] - rhs);
  }
  return relative_residual(joint_norm(defect),
                           std::max(j.grad_norm(), sigma_grad.norm()));
}

Covector omega_trace_gradient(const KaehlerFrame& f, const CovariantJet& j) {
  const AlternatingForm omega = f.omega();
  Covector out = AlternatingForm::zero(f.dim(), 1);
  for (int a = 0; a < f.dim(); ++a) out.add_coeff(Mask(1) << a, inner(j.grad[a], omega));
  return out;
}

double twistor2_characterization_residual(const KaehlerFrame& f, const CovariantJet& j) {
  if (j.degree() != 2)
    throw std::invalid_argument("characterization expects a 2-form jet");
  if (j.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  const Covector gamma =
      (1.0 / double(2 * f.m - 1)) * j_covector(f, delta_from_jet(j));
  return structured_gradient_residual(f, j, gamma, 1.0, 1.0, 1.0, 0, false);
}

AlternatingForm build_structure_form(const KaehlerFrame& f, const AlternatingForm& phi,
                                     double fval, int k) {
  if (phi.degree() != 2) throw std::invalid_argument("structure form expects a 2-form");
  if (phi.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  if (f.m == 1) throw std::invalid_argument("degenerate complex dimension");
  const int p = 2 * k;
  if (k < 1 || p > f.dim() - 2) throw std::invalid_argument("level out of range");
  const double mm = double(f.m);
  AlternatingForm u = phi;
  for (int t = 1; t < k; ++t) u = lefschetz_L(f, u);
  AlternatingForm lk = AlternatingForm::constant(f.dim(), 1.0);
  for (int t = 0; t < k; ++t) lk = lefschetz_L(f, lk);
  const double c = double(f.m - p) / (double(p) * (mm * mm - 1.0));
  u -= (c * fval) * lk;
  return u;
}

AlternatingForm hamiltonian_twistor_convert(const KaehlerFrame& f, const AlternatingForm& a,
                                            ConvertDirection dir) {
  if (a.degree() != 2) throw std::invalid_argument("conversion expects a 2-form");
  if (a.dim() != f.dim()) throw std::invalid_argument("frame dimension mismatch");
  const AlternatingForm omega = f.omega();
  const double trace = inner(a, omega);
  if (dir == ConvertDirection::to_twistor) return a - (trace / 2.0) * omega;
  if (f.m <= 2)
    throw std::invalid_argument("to_hamiltonian requires complex dimension > 2");
  return a - (trace / double(f.m - 2)) * omega;
}

CovariantJet hamiltonian_twistor_convert(const KaehlerFrame& f, const CovariantJet& j,
                                         ConvertDirection dir) {
  if (j.degree() != 2) throw std::invalid_argument("conversion expects a 2-form jet");
  const AlternatingForm omega = f.omega();
  const double c =
      dir == ConvertDirection::to_twistor ? 0.5 : 1.0 / double(f.m - 2);
  if (dir == ConvertDirection::to_hamiltonian && f.m <= 2)
    throw std::invalid_argument("to_hamiltonian requires complex dimension > 2");
  CovariantJet out;
  out.value = hamiltonian_twistor_convert(f, j.value, dir);
  out.grad.reserve(j.dim());
  for (const auto& g : j.grad) out.grad.push_back(g - (c * inner(g, omega)) * omega);
  return out;
}

double dim4_hamiltonian_condition(const KaehlerFrame& f, const CovariantJet& j,
                                  const Covector& df) {
  if (f.m != 2) throw std::invalid_argument("four-dimensional check requires m = 2");
  if (j.degree() != 2) throw std::invalid_argument("expected a 2-form jet");
  const Covector delta_u0 = delta_from_jet(j);
  const Covector defect = delta_u0 + 3.0 * j_covector(f, df);
  return relative_residual(defect.norm(), std::max(delta_u0.norm(), df.norm()));
}

bool middim_split_check(const KaehlerFrame& f, const std::vector<CovariantJet>& jets,
                        double tol) {
  if (jets.empty()) throw std::invalid_argument("empty jet family");
  for (const auto& j : jets) {
    if (j.degree() != f.m || j.dim() != f.dim())
      throw std::invalid_argument("split check requires degree-m jets");
  }
  CovariantJet sum = jets.front();
  for (std::size_t i = 1; i < jets.size(); ++i) {
    sum.value += jets[i].value;
    for (int a = 0; a < sum.dim(); ++a) sum.grad[a] += jets[i].grad[a];
  }
  bool all_components = true;
  for (const auto& j : jets) all_components = all_components && twistor_residual(j) < tol;
  const bool sum_ok = twistor_residual(sum) < tol;
  return sum_ok == all_components;
}

}  // namespace ckforms
