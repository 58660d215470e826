// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
#include "ckforms/chart.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ckforms {
namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr unsigned kPrimes[kMaxDim] = {2,  3,  5,  7,  11, 13, 17, 19,
                                       23, 29, 31, 37, 41, 43, 47, 53};

double halton(unsigned index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= double(base);
    r += f * double(index % base);
    index /= base;
  }
  return r;
}

struct Quadrature {
  std::vector<double> nodes, weights;  // on [0, 1]
};

// Gauss-Legendre nodes by Newton iteration from the Chebyshev guess.
const Quadrature& unit_quadrature() {
  static const Quadrature q = [] {
    constexpr int kN = 16;
    Quadrature out;
    for (int i = 0; i < kN; ++i) {
      double x = std::cos(kPi * (double(i) + 0.75) / (double(kN) + 0.5));
      double deriv = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kN; ++k) {
          const double pk = (double(2 * k - 1) * x * p1 - double(k - 1) * p0) / double(k);
          p0 = p1;
          p1 = pk;
        }
        deriv = double(kN) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / deriv;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      out.nodes.push_back(0.5 * (x + 1.0));
      out.weights.push_back(1.0 / ((1.0 - x * x) * deriv * deriv));
    }
    return out;
  }();
  return q;
}

void check_field(const ChartGeometry& g, const FormField& f) {
  if (!f.eval) throw std::invalid_argument("field has no evaluator");
  if (f.dim != g.dim()) throw std::invalid_argument("field/chart dimension mismatch");
}

AlternatingForm eval_field(const FormField& f, const Eigen::VectorXd& x) {
  AlternatingForm v = f.eval(x);
  if (v.dim() != f.dim || v.degree() != f.degree)
    throw std::runtime_error("field evaluation has wrong shape");
  for (const auto& [mask, c] : v.terms())
    if (!std::isfinite(c)) throw std::runtime_error("non-finite field value");
  return v;
}

void validate_step(double h) {
  if (!(h >= 1e-4 && h <= 1e-1))
    throw std::invalid_argument("finite-difference step out of range");
}

void validate_order(int order) {
  if (order != 2 && order != 4) throw std::invalid_argument("stencil order must be 2 or 4");
}

AlternatingForm fd_partial(const FormField& f, const Eigen::VectorXd& x, int k, double h,
                           int order) {
  Eigen::VectorXd y = x;
  if (order == 2) {
    y(k) = x(k) + h;
    AlternatingForm out = eval_field(f, y);
    y(k) = x(k) - h;
    out -= eval_field(f, y);
    out *= 1.0 / (2.0 * h);
    return out;
  }
  y(k) = x(k) + 2.0 * h;
  AlternatingForm out = (-1.0) * eval_field(f, y);
  y(k) = x(k) + h;
  out += 8.0 * eval_field(f, y);
  y(k) = x(k) - h;
  out -= 8.0 * eval_field(f, y);
  y(k) = x(k) - 2.0 * h;
  out += eval_field(f, y);
  out *= 1.0 / (12.0 * h);
  return out;
}

// Derivation extension of the covector substitution e^r -> sum_t M(t,r) e^t.
AlternatingForm derivation_substitute(const Eigen::MatrixXd& m, const AlternatingForm& a) {
  const int n = a.dim();
  AlternatingForm out = AlternatingForm::zero(n, a.degree());
  for (const auto& [mask, v] : a.terms()) {
    for (int r = 0; r < n; ++r) {
      const Mask bit = Mask{1} << r;
      if (!(mask & bit)) continue;
      const Mask rest = mask & ~bit;
      const double sgn = removal_sign(bit - 1, mask);
      AlternatingForm cov = AlternatingForm::zero(n, 1);
      for (int t = 0; t < n; ++t)
        if (m(t, r) != 0.0) cov.add_coeff(Mask{1} << t, m(t, r));
      out += (v * sgn) * wedge(cov, AlternatingForm::basis(n, rest));
    }
  }
  return out;
}

// Connection action on coordinate components in direction l: dx^r -> -Gamma^r_{lt} dx^t.
AlternatingForm gamma_action(const std::vector<Eigen::MatrixXd>& ch, int l,
                             const AlternatingForm& a) {
  const int n = a.dim();
  if (a.degree() == 0) return AlternatingForm::zero(n, 0);
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int t = 0; t < n; ++t) m(t, r) = -ch[static_cast<std::size_t>(r)](l, t);
  return derivation_substitute(m, a);
}

// All coordinate covariant derivatives (nabla_l f) at y.
std::vector<AlternatingForm> covariant_grads(const ChartGeometry& g, const FormField& f,
                                             const Eigen::VectorXd& y, double h, int order) {
  const int n = g.dim();
  const auto ch = g.christoffel(y);
  const AlternatingForm val = eval_field(f, y);
  std::vector<AlternatingForm> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    AlternatingForm gl = fd_partial(f, y, l, h, order);
    gl += gamma_action(ch, l, val);
    out.push_back(std::move(gl));
  }
  return out;
}

// ---- Fubini-Study chart ----

Eigen::MatrixXd realify(const Eigen::MatrixXcd& h) {
  const int m = static_cast<int>(h.rows());
  Eigen::MatrixXd g(2 * m, 2 * m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      const double re = h(j, k).real(), im = h(j, k).imag();
      g(2 * j, 2 * k) = re;
      g(2 * j, 2 * k + 1) = im;
      g(2 * j + 1, 2 * k) = -im;
      g(2 * j + 1, 2 * k + 1) = re;
    }
  return g;
}

Eigen::VectorXcd chart_z(int m, const Eigen::VectorXd& x) {
  Eigen::VectorXcd z(m);
  for (int j = 0; j < m; ++j) z(j) = std::complex<double>(x(2 * j), x(2 * j + 1));
  return z;
}

Eigen::MatrixXcd fs_hermitian(int m, const Eigen::VectorXd& x) {
  const Eigen::VectorXcd z = chart_z(m, x);
  const double s = z.squaredNorm();
  const double d = 1.0 + s;
  Eigen::MatrixXcd h = d * Eigen::MatrixXcd::Identity(m, m) - z.conjugate() * z.transpose();
  h /= d * d;
  return h;
}

// dh/dz_j, holomorphic part; the antiholomorphic one is its adjoint.
Eigen::MatrixXcd fs_dz(int m, const Eigen::VectorXd& x, int j) {
  const Eigen::VectorXcd z = chart_z(m, x);
  const double s = z.squaredNorm();
  const double d = 1.0 + s;
  const std::complex<double> zbj = std::conj(z(j));
  Eigen::MatrixXcd out = zbj * Eigen::MatrixXcd::Identity(m, m);
  out -= z.conjugate() * Eigen::MatrixXcd::Identity(m, m).row(j);
  out /= d * d;
  Eigen::MatrixXcd tail = d * Eigen::MatrixXcd::Identity(m, m) - z.conjugate() * z.transpose();
  out -= (2.0 * zbj / (d * d * d)) * tail;
  return out;
}

Eigen::MatrixXd standard_j(int m) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return j;
}

int bit_index(Mask m) { return std::countr_zero(m); }

}  // namespace

std::vector<Eigen::MatrixXd> ChartGeometry::christoffel(const Eigen::VectorXd& x) const {
  const int n = dim();
  const Eigen::MatrixXd gm = metric(x);
  const auto parts = metric_partials(x);
  const Eigen::MatrixXd ginv = gm.inverse();
  std::vector<Eigen::MatrixXd> ch(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Eigen::VectorXd lower(n);
      for (int l = 0; l < n; ++l)
        lower(l) = 0.5 * (parts[static_cast<std::size_t>(i)](l, j) +
                          parts[static_cast<std::size_t>(j)](l, i) -
                          parts[static_cast<std::size_t>(l)](i, j));
      const Eigen::VectorXd up = ginv * lower;
      for (int k = 0; k < n; ++k) {
        ch[static_cast<std::size_t>(k)](i, j) = up(k);
        ch[static_cast<std::size_t>(k)](j, i) = up(k);
      }
    }
  return ch;
}

ChartGeometry fubini_study(int m) {
  if (m < 1 || 2 * m > kMaxDim) throw std::invalid_argument("complex dimension out of range");
  ChartGeometry g;
  g.m = m;
  g.model = "fubini_study";
  g.metric = [m](const Eigen::VectorXd& x) { return realify(fs_hermitian(m, x)); };
  g.metric_partials = [m](const Eigen::VectorXd& x) {
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(2 * m));
    for (int j = 0; j < m; ++j) {
      const Eigen::MatrixXcd dj = fs_dz(m, x, j);
      const Eigen::MatrixXcd dja = dj.adjoint();
      out[static_cast<std::size_t>(2 * j)] = realify(dj + dja);
      out[static_cast<std::size_t>(2 * j + 1)] =
          realify(std::complex<double>(0.0, 1.0) * (dj - dja));
    }
    return out;
  };
  g.complex_structure = [m](const Eigen::VectorXd&) { return standard_j(m); };
  return g;
}

ChartGeometry flat_torus(int m) {
  if (m < 1 || 2 * m > kMaxDim) throw std::invalid_argument("complex dimension out of range");
  ChartGeometry g;
  g.m = m;
  g.model = "flat_torus";
  const int n = 2 * m;
  g.metric = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(n, n); };
  g.metric_partials = [n](const Eigen::VectorXd&) {
    return std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n),
                                        Eigen::MatrixXd::Zero(n, n));
  };
  g.complex_structure = [m](const Eigen::VectorXd&) { return standard_j(m); };
  return g;
}

ChartGeometry conformal_rescale(const ChartGeometry& g, const ScalarFn& lambda,
                                double fd_step) {
  validate_step(fd_step);
  if (!lambda) throw std::invalid_argument("conformal factor missing");
  ChartGeometry out;
  out.m = g.m;
  out.model = g.model + "+conformal";
  const auto base_metric = g.metric;
  const auto base_parts = g.metric_partials;
  out.metric = [base_metric, lambda](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(std::exp(2.0 * lambda(x)) * base_metric(x));
  };
  out.metric_partials = [base_metric, base_parts, lambda, fd_step](const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    const double e2 = std::exp(2.0 * lambda(x));
    const Eigen::MatrixXd gm = base_metric(x);
    auto parts = base_parts(x);
    Eigen::VectorXd y = x;
    for (int k = 0; k < n; ++k) {
      y(k) = x(k) + fd_step;
      double d1 = lambda(y);
      y(k) = x(k) - fd_step;
      d1 -= lambda(y);
      y(k) = x(k) + 2.0 * fd_step;
      double d2 = lambda(y);
      y(k) = x(k) - 2.0 * fd_step;
      d2 -= lambda(y);
      y(k) = x(k);
      const double dl = (8.0 * d1 - d2) / (12.0 * fd_step);
      parts[static_cast<std::size_t>(k)] =
          e2 * (2.0 * dl * gm + parts[static_cast<std::size_t>(k)]);
    }
    return parts;
  };
  out.complex_structure = g.complex_structure;
  return out;
}

SamplePlan SamplePlan::truncated(std::size_t count) const {
  SamplePlan out;
  out.h = h;
  out.order = order;
  out.points.assign(points.begin(),
                    points.begin() + static_cast<std::ptrdiff_t>(std::min(count, points.size())));
  return out;
}

SamplePlan make_sample_plan(int dim, int count, double radius, double h, int order,
                            unsigned seed_offset) {
  validate_step(h);
  validate_order(order);
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
  if (count < 1) throw std::invalid_argument("sample plan needs at least one point");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  SamplePlan plan;
  plan.h = h;
  plan.order = order;
  unsigned index = 1 + seed_offset;
  while (static_cast<int>(plan.points.size()) < count) {
    Eigen::VectorXd x(dim);
    for (int k = 0; k < dim; ++k)
      x(k) = 2.0 * halton(index, kPrimes[k]) - 1.0;
    ++index;
    if (x.norm() > 1.0) continue;
    plan.points.push_back(radius * x);
  }
  return plan;
}

Eigen::MatrixXd adapted_frame(const ChartGeometry& g, const Eigen::VectorXd& x) {
  const int n = g.dim();
  const Eigen::MatrixXd gm = g.metric(x);
  const Eigen::MatrixXd jm = g.complex_structure(x);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  int col = 0;
  for (int k = 0; k < n && col < n; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < col; ++c) v -= f.col(c).dot(gm * v) * f.col(c);
    const double nv = std::sqrt(v.dot(gm * v));
    if (nv < 1e-8) continue;
    v /= nv;
    f.col(col++) = v;
    // The partner J v is unit and orthogonal to the J-invariant span built so
    // far; keeping it verbatim makes the frame exactly J-adapted.
    f.col(col++) = jm * v;
  }
  if (col != n) throw std::runtime_error("frame construction failed");
  if (f.determinant() < 0.0) throw std::runtime_error("frame orientation flipped");
  return f;
}

AlternatingForm transform_form(const Eigen::MatrixXd& t, const AlternatingForm& a) {
  const int n = a.dim();
  if (t.rows() != n || t.cols() != n) throw std::invalid_argument("transform size mismatch");
  if (a.degree() == 0 || a.terms().empty()) return a;
  std::vector<AlternatingForm> img;
  img.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    AlternatingForm c = AlternatingForm::zero(n, 1);
    for (int l = 0; l < n; ++l)
      if (t(l, i) != 0.0) c.add_coeff(Mask{1} << l, t(l, i));
    img.push_back(std::move(c));
  }
  AlternatingForm out = AlternatingForm::zero(n, a.degree());
  for (const auto& [mask, v] : a.terms()) {
    AlternatingForm w = AlternatingForm::constant(n, v);
    for (int i = 0; i < n; ++i)
      if (mask & (Mask{1} << i)) w = wedge(w, img[static_cast<std::size_t>(i)]);
    out += w;
  }
  return out;
}

AlternatingForm to_frame(const Eigen::MatrixXd& frame, const AlternatingForm& a) {
  return transform_form(frame.transpose(), a);
}

AlternatingForm from_frame(const Eigen::MatrixXd& frame, const AlternatingForm& a) {
  return transform_form(frame.inverse().transpose(), a);
}

double frame_norm(const ChartGeometry& g, const Eigen::VectorXd& x,
                  const AlternatingForm& coord_form) {
  return to_frame(adapted_frame(g, x), coord_form).norm();
}

AlternatingForm kaehler_form_coords(const ChartGeometry& g, const Eigen::VectorXd& x) {
  const int n = g.dim();
  const Eigen::MatrixXd a = g.complex_structure(x).transpose() * g.metric(x);
  AlternatingForm out = AlternatingForm::zero(n, 2);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double v = 0.5 * (a(k, l) - a(l, k));
      if (v != 0.0) out.add_coeff((Mask{1} << k) | (Mask{1} << l), v);
    }
  return out;
}

CovariantJet covariant_jet(const ChartGeometry& g, const FormField& f,
                           const Eigen::VectorXd& x, const SamplePlan& plan,
                           bool with_hess) {
  check_field(g, f);
  validate_step(plan.h);
  validate_order(plan.order);
  if (x.size() != g.dim()) throw std::invalid_argument("point dimension mismatch");
  const int n = g.dim();
  const Eigen::MatrixXd frame = adapted_frame(g, x);
  CovariantJet jet;
  jet.value = to_frame(frame, eval_field(f, x));
  const auto grads = covariant_grads(g, f, x, plan.h, plan.order);
  jet.grad.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    AlternatingForm ga = AlternatingForm::zero(n, f.degree);
    for (int l = 0; l < n; ++l)
      if (frame(l, a) != 0.0) ga += frame(l, a) * grads[static_cast<std::size_t>(l)];
    jet.grad.push_back(to_frame(frame, ga));
  }
  if (with_hess) {
    const auto ch = g.christoffel(x);
    std::vector<std::vector<AlternatingForm>> dgrads(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      auto grads_at = [&](double off) {
        Eigen::VectorXd y = x;
        y(k) += off;
        return covariant_grads(g, f, y, plan.h, plan.order);
      };
      std::vector<AlternatingForm> acc;
      acc.reserve(static_cast<std::size_t>(n));
      if (plan.order == 2) {
        const auto hi = grads_at(plan.h), lo = grads_at(-plan.h);
        for (int l = 0; l < n; ++l) {
          AlternatingForm v = hi[static_cast<std::size_t>(l)];
          v -= lo[static_cast<std::size_t>(l)];
          v *= 1.0 / (2.0 * plan.h);
          acc.push_back(std::move(v));
        }
      } else {
        const auto p2 = grads_at(2.0 * plan.h), p1 = grads_at(plan.h);
        const auto m1 = grads_at(-plan.h), m2 = grads_at(-2.0 * plan.h);
        for (int l = 0; l < n; ++l) {
          AlternatingForm v = (-1.0) * p2[static_cast<std::size_t>(l)];
          v += 8.0 * p1[static_cast<std::size_t>(l)];
          v -= 8.0 * m1[static_cast<std::size_t>(l)];
          v += m2[static_cast<std::size_t>(l)];
          v *= 1.0 / (12.0 * plan.h);
          acc.push_back(std::move(v));
        }
      }
      dgrads[static_cast<std::size_t>(k)] = std::move(acc);
    }
    std::vector<std::vector<AlternatingForm>> hcoord(
        static_cast<std::size_t>(n),
        std::vector<AlternatingForm>(static_cast<std::size_t>(n),
                                     AlternatingForm::zero(n, f.degree)));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        AlternatingForm hkl = dgrads[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
        hkl += gamma_action(ch, k, grads[static_cast<std::size_t>(l)]);
        for (int t = 0; t < n; ++t) {
          const double c = ch[static_cast<std::size_t>(t)](k, l);
          if (c != 0.0) hkl -= c * grads[static_cast<std::size_t>(t)];
        }
        hcoord[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = std::move(hkl);
      }
    jet.hess.assign(static_cast<std::size_t>(n),
                    std::vector<AlternatingForm>(static_cast<std::size_t>(n),
                                                 AlternatingForm::zero(n, f.degree)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        AlternatingForm hab = AlternatingForm::zero(n, f.degree);
        for (int k = 0; k < n; ++k) {
          if (frame(k, a) == 0.0) continue;
          for (int l = 0; l < n; ++l)
            if (frame(l, b) != 0.0)
              hab += (frame(k, a) * frame(l, b)) *
                     hcoord[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
        }
        jet.hess[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            to_frame(frame, hab);
      }
  }
  jet.check_shape();
  return jet;
}

FormField numeric_operator(const ChartGeometry& g, const FormField& f,
                           const SamplePlan& plan, FirstOrderOp which) {
  check_field(g, f);
  validate_step(plan.h);
  validate_order(plan.order);
  const int n = g.dim();
  const double h = plan.h;
  const int order = plan.order;
  const ChartGeometry geom = g;
  const FormField base = f;
  FormField out;
  out.dim = n;
  out.degree = (which == FirstOrderOp::d || which == FirstOrderOp::dc)
                   ? f.degree + 1
                   : std::max(f.degree - 1, 0);
  switch (which) {
    case FirstOrderOp::d:
      out.eval = [base, n, h, order](const Eigen::VectorXd& y) {
        AlternatingForm acc = AlternatingForm::zero(n, base.degree + 1);
        for (int k = 0; k < n; ++k)
          acc += wedge(AlternatingForm::covector_basis(n, k), fd_partial(base, y, k, h, order));
        return acc;
      };
      break;
    case FirstOrderOp::delta:
      out.eval = [geom, base, n, h, order](const Eigen::VectorXd& y) {
        const auto grads = covariant_grads(geom, base, y, h, order);
        const Eigen::MatrixXd ginv = geom.metric(y).inverse();
        AlternatingForm acc = AlternatingForm::zero(n, std::max(base.degree - 1, 0));
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            if (ginv(k, l) != 0.0)
              acc -= ginv(k, l) * contract_dir(k, grads[static_cast<std::size_t>(l)]);
        return acc;
      };
      break;
    case FirstOrderOp::dc:
      out.eval = [geom, base, n, h, order](const Eigen::VectorXd& y) {
        const auto grads = covariant_grads(geom, base, y, h, order);
        const Eigen::MatrixXd jm = geom.complex_structure(y);
        AlternatingForm acc = AlternatingForm::zero(n, base.degree + 1);
        for (int k = 0; k < n; ++k) {
          AlternatingForm jcov = AlternatingForm::zero(n, 1);
          for (int l = 0; l < n; ++l)
            if (jm(k, l) != 0.0) jcov.add_coeff(Mask{1} << l, -jm(k, l));
          acc += wedge(jcov, grads[static_cast<std::size_t>(k)]);
        }
        return acc;
      };
      break;
    case FirstOrderOp::deltac:
      out.eval = [geom, base, n, h, order](const Eigen::VectorXd& y) {
        const auto grads = covariant_grads(geom, base, y, h, order);
        const Eigen::MatrixXd ginv = geom.metric(y).inverse();
        const Eigen::MatrixXd jm = geom.complex_structure(y);
        const Eigen::MatrixXd c = jm * ginv;  // c(r,l) = sum_k J(r,k) g^{kl}
        AlternatingForm acc = AlternatingForm::zero(n, std::max(base.degree - 1, 0));
        for (int r = 0; r < n; ++r)
          for (int l = 0; l < n; ++l)
            if (c(r, l) != 0.0)
              acc -= c(r, l) * contract_dir(r, grads[static_cast<std::size_t>(l)]);
        return acc;
      };
      break;
  }
  return out;
}

FormField pointwise_map(const ChartGeometry& g, const FormField& f, int out_degree,
                        const std::function<AlternatingForm(const KaehlerFrame&,
                                                            const AlternatingForm&)>& op) {
  check_field(g, f);
  if (!op) throw std::invalid_argument("pointwise map missing");
  const ChartGeometry geom = g;
  const FormField base = f;
  FormField out;
  out.dim = f.dim;
  out.degree = out_degree;
  out.eval = [geom, base, op](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd frame = adapted_frame(geom, x);
    const KaehlerFrame kf{geom.m};
    return from_frame(frame, op(kf, to_frame(frame, eval_field(base, x))));
  };
  return out;
}

FormField laplace_eigenfunction(const ChartGeometry& g, const Eigen::MatrixXcd& a) {
  if (g.model.rfind("fubini_study", 0) != 0)
    throw std::invalid_argument("eigenfunction family needs the projective model");
  const int m = g.m;
  if (a.rows() != m + 1 || a.cols() != m + 1)
    throw std::invalid_argument("matrix size mismatch");
  FormField f;
  f.dim = 2 * m;
  f.degree = 0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    f.eval = [m](const Eigen::VectorXd&) { return AlternatingForm::zero(2 * m, 0); };
    return f;
  }
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix must be Hermitian");
  if (std::abs(a.trace()) > 1e-12 * scale)
    throw std::invalid_argument("matrix must be traceless");
  const Eigen::MatrixXcd acopy = a;
  f.eval = [m, acopy](const Eigen::VectorXd& x) {
    Eigen::VectorXcd z(m + 1);
    z(0) = 1.0;
    for (int j = 0; j < m; ++j) z(j + 1) = std::complex<double>(x(2 * j), x(2 * j + 1));
    const std::complex<double> num = (z.adjoint() * acopy * z)(0);
    return AlternatingForm::constant(2 * m, num.real() / z.squaredNorm());
  };
  return f;
}

Eigen::MatrixXcd default_eigenfunction_matrix(int m) {
  if (m < 1) throw std::invalid_argument("complex dimension must be positive");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m + 1, m + 1) * (-1.0 / double(m));
  a(0, 0) = 1.0;
  return a;
}

FormField scalar_field(int dim, ScalarFn fn) {
  if (!fn) throw std::invalid_argument("scalar field missing");
  FormField f;
  f.dim = dim;
  f.degree = 0;
  f.eval = [dim, fn](const Eigen::VectorXd& x) {
    return AlternatingForm::constant(dim, fn(x));
  };
  return f;
}

FormField build_phi_hat(const ChartGeometry& g, const FormField& f, double h, int order) {
  check_field(g, f);
  validate_step(h);
  validate_order(order);
  if (f.degree != 0) throw std::invalid_argument("expects a scalar field");
  const int n = g.dim();
  const ChartGeometry geom = g;
  const FormField base = f;
  FormField dcf;
  dcf.dim = n;
  dcf.degree = 1;
  dcf.eval = [geom, base, h, order, n](const Eigen::VectorXd& y) {
    const Eigen::MatrixXd jm = geom.complex_structure(y);
    AlternatingForm out = AlternatingForm::zero(n, 1);
    for (int k = 0; k < n; ++k) {
      const double v = fd_partial(base, y, k, h, order).coeff(0);
      if (v == 0.0) continue;
      for (int l = 0; l < n; ++l)
        if (jm(k, l) != 0.0) out.add_coeff(Mask{1} << l, -jm(k, l) * v);
    }
    return out;
  };
  FormField out;
  out.dim = n;
  out.degree = 2;
  out.eval = [geom, base, dcf, h, order, n](const Eigen::VectorXd& y) {
    AlternatingForm acc = AlternatingForm::zero(n, 2);
    for (int k = 0; k < n; ++k)
      acc += wedge(AlternatingForm::covector_basis(n, k), fd_partial(dcf, y, k, h, order));
    const double fval = eval_field(base, y).coeff(0);
    if (fval != 0.0) acc += (6.0 * fval) * kaehler_form_coords(geom, y);
    return acc;
  };
  return out;
}

double killing_field_check(const ChartGeometry& g, const FormField& k,
                           const SamplePlan& plan) {
  check_field(g, k);
  if (k.degree != 1) throw std::invalid_argument("killing check expects a 1-form field");
  if (plan.points.empty()) throw std::invalid_argument("empty sample plan");
  const int n = g.dim();
  double worst = 0.0;
  for (const auto& x : plan.points) {
    const CovariantJet jet = covariant_jet(g, k, x, plan, false);
    double sym2 = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        const double s = 0.5 * (jet.grad[static_cast<std::size_t>(a)].coeff(Mask{1} << b) +
                                jet.grad[static_cast<std::size_t>(b)].coeff(Mask{1} << a));
        sym2 += (a == b ? 1.0 : 2.0) * s * s;
      }
    worst = std::max(worst, relative_residual(std::sqrt(sym2), jet.grad_norm()));
  }
  return worst;
}

double integrate_one_form_along(const FormField& alpha,
                                const std::vector<Eigen::VectorXd>& waypoints) {
  if (alpha.degree != 1) throw std::invalid_argument("line integral expects a 1-form");
  if (waypoints.size() < 2) throw std::invalid_argument("need at least two waypoints");
  const auto& q = unit_quadrature();
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < waypoints.size(); ++s) {
    const Eigen::VectorXd& a = waypoints[s];
    const Eigen::VectorXd dir = waypoints[s + 1] - a;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const AlternatingForm av = eval_field(alpha, a + q.nodes[i] * dir);
      double dot = 0.0;
      for (const auto& [mask, v] : av.terms()) dot += v * dir(bit_index(mask));
      total += q.weights[i] * dot;
    }
  }
  return total;
}

FormField generalized_trace(const ChartGeometry& g, const FormField& phi,
                            const SamplePlan& plan) {
  check_field(g, phi);
  if (phi.degree != 2) throw std::invalid_argument("generalized trace expects a 2-form");
  if (plan.points.empty()) throw std::invalid_argument("empty sample plan");
  const FormField alpha = numeric_operator(g, phi, plan, FirstOrderOp::deltac);
  const FormField dalpha = numeric_operator(g, alpha, plan, FirstOrderOp::d);
  double worst = 0.0;
  for (const auto& x : plan.points) {
    const double defect = frame_norm(g, x, eval_field(dalpha, x));
    const double scale = frame_norm(g, x, eval_field(alpha, x));
    worst = std::max(worst, relative_residual(defect, scale));
  }
  if (worst >= 1e-4) {
    std::ostringstream oss;
    oss << "generalized trace rejected: delta^c of the input is not closed "
        << "(relative |d delta^c phi| = " << worst << ", needs < 1e-4); "
        << "the potential would be path-dependent";
    throw std::runtime_error(oss.str());
  }
  const int n = g.dim();
  const FormField acopy = alpha;
  FormField out;
  out.dim = n;
  out.degree = 0;
  out.eval = [acopy, n](const Eigen::VectorXd& x) {
    const auto& q = unit_quadrature();
    double total = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const AlternatingForm av = acopy.eval(q.nodes[i] * x);
      double dot = 0.0;
      for (const auto& [mask, v] : av.terms()) dot += v * x(bit_index(mask));
      total += q.weights[i] * dot;
    }
    return AlternatingForm::constant(n, total);
  };
  return out;
}

Eigen::MatrixXd frame_riemann_matrix(const ChartGeometry& g, const Eigen::VectorXd& x,
                                     double fd_step) {
  validate_step(fd_step);
  const int n = g.dim();
  const auto ch = g.christoffel(x);
  std::vector<std::vector<Eigen::MatrixXd>> dch(
      static_cast<std::size_t>(n),
      std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    auto at = [&](double off) {
      Eigen::VectorXd y = x;
      y(i) += off;
      return g.christoffel(y);
    };
    const auto p2 = at(2.0 * fd_step), p1 = at(fd_step);
    const auto m1 = at(-fd_step), m2 = at(-2.0 * fd_step);
    for (int l = 0; l < n; ++l)
      dch[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] =
          (-p2[static_cast<std::size_t>(l)] + 8.0 * p1[static_cast<std::size_t>(l)] -
           8.0 * m1[static_cast<std::size_t>(l)] + m2[static_cast<std::size_t>(l)]) /
          (12.0 * fd_step);
  }
  // R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{it} Gamma^t_{jk}
  //                                               - Gamma^l_{jt} Gamma^t_{ik}
  const Eigen::MatrixXd gm = g.metric(x);
  const Eigen::MatrixXd fr = adapted_frame(g, x);
  const auto idx4 = [n](int i, int j, int k, int l) {
    return static_cast<std::size_t>(((i * n + j) * n + k) * n + l);
  };
  std::vector<double> rlow(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd up(n);
        for (int l = 0; l < n; ++l) {
          double v = dch[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)](j, k) -
                     dch[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)](i, k);
          for (int t = 0; t < n; ++t)
            v += ch[static_cast<std::size_t>(l)](i, t) * ch[static_cast<std::size_t>(t)](j, k) -
                 ch[static_cast<std::size_t>(l)](j, t) * ch[static_cast<std::size_t>(t)](i, k);
          up(l) = v;
        }
        const Eigen::VectorXd low = gm * up;
        for (int l = 0; l < n; ++l) rlow[idx4(i, j, k, l)] = low(l);
      }
  // Pull back to the adapted frame one slot at a time.
  std::vector<double> tmp(rlow.size(), 0.0);
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double v = rlow[idx4(i, j, k, l)];
            if (v == 0.0) continue;
            // rotate indices so the transformed slot is always the last one
            for (int a = 0; a < n; ++a) {
              const double w = fr(l, a) * v;
              if (w != 0.0) tmp[idx4(j, k, a, i)] += w;
            }
          }
    std::swap(rlow, tmp);
  }
  // After four passes the cyclic rotations restore the original slot order.
  const auto masks = masks_of_degree(n, 2);
  const auto sz = static_cast<Eigen::Index>(masks.size());
  Eigen::MatrixXd mat(sz, sz);
  for (Eigen::Index col = 0; col < sz; ++col) {
    int ij[2], t = 0;
    for (int b = 0; b < n; ++b)
      if (masks[static_cast<std::size_t>(col)] & (Mask{1} << b)) ij[t++] = b;
    for (Eigen::Index row = 0; row < sz; ++row) {
      int kl[2];
      t = 0;
      for (int b = 0; b < n; ++b)
        if (masks[static_cast<std::size_t>(row)] & (Mask{1} << b)) kl[t++] = b;
      mat(row, col) = rlow[idx4(ij[0], ij[1], kl[0], kl[1])];
    }
  }
  return mat;
}

// ---- suite helpers ----

FormField polynomial_test_field(int n, int degree, unsigned variant) {
  const auto masks = masks_of_degree(n, degree);
  FormField f;
  f.dim = n;
  f.degree = degree;
  f.eval = [n, degree, masks, variant](const Eigen::VectorXd& x) {
    AlternatingForm out = AlternatingForm::zero(n, degree);
    for (std::size_t t = 0; t < masks.size(); ++t) {
      const int i = static_cast<int>((t + variant) % static_cast<unsigned>(n));
      const int j = static_cast<int>((t + 2 * variant + 1) % static_cast<unsigned>(n));
      const int k = static_cast<int>(t % static_cast<std::size_t>(n));
      const double c = 0.3 + 0.07 * double(t) + 0.45 * std::sin(x(i) + 0.6 * double(t)) +
                       0.25 * x(j) * x(k);
      out.add_coeff(masks[t], c);
    }
    return out;
  };
  return f;
}

namespace {

FormField scale_field(double c, const FormField& f) {
  FormField out = f;
  const auto base = f.eval;
  out.eval = [base, c](const Eigen::VectorXd& x) {
    AlternatingForm v = base(x);
    v *= c;
    return v;
  };
  return out;
}

double max_rel_defect(const ChartGeometry& g, const SamplePlan& plan,
                      const FormField& input, const std::vector<FormField>& terms) {
  double worst = 0.0;
  for (const auto& x : plan.points) {
    // A term's structural degree drifts when an inner operator clamps an
    // identically vanishing branch (e.g. delta^c of a scalar), so the terms
    // are summed per degree and every group must vanish on its own. The
    // input's own norm joins the scale so that trivial instances (both sides
    // structurally zero) measure their FD noise against the field, not
    // against the noise itself.
    std::map<int, AlternatingForm> sums;
    double scale = frame_norm(g, x, eval_field(input, x));
    for (const auto& t : terms) {
      const AlternatingForm v = eval_field(t, x);
      auto [it, fresh] = sums.try_emplace(v.degree(), v);
      if (!fresh) it->second += v;
      scale = std::max(scale, frame_norm(g, x, v));
    }
    double defect = 0.0;
    for (const auto& [deg, sum] : sums) defect = std::max(defect, frame_norm(g, x, sum));
    worst = std::max(worst, relative_residual(defect, scale));
  }
  return worst;
}

// L and Lambda as parallel maps of a frame jet.
CovariantJet map_jet(const CovariantJet& j,
                     const std::function<AlternatingForm(const AlternatingForm&)>& op) {
  CovariantJet out;
  out.value = op(j.value);
  out.grad.reserve(j.grad.size());
  for (const auto& gv : j.grad) out.grad.push_back(op(gv));
  for (const auto& row : j.hess) {
    std::vector<AlternatingForm> orow;
    orow.reserve(row.size());
    for (const auto& hv : row) orow.push_back(op(hv));
    out.hess.push_back(std::move(orow));
  }
  return out;
}

}  // namespace

std::vector<CheckResult> commutator_suite(const ChartGeometry& g, const SamplePlan& plan) {
  if (plan.points.empty()) throw std::invalid_argument("empty sample plan");
  const int n = g.dim();
  std::vector<FormField> fields;
  fields.push_back(polynomial_test_field(n, 0, 1));
  fields.push_back(polynomial_test_field(n, 1, 2));
  fields.push_back(polynomial_test_field(n, 2, 3));
  {
    const ChartGeometry geom = g;
    FormField w;
    w.dim = n;
    w.degree = 2;
    w.eval = [geom](const Eigen::VectorXd& x) {
      return AlternatingForm((0.4 + 0.5 * std::sin(x(0) - 0.3 * x(1))) *
                             kaehler_form_coords(geom, x));
    };
    fields.push_back(std::move(w));
  }
  fields.push_back(polynomial_test_field(n, 3, 1));

  const auto D = [&](const FormField& u, FirstOrderOp op) {
    return numeric_operator(g, u, plan, op);
  };
  const auto Lw = [&](const FormField& u) {
    const ChartGeometry geom = g;
    const FormField base = u;
    FormField out;
    out.dim = n;
    out.degree = u.degree + 2;
    out.eval = [geom, base](const Eigen::VectorXd& x) {
      return wedge(kaehler_form_coords(geom, x), base.eval(x));
    };
    return out;
  };
  const auto La = [&](const FormField& u) {
    return pointwise_map(g, u, std::max(u.degree - 2, 0),
                         [](const KaehlerFrame& kf, const AlternatingForm& a) {
                           return lefschetz_Lambda(kf, a);
                         });
  };
  const auto Jx = [&](const FormField& u) {
    return pointwise_map(g, u, u.degree,
                         [](const KaehlerFrame& kf, const AlternatingForm& a) {
                           return j_extension(kf, a);
                         });
  };
  const auto St = [&](const FormField& u) {
    return pointwise_map(g, u, n - u.degree,
                         [](const KaehlerFrame&, const AlternatingForm& a) {
                           return hodge_star(a);
                         });
  };
  using FF = FormField;
  using Terms = std::vector<FormField>;
  struct Rel {
    const char* name;
    const char* anchor;
    double tol;
    std::function<Terms(const FF&)> build;
  };
  constexpr double kFirst = 1e-5;   // one FD derivative
  constexpr double kSecond = 1e-4;  // nested FD derivatives
  const auto d = FirstOrderOp::d, de = FirstOrderOp::delta;
  const auto dc = FirstOrderOp::dc, dec = FirstOrderOp::deltac;
  const std::vector<Rel> rels = {
      {"dc_as_delta_L_commutator", "dc_delta_L", kFirst,
       [&](const FF& u) { return Terms{D(u, dc), D(Lw(u), de), scale_field(-1.0, Lw(D(u, de)))}; }},
      {"dc_as_d_J_commutator", "dc_d_J", kFirst,
       [&](const FF& u) { return Terms{D(u, dc), D(Jx(u), d), scale_field(-1.0, Jx(D(u, d)))}; }},
      {"deltac_as_d_Lambda_commutator", "deltac_d_Lambda", kFirst,
       [&](const FF& u) { return Terms{D(u, dec), scale_field(-1.0, D(La(u), d)), La(D(u, d))}; }},
      {"deltac_as_delta_J_commutator", "deltac_delta_J", kFirst,
       [&](const FF& u) { return Terms{D(u, dec), D(Jx(u), de), scale_field(-1.0, Jx(D(u, de)))}; }},
      {"d_as_deltac_L_commutator", "d_deltac_L", kFirst,
       [&](const FF& u) { return Terms{D(u, d), scale_field(-1.0, D(Lw(u), dec)), Lw(D(u, dec))}; }},
      {"d_as_dc_J_commutator", "d_dc_J", kFirst,
       [&](const FF& u) { return Terms{D(u, d), scale_field(-1.0, D(Jx(u), dc)), Jx(D(u, dc))}; }},
      {"delta_as_dc_Lambda_commutator", "delta_dc_Lambda", kFirst,
       [&](const FF& u) { return Terms{D(u, de), D(La(u), dc), scale_field(-1.0, La(D(u, dc)))}; }},
      {"delta_as_deltac_J_commutator", "delta_deltac_J", kFirst,
       [&](const FF& u) { return Terms{D(u, de), scale_field(-1.0, D(Jx(u), dec)), Jx(D(u, dec))}; }},
      {"d_L_commute", "d_L", kFirst,
       [&](const FF& u) { return Terms{D(Lw(u), d), scale_field(-1.0, Lw(D(u, d)))}; }},
      {"dc_L_commute", "dc_L", kFirst,
       [&](const FF& u) { return Terms{D(Lw(u), dc), scale_field(-1.0, Lw(D(u, dc)))}; }},
      {"delta_Lambda_commute", "delta_Lambda", kFirst,
       [&](const FF& u) { return Terms{D(La(u), de), scale_field(-1.0, La(D(u, de)))}; }},
      {"deltac_Lambda_commute", "deltac_Lambda", kFirst,
       [&](const FF& u) { return Terms{D(La(u), dec), scale_field(-1.0, La(D(u, dec)))}; }},
      {"Lambda_J_commute", "Lambda_J", kFirst,
       [&](const FF& u) { return Terms{La(Jx(u)), scale_field(-1.0, Jx(La(u)))}; }},
      {"J_star_commute", "J_star", kFirst,
       [&](const FF& u) { return Terms{Jx(St(u)), scale_field(-1.0, St(Jx(u)))}; }},
      {"delta_dc_anticommute", "delta_dc", kSecond,
       [&](const FF& u) { return Terms{D(D(u, dc), de), D(D(u, de), dc)}; }},
      {"d_dc_anticommute", "d_dc", kSecond,
       [&](const FF& u) { return Terms{D(D(u, dc), d), D(D(u, d), dc)}; }},
      {"delta_deltac_anticommute", "delta_deltac", kSecond,
       [&](const FF& u) { return Terms{D(D(u, dec), de), D(D(u, de), dec)}; }},
      {"d_deltac_anticommute", "d_deltac", kSecond,
       [&](const FF& u) { return Terms{D(D(u, dec), d), D(D(u, d), dec)}; }},
  };
  std::vector<CheckResult> out;
  out.reserve(rels.size());
  for (const auto& rel : rels) {
    double worst = 0.0;
    for (const auto& u : fields) {
      try {
        worst = std::max(worst, max_rel_defect(g, plan, u, rel.build(u)));
      } catch (const std::runtime_error& e) {
        std::ostringstream oss;
        oss << e.what() << " (relation " << rel.name << ", input degree " << u.degree << ")";
        throw std::runtime_error(oss.str());
      }
    }
    out.push_back(make_check(rel.name, rel.anchor, worst, rel.tol));
  }
  return out;
}

std::vector<CheckResult> primitive_structure_checks(const KaehlerFrame& f,
                                                    const std::vector<CovariantJet>& jets,
                                                    const std::string& label) {
  if (jets.empty()) throw std::invalid_argument("no jets supplied");
  const int n = f.dim();
  const int m = f.m;
  const int p = jets.front().degree();
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("structure checks need even degree >= 2");
  const int k = p / 2;
  const double den1 = double((p - 1) * (n - p)) - 2.0;
  const double den2 = double(p * (n - p - 1)) - 2.0;
  const bool have_mu = std::abs(den1) > 1e-12 && std::abs(den2) > 1e-12;
  const double mu1 = have_mu ? -2.0 * double(n - p + 1) / den1 : 0.0;
  const double mu2 = have_mu ? 2.0 * double(p + 1) / den2 : 0.0;
  const double lam_d = 0.25 * double((n - p - 2) * (p + 2));
  const double lam_delta = 0.25 * double((n - p) * p);
  const double coef_v = lambda_ls_coefficient(m, 1, k, k);
  const double coef_w = lambda_ls_coefficient(m, 1, k - 1, k - 1);
  const double pair_ratio = double(k * (2 * m - 2 * k + 1)) / double(2 * k + 1);

  double w_mu[4] = {0, 0, 0, 0};
  double w_lam_d = 0, w_lam_delta = 0, w_pair = 0, w_level_d = 0, w_level_delta = 0;
  for (const auto& j : jets) {
    if (j.degree() != p || j.dim() != n) throw std::invalid_argument("jet shape mismatch");
    const AlternatingForm du = d_from_jet(j);
    const AlternatingForm deu = delta_from_jet(j);
    const auto lam_map = [&](const AlternatingForm& a) { return lefschetz_Lambda(f, a); };
    const auto l_map = [&](const AlternatingForm& a) { return lefschetz_L(f, a); };
    const CovariantJet jl = map_jet(j, lam_map);
    const CovariantJet jL = map_jet(j, l_map);
    if (have_mu) {
      const AlternatingForm dlu = deltac_from_jet(f, j);
      const AlternatingForm dcu = dc_from_jet(f, j);
      AlternatingForm r0 = dlu;
      r0 -= mu1 * d_from_jet(jl);
      w_mu[0] = std::max(w_mu[0], relative_residual(r0.norm(), std::max(dlu.norm(), du.norm())));
      AlternatingForm r1 = dcu;
      r1 -= mu2 * delta_from_jet(jL);
      w_mu[1] = std::max(w_mu[1], relative_residual(r1.norm(), std::max(dcu.norm(), deu.norm())));
      AlternatingForm r2 = deu;
      r2 += mu1 * dc_from_jet(f, jl);
      w_mu[2] = std::max(w_mu[2], relative_residual(r2.norm(), std::max(deu.norm(), dcu.norm())));
      AlternatingForm r3 = du;
      r3 += mu2 * deltac_from_jet(f, jL);
      w_mu[3] = std::max(w_mu[3], relative_residual(r3.norm(), std::max(du.norm(), dlu.norm())));
    }
    AlternatingForm e1 = lefschetz_Lambda(f, lefschetz_L(f, du));
    e1 -= lam_d * du;
    w_lam_d = std::max(w_lam_d, relative_residual(e1.norm(), du.norm()));
    AlternatingForm e2 = lefschetz_Lambda(f, lefschetz_L(f, deu));
    e2 -= lam_delta * deu;
    w_lam_delta = std::max(w_lam_delta, relative_residual(e2.norm(), deu.norm()));
    // du = L^k v and delta u = L^(k-1) w for primitive covectors v, w with
    // w proportional to Jv.
    AlternatingForm v = du;
    for (int t = 0; t < k; ++t) v = lefschetz_Lambda(f, v);
    v *= 1.0 / coef_v;
    AlternatingForm w = deu;
    for (int t = 0; t < k - 1; ++t) w = lefschetz_Lambda(f, w);
    w *= 1.0 / coef_w;
    AlternatingForm pr = w;
    pr -= pair_ratio * j_covector(f, v);
    w_pair = std::max(w_pair, relative_residual(pr.norm(), std::max(w.norm(), v.norm())));
    AlternatingForm vlift = v;
    for (int t = 0; t < k; ++t) vlift = lefschetz_L(f, vlift);
    AlternatingForm dres = du;
    dres -= vlift;
    w_level_d = std::max(w_level_d, relative_residual(dres.norm(), du.norm()));
    AlternatingForm wlift = w;
    for (int t = 0; t < k - 1; ++t) wlift = lefschetz_L(f, wlift);
    AlternatingForm deres = deu;
    deres -= wlift;
    w_level_delta = std::max(w_level_delta, relative_residual(deres.norm(), deu.norm()));
  }
  std::vector<CheckResult> out;
  const std::string tag = label.empty() ? std::string() : label + "_";
  if (have_mu) {
    out.push_back(make_check(tag + "deltac_from_d_Lambda", "primitive_links", w_mu[0], 1e-4));
    out.push_back(make_check(tag + "dc_from_delta_L", "primitive_links", w_mu[1], 1e-4));
    out.push_back(make_check(tag + "delta_from_dc_Lambda", "primitive_links", w_mu[2], 1e-4));
    out.push_back(make_check(tag + "d_from_deltac_L", "primitive_links", w_mu[3], 1e-4));
  } else {
    out.push_back(skip_check(tag + "link_coefficients_degenerate", "primitive_links"));
  }
  out.push_back(make_check(tag + "LambdaL_eigenvalue_on_d", "level_eigenvalues", w_lam_d, 1e-4));
  out.push_back(
      make_check(tag + "LambdaL_eigenvalue_on_delta", "level_eigenvalues", w_lam_delta, 1e-4));
  out.push_back(make_check(tag + "level_vectors_pair_by_J", "level_vectors", w_pair, 1e-4));
  out.push_back(make_check(tag + "d_sits_on_single_level", "level_vectors", w_level_d, 1e-4));
  out.push_back(
      make_check(tag + "delta_sits_on_single_level", "level_vectors", w_level_delta, 1e-4));
  return out;
}

std::vector<CheckResult> degree4_structure_battery(const ChartGeometry& g,
                                                  const SamplePlan& plan) {
  if (g.m != 3 || g.model != "fubini_study")
    throw std::invalid_argument("degree-4 structure battery runs on the m = 3 projective model");
  if (plan.points.empty()) throw std::invalid_argument("empty sample plan");
  const int n = 6;
  const KaehlerFrame kf{3};
  const ChartGeometry geom = g;
  std::vector<CheckResult> out;

  const FormField f = laplace_eigenfunction(g, default_eigenfunction_matrix(3));
  const FormField phi_hat = build_phi_hat(g, f, plan.h, plan.order);
  FormField phi;
  phi.dim = n;
  phi.degree = 2;
  phi.eval = [geom, phi_hat](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd fr = adapted_frame(geom, x);
    const KaehlerFrame fk{geom.m};
    AlternatingForm v = to_frame(fr, phi_hat.eval(x));
    const double tr = lefschetz_Lambda(fk, v).coeff(0);
    v -= (tr / double(geom.m)) * fk.omega();
    return from_frame(fr, v);
  };

  const SamplePlan sub = plan.truncated(8);
  const FormField ftr = generalized_trace(geom, phi, sub);

  // The recovered potential against the closed-form multiple of the
  // eigenfunction (constants drop out through f(0)).
  const double f0 = eval_field(f, Eigen::VectorXd::Zero(n)).coeff(0);
  const double cf = -4.0 * (double(geom.m) * double(geom.m) - 1.0) / double(geom.m);
  double worst = 0.0;
  for (const auto& x : sub.points) {
    const double predicted = cf * (eval_field(f, x).coeff(0) - f0);
    const double got = eval_field(ftr, x).coeff(0);
    worst = std::max(worst, relative_residual(std::abs(got - predicted),
                                              std::max(std::abs(got), std::abs(predicted))));
  }
  out.push_back(make_check("trace_recovers_eigenfunction", "generalized_trace", worst, 1e-3));

  const FormField alpha = numeric_operator(geom, phi, sub, FirstOrderOp::deltac);
  worst = 0.0;
  for (std::size_t t = 0; t < std::min<std::size_t>(3, sub.points.size()); ++t) {
    const Eigen::VectorXd& x = sub.points[t];
    const double radial =
        integrate_one_form_along(alpha, {Eigen::VectorXd::Zero(n), x});
    std::vector<Eigen::VectorXd> staircase;
    staircase.push_back(Eigen::VectorXd::Zero(n));
    for (int c = 0; c < n; ++c) {
      Eigen::VectorXd y = staircase.back();
      y(c) = x(c);
      staircase.push_back(y);
    }
    const double axes = integrate_one_form_along(alpha, staircase);
    worst = std::max(worst, relative_residual(std::abs(radial - axes),
                                              std::max(std::abs(radial), std::abs(axes))));
  }
  out.push_back(make_check("trace_path_independence", "generalized_trace", worst, 1e-4));

  // Degree-4 twistor form of the structure family: u = L phi + 1/32 ftr omega^2.
  const double ck = (double(geom.m) - 4.0) / (4.0 * (double(geom.m) * double(geom.m) - 1.0));
  FormField u;
  u.dim = n;
  u.degree = 4;
  u.eval = [geom, phi, ftr, ck](const Eigen::VectorXd& x) {
    const AlternatingForm om = kaehler_form_coords(geom, x);
    AlternatingForm v = wedge(om, phi.eval(x));
    const double tr = ftr.eval(x).coeff(0);
    if (tr != 0.0) v -= (ck * tr) * wedge(om, om);
    return v;
  };
  std::vector<CovariantJet> jets4;
  double tw4 = 0.0;
  for (const auto& x : sub.points) {
    CovariantJet j = covariant_jet(geom, u, x, sub, false);
    tw4 = std::max(tw4, twistor_residual(j));
    jets4.push_back(std::move(j));
  }
  out.push_back(make_check("twistor_kernel_degree4", "cpn.structure_battery", tw4, 1e-5));
  for (auto& c : primitive_structure_checks(kf, jets4, "deg4")) out.push_back(std::move(c));

  // Companion battery at degree 2 on the uncorrected form, plus parallel-type
  // certificates: J phi_hat vanishes identically and stays parallel.
  std::vector<CovariantJet> jets2;
  double wj = 0.0, wlj = 0.0;
  for (const auto& x : plan.points) {
    CovariantJet j = covariant_jet(geom, phi_hat, x, plan, false);
    const double gn = j.grad_norm();
    double jg = 0.0, ljg = 0.0;
    for (const auto& gv : j.grad) {
      const AlternatingForm jv = j_extension(kf, gv);
      jg = std::max(jg, jv.norm());
      ljg = std::max(ljg, lefschetz_Lambda(kf, jv).norm());
    }
    wj = std::max(wj, relative_residual(jg, gn));
    wlj = std::max(wlj, relative_residual(ljg, gn));
    jets2.push_back(std::move(j));
  }
  out.push_back(make_check("J_invariance_parallel", "parallel_type", wj, 1e-4));
  out.push_back(make_check("J_trace_parallel", "parallel_type", wlj, 1e-4));
  for (auto& c : primitive_structure_checks(kf, jets2, "deg2")) out.push_back(std::move(c));
  return out;
}

}  // namespace ckforms
