// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckforms/alt_form.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ckforms {

int popcount(Mask m) { return std::popcount(m); }

int wedge_sign(Mask a, Mask b) {
  int swaps = 0;
  while (b) {
    int i = std::countr_zero(b);
    swaps += std::popcount(a >> (i + 1));
    b &= b - 1;
  }
  return (swaps & 1) ? -1 : 1;
}

int removal_sign(Mask i_bit_below, Mask mask) {
  return (std::popcount(mask & i_bit_below) & 1) ? -1 : 1;
}

void for_each_mask(int dim, int degree, const std::function<void(Mask)>& fn) {
  if (degree < 0 || degree > dim) return;
  if (degree == 0) {
    fn(0);
    return;
  }
  Mask m = (Mask(1) << degree) - 1;
  const Mask limit = Mask(1) << dim;
  while (m < limit) {
    fn(m);
    // Gosper's hack: next mask with the same popcount.
    Mask c = m & -m;
    Mask r = m + c;
    if (r >= limit) break;
    m = (((r ^ m) >> 2) / c) | r;
  }
}

std::vector<Mask> masks_of_degree(int dim, int degree) {
  std::vector<Mask> out;
  for_each_mask(dim, degree, [&](Mask m) { out.push_back(m); });
  return out;
}

namespace {

// Dense accumulation buffer over the full 2^n index space; the sparse term
// list is rebuilt from the touched entries afterwards. Epoch stamps avoid
// clearing the whole buffer between operations.
struct Accum {
  std::vector<double> val;
  std::vector<std::uint32_t> stamp;
  std::vector<Mask> touched;
  std::uint32_t epoch = 0;

  void reset(int dim) {
    const std::size_t size = std::size_t(1) << dim;
    if (val.size() < size) {
      val.resize(size, 0.0);
      stamp.resize(size, 0);
    }
    ++epoch;
    touched.clear();
  }

  void add(Mask m, double x) {
    if (stamp[m] != epoch) {
      stamp[m] = epoch;
      val[m] = 0.0;
      touched.push_back(m);
    }
    val[m] += x;
  }

  std::vector<std::pair<Mask, double>> collect() {
    std::sort(touched.begin(), touched.end());
    std::vector<std::pair<Mask, double>> out;
    out.reserve(touched.size());
    for (Mask m : touched) {
      if (val[m] != 0.0) out.emplace_back(m, val[m]);
    }
    return out;
  }
};

Accum& accum() {
  thread_local Accum a;
  return a;
}

void check_dim(int dim) {
  if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
}

AlternatingForm from_terms(int dim, int degree,
                           std::vector<std::pair<Mask, double>> terms) {
  AlternatingForm f = AlternatingForm::zero(dim, degree);
  for (const auto& [m, v] : terms) f.add_coeff(m, v);
  return f;
}

}  // namespace

AlternatingForm AlternatingForm::zero(int dim, int degree) {
  check_dim(dim);
  if (degree < 0) throw std::invalid_argument("negative degree");
  AlternatingForm f;
  f.dim_ = dim;
  f.degree_ = degree;
  return f;
}

AlternatingForm AlternatingForm::basis(int dim, Mask bits, double c) {
  check_dim(dim);
  if (bits >= (Mask(1) << dim)) throw std::invalid_argument("index set exceeds dimension");
  AlternatingForm f = zero(dim, std::popcount(bits));
  f.set_coeff(bits, c);
  return f;
}

AlternatingForm AlternatingForm::covector_basis(int dim, int i, double c) {
  if (i < 0 || i >= dim) throw std::invalid_argument("covector index out of range");
  return basis(dim, Mask(1) << i, c);
}

AlternatingForm AlternatingForm::constant(int dim, double c) {
  AlternatingForm f = zero(dim, 0);
  f.set_coeff(0, c);
  return f;
}

double AlternatingForm::coeff(Mask bits) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), bits,
                             [](const auto& t, Mask m) { return t.first < m; });
  if (it != terms_.end() && it->first == bits) return it->second;
  return 0.0;
}

void AlternatingForm::set_coeff(Mask bits, double c) {
  if (std::popcount(bits) != degree_) throw std::invalid_argument("index set degree mismatch");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), bits,
                             [](const auto& t, Mask m) { return t.first < m; });
  if (it != terms_.end() && it->first == bits) {
    if (c == 0.0) {
      terms_.erase(it);
    } else {
      it->second = c;
    }
  } else if (c != 0.0) {
    terms_.insert(it, {bits, c});
  }
}

void AlternatingForm::add_coeff(Mask bits, double c) {
  set_coeff(bits, coeff(bits) + c);
}

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& o) {
  if (dim_ != o.dim_ || degree_ != o.degree_) throw std::invalid_argument("form shape mismatch");
  for (const auto& [m, v] : o.terms_) add_coeff(m, v);
  return *this;
}

AlternatingForm& AlternatingForm::operator-=(const AlternatingForm& o) {
  if (dim_ != o.dim_ || degree_ != o.degree_) throw std::invalid_argument("form shape mismatch");
  for (const auto& [m, v] : o.terms_) add_coeff(m, -v);
  return *this;
}

AlternatingForm& AlternatingForm::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= s;
  return *this;
}

AlternatingForm AlternatingForm::operator-() const {
  AlternatingForm f = *this;
  f *= -1.0;
  return f;
}

double AlternatingForm::norm() const {
  double s = 0.0;
  for (const auto& [m, v] : terms_) s += v * v;
  return std::sqrt(s);
}

double AlternatingForm::max_abs() const {
  double s = 0.0;
  for (const auto& [m, v] : terms_) s = std::max(s, std::abs(v));
  return s;
}

void AlternatingForm::prune() {
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const auto& t) { return t.second == 0.0; }),
               terms_.end());
}

AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b) {
  a += b;
  return a;
}

AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b) {
  a -= b;
  return a;
}

AlternatingForm operator*(double s, AlternatingForm a) {
  a *= s;
  return a;
}

AlternatingForm operator*(AlternatingForm a, double s) {
  a *= s;
  return a;
}

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge dimension mismatch");
  const int deg = a.degree() + b.degree();
  if (deg > a.dim()) return AlternatingForm::zero(a.dim(), deg);
  Accum& acc = accum();
  acc.reset(a.dim());
  for (const auto& [ma, va] : a.terms()) {
    for (const auto& [mb, vb] : b.terms()) {
      if (ma & mb) continue;
      acc.add(ma | mb, wedge_sign(ma, mb) * va * vb);
    }
  }
  return from_terms(a.dim(), deg, acc.collect());
}

AlternatingForm contract(const Covector& x, const AlternatingForm& a) {
  if (x.dim() != a.dim()) throw std::invalid_argument("contract dimension mismatch");
  if (x.degree() != 1) throw std::invalid_argument("contraction direction must be a covector");
  if (a.degree() == 0) return AlternatingForm::zero(a.dim(), 0);
  Accum& acc = accum();
  acc.reset(a.dim());
  for (const auto& [mx, vx] : x.terms()) {
    const Mask below = mx - 1;
    for (const auto& [ma, va] : a.terms()) {
      if (!(ma & mx)) continue;
      acc.add(ma & ~mx, removal_sign(below, ma) * vx * va);
    }
  }
  return from_terms(a.dim(), a.degree() - 1, acc.collect());
}

AlternatingForm contract_dir(int i, const AlternatingForm& a) {
  if (i < 0 || i >= a.dim()) throw std::invalid_argument("contraction index out of range");
  if (a.degree() == 0) return AlternatingForm::zero(a.dim(), 0);
  const Mask mx = Mask(1) << i;
  const Mask below = mx - 1;
  AlternatingForm out = AlternatingForm::zero(a.dim(), a.degree() - 1);
  for (const auto& [ma, va] : a.terms()) {
    if (!(ma & mx)) continue;
    out.add_coeff(ma & ~mx, removal_sign(below, ma) * va);
  }
  return out;
}

double inner(const AlternatingForm& a, const AlternatingForm& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree())
    throw std::invalid_argument("inner product shape mismatch");
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ta.size() && j < tb.size()) {
    if (ta[i].first < tb[j].first) {
      ++i;
    } else if (tb[j].first < ta[i].first) {
      ++j;
    } else {
      s += ta[i].second * tb[j].second;
      ++i;
      ++j;
    }
  }
  return s;
}

AlternatingForm hodge_star(const AlternatingForm& a) {
  const Mask full = (Mask(1) << a.dim()) - 1;
  if (a.degree() > a.dim()) return AlternatingForm::zero(a.dim(), 0);
  AlternatingForm out = AlternatingForm::zero(a.dim(), a.dim() - a.degree());
  for (const auto& [m, v] : a.terms()) {
    const Mask comp = full & ~m;
    out.add_coeff(comp, wedge_sign(m, comp) * v);
  }
  return out;
}

double max_abs_diff(const AlternatingForm& a, const AlternatingForm& b) {
  double s = 0.0;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j >= tb.size() || (i < ta.size() && ta[i].first < tb[j].first)) {
      s = std::max(s, std::abs(ta[i].second));
      ++i;
    } else if (i >= ta.size() || tb[j].first < ta[i].first) {
      s = std::max(s, std::abs(tb[j].second));
      ++j;
    } else {
      s = std::max(s, std::abs(ta[i].second - tb[j].second));
      ++i;
      ++j;
    }
  }
  return s;
}

bool approx_equal(const AlternatingForm& a, const AlternatingForm& b, double tol) {
  return a.dim() == b.dim() && a.degree() == b.degree() && max_abs_diff(a, b) <= tol;
}

AlternatingForm random_form(int dim, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  AlternatingForm f = AlternatingForm::zero(dim, degree);
  for_each_mask(dim, degree, [&](Mask m) { f.set_coeff(m, dist(rng)); });
  return f;
}

double relative_residual(double defect, double scale, double floor) {
  if (defect == 0.0) return 0.0;
  return defect / std::max(scale, floor);
}

}  // namespace ckforms
