// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact exterior algebra over an oriented orthonormal coframe e_1 <= ... <= e_n.
// A p-form is stored as a sparse map from index sets (bitmasks) to coefficients;
// the basis p-vectors e_I are orthonormal, no 1/p! weights anywhere.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ckforms {

using Mask = std::uint32_t;

constexpr int kMaxDim = 16;

int popcount(Mask m);

// Sign of reordering e_A ^ e_B into the increasing basis form e_{A|B}.
// Preconditions: A and B disjoint.
int wedge_sign(Mask a, Mask b);

// Sign picked up by pulling e_i out of e_I to the front. Bit i must be in I.
int removal_sign(Mask i_bit_below, Mask mask);

// Visits every degree-p index set over n slots in increasing mask order.
void for_each_mask(int dim, int degree, const std::function<void(Mask)>& fn);
std::vector<Mask> masks_of_degree(int dim, int degree);

class AlternatingForm {
 public:
  AlternatingForm() = default;

  static AlternatingForm zero(int dim, int degree);
  static AlternatingForm basis(int dim, Mask bits, double c = 1.0);
  static AlternatingForm covector_basis(int dim, int i, double c = 1.0);
  static AlternatingForm constant(int dim, double c);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }

  double coeff(Mask bits) const;
  void set_coeff(Mask bits, double c);
  void add_coeff(Mask bits, double c);

  // Terms sorted by mask, zero coefficients pruned.
  const std::vector<std::pair<Mask, double>>& terms() const { return terms_; }

  AlternatingForm& operator+=(const AlternatingForm& o);
  AlternatingForm& operator-=(const AlternatingForm& o);
  AlternatingForm& operator*=(double s);
  AlternatingForm operator-() const;

  double norm() const;
  double max_abs() const;

  friend bool operator==(const AlternatingForm& a, const AlternatingForm& b) {
    return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  void prune();

  int dim_ = 0;
  int degree_ = 0;
  std::vector<std::pair<Mask, double>> terms_;
};

using Covector = AlternatingForm;

AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b);
AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b);
AlternatingForm operator*(double s, AlternatingForm a);
AlternatingForm operator*(AlternatingForm a, double s);

// e_A ^ e_B with the transposition-count sign. Degrees add; a wedge past the
// top degree is the zero form.
AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b);

// Interior product x -| a for a covector x. Contracting a 0-form gives the
// zero 0-form, not an error.
AlternatingForm contract(const Covector& x, const AlternatingForm& a);
AlternatingForm contract_dir(int i, const AlternatingForm& a);

// <a, b> in the orthonormal-coframe inner product; degrees must agree.
double inner(const AlternatingForm& a, const AlternatingForm& b);

// Hodge star for the orientation e_1 ^ ... ^ e_n, so a ^ *b = <a,b> vol.
AlternatingForm hodge_star(const AlternatingForm& a);

double max_abs_diff(const AlternatingForm& a, const AlternatingForm& b);
bool approx_equal(const AlternatingForm& a, const AlternatingForm& b,
                  double tol = 1e-12);

AlternatingForm random_form(int dim, int degree, std::mt19937_64& rng);

// defect / max(scale, floor); exact zeros stay zero.
double relative_residual(double defect, double scale, double floor = 1e-14);

}  // namespace ckforms
