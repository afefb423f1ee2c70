#pragma once

// Exact integer matrices and Smith normal form.
//
// Everything here is templated on the scalar so the same code runs on
// fixed-width integers (tests, small oracles) and on GMP-backed BigInt
// (homology presentations).

#include <algorithm>
#include <optional>
#include <utility>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include "msflow/error.hpp"

namespace msflow {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

template <class Scalar>
using IntMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using IntVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = IntMatrixT<BigInt>;
using IntVector = IntVectorT<BigInt>;

/// U * A * V == S with U, V unimodular and S diagonal, S(i,i) | S(i+1,i+1),
/// non-negative diagonal; the first `rank` diagonal entries are nonzero.
template <class Scalar>
struct SNFResultT {
  IntMatrixT<Scalar> U;
  IntMatrixT<Scalar> S;
  IntMatrixT<Scalar> V;
  Eigen::Index rank = 0;
};

using SNFResult = SNFResultT<BigInt>;

namespace detail {

template <class Scalar>
Scalar abs_value(const Scalar& x) {
  return x < 0 ? Scalar(-x) : x;
}

}  // namespace detail

template <class Scalar>
SNFResultT<Scalar> smith_normal_form(const IntMatrixT<Scalar>& A) {
  using detail::abs_value;
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  SNFResultT<Scalar> r{IntMatrixT<Scalar>::Identity(m, m), A, IntMatrixT<Scalar>::Identity(n, n), 0};
  auto& S = r.S;
  auto& U = r.U;
  auto& V = r.V;

  for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block becomes the pivot
      Eigen::Index pi = -1, pj = -1;
      Scalar best = 0;
      for (Eigen::Index j = t; j < n; ++j)
        for (Eigen::Index i = t; i < m; ++i)
          if (S(i, j) != 0 && (pi < 0 || abs_value(S(i, j)) < best)) {
            best = abs_value(S(i, j));
            pi = i;
            pj = j;
          }
      if (pi < 0) return r;

      if (pi != t) {
        S.row(t).swap(S.row(pi));
        U.row(t).swap(U.row(pi));
      }
      if (pj != t) {
        S.col(t).swap(S.col(pj));
        V.col(t).swap(V.col(pj));
      }

      bool dirty = false;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (S(i, t) == 0) continue;
        const Scalar q = S(i, t) / S(t, t);
        S.row(i) -= q * S.row(t);
        U.row(i) -= q * U.row(t);
        dirty = dirty || S(i, t) != 0;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (S(t, j) == 0) continue;
        const Scalar q = S(t, j) / S(t, t);
        S.col(j) -= q * S.col(t);
        V.col(j) -= q * V.col(t);
        dirty = dirty || S(t, j) != 0;
      }
      if (dirty) continue;

      // pivot must divide the whole trailing block
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (S(i, j) % S(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      S.row(t) += S.row(bad);
      U.row(t) += U.row(bad);
    }
    if (S(t, t) < 0) {
      S.row(t) *= Scalar(-1);
      U.row(t) *= Scalar(-1);
    }
    r.rank = t + 1;
  }
  return r;
}

/// Integer x with A * x == v, if v lies in the column lattice of A.
template <class Scalar>
std::optional<IntVectorT<Scalar>> solve_in_image(const IntMatrixT<Scalar>& A, const IntVectorT<Scalar>& v) {
  if (v.size() != A.rows())
    throw Error(ErrorKind::DimensionMismatch, "right-hand side has " + std::to_string(v.size()) + " entries, matrix has " +
                                                  std::to_string(A.rows()) + " rows");
  const auto snf = smith_normal_form(A);
  const IntVectorT<Scalar> w = snf.U * v;
  IntVectorT<Scalar> y = IntVectorT<Scalar>::Zero(A.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (i < snf.rank) {
      if (w(i) % snf.S(i, i) != 0) return std::nullopt;
      y(i) = w(i) / snf.S(i, i);
    } else if (w(i) != 0) {
      return std::nullopt;
    }
  }
  IntVectorT<Scalar> x = snf.V * y;
  if (A * x != v) throw Error(ErrorKind::PreconditionViolated, "image solve failed re-multiplication check");
  return x;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
template <class Scalar>
Scalar integer_determinant(IntMatrixT<Scalar> M) {
  const Eigen::Index n = M.rows();
  if (n != M.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  if (n == 0) return Scalar(1);
  Scalar sign = 1;
  Scalar prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (M(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return Scalar(0);
      M.row(k).swap(M.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

template <class To, class From>
IntMatrixT<To> int_cast(const IntMatrixT<From>& M) {
  IntMatrixT<To> out(M.rows(), M.cols());
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) out(i, j) = To(M(i, j));
  return out;
}

}  // namespace msflow
