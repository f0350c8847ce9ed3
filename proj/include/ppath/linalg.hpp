#ifndef PPATH_LINALG_HPP
#define PPATH_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "ppath/error.hpp"

namespace ppath {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = RowMatrix<double>;
using Vec = Vector<double>;
using Index = Eigen::Index;

// Thin factorization A = u * diag(sigma) * vt of an n x m matrix, d = min(n, m).
template <typename Scalar>
struct TemporalSvd {
  RowMatrix<Scalar> u;   // n x d
  Vector<Scalar> sigma;  // d, non-increasing
  RowMatrix<Scalar> vt;  // d x m

  Index rows() const { return u.rows(); }
  Index cols() const { return vt.cols(); }
  Index rank() const { return sigma.size(); }
};

struct SvdOptions {
  int max_sweeps = 60;
  double tolerance = 1e-12;
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& a) {
  return a.derived().array().isFinite().all();
}

namespace detail {

// Householder reflector H = I - tau v v^T with v(0) = 1, chosen so that x^T H = beta e_0^T.
template <typename Scalar>
struct Reflector {
  Vector<Scalar> v;
  Scalar tau = Scalar(0);
};

template <typename Scalar>
Reflector<Scalar> make_reflector(const Eigen::Ref<const Vector<Scalar>>& x, Scalar& beta) {
  Reflector<Scalar> h;
  h.v = Vector<Scalar>::Zero(x.size());
  h.v(0) = Scalar(1);
  // Work on x / max|x| so squares of tiny columns do not underflow.
  const Scalar scale = x.cwiseAbs().maxCoeff();
  const Scalar alpha = x(0);
  const Scalar tail = scale > Scalar(0) && x.size() > 1 ? (x.tail(x.size() - 1) / scale).squaredNorm() : Scalar(0);
  if (tail == Scalar(0)) {
    beta = alpha;
    return h;
  }
  const Scalar a = alpha / scale;
  Scalar b = std::sqrt(a * a + tail);
  if (a >= Scalar(0)) b = -b;
  h.tau = (b - a) / b;
  h.v.tail(x.size() - 1) = (x.tail(x.size() - 1) / scale) / (a - b);
  beta = b * scale;
  return h;
}

// Applies H_k from the right to every row of `block` (the columns k..m-1 of a wider matrix).
template <typename Scalar, typename Block>
void apply_reflector_right(Block&& block, const Reflector<Scalar>& h) {
  if (h.tau == Scalar(0)) return;
  for (Index r = 0; r < block.rows(); ++r) {
    const Scalar w = block.row(r).dot(h.v.transpose());
    block.row(r).noalias() -= (h.tau * w) * h.v.transpose();
  }
}

template <typename Scalar>
void apply_sign_convention(TemporalSvd<Scalar>& svd) {
  for (Index i = 0; i < svd.vt.rows(); ++i) {
    Index arg = 0;
    svd.vt.row(i).cwiseAbs().maxCoeff(&arg);
    if (svd.vt(i, arg) < Scalar(0)) {
      svd.vt.row(i) *= Scalar(-1);
      svd.u.col(i) *= Scalar(-1);
    }
  }
}

template <typename Scalar>
TemporalSvd<Scalar> zero_svd(Index n, Index m) {
  const Index d = std::min(n, m);
  TemporalSvd<Scalar> out;
  out.u = RowMatrix<Scalar>::Identity(n, d);
  out.sigma = Vector<Scalar>::Zero(d);
  out.vt = RowMatrix<Scalar>::Identity(d, m);
  return out;
}

// Completes row i of `basis` to a unit vector orthogonal to rows [0, i).
template <typename Scalar>
void complete_row(RowMatrix<Scalar>& basis, Index i) {
  const Index n = basis.cols();
  for (Index k = 0; k < n; ++k) {
    Vector<Scalar> cand = Vector<Scalar>::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < i; ++j) cand -= basis.row(j).dot(cand.transpose()) * basis.row(j).transpose();
    }
    const Scalar nrm = cand.norm();
    if (nrm > Scalar(0.5)) {
      basis.row(i) = cand.transpose() / nrm;
      return;
    }
  }
}

// One-sided (Hestenes) Jacobi on the rows of a square n x n factor. On return
// rows of `work` are mutually orthogonal and L = rot^T * work.
template <typename Scalar>
void hestenes_rows(RowMatrix<Scalar>& work, RowMatrix<Scalar>& rot, const SvdOptions& opt) {
  const Index n = work.rows();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar rotate_tol = std::sqrt(Scalar(std::max<Index>(n, 1))) * eps;
  rot = RowMatrix<Scalar>::Identity(n, n);
  if (n < 2) return;
  // Rows at roundoff level of the whole matrix count as zero; rotating them
  // only reshuffles noise and the relative coupling test never settles.
  const Scalar negligible = Scalar(work.squaredNorm()) * eps * eps;

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    Scalar off = 0;
    bool rotated = false;
    for (Index i = 0; i + 1 < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const Scalar alpha = work.row(i).squaredNorm();
        const Scalar beta = work.row(j).squaredNorm();
        if (alpha <= negligible || beta <= negligible) continue;
        const Scalar gamma = work.row(i).dot(work.row(j));
        const Scalar coupling = std::abs(gamma) / std::sqrt(alpha * beta);
        off += coupling * coupling;
        if (coupling <= rotate_tol) continue;
        rotated = true;
        const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
        const Scalar t = (zeta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(zeta) + std::sqrt(Scalar(1) + zeta * zeta));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = c * t;
        for (auto* m : {&work, &rot}) {
          for (Index k = 0; k < m->cols(); ++k) {
            const Scalar a = (*m)(i, k);
            const Scalar b = (*m)(j, k);
            (*m)(i, k) = c * a - s * b;
            (*m)(j, k) = s * a + c * b;
          }
        }
      }
    }
    if (!rotated || std::sqrt(off) < Scalar(opt.tolerance)) return;
  }
  throw Error(ErrorKind::ConvergenceFailure,
              "Jacobi sweeps exhausted (" + std::to_string(opt.max_sweeps) + ")");
}

// Wide case, n <= m.
template <typename Scalar>
TemporalSvd<Scalar> svd_wide(const RowMatrix<Scalar>& a, const SvdOptions& opt) {
  const Index n = a.rows();
  const Index m = a.cols();

  // A = [L 0] H_{n-1} ... H_0, L lower triangular.
  RowMatrix<Scalar> w = a;
  std::vector<Reflector<Scalar>> reflectors;
  reflectors.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    Scalar beta = 0;
    Vector<Scalar> x = w.row(k).segment(k, m - k).transpose();
    Reflector<Scalar> h = make_reflector<Scalar>(x, beta);
    if (k + 1 < n) apply_reflector_right(w.block(k + 1, k, n - k - 1, m - k), h);
    w(k, k) = beta;
    w.row(k).segment(k + 1, m - k - 1).setZero();
    reflectors.push_back(std::move(h));
  }

  RowMatrix<Scalar> work = w.leftCols(n);
  RowMatrix<Scalar> rot;
  hestenes_rows(work, rot, opt);

  Vector<Scalar> norms = work.rowwise().norm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return norms(x) > norms(y); });

  TemporalSvd<Scalar> out;
  out.sigma.resize(n);
  out.u.resize(n, n);
  RowMatrix<Scalar> small_vt(n, n);
  const Scalar floor = norms(order.front()) * Scalar(n) * std::numeric_limits<Scalar>::epsilon();
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.sigma(i) = norms(src);
    out.u.col(i) = rot.row(src).transpose();
    if (norms(src) > floor) {
      small_vt.row(i) = work.row(src) / norms(src);
    } else {
      complete_row(small_vt, i);
    }
  }

  out.vt = RowMatrix<Scalar>::Zero(n, m);
  out.vt.leftCols(n) = small_vt;
  for (Index k = n; k-- > 0;) {
    apply_reflector_right(out.vt.rightCols(m - k), reflectors[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace detail

// Thin SVD of a path matrix (rows are snapshots). Householder LQ reduces the
// problem to the n x n side, then one-sided Jacobi orthogonalizes its rows.
// Sign convention: the largest-magnitude entry of every vt row is non-negative.
template <typename Derived>
TemporalSvd<typename Derived::Scalar> temporal_svd(const Eigen::MatrixBase<Derived>& a,
                                                   const SvdOptions& opt = {}) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() < 1 || a.cols() < 1) throw Error(ErrorKind::InvalidMatrix, "empty matrix");
  if (!all_finite(a)) throw Error(ErrorKind::InvalidMatrix, "non-finite entry");

  const RowMatrix<Scalar> mat = a;
  if (mat.squaredNorm() == Scalar(0)) return detail::zero_svd<Scalar>(mat.rows(), mat.cols());

  TemporalSvd<Scalar> out;
  if (mat.rows() <= mat.cols()) {
    out = detail::svd_wide<Scalar>(mat, opt);
  } else {
    RowMatrix<Scalar> at = mat.transpose();
    TemporalSvd<Scalar> t = detail::svd_wide<Scalar>(at, opt);
    out.u = t.vt.transpose();
    out.sigma = std::move(t.sigma);
    out.vt = t.u.transpose();
  }
  detail::apply_sign_convention(out);
  return out;
}

// U[:, :keep] diag(sigma[:keep]) Vt[:keep, :]
template <typename Scalar>
RowMatrix<Scalar> reconstruct(const TemporalSvd<Scalar>& svd, Index keep) {
  if (keep < 1 || keep > svd.rank()) {
    throw Error(ErrorKind::InvalidRank, "keep=" + std::to_string(keep) + " outside [1, " +
                                            std::to_string(svd.rank()) + "]");
  }
  return svd.u.leftCols(keep) * svd.sigma.head(keep).asDiagonal() * svd.vt.topRows(keep);
}

template <typename DerivedA, typename DerivedB>
double relative_frobenius_error(const Eigen::MatrixBase<DerivedA>& approx,
                                const Eigen::MatrixBase<DerivedB>& exact) {
  const double denom = exact.norm();
  const double diff = (approx - exact).norm();
  return denom == 0.0 ? diff : diff / denom;
}

// Test oracle: singular values as square roots of the Gram eigenvalues, found
// by classical two-sided cyclic Jacobi. Uses A^T A (or A A^T when that is
// smaller; the non-zero spectrum is shared). Tiny inputs only.
template <typename Derived>
std::vector<double> gram_singular_oracle(const Eigen::MatrixBase<Derived>& a) {
  const Index n = a.rows();
  const Index m = a.cols();
  if (n * m > 64 * 64) throw Error(ErrorKind::OracleTooLarge, "oracle limited to 4096 entries");
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidMatrix, "empty matrix");

  const bool use_ata = m <= n;
  const Index g = use_ata ? m : n;
  std::vector<double> s(static_cast<std::size_t>(g * g), 0.0);
  auto at = [&](Index r, Index c) -> double& { return s[static_cast<std::size_t>(r * g + c)]; };
  for (Index r = 0; r < g; ++r) {
    for (Index c = 0; c < g; ++c) {
      double acc = 0.0;
      if (use_ata) {
        for (Index k = 0; k < n; ++k) acc += double(a(k, r)) * double(a(k, c));
      } else {
        for (Index k = 0; k < m; ++k) acc += double(a(r, k)) * double(a(c, k));
      }
      at(r, c) = acc;
    }
  }

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (Index p = 0; p < g; ++p) {
      diag += at(p, p) * at(p, p);
      for (Index q = p + 1; q < g; ++q) off += at(p, q) * at(p, q);
    }
    if (off <= 1e-32 * diag || off == 0.0) break;
    for (Index p = 0; p < g; ++p) {
      for (Index q = p + 1; q < g; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Index k = 0; k < g; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - sn * akq;
          at(k, q) = sn * akp + c * akq;
        }
        for (Index k = 0; k < g; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - sn * aqk;
          at(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> out;
  for (Index p = 0; p < g; ++p) out.push_back(std::sqrt(std::max(0.0, at(p, p))));
  std::sort(out.begin(), out.end(), std::greater<>());
  out.resize(static_cast<std::size_t>(std::min(n, m)), 0.0);
  return out;
}

}  // namespace ppath

#endif  // PPATH_LINALG_HPP
