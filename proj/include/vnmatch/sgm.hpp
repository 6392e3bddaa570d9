#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vnmatch/assignment.hpp"

namespace vnmatch {

/// Row/column sums of iterates are kept within this of 1 by construction
/// (every update is a convex combination of doubly stochastic matrices).
constexpr double kDoublyStochasticTol = 1e-9;
constexpr double kEntryTol = 1e-12;

using DoublyStochastic = Eigen::MatrixXd;

inline bool is_doubly_stochastic(const Eigen::MatrixXd& m,
                                 double tol = kDoublyStochasticTol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if (m.minCoeff() < -kEntryTol) return false;
  for (int i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).sum() - 1.0) > tol) return false;
    if (std::abs(m.col(i).sum() - 1.0) > tol) return false;
  }
  return true;
}

inline Eigen::MatrixXd barycenter(int dim) {
  return Eigen::MatrixXd::Constant(dim, dim, 1.0 / dim);
}

/// Centered, size-padded adjacency pair: original edges become +1, original
/// non-edges -1, the diagonal and any padded rows/columns 0. Seeds occupy the
/// first `seed_count` indices of both matrices.
struct PaddedPair {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  int seed_count = 0;
  int orig_a = 0;
  int orig_b = 0;
  int dim() const { return static_cast<int>(a.rows()); }
};

namespace detail {

inline void check_adjacency(const Eigen::MatrixXd& a, const char* name) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(name) + ": matrix must be square");
  for (int i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0)
      throw std::invalid_argument(std::string(name) + ": nonzero diagonal");
    for (int j = 0; j < a.cols(); ++j) {
      double x = a(i, j);
      if (x != 0.0 && x != 1.0)
        throw std::invalid_argument(std::string(name) + ": entries must be 0/1");
      if (x != a(j, i))
        throw std::invalid_argument(std::string(name) + ": matrix must be symmetric");
    }
  }
}

inline Eigen::MatrixXd center_and_embed(const Eigen::MatrixXd& a, int target) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(target, target);
  out.topLeftCorner(n, n) =
      2.0 * a - (Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n));
  return out;
}

}  // namespace detail

/// Applies the +1/-1 centering to both adjacency matrices and zero-pads the
/// smaller one up to the common size max(n_a, n_b). Centering is applied even
/// when the sizes already agree.
inline PaddedPair pad_and_center(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b, int seed_count) {
  detail::check_adjacency(a, "pad_and_center(a)");
  detail::check_adjacency(b, "pad_and_center(b)");
  const int na = static_cast<int>(a.rows());
  const int nb = static_cast<int>(b.rows());
  if (seed_count < 0 || seed_count > std::min(na, nb))
    throw std::invalid_argument("pad_and_center: seed count out of range");
  const int target = std::max(na, nb);
  PaddedPair out;
  out.a = detail::center_and_embed(a, target);
  out.b = detail::center_and_embed(b, target);
  out.seed_count = seed_count;
  out.orig_a = na;
  out.orig_b = nb;
  return out;
}

/// Seed/non-seed block decomposition of a padded pair. a11 is seeds-by-seeds,
/// a22 non-seeds-by-non-seeds, and the b-blocks come from the second matrix.
struct Blocks {
  Eigen::MatrixXd a11, a12, a21, a22;
  Eigen::MatrixXd b11, b12, b21, b22;
  bool symmetric = false;

  int seed_count() const { return static_cast<int>(a11.rows()); }
  int free_count() const { return static_cast<int>(a22.rows()); }
};

inline Blocks split_blocks(const PaddedPair& pair) {
  const int s = pair.seed_count;
  const int d = pair.dim() - s;
  Blocks blk;
  blk.a11 = pair.a.topLeftCorner(s, s);
  blk.a12 = pair.a.topRightCorner(s, d);
  blk.a21 = pair.a.bottomLeftCorner(d, s);
  blk.a22 = pair.a.bottomRightCorner(d, d);
  blk.b11 = pair.b.topLeftCorner(s, s);
  blk.b12 = pair.b.topRightCorner(s, d);
  blk.b21 = pair.b.bottomLeftCorner(d, s);
  blk.b22 = pair.b.bottomRightCorner(d, d);
  blk.symmetric = blk.a22.isApprox(blk.a22.transpose(), 0.0) &&
                  blk.b22.isApprox(blk.b22.transpose(), 0.0);
  return blk;
}

namespace detail {

inline void check_iterate_dims(const Blocks& blk, const Eigen::MatrixXd& p,
                               const char* op) {
  const int d = blk.free_count();
  const int s = blk.seed_count();
  if (p.rows() != d || p.cols() != d)
    throw std::invalid_argument(std::string(op) + ": iterate dimension mismatch");
  if (blk.a21.rows() != d || blk.a21.cols() != s || blk.a12.rows() != s ||
      blk.a12.cols() != d || blk.b21.rows() != d || blk.b12.cols() != d ||
      blk.b22.rows() != d || blk.b22.cols() != d)
    throw std::invalid_argument(std::string(op) + ": block dimension mismatch");
}

inline Eigen::MatrixXd linear_gradient(const Blocks& blk) {
  return blk.a21 * blk.b21.transpose() + blk.a12.transpose() * blk.b12;
}

}  // namespace detail

/// Objective of the seed-split trace form:
///   f(P) = tr(P^T a21 b21^T) + tr(P^T a12^T b12) + tr(a22^T P b22 P^T).
inline double objective_f(const Blocks& blk, const Eigen::MatrixXd& p) {
  detail::check_iterate_dims(blk, p, "objective_f");
  double lin = (blk.a21 * blk.b21.transpose()).cwiseProduct(p).sum() +
               (blk.a12.transpose() * blk.b12).cwiseProduct(p).sum();
  double quad = (blk.a22.transpose() * p * blk.b22).cwiseProduct(p).sum();
  return lin + quad;
}

/// Gradient of objective_f:
///   a21 b21^T + a12^T b12 + a22 P b22^T + a22^T P b22.
inline Eigen::MatrixXd gradient_f(const Blocks& blk, const Eigen::MatrixXd& p) {
  detail::check_iterate_dims(blk, p, "gradient_f");
  Eigen::MatrixXd g = detail::linear_gradient(blk);
  Eigen::MatrixXd x2 = blk.a22.transpose() * p * blk.b22;
  if (blk.symmetric) {
    g += 2.0 * x2;
  } else {
    g += blk.a22 * p * blk.b22.transpose() + x2;
  }
  return g;
}

namespace detail {

/// Coefficients of the quadratic alpha |-> f(alpha*p + (1-alpha)*q),
/// given xp = a22^T p b22 and xq = a22^T q b22.
struct SegmentQuadratic {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

inline SegmentQuadratic segment_quadratic(const Eigen::MatrixXd& glin,
                                          const Eigen::MatrixXd& p,
                                          const Eigen::MatrixXd& q,
                                          const Eigen::MatrixXd& xp,
                                          const Eigen::MatrixXd& xq) {
  Eigen::MatrixXd d = p - q;
  Eigen::MatrixXd xd = xp - xq;
  SegmentQuadratic seg;
  seg.c2 = xd.cwiseProduct(d).sum();
  seg.c1 = glin.cwiseProduct(d).sum() + xd.cwiseProduct(q).sum() +
           xq.cwiseProduct(d).sum();
  seg.c0 = glin.cwiseProduct(q).sum() + xq.cwiseProduct(q).sum();
  return seg;
}

/// Exact argmax of c2*a^2 + c1*a over [0, 1]; endpoint ties keep a = 1.
inline double maximize_on_unit_interval(double c2, double c1) {
  if (c2 < 0.0) {
    double critical = -c1 / (2.0 * c2);
    if (critical >= 0.0 && critical <= 1.0) return critical;
  }
  return (c2 + c1 >= 0.0) ? 1.0 : 0.0;
}

}  // namespace detail

/// Exact step size for the segment alpha*p + (1-alpha)*q: the objective along
/// it is a quadratic in alpha, maximized in closed form. Ties return 1
/// (keep the current iterate p).
inline double line_search(const Blocks& blk, const Eigen::MatrixXd& p,
                          const Eigen::MatrixXd& q) {
  detail::check_iterate_dims(blk, p, "line_search");
  detail::check_iterate_dims(blk, q, "line_search");
  if (!is_doubly_stochastic(p) || !is_doubly_stochastic(q))
    throw std::invalid_argument("line_search: inputs must be doubly stochastic");
  Eigen::MatrixXd glin = detail::linear_gradient(blk);
  Eigen::MatrixXd xp = blk.a22.transpose() * p * blk.b22;
  Eigen::MatrixXd xq = blk.a22.transpose() * q * blk.b22;
  auto seg = detail::segment_quadratic(glin, p, q, xp, xq);
  return detail::maximize_on_unit_interval(seg.c2, seg.c1);
}

struct SgmRunResult {
  /// Bijection on the non-seed indices: non-seed i of the first graph is
  /// matched to non-seed permutation[i] of the second.
  std::vector<int> permutation;
  /// Objective of the returned permutation matrix.
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FwTrace {
  std::vector<double> objectives;
  double max_row_col_error = 0.0;
};

namespace detail {

inline double row_col_error(const Eigen::MatrixXd& p) {
  double err = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    err = std::max(err, std::abs(p.row(i).sum() - 1.0));
    err = std::max(err, std::abs(p.col(i).sum() - 1.0));
  }
  return err;
}

/// a22^T * Q * b22 with Q the permutation matrix of sigma; the left product
/// is a column permutation, so only one dense multiply is needed.
inline Eigen::MatrixXd permuted_quad_product(const Eigen::MatrixXd& a22t,
                                             const std::vector<int>& sigma,
                                             const Eigen::MatrixXd& b22) {
  const int d = static_cast<int>(sigma.size());
  Eigen::MatrixXd c(d, d);
  for (int k = 0; k < d; ++k) c.col(sigma[static_cast<std::size_t>(k)]) = a22t.col(k);
  return c * b22;
}

}  // namespace detail

/// One Frank-Wolfe run on the relaxed objective, starting from p0 and
/// stopping when the objective change drops to eps * max(1, |f(p0)|) or
/// max_iter is hit. The final iterate is projected to the nearest permutation
/// by linear assignment on the iterate itself. The objective sequence is
/// non-decreasing: each step takes the exact maximizer on a segment that
/// contains the current point.
inline SgmRunResult frank_wolfe_sgm(const PaddedPair& pair,
                                    const Eigen::MatrixXd& p0, double eps,
                                    int max_iter, FwTrace* trace = nullptr) {
  if (eps <= 0.0) throw std::invalid_argument("frank_wolfe_sgm: eps must be > 0");
  if (max_iter < 1)
    throw std::invalid_argument("frank_wolfe_sgm: max_iter must be >= 1");
  Blocks blk = split_blocks(pair);
  const int d = blk.free_count();
  if (d < 1)
    throw std::invalid_argument("frank_wolfe_sgm: no non-seed vertices to match");
  if (p0.rows() != d || p0.cols() != d || !is_doubly_stochastic(p0))
    throw std::invalid_argument(
        "frank_wolfe_sgm: p0 must be doubly stochastic of the non-seed size");

  const Eigen::MatrixXd glin = detail::linear_gradient(blk);
  const Eigen::MatrixXd a22t = blk.a22.transpose();

  Eigen::MatrixXd p = p0;
  Eigen::MatrixXd xp = a22t * p * blk.b22;
  double f_curr = glin.cwiseProduct(p).sum() + xp.cwiseProduct(p).sum();
  const double threshold = eps * std::max(1.0, std::abs(f_curr));

  if (trace) {
    trace->objectives.push_back(f_curr);
    trace->max_row_col_error =
        std::max(trace->max_row_col_error, detail::row_col_error(p));
  }

  SgmRunResult result;
  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::MatrixXd grad = blk.symmetric
                               ? Eigen::MatrixXd(glin + 2.0 * xp)
                               : Eigen::MatrixXd(glin + xp +
                                                 blk.a22 * p * blk.b22.transpose());
    AssignmentResult direction = max_assignment(grad);
    Eigen::MatrixXd q = permutation_matrix(direction.permutation);
    Eigen::MatrixXd xq =
        detail::permuted_quad_product(a22t, direction.permutation, blk.b22);

    auto seg = detail::segment_quadratic(glin, p, q, xp, xq);
    double alpha = detail::maximize_on_unit_interval(seg.c2, seg.c1);

    p = alpha * p + (1.0 - alpha) * q;
    xp = alpha * xp + (1.0 - alpha) * xq;
    double f_next = glin.cwiseProduct(p).sum() + xp.cwiseProduct(p).sum();

    result.iterations = iter;
    if (trace) {
      trace->objectives.push_back(f_next);
      trace->max_row_col_error =
          std::max(trace->max_row_col_error, detail::row_col_error(p));
    }
    bool done = std::abs(f_next - f_curr) <= threshold;
    f_curr = f_next;
    if (done) {
      result.converged = true;
      break;
    }
  }

  AssignmentResult projection = max_assignment(p);
  result.permutation = projection.permutation;
  result.final_objective =
      objective_f(blk, permutation_matrix(projection.permutation));
  return result;
}

}  // namespace vnmatch
