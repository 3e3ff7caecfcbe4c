#pragma once

// Box-constrained mixed linear complementarity problems:
//
//   find z, w >= 0, v >= 0 with  M z + q = w - v,  l <= z <= u,
//                                (z - l)^T w = 0,  (u - z)^T v = 0.
//
// Bounds may be infinite. Three solvers are provided: an exhaustive
// active-set enumeration (the reference), Lemke's method on the
// bounded-variable reformulation, and projected SOR.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>

namespace multisurf {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct MlcpProblem {
  DenseMatrix<Scalar> M;
  DenseVector<Scalar> q;
  DenseVector<Scalar> l;
  DenseVector<Scalar> u;

  Eigen::Index dim() const { return q.size(); }
};

enum class MlcpStatus { solved, infeasible, max_iterations };

inline const char* to_string(MlcpStatus s) {
  switch (s) {
    case MlcpStatus::solved: return "solved";
    case MlcpStatus::infeasible: return "infeasible";
    case MlcpStatus::max_iterations: return "max-iterations";
  }
  return "unknown";
}

template <typename Scalar>
struct MlcpSolution {
  DenseVector<Scalar> z;
  DenseVector<Scalar> w;
  DenseVector<Scalar> v;
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  MlcpStatus status = MlcpStatus::infeasible;
  int iterations = 0;
};

/// One implicit sign step: find s with y = b - W s and s in Sgn(y).
template <typename Scalar>
struct SignStepProblem {
  DenseMatrix<Scalar> W;
  DenseVector<Scalar> b;
};

enum class SolverKind { automatic, enumerative, psor, pivoting };

struct MlcpOptions {
  double tol = 1e-10;          // feasibility / complementarity
  int enumerative_cap = 12;    // largest m the enumerative solver accepts
  double omega = 1.0;          // PSOR relaxation
  int max_iter = 5000;         // PSOR sweeps
  double psor_tol = 1e-12;     // PSOR successive-iterate threshold
  int max_pivots = 10000;      // Lemke pivots
};

using MlcpProblemd = MlcpProblem<double>;
using MlcpSolutiond = MlcpSolution<double>;
using SignStepProblemd = SignStepProblem<double>;

template <typename Scalar>
constexpr Scalar infinite_bound() {
  return std::numeric_limits<Scalar>::infinity();
}

template <typename Scalar>
void validate(const MlcpProblem<Scalar>& p) {
  const auto m = p.dim();
  if (p.M.rows() != m || p.M.cols() != m || p.l.size() != m || p.u.size() != m)
    throw std::invalid_argument("MLCP data dimensions are inconsistent");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(p.l(i) <= p.u(i))) throw std::invalid_argument("MLCP requires l <= u");
    if (p.l(i) == infinite_bound<Scalar>() || p.u(i) == -infinite_bound<Scalar>())
      throw std::invalid_argument("MLCP bounds must satisfy l < +inf and u > -inf");
  }
}

/// M = W, q = -b, bounds [-1, 1]. The surface value is recovered as y = b - W z = v - w.
template <typename Scalar>
MlcpProblem<Scalar> from_sign_step(const SignStepProblem<Scalar>& sp) {
  const auto m = sp.b.size();
  if (sp.W.rows() != m || sp.W.cols() != m) throw std::invalid_argument("sign step data dimensions are inconsistent");
  return {sp.W, -sp.b, DenseVector<Scalar>::Constant(m, Scalar(-1)), DenseVector<Scalar>::Constant(m, Scalar(1))};
}

template <typename Scalar>
struct CertifyReport {
  Scalar box = 0;
  Scalar equation = 0;
  Scalar complementarity = 0;
  Scalar sign = 0;

  Scalar total() const { return std::max({box, equation, complementarity, sign}); }
};

template <typename Scalar>
CertifyReport<Scalar> certify_report(const MlcpProblem<Scalar>& p, const DenseVector<Scalar>& z,
                                     const DenseVector<Scalar>& w, const DenseVector<Scalar>& v) {
  CertifyReport<Scalar> r;
  const auto m = p.dim();
  if (m == 0) return r;
  const DenseVector<Scalar> res = p.M * z + p.q - w + v;
  r.equation = res.cwiseAbs().maxCoeff();
  Scalar lower_dot = 0;
  Scalar upper_dot = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    r.box = std::max({r.box, p.l(i) - z(i), z(i) - p.u(i)});
    r.sign = std::max({r.sign, -w(i), -v(i)});
    if (std::isfinite(p.l(i)))
      lower_dot += (z(i) - p.l(i)) * w(i);
    else
      r.complementarity = std::max(r.complementarity, std::abs(w(i)));
    if (std::isfinite(p.u(i)))
      upper_dot += (p.u(i) - z(i)) * v(i);
    else
      r.complementarity = std::max(r.complementarity, std::abs(v(i)));
  }
  r.complementarity = std::max({r.complementarity, std::abs(lower_dot), std::abs(upper_dot)});
  return r;
}

/// Largest violation of the MLCP conditions by (z, w, v).
template <typename Scalar>
Scalar certify(const MlcpProblem<Scalar>& p, const MlcpSolution<Scalar>& s) {
  return certify_report(p, s.z, s.w, s.v).total();
}

/// Plain-text dump (M rows, q, l, u) for failing instances.
template <typename Scalar>
std::string dump(const MlcpProblem<Scalar>& p) {
  std::ostringstream os;
  os.precision(17);
  os << "MLCP dim " << p.dim() << "\n";
  for (Eigen::Index i = 0; i < p.M.rows(); ++i) {
    os << "M";
    for (Eigen::Index j = 0; j < p.M.cols(); ++j) os << ' ' << p.M(i, j);
    os << '\n';
  }
  auto row = [&](const char* name, const DenseVector<Scalar>& v) {
    os << name;
    for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << v(i);
    os << '\n';
  };
  row("q", p.q);
  row("l", p.l);
  row("u", p.u);
  return os.str();
}

namespace detail {

enum class Activity : std::uint8_t { interior, lower, upper };

template <typename Scalar>
Scalar problem_scale(const MlcpProblem<Scalar>& p) {
  Scalar s = 1;
  if (p.dim() > 0) s = std::max({s, p.M.cwiseAbs().maxCoeff(), p.q.cwiseAbs().maxCoeff()});
  return s;
}

// w and v as the positive and negative parts of M z + q.
template <typename Scalar>
MlcpSolution<Scalar> complete(const MlcpProblem<Scalar>& p, DenseVector<Scalar> z, MlcpStatus status,
                              int iterations) {
  MlcpSolution<Scalar> s;
  const DenseVector<Scalar> r = p.M * z + p.q;
  s.z = std::move(z);
  s.w = r.cwiseMax(Scalar(0));
  s.v = (-r).cwiseMax(Scalar(0));
  s.status = status;
  s.iterations = iterations;
  s.residual = certify(p, s);
  return s;
}

// Solves the interior block for a fixed activity pattern. Rank-deficient but
// consistent blocks take the minimum-norm solution; inconsistent ones fail.
template <typename Scalar>
std::optional<DenseVector<Scalar>> solve_activity(const MlcpProblem<Scalar>& p,
                                                  const std::vector<Activity>& act, Scalar tol) {
  const auto m = p.dim();
  DenseVector<Scalar> z = DenseVector<Scalar>::Zero(m);
  std::vector<Eigen::Index> interior;
  for (Eigen::Index i = 0; i < m; ++i) {
    switch (act[static_cast<std::size_t>(i)]) {
      case Activity::lower: z(i) = p.l(i); break;
      case Activity::upper: z(i) = p.u(i); break;
      case Activity::interior: interior.push_back(i); break;
    }
  }
  if (interior.empty()) return z;

  const auto k = static_cast<Eigen::Index>(interior.size());
  DenseMatrix<Scalar> block(k, k);
  DenseVector<Scalar> rhs(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto i = interior[static_cast<std::size_t>(a)];
    rhs(a) = -p.q(i);
    for (Eigen::Index j = 0; j < m; ++j)
      if (act[static_cast<std::size_t>(j)] != Activity::interior) rhs(a) -= p.M(i, j) * z(j);
    for (Eigen::Index b = 0; b < k; ++b) block(a, b) = p.M(i, interior[static_cast<std::size_t>(b)]);
  }

  DenseVector<Scalar> zi;
  Eigen::FullPivLU<DenseMatrix<Scalar>> lu(block);
  if (lu.isInvertible()) {
    zi = lu.solve(rhs);
  } else {
    zi = block.completeOrthogonalDecomposition().solve(rhs);
    const Scalar scale = std::max(Scalar(1), rhs.cwiseAbs().maxCoeff());
    if ((block * zi - rhs).cwiseAbs().maxCoeff() > tol * scale) return std::nullopt;
  }
  for (Eigen::Index a = 0; a < k; ++a) z(interior[static_cast<std::size_t>(a)]) = zi(a);
  return z;
}

template <typename Scalar>
bool activity_feasible(const MlcpProblem<Scalar>& p, const std::vector<Activity>& act,
                       const DenseVector<Scalar>& z, Scalar tol) {
  const DenseVector<Scalar> r = p.M * z + p.q;
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    switch (act[static_cast<std::size_t>(i)]) {
      case Activity::interior:
        if (z(i) < p.l(i) - tol || z(i) > p.u(i) + tol) return false;
        break;
      case Activity::lower:
        if (r(i) < -tol) return false;
        break;
      case Activity::upper:
        if (r(i) > tol) return false;
        break;
    }
  }
  return true;
}

template <typename Scalar>
std::vector<Activity> classify(const MlcpProblem<Scalar>& p, const DenseVector<Scalar>& z, Scalar tol) {
  std::vector<Activity> act(static_cast<std::size_t>(p.dim()), Activity::interior);
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    if (std::isfinite(p.l(i)) && z(i) - p.l(i) <= tol)
      act[static_cast<std::size_t>(i)] = Activity::lower;
    else if (std::isfinite(p.u(i)) && p.u(i) - z(i) <= tol)
      act[static_cast<std::size_t>(i)] = Activity::upper;
  }
  return act;
}

// Re-solves the interior block of the active set identified by z; keeps the
// result only when it certifies at least as well as the input.
template <typename Scalar>
MlcpSolution<Scalar> polish(const MlcpProblem<Scalar>& p, MlcpSolution<Scalar> s, Scalar tol) {
  if (p.dim() == 0) return s;
  const auto act = classify(p, s.z, Scalar(1e-9));
  auto z = solve_activity(p, act, tol);
  if (!z || !activity_feasible(p, act, *z, tol * problem_scale(p))) return s;
  auto polished = complete(p, std::move(*z), s.status, s.iterations);
  return polished.residual <= s.residual ? polished : s;
}

// Rows and columns that vanish entirely with q_i = 0 leave z_i arbitrary in
// its box; the canonical choice is the point of the box closest to 0.
template <typename Scalar>
void canonicalize_degenerate(const MlcpProblem<Scalar>& p, DenseVector<Scalar>& z) {
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    if (p.q(i) == Scalar(0) && p.M.row(i).isZero(0) && p.M.col(i).isZero(0))
      z(i) = std::clamp(Scalar(0), p.l(i), p.u(i));
  }
}

struct LemkeResult {
  enum class Outcome { solved, ray, pivot_limit } outcome;
  int pivots = 0;
};

// Lemke's complementary pivoting for  w = A xi + c,  w, xi >= 0,  w^T xi = 0,
// with covering vector e and a lexicographic ratio test.
template <typename Scalar>
LemkeResult lemke(const DenseMatrix<Scalar>& A, const DenseVector<Scalar>& c, DenseVector<Scalar>& xi,
                  int max_pivots) {
  const auto n = c.size();
  xi = DenseVector<Scalar>::Zero(n);
  if (n == 0 || c.minCoeff() >= Scalar(0)) return {LemkeResult::Outcome::solved, 0};

  // Columns: w (0..n-1), xi (n..2n-1), artificial z0 (2n). Tableau is B^-1 [I, -A, -e].
  const Eigen::Index z0 = 2 * n;
  DenseMatrix<Scalar> T(n, 2 * n + 1);
  T.leftCols(n).setIdentity();
  T.middleCols(n, n) = -A;
  T.col(z0).setConstant(Scalar(-1));
  DenseVector<Scalar> rhs = c;
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) basis[static_cast<std::size_t>(i)] = i;

  const Scalar eps = Scalar(1e-12) * std::max(Scalar(1), A.cwiseAbs().maxCoeff());

  auto pivot = [&](Eigen::Index row, Eigen::Index col) {
    const Scalar piv = T(row, col);
    T.row(row) /= piv;
    rhs(row) /= piv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == row) continue;
      const Scalar f = T(i, col);
      if (f != Scalar(0)) {
        T.row(i) -= f * T.row(row);
        rhs(i) -= f * rhs(row);
      }
    }
    basis[static_cast<std::size_t>(row)] = col;
  };

  Eigen::Index row = 0;
  rhs.minCoeff(&row);
  Eigen::Index leaving = basis[static_cast<std::size_t>(row)];
  pivot(row, z0);
  int pivots = 1;

  while (pivots < max_pivots) {
    const Eigen::Index entering = leaving < n ? leaving + n : leaving - n;
    // Lexicographic minimum ratio over rows with a positive column entry.
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (T(i, entering) <= eps) continue;
      if (best < 0) {
        best = i;
        continue;
      }
      const Scalar ri = rhs(i) / T(i, entering);
      const Scalar rb = rhs(best) / T(best, entering);
      const Scalar tie = eps * std::max({Scalar(1), std::abs(ri), std::abs(rb)});
      if (ri < rb - tie) {
        best = i;
      } else if (std::abs(ri - rb) <= tie) {
        if (basis[static_cast<std::size_t>(i)] == z0) {
          best = i;
          continue;
        }
        if (basis[static_cast<std::size_t>(best)] == z0) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
          const Scalar a = T(i, j) / T(i, entering);
          const Scalar b = T(best, j) / T(best, entering);
          if (std::abs(a - b) <= eps) continue;
          if (a < b) best = i;
          break;
        }
      }
    }
    if (best < 0) return {LemkeResult::Outcome::ray, pivots};
    leaving = basis[static_cast<std::size_t>(best)];
    pivot(best, entering);
    ++pivots;
    if (leaving == z0) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto var = basis[static_cast<std::size_t>(i)];
        if (var >= n && var < 2 * n) xi(var - n) = std::max(Scalar(0), rhs(i));
      }
      return {LemkeResult::Outcome::solved, pivots};
    }
  }
  return {LemkeResult::Outcome::pivot_limit, pivots};
}

}  // namespace detail

/// Reference solver: tries every activity pattern (interior < lower < upper per
/// coordinate, first coordinate most significant) and returns the first feasible one.
template <typename Scalar>
MlcpSolution<Scalar> solve_enumerative(const MlcpProblem<Scalar>& p, const MlcpOptions& opt = {}) {
  validate(p);
  const auto m = p.dim();
  if (m > opt.enumerative_cap)
    throw std::invalid_argument("enumerative solver limited to m <= " + std::to_string(opt.enumerative_cap));
  if (m == 0) return detail::complete(p, DenseVector<Scalar>(), MlcpStatus::solved, 0);

  const Scalar tol = Scalar(opt.tol) * detail::problem_scale(p);
  std::vector<detail::Activity> act(static_cast<std::size_t>(m), detail::Activity::interior);
  int tried = 0;
  while (true) {
    bool admissible = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto a = act[static_cast<std::size_t>(i)];
      if ((a == detail::Activity::lower && !std::isfinite(p.l(i))) ||
          (a == detail::Activity::upper && !std::isfinite(p.u(i))))
        admissible = false;
    }
    if (admissible) {
      ++tried;
      if (auto z = detail::solve_activity(p, act, Scalar(opt.tol))) {
        if (detail::activity_feasible(p, act, *z, tol)) {
          for (Eigen::Index i = 0; i < m; ++i) (*z)(i) = std::clamp((*z)(i), p.l(i), p.u(i));
          return detail::complete(p, std::move(*z), MlcpStatus::solved, tried);
        }
      }
    }
    // Base-3 increment with the last coordinate varying fastest.
    Eigen::Index pos = m - 1;
    while (pos >= 0) {
      auto& a = act[static_cast<std::size_t>(pos)];
      if (a == detail::Activity::upper) {
        a = detail::Activity::interior;
        --pos;
      } else {
        a = a == detail::Activity::interior ? detail::Activity::lower : detail::Activity::upper;
        break;
      }
    }
    if (pos < 0) break;
  }
  MlcpSolution<Scalar> none;
  none.z = DenseVector<Scalar>::Zero(m);
  none.w = none.z;
  none.v = none.z;
  none.status = MlcpStatus::infeasible;
  none.iterations = tried;
  return none;
}

/// Projected Gauss-Seidel with relaxation omega.
template <typename Scalar>
MlcpSolution<Scalar> solve_psor(const MlcpProblem<Scalar>& p, const MlcpOptions& opt = {},
                                const DenseVector<Scalar>* warm_start = nullptr) {
  validate(p);
  const auto m = p.dim();
  if (!(opt.omega > 0.0 && opt.omega < 2.0)) throw std::invalid_argument("PSOR relaxation must lie in (0, 2)");
  for (Eigen::Index i = 0; i < m; ++i)
    if (p.M(i, i) == Scalar(0)) throw std::invalid_argument("PSOR requires a nonzero diagonal");

  DenseVector<Scalar> z(m);
  for (Eigen::Index i = 0; i < m; ++i)
    z(i) = std::clamp(warm_start && warm_start->size() == m ? (*warm_start)(i) : Scalar(0), p.l(i), p.u(i));

  const Scalar omega = Scalar(opt.omega);
  for (int it = 1; it <= opt.max_iter; ++it) {
    Scalar change = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Scalar r = p.M.row(i).dot(z) + p.q(i);
      const Scalar next = std::clamp(z(i) - omega * r / p.M(i, i), p.l(i), p.u(i));
      change = std::max(change, std::abs(next - z(i)));
      z(i) = next;
    }
    if (change < Scalar(opt.psor_tol)) {
      auto s = detail::complete(p, std::move(z), MlcpStatus::solved, it);
      return detail::polish(p, std::move(s), Scalar(opt.tol));
    }
  }
  return detail::complete(p, std::move(z), MlcpStatus::max_iterations, opt.max_iter);
}

/// Lemke's method on the bounded-variable reformulation. Doubly unbounded
/// coordinates are eliminated first through their (nonsingular) block.
template <typename Scalar>
MlcpSolution<Scalar> solve_pivoting(const MlcpProblem<Scalar>& p, const MlcpOptions& opt = {}) {
  using Mat = DenseMatrix<Scalar>;
  using Vec = DenseVector<Scalar>;
  validate(p);
  const auto m = p.dim();
  if (m == 0) return detail::complete(p, Vec(), MlcpStatus::solved, 0);

  std::vector<Eigen::Index> free_idx;
  std::vector<Eigen::Index> bounded;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::isfinite(p.l(i)) && !std::isfinite(p.u(i)))
      free_idx.push_back(i);
    else
      bounded.push_back(i);
  }
  const auto nf = static_cast<Eigen::Index>(free_idx.size());
  const auto nb = static_cast<Eigen::Index>(bounded.size());
  auto sub = [&](const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols) {
    Mat out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b)
        out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = p.M(rows[a], cols[b]);
    return out;
  };
  auto subv = [&](const Vec& v, const std::vector<Eigen::Index>& idx) {
    Vec out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) out(static_cast<Eigen::Index>(a)) = v(idx[a]);
    return out;
  };

  MlcpSolution<Scalar> failed;
  failed.z = Vec::Zero(m);
  failed.w = failed.z;
  failed.v = failed.z;

  // Schur complement onto the bounded coordinates.
  Mat Mbb = sub(bounded, bounded);
  Vec qb = subv(p.q, bounded);
  Eigen::FullPivLU<Mat> free_lu;
  Mat Mbf, Mfb;
  Vec qf;
  if (nf > 0) {
    free_lu.compute(sub(free_idx, free_idx));
    if (!free_lu.isInvertible()) return failed;
    Mbf = sub(bounded, free_idx);
    Mfb = sub(free_idx, bounded);
    qf = subv(p.q, free_idx);
    Mbb -= Mbf * free_lu.solve(Mfb);
    qb -= Mbf * free_lu.solve(qf);
  }

  // Primary variable per bounded coordinate (distance to its finite bound),
  // plus an upper multiplier for coordinates bounded on both sides.
  Vec base(nb), sigma(nb);
  std::vector<Eigen::Index> boxed;
  for (Eigen::Index j = 0; j < nb; ++j) {
    const auto i = bounded[static_cast<std::size_t>(j)];
    if (std::isfinite(p.l(i))) {
      base(j) = p.l(i);
      sigma(j) = 1;
      if (std::isfinite(p.u(i))) boxed.push_back(j);
    } else {
      base(j) = p.u(i);
      sigma(j) = -1;
    }
  }
  const auto nbox = static_cast<Eigen::Index>(boxed.size());
  const Eigen::Index n = nb + nbox;
  Mat A = Mat::Zero(n, n);
  Vec c(n);
  const Vec r0 = Mbb * base + qb;
  A.topLeftCorner(nb, nb) = sigma.asDiagonal() * Mbb * sigma.asDiagonal();
  c.head(nb) = sigma.cwiseProduct(r0);
  for (Eigen::Index k = 0; k < nbox; ++k) {
    const auto j = boxed[static_cast<std::size_t>(k)];
    const auto i = bounded[static_cast<std::size_t>(j)];
    A(j, nb + k) = 1;
    A(nb + k, j) = -1;
    c(nb + k) = p.u(i) - p.l(i);
  }

  Vec xi;
  const auto res = detail::lemke(A, c, xi, opt.max_pivots);
  if (res.outcome != detail::LemkeResult::Outcome::solved) {
    failed.status = res.outcome == detail::LemkeResult::Outcome::ray ? MlcpStatus::infeasible
                                                                      : MlcpStatus::max_iterations;
    failed.iterations = res.pivots;
    return failed;
  }

  Vec z(m);
  const Vec zb = base + sigma.cwiseProduct(xi.head(nb));
  for (Eigen::Index j = 0; j < nb; ++j) {
    const auto i = bounded[static_cast<std::size_t>(j)];
    z(i) = std::clamp(zb(j), p.l(i), p.u(i));
  }
  if (nf > 0) {
    const Vec zf = -free_lu.solve(qf + Mfb * subv(z, bounded));
    for (Eigen::Index a = 0; a < nf; ++a) z(free_idx[static_cast<std::size_t>(a)]) = zf(a);
  }
  auto s = detail::complete(p, std::move(z), MlcpStatus::solved, res.pivots);
  s = detail::polish(p, std::move(s), Scalar(opt.tol));
  detail::canonicalize_degenerate(p, s.z);
  return detail::complete(p, std::move(s.z), MlcpStatus::solved, res.pivots);
}

/// Dispatches to one solver, or for `automatic` tries pivoting, then PSOR,
/// then enumeration, accepting the first certified solution.
template <typename Scalar>
MlcpSolution<Scalar> solve(const MlcpProblem<Scalar>& p, SolverKind kind = SolverKind::automatic,
                           const MlcpOptions& opt = {}) {
  switch (kind) {
    case SolverKind::enumerative: return solve_enumerative(p, opt);
    case SolverKind::psor: return solve_psor(p, opt);
    case SolverKind::pivoting: return solve_pivoting(p, opt);
    case SolverKind::automatic: break;
  }
  const Scalar accept = Scalar(10 * opt.tol) * detail::problem_scale(p);
  auto best = solve_pivoting(p, opt);
  if (best.status == MlcpStatus::solved && best.residual <= accept) return best;
  if (p.dim() == 0 || p.M.diagonal().cwiseAbs().minCoeff() > Scalar(0)) {
    auto s = solve_psor(p, opt);
    if (s.status == MlcpStatus::solved && s.residual <= accept) return s;
    if (s.residual < best.residual) best = std::move(s);
  }
  if (p.dim() <= opt.enumerative_cap) {
    auto s = solve_enumerative(p, opt);
    if (s.status == MlcpStatus::solved) return s;
  }
  if (best.status == MlcpStatus::solved) best.status = MlcpStatus::infeasible;
  return best;
}

}  // namespace multisurf
