#include "ilcsos/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "ilcsos/errors.hpp"

namespace ilcsos {

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::infeasible:
      return "infeasible";
    case SdpStatus::unbounded:
      return "unbounded";
    case SdpStatus::numerical_failure:
      return "numerical_failure";
  }
  return "unknown";
}

int SdpProblem::add_block(int dim) {
  if (dim <= 0) throw InvalidProblem("block dimension must be positive");
  block_dims.push_back(dim);
  return static_cast<int>(block_dims.size()) - 1;
}

int SdpProblem::add_scalar(std::string name, double cost) {
  scalar_names.push_back(std::move(name));
  objective.push_back(cost);
  return num_scalars() - 1;
}

void SdpProblem::validate() const {
  if (objective.size() != scalar_names.size()) throw InvalidProblem("objective length differs from scalar count");
  for (int d : block_dims) {
    if (d <= 0) throw InvalidProblem("block dimension must be positive");
  }
  for (const auto& eq : equalities) {
    for (const auto& t : eq.gram) {
      if (t.block < 0 || t.block >= static_cast<int>(block_dims.size())) throw InvalidProblem("equality references an undeclared block");
      const int n = block_dims[static_cast<std::size_t>(t.block)];
      if (t.row < 0 || t.col < t.row || t.col >= n) throw InvalidProblem("gram term index outside its block upper triangle");
      if (!std::isfinite(t.coef)) throw InvalidProblem("non-finite gram coefficient");
    }
    for (const auto& s : eq.scalars) {
      if (s.index < 0 || s.index >= num_scalars()) throw InvalidProblem("equality references an undeclared scalar");
      if (!std::isfinite(s.coef)) throw InvalidProblem("non-finite scalar coefficient");
    }
    if (!std::isfinite(eq.rhs)) throw InvalidProblem("non-finite right-hand side");
  }
}

SdpProblem SdpProblem::with_fixed_scalar(int index, double value) const {
  if (index < 0 || index >= num_scalars()) throw InvalidProblem("fixed scalar index out of range");
  SdpProblem out = *this;
  out.objective_constant += objective[static_cast<std::size_t>(index)] * value;
  out.objective[static_cast<std::size_t>(index)] = 0.0;
  for (auto& eq : out.equalities) {
    for (auto it = eq.scalars.begin(); it != eq.scalars.end();) {
      if (it->index == index) {
        eq.rhs -= it->coef * value;
        it = eq.scalars.erase(it);
      } else {
        ++it;
      }
    }
  }
  return out;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Blocks = std::vector<MatrixXd>;

// Operator data in packed upper-triangular coordinates.
struct Operator {
  std::vector<int> dims;
  std::vector<int> offsets;
  int nvec = 0;
  int m = 0;
  int nf = 0;
  Eigen::SparseMatrix<double> A;  // m x nvec
  MatrixXd B;                     // m x nf
  VectorXd b;
  VectorXd f;
  // Per equality, per block: list of gram terms.
  struct BlockTerms {
    int block;
    std::vector<GramTerm> terms;
  };
  std::vector<std::vector<BlockTerms>> eq_terms;

  int pos(int blk, int p, int q) const { return offsets[static_cast<std::size_t>(blk)] + q * (q + 1) / 2 + p; }

  VectorXd svec(const Blocks& Y) const {
    VectorXd v(nvec);
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const int n = dims[k];
      for (int q = 0; q < n; ++q) {
        for (int p = 0; p <= q; ++p) v(pos(static_cast<int>(k), p, q)) = p == q ? Y[k](p, p) : 0.5 * (Y[k](p, q) + Y[k](q, p));
      }
    }
    return v;
  }

  VectorXd apply(const Blocks& Y) const { return A * svec(Y); }

  Blocks adjoint(const VectorXd& w) const {
    VectorXd v = A.transpose() * w;
    Blocks Y(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const int n = dims[k];
      Y[k].setZero(n, n);
      for (int q = 0; q < n; ++q) {
        for (int p = 0; p <= q; ++p) {
          const double val = v(pos(static_cast<int>(k), p, q));
          if (p == q) {
            Y[k](p, p) = val;
          } else {
            Y[k](p, q) = 0.5 * val;
            Y[k](q, p) = 0.5 * val;
          }
        }
      }
    }
    return Y;
  }
};

Operator build_operator(const SdpProblem& pb) {
  Operator op;
  op.dims = pb.block_dims;
  op.offsets.resize(op.dims.size());
  for (std::size_t k = 0; k < op.dims.size(); ++k) {
    op.offsets[k] = op.nvec;
    op.nvec += op.dims[k] * (op.dims[k] + 1) / 2;
  }
  op.m = static_cast<int>(pb.equalities.size());
  op.nf = pb.num_scalars();
  op.B = MatrixXd::Zero(op.m, op.nf);
  op.b.resize(op.m);
  op.f = Eigen::Map<const VectorXd>(pb.objective.data(), op.nf);
  std::vector<Eigen::Triplet<double>> trips;
  op.eq_terms.resize(static_cast<std::size_t>(op.m));
  for (int i = 0; i < op.m; ++i) {
    const auto& eq = pb.equalities[static_cast<std::size_t>(i)];
    op.b(i) = eq.rhs;
    for (const auto& s : eq.scalars) op.B(i, s.index) += s.coef;
    for (const auto& t : eq.gram) {
      trips.emplace_back(i, op.pos(t.block, t.row, t.col), t.coef);
      auto& lst = op.eq_terms[static_cast<std::size_t>(i)];
      auto it = std::find_if(lst.begin(), lst.end(), [&](const auto& bt) { return bt.block == t.block; });
      if (it == lst.end()) {
        lst.push_back({t.block, {t}});
      } else {
        it->terms.push_back(t);
      }
    }
  }
  op.A.resize(op.m, op.nvec);
  op.A.setFromTriplets(trips.begin(), trips.end());
  op.A.makeCompressed();
  return op;
}

double inner(const Blocks& X, const Blocks& Z) {
  double s = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) s += X[k].cwiseProduct(Z[k]).sum();
  return s;
}

double frob(const Blocks& X) {
  double s = 0.0;
  for (const auto& x : X) s += x.squaredNorm();
  return std::sqrt(s);
}

MatrixXd sym(const MatrixXd& Y) { return 0.5 * (Y + Y.transpose()); }

// Largest alpha with X + alpha dX PSD (infinity when unrestricted).
double max_step(const MatrixXd& X, const MatrixXd& dX) {
  const auto n = X.rows();
  if (n == 1) return dX(0, 0) < 0.0 ? -X(0, 0) / dX(0, 0) : std::numeric_limits<double>::infinity();
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd L = llt.matrixL();
  MatrixXd S = L.triangularView<Eigen::Lower>().solve(dX);
  S = L.triangularView<Eigen::Lower>().solve(S.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(S), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

MatrixXd spd_inverse(const MatrixXd& Z) {
  Eigen::LLT<MatrixXd> llt(Z);
  if (llt.info() != Eigen::Success) {
    return Eigen::CompleteOrthogonalDecomposition<MatrixXd>(Z).pseudoInverse();
  }
  return llt.solve(MatrixXd::Identity(Z.rows(), Z.cols()));
}

// HKM Schur complement M_kl = <A_k, X A_l Zinv>.
MatrixXd schur_matrix(const Operator& op, const Blocks& X, const Blocks& Zinv) {
  MatrixXd M = MatrixXd::Zero(op.m, op.m);
  VectorXd v = VectorXd::Zero(op.nvec);
  std::vector<int> row_slot;
  for (int l = 0; l < op.m; ++l) {
    std::vector<int> touched;
    for (const auto& bt : op.eq_terms[static_cast<std::size_t>(l)]) {
      const int blk = bt.block;
      const auto& Xb = X[static_cast<std::size_t>(blk)];
      const auto& Zi = Zinv[static_cast<std::size_t>(blk)];
      const int n = op.dims[static_cast<std::size_t>(blk)];
      row_slot.assign(static_cast<std::size_t>(n), -1);
      std::vector<int> rows;
      for (const auto& t : bt.terms) {
        for (int r : {t.row, t.col}) {
          if (row_slot[static_cast<std::size_t>(r)] < 0) {
            row_slot[static_cast<std::size_t>(r)] = static_cast<int>(rows.size());
            rows.push_back(r);
          }
        }
      }
      MatrixXd T = MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n);
      for (const auto& t : bt.terms) {
        if (t.row == t.col) {
          T.row(row_slot[static_cast<std::size_t>(t.row)]) += t.coef * Zi.row(t.row);
        } else {
          T.row(row_slot[static_cast<std::size_t>(t.row)]) += 0.5 * t.coef * Zi.row(t.col);
          T.row(row_slot[static_cast<std::size_t>(t.col)]) += 0.5 * t.coef * Zi.row(t.row);
        }
      }
      MatrixXd Xc(n, static_cast<Eigen::Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) Xc.col(static_cast<Eigen::Index>(i)) = Xb.col(rows[i]);
      const MatrixXd G = Xc * T;
      const int off = op.offsets[static_cast<std::size_t>(blk)];
      for (int q = 0; q < n; ++q) {
        for (int p = 0; p < q; ++p) v(off + q * (q + 1) / 2 + p) = 0.5 * (G(p, q) + G(q, p));
        v(off + q * (q + 1) / 2 + q) = G(q, q);
      }
      touched.push_back(blk);
    }
    M.col(l) = op.A * v;
    for (int blk : touched) {
      const int off = op.offsets[static_cast<std::size_t>(blk)];
      const int n = op.dims[static_cast<std::size_t>(blk)];
      v.segment(off, n * (n + 1) / 2).setZero();
    }
  }
  return 0.5 * (M + M.transpose());
}

// Factored KKT system [[M, B], [B^T, 0]], solved with partial-pivot LU and
// iterative refinement.
class KktSolver {
 public:
  bool factor(const MatrixXd& M, const MatrixXd& B) {
    const auto m = M.rows();
    const auto nf = B.cols();
    K_.resize(m + nf, m + nf);
    K_.topLeftCorner(m, m) = M;
    K_.topRightCorner(m, nf) = B;
    K_.bottomLeftCorner(nf, m) = B.transpose();
    K_.bottomRightCorner(nf, nf).setZero();
    m_ = m;
    lu_.compute(K_);
    const double rc = lu_.rcond();
    return std::isfinite(rc) && rc > 1e-300;
  }

  void solve(const VectorXd& h, const VectorXd& rf, VectorXd& dw, VectorXd& dy) const {
    VectorXd rhs(K_.rows());
    rhs << h, rf;
    VectorXd sol = lu_.solve(rhs);
    for (int it = 0; it < 2; ++it) {
      const VectorXd r = rhs - K_ * sol;
      sol += lu_.solve(r);
    }
    dw = sol.head(m_);
    dy = sol.tail(K_.rows() - m_);
  }

 private:
  MatrixXd K_;
  Eigen::Index m_ = 0;
  Eigen::PartialPivLU<MatrixXd> lu_;
};

}  // namespace

SdpSolution solve_interior_point(const SdpProblem& problem, const SdpOptions& options) {
  problem.validate();
  const Operator op = build_operator(problem);
  const std::size_t nb = op.dims.size();
  SdpSolution sol;

  if (op.m == 0) {
    // Nothing constrains the scalars: bounded only if the objective vanishes.
    const bool bounded = op.f.lpNorm<Eigen::Infinity>() == 0.0;
    sol.status = bounded ? SdpStatus::optimal : SdpStatus::unbounded;
    sol.scalar_values.assign(static_cast<std::size_t>(op.nf), 0.0);
    for (int d : op.dims) sol.gram_values.push_back(MatrixXd::Zero(d, d));
    sol.objective_value = problem.objective_constant;
    return sol;
  }

  // Starting point.
  Blocks X(nb), Z(nb);
  VectorXd w = VectorXd::Zero(op.m);
  VectorXd y = VectorXd::Zero(op.nf);
  double max_row_norm = 0.0;
  double ratio = 0.0;
  for (int i = 0; i < op.m; ++i) {
    const double rn = op.A.row(i).norm();
    max_row_norm = std::max(max_row_norm, rn);
    ratio = std::max(ratio, (1.0 + std::abs(op.b(i))) / (1.0 + rn));
  }
  for (std::size_t k = 0; k < nb; ++k) {
    const double n = op.dims[k];
    const double xi = std::max({10.0, std::sqrt(n), n * ratio});
    const double zeta = std::max({10.0, std::sqrt(n), max_row_norm, op.f.norm()});
    X[k] = xi * MatrixXd::Identity(op.dims[k], op.dims[k]);
    Z[k] = zeta * MatrixXd::Identity(op.dims[k], op.dims[k]);
  }
  double n_total = 0.0;
  for (int d : op.dims) n_total += d;

  const double b_norm = op.b.norm();
  const double f_norm = op.f.norm();

  struct Snapshot {
    Blocks X;
    VectorXd y;
    double score = std::numeric_limits<double>::infinity();
  } best;

  int stalls = 0;
  auto finish = [&](SdpStatus status, double pinf, double dinf, double relgap, int iter, const std::string& msg) {
    sol.status = status;
    sol.gram_values = X;
    sol.scalar_values.assign(y.data(), y.data() + y.size());
    sol.objective_value = op.f.dot(y) + problem.objective_constant;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    sol.gap = relgap;
    sol.iterations = iter;
    sol.message = msg;
    return sol;
  };

  for (int iter = 0; iter <= options.max_iter; ++iter) {
    const VectorXd rp = op.b - op.apply(X) - op.B * y;
    Blocks Rd = op.adjoint(w);
    for (std::size_t k = 0; k < nb; ++k) Rd[k] = -Rd[k] - Z[k];
    const VectorXd rf = op.f - op.B.transpose() * w;
    const double xz = inner(X, Z);
    const double mu = xz / n_total;
    const double pobj = op.f.dot(y) + problem.objective_constant;
    const double dobj = op.b.dot(w) + problem.objective_constant;
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = (frob(Rd) + rf.norm()) / (1.0 + f_norm);
    const double relgap = std::max(std::abs(pobj - dobj), std::abs(xz)) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (options.verbose) {
      std::cerr << "ipm " << iter << " pobj " << pobj << " dobj " << dobj << " pinf " << pinf << " dinf " << dinf
                << " gap " << relgap << "\n";
    }

    const double score = std::max({pinf, dinf, relgap});
    if (score < best.score) best = {X, y, score};

    if (pinf <= options.feas_tol && dinf <= options.feas_tol && relgap <= options.gap_tol) {
      return finish(SdpStatus::optimal, pinf, dinf, relgap, iter, "converged");
    }
    if (iter > 5) {
      const double bw = op.b.dot(w);
      if (bw > 0.0) {
        Blocks AtwZ = op.adjoint(w);
        for (std::size_t k = 0; k < nb; ++k) AtwZ[k] += Z[k];
        const double ray = (frob(AtwZ) + (op.B.transpose() * w).norm()) / bw;
        if (ray < 1e-8 && bw > 1e6) return finish(SdpStatus::infeasible, pinf, dinf, relgap, iter, "primal infeasibility certificate");
      }
      const double fy = op.f.dot(y);
      if (fy < 0.0) {
        const double ray = (op.apply(X) + op.B * y).norm() / -fy;
        if (ray < 1e-8 && -fy > 1e6) return finish(SdpStatus::unbounded, pinf, dinf, relgap, iter, "dual infeasibility certificate");
      }
    }
    if (iter == options.max_iter) break;

    Blocks Zinv(nb);
    for (std::size_t k = 0; k < nb; ++k) Zinv[k] = spd_inverse(Z[k]);
    const MatrixXd M = schur_matrix(op, X, Zinv);
    KktSolver kkt;
    if (!kkt.factor(M, op.B)) break;

    // X Rd Zinv, shared by predictor and corrector.
    Blocks XRdZi(nb);
    for (std::size_t k = 0; k < nb; ++k) XRdZi[k] = sym(X[k] * Rd[k] * Zinv[k]);
    const VectorXd a_xrdz = op.apply(XRdZi);

    auto direction = [&](const Blocks& Rc, Blocks& dX, VectorXd& dy, VectorXd& dw, Blocks& dZ) {
      const VectorXd h = rp - op.apply(Rc) + a_xrdz;
      kkt.solve(h, rf, dw, dy);
      dZ = op.adjoint(dw);
      dX.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        dZ[k] = Rd[k] - dZ[k];
        dX[k] = Rc[k] - sym(X[k] * dZ[k] * Zinv[k]);
      }
    };
    auto steps = [&](const Blocks& dX, const Blocks& dZ, double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(X[k], dX[k]));
        ad = std::min(ad, max_step(Z[k], dZ[k]));
      }
    };

    // Predictor.
    Blocks Rc(nb);
    for (std::size_t k = 0; k < nb; ++k) Rc[k] = -X[k];
    Blocks dXa, dZa;
    VectorXd dya, dwa;
    direction(Rc, dXa, dya, dwa, dZa);
    double apa = 0.0, ada = 0.0;
    steps(dXa, dZa, apa, ada);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);
    double xz_aff = 0.0;
    for (std::size_t k = 0; k < nb; ++k) xz_aff += (X[k] + apa * dXa[k]).cwiseProduct(Z[k] + ada * dZa[k]).sum();
    double sigma = std::pow(std::max(0.0, xz_aff) / std::max(xz, 1e-300), 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    for (std::size_t k = 0; k < nb; ++k) {
      Rc[k] = sym(sigma * mu * Zinv[k] - X[k] - dXa[k] * dZa[k] * Zinv[k]);
    }
    Blocks dX, dZ;
    VectorXd dy, dw;
    direction(Rc, dX, dy, dw, dZ);
    double ap = 0.0, ad = 0.0;
    steps(dX, dZ, ap, ad);
    const double tau = std::clamp(0.9 + 0.09 * std::min({apa, ada, 1.0}), 0.9, 0.99);
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);
    if (!std::isfinite(ap) || !std::isfinite(ad)) break;

    for (std::size_t k = 0; k < nb; ++k) {
      X[k] = sym(X[k] + ap * dX[k]);
      Z[k] = sym(Z[k] + ad * dZ[k]);
    }
    y += ap * dy;
    w += ad * dw;

    if (ap < 1e-9 && ad < 1e-9) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }
  }

  // Failure: report the best iterate found.
  X = best.X;
  y = best.y;
  const VectorXd rp = op.b - op.apply(X) - op.B * y;
  return finish(SdpStatus::numerical_failure, rp.norm() / (1.0 + b_norm), sol.dual_residual, best.score,
                options.max_iter, "interior point method did not reach the requested tolerances");
}

SdpSolution solve_by_bisection(const SdpProblem& problem, const BisectionSpec& spec, const SdpOptions& options) {
  problem.validate();
  if (spec.scalar < 0 || spec.scalar >= problem.num_scalars()) throw InvalidProblem("bisection scalar out of range");
  if (!(spec.hi > spec.lo) || !(spec.width > 0.0)) throw InvalidProblem("invalid bisection bracket");
  for (int i = 0; i < problem.num_scalars(); ++i) {
    const double c = problem.objective[static_cast<std::size_t>(i)];
    if ((i == spec.scalar && !(c > 0.0)) || (i != spec.scalar && c != 0.0)) {
      throw InvalidProblem("bisection requires the objective to be a positive multiple of one scalar");
    }
  }

  // Feasibility program at a fixed value: X - s I satisfies the equalities,
  // minimize s, with s >= -1 via a 1x1 slack block.
  auto feasibility = [&](double value, SdpSolution& shifted) {
    SdpProblem fp = problem.with_fixed_scalar(spec.scalar, value);
    std::fill(fp.objective.begin(), fp.objective.end(), 0.0);
    fp.objective_constant = 0.0;
    const int s = fp.add_scalar("__shift", 1.0);
    const int original_blocks = static_cast<int>(fp.block_dims.size());
    for (auto& eq : fp.equalities) {
      double trace_coef = 0.0;
      for (const auto& t : eq.gram) {
        if (t.row == t.col) trace_coef += t.coef;
      }
      if (trace_coef != 0.0) eq.scalars.push_back({s, -trace_coef});
    }
    const int slack = fp.add_block(1);
    fp.equalities.push_back({{{slack, 0, 0, -1.0}}, {{s, 1.0}}, -1.0});
    SdpOptions sub = options;
    sub.bisection.reset();
    shifted = solve_interior_point(fp, sub);
    if (shifted.status != SdpStatus::optimal) return false;
    const double s_val = shifted.scalar_values[static_cast<std::size_t>(s)];
    // Undo the shift on the original blocks.
    shifted.gram_values.resize(static_cast<std::size_t>(original_blocks));
    for (auto& g : shifted.gram_values) g.diagonal().array() -= s_val;
    shifted.scalar_values.resize(static_cast<std::size_t>(problem.num_scalars()));
    shifted.scalar_values[static_cast<std::size_t>(spec.scalar)] = value;
    return s_val <= options.feas_tol;
  };

  SdpSolution hi_sol;
  int total_iter = 0;
  if (!feasibility(spec.hi, hi_sol)) {
    SdpSolution out = hi_sol;
    out.status = hi_sol.status == SdpStatus::optimal ? SdpStatus::infeasible : SdpStatus::numerical_failure;
    out.used_bisection = true;
    out.message = "upper end of the bisection bracket is infeasible";
    return out;
  }
  total_iter += hi_sol.iterations;
  double lo = spec.lo;
  double hi = spec.hi;
  while (hi - lo > spec.width) {
    const double mid = 0.5 * (lo + hi);
    SdpSolution trial;
    const bool ok = feasibility(mid, trial);
    total_iter += trial.iterations;
    if (ok) {
      hi = mid;
      hi_sol = std::move(trial);
    } else {
      lo = mid;
    }
  }
  SdpSolution out = hi_sol;
  out.status = SdpStatus::optimal;
  out.used_bisection = true;
  out.iterations = total_iter;
  out.objective_value = problem.objective[static_cast<std::size_t>(spec.scalar)] * hi + problem.objective_constant;
  out.gap = hi - lo;
  out.message = "bisection converged";
  return out;
}

std::optional<SdpProblem> drop_dependent_equalities(const SdpProblem& problem, bool* inconsistent) {
  problem.validate();
  if (inconsistent) *inconsistent = false;
  const Operator op = build_operator(problem);
  if (op.m == 0) return std::nullopt;
  // Rows of [A B] as columns; pivoted QR exposes an independent subset.
  MatrixXd rows(op.nvec + op.nf, op.m);
  rows.topRows(op.nvec) = MatrixXd(op.A).transpose();
  rows.bottomRows(op.nf) = op.B.transpose();
  Eigen::ColPivHouseholderQR<MatrixXd> qr(rows);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  if (rank == op.m) return std::nullopt;
  std::vector<int> keep;
  for (Eigen::Index k = 0; k < rank; ++k) keep.push_back(qr.colsPermutation().indices()(k));
  std::sort(keep.begin(), keep.end());
  // Dropped rows must be implied by the kept ones, right-hand sides included.
  MatrixXd K(rows.rows(), static_cast<Eigen::Index>(keep.size()));
  VectorXd bk(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    K.col(static_cast<Eigen::Index>(k)) = rows.col(keep[k]);
    bk(static_cast<Eigen::Index>(k)) = op.b(keep[k]);
  }
  const auto kqr = K.colPivHouseholderQr();
  const double bscale = 1.0 + op.b.lpNorm<Eigen::Infinity>();
  for (int i = 0; i < op.m; ++i) {
    if (std::binary_search(keep.begin(), keep.end(), i)) continue;
    const VectorXd c = kqr.solve(VectorXd(rows.col(i)));
    if (std::abs(bk.dot(c) - op.b(i)) > 1e-8 * bscale) {
      if (inconsistent) *inconsistent = true;
      return std::nullopt;
    }
  }
  SdpProblem reduced = problem;
  reduced.equalities.clear();
  for (int i : keep) reduced.equalities.push_back(problem.equalities[static_cast<std::size_t>(i)]);
  return reduced;
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  SdpSolution direct = solve_interior_point(problem, options);
  if (direct.status != SdpStatus::numerical_failure) return direct;
  bool inconsistent = false;
  if (const auto reduced = drop_dependent_equalities(problem, &inconsistent)) {
    SdpSolution again = solve_interior_point(*reduced, options);
    if (again.status != SdpStatus::numerical_failure) {
      again.message += " (after dropping " + std::to_string(problem.equalities.size() - reduced->equalities.size()) +
                       " dependent equalities)";
      return again;
    }
  } else if (inconsistent) {
    direct.status = SdpStatus::infeasible;
    direct.message = "equalities are inconsistent";
    return direct;
  }
  if (!options.bisection) return direct;
  SdpSolution fallback = solve_by_bisection(problem, *options.bisection, options);
  if (fallback.status == SdpStatus::optimal) return fallback;
  return direct;
}

}  // namespace ilcsos
