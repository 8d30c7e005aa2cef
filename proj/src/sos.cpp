#include "ilcsos/sos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <tuple>

#include "ilcsos/errors.hpp"

namespace ilcsos {

namespace {

void enumerate(int num_vars, const std::vector<BasisGroup>& groups, const BasisHints& hints, std::size_t g,
               Exponent& cur, std::vector<Exponent>& out);

// All exponents over the group's variables with total degree exactly d.
void fill_group(const std::vector<int>& vars, std::size_t pos, int remaining, Exponent& cur, const BasisHints& hints,
                const std::function<void()>& emit) {
  if (pos == vars.size()) {
    if (remaining == 0) emit();
    return;
  }
  const int v = vars[pos];
  const auto vu = static_cast<std::size_t>(v);
  const int lo = vu < hints.min_exponent.size() ? std::max(0, hints.min_exponent[vu]) : 0;
  int hi = remaining;
  if (vu < hints.max_exponent.size() && hints.max_exponent[vu] >= 0) hi = std::min(hi, hints.max_exponent[vu]);
  const int par = vu < hints.parity.size() ? hints.parity[vu] : -1;
  for (int e = hi; e >= lo; --e) {
    if (par >= 0 && e % 2 != par) continue;
    cur[vu] = e;
    fill_group(vars, pos + 1, remaining - e, cur, hints, emit);
  }
  cur[vu] = 0;
}

void enumerate(int num_vars, const std::vector<BasisGroup>& groups, const BasisHints& hints, std::size_t g,
               Exponent& cur, std::vector<Exponent>& out) {
  if (g == groups.size()) {
    out.push_back(cur);
    return;
  }
  const auto& grp = groups[g];
  for (int d = std::max(0, grp.min_degree); d <= grp.max_degree; ++d) {
    fill_group(grp.vars, 0, d, cur, hints, [&] { enumerate(num_vars, groups, hints, g + 1, cur, out); });
  }
}

int total_degree(const Exponent& e) {
  int s = 0;
  for (int x : e) s += x;
  return s;
}

Exponent add_exp(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

int ceil_half(int v) { return v <= 0 ? 0 : (v + 1) / 2; }

}  // namespace

std::vector<Exponent> monomial_basis(int num_vars, const std::vector<BasisGroup>& groups, const BasisHints& hints) {
  for (const auto& g : groups) {
    for (int v : g.vars) {
      if (v < 0 || v >= num_vars) throw DimensionMismatch("basis group variable index out of range");
    }
  }
  std::vector<Exponent> out;
  Exponent cur(static_cast<std::size_t>(num_vars), 0);
  enumerate(num_vars, groups, hints, 0, cur, out);
  std::sort(out.begin(), out.end(), [](const Exponent& a, const Exponent& b) {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct RowBasis {
  std::vector<Exponent> monomials;
};

std::vector<std::vector<int>> group_indices(const SosConstraint& c) {
  const auto& vars = c.S.variables();
  std::vector<std::vector<int>> out;
  if (c.groups.empty()) {
    std::vector<int> all(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) all[i] = static_cast<int>(i);
    out.push_back(all);
    return out;
  }
  for (const auto& g : c.groups) {
    std::vector<int> idx;
    for (const auto& name : g) {
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end()) throw VariableMismatch("SOS group variable '" + name + "' not in the constraint");
      idx.push_back(static_cast<int>(it - vars.begin()));
    }
    out.push_back(idx);
  }
  return out;
}

// Variables in which every entry of S is even.
std::vector<bool> even_variables(const PolyMatrix& S) {
  std::vector<bool> even(S.variables().size(), true);
  for (int i = 0; i < S.rows(); ++i) {
    for (int j = 0; j < S.cols(); ++j) {
      for (const auto& [e, c] : S(i, j).terms()) {
        for (std::size_t v = 0; v < e.size(); ++v) {
          if (e[v] % 2 != 0) even[v] = false;
        }
      }
    }
  }
  return even;
}

// Degree ranges of the diagonal entry bound the row basis (Newton box).
RowBasis row_basis(const AffinePoly& diag, const std::vector<std::vector<int>>& groups) {
  RowBasis rb;
  if (diag.is_zero()) return rb;
  const auto nv = static_cast<std::size_t>(diag.num_vars());
  std::vector<int> min_e(nv, std::numeric_limits<int>::max()), max_e(nv, 0);
  std::vector<int> gmin(groups.size(), std::numeric_limits<int>::max()), gmax(groups.size(), 0);
  for (const auto& [e, c] : diag.terms()) {
    for (std::size_t v = 0; v < nv; ++v) {
      min_e[v] = std::min(min_e[v], e[v]);
      max_e[v] = std::max(max_e[v], e[v]);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      int d = 0;
      for (int v : groups[g]) d += e[static_cast<std::size_t>(v)];
      gmin[g] = std::min(gmin[g], d);
      gmax[g] = std::max(gmax[g], d);
    }
  }
  BasisHints hints;
  hints.min_exponent.resize(nv);
  hints.max_exponent.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    hints.min_exponent[v] = ceil_half(min_e[v]);
    hints.max_exponent[v] = max_e[v] / 2;
  }
  std::vector<BasisGroup> bg;
  for (std::size_t g = 0; g < groups.size(); ++g) bg.push_back({groups[g], ceil_half(gmin[g]), gmax[g] / 2});
  rb.monomials = monomial_basis(static_cast<int>(nv), bg, hints);
  return rb;
}

}  // namespace

CompiledSos compile_sos(const SosProgram& program) {
  if (program.space == nullptr) throw InvalidProblem("SOS program without a decision space");
  CompiledSos out;
  SdpProblem& sdp = out.sdp;
  const DecisionSpace& space = *program.space;
  for (int k = 0; k < space.size(); ++k) sdp.add_scalar(space.name(k), program.objective.coefficient(k));
  sdp.objective_constant = program.objective.constant();

  auto decision_terms = [&](const AffineCoeff& c, double scale) {
    std::vector<ScalarTerm> st;
    for (const auto& [id, v] : c.terms()) {
      if (id < 0 || id >= space.size()) throw InvalidProblem("coefficient references an unknown decision variable");
      st.push_back({id, -v / scale});
    }
    return st;
  };

  for (std::size_t ci = 0; ci < program.constraints.size(); ++ci) {
    const SosConstraint& c = program.constraints[ci];
    const PolyMatrix& S = c.S;
    if (S.rows() != S.cols()) throw DimensionMismatch("SOS constraint must be square");
    const double max_coef = S.max_abs_coefficient();
    const double scale = max_coef > 0.0 ? max_coef : 1.0;
    if (!S.is_symmetric(1e-12 * scale)) throw InvalidProblem("SOS constraint matrix is not symmetric");
    out.scales.push_back(scale);

    const auto groups = group_indices(c);
    std::vector<bool> even = even_variables(S);
    if (!c.use_parity) std::fill(even.begin(), even.end(), false);

    // Blocks keyed by parity class.
    std::map<std::vector<int>, GramBlockLayout> classes;
    for (int i = 0; i < S.rows(); ++i) {
      const RowBasis rb = row_basis(S(i, i), groups);
      for (const auto& m : rb.monomials) {
        std::vector<int> key(m.size(), 0);
        for (std::size_t v = 0; v < m.size(); ++v) key[v] = even[v] ? m[v] % 2 : 0;
        auto& lay = classes[key];
        lay.constraint = static_cast<int>(ci);
        lay.matrix_row.push_back(i);
        lay.monomial.push_back(m);
      }
    }

    using Key = std::tuple<int, int, Exponent>;
    std::map<Key, int> eq_index;
    const std::size_t first_eq = sdp.equalities.size();
    for (auto& [key, lay] : classes) {
      const int blk = sdp.add_block(static_cast<int>(lay.monomial.size()));
      const int n = static_cast<int>(lay.monomial.size());
      for (int q = 0; q < n; ++q) {
        for (int p = 0; p <= q; ++p) {
          const int ri = lay.matrix_row[static_cast<std::size_t>(p)];
          const int rj = lay.matrix_row[static_cast<std::size_t>(q)];
          Key k{std::min(ri, rj), std::max(ri, rj),
                add_exp(lay.monomial[static_cast<std::size_t>(p)], lay.monomial[static_cast<std::size_t>(q)])};
          auto [it, inserted] = eq_index.try_emplace(k, static_cast<int>(sdp.equalities.size()));
          if (inserted) sdp.equalities.emplace_back();
          const double coef = (p != q && ri == rj) ? 2.0 : 1.0;
          sdp.equalities[static_cast<std::size_t>(it->second)].gram.push_back({blk, p, q, coef});
        }
      }
      out.layouts.push_back(std::move(lay));
    }

    for (int i = 0; i < S.rows(); ++i) {
      for (int j = i; j < S.cols(); ++j) {
        for (const auto& [e, coef] : S(i, j).terms()) {
          auto it = eq_index.find(Key{i, j, e});
          if (it == eq_index.end()) {
            if (coef.max_abs() <= 1e-12 * scale) continue;
            throw BasisDeficiency("monomial of the SOS constraint is not reachable from the Gram basis");
          }
          auto& eq = sdp.equalities[static_cast<std::size_t>(it->second)];
          eq.rhs = coef.constant() / scale;
          eq.scalars = decision_terms(coef, scale);
        }
      }
    }
    out.equality_counts.push_back(static_cast<int>(sdp.equalities.size() - first_eq));
  }

  for (const auto& ineq : program.inequalities) {
    const double m = ineq.expr.max_abs();
    const double scale = m > 0.0 ? m : 1.0;
    const int blk = sdp.add_block(1);
    SdpEquality eq;
    eq.gram.push_back({blk, 0, 0, 1.0});
    eq.scalars = decision_terms(ineq.expr, scale);
    eq.rhs = ineq.expr.constant() / scale;
    sdp.equalities.push_back(std::move(eq));
  }
  sdp.validate();
  return out;
}

SosCertificate extract_certificate(const CompiledSos& compiled, const SdpSolution& solution, int index) {
  if (index < 0 || index >= static_cast<int>(compiled.scales.size())) throw InvalidProblem("certificate index out of range");
  SosCertificate cert;
  const double scale = compiled.scales[static_cast<std::size_t>(index)];
  for (std::size_t b = 0; b < compiled.layouts.size(); ++b) {
    if (compiled.layouts[b].constraint != index) continue;
    if (b >= solution.gram_values.size()) throw SolverFailure("solution carries fewer Gram blocks than the program");
    cert.gram.push_back(scale * solution.gram_values[b]);
    cert.basis.push_back(compiled.layouts[b]);
  }
  return cert;
}

PolyMatrix gram_expansion(const std::vector<std::string>& vars, int dim, const SosCertificate& certificate) {
  std::map<std::tuple<int, int>, std::map<Exponent, double>> acc;
  for (std::size_t b = 0; b < certificate.gram.size(); ++b) {
    const auto& G = certificate.gram[b];
    const auto& lay = certificate.basis[b];
    const auto n = static_cast<int>(lay.monomial.size());
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        const int ri = lay.matrix_row[static_cast<std::size_t>(p)];
        const int rj = lay.matrix_row[static_cast<std::size_t>(q)];
        acc[{ri, rj}][add_exp(lay.monomial[static_cast<std::size_t>(p)], lay.monomial[static_cast<std::size_t>(q)])] +=
            0.5 * (G(p, q) + G(q, p));
      }
    }
  }
  PolyMatrix out(dim, dim, vars);
  for (const auto& [pos, terms] : acc) {
    AffinePoly entry(vars);
    for (const auto& [e, v] : terms) entry.add_term(e, v);
    out.set(std::get<0>(pos), std::get<1>(pos), std::move(entry));
  }
  return out;
}

CertificateReport check_certificate(const SosConstraint& constraint, std::span<const double> assignment,
                                    const SosCertificate& certificate) {
  CertificateReport rep;
  const PolyMatrix Sa = constraint.S.assign(assignment);
  const PolyMatrix E = gram_expansion(Sa.variables(), Sa.rows(), certificate);
  rep.scale = Sa.max_abs_coefficient();
  double resid = 0.0;
  for (int i = 0; i < Sa.rows(); ++i) {
    for (int j = 0; j < Sa.cols(); ++j) {
      // Raw coefficient comparison, no pruning.
      std::map<Exponent, double> diff;
      for (const auto& [e, c] : Sa(i, j).terms()) diff[e] += c.constant();
      for (const auto& [e, c] : E(i, j).terms()) diff[e] -= c.constant();
      for (const auto& [e, v] : diff) resid = std::max(resid, std::abs(v));
    }
  }
  rep.residual = resid;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& G : certificate.gram) {
    if (G.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  rep.min_eigenvalue = std::isfinite(min_eig) ? min_eig : 0.0;
  rep.pass = rep.residual <= 1e-6 * std::max(rep.scale, 1e-300) && rep.min_eigenvalue >= -1e-8;
  return rep;
}

}  // namespace ilcsos
