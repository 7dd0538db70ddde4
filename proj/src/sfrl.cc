// Copyright 2026 The Fairrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairrep/sfrl.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "fairrep/errors.h"

namespace fairrep {
namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kImproveEps = 1e-11;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Column g: one data index per slice row.
using Column = std::vector<int>;

// The rows of one side value v (all rows when there is no side variable).
struct Slice {
  bool exact = true;
  size_t nd = 0;
  std::vector<size_t> cond_index;          // row -> index into C
  std::vector<double> weight;              // P(c | v)
  std::vector<std::vector<Prob>> cond;     // P(d | c, v), length nd
  std::vector<std::vector<int>> support;   // positive d per row, ascending
};

struct SliceSolution {
  std::vector<Column> columns;
  std::vector<Prob> weights;
  double objective = 0.0;        // sum_g w_g H(pushforward under g)
  double start_objective = 0.0;
  long moves = 0;
};

double ColumnCost(const Slice& s, const Column& g) {
  std::vector<double> q(s.nd, 0.0);
  for (size_t r = 0; r < g.size(); ++r) q[g[r]] += s.weight[r];
  double h = 0.0;
  for (double p : q) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double Objective(const Slice& s, const std::vector<Column>& cols,
                 const std::vector<Prob>& w) {
  double total = 0.0;
  for (size_t j = 0; j < cols.size(); ++j) {
    total += w[j].to_double() * ColumnCost(s, cols[j]);
  }
  return total;
}

// Inverse-CDF staircase on one slice (same cell rule as FrlConstruct).
void Staircase(const Slice& s, std::vector<Column>* cols, std::vector<Prob>* w) {
  const size_t rows = s.weight.size();
  std::vector<std::vector<Prob>> right(rows);
  std::vector<Prob> cuts = {Prob::Zero(s.exact), Prob::One(s.exact)};
  for (size_t r = 0; r < rows; ++r) {
    right[r].resize(s.nd);
    const int last = s.support[r].back();
    Prob cum = Prob::Zero(s.exact);
    for (size_t d = 0; d < s.nd; ++d) {
      cum += s.cond[r][d];
      right[r][d] = static_cast<int>(d) >= last ? Prob::One(s.exact) : cum;
      if (static_cast<int>(d) < last && s.cond[r][d].is_positive()) {
        cuts.push_back(right[r][d]);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    Column g(rows);
    for (size_t r = 0; r < rows; ++r) {
      for (int d : s.support[r]) {
        if (right[r][d] > cuts[k]) {
          g[r] = d;
          break;
        }
      }
    }
    cols->push_back(std::move(g));
    w->push_back(cuts[k + 1] - cuts[k]);
  }
}

// Gauss-Jordan inverse of a dense m x m matrix; false when singular.
bool Invert(std::vector<double> a, size_t m, std::vector<double>* inv) {
  inv->assign(m * m, 0.0);
  for (size_t i = 0; i < m; ++i) (*inv)[i * m + i] = 1.0;
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < m; ++r) {
      if (std::fabs(a[r * m + col]) > std::fabs(a[piv * m + col])) piv = r;
    }
    if (std::fabs(a[piv * m + col]) < 1e-10) return false;
    if (piv != col) {
      for (size_t k = 0; k < m; ++k) {
        std::swap(a[piv * m + k], a[col * m + k]);
        std::swap((*inv)[piv * m + k], (*inv)[col * m + k]);
      }
    }
    const double p = a[col * m + col];
    for (size_t k = 0; k < m; ++k) {
      a[col * m + k] /= p;
      (*inv)[col * m + k] /= p;
    }
    for (size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r * m + col];
      if (f == 0.0) continue;
      for (size_t k = 0; k < m; ++k) {
        a[r * m + k] -= f * a[col * m + k];
        (*inv)[r * m + k] -= f * (*inv)[col * m + k];
      }
    }
  }
  return true;
}

// Exact (or float-mode) solve of B x = b; false when singular.
bool SolveProb(std::vector<Prob> a, std::vector<Prob> b, size_t m,
               std::vector<Prob>* x) {
  for (size_t col = 0; col < m; ++col) {
    size_t piv = m;
    for (size_t r = col; r < m; ++r) {
      if (!a[r * m + col].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv == m) return false;
    if (piv != col) {
      for (size_t k = 0; k < m; ++k) std::swap(a[piv * m + k], a[col * m + k]);
      std::swap(b[piv], b[col]);
    }
    const Prob p = a[col * m + col];
    for (size_t k = col; k < m; ++k) a[col * m + k] /= p;
    b[col] /= p;
    for (size_t r = 0; r < m; ++r) {
      if (r == col || a[r * m + col].is_zero()) continue;
      const Prob f = a[r * m + col];
      for (size_t k = col; k < m; ++k) a[r * m + k] -= f * a[col * m + k];
      b[r] -= f * b[col];
    }
  }
  *x = std::move(b);
  return true;
}

class SliceLp {
 public:
  SliceLp(const Slice& s, const SfrlOptions& opt, uint64_t seed)
      : s_(s), opt_(opt), rng_(seed) {
    const size_t rows = s.weight.size();
    row_of_.assign(rows, std::vector<int>(s.nd, -1));
    int next = 1;
    for (size_t r = 0; r < rows; ++r) {
      for (size_t i = 0; i + 1 < s.support[r].size(); ++i) {
        row_of_[r][s.support[r][i]] = next++;
      }
    }
    m_ = static_cast<size_t>(next);
    b_.assign(m_, 0.0);
    b_exact_.assign(m_, Prob::Zero(s.exact));
    b_[0] = 1.0;
    b_exact_[0] = Prob::One(s.exact);
    for (size_t r = 0; r < rows; ++r) {
      for (size_t d = 0; d < s.nd; ++d) {
        if (row_of_[r][d] > 0) {
          b_[row_of_[r][d]] = s.cond[r][d].to_double();
          b_exact_[row_of_[r][d]] = s.cond[r][d];
        }
      }
    }
    num_columns_ = 1;
    for (const auto& sup : s.support) {
      num_columns_ *= static_cast<double>(sup.size());
    }
  }

  SliceSolution Solve() {
    SliceSolution out;
    Staircase(s_, &out.columns, &out.weights);
    out.start_objective = Objective(s_, out.columns, out.weights);
    out.objective = out.start_objective;
    if (m_ == 1) return out;  // every row deterministic: one column, optimal

    InitBasis(out.columns);
    while (moves_ < opt_.budget) {
      if (!Refactor()) break;
      Column entering;
      const double rc = Price(&entering);
      if (rc >= -kImproveEps) break;
      if (!Pivot(entering)) break;
      ++moves_;
    }
    out.moves = moves_;

    std::vector<Column> cols;
    std::vector<Prob> w;
    if (!ExactBasicSolution(&cols, &w)) return out;
    const double obj = Objective(s_, cols, w);
    if (obj < out.start_objective - kImproveEps) {
      out.columns = std::move(cols);
      out.weights = std::move(w);
      out.objective = obj;
    }
    return out;
  }

 private:
  // Basis entry: a real column, or the unit vector of row `unit`.
  struct Basic {
    Column g;
    int unit = -1;
    double cost = 0.0;
  };

  std::vector<double> ColumnVector(const Basic& e) const {
    std::vector<double> a(m_, 0.0);
    if (e.unit >= 0) {
      a[e.unit] = 1.0;
      return a;
    }
    a[0] = 1.0;
    for (size_t r = 0; r < e.g.size(); ++r) {
      const int row = row_of_[r][e.g[r]];
      if (row > 0) a[row] = 1.0;
    }
    return a;
  }

  void InitBasis(const std::vector<Column>& start) {
    basis_.clear();
    for (const Column& g : start) basis_.push_back({g, -1, ColumnCost(s_, g)});
    // Complete to a nonsingular basis with unit columns held at level zero.
    for (size_t unit = 0; unit < m_ && basis_.size() < m_; ++unit) {
      basis_.push_back({{}, static_cast<int>(unit), 0.0});
      if (Rank() < basis_.size()) basis_.pop_back();
    }
  }

  size_t Rank() const {
    const size_t n = basis_.size();
    std::vector<std::vector<double>> a;
    for (const Basic& e : basis_) a.push_back(ColumnVector(e));
    size_t rank = 0;
    for (size_t row = 0; row < m_ && rank < n; ++row) {
      size_t piv = n;
      for (size_t j = rank; j < n; ++j) {
        if (std::fabs(a[j][row]) > 1e-9) {
          piv = j;
          break;
        }
      }
      if (piv == n) continue;
      std::swap(a[piv], a[rank]);
      for (size_t j = 0; j < n; ++j) {
        if (j == rank) continue;
        const double f = a[j][row] / a[rank][row];
        if (f == 0.0) continue;
        for (size_t k = 0; k < m_; ++k) a[j][k] -= f * a[rank][k];
      }
      ++rank;
    }
    return rank;
  }

  bool Refactor() {
    std::vector<double> bm(m_ * m_);
    for (size_t j = 0; j < m_; ++j) {
      const std::vector<double> a = ColumnVector(basis_[j]);
      for (size_t i = 0; i < m_; ++i) bm[i * m_ + j] = a[i];
    }
    if (!Invert(bm, m_, &binv_)) return false;
    x_.assign(m_, 0.0);
    for (size_t i = 0; i < m_; ++i) {
      for (size_t k = 0; k < m_; ++k) x_[i] += binv_[i * m_ + k] * b_[k];
      if (x_[i] < 0.0 && x_[i] > -1e-12) x_[i] = 0.0;
    }
    y_.assign(m_, 0.0);
    for (size_t k = 0; k < m_; ++k) {
      for (size_t i = 0; i < m_; ++i) y_[k] += basis_[i].cost * binv_[i * m_ + k];
    }
    return true;
  }

  // Reduced cost of g: cost(g) - y . a(g).
  double Reduced(const Column& g) {
    ++moves_;
    double rc = ColumnCost(s_, g) - y_[0];
    for (size_t r = 0; r < g.size(); ++r) {
      const int row = row_of_[r][g[r]];
      if (row > 0) rc -= y_[row];
    }
    return rc;
  }

  double Price(Column* best) {
    const size_t rows = s_.weight.size();
    double best_rc = 0.0;
    if (num_columns_ <= static_cast<double>(opt_.enumeration_limit)) {
      std::vector<size_t> digit(rows, 0);
      Column g(rows);
      while (true) {
        for (size_t r = 0; r < rows; ++r) g[r] = s_.support[r][digit[r]];
        const double rc = Reduced(g);
        if (rc < best_rc - kImproveEps || (best->empty() && rc < best_rc)) {
          best_rc = rc;
          *best = g;
        }
        size_t r = rows;
        while (r > 0) {
          --r;
          if (++digit[r] < s_.support[r].size()) break;
          digit[r] = 0;
          if (r == 0) return best_rc;
        }
        if (rows == 0) return best_rc;
      }
    }
    // Coordinate descent from every basic column and a few random columns.
    std::vector<Column> starts;
    for (const Basic& e : basis_) {
      if (e.unit < 0) starts.push_back(e.g);
    }
    for (int k = 0; k < 4; ++k) {
      Column g(rows);
      for (size_t r = 0; r < rows; ++r) {
        std::uniform_int_distribution<size_t> pick(0, s_.support[r].size() - 1);
        g[r] = s_.support[r][pick(rng_)];
      }
      starts.push_back(std::move(g));
    }
    for (Column g : starts) {
      double cur = Reduced(g);
      bool improved = true;
      while (improved && moves_ < opt_.budget) {
        improved = false;
        for (size_t r = 0; r < rows; ++r) {
          const int keep = g[r];
          int arg = keep;
          for (int d : s_.support[r]) {
            if (d == keep) continue;
            g[r] = d;
            const double rc = Reduced(g);
            if (rc < cur - kImproveEps) {
              cur = rc;
              arg = d;
              improved = true;
            }
          }
          g[r] = arg;
        }
      }
      if (cur < best_rc - kImproveEps) {
        best_rc = cur;
        *best = g;
      }
      if (moves_ >= opt_.budget) break;
    }
    return best_rc;
  }

  bool Pivot(const Column& g) {
    Basic entering{g, -1, ColumnCost(s_, g)};
    const std::vector<double> a = ColumnVector(entering);
    std::vector<double> dir(m_, 0.0);
    for (size_t i = 0; i < m_; ++i) {
      for (size_t k = 0; k < m_; ++k) dir[i] += binv_[i * m_ + k] * a[k];
    }
    size_t leave = m_;
    double ratio = 0.0;
    for (size_t i = 0; i < m_; ++i) {
      if (basis_[i].unit >= 0 && std::fabs(dir[i]) > kPivotEps) {
        leave = i;  // a zero-level unit column leaves first
        break;
      }
    }
    if (leave == m_) {
      for (size_t i = 0; i < m_; ++i) {
        if (dir[i] <= kPivotEps) continue;
        const double t = x_[i] / dir[i];
        if (leave == m_ || t < ratio - kPivotEps) {
          leave = i;
          ratio = t;
        }
      }
    }
    if (leave == m_) return false;
    basis_[leave] = std::move(entering);
    return true;
  }

  bool ExactBasicSolution(std::vector<Column>* cols, std::vector<Prob>* w) const {
    std::vector<Prob> bm(m_ * m_, Prob::Zero(s_.exact));
    for (size_t j = 0; j < m_; ++j) {
      const std::vector<double> a = ColumnVector(basis_[j]);
      for (size_t i = 0; i < m_; ++i) {
        if (a[i] != 0.0) bm[i * m_ + j] = Prob::One(s_.exact);
      }
    }
    std::vector<Prob> x;
    if (!SolveProb(std::move(bm), b_exact_, m_, &x)) return false;
    std::map<Column, Prob> merged;
    for (size_t j = 0; j < m_; ++j) {
      if (x[j].is_zero()) continue;
      if (basis_[j].unit >= 0 || x[j].sign() < 0) return false;
      auto [it, fresh] = merged.emplace(basis_[j].g, x[j]);
      if (!fresh) it->second += x[j];
    }
    for (auto& [g, p] : merged) {
      cols->push_back(g);
      w->push_back(p);
    }
    return true;
  }

  const Slice& s_;
  const SfrlOptions& opt_;
  std::mt19937_64 rng_;
  std::vector<std::vector<int>> row_of_;
  size_t m_ = 1;
  std::vector<double> b_;
  std::vector<Prob> b_exact_;
  double num_columns_ = 1;
  std::vector<Basic> basis_;
  std::vector<double> binv_, x_, y_;
  long moves_ = 0;
};

// Slices of a (C, D[, V]) joint; nv == 1 and no V axis for the plain case.
std::vector<Slice> MakeSlices(const JointPMF& joint, size_t nv,
                              std::vector<Prob>* slice_mass) {
  const bool exact = joint.is_exact();
  const size_t nc = joint.axis(0).alphabet.size();
  const size_t nd = joint.axis(1).alphabet.size();
  auto mass = [&](size_t c, size_t d, size_t v) -> const Prob& {
    return joint.mass()[(c * nd + d) * nv + v];
  };
  std::vector<Slice> slices(nv);
  slice_mass->assign(nv, Prob::Zero(exact));
  for (size_t v = 0; v < nv; ++v) {
    Slice& s = slices[v];
    s.exact = exact;
    s.nd = nd;
    Prob pv = Prob::Zero(exact);
    std::vector<Prob> pc(nc, Prob::Zero(exact));
    for (size_t c = 0; c < nc; ++c) {
      for (size_t d = 0; d < nd; ++d) pc[c] += mass(c, d, v);
      pv += pc[c];
    }
    (*slice_mass)[v] = pv;
    if (pv.is_zero()) continue;
    for (size_t c = 0; c < nc; ++c) {
      if (pc[c].is_zero()) continue;
      s.cond_index.push_back(c);
      s.weight.push_back((pc[c] / pv).to_double());
      std::vector<Prob> row(nd);
      std::vector<int> sup;
      for (size_t d = 0; d < nd; ++d) {
        row[d] = mass(c, d, v) / pc[c];
        if (row[d].is_positive()) sup.push_back(static_cast<int>(d));
      }
      if (sup.empty()) {
        throw DegenerateConditional("a conditional of D has no positive entry");
      }
      s.cond.push_back(std::move(row));
      s.support.push_back(std::move(sup));
    }
  }
  return slices;
}

SfrlWitness Combine(const JointPMF& joint, const std::vector<Slice>& slices,
                    const std::vector<SliceSolution>& sols, bool has_side) {
  const bool exact = joint.is_exact();
  const size_t nv = slices.size();
  const size_t nc = joint.axis(0).alphabet.size();
  const size_t nd = joint.axis(1).alphabet.size();

  // Common refinement of the slice weight CDFs.
  std::vector<Prob> cuts = {Prob::Zero(exact), Prob::One(exact)};
  std::vector<std::vector<Prob>> right(nv);
  for (size_t v = 0; v < nv; ++v) {
    Prob cum = Prob::Zero(exact);
    const auto& w = sols[v].weights;
    for (size_t j = 0; j < w.size(); ++j) {
      cum += w[j];
      right[v].push_back(j + 1 == w.size() ? Prob::One(exact) : cum);
      if (j + 1 < w.size()) cuts.push_back(cum);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const size_t nz = cuts.size() - 1;

  SfrlWitness out;
  out.cond = joint.axis(0);
  out.data = joint.axis(1);
  if (has_side) out.side = joint.axis(2);
  out.aux = Alphabet::Indexed("z", nz);
  for (size_t k = 0; k < nz; ++k) out.p_aux.push_back(cuts[k + 1] - cuts[k]);
  const size_t ncv = nc * nv;
  out.map_f.assign(nz * ncv, -1);
  for (size_t v = 0; v < nv; ++v) {
    if (slices[v].weight.empty()) continue;
    size_t j = 0;
    for (size_t k = 0; k < nz; ++k) {
      while (!(right[v][j] > cuts[k])) ++j;
      const Column& g = sols[v].columns[j];
      for (size_t r = 0; r < g.size(); ++r) {
        out.map_f[k * ncv + slices[v].cond_index[r] * nv + v] = g[r];
      }
    }
  }
  out.coupling.assign(ncv * nd * nz, Prob::Zero(exact));
  for (size_t v = 0; v < nv; ++v) {
    std::vector<int> row_of_c(nc, -1);
    for (size_t r = 0; r < slices[v].cond_index.size(); ++r) {
      row_of_c[slices[v].cond_index[r]] = static_cast<int>(r);
    }
    for (size_t c = 0; c < nc; ++c) {
      const size_t cv = c * nv + v;
      const int r = row_of_c[c];
      for (size_t d = 0; d < nd; ++d) {
        const bool live = r >= 0 && slices[v].cond[r][d].is_positive();
        for (size_t k = 0; k < nz; ++k) {
          Prob& slot = out.coupling[(cv * nd + d) * nz + k];
          if (!live) {
            slot = out.p_aux[k];
          } else if (out.map_f[k * ncv + cv] == static_cast<int>(d)) {
            slot = out.p_aux[k] / slices[v].cond[r][d];
          }
        }
      }
    }
  }
  return out;
}

SfrlWitness Run(const JointPMF& joint, bool has_side, const SfrlOptions& opt) {
  const size_t nv = has_side ? joint.axis(2).alphabet.size() : 1;
  std::vector<Prob> slice_mass;
  std::vector<Slice> slices = MakeSlices(joint, nv, &slice_mass);
  std::vector<SliceSolution> sols(nv);
  long moves = 0;
  double start = 0.0;
  double final_obj = 0.0;
  for (size_t v = 0; v < nv; ++v) {
    if (slices[v].weight.empty()) {
      sols[v].columns = {Column{}};
      sols[v].weights = {Prob::One(joint.is_exact())};
      continue;
    }
    SliceLp lp(slices[v], opt, SplitMix64(opt.seed + v));
    sols[v] = lp.Solve();
    moves += sols[v].moves;
    start += slice_mass[v].to_double() * sols[v].start_objective;
    final_obj += slice_mass[v].to_double() * sols[v].objective;
  }
  SfrlWitness w = Combine(joint, slices, sols, has_side);
  const std::string c = joint.axis(0).role;
  const std::string d = joint.axis(1).role;
  RoleSet given;
  if (has_side) given.push_back(joint.axis(2).role);
  const MeasureQuery mi = MeasureQuery::I({c}, {d}, given);
  const double info_cd = InfoMeasure(joint, mi);
  w.achieved_excess = WitnessVerify(w, joint).excess;
  // H(D|Z,V) - I(C;D|V) for the staircase start and the solution.
  w.start_excess = std::max(0.0, start - info_cd);
  if (final_obj >= start) w.start_excess = w.achieved_excess;
  w.target_bound = std::log2(std::max(0.0, info_cd) + 1.0) + 4.0;
  w.moves_used = moves;
  w.met_target = w.achieved_excess <= w.target_bound;
  if (!w.met_target && opt.throw_on_miss) {
    throw SearchFailed("excess leakage above the target bound",
                       w.achieved_excess, w.target_bound);
  }
  return w;
}

}  // namespace

SfrlWitness SfrlConstruct(const JointPMF& joint_cd, const SfrlOptions& options) {
  if (joint_cd.rank() != 2) {
    throw InvalidArgument("SfrlConstruct expects a joint over exactly (C, D)");
  }
  return Run(joint_cd, false, options);
}

SfrlWitness ConditionalSfrlConstruct(const JointPMF& joint_cdv,
                                     const SfrlOptions& options) {
  if (joint_cdv.rank() != 3) {
    throw InvalidArgument(
        "ConditionalSfrlConstruct expects a joint over exactly (C, D, V)");
  }
  return Run(joint_cdv, true, options);
}

double SfrlExcessBound(const JointPMF& joint, const MeasureQuery& mi) {
  if (mi.kind != MeasureQuery::Kind::kMutualInformation &&
      mi.kind != MeasureQuery::Kind::kConditionalMutualInformation) {
    throw InvalidArgument("SfrlExcessBound needs a mutual information query");
  }
  const double info = InfoMeasure(joint, mi);
  return std::log2(std::max(0.0, info) + 1.0) + 4.0;
}

}  // namespace fairrep
