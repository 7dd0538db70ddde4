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

#include "fairrep/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fairrep/bounds.h"
#include "fairrep/errors.h"

namespace fairrep {
namespace {

constexpr double kTiny = 1e-15;

double Xlog(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double Entropy(const std::vector<double>& v) {
  double h = 0.0;
  for (double p : v) h += Xlog(p);
  return h;
}

// Float view of an (S, X, T) source; z = x * nt + t.
struct Source {
  size_t ns = 0, nx = 0, nt = 0, nz = 0;
  std::vector<double> ps;    // P(s)
  std::vector<double> cond;  // P(z|s) at s * nz + z, zero rows when P(s) = 0
  std::vector<std::vector<size_t>> supp;
  double h_t = 0, h_x = 0, h_t_s = 0, h_x_st = 0;  // H(T), H(X), H(T|S), H(X|S,T)
};

Source MakeSource(const JointPMF& p) {
  if (p.rank() != 3 || p.axis(0).role != "S" || p.axis(1).role != "X" ||
      p.axis(2).role != "T") {
    throw InvalidArgument("oracle needs a source with axes (S, X, T)");
  }
  Source src;
  src.ns = p.axis(0).alphabet.size();
  src.nx = p.axis(1).alphabet.size();
  src.nt = p.axis(2).alphabet.size();
  src.nz = src.nx * src.nt;
  src.ps.assign(src.ns, 0.0);
  src.cond.assign(src.ns * src.nz, 0.0);
  src.supp.resize(src.ns);
  std::vector<double> pt(src.nt, 0.0), px(src.nx, 0.0);
  for (size_t s = 0; s < src.ns; ++s) {
    for (size_t z = 0; z < src.nz; ++z) {
      const double m = p.mass()[s * src.nz + z].to_double();
      src.cond[s * src.nz + z] = m;
      src.ps[s] += m;
      px[z / src.nt] += m;
      pt[z % src.nt] += m;
    }
  }
  src.h_t = Entropy(pt);
  src.h_x = Entropy(px);
  for (size_t s = 0; s < src.ns; ++s) {
    if (src.ps[s] <= 0.0) continue;
    std::vector<double> ts(src.nt, 0.0), zs(src.nz);
    for (size_t z = 0; z < src.nz; ++z) {
      double& c = src.cond[s * src.nz + z];
      c /= src.ps[s];
      zs[z] = c;
      ts[z % src.nt] += c;
      if (c > 0.0) src.supp[s].push_back(z);
    }
    src.h_t_s += src.ps[s] * Entropy(ts);
    src.h_x_st += src.ps[s] * (Entropy(zs) - Entropy(ts));
  }
  return src;
}

struct Values {
  double utility = 0.0;
  double rate = 0.0;
};

// Utility and rate of a Y whose value identifies the posterior
// Q(z|s) = a[s * nz + z]; both enter a mixture linearly.
Values ColumnValues(const Source& src, Problem problem, const std::vector<double>& a) {
  Values v;
  if (problem == Problem::kP1) {
    std::vector<double> pt(src.nt, 0.0), px(src.nx, 0.0);
    for (size_t s = 0; s < src.ns; ++s) {
      for (size_t z = 0; z < src.nz; ++z) {
        const double m = src.ps[s] * a[s * src.nz + z];
        pt[z % src.nt] += m;
        px[z / src.nt] += m;
      }
    }
    v.utility = src.h_t - Entropy(pt);
    v.rate = src.h_x - Entropy(px);
    return v;
  }
  double ht = 0.0, hx = 0.0;
  for (size_t s = 0; s < src.ns; ++s) {
    if (src.ps[s] <= 0.0) continue;
    std::vector<double> ts(src.nt, 0.0), zs(src.nz);
    for (size_t z = 0; z < src.nz; ++z) {
      zs[z] = a[s * src.nz + z];
      ts[z % src.nt] += zs[z];
    }
    ht += src.ps[s] * Entropy(ts);
    hx += src.ps[s] * (Entropy(zs) - Entropy(ts));
  }
  v.utility = src.h_t_s - ht;
  v.rate = src.h_x_st - hx;
  return v;
}

// Measures of a coupling pi[(s * nz + z) * L + y] = P(z, y | s).
Values Measure(const Source& src, Problem problem, const std::vector<double>& pi, size_t L) {
  Values v;
  if (problem == Problem::kP1) {
    std::vector<double> py(L, 0.0), pty(src.nt * L, 0.0), pxy(src.nx * L, 0.0);
    for (size_t s = 0; s < src.ns; ++s) {
      if (src.ps[s] <= 0.0) continue;
      for (size_t z : src.supp[s]) {
        const double* row = &pi[(s * src.nz + z) * L];
        double* t_row = &pty[(z % src.nt) * L];
        double* x_row = &pxy[(z / src.nt) * L];
        for (size_t y = 0; y < L; ++y) {
          const double m = src.ps[s] * row[y];
          py[y] += m;
          t_row[y] += m;
          x_row[y] += m;
        }
      }
    }
    const double hy = Entropy(py);
    v.utility = src.h_t + hy - Entropy(pty);
    v.rate = src.h_x + hy - Entropy(pxy);
    return v;
  }
  std::vector<double> psy(src.ns * L, 0.0), psty(src.ns * src.nt * L, 0.0);
  double hj = 0.0;
  for (size_t s = 0; s < src.ns; ++s) {
    if (src.ps[s] <= 0.0) continue;
    for (size_t z : src.supp[s]) {
      const double* row = &pi[(s * src.nz + z) * L];
      for (size_t y = 0; y < L; ++y) {
        const double m = src.ps[s] * row[y];
        psy[s * L + y] += m;
        psty[(s * src.nt + z % src.nt) * L + y] += m;
        hj += Xlog(m);
      }
    }
  }
  const double hsty = Entropy(psty);
  v.utility = src.h_t_s - (hsty - Entropy(psy));
  v.rate = src.h_x_st - (hj - hsty);
  return v;
}

// Erasure with probability 1 - r/R turns any Y into a feasible one with
// utility scaled by the same factor.
double Score(const Values& v, double r) {
  if (v.rate <= r || v.rate <= 0.0) return v.utility;
  return v.utility * (r / v.rate);
}

// ---------------------------------------------------------------------------
// Dense two-phase tableau simplex: max c.w s.t. A w = b, g.w <= h, w >= 0.

struct Lp {
  size_t rows = 0;
  std::vector<std::vector<double>> cols;  // each of length `rows`
  std::vector<double> b, c;
  std::vector<double> g;  // empty: no inequality
  double h = 0.0;
};

struct LpSolution {
  std::vector<double> w;
  double value = 0.0;
  long pivots = 0;
};

class Tableau {
 public:
  explicit Tableau(const Lp& lp) : n_(lp.cols.size()) {
    has_ineq_ = !lp.g.empty();
    rows_ = lp.rows + (has_ineq_ ? 1 : 0);
    art_ = n_ + (has_ineq_ ? 1 : 0);
    width_ = art_ + lp.rows + 1;
    t_.assign(rows_ * width_, 0.0);
    d1_.assign(width_, 0.0);
    d2_.assign(width_, 0.0);
    basis_.resize(rows_);
    for (size_t i = 0; i < lp.rows; ++i) {
      for (size_t j = 0; j < n_; ++j) at(i, j) = lp.cols[j][i];
      at(i, art_ + i) = 1.0;
      at(i, width_ - 1) = lp.b[i];
      basis_[i] = art_ + i;
    }
    if (has_ineq_) {
      const size_t i = rows_ - 1;
      for (size_t j = 0; j < n_; ++j) at(i, j) = lp.g[j];
      at(i, n_) = 1.0;
      at(i, width_ - 1) = lp.h;
      basis_[i] = n_;
    }
    for (size_t i = 0; i < lp.rows; ++i) {
      for (size_t j = 0; j < art_; ++j) d1_[j] -= at(i, j);
      d1_[width_ - 1] -= at(i, width_ - 1);
    }
    for (size_t j = 0; j < n_; ++j) d2_[j] = -lp.c[j];
  }

  LpSolution Solve() {
    Run(&d1_);
    if (-d1_[width_ - 1] > 1e-9) throw InvalidArgument("oracle LP is infeasible");
    for (size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < art_) continue;
      for (size_t j = 0; j < art_; ++j) {
        if (std::fabs(at(i, j)) > 1e-9) {
          Pivot(i, j);
          break;
        }
      }
    }
    Run(&d2_);
    LpSolution out;
    out.w.assign(n_, 0.0);
    for (size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < n_) out.w[basis_[i]] = std::max(0.0, at(i, width_ - 1));
    }
    out.pivots = pivots_;
    return out;
  }

 private:
  double& at(size_t i, size_t j) { return t_[i * width_ + j]; }

  void Pivot(size_t r, size_t k) {
    ++pivots_;
    double* row = &t_[r * width_];
    const double inv = 1.0 / row[k];
    for (size_t j = 0; j < width_; ++j) row[j] *= inv;
    row[k] = 1.0;
    auto eliminate = [&](double* other) {
      const double f = other[k];
      if (f == 0.0) return;
      for (size_t j = 0; j < width_; ++j) other[j] -= f * row[j];
      other[k] = 0.0;
    };
    for (size_t i = 0; i < rows_; ++i) {
      if (i != r) eliminate(&t_[i * width_]);
    }
    eliminate(d1_.data());
    eliminate(d2_.data());
    basis_[r] = k;
  }

  void Run(std::vector<double>* d) {
    constexpr double kEnter = 1e-11, kPivot = 1e-12;
    for (long iter = 0;; ++iter) {
      const bool bland = iter > 20000;
      if (iter > 200000) throw std::logic_error("oracle LP did not converge");
      size_t k = art_;
      double best = -kEnter;
      for (size_t j = 0; j < art_; ++j) {
        if ((*d)[j] < best) {
          k = j;
          if (bland) break;
          best = (*d)[j];
        }
      }
      if (k == art_) return;
      size_t r = rows_;
      double ratio = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < rows_; ++i) {
        const double a = at(i, k);
        if (a <= kPivot) continue;
        const double q = std::max(0.0, at(i, width_ - 1)) / a;
        if (q < ratio - 1e-14 || (q <= ratio + 1e-14 && r < rows_ && basis_[i] < basis_[r])) {
          ratio = std::min(ratio, q);
          r = i;
        }
      }
      if (r == rows_) throw std::logic_error("oracle LP is unbounded");
      Pivot(r, k);
    }
  }

  size_t n_, rows_ = 0, art_ = 0, width_ = 0;
  bool has_ineq_ = false;
  std::vector<double> t_, d1_, d2_;
  std::vector<size_t> basis_;
  long pivots_ = 0;
};

// Mixture LP over posteriors: rows are sum w = 1 and, per s, every
// supported z but the last.
struct Mixture {
  std::vector<size_t> cols;  // indices into the posterior list
  std::vector<double> w;
  double utility = 0.0;
  double rate = 0.0;
  long pivots = 0;
};

Mixture SolveMixture(const Source& src, Problem problem,
                     const std::vector<std::vector<double>>& posteriors,
                     std::optional<double> r) {
  std::vector<std::pair<size_t, size_t>> row_of;  // (s, z)
  for (size_t s = 0; s < src.ns; ++s) {
    for (size_t i = 0; i + 1 < src.supp[s].size(); ++i) row_of.push_back({s, src.supp[s][i]});
  }
  Lp lp;
  lp.rows = 1 + row_of.size();
  lp.b.push_back(1.0);
  for (auto [s, z] : row_of) lp.b.push_back(src.cond[s * src.nz + z]);
  std::vector<Values> vals;
  for (const auto& a : posteriors) {
    std::vector<double> col{1.0};
    for (auto [s, z] : row_of) col.push_back(a[s * src.nz + z]);
    lp.cols.push_back(std::move(col));
    vals.push_back(ColumnValues(src, problem, a));
    lp.c.push_back(vals.back().utility);
    if (r) lp.g.push_back(vals.back().rate);
  }
  if (r) lp.h = *r;
  LpSolution sol = Tableau(lp).Solve();
  Mixture m;
  m.pivots = sol.pivots;
  double total = 0.0;
  for (size_t j = 0; j < sol.w.size(); ++j) {
    if (sol.w[j] > 1e-13) {
      m.cols.push_back(j);
      m.w.push_back(sol.w[j]);
      total += sol.w[j];
    }
  }
  for (size_t k = 0; k < m.cols.size(); ++k) {
    m.w[k] /= total;
    m.utility += m.w[k] * vals[m.cols[k]].utility;
    m.rate += m.w[k] * vals[m.cols[k]].rate;
  }
  return m;
}

// Per-s choices for structured posteriors: a fixed z, a fixed t (x drawn
// from P(x|s,t)), a fixed x (t from P(t|s,x)), or nothing (z from P(z|s)).
std::vector<std::vector<std::vector<double>>> StructuredBlocks(const Source& src,
                                                               bool vertices_only) {
  std::vector<std::vector<std::vector<double>>> blocks(src.ns);
  for (size_t s = 0; s < src.ns; ++s) {
    const double* c = &src.cond[s * src.nz];
    auto& opts = blocks[s];
    if (src.supp[s].empty()) {
      opts.push_back(std::vector<double>(src.nz, 0.0));
      continue;
    }
    for (size_t z : src.supp[s]) {
      std::vector<double> a(src.nz, 0.0);
      a[z] = 1.0;
      opts.push_back(std::move(a));
    }
    if (vertices_only || src.supp[s].size() == 1) continue;
    for (size_t t = 0; t < src.nt; ++t) {
      double m = 0.0;
      int n = 0;
      for (size_t x = 0; x < src.nx; ++x) {
        m += c[x * src.nt + t];
        n += c[x * src.nt + t] > 0.0;
      }
      if (n < 2) continue;
      std::vector<double> a(src.nz, 0.0);
      for (size_t x = 0; x < src.nx; ++x) a[x * src.nt + t] = c[x * src.nt + t] / m;
      opts.push_back(std::move(a));
    }
    for (size_t x = 0; x < src.nx; ++x) {
      double m = 0.0;
      int n = 0;
      for (size_t t = 0; t < src.nt; ++t) {
        m += c[x * src.nt + t];
        n += c[x * src.nt + t] > 0.0;
      }
      if (n < 2) continue;
      std::vector<double> a(src.nz, 0.0);
      for (size_t t = 0; t < src.nt; ++t) a[x * src.nt + t] = c[x * src.nt + t] / m;
      opts.push_back(std::move(a));
    }
    opts.push_back(std::vector<double>(c, c + src.nz));
  }
  return blocks;
}

std::vector<double> Assemble(const Source& src,
                             const std::vector<std::vector<std::vector<double>>>& blocks,
                             const std::vector<size_t>& choice) {
  std::vector<double> a(src.ns * src.nz);
  for (size_t s = 0; s < src.ns; ++s) {
    std::copy(blocks[s][choice[s]].begin(), blocks[s][choice[s]].end(),
              a.begin() + s * src.nz);
  }
  return a;
}

// Every combination of per-s blocks, or a seeded sample of `limit` of them
// (always including the all-"nothing" column, i.e. constant Y).
std::vector<std::vector<double>> StructuredColumns(
    const Source& src, const std::vector<std::vector<std::vector<double>>>& blocks,
    long limit, std::mt19937_64& rng) {
  double count = 1.0;
  for (const auto& b : blocks) count *= static_cast<double>(b.size());
  std::vector<std::vector<double>> cols;
  std::vector<size_t> choice(src.ns, 0);
  if (count <= static_cast<double>(limit)) {
    while (true) {
      cols.push_back(Assemble(src, blocks, choice));
      size_t s = src.ns;
      while (s > 0) {
        --s;
        if (++choice[s] < blocks[s].size()) break;
        choice[s] = 0;
        if (s == 0) return cols;
      }
    }
  }
  for (size_t s = 0; s < src.ns; ++s) choice[s] = blocks[s].size() - 1;
  cols.push_back(Assemble(src, blocks, choice));
  for (long k = 1; k < limit; ++k) {
    for (size_t s = 0; s < src.ns; ++s) {
      choice[s] = std::uniform_int_distribution<size_t>(0, blocks[s].size() - 1)(rng);
    }
    cols.push_back(Assemble(src, blocks, choice));
  }
  return cols;
}

// ---------------------------------------------------------------------------
// Local search over couplings.

class Search {
 public:
  Search(const Source& src, Problem problem, double r, size_t L, std::mt19937_64* rng)
      : src_(src), problem_(problem), r_(r), L_(L), rng_(*rng), ref_s_(src.ns) {
    for (size_t s = 0; s < src.ns; ++s) {
      if (src.supp[s].size() >= 2) movable_.push_back(s);
      if (!src.supp[s].empty() && ref_s_ == src.ns) ref_s_ = s;
    }
  }

  // Ascends from `pi` for `moves` evaluations; returns the final state.
  std::vector<double> Run(std::vector<double> pi, long moves) {
    static constexpr double kSteps[] = {1.0, 0.5, 0.25, 0.1, 0.03, 0.01, 0.001};
    double score = Score(Measure(src_, problem_, pi, L_), r_);
    std::vector<double> cand;
    std::uniform_int_distribution<size_t> step(0, std::size(kSteps) - 1);
    std::uniform_int_distribution<size_t> pick_y(0, L_ - 1);
    for (long it = 0; it < moves; ++it) {
      ++used_;
      const double frac = kSteps[step(rng_)];
      cand = pi;
      const bool cycle = !movable_.empty() && std::bernoulli_distribution(0.7)(rng_);
      if (cycle) {
        const size_t s = movable_[std::uniform_int_distribution<size_t>(0, movable_.size() - 1)(rng_)];
        const auto& sp = src_.supp[s];
        std::uniform_int_distribution<size_t> pick_z(0, sp.size() - 1);
        const size_t z1 = sp[pick_z(rng_)];
        size_t z2 = sp[pick_z(rng_)];
        if (z1 == z2) continue;
        const size_t y1 = pick_y(rng_), y2 = pick_y(rng_);
        if (y1 == y2) continue;
        const double emax = std::min(cell(pi, s, z1, y2), cell(pi, s, z2, y1));
        if (emax <= kTiny) continue;
        const double e = frac * emax;
        cell(cand, s, z1, y1) += e;
        cell(cand, s, z2, y2) += e;
        cell(cand, s, z1, y2) -= e;
        cell(cand, s, z2, y1) -= e;
      } else {
        if (ref_s_ == src_.ns) return pi;
        const size_t y1 = pick_y(rng_), y2 = pick_y(rng_);
        if (y1 == y2 || Weight(pi, y1) <= kTiny) continue;
        if (std::bernoulli_distribution(0.5)(rng_)) {
          // Proportional shift (frac 1 merges y1 into y2).
          for (size_t s = 0; s < src_.ns; ++s) {
            for (size_t z : src_.supp[s]) {
              const double m = frac * cell(pi, s, z, y1);
              cell(cand, s, z, y1) -= m;
              cell(cand, s, z, y2) += m;
            }
          }
        } else {
          // One z per s carries the same amount.
          std::vector<size_t> zs(src_.ns, 0);
          double emax = std::numeric_limits<double>::infinity();
          for (size_t s = 0; s < src_.ns; ++s) {
            if (src_.supp[s].empty()) continue;
            std::vector<size_t> live;
            for (size_t z : src_.supp[s]) {
              if (cell(pi, s, z, y1) > kTiny) live.push_back(z);
            }
            if (live.empty()) {
              emax = 0.0;
              break;
            }
            zs[s] = live[std::uniform_int_distribution<size_t>(0, live.size() - 1)(rng_)];
            emax = std::min(emax, cell(pi, s, zs[s], y1));
          }
          if (!(emax > kTiny)) continue;
          const double e = frac * emax;
          for (size_t s = 0; s < src_.ns; ++s) {
            if (src_.supp[s].empty()) continue;
            cell(cand, s, zs[s], y1) -= e;
            cell(cand, s, zs[s], y2) += e;
          }
        }
      }
      for (double& v : cand) v = std::max(0.0, v);
      const double sc = Score(Measure(src_, problem_, cand, L_), r_);
      if (sc > score + 1e-13) {
        score = sc;
        pi.swap(cand);
      }
    }
    return pi;
  }

  long used() const { return used_; }

 private:
  double& cell(std::vector<double>& pi, size_t s, size_t z, size_t y) const {
    return pi[(s * src_.nz + z) * L_ + y];
  }
  double cell(const std::vector<double>& pi, size_t s, size_t z, size_t y) const {
    return pi[(s * src_.nz + z) * L_ + y];
  }
  double Weight(const std::vector<double>& pi, size_t y) const {
    double w = 0.0;
    for (size_t z : src_.supp[ref_s_]) w += cell(pi, ref_s_, z, y);
    return w;
  }

  const Source& src_;
  Problem problem_;
  double r_;
  size_t L_;
  std::mt19937_64& rng_;
  size_t ref_s_;
  std::vector<size_t> movable_;
  long used_ = 0;
};

std::vector<double> FromMixture(const Source& src,
                                const std::vector<std::vector<double>>& posteriors,
                                const Mixture& m, size_t L) {
  std::vector<double> pi(src.ns * src.nz * L, 0.0);
  for (size_t k = 0; k < m.cols.size() && k < L; ++k) {
    const auto& a = posteriors[m.cols[k]];
    for (size_t sz = 0; sz < src.ns * src.nz; ++sz) pi[sz * L + k] = m.w[k] * a[sz];
  }
  return pi;
}

// Inverse-CDF coupling of the P(.|s) under random z orders.
std::vector<double> RandomStaircase(const Source& src, size_t L, std::mt19937_64& rng) {
  std::vector<std::vector<size_t>> order(src.ns);
  std::vector<double> cuts{1.0};
  for (size_t s = 0; s < src.ns; ++s) {
    order[s] = src.supp[s];
    std::shuffle(order[s].begin(), order[s].end(), rng);
    double acc = 0.0;
    for (size_t z : order[s]) {
      acc += src.cond[s * src.nz + z];
      if (acc < 1.0 - 1e-12) cuts.push_back(acc);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
             cuts.end());
  std::vector<double> pi(src.ns * src.nz * L, 0.0);
  double lo = 0.0;
  for (size_t k = 0; k < cuts.size(); ++k) {
    const double width = cuts[k] - lo, mid = 0.5 * (lo + cuts[k]);
    lo = cuts[k];
    if (width <= 0.0) continue;
    const size_t y = std::min(k, L - 1);
    for (size_t s = 0; s < src.ns; ++s) {
      double acc = 0.0;
      for (size_t z : order[s]) {
        acc += src.cond[s * src.nz + z];
        if (mid < acc || z == order[s].back()) {
          pi[(s * src.nz + z) * L + y] += width;
          break;
        }
      }
    }
  }
  return pi;
}

std::vector<double> ProductStart(const Source& src, size_t L) {
  std::vector<double> pi(src.ns * src.nz * L);
  for (size_t sz = 0; sz < src.ns * src.nz; ++sz) {
    for (size_t y = 0; y < L; ++y) pi[sz * L + y] = src.cond[sz] / static_cast<double>(L);
  }
  return pi;
}

// Coupling of a warm-start mechanism, or nothing if it does not fit in L.
std::optional<std::vector<double>> FromMechanism(const Source& src, const Mechanism& m,
                                                 size_t L) {
  const size_t ny = m.num_outputs();
  std::vector<size_t> used;
  for (size_t y = 0; y < ny; ++y) {
    bool live = false;
    for (size_t sz = 0; sz < src.ns * src.nz && !live; ++sz) {
      live = src.cond[sz] > 0.0 && m.at(sz, y).to_double() > kTiny;
    }
    if (live) used.push_back(y);
  }
  if (used.size() > L) return std::nullopt;
  std::vector<double> pi(src.ns * src.nz * L, 0.0);
  for (size_t k = 0; k < used.size(); ++k) {
    for (size_t sz = 0; sz < src.ns * src.nz; ++sz) {
      pi[sz * L + k] = src.cond[sz] * m.at(sz, used[k]).to_double();
    }
  }
  return pi;
}

// Posterior Q(z|s) of each used symbol of a coupling; s-blocks with no mass
// on y fall back to P(z|s).
void CollectPosteriors(const Source& src, const std::vector<double>& pi, size_t L,
                       std::vector<std::vector<double>>* out) {
  for (size_t y = 0; y < L; ++y) {
    std::vector<double> a(src.ns * src.nz, 0.0);
    bool any = false;
    for (size_t s = 0; s < src.ns; ++s) {
      double w = 0.0;
      for (size_t z : src.supp[s]) w += pi[(s * src.nz + z) * L + y];
      for (size_t z : src.supp[s]) {
        a[s * src.nz + z] = w > kTiny ? pi[(s * src.nz + z) * L + y] / w
                                      : src.cond[s * src.nz + z];
      }
      any = any || w > kTiny;
    }
    if (any) out->push_back(std::move(a));
  }
}

Mechanism ToMechanism(const JointPMF& p, const Source& src,
                      const std::vector<std::vector<double>>& posteriors, const Mixture& m) {
  const size_t ny = std::max<size_t>(1, m.cols.size());
  std::vector<Prob> kernel;
  kernel.reserve(src.ns * src.nz * ny);
  for (size_t sz = 0; sz < src.ns * src.nz; ++sz) {
    std::vector<double> row(ny, 0.0);
    double sum = 0.0;
    for (size_t k = 0; k < m.cols.size(); ++k) {
      row[k] = src.cond[sz] > 0.0 ? m.w[k] * posteriors[m.cols[k]][sz] / src.cond[sz] : m.w[k];
      sum += row[k];
    }
    if (!(sum > 0.0)) {
      std::fill(row.begin(), row.end(), 0.0);
      row[0] = sum = 1.0;
    }
    for (double v : row) kernel.push_back(Prob::Float(v / sum));
  }
  return Mechanism(p.axes(), {"Y", Alphabet::Indexed("y", ny)}, std::move(kernel));
}

Values MeasureMechanism(const Source& src, Problem problem, const Mechanism& mech) {
  const size_t L = mech.num_outputs();
  std::vector<double> pi(src.ns * src.nz * L);
  for (size_t sz = 0; sz < src.ns * src.nz; ++sz) {
    for (size_t y = 0; y < L; ++y) pi[sz * L + y] = src.cond[sz] * mech.at(sz, y).to_double();
  }
  Values v = Measure(src, problem, pi, L);
  v.utility = std::max(0.0, v.utility);
  v.rate = std::max(0.0, v.rate);
  return v;
}

std::mt19937_64 SeededRng(uint64_t seed) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

std::string ToString(Problem p) { return p == Problem::kP1 ? "P1" : "P2"; }

Problem ParseProblem(const std::string& name) {
  if (name == "P1" || name == "p1") return Problem::kP1;
  if (name == "P2" || name == "p2") return Problem::kP2;
  throw InvalidArgument("unknown problem '" + name + "'");
}

std::string ToString(OracleMethod m) {
  return m == OracleMethod::kLpVertex ? "LP_VERTEX" : "LOCAL_SEARCH";
}

OracleResult OracleSearch(const JointPMF& p, Problem problem, double r,
                          const OracleOptions& options) {
  if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("rate must be >= 0");
  const Source src = MakeSource(p);
  const size_t L = src.ns * src.nx * src.nt + 2;
  std::mt19937_64 rng = SeededRng(options.seed);

  std::vector<std::vector<double>> posteriors =
      StructuredColumns(src, StructuredBlocks(src, false), options.column_limit, rng);
  const size_t structured = posteriors.size();
  for (const Mechanism& m : options.warm_starts) {
    if (m.num_rows() != src.ns * src.nz) throw InvalidArgument("warm start has wrong inputs");
    std::vector<double> pi(src.ns * src.nz * m.num_outputs());
    for (size_t sz = 0; sz < src.ns * src.nz; ++sz) {
      for (size_t y = 0; y < m.num_outputs(); ++y) {
        pi[sz * m.num_outputs() + y] = src.cond[sz] * m.at(sz, y).to_double();
      }
    }
    CollectPosteriors(src, pi, m.num_outputs(), &posteriors);
  }
  Mixture first = SolveMixture(src, problem, posteriors, r);
  long pivots = first.pivots;

  std::vector<std::vector<double>> starts;
  starts.push_back(FromMixture(src, posteriors, first, L));
  for (const Mechanism& m : options.warm_starts) {
    if (auto pi = FromMechanism(src, m, L)) starts.push_back(std::move(*pi));
  }
  for (int k = 0; k < options.random_starts; ++k) starts.push_back(RandomStaircase(src, L, rng));
  starts.push_back(ProductStart(src, L));

  Search search(src, problem, r, L, &rng);
  const long per_start = std::max<long>(0, options.budget) / static_cast<long>(starts.size());
  for (auto& start : starts) {
    CollectPosteriors(src, search.Run(std::move(start), per_start), L, &posteriors);
  }
  Mixture best = posteriors.size() > structured ? SolveMixture(src, problem, posteriors, r)
                                                : first;
  pivots += best.pivots;

  OracleResult out(problem, r, ToMechanism(p, src, posteriors, best));
  const Values v = MeasureMechanism(src, problem, out.best_mechanism);
  out.best_utility = v.utility;
  out.best_rate = v.rate;
  out.method = OracleMethod::kLocalSearch;
  out.budget_used = search.used() + pivots;
  out.seed = options.seed;
  out.lp_utility = first.utility;
  out.improved_over_constant = out.best_utility > 1e-12;
  if (!out.improved_over_constant) {
    out.warnings.push_back("BudgetTooSmall: no improvement over constant Y");
  }
  return out;
}

std::vector<OracleResult> OracleSweep(const JointPMF& p, Problem problem,
                                      const std::vector<double>& rates,
                                      const OracleOptions& options) {
  std::vector<size_t> order(rates.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return rates[a] < rates[b]; });
  std::vector<std::optional<OracleResult>> done(rates.size());
  OracleOptions opt = options;
  for (size_t i : order) {
    done[i] = OracleSearch(p, problem, rates[i], opt);
    opt.warm_starts = options.warm_starts;
    opt.warm_starts.push_back(done[i]->best_mechanism);
  }
  std::vector<OracleResult> out;
  for (auto& d : done) out.push_back(std::move(*d));
  return out;
}

OracleResult LpVertices(const JointPMF& p) {
  const Source src = MakeSource(p);
  size_t cells = 0;
  for (const auto& sp : src.supp) cells += sp.size();
  if (cells > 8) throw TooLarge("vertex enumeration needs at most 8 positive cells");
  std::mt19937_64 rng(0);
  const auto posteriors = StructuredColumns(src, StructuredBlocks(src, true),
                                            std::numeric_limits<long>::max(), rng);
  const Mixture m = SolveMixture(src, Problem::kP1, posteriors, std::nullopt);
  OracleResult out(Problem::kP1, std::numeric_limits<double>::infinity(),
                   ToMechanism(p, src, posteriors, m));
  const Values v = MeasureMechanism(src, Problem::kP1, out.best_mechanism);
  out.best_utility = v.utility;
  out.best_rate = v.rate;
  out.method = OracleMethod::kLpVertex;
  out.budget_used = m.pivots;
  out.lp_utility = m.utility;
  out.improved_over_constant = out.best_utility > 1e-12;
  return out;
}

void CheckOrdering(SandwichReport* rep) {
  auto check = [&](double lo, double hi, const std::string& what) {
    if (lo > hi + kSandwichTolerance) {
      rep->violations.push_back(what + " (" + std::to_string(lo) + " > " +
                                std::to_string(hi) + ")");
    }
  };
  rep->violations.clear();
  check(rep->lower_theory, rep->lower_constructed, "lower_theory > lower_constructed");
  check(rep->lower_constructed, rep->oracle, "lower_constructed > oracle");
  check(rep->oracle, rep->upper_theory, "oracle > upper_theory");
}

SandwichReport Sandwich(const JointPMF& p, Problem problem, double r,
                        const SandwichOptions& options) {
  const SourceQuantities q = ComputeSourceQuantities(p);
  SandwichReport rep;
  rep.problem = problem;
  rep.r = r;
  rep.upper_theory = q.h_t_given_s;
  rep.constructed_by = "constant";

  auto consider = [&](const std::string& label, auto&& build) {
    try {
      BuildResult b = build();
      const MechanismReport m = Evaluate(p, b.mechanism, r);
      const bool feasible = problem == Problem::kP1 ? m.feasible_p1 : m.feasible_p2;
      const double u = problem == Problem::kP1 ? m.utility_p1 : m.utility_p2;
      if (!feasible) {
        rep.notes.push_back(label + ": infeasible at r");
      } else if (u > rep.lower_constructed) {
        rep.lower_constructed = u;
        rep.constructed_by = label;
      }
    } catch (const SearchFailed& e) {
      rep.notes.push_back(label + ": " + e.what());
    } catch (const RegimeError& e) {
      rep.notes.push_back(label + ": " + e.what());
    } catch (const DegenerateSource& e) {
      rep.notes.push_back(label + ": " + e.what());
    }
  };

  if (problem == Problem::kP1) {
    const BoundSetP1 b = BoundsP1(q, r);
    rep.lower_theory = b.best_lower_usable;
    rep.lower_theory_id = b.best_id;
    const double hxs = q.h_x_given_s;
    const DesignOptions& d = options.design;
    if (b.regime == RateRegime::kLow && hxs > 0.0) {
      consider("A", [&] { return BuildP1(p, r, Design::kA, d); });
      consider("C", [&] { return BuildP1(p, r, Design::kC, d); });
    }
    consider("B", [&] { return BuildP1(p, r, Design::kB, d); });
    if (b.regime != RateRegime::kLow && hxs > 0.0) {
      consider("A@H(X|S)", [&] { return BuildP1(p, hxs, Design::kA, d); });
    }
    if (b.regime == RateRegime::kHigh || (b.L1_prime && r < q.h_x)) {
      consider("HIGHRATE", [&] { return BuildP1(p, r, Design::kHighRate, d); });
    } else if (b.regime == RateRegime::kUnconstrained && hxs < q.h_x) {
      consider("HIGHRATE@H(X|S)", [&] { return BuildP1(p, hxs, Design::kHighRate, d); });
    }
    consider("P2", [&] { return BuildP2(p, r, d); });
  } else {
    const BoundSetP2 b = BoundsP2(q, r);
    if (b.regime == P2Regime::kFull) {
      rep.lower_theory = *b.exact_value;
      rep.lower_theory_id = "exact_value";
    } else if (b.regime == P2Regime::kMid) {
      rep.lower_theory = std::max(0.0, b.L1c);
      rep.lower_theory_id = "L1c";
    } else {
      rep.lower_theory_id = "none";
    }
    consider("P2", [&] { return BuildP2(p, r, options.design); });
  }

  rep.oracle = OracleSearch(p, problem, r, options.oracle).best_utility;
  CheckOrdering(&rep);
  return rep;
}

}  // namespace fairrep
