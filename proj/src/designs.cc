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

#include "fairrep/designs.h"

#include <algorithm>
#include <cmath>

#include "fairrep/bounds.h"
#include "fairrep/errors.h"
#include "fairrep/info.h"

namespace fairrep {
namespace {

constexpr double kBoundarySlack = 1e-12;
constexpr double kAlphaWindow = 1e-12;
constexpr double kFloatTolerance = 1e-9;

struct Dims {
  size_t ns, nx, nt;
  size_t sx(size_t s, size_t x) const { return s * nx + x; }
  size_t row(size_t s, size_t x, size_t t) const { return (s * nx + x) * nt + t; }
};

Dims CheckSource(const JointPMF& p) {
  if (p.rank() != 3 || p.axis(0).role != "S" || p.axis(1).role != "X" ||
      p.axis(2).role != "T") {
    throw InvalidArgument("source must have axes (S, X, T) in that order");
  }
  return {p.axis(0).alphabet.size(), p.axis(1).alphabet.size(),
          p.axis(2).alphabet.size()};
}

Alphabet Relabel(const std::string& prefix, size_t n) {
  return Alphabet::Indexed(prefix, n);
}

// P(u' | s, x) for U' = erase(FRL(S -> X)), rows sx, columns u'.
std::vector<Prob> ErasedConditional(const ErasedWitness& e, const Dims& dim) {
  const size_t nu = e.num_base();
  const size_t nup = e.u_prime.size();
  std::vector<Prob> out(dim.ns * dim.nx * nup, Prob::Zero(e.alpha.is_exact()));
  for (size_t s = 0; s < dim.ns; ++s) {
    for (size_t x = 0; x < dim.nx; ++x) {
      for (size_t u = 0; u < nu; ++u) {
        const Prob& pu = e.base.coupling_at(s, x, u);
        if (pu.is_zero()) continue;
        for (size_t v = 0; v < nup; ++v) {
          if (!e.at(u, v).is_zero()) out[dim.sx(s, x) * nup + v] += pu * e.at(u, v);
        }
      }
    }
  }
  return out;
}

// Mass over ((S,X,U') as one axis "C", T) from P(s,x,t) P(u'|s,x).
JointPMF StageTwoJoint(const JointPMF& p, const Dims& dim, const Alphabet& u_alpha,
                       const std::vector<Prob>& pu) {
  const size_t nu = u_alpha.size();
  Alphabet c = ProductAlphabet(
      {&p.axis(0).alphabet, &p.axis(1).alphabet, &u_alpha});
  std::vector<Prob> mass(dim.ns * dim.nx * nu * dim.nt, Prob::Zero(p.is_exact()));
  for (size_t s = 0; s < dim.ns; ++s) {
    for (size_t x = 0; x < dim.nx; ++x) {
      for (size_t t = 0; t < dim.nt; ++t) {
        const Prob& m = p.mass()[dim.row(s, x, t)];
        if (m.is_zero()) continue;
        for (size_t u = 0; u < nu; ++u) {
          const Prob& q = pu[dim.sx(s, x) * nu + u];
          if (!q.is_zero()) mass[(dim.sx(s, x) * nu + u) * dim.nt + t] = m * q;
        }
      }
    }
  }
  return JointPMF({{"C", std::move(c)}, p.axis(2)}, std::move(mass));
}

// Kernel for Y = (U', Y') given P(u'|s,x) and P(y'|c, t) from a witness
// whose conditioning row for (s, x, u') is `cond_row(sx, u')`.
template <typename CondRow>
Mechanism PairMechanism(const JointPMF& p, const Dims& dim, const Alphabet& u_alpha,
                        const std::vector<Prob>& pu, const FunctionalWitness& w,
                        CondRow cond_row) {
  const size_t nu = u_alpha.size();
  const size_t ny = w.num_aux();
  Alphabet y_alpha = Relabel("y", ny);
  Alphabet out = ProductAlphabet({&u_alpha, &y_alpha});
  std::vector<Prob> kernel(dim.ns * dim.nx * dim.nt * nu * ny, Prob::Zero(p.is_exact()));
  for (size_t s = 0; s < dim.ns; ++s) {
    for (size_t x = 0; x < dim.nx; ++x) {
      for (size_t t = 0; t < dim.nt; ++t) {
        const size_t row = dim.row(s, x, t);
        for (size_t u = 0; u < nu; ++u) {
          const Prob& q = pu[dim.sx(s, x) * nu + u];
          if (q.is_zero()) continue;
          const size_t cv = cond_row(dim.sx(s, x), u);
          for (size_t y = 0; y < ny; ++y) {
            const Prob& k = w.coupling_at(cv, t, y);
            if (!k.is_zero()) kernel[(row * nu + u) * ny + y] = q * k;
          }
        }
      }
    }
  }
  return Mechanism(p.axes(), {"Y", std::move(out)}, std::move(kernel));
}

// Kernel for Y = Z from a witness whose row for source cell (s, x, t) is
// (cond_row(s, x), data index t).
template <typename CondRow, typename DataIndex>
Mechanism DirectMechanism(const JointPMF& p, const Dims& dim, const FunctionalWitness& w,
                          CondRow cond_row, DataIndex data_index) {
  const size_t ny = w.num_aux();
  std::vector<Prob> kernel(dim.ns * dim.nx * dim.nt * ny, Prob::Zero(p.is_exact()));
  for (size_t s = 0; s < dim.ns; ++s) {
    for (size_t x = 0; x < dim.nx; ++x) {
      for (size_t t = 0; t < dim.nt; ++t) {
        const size_t row = dim.row(s, x, t);
        for (size_t y = 0; y < ny; ++y) {
          kernel[row * ny + y] = w.coupling_at(cond_row(s, x), data_index(s, x, t), y);
        }
      }
    }
  }
  return Mechanism(p.axes(), {"Y", Relabel("y", ny)}, std::move(kernel));
}

Prob ChooseAlpha(double r, double h, bool exact) {
  const double a = std::clamp(r / h, 0.0, 1.0);
  if (!exact) return Prob::Float(a);
  return Prob::SimplestBetween(std::max(0.0, a - kAlphaWindow), a);
}

void RecordSfrl(const SfrlWitness& w, BuildResult* out) {
  out->sfrl_excess = w.achieved_excess;
  out->sfrl_target = w.target_bound;
  out->sfrl_met_target = w.met_target;
  out->log.push_back("sfrl: " + std::to_string(w.num_aux()) + " cells, excess " +
                     std::to_string(w.achieved_excess) + " bits (target " +
                     std::to_string(w.target_bound) + ", start " +
                     std::to_string(w.start_excess) + ", " +
                     std::to_string(w.moves_used) + " moves)");
}

}  // namespace

std::string FreshSymbol(const std::vector<const Alphabet*>& alphabets) {
  std::string sym = "c";
  auto taken = [&](const std::string& s) {
    return std::any_of(alphabets.begin(), alphabets.end(),
                       [&](const Alphabet* a) { return a->contains(s); });
  };
  while (taken(sym)) sym += "~";
  return sym;
}

ErasedWitness Erase(const FrlWitness& base, const Prob& alpha,
                    const std::vector<const Alphabet*>& reserved) {
  if (alpha.sign() < 0 || alpha > Prob::One(alpha.is_exact())) {
    throw AlphaOutOfRange("erasure probability must lie in [0, 1], got " +
                          alpha.str());
  }
  ErasedWitness e;
  e.base = base;
  e.alpha = alpha;
  std::vector<const Alphabet*> avoid = reserved;
  avoid.push_back(&base.aux);
  e.erasure_symbol = FreshSymbol(avoid);
  std::vector<std::string> symbols = base.aux.symbols();
  symbols.push_back(e.erasure_symbol);
  e.u_prime = Alphabet(std::move(symbols));
  const size_t nu = base.num_aux();
  const size_t nup = nu + 1;
  const Prob keep_not = Prob::One(alpha.is_exact()) - alpha;
  e.channel.assign(nu * nup, Prob::Zero(alpha.is_exact()));
  for (size_t u = 0; u < nu; ++u) {
    e.channel[u * nup + u] = alpha;
    e.channel[u * nup + nu] = keep_not;
  }
  return e;
}

std::string ToString(Design d) {
  switch (d) {
    case Design::kA:
      return "A";
    case Design::kB:
      return "B";
    case Design::kC:
      return "C";
    case Design::kHighRate:
      return "HIGHRATE";
    case Design::kP2:
      return "P2";
  }
  return "?";
}

Design ParseDesign(const std::string& name) {
  for (Design d : {Design::kA, Design::kB, Design::kC, Design::kHighRate, Design::kP2}) {
    if (ToString(d) == name) return d;
  }
  throw InvalidArgument("unknown design '" + name + "'");
}

BuildResult BuildP1(const JointPMF& p, double r, Design design,
                    const DesignOptions& options) {
  const Dims dim = CheckSource(p);
  if (!std::isfinite(r) || r < 0.0) throw RegimeError("rate must be >= 0");
  if (design == Design::kP2) return BuildP2(p, r, options);
  const bool exact = p.is_exact();
  const SourceQuantities q = ComputeSourceQuantities(p);
  const BoundSetP1 bounds = BoundsP1(q, r);
  SfrlOptions sopt;
  sopt.seed = options.seed;
  sopt.budget = options.sfrl_budget;

  BuildResult out{Mechanism::Constant(p.axes(), exact), design, r};
  out.log.push_back("design " + ToString(design) + " at r = " + std::to_string(r) +
                    ", H(X|S) = " + std::to_string(q.h_x_given_s));

  if (design == Design::kB) {
    JointPMF cd = p.Group({{"S", "X"}, {"T"}}, {"C", "T"});
    SfrlWitness w = SfrlConstruct(cd, sopt);
    RecordSfrl(w, &out);
    out.mechanism = DirectMechanism(
        p, dim, w, [&](size_t s, size_t x) { return dim.sx(s, x); },
        [](size_t, size_t, size_t t) { return t; });
    if (w.met_target) {
      out.guarantee = "L2";
      out.guaranteed_value = bounds.L2;
    }
    return out;
  }

  if (design == Design::kHighRate) {
    if (r < q.h_x_given_s - kBoundarySlack || r >= q.h_x) {
      throw RegimeError("HIGHRATE needs H(X|S) <= r < H(X)");
    }
    FrlWitness u = FrlConstruct(p.Marginal({"S", "X"}));
    const size_t nu = u.num_aux();
    std::vector<Prob> pu(dim.ns * dim.nx * nu);
    for (size_t s = 0; s < dim.ns; ++s) {
      for (size_t x = 0; x < dim.nx; ++x) {
        for (size_t k = 0; k < nu; ++k) pu[dim.sx(s, x) * nu + k] = u.coupling_at(s, x, k);
      }
    }
    JointPMF stage = StageTwoJoint(p, dim, u.aux, pu);
    FrlWitness y = FrlConstruct(stage);
    out.log.push_back("U = FRL(S -> X): " + std::to_string(nu) + " cells");
    out.log.push_back("Y' = FRL((S,X,U) -> T): " + std::to_string(y.num_aux()) +
                      " cells");
    out.mechanism = PairMechanism(p, dim, u.aux, pu, y, [&](size_t sx, size_t k) {
      return sx * nu + k;
    });
    out.guarantee = "L1_prime";
    out.guaranteed_value = q.h_t - q.h_s;
    return out;
  }

  // Designs A and C share U'.
  if (q.h_x_given_s <= 0.0) {
    throw DegenerateSource(
        "H(X|S) = 0: the erasure probability r/H(X|S) is undefined; use B or "
        "HIGHRATE");
  }
  if (r > q.h_x_given_s + kBoundarySlack) {
    throw RegimeError("design " + ToString(design) + " needs r <= H(X|S)");
  }
  FrlWitness u = FrlConstruct(p.Marginal({"S", "X"}));
  const Prob alpha = ChooseAlpha(r, q.h_x_given_s, exact);
  out.alpha = alpha;
  ErasedWitness e = Erase(u, alpha, {&p.axis(0).alphabet, &p.axis(1).alphabet});
  const std::vector<Prob> pu = ErasedConditional(e, dim);
  const size_t nup = e.u_prime.size();
  out.log.push_back("U = FRL(S -> X): " + std::to_string(u.num_aux()) + " cells");
  out.log.push_back("U' = erase(U): alpha = " + alpha.str() + ", erasure symbol '" +
                    e.erasure_symbol + "'");

  if (design == Design::kA) {
    JointPMF stage = StageTwoJoint(p, dim, e.u_prime, pu);
    FrlWitness y = FrlConstruct(stage);
    out.log.push_back("Y' = FRL((S,X,U') -> T): " + std::to_string(y.num_aux()) +
                      " cells");
    out.mechanism = PairMechanism(p, dim, e.u_prime, pu, y, [&](size_t sx, size_t k) {
      return sx * nup + k;
    });
    out.guarantee = "L1";
    out.guaranteed_value = bounds.L1;
    return out;
  }

  // Design C: joint over (C = (S,X), T, V = U').
  Alphabet c = ProductAlphabet({&p.axis(0).alphabet, &p.axis(1).alphabet});
  std::vector<Prob> mass(dim.ns * dim.nx * dim.nt * nup, Prob::Zero(exact));
  for (size_t s = 0; s < dim.ns; ++s) {
    for (size_t x = 0; x < dim.nx; ++x) {
      for (size_t t = 0; t < dim.nt; ++t) {
        const Prob& m = p.mass()[dim.row(s, x, t)];
        if (m.is_zero()) continue;
        for (size_t k = 0; k < nup; ++k) {
          const Prob& pk = pu[dim.sx(s, x) * nup + k];
          if (!pk.is_zero()) mass[(dim.sx(s, x) * dim.nt + t) * nup + k] = m * pk;
        }
      }
    }
  }
  JointPMF cdv({{"C", std::move(c)}, p.axis(2), {"V", e.u_prime}}, std::move(mass));
  SfrlWitness y = ConditionalSfrlConstruct(cdv, sopt);
  RecordSfrl(y, &out);
  out.mechanism = PairMechanism(p, dim, e.u_prime, pu, y, [&](size_t sx, size_t k) {
    return sx * nup + k;
  });
  if (y.met_target) {
    out.guarantee = "L3";
    out.guaranteed_value = bounds.L3;
  }
  return out;
}

BuildResult BuildP2(const JointPMF& p, double r, const DesignOptions& options) {
  const Dims dim = CheckSource(p);
  if (!std::isfinite(r) || r < 0.0) throw RegimeError("rate must be >= 0");
  const SourceQuantities q = ComputeSourceQuantities(p);
  const BoundSetP2 bounds = BoundsP2(q, r);
  BuildResult out{Mechanism::Constant(p.axes(), p.is_exact()), Design::kP2, r};
  out.log.push_back("problem 2 at r = " + std::to_string(r) + ", H(X|T,S) = " +
                    std::to_string(q.h_x_given_ts) + ", regime " +
                    ToString(bounds.regime));
  if (bounds.regime == P2Regime::kFull) {
    FrlWitness w = FrlConstruct(p.Marginal({"S", "T"}));
    out.log.push_back("Y = FRL(S -> T): " + std::to_string(w.num_aux()) + " cells");
    out.mechanism = DirectMechanism(
        p, dim, w, [](size_t s, size_t) { return s; },
        [](size_t, size_t, size_t t) { return t; });
    out.guarantee = "exact_value";
    out.guaranteed_value = bounds.upper;
    return out;
  }
  SfrlOptions sopt;
  sopt.seed = options.seed;
  sopt.budget = options.sfrl_budget;
  JointPMF cdv = p.Group({{"X"}, {"T"}, {"S"}}, {"X", "T", "S"});
  SfrlWitness w = ConditionalSfrlConstruct(cdv, sopt);
  RecordSfrl(w, &out);
  out.mechanism = DirectMechanism(
      p, dim, w, [&](size_t s, size_t x) { return x * dim.ns + s; },
      [](size_t, size_t, size_t t) { return t; });
  const bool meets_rate = w.achieved_excess <= r + kFloatTolerance;
  out.log.push_back(std::string("rate I(X;Y|T,S) <= r: ") + (meets_rate ? "yes" : "no") +
                    (bounds.regime == P2Regime::kMid ? " (guaranteed in this regime)"
                                                     : " (no guarantee below threshold)"));
  if (w.met_target) {
    out.guarantee = "L1c";
    out.guaranteed_value = bounds.L1c;
  }
  return out;
}

MechanismReport Evaluate(const JointPMF& p, const Mechanism& mech, double r) {
  JointPMF joint = Induce(p, mech);
  InfoEngine e(joint);
  MechanismReport m;
  m.r = r;
  m.utility_p1 = e.Measure(MeasureQuery::I({"Y"}, {"T"}));
  m.utility_p2 = e.Measure(MeasureQuery::I({"Y"}, {"T"}, {"S"}));
  m.secrecy = e.Measure(MeasureQuery::I({"Y"}, {"S"}));
  m.rate_p1 = e.Measure(MeasureQuery::I({"X"}, {"Y"}));
  m.rate_p2 = e.Measure(MeasureQuery::I({"X"}, {"Y"}, {"S", "T"}));
  m.secrecy_zero = joint.is_exact() ? m.secrecy == 0.0 : m.secrecy <= kFloatTolerance;
  m.feasible_p1 = m.secrecy_zero && m.rate_p1 <= r + kFloatTolerance;
  m.feasible_p2 = m.secrecy_zero && m.rate_p2 <= r + kFloatTolerance;
  return m;
}

}  // namespace fairrep
