// Copyright 2026 The rispat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Boundary geometry of the auxiliary-variable sphere: midpoint sets, the
// nearest-phase map, intersection systems and their enumeration, and the
// readable (allocation-based) forms of point solving and candidate recovery.

#ifndef RISPAT_ARRANGEMENT_HPP_
#define RISPAT_ARRANGEMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "rispat/numerics.hpp"
#include "rispat/reduction.hpp"
#include "rispat/scenario.hpp"

namespace rispat {

/// psi[n][i] is the circular midpoint between phase i and phase i+1 (mod b_n)
/// of unit n. Frozen units have no boundaries.
struct BoundarySet {
  std::vector<std::vector<double>> psi;
};

inline BoundarySet boundary_midpoints(const std::vector<PhaseAlphabet>& alphabets) {
  BoundarySet out;
  out.psi.resize(alphabets.size());
  for (std::size_t n = 0; n < alphabets.size(); ++n) {
    const PhaseAlphabet& a = alphabets[n];
    if (a.frozen()) continue;
    const int b = a.size();
    out.psi[n].resize(b);
    for (int i = 0; i < b; ++i) {
      const double lo = a[i];
      const double hi = a[(i + 1) % b];
      out.psi[n][i] = wrap_angle(lo + 0.5 * wrap_angle(hi - lo));
    }
  }
  return out;
}

/// Index of the phase circularly closest to tau; ties go to the lower index.
inline int nearest_phase(const PhaseAlphabet& alphabet, double tau) {
  int best = 0;
  double best_dist = circular_distance(alphabet[0], tau);
  for (int i = 1; i < alphabet.size(); ++i) {
    const double dist = circular_distance(alphabet[i], tau);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

/// Units with more than one phase, in ascending order.
inline std::vector<int> active_units(const std::vector<PhaseAlphabet>& alphabets) {
  std::vector<int> out;
  for (std::size_t n = 0; n < alphabets.size(); ++n) {
    if (!alphabets[n].frozen()) out.push_back(static_cast<int>(n));
  }
  return out;
}

/// A choice of L boundary surfaces: unit units[k] at boundary psi[units[k]][boundary[k]].
struct IntersectionSystem {
  std::vector<int> units;
  std::vector<int> boundary;

  int size() const { return static_cast<int>(units.size()); }
};

/// Complex system matrix C with rows t_n^H e^{-j omega}; t_n is column n of T.
inline CMat system_matrix(const CMat& t, const BoundarySet& bs,
                          const IntersectionSystem& sys) {
  CMat c(sys.size(), t.rows());
  for (int k = 0; k < sys.size(); ++k) {
    const int n = sys.units[k];
    const double omega = bs.psi[n][sys.boundary[k]];
    c.row(k) = t.col(n).adjoint() * std::polar(1.0, -omega);
  }
  return c;
}

/// Real form [Re C, Im C] acting on [Im v; Re v]; its kernel is the set of
/// auxiliary points with Im(C v) = 0.
inline RMat real_system(const CMat& c) {
  RMat a(c.rows(), 2 * c.cols());
  a.leftCols(c.cols()) = c.real();
  a.rightCols(c.cols()) = c.imag();
  return a;
}

/// Inverse of the [Im v; Re v] stacking.
inline CVec aux_from_real(std::span<const double> z) {
  const int r = static_cast<int>(z.size()) / 2;
  CVec v(r);
  for (int j = 0; j < r; ++j) v(j) = cplx(z[r + j], z[j]);
  return v;
}

/// Calls visit(system) for every size-L subset of active units (lexicographic)
/// crossed with every boundary choice (mixed radix, last unit fastest).
/// Returning false from visit stops the enumeration.
class SystemEnumerator {
 public:
  SystemEnumerator(const std::vector<PhaseAlphabet>& alphabets, int l)
      : active_(active_units(alphabets)), l_(l) {
    if (l < 1) throw std::invalid_argument("SystemEnumerator: L must be >= 1");
    if (l > static_cast<int>(active_.size())) {
      throw std::invalid_argument(
          "SystemEnumerator: L exceeds the number of non-frozen units");
    }
    sizes_.reserve(alphabets.size());
    for (const auto& a : alphabets) sizes_.push_back(a.size());
  }

  /// Subset-level walk: visit(units) for each size-L subset.
  template <class Visit>
  void for_each_subset(Visit&& visit) const {
    const int na = static_cast<int>(active_.size());
    std::vector<int> pos(l_);
    for (int k = 0; k < l_; ++k) pos[k] = k;
    std::vector<int> units(l_);
    while (true) {
      for (int k = 0; k < l_; ++k) units[k] = active_[pos[k]];
      if (!visit(static_cast<const std::vector<int>&>(units))) return;
      int k = l_ - 1;
      while (k >= 0 && pos[k] == na - l_ + k) --k;
      if (k < 0) return;
      ++pos[k];
      for (int j = k + 1; j < l_; ++j) pos[j] = pos[j - 1] + 1;
    }
  }

  /// Boundary choices of one subset.
  template <class Visit>
  bool for_each_choice(const std::vector<int>& units, Visit&& visit) const {
    IntersectionSystem sys{units, std::vector<int>(units.size(), 0)};
    while (true) {
      if (!visit(static_cast<const IntersectionSystem&>(sys))) return false;
      int k = l_ - 1;
      while (k >= 0) {
        if (++sys.boundary[k] < sizes_[units[k]]) break;
        sys.boundary[k] = 0;
        --k;
      }
      if (k < 0) return true;
    }
  }

  template <class Visit>
  void for_each(Visit&& visit) const {
    for_each_subset([&](const std::vector<int>& units) {
      return for_each_choice(units, visit);
    });
  }

  int size() const { return l_; }

 private:
  std::vector<int> active_;
  std::vector<int> sizes_;
  int l_;
};

/// Unit-norm auxiliary point on the chosen boundaries.
struct AuxiliaryPoint {
  CVec aux;
  double imag_residual = 0.0;  // max_k |Im((C v)_k)|
  bool positive = false;       // all Re((C v)_k) > 0
};

/// Rows whose real part is within tol times the row norm count as zero, so
/// points that only touch the boundaries at zero amplitude are not positive.
inline AuxiliaryPoint make_point(const CMat& c, CVec v, double tol = kDefaultTol) {
  AuxiliaryPoint p;
  p.aux = std::move(v);
  const CVec cv = c * p.aux;
  p.positive = cv.size() > 0;
  for (Eigen::Index k = 0; k < cv.size(); ++k) {
    p.imag_residual = std::max(p.imag_residual, std::abs(cv(k).imag()));
    if (!(cv(k).real() > tol * c.row(k).norm())) p.positive = false;
  }
  return p;
}

/// Solves one full-size system (L = 2 rank - 1): the kernel of the real form
/// must be one-dimensional, and one of +-v must give Re(C v) > 0 on every row.
inline std::optional<AuxiliaryPoint> solve_intersection(const CMat& t,
                                                        const BoundarySet& bs,
                                                        const IntersectionSystem& sys,
                                                        double tol = kDefaultTol) {
  if (sys.size() != 2 * t.rows() - 1) {
    throw std::invalid_argument("solve_intersection: system needs 2*rank-1 rows");
  }
  const CMat c = system_matrix(t, bs, sys);
  const auto basis = real_nullspace_basis(real_system(c), tol);
  if (basis.size() != 1) return std::nullopt;
  const RVec& z = basis.front();
  CVec v = aux_from_real({z.data(), static_cast<std::size_t>(z.size())});
  v.normalize();
  AuxiliaryPoint p = make_point(c, v, tol);
  if (p.positive) return p;
  p = make_point(c, -v, tol);
  if (p.positive) return p;
  return std::nullopt;
}

/// Candidate phase vectors around an auxiliary point: nearest phase for units
/// outside the system, both sides of the chosen boundary for units inside.
/// Frozen units keep index 0.
inline std::vector<PhaseVector> recover_candidates(
    const std::vector<PhaseAlphabet>& alphabets, const CMat& t,
    const AuxiliaryPoint& point, const IntersectionSystem& sys) {
  const int n_units = static_cast<int>(alphabets.size());
  const CVec a = (point.aux.adjoint() * t).transpose();
  const double floor = 1e-12 * t.colwise().norm().maxCoeff();
  PhaseVector base{std::vector<int>(n_units, 0)};
  for (int n = 0; n < n_units; ++n) {
    if (alphabets[n].frozen() || std::abs(a(n)) < floor) continue;
    base.indices[n] = nearest_phase(alphabets[n], -std::arg(a(n)));
  }
  std::set<PhaseVector> out;
  const int l = sys.size();
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    PhaseVector v = base;
    for (int k = 0; k < l; ++k) {
      const int n = sys.units[k];
      const int lo = sys.boundary[k];
      v.indices[n] = (mask >> k) & 1u ? (lo + 1) % alphabets[n].size() : lo;
    }
    out.insert(std::move(v));
  }
  return {out.begin(), out.end()};
}

/// Calls visit(subset) for each size-k subset of `pool` in lexicographic order;
/// returning false stops the walk.
template <class Visit>
bool for_each_combination(const std::vector<int>& pool, int k, Visit&& visit) {
  const int n = static_cast<int>(pool.size());
  if (k < 0 || k > n) return true;
  std::vector<int> pos(k), pick(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  while (true) {
    for (int i = 0; i < k; ++i) pick[i] = pool[pos[i]];
    if (!visit(static_cast<const std::vector<int>&>(pick))) return false;
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) return true;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

/// Vertex on the zero-amplitude set of the units in `zero` (a_n = 0, two real
/// equations each) and on one boundary of every unit in `sys`. Every phase of
/// a zero unit is adjacent to such a vertex.
struct RimSystem {
  std::vector<int> zero;
  IntersectionSystem sys;
};

/// Calls visit(rim) for every rim system with 2 |zero| + |sys| = 2 rank - 1,
/// |zero| >= 1, over distinct active units. Returning false stops the walk.
template <class Visit>
void for_each_rim_system(const std::vector<PhaseAlphabet>& alphabets, int rank,
                         Visit&& visit) {
  const std::vector<int> active = active_units(alphabets);
  for (int z = 1; 2 * z <= 2 * rank - 2; ++z) {
    const int nb = 2 * rank - 1 - 2 * z;
    const bool go = for_each_combination(active, z, [&](const std::vector<int>& zero) {
      std::vector<int> rest;
      for (int n : active) {
        if (std::find(zero.begin(), zero.end(), n) == zero.end()) rest.push_back(n);
      }
      return for_each_combination(rest, nb, [&](const std::vector<int>& units) {
        RimSystem rim{zero, IntersectionSystem{units, std::vector<int>(nb, 0)}};
        while (true) {
          if (!visit(static_cast<const RimSystem&>(rim))) return false;
          int k = nb - 1;
          while (k >= 0) {
            if (++rim.sys.boundary[k] < alphabets[units[k]].size()) break;
            rim.sys.boundary[k] = 0;
            --k;
          }
          if (k < 0) return true;
        }
      });
    });
    if (!go) return;
  }
}

/// Reference solver for a rim system; the kernel must be one-dimensional and
/// one of +-v must be positive on the boundary rows.
inline std::optional<AuxiliaryPoint> solve_rim_intersection(const CMat& t,
                                                            const BoundarySet& bs,
                                                            const RimSystem& rim,
                                                            double tol = kDefaultTol) {
  const int z = static_cast<int>(rim.zero.size());
  if (2 * z + rim.sys.size() != 2 * t.rows() - 1 || z < 1) {
    throw std::invalid_argument("solve_rim_intersection: need 2|zero| + |sys| = 2*rank-1");
  }
  CMat zr(2 * z, t.rows());
  for (int k = 0; k < z; ++k) {
    zr.row(2 * k) = t.col(rim.zero[k]).adjoint();
    zr.row(2 * k + 1) = cplx(0.0, 1.0) * t.col(rim.zero[k]).adjoint();
  }
  const CMat c = system_matrix(t, bs, rim.sys);
  RMat a(2 * t.rows() - 1, 2 * t.rows());
  a.topRows(2 * z) = real_system(zr);
  a.bottomRows(c.rows()) = real_system(c);
  const auto basis = real_nullspace_basis(a, tol);
  if (basis.size() != 1) return std::nullopt;
  const RVec& zv = basis.front();
  CVec v = aux_from_real({zv.data(), static_cast<std::size_t>(zv.size())});
  v.normalize();
  AuxiliaryPoint p = make_point(c, v, tol);
  if (p.positive) return p;
  p = make_point(c, -v, tol);
  if (p.positive) return p;
  return std::nullopt;
}

/// Candidates around a rim vertex: every phase for zero units, both sides for
/// boundary units, nearest phase elsewhere.
inline std::vector<PhaseVector> recover_rim_candidates(
    const std::vector<PhaseAlphabet>& alphabets, const CMat& t,
    const AuxiliaryPoint& point, const RimSystem& rim) {
  std::set<PhaseVector> out;
  for (const PhaseVector& v : recover_candidates(alphabets, t, point, rim.sys)) {
    PhaseVector w = v;
    std::function<void(std::size_t)> fill = [&](std::size_t k) {
      if (k == rim.zero.size()) {
        out.insert(w);
        return;
      }
      const int n = rim.zero[k];
      for (int i = 0; i < alphabets[n].size(); ++i) {
        w.indices[n] = i;
        fill(k + 1);
      }
    };
    fill(0);
  }
  return {out.begin(), out.end()};
}

}  // namespace rispat

#endif  // RISPAT_ARRANGEMENT_HPP_
