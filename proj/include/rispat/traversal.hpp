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

#ifndef RISPAT_TRAVERSAL_HPP_
#define RISPAT_TRAVERSAL_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rispat/arrangement.hpp"
#include "rispat/numerics.hpp"
#include "rispat/reduction.hpp"

namespace rispat {

/// Relative width of an objective tie; ties resolve to the lexicographically
/// smallest index vector.
inline constexpr double kTieTolerance = 1e-12;

/// Running maximizer with the deterministic tie-break. Merging is associative
/// and commutative, so chunked traversal is schedule independent.
struct BestCandidate {
  double objective = -1.0;
  std::vector<int> indices;

  bool empty() const { return objective < 0.0; }

  /// True if (obj, indices) replaced the incumbent.
  template <class MakeIndices>
  bool offer(double obj, MakeIndices&& make) {
    if (empty() || obj > objective * (1.0 + kTieTolerance)) {
      objective = obj;
      make(indices);
      return true;
    }
    if (obj < objective * (1.0 - kTieTolerance)) return false;
    thread_local std::vector<int> scratch;
    make(scratch);
    if (scratch < indices) {
      objective = obj;
      indices.swap(scratch);
      return true;
    }
    return false;
  }

  void merge(const BestCandidate& other) {
    if (other.empty()) return;
    offer(other.objective, [&](std::vector<int>& out) { out = other.indices; });
  }
};

struct TraversalStats {
  std::uint64_t systems = 0;
  std::uint64_t rejected = 0;
  std::uint64_t candidate_slots = 0;  // sum of 2^L over boundary systems
  std::uint64_t evaluated = 0;
  std::uint64_t degenerate = 0;
  std::uint64_t rim_systems = 0;  // vertex mode only
  std::uint64_t rim_rejected = 0;

  void add(const TraversalStats& o) {
    systems += o.systems;
    rejected += o.rejected;
    candidate_slots += o.candidate_slots;
    evaluated += o.evaluated;
    degenerate += o.degenerate;
    rim_systems += o.rim_systems;
    rim_rejected += o.rim_rejected;
  }
};

enum class PointMode {
  // One auxiliary point per system; kernel must be one-dimensional and one
  // sign must satisfy the positivity condition. Rim vertices, where some
  // units have zero amplitude, are enumerated as well.
  kVertex,
  // Every orthonormal kernel basis vector and its negation.
  kKernelBasis,
};

struct TraversalOptions {
  double tol = kDefaultTol;
  int threads = 1;
  // kKernelBasis only: also recover from points that fail positivity.
  bool keep_sign_failures = true;
};

struct TraversalResult {
  BestCandidate best;
  TraversalStats stats;
};

/// Flat lookup tables over T and the alphabets, shared read-only by workers.
class Traversal {
 public:
  static constexpr int kMaxRealDim = 16;  // 2 * rank

  Traversal(const CMat& t, const std::vector<PhaseAlphabet>& alphabets)
      : alphabets_(alphabets), r_(static_cast<int>(t.rows())),
        n_(static_cast<int>(t.cols())) {
    if (static_cast<int>(alphabets.size()) != n_) {
      throw std::invalid_argument("Traversal: alphabet count must equal N");
    }
    if (2 * r_ > kMaxRealDim) {
      throw std::invalid_argument("Traversal: rank M*D above 8 is not supported");
    }
    const BoundarySet bs = boundary_midpoints(alphabets);
    off_.resize(n_ + 1, 0);
    for (int n = 0; n < n_; ++n) off_[n + 1] = off_[n] + alphabets[n].size();
    const int total = off_[n_];
    col_re_.resize(total * r_);
    col_im_.resize(total * r_);
    row_re_.resize(total * r_);
    row_im_.resize(total * r_);
    cos_.resize(total);
    sin_.resize(total);
    t_re_.resize(n_ * r_);
    t_im_.resize(n_ * r_);
    frozen_re_.assign(r_, 0.0);
    frozen_im_.assign(r_, 0.0);
    double max_col = 0.0;
    col_norm_.resize(n_);
    for (int n = 0; n < n_; ++n) {
      col_norm_[n] = t.col(n).norm();
      max_col = std::max(max_col, col_norm_[n]);
      for (int j = 0; j < r_; ++j) {
        t_re_[n * r_ + j] = t(j, n).real();
        t_im_[n * r_ + j] = t(j, n).imag();
      }
      const PhaseAlphabet& a = alphabets[n];
      for (int i = 0; i < a.size(); ++i) {
        const int e = off_[n] + i;
        cos_[e] = std::cos(a[i]);
        sin_[e] = std::sin(a[i]);
        const cplx rot = std::polar(1.0, a[i]);
        const cplx unrot = a.frozen() ? cplx(0.0) : std::polar(1.0, -bs.psi[n][i]);
        for (int j = 0; j < r_; ++j) {
          const cplx col = t(j, n) * rot;
          col_re_[e * r_ + j] = col.real();
          col_im_[e * r_ + j] = col.imag();
          const cplx row = std::conj(t(j, n)) * unrot;
          row_re_[e * r_ + j] = row.real();
          row_im_[e * r_ + j] = row.imag();
        }
      }
      if (a.frozen()) {
        for (int j = 0; j < r_; ++j) {
          frozen_re_[j] += col_re_[off_[n] * r_ + j];
          frozen_im_[j] += col_im_[off_[n] * r_ + j];
        }
      }
    }
    amp_floor_ = 1e-12 * max_col;
  }

  int rank() const { return r_; }
  int units() const { return n_; }

  TraversalResult run(int l, PointMode mode, const TraversalOptions& opt) const {
    if (mode == PointMode::kVertex && l != 2 * r_ - 1) {
      throw std::invalid_argument("Traversal: vertex mode needs L = 2*rank - 1");
    }
    if (l < 1 || l > 2 * r_ - 1 || l > 24) {
      throw std::invalid_argument("Traversal: L must be in [1, 2*rank - 1]");
    }
    const SystemEnumerator systems(alphabets_, l);
    const int threads = std::max(1, opt.threads);
    std::vector<TraversalResult> parts(threads);
    auto work = [&](int tid) {
      Worker w(*this, l, mode, opt);
      std::uint64_t rank = 0;
      systems.for_each_subset([&](const std::vector<int>& units) {
        if (static_cast<int>(rank++ % threads) == tid) {
          systems.for_each_choice(units, [&](const IntersectionSystem& sys) {
            w.process(sys);
            return true;
          });
        }
        return true;
      });
      if (mode == PointMode::kVertex) {
        rank = 0;
        for_each_rim_system(alphabets_, r_, [&](const RimSystem& rim) {
          if (static_cast<int>(rank++ % threads) == tid) w.process_rim(rim);
          return true;
        });
      }
      parts[tid].best = std::move(w.best);
      parts[tid].stats = w.stats;
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(work, i);
      for (auto& th : pool) th.join();
    }
    TraversalResult out;
    for (const auto& p : parts) {
      out.best.merge(p.best);
      out.stats.add(p.stats);
    }
    return out;
  }

 private:
  struct Worker {
    const Traversal& tr;
    int l;
    PointMode mode;
    TraversalOptions opt;
    BestCandidate best;
    TraversalStats stats;
    SmallNullspace<kMaxRealDim> kernel;
    std::vector<double> a;  // L x 2r row-major
    std::vector<int> idx;   // per-unit indices of the current base vector
    std::array<double, kMaxRealDim> vre{}, vim{};
    std::array<double, kMaxRealDim> sre{}, sim{};
    std::vector<double> dre, dim;  // L x r boundary flip deltas

    Worker(const Traversal& t, int l_, PointMode m, const TraversalOptions& o)
        : tr(t), l(l_), mode(m), opt(o), a(l_ * 2 * t.r_), idx(t.n_, 0),
          dre(l_ * t.r_), dim(l_ * t.r_) {}

    void process(const IntersectionSystem& sys) {
      const int r = tr.r_;
      ++stats.systems;
      stats.candidate_slots += std::uint64_t{1} << l;
      for (int k = 0; k < l; ++k) {
        const int e = tr.off_[sys.units[k]] + sys.boundary[k];
        for (int j = 0; j < r; ++j) {
          a[k * 2 * r + j] = tr.row_re_[e * r + j];
          a[k * 2 * r + r + j] = tr.row_im_[e * r + j];
        }
      }
      const int dim_k = kernel.solve(a, l, 2 * r, opt.tol);
      if (mode == PointMode::kVertex) {
        if (dim_k != 1) {
          ++stats.rejected;
          return;
        }
        load_point(kernel.basis(0), 1.0);
        const int sign = positivity(sys);
        if (sign == 0) {
          ++stats.rejected;
          return;
        }
        if (sign < 0) flip_point();
        recover_and_evaluate(sys, {});
        return;
      }
      bool any = false;
      for (int b = 0; b < dim_k; ++b) {
        for (double s : {1.0, -1.0}) {
          load_point(kernel.basis(b), s);
          if (!opt.keep_sign_failures && positivity(sys) <= 0) continue;
          any = true;
          recover_and_evaluate(sys, {});
        }
      }
      if (!any) ++stats.rejected;
    }

    // Rows 2k, 2k+1 force a_n = 0 for zero unit k; the rest are boundary rows.
    void process_rim(const RimSystem& rim) {
      const int r = tr.r_;
      ++stats.rim_systems;
      int row = 0;
      for (int n : rim.zero) {
        for (int j = 0; j < r; ++j) {
          const double cre = tr.t_re_[n * r + j];
          const double cim = -tr.t_im_[n * r + j];
          a[row * 2 * r + j] = cre;
          a[row * 2 * r + r + j] = cim;
          a[(row + 1) * 2 * r + j] = -cim;
          a[(row + 1) * 2 * r + r + j] = cre;
        }
        row += 2;
      }
      for (int k = 0; k < rim.sys.size(); ++k, ++row) {
        const int e = tr.off_[rim.sys.units[k]] + rim.sys.boundary[k];
        for (int j = 0; j < r; ++j) {
          a[row * 2 * r + j] = tr.row_re_[e * r + j];
          a[row * 2 * r + r + j] = tr.row_im_[e * r + j];
        }
      }
      if (kernel.solve(a, row, 2 * r, opt.tol) != 1) {
        ++stats.rim_rejected;
        return;
      }
      load_point(kernel.basis(0), 1.0);
      const int sign = positivity(rim.sys);
      if (sign == 0) {
        ++stats.rim_rejected;
        return;
      }
      if (sign < 0) flip_point();
      recover_and_evaluate(rim.sys, rim.zero);
    }

    void load_point(std::span<const double> z, double s) {
      const int r = tr.r_;
      double nrm = 0.0;
      for (double x : z) nrm += x * x;
      const double scale = s / std::sqrt(nrm);
      for (int j = 0; j < r; ++j) {
        vre[j] = z[r + j] * scale;
        vim[j] = z[j] * scale;
      }
    }

    void flip_point() {
      for (int j = 0; j < tr.r_; ++j) {
        vre[j] = -vre[j];
        vim[j] = -vim[j];
      }
    }

    // +1 if Re(C v) > 0 on all rows, -1 if < 0 on all rows, else 0. A row
    // counts as zero within tol times its norm.
    int positivity(const IntersectionSystem& sys) const {
      const int r = tr.r_;
      const int rows = sys.size();
      int pos = 0, neg = 0;
      for (int k = 0; k < rows; ++k) {
        const int e = tr.off_[sys.units[k]] + sys.boundary[k];
        const double margin = opt.tol * tr.col_norm_[sys.units[k]];
        double re = 0.0;
        for (int j = 0; j < r; ++j) {
          re += tr.row_re_[e * r + j] * vre[j] - tr.row_im_[e * r + j] * vim[j];
        }
        if (re > margin) ++pos;
        else if (re < -margin) ++neg;
      }
      if (pos == rows) return 1;
      if (neg == rows) return -1;
      return 0;
    }

    // Evaluates every cell around the current point: both sides of each
    // boundary in sys, every phase of each zero unit, nearest phase elsewhere.
    void recover_and_evaluate(const IntersectionSystem& sys, std::span<const int> zero) {
      const int r = tr.r_;
      const int lb = sys.size();
      for (int n = 0; n < tr.n_; ++n) {
        const int b = tr.off_[n + 1] - tr.off_[n];
        if (b == 1 || std::find(zero.begin(), zero.end(), n) != zero.end()) {
          idx[n] = 0;
          continue;
        }
        // a_n = v^H t_n; the best phase maximizes Re(a_n e^{j phi}).
        double are = 0.0, aim = 0.0;
        for (int j = 0; j < r; ++j) {
          const double tre = tr.t_re_[n * r + j];
          const double tim = tr.t_im_[n * r + j];
          are += vre[j] * tre + vim[j] * tim;
          aim += vre[j] * tim - vim[j] * tre;
        }
        int best_i = 0;
        if (std::abs(are) + std::abs(aim) < tr.amp_floor_ &&
            std::hypot(are, aim) < tr.amp_floor_) {
          ++stats.degenerate;
        } else {
          const int o = tr.off_[n];
          double best_val = are * tr.cos_[o] - aim * tr.sin_[o];
          for (int i = 1; i < b; ++i) {
            const double val = are * tr.cos_[o + i] - aim * tr.sin_[o + i];
            if (val > best_val) {
              best_val = val;
              best_i = i;
            }
          }
        }
        idx[n] = best_i;
      }
      for (int k = 0; k < lb; ++k) {
        const int n = sys.units[k];
        const int b = tr.off_[n + 1] - tr.off_[n];
        const int lo = tr.off_[n] + sys.boundary[k];
        const int hi = tr.off_[n] + (sys.boundary[k] + 1) % b;
        idx[n] = sys.boundary[k];
        for (int j = 0; j < r; ++j) {
          dre[k * r + j] = tr.col_re_[hi * r + j] - tr.col_re_[lo * r + j];
          dim[k * r + j] = tr.col_im_[hi * r + j] - tr.col_im_[lo * r + j];
        }
      }
      // Mixed-radix walk over the zero units' phases, Gray-code walk inside.
      while (true) {
        walk_sides(sys);
        std::size_t k = 0;
        for (; k < zero.size(); ++k) {
          const int n = zero[k];
          if (++idx[n] < tr.off_[n + 1] - tr.off_[n]) break;
          idx[n] = 0;
        }
        if (k == zero.size()) break;
      }
    }

    void walk_sides(const IntersectionSystem& sys) {
      const int r = tr.r_;
      const int lb = sys.size();
      for (int j = 0; j < r; ++j) {
        sre[j] = tr.frozen_re_[j];
        sim[j] = tr.frozen_im_[j];
      }
      for (int n = 0; n < tr.n_; ++n) {
        if (tr.off_[n + 1] - tr.off_[n] == 1) continue;
        const int e = tr.off_[n] + idx[n];
        for (int j = 0; j < r; ++j) {
          sre[j] += tr.col_re_[e * r + j];
          sim[j] += tr.col_im_[e * r + j];
        }
      }
      const std::uint32_t count = 1u << lb;
      std::uint32_t gray = 0;
      for (std::uint32_t step = 0; step < count; ++step) {
        if (step > 0) {
          const int k = std::countr_zero(step);
          gray ^= 1u << k;
          const double sgn = (gray >> k) & 1u ? 1.0 : -1.0;
          for (int j = 0; j < r; ++j) {
            sre[j] += sgn * dre[k * r + j];
            sim[j] += sgn * dim[k * r + j];
          }
        }
        double obj = 0.0;
        for (int j = 0; j < r; ++j) obj += sre[j] * sre[j] + sim[j] * sim[j];
        const std::uint32_t mask = gray;
        best.offer(obj, [&](std::vector<int>& out) {
          out = idx;
          for (int k = 0; k < lb; ++k) {
            if ((mask >> k) & 1u) {
              const int n = sys.units[k];
              out[n] = (sys.boundary[k] + 1) % (tr.off_[n + 1] - tr.off_[n]);
            }
          }
        });
      }
      stats.evaluated += count;
    }
  };

  std::vector<PhaseAlphabet> alphabets_;
  int r_;
  int n_;
  std::vector<int> off_;
  std::vector<double> col_re_, col_im_;
  std::vector<double> row_re_, row_im_;
  std::vector<double> cos_, sin_;
  std::vector<double> t_re_, t_im_;
  std::vector<double> frozen_re_, frozen_im_;
  std::vector<double> col_norm_;
  double amp_floor_ = 0.0;
};

}  // namespace rispat

#endif  // RISPAT_TRAVERSAL_HPP_
