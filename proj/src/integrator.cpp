#include "tqft/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <thread>
#include <unordered_map>

#include "tqft/quadrature.hpp"

namespace tqft {

namespace {

// Coefficients of the local edges (01, 02, 03, 12, 13, 23) in the two
// arguments of the weight.
constexpr std::array<int, 6> kCoefS{0, 1, -1, -1, 1, 0};
constexpr std::array<int, 6> kCoefT{-1, 1, 0, 0, 1, -1};

constexpr int kMaxDims = 6;
constexpr long long kMaxPoints = 1LL << 28;
constexpr long long kBlock = 4096;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// One tetrahedron's dependence on the internal variables.
struct TetPlan {
  const ShapedTetrahedron* tet;
  cd s_const;
  cd t_const;
  std::array<int, kMaxDims> alpha{};
  std::array<int, kMaxDims> beta{};
};

class WeightTable {
 public:
  WeightTable(int n, bool dense) : n_(n), dense_(dense) {
    if (dense_) {
      values_.assign(std::size_t(n) * std::size_t(n), cd(0.0));
    }
  }
  cd get(int j0, int k0) const {
    const long long key = (long long)j0 * n_ + k0;
    if (dense_) return values_[std::size_t(key)];
    return map_.at(key);
  }
  void set(int j0, int k0, cd v) {
    const long long key = (long long)j0 * n_ + k0;
    if (dense_) {
      values_[std::size_t(key)] = v;
    } else {
      map_[key] = v;
    }
  }

 private:
  int n_;
  bool dense_;
  std::vector<cd> values_;
  std::unordered_map<long long, cd> map_;
};

inline int floor_mod(long long j, int n, long long& q) {
  long long r = j % n;
  if (r < 0) r += n;
  q = (j - r) / n;
  return int(r);
}

template <class Fn>
void parallel_for(long long count, int threads, Fn&& fn) {
  threads = int(std::max<long long>(1, std::min<long long>(threads, count)));
  if (threads == 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (long long i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

class StateIntegral {
 public:
  StateIntegral(const Triangulation& X, const std::vector<double>& values,
                const ModularParameter& p, const IntegratorOptions& opt)
      : p_(p), opt_(opt), internal_(X.internal_edges()) {
    dims_ = int(internal_.size());
    if (dims_ > kMaxDims) {
      throw DimensionGuard("state integral over " + std::to_string(dims_) +
                           " internal edges exceeds the limit of " + std::to_string(kMaxDims));
    }
    if (!opt.contour_offset.empty() && int(opt.contour_offset.size()) != dims_) {
      throw ValidationError("contour_offset needs one entry per internal edge");
    }
    std::vector<int> pos(std::size_t(X.num_edge_classes()), -1);
    for (int q = 0; q < dims_; ++q) pos[std::size_t(internal_[std::size_t(q)])] = q;
    for (int t = 0; t < int(X.tetrahedra().size()); ++t) {
      TetPlan plan{&X.tetrahedra()[std::size_t(t)], 0.0, 0.0, {}, {}};
      for (int e = 0; e < 6; ++e) {
        const int c = X.edge_class(t, e);
        const int q = pos[std::size_t(c)];
        if (q < 0) {
          plan.s_const += double(kCoefS[e]) * values[std::size_t(c)];
          plan.t_const += double(kCoefT[e]) * values[std::size_t(c)];
        } else {
          plan.alpha[std::size_t(q)] += kCoefS[e];
          plan.beta[std::size_t(q)] += kCoefT[e];
          if (!opt.contour_offset.empty()) {
            const cd off = kI * opt.contour_offset[std::size_t(q)];
            plan.s_const += double(kCoefS[e]) * off;
            plan.t_const += double(kCoefT[e]) * off;
          }
        }
      }
      plans_.push_back(plan);
    }
    threads_ = resolve_threads(opt.threads);
  }

  int dims() const { return dims_; }

  // Mean of the integrand over the N^dims grid.
  cd grid_mean(int n) {
    long long points = 1;
    for (int q = 0; q < dims_; ++q) {
      points *= n;
      if (points > kMaxPoints) throw ConvergenceError("grid budget exceeded at N = " + std::to_string(n));
    }
    if (!opt_.weight_override) build_tables(n);
    const long long blocks = (points + kBlock - 1) / kBlock;
    std::vector<cd> block_sums(static_cast<std::size_t>(blocks));
    parallel_for(blocks, threads_, [&](long long b) {
      std::vector<cd> buf;
      buf.reserve(std::size_t(kBlock));
      const long long lo = b * kBlock;
      const long long hi = std::min(points, lo + kBlock);
      std::array<int, kMaxDims> idx{};
      long long r = lo;
      for (int q = 0; q < dims_; ++q) {
        idx[std::size_t(q)] = int(r % n);
        r /= n;
      }
      for (long long k = lo; k < hi; ++k) {
        buf.push_back(point_value(idx, n));
        for (int q = 0; q < dims_; ++q) {
          if (++idx[std::size_t(q)] < n) break;
          idx[std::size_t(q)] = 0;
        }
      }
      block_sums[std::size_t(b)] = pairwise_sum(buf);
    });
    return pairwise_sum(block_sums) / double(points);
  }

 private:
  cd weight(const ShapedTetrahedron& T, cd s, cd t, const WeightSeries* series) const {
    if (T.sign > 0) return (*series)(t);
    return (*series)(t - s - 0.5) * std::exp(-kI * kPi * s / 2.0);
  }

  WeightSeries make_series(const ShapedTetrahedron& T, cd s0, double im_max) const {
    if (T.sign > 0) return WeightSeries(T.shape, s0, p_, opt_.weight_tol, im_max);
    return WeightSeries(Shape{T.shape.a, T.shape.b()}, -s0, p_, opt_.weight_tol, im_max);
  }

  void build_tables(int n) {
    tables_.clear();
    const bool dense = n <= 512;
    for (const auto& plan : plans_) {
      std::map<int, std::vector<int>> keys;  // j0 -> k0 list
      std::vector<int> active;
      for (int q = 0; q < dims_; ++q)
        if (plan.alpha[std::size_t(q)] || plan.beta[std::size_t(q)]) active.push_back(q);
      double combos = std::pow(double(n), double(active.size()));
      if (combos <= 4.0 * double(n) * double(n)) {
        std::vector<int> idx(active.size(), 0);
        std::map<long long, bool> mark;
        while (true) {
          long long j = 0;
          long long k = 0;
          for (std::size_t a = 0; a < active.size(); ++a) {
            j += (long long)plan.alpha[std::size_t(active[a])] * idx[a];
            k += (long long)plan.beta[std::size_t(active[a])] * idx[a];
          }
          long long qj = 0;
          long long qk = 0;
          const int j0 = floor_mod(j, n, qj);
          const int k0 = floor_mod(k, n, qk);
          if (mark.emplace((long long)j0 * n + k0, true).second) keys[j0].push_back(k0);
          std::size_t a = 0;
          for (; a < active.size(); ++a) {
            if (++idx[a] < n) break;
            idx[a] = 0;
          }
          if (a == active.size()) break;
        }
      } else {
        for (int j0 = 0; j0 < n; ++j0)
          for (int k0 = 0; k0 < n; ++k0) keys[j0].push_back(k0);
      }
      std::vector<std::pair<int, std::vector<int>>> groups(keys.begin(), keys.end());
      WeightTable table(n, dense);
      std::vector<std::vector<cd>> results(groups.size());
      const ShapedTetrahedron& T = *plan.tet;
      parallel_for((long long)groups.size(), threads_, [&](long long g) {
        const int j0 = groups[std::size_t(g)].first;
        const cd s0 = plan.s_const + double(j0) / n;
        double im_max = 0.0;
        for (int k0 : groups[std::size_t(g)].second) {
          const cd t0 = plan.t_const + double(k0) / n;
          im_max = std::max(im_max, std::abs((T.sign > 0 ? t0 : t0 - s0 - 0.5).imag()));
        }
        const WeightSeries series = make_series(T, s0, im_max);
        auto& out = results[std::size_t(g)];
        for (int k0 : groups[std::size_t(g)].second) {
          out.push_back(weight(T, s0, plan.t_const + double(k0) / n, &series));
        }
      });
      for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i = 0; i < groups[g].second.size(); ++i) {
          table.set(groups[g].first, groups[g].second[i], results[g][i]);
        }
      }
      tables_.push_back(std::move(table));
    }
  }

  cd point_value(const std::array<int, kMaxDims>& idx, int n) const {
    if (opt_.weight_override) {
      cd prod = 1.0;
      for (const auto& plan : plans_) {
        long long j = 0;
        long long k = 0;
        for (int q = 0; q < dims_; ++q) {
          j += (long long)plan.alpha[std::size_t(q)] * idx[std::size_t(q)];
          k += (long long)plan.beta[std::size_t(q)] * idx[std::size_t(q)];
        }
        prod *= opt_.weight_override(*plan.tet, plan.s_const + double(j) / n,
                                     plan.t_const + double(k) / n);
      }
      return prod;
    }
    cd prod = 1.0;
    cd phase = 0.0;
    for (std::size_t t = 0; t < plans_.size(); ++t) {
      const auto& plan = plans_[t];
      long long j = 0;
      long long k = 0;
      for (int q = 0; q < dims_; ++q) {
        j += (long long)plan.alpha[std::size_t(q)] * idx[std::size_t(q)];
        k += (long long)plan.beta[std::size_t(q)] * idx[std::size_t(q)];
      }
      long long m = 0;
      long long l = 0;
      const int j0 = floor_mod(j, n, m);
      const int k0 = floor_mod(k, n, l);
      prod *= tables_[t].get(j0, k0);
      if (m != 0 || l != 0) {
        // g(s0 + m, t0 + l) = e^{i pi (l s0 - m (t0 + l))} g(s0, t0), conjugate for sign -1
        const cd s0 = plan.s_const + double(j0) / n;
        const cd t0 = plan.t_const + double(k0) / n;
        phase += double(plan.tet->sign) * (double(l) * s0 - double(m) * (t0 + double(l)));
      }
    }
    if (phase != 0.0) prod *= std::exp(kI * kPi * phase);
    return prod;
  }

  const ModularParameter& p_;
  IntegratorOptions opt_;
  std::vector<int> internal_;
  int dims_ = 0;
  int threads_ = 1;
  std::vector<TetPlan> plans_;
  std::vector<WeightTable> tables_;
};

cd prefactor(double level, const ModularParameter& p) {
  return std::exp(kI * kPi * level / (4.0 * p.hbar));
}

}  // namespace

std::string IntegrationResult::to_json() const {
  return "{\"value\": [" + num(value.real()) + ", " + num(value.imag()) + "], \"abs_err\": " +
         num(abs_err) + ", \"grid\": " + std::to_string(grid) + ", \"dims\": " +
         std::to_string(dims) + "}";
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TQFT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return int(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<double> boundary_values(const Triangulation& X) {
  std::vector<double> v(std::size_t(X.num_edge_classes()), 0.0);
  std::vector<bool> have(v.size(), false);
  for (const auto& bv : X.boundary_state) {
    const int t = X.tet_index(bv.tet);
    if (t < 0) throw ValidationError("boundary_state names unknown tetrahedron '" + bv.tet + "'");
    const int c = X.edge_class(t, local_edge_index(bv.edge[0], bv.edge[1]));
    if (!X.edge_classes()[std::size_t(c)].boundary) continue;
    v[std::size_t(c)] = bv.value;
    have[std::size_t(c)] = true;
  }
  for (int c : X.boundary_edges()) {
    if (!have[std::size_t(c)]) {
      throw ValidationError("boundary edge class " + std::to_string(c) + " has no value in boundary_state");
    }
  }
  return v;
}

IntegrationResult boundary_section(const Triangulation& X, const std::vector<double>& values,
                                   const ModularParameter& p, const IntegratorOptions& opt) {
  if (int(values.size()) != X.num_edge_classes()) {
    throw ValidationError("need one value per edge class");
  }
  StateIntegral si(X, values, p, opt);
  IntegrationResult r;
  r.dims = si.dims();
  const cd pre = opt.no_prefactor ? cd(1.0) : prefactor(X.level(), p);
  if (r.dims == 0) {
    r.value = pre * si.grid_mean(1);
    r.history.emplace_back(1, r.value);
    r.grid = 1;
    return r;
  }
  int n = std::max(1, opt.grid_start);
  cd prev = pre * si.grid_mean(n);
  r.history.emplace_back(n, prev);
  while (true) {
    if (2 * n > opt.grid_max) {
      throw ConvergenceError("grid doubling reached N = " + std::to_string(n) +
                             " without meeting tol; last difference " + num(r.abs_err));
    }
    n *= 2;
    const cd cur = pre * si.grid_mean(n);
    r.history.emplace_back(n, cur);
    r.abs_err = std::abs(cur - prev);
    r.value = cur;
    r.grid = n;
    if (r.abs_err < opt.tol) return r;
    prev = cur;
  }
}

IntegrationResult partition_function(const Triangulation& X, const ModularParameter& p,
                                     const IntegratorOptions& opt) {
  return boundary_section(X, boundary_values(X), p, opt);
}

double contour_shift_check(const Triangulation& X, int e, double shift,
                           const ModularParameter& p, const IntegratorOptions& opt) {
  if (std::abs(shift) > 0.1) throw DomainError("contour shift limited to |shift| <= 0.1");
  const auto internal = X.internal_edges();
  auto it = std::find(internal.begin(), internal.end(), e);
  if (it == internal.end()) throw DomainError("edge " + std::to_string(e) + " is not internal");
  const auto values = boundary_values(X);
  const IntegrationResult base = boundary_section(X, values, p, opt);
  IntegratorOptions shifted = opt;
  shifted.contour_offset.assign(internal.size(), 0.0);
  shifted.contour_offset[std::size_t(it - internal.begin())] = shift;
  const IntegrationResult moved = boundary_section(X, values, p, shifted);
  return std::abs(moved.value - base.value) / std::abs(base.value);
}

InvarianceReport pachner_invariance_check(const Triangulation& X, const MoveSpec& move,
                                          const ModularParameter& p,
                                          const IntegratorOptions& opt, bool apply_level) {
  InvarianceReport rep;
  rep.move = move.kind == MoveSpec::two_three ? pachner_23(X, move.face, move.a0)
                                              : pachner_32(X, move.edge);
  Triangulation Y = rep.move.result;
  if (!apply_level) {
    auto b = Y.b;
    auto state = Y.boundary_state;
    std::vector<FaceGluing> glu = Y.gluings();
    Y = Triangulation::build(Y.tetrahedra(), glu, X.level());
    Y.b = b;
    Y.boundary_state = state;
  }
  rep.before = partition_function(X, p, opt);
  rep.after = partition_function(Y, p, opt);
  rep.defect = std::abs(rep.after.value - rep.before.value) / std::abs(rep.before.value);
  return rep;
}

}  // namespace tqft
