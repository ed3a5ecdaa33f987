#include "relpress/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace relpress {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

bool check_image_word(const FactorCode& code, std::span<const Symbol> v) {
  for (Symbol s : v)
    if (s < 0 || s >= code.image().size()) return false;
  return true;
}

/// Fast frontier DP for 2-coordinate potentials: one log-weight per last
/// symbol (logsumexp transitions; a linear frontier cannot hold the dynamic
/// range, which reaches 2^2048 within one frontier on the counterexample),
/// plus a per-symbol final factor that carries the one boundary position of
/// the inf/sup/canonical weights.
double log_path_sum_pair(const FactorCode& code, const LocallyConstantPotential& f,
                         std::span<const Symbol> v, SumMode mode, EndpointMasks masks) {
  const Sft& X = code.domain();
  const long n = static_cast<long>(v.size());
  const int ns = X.size();
  PairWeight F = pair_weight(f);

  std::vector<double> cur(ns, kNegInf), nxt(ns, kNegInf);
  for (Symbol a : code.fiber(v[0])) {
    if (masks.first && !(*masks.first)[a]) continue;
    cur[a] = 0.0;
  }
  for (long i = 1; i < n; ++i) {
    std::fill(nxt.begin(), nxt.end(), kNegInf);
    bool any = false;
    for (Symbol b : code.fiber(v[i])) {
      double acc = kNegInf;
      for (Symbol a : X.predecessors(b))
        if (cur[a] != kNegInf) acc = log_add(acc, cur[a] + F.at(a, b));
      nxt[b] = acc;
      any = any || acc != kNegInf;
    }
    cur.swap(nxt);
    if (!any) return kNegInf;
  }

  // Final factor: F_n^{n-1} resolved over the unseen right coordinate.
  std::vector<double> fin(ns, 0.0);
  if (mode != SumMode::Phi) {
    for (int a = 0; a < ns; ++a) {
      const auto& succ = X.successors(a);
      double best;
      switch (mode) {
        case SumMode::Inf: {
          best = std::numeric_limits<double>::infinity();
          for (Symbol b : succ) best = std::min(best, f.pair_value(a, b));
          break;
        }
        case SumMode::Sup: {
          best = kNegInf;
          for (Symbol b : succ) best = std::max(best, f.pair_value(a, b));
          break;
        }
        default: {  // Canonical: lexicographically least successor
          Symbol b = *std::min_element(succ.begin(), succ.end());
          best = f.pair_value(a, b);
          break;
        }
      }
      fin[a] = best;
    }
  }
  double total = kNegInf;
  for (int a = 0; a < ns; ++a) {
    if (cur[a] == kNegInf) continue;
    if (masks.last && !(*masks.last)[a]) continue;
    total = log_add(total, cur[a] + fin[a]);
  }
  return total;
}

/// General DP for wider windows: the state is the consumed suffix of length
/// min(pos, max(2m, 1)), long enough that every windowed factor is exact by
/// the time its dependency is consumed. Boundary factors whose cylinder
/// reaches past the block end are applied per final state.
double log_path_sum_general(const FactorCode& code, const LocallyConstantPotential& f,
                            std::span<const Symbol> v, SumMode mode, EndpointMasks masks) {
  const Sft& X = code.domain();
  const long n = static_cast<long>(v.size());
  const long m = f.radius();
  const long t = std::max<long>(2 * m, 1);
  WeightMode wmode = mode == SumMode::Inf ? WeightMode::Inf
                     : mode == SumMode::Sup ? WeightMode::Sup
                                            : WeightMode::Canonical;

  std::map<std::vector<Symbol>, double> cur;
  for (Symbol a : code.fiber(v[0])) {
    if (masks.first && !(*masks.first)[a]) continue;
    if (n == 1 && masks.last && !(*masks.last)[a]) continue;
    double lw = 0.0;
    if (m == 0)  // position 0 is already fully determined
      lw = windowed_factor_log(f, std::vector<Symbol>{a}, 0, 0, n, wmode);
    cur[{a}] = lw;
  }
  std::vector<Symbol> ext;
  for (long j = 1; j < n; ++j) {
    std::map<std::vector<Symbol>, double> nxt;
    for (const auto& [state, lw] : cur) {
      Symbol a = state.back();
      for (Symbol b : X.successors(a)) {
        if (code.apply(b) != v[j]) continue;
        if (j == n - 1 && masks.last && !(*masks.last)[b]) continue;
        ext = state;
        ext.push_back(b);
        double factor = 0.0;
        long i = j - m;
        if (i >= 0) {
          long seg_len = std::min<long>(j + 1, 2 * m + 1);
          std::span<const Symbol> seg(ext.data() + (ext.size() - seg_len),
                                      static_cast<std::size_t>(seg_len));
          factor = windowed_factor_log(f, seg, j + 1 - seg_len, i, n, wmode);
        }
        std::vector<Symbol> ns(ext.end() - std::min<long>(j + 1, t), ext.end());
        auto [it, fresh] = nxt.emplace(std::move(ns), lw + factor);
        if (!fresh) it->second = log_add(it->second, lw + factor);
      }
    }
    cur = std::move(nxt);
    if (cur.empty()) return kNegInf;
  }
  double total = kNegInf;
  for (const auto& [state, lw] : cur) {
    double extra = 0.0;
    long seg_begin = n - static_cast<long>(state.size());
    for (long i = std::max<long>(0, n - m); i < n; ++i)
      extra += windowed_factor_log(f, state, seg_begin, i, n, wmode);
    total = log_add(total, lw + extra);
  }
  return total;
}

}  // namespace

double log_path_sum(const FactorCode& code, const LocallyConstantPotential& f,
                    std::span<const Symbol> v, SumMode mode, EndpointMasks masks) {
  if (!check_image_word(code, v))
    throw std::invalid_argument("log_path_sum: word over wrong alphabet");
  if (v.empty()) throw std::invalid_argument("log_path_sum: empty word");
  if (mode == SumMode::Phi && !f.pair_form())
    throw std::invalid_argument("log_path_sum: Phi mode requires a 2-coordinate potential");
  if (f.pair_form()) return log_path_sum_pair(code, f, v, mode, masks);
  return log_path_sum_general(code, f, v, mode, masks);
}

BigInt count_paths(const FactorCode& code, std::span<const Symbol> v, EndpointMasks masks) {
  if (!check_image_word(code, v))
    throw std::invalid_argument("count_paths: word over wrong alphabet");
  if (v.empty()) return 0;
  const Sft& X = code.domain();
  const long n = static_cast<long>(v.size());
  std::vector<BigInt> cur(X.size(), 0), nxt(X.size(), 0);
  for (Symbol a : code.fiber(v[0])) {
    if (masks.first && !(*masks.first)[a]) continue;
    cur[a] = 1;
  }
  for (long i = 1; i < n; ++i) {
    for (auto& x : nxt) x = 0;
    for (Symbol b : code.fiber(v[i]))
      for (Symbol a : X.predecessors(b))
        if (cur[a] != 0) nxt[b] += cur[a];
    cur.swap(nxt);
  }
  BigInt total = 0;
  for (int a = 0; a < X.size(); ++a) {
    if (masks.last && !(*masks.last)[a]) continue;
    total += cur[a];
  }
  return total;
}

double log_S(const FactorCode& code, const LocallyConstantPotential& f,
             std::span<const Symbol> v, SumMode mode) {
  return log_path_sum(code, f, v, mode, {});
}

BigInt count_preimage_blocks_exact(const FactorCode& code, std::span<const Symbol> v) {
  return count_paths(code, v, {});
}

// ---------------------------------------------------------------------------
// Fiber sets

namespace {

/// Greatest fixed point of one refinement direction on a periodic tail.
/// dir = +1 refines by successors (right-extensibility), -1 by predecessors.
/// Worklist deletion: drop (j, a) once it has no surviving neighbor in the
/// next residue; O(period * edges) total.
std::vector<std::uint8_t> tail_fixed_point(const FactorCode& code, const Word& tail, int dir) {
  const Sft& X = code.domain();
  int ns = X.size();
  int p = static_cast<int>(tail.size());
  auto idx = [ns](int j, int a) { return static_cast<std::size_t>(j) * ns + a; };
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(p) * ns, 0);
  for (int j = 0; j < p; ++j)
    for (Symbol a : code.fiber(tail[j])) alive[idx(j, a)] = 1;
  std::vector<int> nbr_count(alive.size(), 0);
  std::vector<std::pair<int, Symbol>> dead;
  for (int j = 0; j < p; ++j) {
    int k = dir > 0 ? (j + 1) % p : (j - 1 + p) % p;
    for (int a = 0; a < ns; ++a) {
      if (!alive[idx(j, a)]) continue;
      int cnt = 0;
      for (Symbol b : dir > 0 ? X.successors(a) : X.predecessors(a))
        if (alive[idx(k, b)]) ++cnt;
      nbr_count[idx(j, a)] = cnt;
      if (cnt == 0) dead.push_back({j, a});
    }
  }
  while (!dead.empty()) {
    auto [j, a] = dead.back();
    dead.pop_back();
    alive[idx(j, a)] = 0;
    // (j, a) fed the entries one residue against the refinement direction
    int k = dir > 0 ? (j - 1 + p) % p : (j + 1) % p;
    for (Symbol b : dir > 0 ? X.predecessors(a) : X.successors(a)) {
      if (!alive[idx(k, b)]) continue;
      if (--nbr_count[idx(k, b)] == 0) dead.push_back({k, b});
    }
  }
  return alive;
}

}  // namespace

FiberSets::FiberSets(const FactorCode& code, const EventuallyPeriodicPoint& y, long lo, long hi)
    : nsym_(code.domain().size()), lo_(lo), hi_(hi) {
  if (lo >= hi) throw std::invalid_argument("fiber_sets: empty range");
  const Sft& X = code.domain();
  lp_ = static_cast<int>(y.left_tail().size());
  rp_ = static_cast<int>(y.right_tail().size());
  lref_ = y.anchor();
  rref_ = y.center_end();
  ltail_ = tail_fixed_point(code, y.left_tail(), -1);
  rtail_ = tail_fixed_point(code, y.right_tail(), +1);

  auto lres = [&](long i) { return static_cast<int>(((i - lref_) % lp_ + lp_) % lp_); };
  auto rres = [&](long i) { return static_cast<int>(((i - rref_) % rp_ + rp_) % rp_); };

  // right_ spans [min(lo, rref), rref): backward induction seeded by the tail.
  long rlo = std::min(lo, rref_);
  right_.assign(static_cast<std::size_t>(std::max<long>(0, rref_ - rlo)) * nsym_, 0);
  for (long i = rref_ - 1; i >= rlo; --i) {
    for (Symbol a : code.fiber(y.at(i))) {
      bool ok = false;
      for (Symbol b : X.successors(a)) {
        bool bnext;
        if (i + 1 >= rref_)
          bnext = rtail_[static_cast<std::size_t>(rres(i + 1)) * nsym_ + b] != 0;
        else
          bnext = right_[static_cast<std::size_t>(i + 1 - rlo) * nsym_ + b] != 0;
        if (bnext) { ok = true; break; }
      }
      if (ok) right_[static_cast<std::size_t>(i - rlo) * nsym_ + a] = 1;
    }
  }
  // left_ spans [lref, max(hi, lref)): forward induction seeded by the tail.
  long lhi = std::max(hi, lref_);
  left_.assign(static_cast<std::size_t>(std::max<long>(0, lhi - lref_)) * nsym_, 0);
  for (long i = lref_; i < lhi; ++i) {
    for (Symbol a : code.fiber(y.at(i))) {
      bool ok = false;
      for (Symbol c : X.predecessors(a)) {
        bool cprev;
        if (i - 1 < lref_)
          cprev = ltail_[static_cast<std::size_t>(lres(i - 1)) * nsym_ + c] != 0;
        else
          cprev = left_[static_cast<std::size_t>(i - 1 - lref_) * nsym_ + c] != 0;
        if (cprev) { ok = true; break; }
      }
      if (ok) left_[static_cast<std::size_t>(i - lref_) * nsym_ + a] = 1;
    }
  }

  auto any = [&](auto&& pred) {
    for (int a = 0; a < nsym_; ++a)
      if (pred(a)) return true;
    return false;
  };
  for (long i = lo; i < hi && nonempty_; ++i) {
    if (!any([&](int a) { return left_ok(i, a); }) ||
        !any([&](int a) { return right_ok(i, a); }))
      nonempty_ = false;
  }
}

bool FiberSets::left_ok(long i, Symbol a) const {
  if (i < lref_) {
    int r = static_cast<int>(((i - lref_) % lp_ + lp_) % lp_);
    return ltail_[static_cast<std::size_t>(r) * nsym_ + a] != 0;
  }
  long idx = i - lref_;
  if (idx >= static_cast<long>(left_.size() / nsym_))
    throw std::out_of_range("FiberSets::left_ok: position beyond computed range");
  return left_[static_cast<std::size_t>(idx) * nsym_ + a] != 0;
}

bool FiberSets::right_ok(long i, Symbol a) const {
  if (i >= rref_) {
    int r = static_cast<int>(((i - rref_) % rp_ + rp_) % rp_);
    return rtail_[static_cast<std::size_t>(r) * nsym_ + a] != 0;
  }
  long rlo = rref_ - static_cast<long>(right_.size() / nsym_);
  if (i < rlo) throw std::out_of_range("FiberSets::right_ok: position below computed range");
  return right_[static_cast<std::size_t>(i - rlo) * nsym_ + a] != 0;
}

std::vector<std::uint8_t> FiberSets::left_mask(long i) const {
  std::vector<std::uint8_t> out(nsym_, 0);
  for (int a = 0; a < nsym_; ++a) out[a] = left_ok(i, a) ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> FiberSets::right_mask(long i) const {
  std::vector<std::uint8_t> out(nsym_, 0);
  for (int a = 0; a < nsym_; ++a) out[a] = right_ok(i, a) ? 1 : 0;
  return out;
}

FiberSets fiber_sets(const FactorCode& code, const EventuallyPeriodicPoint& y) {
  long lo = y.anchor() - static_cast<long>(y.left_tail().size());
  long hi = y.center_end() + static_cast<long>(y.right_tail().size());
  return FiberSets(code, y, lo, hi);
}

FiberSets fiber_sets(const FactorCode& code, const EventuallyPeriodicPoint& y, long lo, long hi) {
  return FiberSets(code, y, lo, hi);
}

// ---------------------------------------------------------------------------
// D_n sums and estimators

namespace {

struct DnSetup {
  Word window;
  std::vector<std::uint8_t> first, last;
};

DnSetup dn_setup(const FactorCode& code, const EventuallyPeriodicPoint& y, long n,
                 const FiberSets* fs) {
  if (n < 1) throw std::invalid_argument("D_n: n must be >= 1");
  DnSetup s;
  s.window = y.window(0, n - 1);
  if (fs != nullptr) {
    s.first = fs->left_mask(0);
    s.last = fs->right_mask(n - 1);
  } else {
    FiberSets local(code, y, 0, n);
    s.first = local.left_mask(0);
    s.last = local.right_mask(n - 1);
  }
  return s;
}

}  // namespace

BigInt dn_count(const FactorCode& code, const EventuallyPeriodicPoint& y, long n,
                const FiberSets* fs) {
  DnSetup s = dn_setup(code, y, n, fs);
  EndpointMasks masks{&s.first, &s.last};
  return count_paths(code, s.window.span(), masks);
}

BigInt dn_widened_count(const FactorCode& code, const EventuallyPeriodicPoint& y, long n, long K,
                        std::size_t cap) {
  if (n < 1 || K < 0) throw std::invalid_argument("dn_widened_count: bad n or K");
  Word wide = y.window(-K, n - 1 + K);
  std::vector<Word> blocks = code.preimage_blocks(wide.span(), cap);
  std::set<std::vector<Symbol>> centers;
  for (const auto& b : blocks)
    centers.insert(std::vector<Symbol>(b.syms.begin() + K, b.syms.begin() + K + n));
  return BigInt(centers.size());
}

double dn_log_weight(const FactorCode& code, const LocallyConstantPotential& f,
                     const EventuallyPeriodicPoint& y, long n, SumMode mode,
                     const FiberSets* fs) {
  if (mode != SumMode::Inf && mode != SumMode::Sup)
    throw std::invalid_argument("dn_log_weight: mode must be Inf or Sup");
  DnSetup s = dn_setup(code, y, n, fs);
  EndpointMasks masks{&s.first, &s.last};
  return log_path_sum(code, f, s.window.span(), mode, masks);
}

double estimator_T(const FactorCode& code, const LocallyConstantPotential& f,
                   const EventuallyPeriodicPoint& y, long n) {
  return dn_log_weight(code, f, y, n, SumMode::Inf) / static_cast<double>(n);
}

double estimator_Phi(const FactorCode& code, const LocallyConstantPotential& f,
                     std::span<const Symbol> window) {
  return log_S(code, f, window, SumMode::Phi) / static_cast<double>(window.size());
}

double estimator_Psi(const FactorCode& code, const LocallyConstantPotential& f,
                     std::span<const Symbol> window) {
  return log_S(code, f, window, SumMode::Inf) / static_cast<double>(window.size());
}

double estimator_Psi_tilde(const FactorCode& code, const LocallyConstantPotential& f,
                           std::span<const Symbol> window) {
  return log_S(code, f, window, SumMode::Sup) / static_cast<double>(window.size());
}

double corollary_estimator(const FactorCode& code, const LocallyConstantPotential& f,
                           std::span<const Symbol> window) {
  return log_S(code, f, window, SumMode::Canonical) / static_cast<double>(window.size());
}

double gamma_log(const FactorCode& code, const LocallyConstantPotential& f,
                 const EventuallyPeriodicPoint& y, Symbol b, Symbol c, long n) {
  if (n < 1) throw std::invalid_argument("gamma: n must be >= 1");
  const Sft& X = code.domain();
  if (b < 0 || b >= X.size() || c < 0 || c >= X.size())
    throw std::invalid_argument("gamma: symbol out of range");
  Word w = y.window(0, n);
  std::vector<std::uint8_t> first(X.size(), 0), last(X.size(), 0);
  first[b] = 1;
  last[c] = 1;
  EndpointMasks masks{&first, &last};
  return log_path_sum(code, f, w.span(), SumMode::Phi, masks);
}

// ---------------------------------------------------------------------------
// Periodic points: weighted fiber matrices and spectral radii

WeightedFiberMatrix periodic_matrix(const FactorCode& code, const LocallyConstantPotential& f,
                                    std::span<const Symbol> w, std::size_t cap) {
  const Sft& Y = code.image();
  if (w.empty() || !Y.valid_word(w) || !Y.allowed(w.back(), w.front()))
    throw std::invalid_argument("periodic_matrix: w is not a cycle word of the image");
  PairWeight F = pair_weight(f);
  WeightedFiberMatrix A;
  A.period = static_cast<long>(w.size());
  A.states = code.preimage_blocks(w, cap);
  if (A.states.empty()) throw std::invalid_argument("periodic_matrix: empty preimage of w");
  std::size_t l = A.states.size();
  A.log_entries.assign(l, std::vector<double>(l, kNegInf));
  const Sft& X = code.domain();
  std::vector<double> sw(l);
  for (std::size_t u = 0; u < l; ++u) sw[u] = s_phi_log(F, A.states[u].span());
  for (std::size_t u = 0; u < l; ++u)
    for (std::size_t v = 0; v < l; ++v)
      if (X.allowed(A.states[u].syms.back(), A.states[v].syms.front()))
        A.log_entries[u][v] = sw[u] + F.at(A.states[u].syms.back(), A.states[v].syms.front());
  return A;
}

WeightedFiberMatrix WeightedFiberMatrix::reduce() const {
  std::size_t l = states.size();
  std::vector<char> alive(l, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < l; ++u) {
      if (!alive[u]) continue;
      bool out = false, in = false;
      for (std::size_t v = 0; v < l; ++v) {
        if (alive[v] && log_entries[u][v] != kNegInf) out = true;
        if (alive[v] && log_entries[v][u] != kNegInf) in = true;
      }
      if (!out || !in) {
        alive[u] = 0;
        changed = true;
      }
    }
  }
  WeightedFiberMatrix B;
  B.period = period;
  B.reduced = true;
  std::vector<std::size_t> keep;
  for (std::size_t u = 0; u < l; ++u)
    if (alive[u]) keep.push_back(u);
  B.states.reserve(keep.size());
  for (std::size_t u : keep) B.states.push_back(states[u]);
  B.log_entries.assign(keep.size(), std::vector<double>(keep.size(), kNegInf));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      B.log_entries[i][j] = log_entries[keep[i]][keep[j]];
  return B;
}

namespace {

/// Iterative Tarjan SCC over the finite entries.
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<double>>& logM) {
  int n = static_cast<int>(logM.size());
  std::vector<int> index(n, -1), low(n, 0), on(n, 0), stk;
  std::vector<std::vector<int>> sccs;
  int counter = 0;
  struct Frame { int v; int child; };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = 1;
    while (!frames.empty()) {
      auto& fr = frames.back();
      int v = fr.v;
      if (fr.child < n) {
        int u = fr.child++;
        if (logM[v][u] == kNegInf) continue;
        if (index[u] == -1) {
          index[u] = low[u] = counter++;
          stk.push_back(u);
          on[u] = 1;
          frames.push_back({u, 0});
        } else if (on[u]) {
          low[v] = std::min(low[v], index[u]);
        }
      } else {
        if (low[v] == index[v]) {
          std::vector<int> comp;
          int u;
          do {
            u = stk.back();
            stk.pop_back();
            on[u] = 0;
            comp.push_back(u);
          } while (u != v);
          sccs.push_back(std::move(comp));
        }
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return sccs;
}

}  // namespace

double spectral_log_radius(const std::vector<std::vector<double>>& log_entries,
                           double tol, int max_iter) {
  std::size_t n = log_entries.size();
  if (n == 0) return kNegInf;
  double best = kNegInf;
  for (const auto& comp : strongly_connected_components(log_entries)) {
    if (comp.size() == 1 && log_entries[comp[0]][comp[0]] == kNegInf) continue;
    std::size_t k = comp.size();
    double mu = kNegInf;
    for (int u : comp)
      for (int v : comp) mu = std::max(mu, log_entries[u][v]);
    // B = exp(A - mu) + I is primitive on an SCC, so the Collatz-Wielandt
    // bracket contracts; rho(A) = e^mu (rho(B) - 1).
    std::vector<std::vector<double>> B(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        double e = log_entries[comp[i]][comp[j]];
        B[i][j] = e == kNegInf ? 0.0 : std::exp(e - mu);
      }
      B[i][i] += 1.0;
    }
    std::vector<double> v(k, 1.0), u(k);
    double lam_lo = 0.0, lam_hi = 0.0;
    for (int it = 0; it < max_iter; ++it) {
      for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += B[i][j] * v[j];
        u[i] = s;
      }
      lam_lo = std::numeric_limits<double>::infinity();
      lam_hi = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        double r = u[i] / v[i];
        lam_lo = std::min(lam_lo, r);
        lam_hi = std::max(lam_hi, r);
      }
      double mx = *std::max_element(u.begin(), u.end());
      for (std::size_t i = 0; i < k; ++i) v[i] = u[i] / mx;
      if (lam_hi - lam_lo <= tol * lam_hi) break;
    }
    double rho_b = 0.5 * (lam_lo + lam_hi);
    best = std::max(best, mu + std::log(rho_b - 1.0));
  }
  return best;
}

PeriodicValues periodic_values(const FactorCode& code, const LocallyConstantPotential& f,
                               std::span<const Symbol> w, std::size_t cap) {
  WeightedFiberMatrix A = periodic_matrix(code, f, w, cap);
  WeightedFiberMatrix B = A.reduce();
  double q = static_cast<double>(w.size());
  PeriodicValues out;
  out.l = A.size();
  out.reduced_size = B.size();
  out.phi_exact = spectral_log_radius(A.log_entries) / q;
  out.T_exact = B.size() == 0 ? kNegInf : spectral_log_radius(B.log_entries) / q;
  return out;
}

PeriodicValues periodic_transfer_values(const FactorCode& code, const LocallyConstantPotential& f,
                                        std::span<const Symbol> w) {
  const Sft& Y = code.image();
  const Sft& X = code.domain();
  if (w.empty() || !Y.valid_word(w) || !Y.allowed(w.back(), w.front()))
    throw std::invalid_argument("periodic_transfer_values: w is not a cycle word of the image");
  PairWeight F = pair_weight(f);
  long q = static_cast<long>(w.size());
  Word cyc(std::vector<Symbol>(w.begin(), w.end()));
  EventuallyPeriodicPoint y(Y, cyc, Word{}, cyc, 0);
  FiberSets fs(code, y, 0, q);
  int ns = X.size();

  auto product_log_rho = [&](bool restricted) -> double {
    auto in_set = [&](long i, Symbol a) {
      if (code.apply(a) != w[static_cast<std::size_t>(((i % q) + q) % q)]) return false;
      if (!restricted) return true;
      long r = ((i % q) + q) % q;
      return fs.left_ok(r, a) && fs.right_ok(r, a);
    };
    std::vector<std::vector<double>> P(ns, std::vector<double>(ns, 0.0));
    for (int a = 0; a < ns; ++a) P[a][a] = 1.0;
    double log_scale = 0.0;
    std::vector<std::vector<double>> nxt(ns, std::vector<double>(ns, 0.0));
    for (long i = 0; i < q; ++i) {
      for (auto& row : nxt) std::fill(row.begin(), row.end(), 0.0);
      for (int a = 0; a < ns; ++a) {
        for (int b = 0; b < ns; ++b) {
          if (!X.allowed(a, b) || !in_set(i, a) || !in_set(i + 1, b)) continue;
          double e = std::exp(F.at(a, b));
          for (int s = 0; s < ns; ++s)
            if (P[s][a] != 0.0) nxt[s][b] += P[s][a] * e;
        }
      }
      P.swap(nxt);
      double mx = 0.0;
      for (const auto& row : P)
        for (double x : row) mx = std::max(mx, x);
      if (mx == 0.0) return kNegInf;
      if (mx > 1e250) {
        log_scale += std::log(mx);
        for (auto& row : P)
          for (double& x : row) x /= mx;
      }
    }
    std::vector<std::vector<double>> L(ns, std::vector<double>(ns, kNegInf));
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        if (P[a][b] > 0.0) L[a][b] = std::log(P[a][b]) + log_scale;
    return spectral_log_radius(L);
  };

  PeriodicValues out;
  out.phi_exact = product_log_rho(false) / static_cast<double>(q);
  out.T_exact = product_log_rho(true) / static_cast<double>(q);
  return out;
}

}  // namespace relpress
