#include "relpress/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace relpress {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in [0, 1) from the top 53 bits; identical on every platform,
/// unlike the std distribution adapters.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int pick_weighted(std::mt19937_64& rng, const std::vector<double>& w) {
  double u = uniform01(rng);
  double acc = 0.0;
  int last = -1;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (w[i] <= 0.0) continue;
    last = i;
    acc += w[i];
    if (u < acc) return i;
  }
  return last;  // u landed in the rounding slack past the last entry
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

std::string format_sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

MarkovSampler::MarkovSampler(const Sft& X, std::vector<std::vector<double>> P, std::uint64_t seed)
    : X_(X), P_(std::move(P)), seed_(seed) {
  int ns = X_.size();
  if (static_cast<int>(P_.size()) != ns)
    throw std::invalid_argument("markov: matrix size mismatch");
  for (int a = 0; a < ns; ++a) {
    if (static_cast<int>(P_[a].size()) != ns)
      throw std::invalid_argument("markov: matrix row size mismatch");
    double sum = 0.0;
    for (int b = 0; b < ns; ++b) {
      double p = P_[a][b];
      if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument("markov: bad entry");
      if ((p > 0.0) != X_.allowed(a, b))
        throw std::invalid_argument("markov: support must equal the edge set");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("markov: row does not sum to 1");
  }
  // Stationary vector by damped left power iteration; the half-lazy chain is
  // aperiodic and shares the stationary vector.
  pi_.assign(ns, 1.0 / ns);
  std::vector<double> nxt(ns);
  for (int it = 0; it < 200000; ++it) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b) nxt[b] += pi_[a] * P_[a][b];
    double delta = 0.0, norm = 0.0;
    for (int b = 0; b < ns; ++b) {
      nxt[b] = 0.5 * (nxt[b] + pi_[b]);
      norm += nxt[b];
    }
    for (int b = 0; b < ns; ++b) {
      nxt[b] /= norm;
      delta = std::max(delta, std::abs(nxt[b] - pi_[b]));
    }
    pi_.swap(nxt);
    if (delta < 1e-15) break;
  }
  for (int b = 0; b < ns; ++b) {
    double img = 0.0;
    for (int a = 0; a < ns; ++a) img += pi_[a] * P_[a][b];
    if (std::abs(img - pi_[b]) > 1e-10)
      throw std::invalid_argument("markov: stationary vector did not converge");
  }
}

MarkovSampler MarkovSampler::uniform(const Sft& X, std::uint64_t seed) {
  int ns = X.size();
  std::vector<std::vector<double>> P(ns, std::vector<double>(ns, 0.0));
  for (int a = 0; a < ns; ++a) {
    const auto& succ = X.successors(a);
    for (Symbol b : succ) P[a][b] = 1.0 / static_cast<double>(succ.size());
  }
  return MarkovSampler(X, std::move(P), seed);
}

Word MarkovSampler::sample(long n, std::uint64_t sample_id) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(sample_id)));
  std::vector<Symbol> out;
  out.reserve(static_cast<std::size_t>(n));
  Symbol cur = pick_weighted(rng, pi_);
  out.push_back(cur);
  for (long i = 1; i < n; ++i) {
    cur = pick_weighted(rng, P_[cur]);
    out.push_back(cur);
  }
  return Word(std::move(out));
}

Word periodize(const Sft& image, const Word& w) {
  if (w.empty()) throw std::invalid_argument("periodize: empty word");
  if (!image.valid_word(w.span())) throw std::invalid_argument("periodize: invalid word");
  Symbol s = w.syms.back(), t = w.syms.front();
  if (image.allowed(s, t)) return w;
  // BFS distances to t along forward edges (explored on the reversed graph).
  int ns = image.size();
  std::vector<int> dist(ns, -1);
  std::vector<Symbol> queue{t};
  dist[t] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Symbol v = queue[qi];
    for (Symbol u : image.predecessors(v)) {
      if (dist[u] != -1) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  int best = -1;
  Symbol first = -1;
  for (Symbol b : image.successors(s)) {
    if (dist[b] == -1) continue;
    if (best == -1 || dist[b] < best || (dist[b] == best && b < first)) {
      best = dist[b];
      first = b;
    }
  }
  if (best == -1) throw std::invalid_argument("periodize: no connecting word in the image");
  Word out = w;
  Symbol cur = first;
  while (cur != t) {
    out.syms.push_back(cur);
    Symbol next = -1;
    for (Symbol b : image.successors(cur))
      if (dist[b] == dist[cur] - 1 && (next == -1 || b < next)) next = b;
    cur = next;
  }
  return out;
}

std::vector<double> GapReport::median_gaps() const {
  std::vector<double> out;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    std::vector<double> gaps;
    for (std::size_t r = gi; r < rows.size(); r += n_grid.size())
      gaps.push_back(std::abs(rows[r].gap_psi_T));
    std::sort(gaps.begin(), gaps.end());
    std::size_t k = gaps.size();
    if (k == 0) {
      out.push_back(0.0);
    } else if (k % 2 == 1) {
      out.push_back(gaps[k / 2]);
    } else {
      out.push_back(0.5 * (gaps[k / 2 - 1] + gaps[k / 2]));
    }
  }
  return out;
}

void GapReport::write_csv(std::ostream& os) const {
  os << "seed,sample_id,n,psi_inf,psi_sup,phi,theta,T_exact,phi_exact,gap_psi_T\n";
  for (const auto& r : rows) {
    os << r.seed << ',' << r.sample_id << ',' << r.n << ',' << format_sig12(r.psi_inf) << ','
       << format_sig12(r.psi_sup) << ',' << format_sig12(r.phi) << ',' << format_sig12(r.theta)
       << ',' << format_sig12(r.T_exact) << ',' << format_sig12(r.phi_exact) << ','
       << format_sig12(r.gap_psi_T) << '\n';
  }
}

GapReport gap_experiment(const FactorCode& code, const LocallyConstantPotential& f,
                         const MarkovSampler& sampler, const std::vector<long>& n_grid,
                         int samples, int jobs) {
  if (n_grid.empty() || samples < 1) throw std::invalid_argument("gap_experiment: empty plan");
  GapReport rep;
  rep.system_id = "markov";
  rep.n_grid = n_grid;
  rep.rows.assign(static_cast<std::size_t>(samples) * n_grid.size(), GapRow{});
  long n_max = *std::max_element(n_grid.begin(), n_grid.end());

  auto run_sample = [&](int sid) {
    Word x = sampler.sample(n_max, static_cast<std::uint64_t>(sid));
    Word y = code.apply(x.span());
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
      long n = n_grid[gi];
      std::span<const Symbol> win(y.syms.data(), static_cast<std::size_t>(n));
      GapRow r;
      r.seed = sampler.seed();
      r.sample_id = static_cast<std::uint64_t>(sid);
      r.n = n;
      r.psi_inf = estimator_Psi(code, f, win);
      r.psi_sup = estimator_Psi_tilde(code, f, win);
      r.phi = estimator_Phi(code, f, win);
      Word cyc = periodize(code.image(), Word(std::vector<Symbol>(win.begin(), win.end())));
      EventuallyPeriodicPoint yp(code.image(), cyc, Word{}, cyc, 0);
      r.theta = dn_log_weight(code, f, yp, n, SumMode::Inf) / static_cast<double>(n);
      PeriodicValues pv = periodic_transfer_values(code, f, cyc.span());
      r.T_exact = pv.T_exact;
      r.phi_exact = pv.phi_exact;
      r.gap_psi_T = std::abs(r.psi_inf - r.T_exact);
      rep.rows[static_cast<std::size_t>(sid) * n_grid.size() + gi] = r;
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int sid = 0; sid < samples; ++sid) run_sample(sid);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (int sid = next.fetch_add(1); sid < samples; sid = next.fetch_add(1)) run_sample(sid);
      });
    for (auto& t : workers) t.join();
  }
  return rep;
}

GapReport deterministic_gap_experiment(const FactorCode& code, const LocallyConstantPotential& f,
                                       const EventuallyPeriodicPoint& y,
                                       const std::vector<long>& n_grid) {
  if (n_grid.empty()) throw std::invalid_argument("gap_experiment: empty grid");
  GapReport rep;
  rep.system_id = "point";
  rep.n_grid = n_grid;
  long n_max = *std::max_element(n_grid.begin(), n_grid.end());
  FiberSets fs(code, y, 0, n_max);
  for (long n : n_grid) {
    Word win = y.window(0, n - 1);
    GapRow r;
    r.n = n;
    r.psi_inf = estimator_Psi(code, f, win.span());
    r.psi_sup = estimator_Psi_tilde(code, f, win.span());
    r.phi = estimator_Phi(code, f, win.span());
    r.theta = dn_log_weight(code, f, y, n, SumMode::Inf, &fs) / static_cast<double>(n);
    r.T_exact = r.theta;  // finite-n stand-in: no periodic closure here
    r.phi_exact = r.phi;
    r.gap_psi_T = std::abs(r.psi_inf - r.theta);
    rep.rows.push_back(r);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Randomized instances

RandomInstance random_instance(std::uint64_t seed, int max_symbols, std::size_t max_fiber_states) {
  static const char* kNames[] = {"a", "b", "c", "d", "e", "f"};
  if (max_symbols < 2 || max_symbols > 6)
    throw std::invalid_argument("random_instance: max_symbols must be in [2, 6]");
  std::mt19937_64 rng(splitmix64(seed));
  for (int attempt = 0; attempt < 20000; ++attempt) {
    int ns = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_symbols - 1));
    std::vector<std::string> alphabet(kNames, kNames + ns);
    std::vector<std::pair<std::string, std::string>> edges;
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        if (uniform01(rng) < 0.5) edges.push_back({alphabet[a], alphabet[b]});
    Sft X;
    try {
      X = Sft::make(alphabet, edges);
    } catch (const std::exception&) {
      continue;
    }
    if (X.size() != ns || !X.irreducible()) continue;

    // Onto 1-block code: a random image size, the first occurrences pinned to
    // distinct image symbols through a random permutation.
    int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(ns));
    std::vector<int> perm(ns);
    for (int i = 0; i < ns; ++i) perm[i] = i;
    for (int i = ns - 1; i > 0; --i)
      std::swap(perm[i], perm[rng() % static_cast<std::uint64_t>(i + 1)]);
    std::vector<int> img(ns);
    for (int i = 0; i < ns; ++i)
      img[perm[i]] = i < k ? i : static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    std::map<std::string, std::string> symbol_map;
    for (int a = 0; a < ns; ++a) symbol_map[alphabet[a]] = std::string(1, char('0' + img[a]));

    std::optional<FactorCode> code;
    try {
      code.emplace(X, symbol_map);
    } catch (const std::exception&) {
      continue;  // image presentation lost symbols under trimming
    }

    std::map<std::pair<Symbol, Symbol>, double> edge_values;
    for (int a = 0; a < ns; ++a)
      for (Symbol b : X.successors(a)) edge_values[{a, b}] = uniform01(rng) * std::log(2.0);
    LocallyConstantPotential f = LocallyConstantPotential::from_pairs(X, edge_values, false);

    // Image cycle word as the image of a domain cycle, so it always lifts.
    for (int ca = 0; ca < 60; ++ca) {
      int q = 1 + static_cast<int>(rng() % 5);
      std::vector<Symbol> walk{static_cast<Symbol>(rng() % static_cast<std::uint64_t>(ns))};
      for (int i = 1; i < q; ++i) {
        const auto& succ = X.successors(walk.back());
        walk.push_back(succ[rng() % succ.size()]);
      }
      if (!X.allowed(walk.back(), walk.front())) continue;
      Word cycle = code->apply(walk);
      try {
        if (code->preimage_blocks(cycle.span(), max_fiber_states).empty()) continue;
      } catch (const std::length_error&) {
        continue;  // too many fiber states for the block-matrix route
      }
      RandomInstance inst{*code, f, cycle,
                          "random_instance(seed=" + std::to_string(seed) + ")"};
      return inst;
    }
  }
  throw std::runtime_error("random_instance: generation did not converge");
}

// ---------------------------------------------------------------------------
// Property harnesses

HarnessKind harness_kind_from_name(const std::string& name) {
  if (name == "lemma2") return HarnessKind::Lemma2;
  if (name == "lemma4") return HarnessKind::Lemma4;
  if (name == "monotonicity") return HarnessKind::Monotonicity;
  if (name == "domination") return HarnessKind::Domination;
  if (name == "subadditivity") return HarnessKind::Subadditivity;
  throw std::invalid_argument("unknown harness kind: " + name);
}

std::string harness_kind_name(HarnessKind kind) {
  switch (kind) {
    case HarnessKind::Lemma2: return "lemma2";
    case HarnessKind::Lemma4: return "lemma4";
    case HarnessKind::Monotonicity: return "monotonicity";
    case HarnessKind::Domination: return "domination";
    case HarnessKind::Subadditivity: return "subadditivity";
  }
  return "?";
}

namespace {

/// Log-domain matrix product (logsumexp inner sums, index order fixed).
std::vector<std::vector<double>> log_mat_mul(const std::vector<std::vector<double>>& A,
                                             const std::vector<std::vector<double>>& B) {
  std::size_t n = A.size();
  std::vector<std::vector<double>> C(n, std::vector<double>(n, kNegInf));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = kNegInf;
      for (std::size_t k = 0; k < n; ++k)
        if (A[i][k] != kNegInf && B[k][j] != kNegInf) acc = log_add(acc, A[i][k] + B[k][j]);
      C[i][j] = acc;
    }
  return C;
}

void record_check(HarnessReport& rep, double deviation, double tol, const std::string& recipe) {
  ++rep.checks;
  rep.max_deviation = std::max(rep.max_deviation, deviation);
  if (deviation > tol) rep.counterexamples.push_back(recipe);
}

void run_lemma2_trial(HarnessReport& rep, const RandomInstance& inst) {
  PeriodicValues pv = periodic_values(inst.code, inst.f, inst.cycle.span());
  record_check(rep, std::abs(pv.phi_exact - pv.T_exact), 1e-8,
               inst.recipe + " lemma2 |phi-T|=" + format_sig12(std::abs(pv.phi_exact - pv.T_exact)));

  // Matrix path sums against brute enumeration of pi^{-1}(w^n) for nq <= 12:
  // every preimage block of w^n splits uniquely into q-blocks, so the sum of
  // s-weights equals sum_{u,v} (A^{n-1})_{uv} s(v) in the fiber matrix.
  long q = static_cast<long>(inst.cycle.size());
  long n = 12 / q;
  if (n < 1) return;
  std::vector<Symbol> wn;
  for (long i = 0; i < n; ++i)
    wn.insert(wn.end(), inst.cycle.syms.begin(), inst.cycle.syms.end());
  std::vector<Word> blocks;
  try {
    blocks = inst.code.preimage_blocks(wn, 200000);
  } catch (const std::length_error&) {
    return;  // enumeration infeasible for this instance; matrix check skipped
  }
  PairWeight F = pair_weight(inst.f);
  double brute = kNegInf;
  for (const auto& b : blocks) brute = log_add(brute, s_phi_log(F, b.span()));

  WeightedFiberMatrix A = periodic_matrix(inst.code, inst.f, inst.cycle.span());
  std::vector<double> sv(A.size());
  for (std::size_t v = 0; v < A.size(); ++v) sv[v] = s_phi_log(F, A.states[v].span());
  std::vector<std::vector<double>> P(A.size(), std::vector<double>(A.size(), kNegInf));
  for (std::size_t i = 0; i < A.size(); ++i) P[i][i] = 0.0;
  for (long e = 0; e < n - 1; ++e) P = log_mat_mul(P, A.log_entries);
  double matrix_sum = kNegInf;
  for (std::size_t u = 0; u < A.size(); ++u)
    for (std::size_t v = 0; v < A.size(); ++v)
      if (P[u][v] != kNegInf) matrix_sum = log_add(matrix_sum, P[u][v] + sv[v]);

  double dp = log_S(inst.code, inst.f, wn, SumMode::Phi);
  record_check(rep, std::abs(matrix_sum - brute), 1e-9, inst.recipe + " lemma2 matrix-vs-brute");
  record_check(rep, std::abs(dp - brute), 1e-9, inst.recipe + " lemma2 dp-vs-brute");
}

void run_lemma4_trial(HarnessReport& rep, const RandomInstance& inst) {
  long q = static_cast<long>(inst.cycle.size());
  EventuallyPeriodicPoint y(inst.code.image(), inst.cycle, Word{}, inst.cycle, 0);
  for (Symbol b = 0; b < inst.code.domain().size(); ++b) {
    double g1 = gamma_log(inst.code, inst.f, y, b, b, q);
    if (g1 == kNegInf) continue;
    for (long k = 2; k <= 5; ++k) {
      double gk = gamma_log(inst.code, inst.f, y, b, b, q * k);
      record_check(rep, static_cast<double>(k) * g1 - gk, 1e-9,
                   inst.recipe + " lemma4 b=" + std::to_string(b) + " k=" + std::to_string(k));
    }
  }
}

void run_monotonicity_trial(HarnessReport& rep, const RandomInstance& inst, std::mt19937_64& rng) {
  const Sft& X = inst.code.domain();
  double slack = std::log(static_cast<double>(X.size())) + inst.f.log_bound();
  for (int rep_i = 0; rep_i < 12; ++rep_i) {
    long n = 5 + static_cast<long>(rng() % 30);
    std::vector<Symbol> walk{static_cast<Symbol>(rng() % static_cast<std::uint64_t>(X.size()))};
    for (long i = 1; i <= n; ++i) {
      const auto& succ = X.successors(walk.back());
      walk.push_back(succ[rng() % succ.size()]);
    }
    Word w = inst.code.apply(walk);
    double full = log_S(inst.code, inst.f, w.span(), SumMode::Phi);
    double tail = log_S(inst.code, inst.f,
                        std::span<const Symbol>(w.syms.data() + 1, w.syms.size() - 1),
                        SumMode::Phi);
    record_check(rep, full - (slack + tail), 1e-9, inst.recipe + " monotonicity");
  }
}

void run_domination_trial(HarnessReport& rep, const RandomInstance& inst, std::mt19937_64& rng) {
  const Sft& X = inst.code.domain();
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    long n = 4 + static_cast<long>(rng() % 25);
    std::vector<Symbol> walk{static_cast<Symbol>(rng() % static_cast<std::uint64_t>(X.size()))};
    for (long i = 1; i < n; ++i) {
      const auto& succ = X.successors(walk.back());
      walk.push_back(succ[rng() % succ.size()]);
    }
    Word w = inst.code.apply(walk);
    Word cyc = periodize(inst.code.image(), w);
    EventuallyPeriodicPoint y(inst.code.image(), cyc, Word{}, cyc, 0);
    double theta_sum = dn_log_weight(inst.code, inst.f, y, n, SumMode::Inf);
    double s_sum = log_S(inst.code, inst.f, w.span(), SumMode::Inf);
    if (theta_sum == kNegInf) {
      ++rep.checks;  // no bi-extendable preimage: the subset sum is empty
      continue;
    }
    record_check(rep, theta_sum - s_sum, 1e-9, inst.recipe + " domination");
  }
}

void run_subadditivity_trial(HarnessReport& rep, const RandomInstance& inst, std::mt19937_64& rng) {
  auto power = [&](long n) {
    std::vector<Symbol> wn;
    for (long i = 0; i < n; ++i)
      wn.insert(wn.end(), inst.cycle.syms.begin(), inst.cycle.syms.end());
    return wn;
  };
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    long n = 1 + static_cast<long>(rng() % 4);
    long m = 1 + static_cast<long>(rng() % 4);
    double lhs = log_S(inst.code, inst.f, power(n + m), SumMode::Phi);
    double rhs = inst.f.log_bound() + log_S(inst.code, inst.f, power(n), SumMode::Phi) +
                 log_S(inst.code, inst.f, power(m), SumMode::Phi);
    record_check(rep, lhs - rhs, 1e-9, inst.recipe + " subadditivity");
  }
}

}  // namespace

HarnessReport lemma_harness(HarnessKind kind, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("lemma_harness: trials must be >= 1");
  HarnessReport rep;
  rep.kind = kind;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = splitmix64(seed + static_cast<std::uint64_t>(t));
    RandomInstance inst = random_instance(ts);
    std::mt19937_64 rng(splitmix64(ts ^ 0x5bf03635ULL));
    switch (kind) {
      case HarnessKind::Lemma2: run_lemma2_trial(rep, inst); break;
      case HarnessKind::Lemma4: run_lemma4_trial(rep, inst); break;
      case HarnessKind::Monotonicity: run_monotonicity_trial(rep, inst, rng); break;
      case HarnessKind::Domination: run_domination_trial(rep, inst, rng); break;
      case HarnessKind::Subadditivity: run_subadditivity_trial(rep, inst, rng); break;
    }
  }
  return rep;
}

}  // namespace relpress
