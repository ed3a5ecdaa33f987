#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "relpress/potential.hpp"
#include "relpress/pressure.hpp"
#include "relpress/sft.hpp"

namespace relpress {

/// A stationary Markov chain on the domain SFT. The sampled bits come from a
/// pinned generator (mt19937_64, 53-bit uniforms) so identical seeds give
/// identical output on every platform.
class MarkovSampler {
 public:
  /// Rows of `P` must be stochastic (1e-12) with support exactly the edge
  /// set of X. The stationary vector is computed by left power iteration.
  MarkovSampler(const Sft& X, std::vector<std::vector<double>> P, std::uint64_t seed);

  /// Equal weight on every allowed successor.
  static MarkovSampler uniform(const Sft& X, std::uint64_t seed);

  const Sft& domain() const { return X_; }
  const std::vector<std::vector<double>>& matrix() const { return P_; }
  const std::vector<double>& stationary() const { return pi_; }
  std::uint64_t seed() const { return seed_; }

  /// A length-n word of X; deterministic in (seed, sample_id).
  Word sample(long n, std::uint64_t sample_id) const;

 private:
  Sft X_;
  std::vector<std::vector<double>> P_;
  std::vector<double> pi_;
  std::uint64_t seed_;
};

/// Close an image word into a cycle word: returns w followed by a shortest
/// connector from w.back() to w.front() (BFS distances; lexicographically
/// least path among shortest). The empty connector is used when the wrap
/// edge is already allowed. Throws if no connector exists.
Word periodize(const Sft& image, const Word& w);

struct GapRow {
  std::uint64_t seed = 0;
  std::uint64_t sample_id = 0;
  long n = 0;
  double psi_inf = 0, psi_sup = 0, phi = 0, theta = 0;
  double T_exact = 0, phi_exact = 0, gap_psi_T = 0;
};

struct GapReport {
  std::string system_id;
  std::vector<long> n_grid;
  std::vector<GapRow> rows;  // sample-major, n_grid order within a sample

  /// Median of |gap_psi_T| per grid entry, in grid order.
  std::vector<double> median_gaps() const;
  /// CSV report: header row, LF endings, 12 significant digits.
  void write_csv(std::ostream& os) const;
};

/// Markov-sampled experiment: one chain trajectory of length max(n_grid) per
/// sample; for each n the prefix window y = pi(x_[0,n)) yields the Psi/Phi
/// estimators, and the periodized cycle yields theta and the exact periodic
/// values (transfer route). gap_psi_T = |psi_inf - T_exact|.
GapReport gap_experiment(const FactorCode& code, const LocallyConstantPotential& f,
                         const MarkovSampler& sampler, const std::vector<long>& n_grid,
                         int samples, int jobs = 1);

/// The same report for one fixed eventually periodic point: theta comes from
/// D_n directly, and the exact-value columns carry the finite-n theta and
/// phi stand-ins (no periodic closure is involved), so gap_psi_T is the
/// finite-n Psi - theta divergence.
GapReport deterministic_gap_experiment(const FactorCode& code, const LocallyConstantPotential& f,
                                       const EventuallyPeriodicPoint& y,
                                       const std::vector<long>& n_grid);

enum class HarnessKind { Lemma2, Lemma4, Monotonicity, Domination, Subadditivity };

HarnessKind harness_kind_from_name(const std::string& name);
std::string harness_kind_name(HarnessKind kind);

struct HarnessReport {
  HarnessKind kind = HarnessKind::Lemma2;
  int trials = 0;
  long checks = 0;           // individual inequalities / equalities tested
  double max_deviation = 0;  // worst slack toward the tolerance
  std::vector<std::string> counterexamples;  // reproduction recipes

  bool ok() const { return counterexamples.empty(); }
};

/// A randomized (system, code, potential, cycle word) bundle; deterministic
/// in the seed. Guarantees: trimmed irreducible domain of 2..6 symbols, onto
/// 1-block code, pair potential with values in [0, ln 2], image cycle word
/// of period <= 5 that lifts (it is the image of a domain cycle).
struct RandomInstance {
  FactorCode code;
  LocallyConstantPotential f;
  Word cycle;  // image cycle word
  std::string recipe;
};

RandomInstance random_instance(std::uint64_t seed, int max_symbols = 6,
                               std::size_t max_fiber_states = 400);

/// Run `trials` randomized property checks of the given kind.
HarnessReport lemma_harness(HarnessKind kind, int trials, std::uint64_t seed);

}  // namespace relpress
