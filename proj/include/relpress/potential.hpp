#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relpress/sft.hpp"

namespace relpress {

/// How a position-dependent block weight resolves the unseen coordinates of
/// its cylinder: exact infimum, exact supremum, or the canonical
/// (lexicographically least) representative extension.
enum class WeightMode { Inf, Sup, Canonical };

/// A locally constant potential f(x) = table[x_{-m} ... x_m] on an SFT.
/// Values are stored in log scale exactly as given; after nonnegativity
/// normalization the minimum table value is 0, so exp(f) ranges in [1, M]
/// with ln M = log_bound().
class LocallyConstantPotential {
 public:
  static constexpr int kDefaultMaxRadius = 4;

  /// `table` maps printed (2m+1)-words to values and must cover exactly the
  /// allowed (2m+1)-words of X.
  static LocallyConstantPotential make(const Sft& X, int window_radius,
                                       const std::map<std::string, double>& table,
                                       bool normalize,
                                       int max_radius = kDefaultMaxRadius);

  /// f == 0 (window radius 0).
  static LocallyConstantPotential zero(const Sft& X);

  /// A potential of the two coordinates x_0 x_1, stored with radius 1 and no
  /// x_{-1} dependence. `edge_values` maps allowed edges to f values.
  static LocallyConstantPotential from_pairs(
      const Sft& X, const std::map<std::pair<Symbol, Symbol>, double>& edge_values,
      bool normalize);

  const Sft& domain() const { return X_; }
  int radius() const { return m_; }
  double shift_constant() const { return shift_c_; }
  /// ln M = max table value (>= 0 after normalization).
  double log_bound() const { return max_value_; }
  double min_value() const { return min_value_; }
  bool identically_zero() const { return min_value_ == 0.0 && max_value_ == 0.0; }

  /// f at a concrete window of length 2m+1.
  double value(std::span<const Symbol> window) const;

  /// Shifted copy f + c with the offset recorded; normalize() picks
  /// c = -min so the new minimum is exactly 0.
  LocallyConstantPotential shifted(double c) const;
  LocallyConstantPotential normalized() const { return shifted(-min_value_); }

  /// True when f depends on x_0 x_1 only (radius 0, or radius 1 with no
  /// x_{-1} dependence), the normal form the pair weight F assumes.
  bool pair_form() const { return pair_form_; }
  /// f on the cylinder [a b]; requires pair_form().
  double pair_value(Symbol a, Symbol b) const;

 private:
  LocallyConstantPotential() = default;
  std::uint64_t key(std::span<const Symbol> w) const;
  void finish();

  Sft X_;
  int m_ = 0;
  std::map<std::uint64_t, double> table_;
  double shift_c_ = 0.0;
  double min_value_ = 0.0, max_value_ = 0.0;
  bool pair_form_ = false;
};

/// The block map F on 2-blocks, kept in log scale:
/// log_F[a][b] = f on the cylinder [a b].
struct PairWeight {
  std::vector<std::vector<double>> log_F;
  double log_bound = 0.0;  // ln M

  double at(Symbol a, Symbol b) const { return log_F[a][b]; }
};

/// F from a potential in 2-coordinate normal form. Rejects wider windows.
PairWeight pair_weight(const LocallyConstantPotential& f);

/// ln s_f(B) = sum of pair weights along B; 0 for |B| <= 1.
double s_phi_log(const PairWeight& F, std::span<const Symbol> block);

/// ln F_n^i(B) (mode Inf), ln F~_n^i(B) (mode Sup), or the canonical
/// representative factor: the exact optimum of f over the cylinder
/// _{-i}[B]_{n-i-1}, found by enumerating the boundary completions.
double windowed_weight_log(const LocallyConstantPotential& f, std::span<const Symbol> block,
                           int i, WeightMode mode);

/// Same factor computed from a trailing segment of the block: `segment`
/// holds positions [seg_begin, seg_begin+|segment|) and must cover the
/// window of position i that needs no right extension past n-1.
double windowed_factor_log(const LocallyConstantPotential& f, std::span<const Symbol> segment,
                           long seg_begin, long i, long n, WeightMode mode);

/// ln s_f(B) and ln s~_f(B) with inf/sup weights: product over all n positions.
double s_inf_log(const LocallyConstantPotential& f, std::span<const Symbol> block);
double s_sup_log(const LocallyConstantPotential& f, std::span<const Symbol> block);

/// Enumerate allowed left extensions (words u with u.front -> ... -> first)
/// and right extensions of the given length; lexicographic order.
std::vector<std::vector<Symbol>> left_extensions(const Sft& X, Symbol first, int len);
std::vector<std::vector<Symbol>> right_extensions(const Sft& X, Symbol last, int len);

/// Canonical (lexicographically least) extension chains.
std::vector<Symbol> canonical_left_extension(const Sft& X, Symbol first, int len);
std::vector<Symbol> canonical_right_extension(const Sft& X, Symbol last, int len);

/// Carry a potential through a higher-block recoding. The result depends on
/// the first recoded coordinate only (each recoded symbol spans a full
/// original window), so it is always in 2-coordinate normal form. Requires
/// k >= 2 for pair-form inputs and k >= 2m+1 otherwise.
LocallyConstantPotential recode_potential(const Recoding& r, const LocallyConstantPotential& f);

}  // namespace relpress
