#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <vector>

#include "relpress/potential.hpp"
#include "relpress/sft.hpp"

namespace relpress {

using BigInt = boost::multiprecision::cpp_int;

/// Which block weight a fiber sum carries: the plain pair-product s_f
/// (Phi), the position-dependent inf/sup products (Inf/Sup), or the
/// canonical-representative Birkhoff weight (Canonical).
enum class SumMode { Phi, Inf, Sup, Canonical };

/// Optional restrictions on the first and last symbol of the summed paths,
/// given as per-domain-symbol flags. Null means unrestricted.
struct EndpointMasks {
  const std::vector<std::uint8_t>* first = nullptr;
  const std::vector<std::uint8_t>* last = nullptr;
};

/// ln of the weighted sum over all domain blocks B with pi(B) = v (and
/// endpoints in the given masks) of the mode's block weight. -inf when the
/// sum is empty. Deterministic: accumulation follows declared symbol order.
double log_path_sum(const FactorCode& code, const LocallyConstantPotential& f,
                    std::span<const Symbol> v, SumMode mode, EndpointMasks masks = {});

/// Exact number of such blocks (the f == 0 path), as a big integer.
BigInt count_paths(const FactorCode& code, std::span<const Symbol> v, EndpointMasks masks = {});

/// ln S_f(v) / ln S~_f(v): unrestricted fiber sums.
double log_S(const FactorCode& code, const LocallyConstantPotential& f, std::span<const Symbol> v,
             SumMode mode);

/// |pi^{-1}(v)| exactly, without enumeration.
BigInt count_preimage_blocks_exact(const FactorCode& code, std::span<const Symbol> v);

/// Left/right extensibility sets along an eventually periodic point:
/// right(i) is the set of domain symbols at position i that start a
/// right-infinite preimage ray of y_[i,inf), left(i) symmetrically. Both are
/// greatest fixed points along the periodic tails.
class FiberSets {
 public:
  FiberSets(const FactorCode& code, const EventuallyPeriodicPoint& y, long lo, long hi);

  bool left_ok(long i, Symbol a) const;
  bool right_ok(long i, Symbol a) const;
  std::vector<std::uint8_t> left_mask(long i) const;   // per-domain-symbol flags
  std::vector<std::uint8_t> right_mask(long i) const;

  /// True iff every position in [lo, hi) and both tails admit extensions,
  /// i.e. y has at least one preimage point.
  bool has_preimage() const { return nonempty_; }

 private:
  int nsym_;
  long lo_, hi_;
  std::vector<std::uint8_t> left_, right_;          // flattened [ (i-lo)*nsym + a ]
  std::vector<std::uint8_t> ltail_, rtail_;         // periodic fixed points
  long lref_, rref_;                                // tail reference positions
  int lp_, rp_;
  bool nonempty_ = true;
};

FiberSets fiber_sets(const FactorCode& code, const EventuallyPeriodicPoint& y);
FiberSets fiber_sets(const FactorCode& code, const EventuallyPeriodicPoint& y, long lo, long hi);

/// |D_n(y)| exactly: windows of genuine preimage points of y. Pass a
/// FiberSets covering [0, n) to amortize the tail propagation across many n.
BigInt dn_count(const FactorCode& code, const EventuallyPeriodicPoint& y, long n,
                const FiberSets* fs = nullptr);

/// Upper bound family |D_n^(K)(y)|: distinct [0, n) restrictions of preimage
/// blocks of the widened window y_[-K, n+K). Nonincreasing in K and equal to
/// |D_n(y)| once K stabilizes past the tail mixing time. Enumeration-backed,
/// so subject to `cap`.
BigInt dn_widened_count(const FactorCode& code, const EventuallyPeriodicPoint& y, long n, long K,
                        std::size_t cap = 1000000);

/// ln of the D_n(y) sum with s_f / s~_f weights (theta / theta~ partial sums).
double dn_log_weight(const FactorCode& code, const LocallyConstantPotential& f,
                     const EventuallyPeriodicPoint& y, long n, SumMode mode,
                     const FiberSets* fs = nullptr);

/// Finite-n estimators, all (1/n)-normalized logs.
double estimator_T(const FactorCode& code, const LocallyConstantPotential& f,
                   const EventuallyPeriodicPoint& y, long n);
double estimator_Phi(const FactorCode& code, const LocallyConstantPotential& f,
                     std::span<const Symbol> window);
double estimator_Psi(const FactorCode& code, const LocallyConstantPotential& f,
                     std::span<const Symbol> window);
double estimator_Psi_tilde(const FactorCode& code, const LocallyConstantPotential& f,
                           std::span<const Symbol> window);
double corollary_estimator(const FactorCode& code, const LocallyConstantPotential& f,
                           std::span<const Symbol> window);

/// ln Gamma^n_y(b, c): the fiber sum over blocks of length n+1 pinned to
/// start at b and end at c, projecting to y_0 ... y_n. -inf when empty.
double gamma_log(const FactorCode& code, const LocallyConstantPotential& f,
                 const EventuallyPeriodicPoint& y, Symbol b, Symbol c, long n);

/// Weighted transition matrix between preimage blocks of a cycle word w:
/// entry(u, v) = ln [ s_f(u) F(u_q v_1) ] when uv is allowed, else -inf.
struct WeightedFiberMatrix {
  long period = 0;
  std::vector<Word> states;
  std::vector<std::vector<double>> log_entries;
  bool reduced = false;

  std::size_t size() const { return states.size(); }
  /// Essential part: iteratively drop states with no finite incoming or no
  /// finite outgoing entry.
  WeightedFiberMatrix reduce() const;
};

WeightedFiberMatrix periodic_matrix(const FactorCode& code, const LocallyConstantPotential& f,
                                    std::span<const Symbol> w, std::size_t cap = 1000000);

/// ln of the spectral radius of the entrywise-exponentiated nonnegative
/// matrix, via SCC condensation and bracketed power iteration. -inf for an
/// empty or nilpotent matrix.
double spectral_log_radius(const std::vector<std::vector<double>>& log_entries,
                           double tol = 1e-12, int max_iter = 100000);

struct PeriodicValues {
  double phi_exact = 0.0;  // (1/q) ln rho of the unreduced matrix A
  double T_exact = 0.0;    // (1/q) ln rho of the essential reduction B
  std::size_t l = 0;       // |pi^{-1}(w)|
  std::size_t reduced_size = 0;
};

/// Exact pressure values at the periodic point w^inf via the block matrix
/// construction. Requires a 2-coordinate potential and enumerable pi^{-1}(w).
PeriodicValues periodic_values(const FactorCode& code, const LocallyConstantPotential& f,
                               std::span<const Symbol> w, std::size_t cap = 1000000);

/// Same values via the per-symbol transfer product, which scales to long
/// cycle words: phi from the plain fiber product, T from the product
/// restricted to bi-extendable symbols. l / reduced_size are not computed.
PeriodicValues periodic_transfer_values(const FactorCode& code, const LocallyConstantPotential& f,
                                        std::span<const Symbol> w);

}  // namespace relpress
