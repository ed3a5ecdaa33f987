#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace relpress {

using Symbol = int;

/// A finite word over an alphabet of symbol indices. `offset` anchors the
/// word when it names a cylinder; two words with different offsets still
/// compare equal as blocks.
struct Word {
  std::vector<Symbol> syms;
  long offset = 0;

  Word() = default;
  explicit Word(std::vector<Symbol> s, long off = 0) : syms(std::move(s)), offset(off) {}

  std::size_t size() const { return syms.size(); }
  bool empty() const { return syms.empty(); }
  Symbol operator[](std::size_t i) const { return syms[i]; }
  std::span<const Symbol> span() const { return syms; }

  friend bool operator==(const Word& a, const Word& b) { return a.syms == b.syms; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  friend bool operator<(const Word& a, const Word& b) { return a.syms < b.syms; }
};

/// A 1-step shift of finite type: an ordered alphabet plus an allowed-edge
/// relation. Construction trims inessential symbols until every remaining
/// symbol has at least one predecessor and one successor.
class Sft {
 public:
  Sft() = default;  // empty placeholder; build real systems with make()

  static Sft make(const std::vector<std::string>& alphabet,
                  const std::vector<std::pair<std::string, std::string>>& edges);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Symbol a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  Symbol index_of(const std::string& name) const;  // -1 if absent (or trimmed)

  bool allowed(Symbol u, Symbol v) const { return adj_[u * size() + v] != 0; }
  const std::vector<Symbol>& successors(Symbol u) const { return succ_[u]; }
  const std::vector<Symbol>& predecessors(Symbol u) const { return pred_[u]; }
  std::size_t edge_count() const { return edge_count_; }

  /// Symbols dropped by trimming, in removal order (original names).
  const std::vector<std::string>& removed_symbols() const { return removed_; }

  bool valid_word(std::span<const Symbol> w) const;
  bool irreducible() const;

  /// All allowed n-blocks in lexicographic (declared-symbol-order) order.
  /// Throws if the enumeration would exceed `cap`.
  std::vector<Word> blocks(int n, std::size_t cap = 1000000) const;

  /// Human-readable form of a word: concatenated names, or comma-joined
  /// when some symbol name is longer than one character.
  std::string word_name(std::span<const Symbol> w) const;

  /// Parse a word from its printed form (see word_name).
  Word parse_word(const std::string& text) const;

  friend bool operator==(const Sft& a, const Sft& b) {
    return a.names_ == b.names_ && a.adj_ == b.adj_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<char> adj_;  // row-major size()*size()
  std::vector<std::vector<Symbol>> succ_, pred_;
  std::vector<std::string> removed_;
  std::size_t edge_count_ = 0;
};

/// A 1-block factor code pi: X -> Y. Carries the domain SFT by value and the
/// induced image presentation (image alphabet in order of first appearance,
/// image edges = images of domain edges).
class FactorCode {
 public:
  FactorCode(Sft domain, const std::map<std::string, std::string>& symbol_map);

  static FactorCode identity(Sft domain);

  const Sft& domain() const { return domain_; }
  const Sft& image() const { return image_; }

  Symbol apply(Symbol a) const { return map_[a]; }
  Word apply(std::span<const Symbol> w) const;

  /// Domain symbols projecting to the given image symbol, in declared order.
  const std::vector<Symbol>& fiber(Symbol image_sym) const { return fibers_[image_sym]; }

  /// All domain blocks B with pi(B)=v, enumerated in lexicographic order.
  /// Empty result means v has no preimage block. Throws beyond `cap`.
  std::vector<Word> preimage_blocks(std::span<const Symbol> v, std::size_t cap = 1000000) const;

 private:
  Sft domain_;
  std::vector<Symbol> map_;
  Sft image_;
  std::vector<std::vector<Symbol>> fibers_;
};

/// A bi-infinite point with periodic left and right tails and a finite
/// center word; anchor is the index of the first center symbol (or of the
/// first right-tail repetition when the center is empty).
class EventuallyPeriodicPoint {
 public:
  EventuallyPeriodicPoint(const Sft& presentation, Word left_tail, Word center,
                          Word right_tail, long anchor = 0);

  Symbol at(long i) const;
  Word window(long a, long b) const;  // inclusive bounds

  bool purely_periodic() const {
    return center_.empty() && left_.syms == right_.syms;
  }

  long anchor() const { return anchor_; }
  long center_end() const { return anchor_ + static_cast<long>(center_.size()); }
  const Word& left_tail() const { return left_; }
  const Word& center() const { return center_; }
  const Word& right_tail() const { return right_; }

 private:
  Word left_, center_, right_;
  long anchor_;
};

/// Result of passing to the k-block presentation: recoded domain and code
/// (both the X side and the Y side are recoded to k-blocks) plus invertible
/// symbol dictionaries.
struct Recoding {
  int k = 1;
  FactorCode recoded;
  std::vector<Word> domain_blocks;  // recoded domain symbol -> original k-block
  std::vector<Word> image_blocks;   // recoded image symbol  -> original image k-block

  Word domain_to_original(std::span<const Symbol> w) const;
  Word domain_from_original(std::span<const Symbol> w) const;  // |w| >= k
  Word image_to_original(std::span<const Symbol> w) const;
  Word image_from_original(std::span<const Symbol> w) const;   // |w| >= k

  /// Recode a cycle word of the image: length is preserved, symbol i is the
  /// k-window of the periodic extension starting at i. Throws if a window
  /// has no domain preimage.
  Word image_cycle_from_original(std::span<const Symbol> cycle) const;
};

Recoding higher_block_recode(const FactorCode& code, int k, std::size_t cap = 1000000);

}  // namespace relpress
