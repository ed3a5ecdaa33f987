#include "relpress/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace relpress {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::uint64_t LocallyConstantPotential::key(std::span<const Symbol> w) const {
  std::uint64_t k = 0;
  for (Symbol a : w) k = k * static_cast<std::uint64_t>(X_.size()) + static_cast<std::uint64_t>(a);
  return k;
}

LocallyConstantPotential LocallyConstantPotential::make(
    const Sft& X, int window_radius, const std::map<std::string, double>& table,
    bool normalize, int max_radius) {
  if (window_radius < 0) throw std::invalid_argument("potential: negative window radius");
  if (window_radius > max_radius)
    throw std::invalid_argument("potential: window radius exceeds cap (" +
                                std::to_string(max_radius) + ")");
  int len = 2 * window_radius + 1;
  double keyspace = std::pow(static_cast<double>(X.size()), len);
  if (keyspace > 4.0e18) throw std::invalid_argument("potential: window table too large");

  LocallyConstantPotential f;
  f.X_ = X;
  f.m_ = window_radius;
  std::vector<Word> windows = X.blocks(len);
  std::size_t used = 0;
  for (const auto& w : windows) {
    auto it = table.find(X.word_name(w.span()));
    if (it == table.end())
      throw std::invalid_argument("potential: table missing allowed window '" +
                                  X.word_name(w.span()) + "'");
    f.table_[f.key(w.span())] = it->second;
    ++used;
  }
  if (used != table.size())
    throw std::invalid_argument("potential: table has entries for disallowed windows");
  f.finish();
  if (normalize) return f.normalized();
  return f;
}

LocallyConstantPotential LocallyConstantPotential::zero(const Sft& X) {
  LocallyConstantPotential f;
  f.X_ = X;
  f.m_ = 0;
  for (int a = 0; a < X.size(); ++a) f.table_[static_cast<std::uint64_t>(a)] = 0.0;
  f.finish();
  return f;
}

LocallyConstantPotential LocallyConstantPotential::from_pairs(
    const Sft& X, const std::map<std::pair<Symbol, Symbol>, double>& edge_values,
    bool normalize) {
  LocallyConstantPotential f;
  f.X_ = X;
  f.m_ = 1;
  for (const auto& w : X.blocks(3)) {
    auto it = edge_values.find({w[1], w[2]});
    if (it == edge_values.end())
      throw std::invalid_argument("from_pairs: missing value for edge " +
                                  X.word_name(std::vector<Symbol>{w[1], w[2]}));
    f.table_[f.key(w.span())] = it->second;
  }
  f.finish();
  if (normalize) return f.normalized();
  return f;
}

void LocallyConstantPotential::finish() {
  if (table_.empty()) throw std::invalid_argument("potential: empty table");
  min_value_ = std::numeric_limits<double>::infinity();
  max_value_ = -std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : table_) {
    min_value_ = std::min(min_value_, v);
    max_value_ = std::max(max_value_, v);
  }
  if (!std::isfinite(min_value_) || !std::isfinite(max_value_))
    throw std::invalid_argument("potential: non-finite table value");
  pair_form_ = false;
  if (m_ == 0) {
    pair_form_ = true;
  } else if (m_ == 1) {
    pair_form_ = true;
    for (const auto& w : X_.blocks(3)) {
      Symbol c0 = X_.predecessors(w[1]).front();
      std::vector<Symbol> ref{c0, w[1], w[2]};
      double v0 = table_.at(key(ref));
      double v = table_.at(key(w.span()));
      if (std::abs(v - v0) > 1e-12 * std::max(1.0, std::abs(v0))) {
        pair_form_ = false;
        break;
      }
    }
  }
}

double LocallyConstantPotential::value(std::span<const Symbol> window) const {
  if (static_cast<int>(window.size()) != 2 * m_ + 1)
    throw std::invalid_argument("potential: window length mismatch");
  auto it = table_.find(key(window));
  if (it == table_.end())
    throw std::invalid_argument("potential: window '" + X_.word_name(window) + "' not allowed");
  return it->second;
}

LocallyConstantPotential LocallyConstantPotential::shifted(double c) const {
  LocallyConstantPotential f(*this);
  for (auto& [k, v] : f.table_) v += c;
  f.shift_c_ += c;
  f.min_value_ += c;
  f.max_value_ += c;
  return f;
}

double LocallyConstantPotential::pair_value(Symbol a, Symbol b) const {
  if (!pair_form_) throw std::logic_error("pair_value: potential not in 2-coordinate form");
  if (m_ == 0) {
    std::vector<Symbol> w{a};
    return value(w);
  }
  if (!X_.allowed(a, b)) throw std::invalid_argument("pair_value: disallowed edge");
  Symbol c = X_.predecessors(a).front();
  std::vector<Symbol> w{c, a, b};
  return value(w);
}

PairWeight pair_weight(const LocallyConstantPotential& f) {
  if (!f.pair_form())
    throw std::invalid_argument("pair_weight: potential depends on more than x_0 x_1; "
                                "recode to 2-coordinate form first");
  const Sft& X = f.domain();
  PairWeight F;
  F.log_F.assign(X.size(), std::vector<double>(X.size(), kNegInf));
  for (int a = 0; a < X.size(); ++a)
    for (Symbol b : X.successors(a)) F.log_F[a][b] = f.pair_value(a, b);
  F.log_bound = f.log_bound();
  return F;
}

double s_phi_log(const PairWeight& F, std::span<const Symbol> block) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < block.size(); ++i) s += F.at(block[i], block[i + 1]);
  return s;
}

std::vector<std::vector<Symbol>> left_extensions(const Sft& X, Symbol first, int len) {
  std::vector<std::vector<Symbol>> out;
  std::vector<Symbol> cur(len);
  auto rec = [&](auto&& self, int pos, Symbol next) -> void {
    // fill positions right-to-left; cur[pos] must lead into `next`
    if (pos < 0) {
      out.push_back(cur);
      return;
    }
    for (Symbol a : X.predecessors(next)) {
      cur[pos] = a;
      self(self, pos - 1, a);
    }
  };
  if (len == 0) {
    out.emplace_back();
    return out;
  }
  rec(rec, len - 1, first);
  return out;
}

std::vector<std::vector<Symbol>> right_extensions(const Sft& X, Symbol last, int len) {
  std::vector<std::vector<Symbol>> out;
  std::vector<Symbol> cur;
  auto rec = [&](auto&& self, Symbol prev) -> void {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (Symbol a : X.successors(prev)) {
      cur.push_back(a);
      self(self, a);
      cur.pop_back();
    }
  };
  if (len == 0) {
    out.emplace_back();
    return out;
  }
  rec(rec, last);
  return out;
}

std::vector<Symbol> canonical_left_extension(const Sft& X, Symbol first, int len) {
  std::vector<Symbol> out(len);
  Symbol next = first;
  for (int pos = len - 1; pos >= 0; --pos) {
    Symbol best = *std::min_element(X.predecessors(next).begin(), X.predecessors(next).end());
    out[pos] = best;
    next = best;
  }
  return out;
}

std::vector<Symbol> canonical_right_extension(const Sft& X, Symbol last, int len) {
  std::vector<Symbol> out;
  Symbol prev = last;
  for (int i = 0; i < len; ++i) {
    Symbol best = *std::min_element(X.successors(prev).begin(), X.successors(prev).end());
    out.push_back(best);
    prev = best;
  }
  return out;
}

double windowed_factor_log(const LocallyConstantPotential& f, std::span<const Symbol> segment,
                           long seg_begin, long i, long n, WeightMode mode) {
  const Sft& X = f.domain();
  long m = f.radius();
  long dl = std::max<long>(0, m - i);
  long dr = std::max<long>(0, i + m - (n - 1));
  long mid_lo = std::max<long>(0, i - m);
  long mid_hi = std::min(n - 1, i + m);
  if (mid_lo < seg_begin || mid_hi >= seg_begin + static_cast<long>(segment.size()))
    throw std::logic_error("windowed_factor_log: segment does not cover the window");
  std::span<const Symbol> middle =
      segment.subspan(static_cast<std::size_t>(mid_lo - seg_begin),
                      static_cast<std::size_t>(mid_hi - mid_lo + 1));
  if (dl == 0 && dr == 0) return f.value(middle);

  std::vector<Symbol> window;
  window.reserve(2 * m + 1);
  auto assemble = [&](std::span<const Symbol> u, std::span<const Symbol> v) {
    window.clear();
    window.insert(window.end(), u.begin(), u.end());
    window.insert(window.end(), middle.begin(), middle.end());
    window.insert(window.end(), v.begin(), v.end());
    return f.value(window);
  };

  if (mode == WeightMode::Canonical) {
    auto u = canonical_left_extension(X, middle.front(), static_cast<int>(dl));
    auto v = canonical_right_extension(X, middle.back(), static_cast<int>(dr));
    return assemble(u, v);
  }
  auto us = left_extensions(X, middle.front(), static_cast<int>(dl));
  auto vs = right_extensions(X, middle.back(), static_cast<int>(dr));
  double best = mode == WeightMode::Inf ? std::numeric_limits<double>::infinity() : kNegInf;
  for (const auto& u : us)
    for (const auto& v : vs) {
      double val = assemble(u, v);
      best = mode == WeightMode::Inf ? std::min(best, val) : std::max(best, val);
    }
  return best;
}

double windowed_weight_log(const LocallyConstantPotential& f, std::span<const Symbol> block,
                           int i, WeightMode mode) {
  long n = static_cast<long>(block.size());
  if (i < 0 || i >= n) throw std::invalid_argument("windowed_weight: position out of range");
  if (!f.domain().valid_word(block)) throw std::invalid_argument("windowed_weight: invalid block");
  return windowed_factor_log(f, block, 0, i, n, mode);
}

double s_inf_log(const LocallyConstantPotential& f, std::span<const Symbol> block) {
  double s = 0.0;
  for (long i = 0; i < static_cast<long>(block.size()); ++i)
    s += windowed_factor_log(f, block, 0, i, static_cast<long>(block.size()), WeightMode::Inf);
  return s;
}

double s_sup_log(const LocallyConstantPotential& f, std::span<const Symbol> block) {
  double s = 0.0;
  for (long i = 0; i < static_cast<long>(block.size()); ++i)
    s += windowed_factor_log(f, block, 0, i, static_cast<long>(block.size()), WeightMode::Sup);
  return s;
}

LocallyConstantPotential recode_potential(const Recoding& r, const LocallyConstantPotential& f) {
  int m = f.radius();
  const Sft& Z = r.recoded.domain();
  std::map<std::string, double> table;
  if (f.pair_form()) {
    if (m >= 1 && r.k < 2)
      throw std::invalid_argument("recode_potential: pair-form potential needs k >= 2");
    for (int z = 0; z < Z.size(); ++z) {
      const auto& b = r.domain_blocks[z].syms;
      double v = m == 0 ? f.value(std::span<const Symbol>(b.data(), 1))
                        : f.pair_value(b[0], b[1]);
      table[Z.name(z)] = v;
    }
  } else {
    if (r.k < 2 * m + 1)
      throw std::invalid_argument("recode_potential: need k >= 2m+1");
    for (int z = 0; z < Z.size(); ++z) {
      const auto& b = r.domain_blocks[z].syms;
      table[Z.name(z)] = f.value(std::span<const Symbol>(b.data(), 2 * m + 1));
    }
  }
  return LocallyConstantPotential::make(Z, 0, table, false);
}

}  // namespace relpress
