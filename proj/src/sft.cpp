#include "relpress/sft.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace relpress {

Sft Sft::make(const std::vector<std::string>& alphabet,
              const std::vector<std::pair<std::string, std::string>>& edges) {
  if (alphabet.empty()) throw std::invalid_argument("Sft: empty alphabet");
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i].empty()) throw std::invalid_argument("Sft: empty symbol name");
    if (!idx.emplace(alphabet[i], static_cast<int>(i)).second)
      throw std::invalid_argument("Sft: duplicate symbol '" + alphabet[i] + "'");
  }
  int n = static_cast<int>(alphabet.size());
  std::vector<char> adj(static_cast<std::size_t>(n) * n, 0);
  for (const auto& [u, v] : edges) {
    auto iu = idx.find(u), iv = idx.find(v);
    if (iu == idx.end() || iv == idx.end())
      throw std::invalid_argument("Sft: edge over unknown symbol " + u + "->" + v);
    adj[static_cast<std::size_t>(iu->second) * n + iv->second] = 1;
  }

  // Trim: repeatedly drop symbols with no successor or no predecessor.
  std::vector<char> alive(n, 1);
  std::vector<std::string> removed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      bool has_succ = false, has_pred = false;
      for (int b = 0; b < n; ++b) {
        if (alive[b] && adj[static_cast<std::size_t>(a) * n + b]) has_succ = true;
        if (alive[b] && adj[static_cast<std::size_t>(b) * n + a]) has_pred = true;
      }
      if (!has_succ || !has_pred) {
        alive[a] = 0;
        removed.push_back(alphabet[a]);
        changed = true;
      }
    }
  }

  Sft out;
  std::vector<int> remap(n, -1);
  for (int a = 0; a < n; ++a) {
    if (alive[a]) {
      remap[a] = static_cast<int>(out.names_.size());
      out.names_.push_back(alphabet[a]);
    }
  }
  if (out.names_.empty())
    throw std::invalid_argument("Sft: every symbol inessential (degenerate system)");
  int m = out.size();
  out.adj_.assign(static_cast<std::size_t>(m) * m, 0);
  out.succ_.resize(m);
  out.pred_.resize(m);
  for (int a = 0; a < n; ++a) {
    if (remap[a] < 0) continue;
    for (int b = 0; b < n; ++b) {
      if (remap[b] < 0 || !adj[static_cast<std::size_t>(a) * n + b]) continue;
      out.adj_[static_cast<std::size_t>(remap[a]) * m + remap[b]] = 1;
      out.succ_[remap[a]].push_back(remap[b]);
      out.pred_[remap[b]].push_back(remap[a]);
      ++out.edge_count_;
    }
  }
  out.removed_ = std::move(removed);
  return out;
}

Symbol Sft::index_of(const std::string& name) const {
  for (int a = 0; a < size(); ++a)
    if (names_[a] == name) return a;
  return -1;
}

bool Sft::valid_word(std::span<const Symbol> w) const {
  for (Symbol a : w)
    if (a < 0 || a >= size()) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!allowed(w[i], w[i + 1])) return false;
  return true;
}

bool Sft::irreducible() const {
  // Every ordered pair must be joined by a path with at least one edge.
  for (int s = 0; s < size(); ++s) {
    std::vector<char> seen(size(), 0);
    std::queue<int> q;
    for (Symbol b : succ_[s]) {
      if (!seen[b]) { seen[b] = 1; q.push(b); }
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (Symbol b : succ_[u])
        if (!seen[b]) { seen[b] = 1; q.push(b); }
    }
    for (int t = 0; t < size(); ++t)
      if (!seen[t]) return false;
  }
  return true;
}

std::vector<Word> Sft::blocks(int n, std::size_t cap) const {
  if (n < 1) throw std::invalid_argument("blocks: n must be >= 1");
  std::vector<Word> out;
  std::vector<Symbol> cur;
  cur.reserve(n);
  // Iterative DFS in declared symbol order yields lexicographic output.
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      if (out.size() >= cap) throw std::length_error("blocks: enumeration cap exceeded");
      out.emplace_back(cur);
      return;
    }
    if (depth == 0) {
      for (int a = 0; a < size(); ++a) {
        cur.push_back(a);
        self(self, 1);
        cur.pop_back();
      }
    } else {
      for (Symbol b : succ_[cur.back()]) {
        cur.push_back(b);
        self(self, depth + 1);
        cur.pop_back();
      }
    }
  };
  rec(rec, 0);
  return out;
}

std::string Sft::word_name(std::span<const Symbol> w) const {
  bool single = true;
  for (const auto& nm : names_)
    if (nm.size() != 1) single = false;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single && i > 0) out += ',';
    out += names_[w[i]];
  }
  return out;
}

Word Sft::parse_word(const std::string& text) const {
  bool single = true;
  for (const auto& nm : names_)
    if (nm.size() != 1) single = false;
  Word w;
  if (single) {
    for (char c : text) {
      if (c == ' ' || c == ',') continue;
      Symbol a = index_of(std::string(1, c));
      if (a < 0) throw std::invalid_argument("unknown symbol '" + std::string(1, c) + "'");
      w.syms.push_back(a);
    }
  } else {
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
      // allow whitespace separation inside comma tokens too
      std::istringstream ws(tok);
      std::string t;
      while (ws >> t) {
        Symbol a = index_of(t);
        if (a < 0) throw std::invalid_argument("unknown symbol '" + t + "'");
        w.syms.push_back(a);
      }
    }
  }
  return w;
}

FactorCode::FactorCode(Sft domain, const std::map<std::string, std::string>& symbol_map)
    : domain_(std::move(domain)) {
  map_.resize(domain_.size(), -1);
  // Image alphabet in order of first appearance over the domain order.
  std::vector<std::string> image_names;
  std::vector<int> image_of(domain_.size(), -1);
  for (int a = 0; a < domain_.size(); ++a) {
    auto it = symbol_map.find(domain_.name(a));
    if (it == symbol_map.end())
      throw std::invalid_argument("FactorCode: no image for symbol '" + domain_.name(a) + "'");
    int idx = -1;
    for (std::size_t j = 0; j < image_names.size(); ++j)
      if (image_names[j] == it->second) idx = static_cast<int>(j);
    if (idx < 0) {
      idx = static_cast<int>(image_names.size());
      image_names.push_back(it->second);
    }
    image_of[a] = idx;
  }
  std::vector<std::pair<std::string, std::string>> image_edges;
  std::set<std::pair<int, int>> seen;
  for (int a = 0; a < domain_.size(); ++a)
    for (Symbol b : domain_.successors(a))
      if (seen.emplace(image_of[a], image_of[b]).second)
        image_edges.emplace_back(image_names[image_of[a]], image_names[image_of[b]]);
  image_ = Sft::make(image_names, image_edges);
  // Trimming the image cannot drop anything: images of essential symbols
  // keep an essential edge on both sides.
  if (!image_.removed_symbols().empty())
    throw std::logic_error("FactorCode: image presentation lost symbols in trim");
  for (int a = 0; a < domain_.size(); ++a) {
    map_[a] = image_.index_of(image_names[image_of[a]]);
  }
  fibers_.resize(image_.size());
  for (int a = 0; a < domain_.size(); ++a) fibers_[map_[a]].push_back(a);
}

FactorCode FactorCode::identity(Sft domain) {
  std::map<std::string, std::string> id;
  for (const auto& nm : domain.names()) id[nm] = nm;
  return FactorCode(std::move(domain), id);
}

Word FactorCode::apply(std::span<const Symbol> w) const {
  Word out;
  out.syms.reserve(w.size());
  for (Symbol a : w) out.syms.push_back(map_[a]);
  return out;
}

std::vector<Word> FactorCode::preimage_blocks(std::span<const Symbol> v, std::size_t cap) const {
  for (Symbol s : v)
    if (s < 0 || s >= image_.size())
      throw std::invalid_argument("preimage_blocks: word over wrong alphabet");
  std::vector<Word> out;
  if (v.empty()) return out;
  std::vector<Symbol> cur;
  cur.reserve(v.size());
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == v.size()) {
      if (out.size() >= cap)
        throw std::length_error("preimage_blocks: enumeration cap exceeded");
      out.emplace_back(cur);
      return;
    }
    for (Symbol a : fibers_[v[depth]]) {
      if (depth > 0 && !domain_.allowed(cur.back(), a)) continue;
      cur.push_back(a);
      self(self, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

EventuallyPeriodicPoint::EventuallyPeriodicPoint(const Sft& presentation, Word left_tail,
                                                 Word center, Word right_tail, long anchor)
    : left_(std::move(left_tail)), center_(std::move(center)),
      right_(std::move(right_tail)), anchor_(anchor) {
  if (left_.empty() || right_.empty())
    throw std::invalid_argument("point: tails must be nonempty");
  auto check = [&](const Word& w, const char* what) {
    if (!presentation.valid_word(w.span()))
      throw std::invalid_argument(std::string("point: invalid word in ") + what);
  };
  check(left_, "left tail");
  check(right_, "right tail");
  if (!center_.empty()) check(center_, "center");
  auto edge = [&](Symbol a, Symbol b, const char* what) {
    if (!presentation.allowed(a, b))
      throw std::invalid_argument(std::string("point: disallowed junction at ") + what);
  };
  edge(left_.syms.back(), left_.syms.front(), "left tail cycle");
  edge(right_.syms.back(), right_.syms.front(), "right tail cycle");
  if (center_.empty()) {
    edge(left_.syms.back(), right_.syms.front(), "tail junction");
  } else {
    edge(left_.syms.back(), center_.syms.front(), "left/center junction");
    edge(center_.syms.back(), right_.syms.front(), "center/right junction");
  }
}

Symbol EventuallyPeriodicPoint::at(long i) const {
  if (i < anchor_) {
    long p = static_cast<long>(left_.size());
    long r = ((i - anchor_) % p + p) % p;
    return left_.syms[r];
  }
  long c = static_cast<long>(center_.size());
  if (i < anchor_ + c) return center_.syms[i - anchor_];
  long p = static_cast<long>(right_.size());
  return right_.syms[(i - anchor_ - c) % p];
}

Word EventuallyPeriodicPoint::window(long a, long b) const {
  if (a > b) throw std::invalid_argument("window: a must be <= b");
  Word w;
  w.offset = a;
  w.syms.reserve(static_cast<std::size_t>(b - a + 1));
  for (long i = a; i <= b; ++i) w.syms.push_back(at(i));
  return w;
}

namespace {

std::map<std::vector<Symbol>, Symbol> block_index(const Sft& s, const std::vector<Word>& blocks) {
  std::map<std::vector<Symbol>, Symbol> idx;
  for (std::size_t i = 0; i < blocks.size(); ++i) idx[blocks[i].syms] = static_cast<Symbol>(i);
  (void)s;
  return idx;
}

Word window_map(const std::map<std::vector<Symbol>, Symbol>& idx, std::span<const Symbol> w,
                int k, const char* what) {
  if (static_cast<int>(w.size()) < k)
    throw std::invalid_argument(std::string(what) + ": word shorter than block length");
  Word out;
  out.syms.reserve(w.size() - k + 1);
  for (std::size_t i = 0; i + k <= w.size(); ++i) {
    std::vector<Symbol> win(w.begin() + i, w.begin() + i + k);
    auto it = idx.find(win);
    if (it == idx.end())
      throw std::invalid_argument(std::string(what) + ": window is not an allowed block");
    out.syms.push_back(it->second);
  }
  return out;
}

}  // namespace

Word Recoding::domain_to_original(std::span<const Symbol> w) const {
  Word out;
  if (w.empty()) return out;
  out.syms = domain_blocks[w[0]].syms;
  for (std::size_t i = 1; i < w.size(); ++i)
    out.syms.push_back(domain_blocks[w[i]].syms.back());
  return out;
}

Word Recoding::image_to_original(std::span<const Symbol> w) const {
  Word out;
  if (w.empty()) return out;
  out.syms = image_blocks[w[0]].syms;
  for (std::size_t i = 1; i < w.size(); ++i)
    out.syms.push_back(image_blocks[w[i]].syms.back());
  return out;
}

Word Recoding::domain_from_original(std::span<const Symbol> w) const {
  return window_map(block_index(recoded.domain(), domain_blocks), w, k, "domain_from_original");
}

Word Recoding::image_from_original(std::span<const Symbol> w) const {
  return window_map(block_index(recoded.image(), image_blocks), w, k, "image_from_original");
}

Word Recoding::image_cycle_from_original(std::span<const Symbol> cycle) const {
  if (cycle.empty()) throw std::invalid_argument("image_cycle_from_original: empty cycle");
  auto idx = block_index(recoded.image(), image_blocks);
  Word out;
  std::size_t q = cycle.size();
  for (std::size_t i = 0; i < q; ++i) {
    std::vector<Symbol> win;
    for (int j = 0; j < k; ++j) win.push_back(cycle[(i + j) % q]);
    auto it = idx.find(win);
    if (it == idx.end())
      throw std::invalid_argument("image_cycle_from_original: cyclic window has no preimage block");
    out.syms.push_back(it->second);
  }
  return out;
}

Recoding higher_block_recode(const FactorCode& code, int k, std::size_t cap) {
  if (k < 1) throw std::invalid_argument("higher_block_recode: k must be >= 1");
  const Sft& X = code.domain();
  std::vector<Word> dom_blocks = X.blocks(k, cap);

  std::vector<std::string> names;
  names.reserve(dom_blocks.size());
  for (const auto& b : dom_blocks) names.push_back(X.word_name(b.span()));

  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::vector<Symbol>, int> idx;
  for (std::size_t i = 0; i < dom_blocks.size(); ++i) idx[dom_blocks[i].syms] = static_cast<int>(i);
  for (std::size_t i = 0; i < dom_blocks.size(); ++i) {
    const auto& u = dom_blocks[i].syms;
    for (Symbol a : X.successors(u.back())) {
      std::vector<Symbol> v(u.begin() + (k > 1 ? 1 : 0), u.end());
      if (k > 1) v.push_back(a); else v[0] = a;
      auto it = idx.find(v);
      if (it != idx.end()) edges.emplace_back(names[i], names[it->second]);
    }
  }
  Sft recoded_domain = Sft::make(names, edges);
  if (!recoded_domain.removed_symbols().empty())
    throw std::logic_error("higher_block_recode: recoded presentation lost symbols");

  // Image-side recoding: the symbol for an original k-block b is the image
  // k-block pi(b), so the recoded map stays a 1-block code.
  std::map<std::string, std::string> recoded_map;
  std::map<std::vector<Symbol>, Word> image_block_of;  // image k-word -> representative
  for (std::size_t i = 0; i < dom_blocks.size(); ++i) {
    Word img = code.apply(dom_blocks[i].span());
    recoded_map[names[i]] = code.image().word_name(img.span());
    image_block_of[img.syms] = img;
  }
  FactorCode recoded(std::move(recoded_domain), recoded_map);

  Recoding out{k, std::move(recoded), std::move(dom_blocks), {}};
  out.image_blocks.resize(out.recoded.image().size());
  for (auto& [syms, w] : image_block_of) {
    Symbol s = out.recoded.image().index_of(code.image().word_name(w.span()));
    if (s < 0) throw std::logic_error("higher_block_recode: image dictionary mismatch");
    out.image_blocks[s] = w;
  }
  return out;
}

}  // namespace relpress
