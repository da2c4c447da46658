#include "relhyp/stallings.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace relhyp {

namespace {

// Union-find with per-root transition maps, used only while folding.
struct Folder {
  std::vector<int> parent;
  std::vector<std::map<int, int>> out;  // root -> (dir -> target vertex)

  int make() {
    parent.push_back(static_cast<int>(parent.size()));
    out.emplace_back();
    return parent.back();
  }

  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  // Identify targets reached by equal labels until deterministic.
  void add_edge(int u, int d, int v) {
    std::deque<std::tuple<int, int, int>> work;
    work.emplace_back(u, d, v);
    while (!work.empty()) {
      auto [a, dir, b] = work.front();
      work.pop_front();
      a = find(a);
      b = find(b);
      auto it = out[a].find(dir);
      if (it != out[a].end()) {
        int c = find(it->second);
        if (c != b) merge(c, b, work);
        continue;
      }
      out[a][dir] = b;
      // reverse direction
      a = find(a);
      b = find(b);
      auto jt = out[b].find(dir ^ 1);
      if (jt != out[b].end()) {
        int c = find(jt->second);
        if (c != a) merge(c, a, work);
      } else {
        out[b][dir ^ 1] = a;
      }
    }
  }

  void merge(int a, int b, std::deque<std::tuple<int, int, int>>& work) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (out[a].size() < out[b].size()) std::swap(a, b);
    parent[b] = a;
    for (auto& [dir, tgt] : out[b]) {
      auto it = out[a].find(dir);
      if (it == out[a].end())
        out[a][dir] = tgt;
      else if (find(it->second) != find(tgt))
        work.emplace_back(a, dir, find(tgt));
    }
    out[b].clear();
  }
};

}  // namespace

SubgroupGraph SubgroupGraph::fold(AlphabetPtr alpha, const std::vector<Word>& generators) {
  if (!alpha) fail(ErrorCode::Invalid, "fold without alphabet");
  Folder f;
  int base = f.make();
  for (const Word& g : generators) {
    if (g.alphabet() != alpha && !g.alphabet()->same(*alpha))
      fail(ErrorCode::Alphabet, "generator over a different alphabet");
    int cur = base;
    const auto& ls = g.letters();
    for (size_t i = 0; i < ls.size(); ++i) {
      int nxt = (i + 1 == ls.size()) ? base : f.make();
      f.add_edge(f.find(cur), dir_of(ls[i]), f.find(nxt));
      cur = f.find(nxt);
    }
  }

  // Collect folded transitions per root.
  base = f.find(base);
  std::map<int, std::map<int, int>> trans;
  for (int v = 0; v < static_cast<int>(f.parent.size()); ++v) {
    if (f.find(v) != v) continue;
    auto& row = trans[v];
    for (auto& [d, t] : f.out[v]) row[d] = f.find(t);
  }

  // Trim non-basepoint vertices of degree <= 1.
  std::map<int, int> degree;
  for (auto& [v, row] : trans) degree[v] = static_cast<int>(row.size());
  std::deque<int> dead;
  for (auto& [v, deg] : degree)
    if (v != base && deg <= 1) dead.push_back(v);
  while (!dead.empty()) {
    int v = dead.front();
    dead.pop_front();
    if (v == base || degree[v] > 1) continue;
    for (auto& [d, t] : trans[v]) {
      trans[t].erase(d ^ 1);
      if (--degree[t] <= 1 && t != base) dead.push_back(t);
    }
    trans.erase(v);
    degree.erase(v);
  }

  // Compact ids by shortlex BFS from the basepoint; this also fixes the
  // spanning tree and makes ids canonical for isomorphic graphs.
  const int dirs = 2 * alpha->rank();
  std::map<int, int> id;
  std::vector<int> order;
  id[base] = 0;
  order.push_back(base);
  std::vector<int> parent_vertex{-1}, parent_dir{-1};
  for (size_t head = 0; head < order.size(); ++head) {
    int v = order[head];
    for (int d = 0; d < dirs; ++d) {
      auto it = trans[v].find(d);
      if (it == trans[v].end()) continue;
      int t = it->second;
      if (!id.count(t)) {
        id[t] = static_cast<int>(order.size());
        order.push_back(t);
        parent_vertex.push_back(id[v]);
        parent_dir.push_back(d);
      }
    }
  }
  if (id.size() != trans.size())
    fail(ErrorCode::Construction, "folded graph is not connected");

  SubgroupGraph g;
  g.alpha_ = alpha;
  g.base_ = 0;
  size_t n = order.size();
  g.next_.assign(n, std::vector<int>(static_cast<size_t>(dirs), -1));
  g.basis_.assign(n, std::vector<int>(static_cast<size_t>(dirs), 0));
  for (size_t i = 0; i < n; ++i)
    for (auto& [d, t] : trans[order[i]]) g.next_[i][static_cast<size_t>(d)] = id[t];

  g.tree_word_.resize(n);
  g.tree_word_[0] = Word::empty(alpha);
  std::vector<char> is_tree_half(n * static_cast<size_t>(dirs), 0);
  for (size_t i = 1; i < n; ++i) {
    int pv = parent_vertex[i];
    int pd = parent_dir[i];
    g.tree_word_[i] = product(g.tree_word_[static_cast<size_t>(pv)],
                              single(alpha, pd / 2, (pd % 2) ? -1 : 1));
    is_tree_half[static_cast<size_t>(pv) * static_cast<size_t>(dirs) + static_cast<size_t>(pd)] = 1;
    is_tree_half[i * static_cast<size_t>(dirs) + static_cast<size_t>(pd ^ 1)] = 1;
  }

  // Non-tree edges become the free basis, in (vertex, dir) order.
  size_t edges = 0;
  std::vector<std::string> basis_names;
  for (size_t u = 0; u < n; ++u) {
    for (int d = 0; d < dirs; ++d) {
      int v = g.next_[u][static_cast<size_t>(d)];
      if (v < 0) continue;
      bool canonical = (static_cast<int>(u) < v) || (static_cast<int>(u) == v && d < (d ^ 1));
      if (!canonical) continue;
      ++edges;
      if (is_tree_half[u * static_cast<size_t>(dirs) + static_cast<size_t>(d)]) continue;
      int k = static_cast<int>(g.basis_words_.size());
      g.basis_[u][static_cast<size_t>(d)] = k + 1;
      g.basis_[static_cast<size_t>(v)][static_cast<size_t>(d ^ 1)] = -(k + 1);
      g.basis_words_.push_back(product({g.tree_word_[u], single(alpha, d / 2, (d % 2) ? -1 : 1),
                                        inverse(g.tree_word_[static_cast<size_t>(v)])}));
      basis_names.push_back("x" + std::to_string(k + 1));
    }
  }
  g.edge_count_ = edges;
  g.basis_alpha_ = make_alphabet(std::move(basis_names));
  return g;
}

std::pair<int, std::size_t> SubgroupGraph::trace(const Word& w) const {
  int v = base_;
  size_t used = 0;
  for (const Letter& l : w.letters()) {
    if (l.symbol >= alpha_->rank()) fail(ErrorCode::Alphabet, "letter outside subgroup alphabet");
    int t = next_[static_cast<size_t>(v)][static_cast<size_t>(dir_of(l))];
    if (t < 0) break;
    v = t;
    ++used;
  }
  return {v, used};
}

bool SubgroupGraph::member(const Word& w) const {
  auto [v, used] = trace(w);
  return used == w.size() && v == base_;
}

Word SubgroupGraph::schreier_rep(const Word& w) const {
  auto [v, used] = trace(w);
  std::vector<Letter> raw = tree_word_[static_cast<size_t>(v)].letters();
  raw.insert(raw.end(), w.letters().begin() + static_cast<std::ptrdiff_t>(used),
             w.letters().end());
  return Word::reduce(alpha_, std::move(raw));
}

Word SubgroupGraph::express_in_basis(const Word& w) const {
  if (!member(w)) fail(ErrorCode::Membership, "express_in_basis on a non-member");
  std::vector<Letter> raw;
  int v = base_;
  for (const Letter& l : w.letters()) {
    int d = dir_of(l);
    int mark = basis_[static_cast<size_t>(v)][static_cast<size_t>(d)];
    if (mark != 0) raw.push_back(Letter{std::abs(mark) - 1, mark > 0 ? 1 : -1});
    v = next_[static_cast<size_t>(v)][static_cast<size_t>(d)];
  }
  return Word::reduce(basis_alpha_, std::move(raw));
}

Word SubgroupGraph::basis_word(int i) const {
  if (i < 0 || i >= rank()) fail(ErrorCode::Invalid, "basis index out of range");
  return basis_words_[static_cast<size_t>(i)];
}

std::vector<Word> SubgroupGraph::enumerate_members(int max_len, std::size_t budget) const {
  std::vector<Word> out;
  if (max_len <= 0) return out;
  std::vector<Letter> path;
  const int dirs = 2 * alpha_->rank();
  // Iterative DFS over reduced paths from the basepoint.
  struct Frame {
    int vertex;
    int next_dir;
    int in_dir;  // -1 at root
  };
  std::vector<Frame> stack{{base_, 0, -1}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_dir >= dirs) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    int d = f.next_dir++;
    if (f.in_dir >= 0 && d == (f.in_dir ^ 1)) continue;  // keep words reduced
    int t = next_[static_cast<size_t>(f.vertex)][static_cast<size_t>(d)];
    if (t < 0) continue;
    path.push_back(letter_of_dir(d));
    if (t == base_) {
      out.push_back(Word::reduce(alpha_, path));
      if (out.size() > budget) fail(ErrorCode::Budget, "subgroup enumeration budget exceeded");
    }
    if (static_cast<int>(path.size()) < max_len) {
      stack.push_back({t, 0, d});
    } else {
      path.pop_back();
    }
  }
  std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    const auto& x = a.letters();
    const auto& y = b.letters();
    for (size_t i = 0; i < x.size(); ++i)
      if (dir_of(x[i]) != dir_of(y[i])) return dir_of(x[i]) < dir_of(y[i]);
    return false;
  });
  return out;
}

std::string SubgroupGraph::canonical_signature() const {
  std::ostringstream out;
  const int dirs = 2 * alpha_->rank();
  for (size_t v = 0; v < next_.size(); ++v)
    for (int d = 0; d < dirs; ++d)
      if (next_[v][static_cast<size_t>(d)] >= 0)
        out << v << ':' << d << ">" << next_[v][static_cast<size_t>(d)] << ';';
  return out.str();
}

}  // namespace relhyp
