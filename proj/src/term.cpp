#include "horsmc/term.hpp"

#include <deque>
#include <set>
#include <tuple>

#include "horsmc/error.hpp"

namespace horsmc {

const TermSource::Expansion& TermSource::force() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!memo_) {
    memo_ = step_();
    step_ = nullptr;  // release captured state
  }
  return *memo_;
}

SourcePtr TermSource::node(int label, std::vector<SourcePtr> children) {
  Expansion e{label, std::move(children)};
  return make([e]() { return e; });
}

PrefixTree expand_prefix(const SourcePtr& source, int depth) {
  if (depth < 0) throw Error("expand_prefix: negative depth");
  PrefixTree tree;
  // Breadth-first so node ids grow with depth.
  std::deque<std::pair<SourcePtr, int>> queue;  // (source, node id)
  tree.nodes.push_back({source->label(), 0, false, {}});
  queue.emplace_back(source, 0);
  while (!queue.empty()) {
    auto [src, id] = queue.front();
    queue.pop_front();
    int d = tree.nodes[id].depth;
    if (d == depth) continue;  // frontier: label only
    tree.nodes[id].expanded = true;
    int ar = src->arity();
    for (int i = 0; i < ar; ++i) {
      const SourcePtr& c = src->child(i);
      int cid = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back({c->label(), d + 1, false, {}});
      tree.nodes[id].children.push_back(cid);
      queue.emplace_back(c, cid);
    }
  }
  return tree;
}

bool PrefixTree::fully_expanded() const {
  for (const Node& n : nodes)
    if (!n.expanded) return false;
  return true;
}

namespace {

// True results may be reused across shared subtrees; false short-circuits to
// the top, so a stale "true" is never observed.
bool similar_rec(const TermSource* a, const TermSource* b, int k,
                 std::set<std::tuple<const TermSource*, const TermSource*, int>>& seen) {
  if (k <= 0) return true;
  if (a == b) return true;
  auto key = std::make_tuple(a, b, k);
  if (seen.count(key)) return true;
  if (a->label() != b->label()) return false;
  int ar = a->arity();
  if (ar != b->arity()) return false;
  for (int i = 0; i < ar; ++i)
    if (!similar_rec(a->child(i).get(), b->child(i).get(), k - 1, seen)) return false;
  seen.insert(key);
  return true;
}

}  // namespace

bool similar_up_to(const SourcePtr& a, const SourcePtr& b, int k) {
  std::set<std::tuple<const TermSource*, const TermSource*, int>> seen;
  return similar_rec(a.get(), b.get(), k, seen);
}

Projection Projection::make(RankedAlphabet from, RankedAlphabet to, std::vector<int> map) {
  if (static_cast<int>(map.size()) != from.size())
    throw Error("projection: map size does not match source alphabet");
  for (int f = 0; f < from.size(); ++f) {
    if (map[f] < 0 || map[f] >= to.size())
      throw Error("projection: image of '" + from.name(f) + "' is not in the target alphabet");
    if (to.arity(map[f]) != from.arity(f))
      throw Error("projection: arity of '" + from.name(f) + "' (" +
                  std::to_string(from.arity(f)) + ") differs from image '" +
                  to.name(map[f]) + "' (" + std::to_string(to.arity(map[f])) + ")");
  }
  Projection pi;
  pi.from = std::move(from);
  pi.to = std::move(to);
  pi.map = std::move(map);
  return pi;
}

Projection Projection::identity(const RankedAlphabet& alpha) {
  std::vector<int> map(alpha.size());
  for (int i = 0; i < alpha.size(); ++i) map[i] = i;
  return make(alpha, alpha, std::move(map));
}

namespace {

struct ProjectWrap {
  std::shared_ptr<const std::vector<int>> map;
  SourcePtr operator()(const SourcePtr& s) const {
    ProjectWrap self = *this;
    return TermSource::make([self, s]() {
      TermSource::Expansion e;
      e.label = (*self.map)[s->label()];
      int ar = s->arity();
      for (int i = 0; i < ar; ++i) e.children.push_back(self(s->child(i)));
      return e;
    });
  }
};

}  // namespace

SourcePtr project_term(const Projection& pi, const SourcePtr& source) {
  auto map = std::make_shared<const std::vector<int>>(pi.map);
  return ProjectWrap{map}(source);
}

namespace {

struct LassoMaker {
  std::shared_ptr<const std::pair<std::vector<int>, std::vector<int>>> spec;
  SourcePtr operator()(size_t i) const {
    LassoMaker self = *this;
    return TermSource::make([self, i]() {
      const auto& [u, v] = *self.spec;
      size_t next = i + 1;
      if (next >= u.size() + v.size()) next = u.size();
      int label = i < u.size() ? u[i] : v[i - u.size()];
      return TermSource::Expansion{label, {self(next)}};
    });
  }
};

}  // namespace

SourcePtr lasso_word(const RankedAlphabet& alpha, std::vector<int> u, std::vector<int> v) {
  if (v.empty()) throw Error("lasso_word: empty cycle");
  for (int s : u)
    if (alpha.arity(s) != 1) throw Error("lasso_word: symbol '" + alpha.name(s) + "' is not unary");
  for (int s : v)
    if (alpha.arity(s) != 1) throw Error("lasso_word: symbol '" + alpha.name(s) + "' is not unary");
  auto spec = std::make_shared<const std::pair<std::vector<int>, std::vector<int>>>(std::move(u),
                                                                                    std::move(v));
  return LassoMaker{spec}(0);
}

namespace {

void print_rec(const RankedAlphabet& alpha, const PrefixTree& tree, int id, std::string& out) {
  const PrefixTree::Node& n = tree.nodes[id];
  if (!n.expanded) {
    out += "...";
    return;
  }
  out += alpha.name(n.label);
  if (n.children.empty()) return;
  out += "(";
  for (size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ", ";
    print_rec(alpha, tree, n.children[i], out);
  }
  out += ")";
}

}  // namespace

std::string print_prefix(const RankedAlphabet& alpha, const PrefixTree& tree) {
  std::string out;
  if (tree.nodes.empty()) return out;
  print_rec(alpha, tree, tree.root(), out);
  return out;
}

void check_prefix_shape(const RankedAlphabet& alpha, const PrefixTree& tree) {
  for (const auto& n : tree.nodes) {
    if (n.label < 0 || n.label >= alpha.size()) throw Error("prefix: label out of range");
    if (n.expanded && static_cast<int>(n.children.size()) != alpha.arity(n.label))
      throw Error("prefix: node '" + alpha.name(n.label) + "' has " +
                  std::to_string(n.children.size()) + " children, arity is " +
                  std::to_string(alpha.arity(n.label)));
    if (!n.expanded && !n.children.empty()) throw Error("prefix: frontier node with children");
  }
}

}  // namespace horsmc
