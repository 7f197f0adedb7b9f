#include "qlab/decision_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace qlab {

int DecisionTree::Builder::add_leaf(std::uint32_t label) {
    if (label >= alphabet_) throw std::invalid_argument("DecisionTree: leaf label out of alphabet");
    nodes_.push_back(Node{0, label, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
}

int DecisionTree::Builder::add_node(int query, int child0, int child1) {
    if (query < 1 || query > n_) throw std::invalid_argument("DecisionTree: query out of range");
    int count = static_cast<int>(nodes_.size());
    if (child0 < 0 || child0 >= count || child1 < 0 || child1 >= count)
        throw std::invalid_argument("DecisionTree: child index out of range");
    nodes_.push_back(Node{query, 0, child0, child1});
    return count;
}

DecisionTree DecisionTree::Builder::finish(int root) {
    if (root < 0 || root >= static_cast<int>(nodes_.size()))
        throw std::invalid_argument("DecisionTree: bad root");
    return DecisionTree(n_, alphabet_, std::move(nodes_), root);
}

DecisionTree DecisionTree::leaf(int n, std::uint32_t alphabet, std::uint32_t label) {
    Builder b(n, alphabet);
    int r = b.add_leaf(label);
    return b.finish(r);
}

int DecisionTree::depth() const {
    // Nodes are created bottom-up, so children precede parents.
    std::vector<int> d(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& u = nodes_[i];
        if (!u.is_leaf()) d[i] = 1 + std::max(d[u.child0], d[u.child1]);
    }
    return d[root_];
}

DecisionTree::RunResult DecisionTree::run(std::uint64_t x) const {
    RunResult res;
    int cur = root_;
    while (!nodes_[cur].is_leaf()) {
        const Node& u = nodes_[cur];
        int bit = static_cast<int>((x >> (u.query - 1)) & 1u);
        res.transcript.push_back(QueryRecord{u.query, bit});
        cur = bit ? u.child1 : u.child0;
    }
    res.label = nodes_[cur].label;
    return res;
}

bool DecisionTree::well_formed() const {
    std::vector<char> seen(static_cast<std::size_t>(n_) + 1, 0);
    auto rec = [&](auto&& self, int idx) -> bool {
        const Node& u = nodes_[idx];
        if (u.is_leaf()) return u.label < alphabet_;
        if (u.query < 1 || u.query > n_ || seen[u.query]) return false;
        seen[u.query] = 1;
        bool ok = self(self, u.child0) && self(self, u.child1);
        seen[u.query] = 0;
        return ok;
    };
    return rec(rec, root_);
}

nlohmann::json DecisionTree::to_json() const {
    auto rec = [&](auto&& self, int idx) -> nlohmann::json {
        const Node& u = nodes_[idx];
        if (u.is_leaf()) return {{"leaf", u.label}};
        return {{"q", u.query}, {"0", self(self, u.child0)}, {"1", self(self, u.child1)}};
    };
    return rec(rec, root_);
}

DecisionTree::RunResult run_tree(const DecisionTree& tree, std::uint64_t x) {
    return tree.run(x);
}

DecisionTree compose_trees(const DecisionTree& t1, const DecisionTree& t2) {
    if (t1.arity() != t2.arity())
        throw std::invalid_argument("compose_trees: trees must share a variable set");
    const int n = t1.arity();
    const std::uint32_t a2 = t2.alphabet_size();
    DecisionTree::Builder builder(n, t1.alphabet_size() * a2);
    std::vector<int> known(static_cast<std::size_t>(n) + 1, -1);  // -1 = unset

    // Walks t2 below a fixed t1 leaf, contracting queries answered on the
    // way down.
    auto rec2 = [&](auto&& self, int idx, std::uint32_t label1) -> int {
        const auto& u = t2.node(idx);
        if (u.is_leaf()) return builder.add_leaf(label1 * a2 + u.label);
        if (known[u.query] >= 0)
            return self(self, known[u.query] ? u.child1 : u.child0, label1);
        known[u.query] = 0;
        int c0 = self(self, u.child0, label1);
        known[u.query] = 1;
        int c1 = self(self, u.child1, label1);
        known[u.query] = -1;
        return builder.add_node(u.query, c0, c1);
    };
    auto rec1 = [&](auto&& self, int idx) -> int {
        const auto& u = t1.node(idx);
        if (u.is_leaf()) return rec2(rec2, t2.root(), u.label);
        known[u.query] = 0;
        int c0 = self(self, u.child0);
        known[u.query] = 1;
        int c1 = self(self, u.child1);
        known[u.query] = -1;
        return builder.add_node(u.query, c0, c1);
    };
    return builder.finish(rec1(rec1, t1.root()));
}

}  // namespace qlab
