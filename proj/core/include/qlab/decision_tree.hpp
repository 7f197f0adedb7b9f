#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "json.hpp"
#include "qlab/truth_table.hpp"

namespace qlab {

struct QueryRecord {
    int index;  // 1-based variable index
    int bit;

    friend bool operator==(const QueryRecord& a, const QueryRecord& b) {
        return a.index == b.index && a.bit == b.bit;
    }
};

using Transcript = std::vector<QueryRecord>;

// A deterministic answer rule for input bits as they are queried. Answers
// may depend only on the transcript so far and the index being queried.
class AdversaryStrategy {
public:
    virtual ~AdversaryStrategy() = default;
    virtual int answer(const Transcript& transcript, int query) const = 0;
};

// Adaptive binary query tree. Internal nodes query a variable (1-based) and
// branch on its value; leaves carry an output label. On any root-to-leaf
// path no variable repeats.
class DecisionTree {
public:
    struct Node {
        int query = 0;  // 0 for leaves
        std::uint32_t label = 0;
        int child0 = -1;
        int child1 = -1;
        bool is_leaf() const { return query == 0; }
    };

    class Builder {
    public:
        Builder(int n, std::uint32_t alphabet) : n_(n), alphabet_(alphabet) {}
        int add_leaf(std::uint32_t label);
        int add_node(int query, int child0, int child1);
        DecisionTree finish(int root);

    private:
        int n_;
        std::uint32_t alphabet_;
        std::vector<Node> nodes_;
    };

    static DecisionTree leaf(int n, std::uint32_t alphabet, std::uint32_t label);

    int arity() const { return n_; }
    std::uint32_t alphabet_size() const { return alphabet_; }
    int root() const { return root_; }
    const Node& node(int i) const { return nodes_[i]; }
    std::size_t node_count() const { return nodes_.size(); }

    int depth() const;

    struct RunResult {
        std::uint32_t label;
        Transcript transcript;
    };
    RunResult run(std::uint64_t x) const;

    // Checks structural sanity plus the no-repeated-query path invariant.
    bool well_formed() const;

    // Nested form: {"q": i, "0": subtree, "1": subtree} / {"leaf": label}.
    nlohmann::json to_json() const;

private:
    DecisionTree(int n, std::uint32_t alphabet, std::vector<Node> nodes, int root)
        : n_(n), alphabet_(alphabet), nodes_(std::move(nodes)), root_(root) {}

    int n_;
    std::uint32_t alphabet_;
    std::vector<Node> nodes_;
    int root_;
};

DecisionTree::RunResult run_tree(const DecisionTree& tree, std::uint64_t x);

// Product of two trees over the same variables. Leaf labels are the pairs
// (label1, label2) encoded as label1 * alphabet2 + label2; queries already
// answered on the path are contracted instead of re-asked, so the result
// has depth at most depth(t1) + depth(t2).
DecisionTree compose_trees(const DecisionTree& t1, const DecisionTree& t2);

}  // namespace qlab
