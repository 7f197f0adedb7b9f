#include "qlab/depth_engine.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qlab {

DepthEngine::DepthEngine(TruthTable f, int cap) : f_(std::move(f)), n_(f_.arity()) {
    if (cap < 0 || cap > kMaxArity) throw std::invalid_argument("DepthEngine: bad cap");
    if (n_ > cap)
        throw std::invalid_argument("DepthEngine: arity " + std::to_string(n_) +
                                    " above engine cap " + std::to_string(cap));
    if (f_.alphabet_size() > kUnsetValue)
        throw std::invalid_argument("DepthEngine: alphabet too large for the engine");
    full_mask_ = n_ == 32 ? ~0u : (1u << n_) - 1;
    pow3_.resize(static_cast<std::size_t>(n_) + 1);
    pow3_[0] = 1;
    for (int i = 1; i <= n_; ++i) pow3_[i] = pow3_[i - 1] * 3;
    value_.assign(pow3_[n_], kUnsetValue);
    depth_.assign(pow3_[n_], -1);
}

std::uint64_t DepthEngine::code_of(std::uint32_t free_mask, std::uint32_t bits) const {
    std::uint64_t code = 0;
    for (int p = 0; p < n_; ++p) {
        int digit = (free_mask >> p) & 1u ? 2 : static_cast<int>((bits >> p) & 1u);
        code += static_cast<std::uint64_t>(digit) * pow3_[p];
    }
    return code;
}

std::uint16_t DepthEngine::value_at(std::uint64_t code, std::uint32_t free_mask,
                                    std::uint32_t bits) {
    std::uint16_t cached = value_[code];
    if (cached != kUnsetValue) return cached;
    std::uint16_t res;
    if (free_mask == 0) {
        res = static_cast<std::uint16_t>(f_.value(bits));
    } else {
        // Constant iff both cofactors on one variable are constant and equal.
        int p = std::countr_zero(free_mask);
        std::uint32_t rest = free_mask & (free_mask - 1);
        std::uint16_t v0 = value_at(code - 2 * pow3_[p], rest, bits);
        std::uint16_t v1 = value_at(code - pow3_[p], rest, bits | (1u << p));
        res = (v0 != kNonConstant && v0 == v1) ? v0 : kNonConstant;
    }
    value_[code] = res;
    return res;
}

int DepthEngine::depth_at(std::uint64_t code, std::uint32_t free_mask, std::uint32_t bits) {
    std::int8_t cached = depth_[code];
    if (cached >= 0) return cached;
    int res = 0;
    if (value_at(code, free_mask, bits) == kNonConstant) {
        int best = n_ + 1;
        for (std::uint32_t m = free_mask; m != 0; m &= m - 1) {
            int p = std::countr_zero(m);
            std::uint32_t rest = free_mask & ~(1u << p);
            int d0 = depth_at(code - 2 * pow3_[p], rest, bits);
            int d1 = depth_at(code - pow3_[p], rest, bits | (1u << p));
            best = std::min(best, 1 + std::max(d0, d1));
            if (best == 1) break;  // a nonconstant function cannot do better
        }
        res = best;
    }
    depth_[code] = static_cast<std::int8_t>(res);
    return res;
}

int DepthEngine::depth() { return depth_at(pow3_[n_] - 1, full_mask_, 0); }

int DepthEngine::restricted_depth(std::uint32_t fixed_mask, std::uint32_t fixed_bits) {
    std::uint32_t free_mask = full_mask_ & ~fixed_mask;
    std::uint32_t bits = fixed_bits & fixed_mask;
    return depth_at(code_of(free_mask, bits), free_mask, bits);
}

bool DepthEngine::restricted_constant(std::uint32_t fixed_mask, std::uint32_t fixed_bits) {
    std::uint32_t free_mask = full_mask_ & ~fixed_mask;
    std::uint32_t bits = fixed_bits & fixed_mask;
    return value_at(code_of(free_mask, bits), free_mask, bits) != kNonConstant;
}

int DepthEngine::build_tree(std::uint64_t code, std::uint32_t free_mask, std::uint32_t bits,
                            DecisionTree::Builder& builder) {
    std::uint16_t v = value_at(code, free_mask, bits);
    if (v != kNonConstant) return builder.add_leaf(v);
    int target = depth_at(code, free_mask, bits);
    for (std::uint32_t m = free_mask; m != 0; m &= m - 1) {
        int p = std::countr_zero(m);
        std::uint32_t rest = free_mask & ~(1u << p);
        std::uint64_t c0 = code - 2 * pow3_[p];
        std::uint64_t c1 = code - pow3_[p];
        int d0 = depth_at(c0, rest, bits);
        int d1 = depth_at(c1, rest, bits | (1u << p));
        if (1 + std::max(d0, d1) == target) {
            int left = build_tree(c0, rest, bits, builder);
            int right = build_tree(c1, rest, bits | (1u << p), builder);
            return builder.add_node(p + 1, left, right);
        }
    }
    throw std::logic_error("DepthEngine: no query achieves the computed depth");
}

DecisionTree DepthEngine::optimal_tree() {
    DecisionTree::Builder builder(n_, f_.alphabet_size());
    int root = build_tree(pow3_[n_] - 1, full_mask_, 0, builder);
    return builder.finish(root);
}

int depth(const TruthTable& f, int cap) { return DepthEngine(f, cap).depth(); }

DecisionTree optimal_tree(const TruthTable& f, int cap) {
    return DepthEngine(f, cap).optimal_tree();
}

CostTable multitask_cost(const FunctionFamily& family, int cap) {
    if (family.size() > 8)
        throw std::invalid_argument("multitask_cost: more than 8 members");
    CostTable table;
    table.l = family.size();
    table.values.assign(std::size_t(1) << table.l, 0);
    for (std::uint32_t select = 1; select < table.selector_count(); ++select)
        table.values[select] = DepthEngine(family.bundle(select), cap).depth();
    return table;
}

namespace {

class GreedyDepthAdversary final : public AdversaryStrategy {
public:
    explicit GreedyDepthAdversary(std::shared_ptr<DepthEngine> engine)
        : engine_(std::move(engine)) {}

    int answer(const Transcript& transcript, int query) const override {
        std::uint32_t mask = 0, bits = 0;
        for (const QueryRecord& r : transcript) {
            mask |= 1u << (r.index - 1);
            if (r.bit) bits |= 1u << (r.index - 1);
        }
        std::uint32_t q = 1u << (query - 1);
        if (mask & q) throw std::invalid_argument("adversary: variable already fixed");
        int d0 = engine_->restricted_depth(mask | q, bits);
        int d1 = engine_->restricted_depth(mask | q, bits | q);
        return d1 > d0 ? 1 : 0;
    }

private:
    std::shared_ptr<DepthEngine> engine_;
};

}  // namespace

std::shared_ptr<AdversaryStrategy> extract_adversary(const TruthTable& f, int cap) {
    auto engine = std::make_shared<DepthEngine>(f, cap);
    if (engine->depth() < 1)
        throw std::invalid_argument("extract_adversary: function is constant");
    return std::make_shared<GreedyDepthAdversary>(std::move(engine));
}

}  // namespace qlab
