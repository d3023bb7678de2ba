#include "mrigark/gark_expansion.hpp"

#include <set>
#include <stdexcept>

namespace mrigark {

namespace {

/// Multisets of trees (as index combinations with repetition) whose orders
/// sum to the requested total.
void child_multisets(const std::vector<ColoredTree>& pool, std::size_t first, int budget,
                     std::vector<ColoredTree>& current, std::vector<std::vector<ColoredTree>>& out)
{
    if (budget == 0) {
        out.push_back(current);
        return;
    }
    for (std::size_t i = first; i < pool.size(); ++i) {
        int o = pool[i].order();
        if (o > budget)
            continue;
        current.push_back(pool[i]);
        child_multisets(pool, i, budget - o, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<ColoredTree> colored_trees(int p)
{
    if (p < 1 || p > 4)
        throw std::invalid_argument("colored_trees: order must be in 1..4");

    std::vector<ColoredTree> all;
    std::set<std::string> seen;
    for (int n = 1; n <= p; ++n) {
        std::vector<std::vector<ColoredTree>> combos;
        std::vector<ColoredTree> scratch;
        child_multisets(all, 0, n - 1, scratch, combos);
        for (Color root : {Color::fast, Color::slow}) {
            for (const auto& children : combos) {
                ColoredTree t;
                t.color = root;
                t.children = children;
                if (seen.insert(t.signature()).second)
                    all.push_back(t);
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const ColoredTree& a, const ColoredTree& b) {
        int oa = a.order(), ob = b.order();
        if (oa != ob)
            return oa < ob;
        return a.signature() < b.signature();
    });
    return all;
}

} // namespace mrigark
