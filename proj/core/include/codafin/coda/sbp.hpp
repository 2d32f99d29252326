#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace codafin::coda {

/// One internal node of a partition: the two label groups it contrasts.
struct Split {
    std::vector<std::string> numerator;
    std::vector<std::string> denominator;

    /// "STL|LTL,EQ"
    [[nodiscard]] std::string name() const;

    bool operator==(const Split&) const = default;
};

/**
 * @brief Sequential binary partition of D labelled parts into D-1 balances.
 *
 * Coordinates are numbered by pre-order traversal of the internal nodes,
 * so `((LTL | STL) | (FA | CA))` yields the root balance first, then the
 * liabilities split, then the assets split.
 *
 * Text form: a node is either a bare label or `(left | right)`; whitespace
 * is ignored. Labels are runs of [A-Za-z0-9_.-].
 */
class SbpTree {
public:
    /// @throws StructuralError with the offending position or label.
    static SbpTree parse(std::string_view text);

    /**
     * Build from an unordered list of splits over `labels`. Each split's
     * union must equal the root set or one still-unsplit child group of
     * another split; the result is stored in pre-order.
     *
     * @throws StructuralError naming the violating split.
     */
    static SbpTree from_splits(const std::vector<std::string>& labels, std::vector<Split> splits);

    /// Internal nodes in pre-order; splits()[k] defines coordinate k.
    [[nodiscard]] const std::vector<Split>& splits() const noexcept { return splits_; }

    /// Leaf labels in left-to-right order.
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

    [[nodiscard]] std::size_t parts() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t coordinates() const noexcept { return splits_.size(); }

    /// Canonical text form; parse(to_string()) reproduces the tree.
    [[nodiscard]] std::string to_string() const;

    /// @throws StructuralError naming the first split using a label absent from `labels`,
    ///         or the first of `labels` not covered by the tree.
    void check_labels(const std::vector<std::string>& labels) const;

    bool operator==(const SbpTree&) const = default;

private:
    SbpTree() = default;

    struct Node {
        std::string label;  // leaves only
        int left = -1;
        int right = -1;
        bool operator==(const Node&) const = default;
    };

    void finalize();
    void render(int node, std::string& out) const;
    void collect(int node, std::vector<std::string>& out) const;

    std::vector<Node> nodes_;  // nodes_[0] is the root
    std::vector<Split> splits_;
    std::vector<std::string> labels_;
};

}  // namespace codafin::coda
