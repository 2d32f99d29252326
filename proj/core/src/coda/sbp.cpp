#include "codafin/coda/sbp.hpp"

#include "codafin/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <set>

namespace codafin::coda {

namespace {

std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    // Appends nodes into `out` and returns the index of the parsed node.
    int node(std::vector<std::string>& labels, std::vector<std::array<int, 2>>& children,
             std::vector<std::string>& leaf_labels) {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const int id = static_cast<int>(children.size());
        children.push_back({-1, -1});
        leaf_labels.emplace_back();
        if (text_[pos_] == '(') {
            ++pos_;
            const int left = node(labels, children, leaf_labels);
            expect('|');
            const int right = node(labels, children, leaf_labels);
            expect(')');
            children[id] = {left, right};
            return id;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
        if (pos_ == start) fail(std::string("unexpected character '") + text_[pos_] + "'");
        leaf_labels[id] = std::string(text_.substr(start, pos_ - start));
        labels.push_back(leaf_labels[id]);
        return id;
    }

    void finish() {
        skip();
        if (pos_ != text_.size()) fail("trailing characters");
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    void expect(char c) {
        skip();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw StructuralError("SBP parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string Split::name() const { return join(numerator, ',') + "|" + join(denominator, ','); }

SbpTree SbpTree::parse(std::string_view text) {
    std::vector<std::string> labels;
    std::vector<std::array<int, 2>> children;
    std::vector<std::string> leaf_labels;
    Parser parser(text);
    parser.node(labels, children, leaf_labels);
    parser.finish();

    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) throw StructuralError("label '" + l + "' appears in more than one leaf");
    }
    if (labels.size() < 2) throw StructuralError("an SBP needs at least two parts");

    SbpTree tree;
    tree.nodes_.resize(children.size());
    for (std::size_t i = 0; i < children.size(); ++i) {
        tree.nodes_[i].left = children[i][0];
        tree.nodes_[i].right = children[i][1];
        tree.nodes_[i].label = leaf_labels[i];
    }
    tree.finalize();
    return tree;
}

SbpTree SbpTree::from_splits(const std::vector<std::string>& labels, std::vector<Split> splits) {
    std::set<std::string> all(labels.begin(), labels.end());
    if (all.size() != labels.size()) throw StructuralError("duplicate labels in SBP label set");
    if (labels.size() < 2) throw StructuralError("an SBP needs at least two parts");
    if (splits.size() != labels.size() - 1) {
        throw StructuralError("SBP over " + std::to_string(labels.size()) + " parts needs " +
                              std::to_string(labels.size() - 1) + " splits, got " +
                              std::to_string(splits.size()));
    }

    for (std::size_t k = 0; k < splits.size(); ++k) {
        const auto& s = splits[k];
        if (s.numerator.empty() || s.denominator.empty()) {
            throw StructuralError("split " + std::to_string(k) + " (" + s.name() + ") has an empty group");
        }
        std::set<std::string> members;
        for (const auto* group : {&s.numerator, &s.denominator}) {
            for (const auto& l : *group) {
                if (!all.count(l)) {
                    throw StructuralError("split " + std::to_string(k) + " (" + s.name() +
                                          ") uses unknown label '" + l + "'");
                }
                if (!members.insert(l).second) {
                    throw StructuralError("split " + std::to_string(k) + " (" + s.name() +
                                          ") has overlapping groups at label '" + l + "'");
                }
            }
        }
    }

    std::vector<bool> used(splits.size(), false);
    SbpTree tree;
    std::function<int(std::set<std::string>)> build = [&](std::set<std::string> group) -> int {
        const int id = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        if (group.size() == 1) {
            tree.nodes_[id].label = *group.begin();
            return id;
        }
        std::size_t match = splits.size();
        for (std::size_t k = 0; k < splits.size(); ++k) {
            if (used[k]) continue;
            std::set<std::string> u(splits[k].numerator.begin(), splits[k].numerator.end());
            u.insert(splits[k].denominator.begin(), splits[k].denominator.end());
            if (u == group) {
                match = k;
                break;
            }
        }
        if (match == splits.size()) {
            std::vector<std::string> g(group.begin(), group.end());
            throw StructuralError("no split divides the group {" + join(g, ',') + "}");
        }
        used[match] = true;
        const auto& s = splits[match];
        const int left = build({s.numerator.begin(), s.numerator.end()});
        const int right = build({s.denominator.begin(), s.denominator.end()});
        tree.nodes_[id].left = left;
        tree.nodes_[id].right = right;
        return id;
    };
    build(all);
    for (std::size_t k = 0; k < splits.size(); ++k) {
        if (!used[k]) {
            throw StructuralError("split " + std::to_string(k) + " (" + splits[k].name() +
                                  ") is not part of the partition hierarchy");
        }
    }
    tree.finalize();
    return tree;
}

void SbpTree::collect(int node, std::vector<std::string>& out) const {
    const auto& n = nodes_[node];
    if (n.left < 0) {
        out.push_back(n.label);
        return;
    }
    collect(n.left, out);
    collect(n.right, out);
}

void SbpTree::finalize() {
    labels_.clear();
    splits_.clear();
    collect(0, labels_);
    std::function<void(int)> visit = [&](int id) {
        const auto& n = nodes_[id];
        if (n.left < 0) return;
        Split s;
        collect(n.left, s.numerator);
        collect(n.right, s.denominator);
        splits_.push_back(std::move(s));
        visit(n.left);
        visit(n.right);
    };
    visit(0);
}

void SbpTree::render(int node, std::string& out) const {
    const auto& n = nodes_[node];
    if (n.left < 0) {
        out += n.label;
        return;
    }
    out += '(';
    render(n.left, out);
    out += " | ";
    render(n.right, out);
    out += ')';
}

std::string SbpTree::to_string() const {
    std::string out;
    render(0, out);
    return out;
}

void SbpTree::check_labels(const std::vector<std::string>& labels) const {
    std::set<std::string> given(labels.begin(), labels.end());
    for (std::size_t k = 0; k < splits_.size(); ++k) {
        for (const auto* group : {&splits_[k].numerator, &splits_[k].denominator}) {
            for (const auto& l : *group) {
                if (!given.count(l)) {
                    throw StructuralError("split " + std::to_string(k) + " (" + splits_[k].name() +
                                          ") uses label '" + l + "' absent from the composition");
                }
            }
        }
    }
    std::set<std::string> mine(labels_.begin(), labels_.end());
    for (const auto& l : labels) {
        if (!mine.count(l)) throw StructuralError("label '" + l + "' is not covered by the SBP");
    }
    if (labels.size() != labels_.size()) throw StructuralError("label list contains duplicates");
}

}  // namespace codafin::coda
