// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference model: an uncompressed radix-16 tree built one nibble at
// a time, canonicalized on demand by compressing single-child runs. Shapes and
// depths derived here are compared against the production trie. Kept
// independent of the Trie implementation on purpose.
#pragma once

#include <mptlab/nibbles.hpp>
#include <mptlab/trie.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace mptlab::test
{
class NaiveRadix
{
public:
    void insert(const NibblePath& key, Bytes value)
    {
        RawNode* node = &root_;
        for (size_t i = 0; i < key.size(); ++i)
        {
            auto& child = node->children[key[i]];
            if (!child)
                child = std::make_unique<RawNode>();
            node = child.get();
        }
        node->value = std::move(value);
    }

    void erase(const NibblePath& key)
    {
        erase_rec(root_, key, 0);
    }

    struct Shape
    {
        TrieStats stats;
        // canonical layer and remainder length per leaf, keyed by indexing text
        std::map<std::string, size_t> leaf_depth;
        std::map<std::string, size_t> leaf_remainder;
    };

    Shape shape() const
    {
        Shape out;
        if (!root_.value && root_.child_count() == 0)
            return out;
        walk(root_, 0, 1, std::string{}, out);
        return out;
    }

private:
    struct RawNode
    {
        std::array<std::unique_ptr<RawNode>, 16> children;
        std::optional<Bytes> value;

        int child_count() const
        {
            int n = 0;
            for (const auto& c : children)
                n += c ? 1 : 0;
            return n;
        }
        int only_child() const
        {
            for (int i = 0; i < 16; ++i)
                if (children[i])
                    return i;
            return -1;
        }
    };

    static bool erase_rec(RawNode& node, const NibblePath& key, size_t pos)
    {
        if (pos == key.size())
        {
            node.value.reset();
        }
        else
        {
            auto& child = node.children[key[pos]];
            if (child && erase_rec(*child, key, pos + 1))
                child.reset();
        }
        return !node.value && node.child_count() == 0;
    }

    // run = nibbles accumulated since the last canonical node boundary
    static void walk(const RawNode& node, size_t run, size_t layer, const std::string& key_prefix,
        Shape& out)
    {
        static constexpr char digits[] = "0123456789abcdef";
        if (node.value)
        {
            ++out.stats.leaves;
            out.leaf_depth[key_prefix] = layer;
            out.leaf_remainder[key_prefix] = run;
            return;
        }
        const int kids = node.child_count();
        if (kids == 1)
        {
            const int c = node.only_child();
            walk(*node.children[c], run + 1, layer, key_prefix + digits[c], out);
            return;
        }
        size_t branch_layer = layer;
        if (run > 0)
        {
            ++out.stats.extensions;
            ++branch_layer;
        }
        ++out.stats.branches;
        for (int i = 0; i < 16; ++i)
            if (node.children[i])
                walk(*node.children[i], 0, branch_layer + 1, key_prefix + digits[i], out);
    }

    RawNode root_;
};

}  // namespace mptlab::test
