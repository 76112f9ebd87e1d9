// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/bytes.hpp>
#include <mptlab/keccak.hpp>
#include <mptlab/nibbles.hpp>

#include <array>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace mptlab
{
/// 16-way fork. Pointers are child commitments indexed by nibble; no value slot.
struct BranchNode
{
    std::array<std::optional<Digest>, 16> children;

    int child_count() const
    {
        int n = 0;
        for (const auto& c : children)
            n += c.has_value() ? 1 : 0;
        return n;
    }
};

/// Shared-prefix compressor. The prefix is never empty and the child is always a branch.
struct ExtensionNode
{
    NibblePath prefix;
    Digest child;
};

/// Value holder; remainder completes the 64-nibble indexing.
struct LeafNode
{
    NibblePath remainder;
    Bytes value;
};

enum class NodeKind
{
    Branch,
    Extension,
    Leaf,
};

struct Node
{
    NodeKind kind;
    BranchNode branch;       // valid when kind == Branch
    ExtensionNode extension; // valid when kind == Extension
    LeafNode leaf;           // valid when kind == Leaf

    static Node make_branch(BranchNode b)
    {
        Node n;
        n.kind = NodeKind::Branch;
        n.branch = std::move(b);
        return n;
    }
    static Node make_extension(NibblePath prefix, const Digest& child)
    {
        Node n;
        n.kind = NodeKind::Extension;
        n.extension = ExtensionNode{std::move(prefix), child};
        return n;
    }
    static Node make_leaf(NibblePath remainder, Bytes value)
    {
        Node n;
        n.kind = NodeKind::Leaf;
        n.leaf = LeafNode{std::move(remainder), std::move(value)};
        return n;
    }
};

/// Canonical length-prefixed node serialization fed to keccak256 for commitments.
Bytes encode_node(const Node& node);

enum class SplitKind
{
    None,
    LeafSplit,
    ExtensionSplit,
};

struct TrieStats
{
    size_t branches = 0;
    size_t extensions = 0;
    size_t leaves = 0;

    size_t total() const { return branches + extensions + leaves; }
    bool operator==(const TrieStats&) const = default;
};

struct InsertReport
{
    size_t created = 0;  // node-count growth caused by this insert
    SplitKind split_kind = SplitKind::None;
    size_t depth_after = 0;  // layer of the written leaf
    bool overwrote = false;
    size_t hashes_computed = 0;
    std::vector<Digest> read_nodes;
    std::vector<Digest> written_nodes;        // digests whose stored content changed
    std::vector<NibblePath> written_positions;  // tree positions of those nodes
};

struct DeleteReport
{
    size_t removed = 0;    // deleted leaves
    size_t collapsed = 0;  // extra nodes eliminated by canonicalization
    size_t hashes_computed = 0;
    std::vector<Digest> read_nodes;
    std::vector<Digest> written_nodes;
    std::vector<NibblePath> written_positions;
};

struct PathReport
{
    std::vector<Digest> visited;  // root -> terminal, every node touched
    size_t depth = 0;             // layer of the terminal node == visited count
    size_t unique_part_len = 0;   // n: leaf remainder length (0 on a miss)
    size_t full_len = kFullIndexingLen;  // m
};

/// In-memory Merkle Patricia Trie with content-addressed node storage.
///
/// Nodes are immutable once stored; mutations rebuild the affected path
/// bottom-up, so earlier roots stay resolvable (cheap logical snapshots).
class Trie
{
public:
    InsertReport insert(const NibblePath& indexing, Bytes value);

    /// Throws NotFoundError when the key is absent.
    DeleteReport erase(const NibblePath& indexing);

    std::optional<Bytes> get(const NibblePath& indexing, PathReport* report = nullptr) const;

    /// Root -> leaf node digests; throws NotFoundError when the leaf is absent.
    std::vector<Digest> traverse_nodes(const NibblePath& leaf_indexing) const;

    /// Layer of the leaf (root node is layer 1); throws NotFoundError when absent.
    size_t depth_of(const NibblePath& leaf_indexing) const;

    Digest root_commitment() const;

    bool empty() const { return !root_.has_value(); }
    const TrieStats& stats() const { return stats_; }

    const Node* find_node(const Digest& digest) const;

    /// Total bytes of encoded reachable nodes; stands in for persisted size.
    size_t reachable_encoded_size() const;

    /// Walks every reachable node; callback args: digest, node, position prefix, layer.
    void for_each_node(
        const std::function<void(const Digest&, const Node&, const NibblePath&, size_t)>& fn) const;

    /// Counts nodes by walking; used to cross-check the incremental stats.
    TrieStats traversal_stats() const;

    /// Verifies structural invariants (branch arity, extension shape, digest
    /// integrity, prefix reconstruction). Throws std::logic_error on violation.
    void check_canonical() const;

private:
    struct MutCtx;

    const Node& fetch(const Digest& digest) const;
    Digest store_node(Node node, const NibblePath& position, const std::optional<Digest>& replaces,
        MutCtx& ctx);

    Node insert_rec(const Digest& cur, const NibblePath& key, size_t pos,
        const NibblePath& position, const Bytes& value, MutCtx& ctx);
    std::optional<Node> erase_rec(const Digest& cur, const NibblePath& key, size_t pos,
        const NibblePath& position, MutCtx& ctx);

    std::optional<Digest> root_;
    std::unordered_map<Digest, Node, DigestHash> store_;
    TrieStats stats_;
};

}  // namespace mptlab
