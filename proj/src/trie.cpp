// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/trie.hpp>

#include <stdexcept>

namespace mptlab
{
namespace
{
void append_u16(Bytes& out, uint16_t v)
{
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void append_u32(Bytes& out, uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void append_path(Bytes& out, const NibblePath& path)
{
    out.push_back(static_cast<uint8_t>(path.size()));
    for (const auto n : path.nibbles())
        out.push_back(n);
}
}  // namespace

Bytes encode_node(const Node& node)
{
    Bytes out;
    switch (node.kind)
    {
    case NodeKind::Branch:
    {
        out.push_back(0x00);
        uint16_t mask = 0;
        for (int i = 0; i < 16; ++i)
            if (node.branch.children[i])
                mask = static_cast<uint16_t>(mask | (1u << i));
        append_u16(out, mask);
        for (int i = 0; i < 16; ++i)
            if (node.branch.children[i])
                out.insert(out.end(), node.branch.children[i]->begin(),
                    node.branch.children[i]->end());
        break;
    }
    case NodeKind::Extension:
        out.push_back(0x01);
        append_path(out, node.extension.prefix);
        out.insert(out.end(), node.extension.child.begin(), node.extension.child.end());
        break;
    case NodeKind::Leaf:
        out.push_back(0x02);
        append_path(out, node.leaf.remainder);
        append_u32(out, static_cast<uint32_t>(node.leaf.value.size()));
        out.insert(out.end(), node.leaf.value.begin(), node.leaf.value.end());
        break;
    }
    return out;
}

struct Trie::MutCtx
{
    size_t hashes = 0;
    SplitKind split = SplitKind::None;
    bool overwrote = false;
    std::vector<Digest> read_nodes;
    std::vector<Digest> written_nodes;
    std::vector<NibblePath> written_positions;
};

const Node& Trie::fetch(const Digest& digest) const
{
    const auto it = store_.find(digest);
    if (it == store_.end())
        throw std::logic_error{"dangling node reference"};
    return it->second;
}

Digest Trie::store_node(
    Node node, const NibblePath& position, const std::optional<Digest>& replaces, MutCtx& ctx)
{
    const Bytes encoded = encode_node(node);
    ++ctx.hashes;
    const Digest digest = keccak256(encoded);
    if (replaces && *replaces == digest)
        return digest;  // content unchanged
    store_.try_emplace(digest, std::move(node));
    ctx.written_nodes.push_back(digest);
    ctx.written_positions.push_back(position);
    return digest;
}

InsertReport Trie::insert(const NibblePath& indexing, Bytes value)
{
    if (indexing.size() != kFullIndexingLen)
        throw StructuralError{"indexing must be 64 nibbles"};
    if (value.empty())
        throw StructuralError{"leaf value must be non-empty"};

    MutCtx ctx;
    const TrieStats before = stats_;
    if (!root_)
    {
        ++stats_.leaves;
        root_ = store_node(Node::make_leaf(indexing, std::move(value)), NibblePath{}, std::nullopt, ctx);
    }
    else
    {
        Node top = insert_rec(*root_, indexing, 0, NibblePath{}, value, ctx);
        root_ = store_node(std::move(top), NibblePath{}, root_, ctx);
    }

    InsertReport report;
    report.created = stats_.total() - before.total();
    report.split_kind = ctx.split;
    report.overwrote = ctx.overwrote;
    report.hashes_computed = ctx.hashes;
    report.read_nodes = std::move(ctx.read_nodes);
    report.written_nodes = std::move(ctx.written_nodes);
    report.written_positions = std::move(ctx.written_positions);
    PathReport path;
    get(indexing, &path);
    report.depth_after = path.depth;
    return report;
}

Node Trie::insert_rec(const Digest& cur, const NibblePath& key, size_t pos,
    const NibblePath& position, const Bytes& value, MutCtx& ctx)
{
    const Node& node = fetch(cur);
    ctx.read_nodes.push_back(cur);

    switch (node.kind)
    {
    case NodeKind::Leaf:
    {
        const NibblePath tail = key.suffix(pos);
        const NibblePath& rem = node.leaf.remainder;
        if (rem.size() != tail.size())
            throw std::logic_error{"leaf remainder length mismatch"};
        const size_t shared_len = rem.common_prefix_len(tail);
        if (shared_len == rem.size())
        {
            ctx.overwrote = true;
            return Node::make_leaf(rem, value);
        }
        ctx.split = SplitKind::LeafSplit;
        const NibblePath shared = rem.slice(0, shared_len);
        const NibblePath branch_pos = position.concat(shared);
        BranchNode b;
        b.children[rem[shared_len]] =
            store_node(Node::make_leaf(rem.suffix(shared_len + 1), node.leaf.value),
                branch_pos.append(rem[shared_len]), std::nullopt, ctx);
        b.children[tail[shared_len]] =
            store_node(Node::make_leaf(tail.suffix(shared_len + 1), value),
                branch_pos.append(tail[shared_len]), std::nullopt, ctx);
        ++stats_.leaves;
        ++stats_.branches;
        if (shared_len == 0)
            return Node::make_branch(b);
        ++stats_.extensions;
        const Digest branch_digest = store_node(Node::make_branch(b), branch_pos, std::nullopt, ctx);
        return Node::make_extension(shared, branch_digest);
    }
    case NodeKind::Extension:
    {
        const NibblePath& prefix = node.extension.prefix;
        const size_t t = common_prefix_len(prefix, 0, key, pos);
        if (t == prefix.size())
        {
            const NibblePath child_pos = position.concat(prefix);
            Node child = insert_rec(node.extension.child, key, pos + t, child_pos, value, ctx);
            const Digest child_digest =
                store_node(std::move(child), child_pos, node.extension.child, ctx);
            return Node::make_extension(prefix, child_digest);
        }
        ctx.split = SplitKind::ExtensionSplit;
        const NibblePath head = prefix.slice(0, t);
        const NibblePath branch_pos = position.concat(head);
        BranchNode b;
        size_t ext_pieces = 0;
        if (prefix.size() - t - 1 > 0)
        {
            b.children[prefix[t]] =
                store_node(Node::make_extension(prefix.suffix(t + 1), node.extension.child),
                    branch_pos.append(prefix[t]), std::nullopt, ctx);
            ++ext_pieces;
        }
        else
        {
            b.children[prefix[t]] = node.extension.child;
        }
        b.children[key[pos + t]] = store_node(Node::make_leaf(key.suffix(pos + t + 1), value),
            branch_pos.append(key[pos + t]), std::nullopt, ctx);
        ++stats_.leaves;
        ++stats_.branches;
        if (t > 0)
            ++ext_pieces;
        stats_.extensions = stats_.extensions + ext_pieces - 1;
        if (t == 0)
            return Node::make_branch(b);
        const Digest branch_digest = store_node(Node::make_branch(b), branch_pos, std::nullopt, ctx);
        return Node::make_extension(head, branch_digest);
    }
    case NodeKind::Branch:
    {
        const Nibble c = key[pos];
        BranchNode b = node.branch;
        const NibblePath child_pos = position.append(c);
        if (b.children[c])
        {
            Node child = insert_rec(*b.children[c], key, pos + 1, child_pos, value, ctx);
            b.children[c] = store_node(std::move(child), child_pos, b.children[c], ctx);
        }
        else
        {
            ++stats_.leaves;
            b.children[c] = store_node(
                Node::make_leaf(key.suffix(pos + 1), value), child_pos, std::nullopt, ctx);
        }
        return Node::make_branch(b);
    }
    }
    throw std::logic_error{"unreachable"};
}

DeleteReport Trie::erase(const NibblePath& indexing)
{
    if (indexing.size() != kFullIndexingLen)
        throw StructuralError{"indexing must be 64 nibbles"};
    if (!root_)
        throw NotFoundError{"key not found in empty trie"};

    MutCtx ctx;
    const TrieStats before = stats_;
    auto replacement = erase_rec(*root_, indexing, 0, NibblePath{}, ctx);
    if (replacement)
        root_ = store_node(std::move(*replacement), NibblePath{}, root_, ctx);
    else
        root_.reset();

    DeleteReport report;
    report.removed = 1;
    report.collapsed = before.total() - stats_.total() - 1;
    report.hashes_computed = ctx.hashes;
    report.read_nodes = std::move(ctx.read_nodes);
    report.written_nodes = std::move(ctx.written_nodes);
    report.written_positions = std::move(ctx.written_positions);
    return report;
}

std::optional<Node> Trie::erase_rec(
    const Digest& cur, const NibblePath& key, size_t pos, const NibblePath& position, MutCtx& ctx)
{
    const Node& node = fetch(cur);
    ctx.read_nodes.push_back(cur);

    switch (node.kind)
    {
    case NodeKind::Leaf:
        if (node.leaf.remainder == key.suffix(pos))
        {
            --stats_.leaves;
            return std::nullopt;
        }
        throw NotFoundError{"key not found"};
    case NodeKind::Extension:
    {
        const NibblePath& prefix = node.extension.prefix;
        if (common_prefix_len(prefix, 0, key, pos) != prefix.size())
            throw NotFoundError{"key not found"};
        const NibblePath child_pos = position.concat(prefix);
        auto r = erase_rec(node.extension.child, key, pos + prefix.size(), child_pos, ctx);
        if (!r)
            throw std::logic_error{"extension child cannot vanish"};
        switch (r->kind)
        {
        case NodeKind::Branch:
        {
            const Digest d = store_node(std::move(*r), child_pos, node.extension.child, ctx);
            return Node::make_extension(prefix, d);
        }
        case NodeKind::Leaf:
            // extension + leaf fold into one leaf
            --stats_.extensions;
            return Node::make_leaf(prefix.concat(r->leaf.remainder), std::move(r->leaf.value));
        case NodeKind::Extension:
            // extension chains merge
            --stats_.extensions;
            return Node::make_extension(prefix.concat(r->extension.prefix), r->extension.child);
        }
        throw std::logic_error{"unreachable"};
    }
    case NodeKind::Branch:
    {
        const Nibble c = key[pos];
        if (!node.branch.children[c])
            throw NotFoundError{"key not found"};
        const NibblePath child_pos = position.append(c);
        auto r = erase_rec(*node.branch.children[c], key, pos + 1, child_pos, ctx);
        BranchNode b = node.branch;
        if (r)
        {
            b.children[c] = store_node(std::move(*r), child_pos, b.children[c], ctx);
            return Node::make_branch(b);
        }
        b.children[c].reset();
        if (b.child_count() >= 2)
            return Node::make_branch(b);

        // single-child branch collapses into its survivor
        --stats_.branches;
        Nibble survivor = 0;
        for (int i = 0; i < 16; ++i)
            if (b.children[i])
                survivor = static_cast<Nibble>(i);
        const Digest survivor_digest = *b.children[survivor];
        const Node& survivor_node = fetch(survivor_digest);
        ctx.read_nodes.push_back(survivor_digest);
        const NibblePath hop{std::vector<Nibble>{survivor}};
        switch (survivor_node.kind)
        {
        case NodeKind::Leaf:
            return Node::make_leaf(
                hop.concat(survivor_node.leaf.remainder), survivor_node.leaf.value);
        case NodeKind::Extension:
            return Node::make_extension(
                hop.concat(survivor_node.extension.prefix), survivor_node.extension.child);
        case NodeKind::Branch:
            ++stats_.extensions;
            return Node::make_extension(hop, survivor_digest);
        }
        throw std::logic_error{"unreachable"};
    }
    }
    throw std::logic_error{"unreachable"};
}

std::optional<Bytes> Trie::get(const NibblePath& indexing, PathReport* report) const
{
    if (indexing.size() != kFullIndexingLen)
        throw StructuralError{"indexing must be 64 nibbles"};
    PathReport local;
    PathReport& pr = report != nullptr ? *report : local;
    pr = PathReport{};
    if (!root_)
        return std::nullopt;

    Digest cur = *root_;
    size_t pos = 0;
    while (true)
    {
        const Node& node = fetch(cur);
        pr.visited.push_back(cur);
        pr.depth = pr.visited.size();
        switch (node.kind)
        {
        case NodeKind::Leaf:
            if (node.leaf.remainder == indexing.suffix(pos))
            {
                pr.unique_part_len = node.leaf.remainder.size();
                return node.leaf.value;
            }
            return std::nullopt;
        case NodeKind::Extension:
            if (common_prefix_len(node.extension.prefix, 0, indexing, pos) !=
                node.extension.prefix.size())
                return std::nullopt;
            pos += node.extension.prefix.size();
            cur = node.extension.child;
            break;
        case NodeKind::Branch:
            if (!node.branch.children[indexing[pos]])
                return std::nullopt;
            cur = *node.branch.children[indexing[pos]];
            ++pos;
            break;
        }
    }
}

std::vector<Digest> Trie::traverse_nodes(const NibblePath& leaf_indexing) const
{
    PathReport pr;
    if (!get(leaf_indexing, &pr))
        throw NotFoundError{"leaf not found: " + leaf_indexing.to_string()};
    return pr.visited;
}

size_t Trie::depth_of(const NibblePath& leaf_indexing) const
{
    PathReport pr;
    if (!get(leaf_indexing, &pr))
        throw NotFoundError{"leaf not found: " + leaf_indexing.to_string()};
    return pr.depth;
}

Digest Trie::root_commitment() const
{
    return root_ ? *root_ : keccak256_empty();
}

const Node* Trie::find_node(const Digest& digest) const
{
    const auto it = store_.find(digest);
    return it != store_.end() ? &it->second : nullptr;
}

void Trie::for_each_node(
    const std::function<void(const Digest&, const Node&, const NibblePath&, size_t)>& fn) const
{
    if (!root_)
        return;
    const std::function<void(const Digest&, const NibblePath&, size_t)> walk =
        [&](const Digest& digest, const NibblePath& position, size_t layer)
    {
        const Node& node = fetch(digest);
        fn(digest, node, position, layer);
        switch (node.kind)
        {
        case NodeKind::Leaf:
            break;
        case NodeKind::Extension:
            walk(node.extension.child, position.concat(node.extension.prefix), layer + 1);
            break;
        case NodeKind::Branch:
            for (int i = 0; i < 16; ++i)
                if (node.branch.children[i])
                    walk(*node.branch.children[i], position.append(static_cast<Nibble>(i)),
                        layer + 1);
            break;
        }
    };
    walk(*root_, NibblePath{}, 1);
}

TrieStats Trie::traversal_stats() const
{
    TrieStats stats;
    for_each_node(
        [&](const Digest&, const Node& node, const NibblePath&, size_t)
        {
            switch (node.kind)
            {
            case NodeKind::Branch:
                ++stats.branches;
                break;
            case NodeKind::Extension:
                ++stats.extensions;
                break;
            case NodeKind::Leaf:
                ++stats.leaves;
                break;
            }
        });
    return stats;
}

size_t Trie::reachable_encoded_size() const
{
    size_t total = 0;
    for_each_node([&](const Digest&, const Node& node, const NibblePath&, size_t)
        { total += encode_node(node).size(); });
    return total;
}

void Trie::check_canonical() const
{
    for_each_node(
        [&](const Digest& digest, const Node& node, const NibblePath& position, size_t)
        {
            if (keccak256(encode_node(node)) != digest)
                throw std::logic_error{"node content does not match its commitment"};
            switch (node.kind)
            {
            case NodeKind::Branch:
                if (node.branch.child_count() < 2)
                    throw std::logic_error{"branch with fewer than 2 children"};
                break;
            case NodeKind::Extension:
            {
                if (node.extension.prefix.empty())
                    throw std::logic_error{"empty extension prefix"};
                const Node* child = find_node(node.extension.child);
                if (child == nullptr || child->kind != NodeKind::Branch)
                    throw std::logic_error{"extension child is not a branch"};
                break;
            }
            case NodeKind::Leaf:
                if (position.size() + node.leaf.remainder.size() != kFullIndexingLen)
                    throw std::logic_error{"leaf does not reconstruct a full indexing"};
                break;
            }
        });
}

}  // namespace mptlab
