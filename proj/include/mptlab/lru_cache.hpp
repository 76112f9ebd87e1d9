// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <list>
#include <unordered_map>

namespace mptlab
{
/// Bounded least-recently-used set modeling which trie nodes stay resident in
/// memory. Only occupancy is tracked; the caller counts misses and evictions.
template <typename Key, typename Hash>
class LruCache
{
public:
    struct Touch
    {
        bool miss = false;
        bool evicted = false;
    };

    explicit LruCache(size_t capacity) : capacity_{capacity} {}

    LruCache(const LruCache& other) : capacity_{other.capacity_} {}  // copies start cold
    LruCache& operator=(const LruCache& other)
    {
        capacity_ = other.capacity_;
        order_.clear();
        index_.clear();
        return *this;
    }

    Touch touch(const Key& key)
    {
        Touch result;
        const auto it = index_.find(key);
        if (it != index_.end())
        {
            order_.splice(order_.begin(), order_, it->second);
            return result;
        }
        result.miss = true;
        order_.push_front(key);
        index_[key] = order_.begin();
        if (order_.size() > capacity_)
        {
            index_.erase(order_.back());
            order_.pop_back();
            result.evicted = true;
        }
        return result;
    }

    size_t size() const { return order_.size(); }
    size_t capacity() const { return capacity_; }

private:
    size_t capacity_;
    std::list<Key> order_;
    std::unordered_map<Key, typename std::list<Key>::iterator, Hash> index_;
};

}  // namespace mptlab
