#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace influx {

using NodeId = std::uint32_t;

/// Sorted, duplicate-free set of node ids.
class NodeSet {
 public:
  NodeSet() = default;

  explicit NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  NodeSet(std::initializer_list<NodeId> ids)
      : NodeSet(std::vector<NodeId>(ids)) {}

  static NodeSet full(NodeId node_count) {
    std::vector<NodeId> ids(node_count);
    for (NodeId i = 0; i < node_count; ++i) ids[i] = i;
    NodeSet s;
    s.ids_ = std::move(ids);
    return s;
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  bool contains(NodeId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  /// Insert; no-op when already present.
  void insert(NodeId id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) ids_.insert(it, id);
  }

  const std::vector<NodeId>& ids() const { return ids_; }

  NodeId max_id() const {
    if (ids_.empty()) throw std::logic_error("NodeSet::max_id on empty set");
    return ids_.back();
  }

  bool operator==(const NodeSet& other) const = default;

  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

 private:
  std::vector<NodeId> ids_;
};

}  // namespace influx
