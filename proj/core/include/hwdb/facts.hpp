#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hwdb/equations.hpp"

namespace hwdb {

enum class Truth { Unknown, Yes, No };

// Resolved bisimulation facts. Yes-facts are kept as equivalence classes (union-find), so symmetry and
// transitivity hold by construction; No-facts are stored between class representatives.
class FactStore {
public:
    Truth status(NameId x, NameId y) const;
    // Same answer as status() but without path compression, so concurrent readers never write.
    Truth peek(NameId x, NameId y) const;
    bool is_yes(NameId x, NameId y) const { return status(x, y) == Truth::Yes; }
    bool is_no(NameId x, NameId y) const { return status(x, y) == Truth::No; }

    // Both return whether the store changed; contradicting an existing fact throws InternalError.
    bool set_yes(NameId x, NameId y);
    bool set_no(NameId x, NameId y);

    NameId find(NameId x) const;
    std::size_t yes_merges() const { return merges_; }
    std::size_t no_facts() const { return no_count_; }

    // Notified for every fact that changes the store.
    std::function<void(NameId, NameId, bool)> on_fact;

private:
    void grow(NameId x) const;
    NameId root(NameId x) const;
    Truth status_of_roots(NameId x, NameId y, NameId rx, NameId ry) const;

    mutable std::vector<NameId> parent_;
    mutable std::vector<std::uint32_t> size_;
    std::unordered_map<NameId, std::unordered_set<NameId>> no_;
    std::size_t merges_ = 0;
    std::size_t no_count_ = 0;
};

}  // namespace hwdb
