#include "hwdb/facts.hpp"

#include <string>

namespace hwdb {

void FactStore::grow(NameId x) const {
    if (x < parent_.size()) return;
    auto old = parent_.size();
    parent_.resize(static_cast<std::size_t>(x) + 1);
    size_.resize(static_cast<std::size_t>(x) + 1, 1);
    for (auto i = old; i < parent_.size(); ++i) parent_[i] = static_cast<NameId>(i);
}

NameId FactStore::find(NameId x) const {
    if (x >= parent_.size()) return x;
    NameId root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
        NameId next = parent_[x];
        parent_[x] = root;
        x = next;
    }
    return root;
}

NameId FactStore::root(NameId x) const {
    if (x >= parent_.size()) return x;
    while (parent_[x] != x) x = parent_[x];
    return x;
}

Truth FactStore::status(NameId x, NameId y) const { return status_of_roots(x, y, find(x), find(y)); }

Truth FactStore::peek(NameId x, NameId y) const { return status_of_roots(x, y, root(x), root(y)); }

Truth FactStore::status_of_roots(NameId x, NameId y, NameId rx, NameId ry) const {
    if (x == y || rx == ry) return Truth::Yes;
    auto it = no_.find(rx);
    if (it != no_.end() && it->second.count(ry)) return Truth::No;
    return Truth::Unknown;
}

bool FactStore::set_yes(NameId x, NameId y) {
    Truth t = status(x, y);
    if (t == Truth::Yes) return false;
    if (t == Truth::No) throw InternalError("contradictory bisimulation facts for names " + std::to_string(x) + " and " + std::to_string(y));
    grow(std::max(x, y));
    NameId rx = find(x), ry = find(y);
    if (size_[rx] < size_[ry]) std::swap(rx, ry);
    parent_[ry] = rx;
    size_[rx] += size_[ry];
    ++merges_;
    auto it = no_.find(ry);
    if (it != no_.end()) {
        auto moved = std::move(it->second);
        no_.erase(it);
        auto& mine = no_[rx];
        for (NameId r : moved) {
            auto& theirs = no_[r];
            theirs.erase(ry);
            if (theirs.insert(rx).second) mine.insert(r);
            else --no_count_;
        }
    }
    if (on_fact) on_fact(x, y, true);
    return true;
}

bool FactStore::set_no(NameId x, NameId y) {
    Truth t = status(x, y);
    if (t == Truth::No) return false;
    if (t == Truth::Yes) throw InternalError("contradictory bisimulation facts for names " + std::to_string(x) + " and " + std::to_string(y));
    grow(std::max(x, y));
    NameId rx = find(x), ry = find(y);
    no_[rx].insert(ry);
    no_[ry].insert(rx);
    ++no_count_;
    if (on_fact) on_fact(x, y, false);
    return true;
}

}  // namespace hwdb
