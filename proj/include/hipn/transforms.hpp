#pragma once

#include <hipn/net.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hipn {

// Affine marking map: each target place is a constant plus, optionally, the count of one source place.
struct PlaceMap {
    struct Entry {
        std::optional<PlaceId> source;
        Tokens constant = 0;
        bool operator==(const Entry&) const = default;
    };

    std::size_t source_places = 0;
    std::vector<Entry> entries;  // one per target place

    Marking apply(const Marking& m) const;
    // this, then `next`.
    PlaceMap then(const PlaceMap& next) const;
    bool is_injective() const;  // every source place is copied somewhere
};

struct QueryRewrite {
    std::string text;
    std::vector<Marking> markings;  // concrete target-net markings mentioned by `text`
};

struct TransformResult {
    Net net;
    PlaceMap forward_map;
    // Second correspondence used by transfer_hierarchize (the other representative mode).
    std::optional<PlaceMap> alternate_map;
    QueryRewrite query;
    std::vector<std::string> place_origin;
    std::vector<std::string> transition_origin;
};

// Replaces the first transition with reset arcs by a start/drain/finish gadget.
TransformResult hir_elim(const Net& net);
// Same for the first transition with reset or (constrained) transfer arcs.
TransformResult hirct_elim(const Net& net);
// Applies hirct_elim until no reset or transfer arc is left; maps are composed.
TransformResult eliminate_resets(const Net& net);

struct DeadlockLiteral {
    PlaceId place;
    // Exact count when set, otherwise "at least one token".
    std::optional<Tokens> exact;
    bool operator==(const DeadlockLiteral&) const = default;
    auto operator<=>(const DeadlockLiteral& o) const
    {
        if (place != o.place) return place <=> o.place;
        if (exact.has_value() != o.exact.has_value()) return exact.has_value() <=> o.exact.has_value();
        if (!exact) return std::strong_ordering::equal;
        return *exact < *o.exact ? std::strong_ordering::less
                                 : (*exact == *o.exact ? std::strong_ordering::equal : std::strong_ordering::greater);
    }
};

// One conjunction of literals, at most one per place, sorted by place.
using DeadlockClause = std::vector<DeadlockLiteral>;

// Consistent clauses of the disjunctive form of "no transition is firable". Throws Error past `max_clauses`.
std::vector<DeadlockClause> deadlock_clauses(const Net& net, std::size_t max_clauses = 10'000);

TransformResult dlf_to_reach(const Net& net, std::size_t max_clauses = 10'000);
TransformResult reach_to_dlf(const Net& net, const Marking& target);
TransformResult two_inh_to_reset(const Net& net);

// Splits the second transfer transition when it also consumes from the first transfer's source.
TransformResult split_transfer_transition(const Net& net);
TransformResult transfer_hierarchize(const Net& net);

std::vector<std::string> transform_names();
// Dispatch by CLI name; `target` is required by reach-to-dlf.
TransformResult apply_transform(const std::string& name, const Net& net, const std::optional<Marking>& target);

// Sidecar listing: one line per target place.
std::string render_place_map(const Net& source, const TransformResult& result);

}  // namespace hipn
