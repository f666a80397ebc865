#pragma once

#include <hipn/explore.hpp>
#include <hipn/net.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hipn {

// Number of places at or below p; the least place has index 1.
std::size_t place_index(const Net& net, PlaceId p);
// Largest index among the inhibitor places of t, 0 without inhibitors.
std::size_t transition_index(const Net& net, TransitionId t);

// Equal counts on every place of index <= level.
bool compat(const Net& net, const Marking& m1, const Marking& m2, std::size_t level);

// `earlier` <= `later` and compat at the largest transition index in `rho`.
// Throws Error unless `rho` leads from `earlier` to `later`.
bool subsume(const Net& net, const Marking& earlier, const Marking& later, std::span<const TransitionId> rho);

struct Terminating {
    std::size_t tree_size = 0;
    std::size_t depth = 0;  // longest run
};

struct NonTerminating {
    Trace stem;  // initial marking to the subsuming ancestor
    Trace pump;  // ancestor to the subsumed leaf
};

using TermVerdict = std::variant<Terminating, NonTerminating>;

struct ErtOptions {
    std::size_t max_nodes = 1'000'000;
    // Explore children in a shuffled order instead of declaration order.
    std::optional<std::uint64_t> shuffle_seed;
};

// Throws Error when the net has transfer arcs or non-downward-closed inhibitor sets,
// BudgetExhausted when the tree outgrows max_nodes.
TermVerdict decide_termination(const Net& net, const ErtOptions& options = {});

// Replays stem and pump, checks the subsumption conditions, and pumps twice more.
bool verify_pump(const Net& net, const TermVerdict& verdict);

enum class ErtStatus { Interior, DeadlockLeaf, SubsumedLeaf };

struct ErtNode {
    Marking marking;
    std::optional<std::size_t> parent;
    std::optional<TransitionId> via;
    std::size_t depth = 0;
    ErtStatus status = ErtStatus::Interior;
    std::optional<std::size_t> subsumed_by;  // node id of the ancestor
};

struct ErtTree {
    std::vector<ErtNode> nodes;  // preorder, root first
};

// The complete tree, without stopping at the first subsumed leaf.
ErtTree build_ert(const Net& net, const ErtOptions& options = {});
std::string ert_to_dot(const Net& net, const ErtTree& tree);

// "TERMINATING" or "NON-TERMINATING" followed by stem and pump.
std::string verdict_to_text(const Net& net, const TermVerdict& verdict);

}  // namespace hipn
