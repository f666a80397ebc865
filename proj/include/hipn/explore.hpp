#pragma once

#include <hipn/net.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hipn {

struct Trace {
    std::vector<TransitionId> transitions;
    std::vector<Marking> markings;  // one more than transitions

    const Marking& last() const { return markings.back(); }
    bool operator==(const Trace&) const = default;
};

struct SearchBudget {
    std::size_t max_steps = 1'000'000;  // node expansions
    std::optional<std::size_t> max_depth;
    // Successor computation of a frontier layer is split across this many workers.
    // Verdicts and traces do not depend on it.
    unsigned threads = 1;
};

enum class SearchVerdict { Found, NotFoundWithinBudget, ExhaustedStateSpace };

struct SearchResult {
    SearchVerdict verdict = SearchVerdict::NotFoundWithinBudget;
    std::optional<Trace> trace;  // set iff Found
    std::size_t expanded = 0;
    std::size_t visited = 0;
};

std::string_view verdict_name(SearchVerdict v);

// Replays `transitions` from `from`; nullopt when some step is not firable.
std::optional<Trace> replay(const Net& net, const Marking& from, std::span<const TransitionId> transitions);
bool verify_trace(const Net& net, const Trace& trace);

// Breadth-first searches from the initial marking, or from `from`.
SearchResult bounded_reach(const Net& net, const Marking& target, const SearchBudget& budget = {});
SearchResult bounded_reach(const Net& net, const Marking& from, const Marking& target, const SearchBudget& budget);
SearchResult bounded_cover(const Net& net, const Marking& target, const SearchBudget& budget = {});
SearchResult bounded_cover(const Net& net, const Marking& from, const Marking& target, const SearchBudget& budget);
SearchResult bounded_deadlock(const Net& net, const SearchBudget& budget = {});
SearchResult bounded_deadlock(const Net& net, const Marking& from, const SearchBudget& budget);

// Generic form: first marking (in breadth-first order) satisfying `goal`.
SearchResult bounded_search(const Net& net, const Marking& from, const std::function<bool(const Marking&)>& goal,
                            const SearchBudget& budget);

struct ReachableSet {
    std::vector<Marking> markings;  // breadth-first discovery order, starting marking first
    bool complete = false;          // false when the budget stopped enumeration
};

ReachableSet enumerate_reachable(const Net& net, const Marking& from, const SearchBudget& budget = {});

// One transition name per line.
std::string trace_to_text(const Net& net, const Trace& trace);
std::vector<TransitionId> parse_trace(const Net& net, std::string_view text, const std::string& file = "<trace>");

class UpwardClosedSet {
public:
    UpwardClosedSet() = default;

    bool contains(const Marking& m) const;
    // Adds m unless already covered; drops basis elements above m. Returns whether m was added.
    bool insert(const Marking& m);
    const std::vector<Marking>& basis() const { return basis_; }
    bool is_antichain() const;

private:
    std::vector<Marking> basis_;
};

enum class CoverVerdict { Coverable, NotCoverable };

// Exact coverability for nets without inhibitor arcs; throws Error otherwise.
CoverVerdict backward_cover(const Net& net, const Marking& target);

// Minimal predecessors of the upward closure of `m` through transition `t`.
std::vector<Marking> minimal_predecessors(const Net& net, TransitionId t, const Marking& m);

// The full set of markings from which `target` is coverable. `observer` sees the set after every insertion.
UpwardClosedSet backward_coverability_set(const Net& net, const Marking& target,
                                          const std::function<void(const UpwardClosedSet&)>& observer = {});

}  // namespace hipn
