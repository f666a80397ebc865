#include <hipn/explore.hpp>

#include <algorithm>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace hipn {

std::string_view verdict_name(SearchVerdict v)
{
    switch (v) {
    case SearchVerdict::Found: return "found";
    case SearchVerdict::NotFoundWithinBudget: return "not-found-within-budget";
    case SearchVerdict::ExhaustedStateSpace: return "exhausted-state-space";
    }
    return "unknown";
}

std::optional<Trace> replay(const Net& net, const Marking& from, std::span<const TransitionId> transitions)
{
    if (from.size() != net.place_count()) return std::nullopt;
    Trace trace;
    trace.markings.push_back(from);
    for (TransitionId t : transitions) {
        if (t >= net.transition_count()) return std::nullopt;
        const Transition& tr = net.transitions()[t];
        if (!detail::firable_unchecked(tr, trace.markings.back())) return std::nullopt;
        trace.markings.push_back(detail::fire_unchecked(tr, trace.markings.back()));
        trace.transitions.push_back(t);
    }
    return trace;
}

bool verify_trace(const Net& net, const Trace& trace)
{
    if (trace.markings.size() != trace.transitions.size() + 1) return false;
    auto again = replay(net, trace.markings.front(), trace.transitions);
    return again && *again == trace;
}

namespace {

struct Node {
    Marking marking;
    std::size_t parent;
    TransitionId via;
    std::size_t depth;
};

using Successors = std::vector<std::pair<TransitionId, Marking>>;

void expand_range(const Net& net, const std::vector<Node>& nodes, std::size_t begin, std::size_t end,
                  std::vector<Successors>& out, std::size_t out_offset)
{
    for (std::size_t i = begin; i < end; ++i) out[i - out_offset] = successors(net, nodes[i].marking);
}

Trace trace_to(const Net& net, const std::vector<Node>& nodes, std::size_t index)
{
    std::vector<TransitionId> path;
    for (std::size_t i = index; i != 0; i = nodes[i].parent) path.push_back(nodes[i].via);
    std::reverse(path.begin(), path.end());
    auto trace = replay(net, nodes[0].marking, path);
    if (!trace || trace->markings.back() != nodes[index].marking)
        throw Error("internal error: search witness does not replay");
    return *trace;
}

}  // namespace

SearchResult bounded_search(const Net& net, const Marking& from, const std::function<bool(const Marking&)>& goal,
                            const SearchBudget& budget)
{
    if (budget.max_steps == 0) throw Error("search budget must allow at least one expansion");
    if (from.size() != net.place_count()) throw Error("start marking has the wrong length");

    SearchResult result;
    std::vector<Node> nodes;
    std::unordered_map<Marking, std::size_t, MarkingHash> index;
    nodes.push_back({from, 0, 0, 0});
    index.emplace(from, 0);
    if (goal(from)) {
        result.verdict = SearchVerdict::Found;
        result.trace = trace_to(net, nodes, 0);
        result.visited = 1;
        return result;
    }

    const unsigned threads = std::max(1u, budget.threads);
    std::size_t layer_begin = 0;
    std::size_t layer_end = 1;
    bool truncated = false;
    std::vector<Successors> batch;

    while (layer_begin < layer_end) {
        if (budget.max_depth && nodes[layer_begin].depth >= *budget.max_depth) {
            truncated = true;
            break;
        }
        const std::size_t count = std::min(layer_end - layer_begin, budget.max_steps - result.expanded);
        if (count == 0) {
            truncated = true;
            break;
        }

        batch.assign(count, {});
        if (threads == 1 || count < 64) {
            expand_range(net, nodes, layer_begin, layer_begin + count, batch, layer_begin);
        } else {
            std::vector<std::thread> workers;
            const std::size_t chunk = (count + threads - 1) / threads;
            for (unsigned w = 0; w < threads; ++w) {
                std::size_t b = layer_begin + w * chunk;
                std::size_t e = std::min(layer_begin + count, b + chunk);
                if (b >= e) break;
                workers.emplace_back(expand_range, std::cref(net), std::cref(nodes), b, e, std::ref(batch),
                                     layer_begin);
            }
            for (auto& w : workers) w.join();
        }

        // Merging in node order makes the outcome identical to a sequential search.
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t parent = layer_begin + k;
            for (auto& [t, m] : batch[k]) {
                if (index.count(m)) continue;
                const std::size_t id = nodes.size();
                index.emplace(m, id);
                nodes.push_back({std::move(m), parent, t, nodes[parent].depth + 1});
                if (goal(nodes[id].marking)) {
                    result.expanded += k + 1;
                    result.visited = nodes.size();
                    result.verdict = SearchVerdict::Found;
                    result.trace = trace_to(net, nodes, id);
                    return result;
                }
            }
        }
        result.expanded += count;
        layer_begin += count;
        if (layer_begin == layer_end) layer_end = nodes.size();
    }

    result.visited = nodes.size();
    result.verdict = truncated ? SearchVerdict::NotFoundWithinBudget : SearchVerdict::ExhaustedStateSpace;
    return result;
}

namespace {

void check_target(const Net& net, const Marking& target)
{
    if (target.size() != net.place_count())
        throw Error("target marking has " + std::to_string(target.size()) + " entries for " +
                    std::to_string(net.place_count()) + " places");
}

}  // namespace

SearchResult bounded_reach(const Net& net, const Marking& target, const SearchBudget& budget)
{
    return bounded_reach(net, net.initial(), target, budget);
}

SearchResult bounded_reach(const Net& net, const Marking& from, const Marking& target, const SearchBudget& budget)
{
    check_target(net, target);
    return bounded_search(net, from, [&](const Marking& m) { return m == target; }, budget);
}

SearchResult bounded_cover(const Net& net, const Marking& target, const SearchBudget& budget)
{
    return bounded_cover(net, net.initial(), target, budget);
}

SearchResult bounded_cover(const Net& net, const Marking& from, const Marking& target, const SearchBudget& budget)
{
    check_target(net, target);
    return bounded_search(net, from, [&](const Marking& m) { return leq(target, m); }, budget);
}

SearchResult bounded_deadlock(const Net& net, const SearchBudget& budget)
{
    return bounded_deadlock(net, net.initial(), budget);
}

SearchResult bounded_deadlock(const Net& net, const Marking& from, const SearchBudget& budget)
{
    return bounded_search(net, from, [&](const Marking& m) { return is_deadlocked(net, m); }, budget);
}

ReachableSet enumerate_reachable(const Net& net, const Marking& from, const SearchBudget& budget)
{
    ReachableSet out;
    std::vector<Marking> seen;
    auto r = bounded_search(
        net, from,
        [&](const Marking& m) {
            seen.push_back(m);
            return false;
        },
        budget);
    out.markings = std::move(seen);
    out.complete = r.verdict == SearchVerdict::ExhaustedStateSpace;
    return out;
}

std::string trace_to_text(const Net& net, const Trace& trace)
{
    std::string out;
    for (TransitionId t : trace.transitions) out += net.transition(t).name + "\n";
    return out;
}

std::vector<TransitionId> parse_trace(const Net& net, std::string_view text, const std::string& file)
{
    std::vector<TransitionId> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b != std::string_view::npos) {
            std::size_t e = line.find_last_not_of(" \t\r");
            std::string name(line.substr(b, e - b + 1));
            auto t = net.find_transition(name);
            if (!t) throw ParseError(file, line_no, b + 1, "unknown transition '" + name + "'");
            out.push_back(*t);
        }
        start = end + 1;
    }
    return out;
}

}  // namespace hipn
