#include <hipn/explore.hpp>

#include <algorithm>
#include <deque>
#include <limits>

namespace hipn {

bool UpwardClosedSet::contains(const Marking& m) const
{
    for (const Marking& b : basis_)
        if (leq(b, m)) return true;
    return false;
}

bool UpwardClosedSet::insert(const Marking& m)
{
    if (contains(m)) return false;
    std::erase_if(basis_, [&](const Marking& b) { return leq(m, b); });
    basis_.push_back(m);
    return true;
}

bool UpwardClosedSet::is_antichain() const
{
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = 0; j < basis_.size(); ++j)
            if (i != j && leq(basis_[i], basis_[j])) return false;
    return true;
}

namespace {

void reject_inhibitors(const Net& net)
{
    for (const Transition& t : net.transitions())
        for (const PreArc& a : t.pre)
            if (std::holds_alternative<Inhibitor>(a.kind))
                throw Error("backward coverability needs a net without inhibitor arcs (transition '" + t.name + "')");
}

// All ways to write `total` as an ordered sum of `parts` non-negative integers.
void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& current,
                  std::vector<std::vector<std::size_t>>& out)
{
    if (parts == 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (std::size_t first = 0; first <= total; ++first) {
        current.push_back(first);
        compositions(total - first, parts - 1, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<Marking> minimal_predecessors(const Net& net, TransitionId t, const Marking& m)
{
    const Transition& tr = net.transition(t);
    const std::size_t n = net.place_count();

    // After the numeric phase a place's remaining count lands in its own place when it is
    // untouched, in its transfer target when it is a transfer source, and nowhere when reset.
    std::vector<std::vector<PlaceId>> feeders(n);
    std::vector<bool> kept(n, true);
    for (const PreArc& a : tr.pre) {
        if (const auto* x = std::get_if<Transfer>(&a.kind)) {
            kept[a.place] = false;
            feeders[x->target].push_back(a.place);
        } else if (std::holds_alternative<Reset>(a.kind)) {
            kept[a.place] = false;
        } else if (std::holds_alternative<Inhibitor>(a.kind)) {
            throw Error("minimal predecessors are undefined for inhibitor arcs");
        }
    }
    for (PlaceId p = 0; p < n; ++p)
        if (kept[p]) feeders[p].insert(feeders[p].begin(), p);

    Marking base(n);
    for (const PreArc& a : tr.pre)
        if (const auto* num = std::get_if<Numeric>(&a.kind)) base[a.place] = num->weight;

    // Per place: the alternative ways its residual demand is met by its feeders.
    std::vector<std::pair<const std::vector<PlaceId>*, std::vector<std::vector<std::size_t>>>> choices;
    for (PlaceId p = 0; p < n; ++p) {
        Tokens demand = m[p] - tr.post_weight(p);
        if (demand <= 0) continue;
        if (feeders[p].empty()) return {};
        if (demand > Tokens(std::numeric_limits<std::size_t>::max() / 2))
            throw Error("coverability demand too large to enumerate");
        std::vector<std::vector<std::size_t>> splits;
        std::vector<std::size_t> current;
        compositions(demand.convert_to<std::size_t>(), feeders[p].size(), current, splits);
        choices.emplace_back(&feeders[p], std::move(splits));
    }

    std::vector<Marking> out;
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
        Marking pred = base;
        for (std::size_t c = 0; c < choices.size(); ++c) {
            const auto& split = choices[c].second[pick[c]];
            const auto& places = *choices[c].first;
            for (std::size_t k = 0; k < places.size(); ++k) pred[places[k]] += split[k];
        }
        out.push_back(std::move(pred));
        std::size_t c = 0;
        while (c < choices.size() && ++pick[c] == choices[c].second.size()) pick[c++] = 0;
        if (c == choices.size()) break;
    }
    return out;
}

namespace {

UpwardClosedSet saturate(const Net& net, const Marking& target, const Marking* stop_at,
                         const std::function<void(const UpwardClosedSet&)>& observer)
{
    reject_inhibitors(net);
    if (target.size() != net.place_count()) throw Error("target marking has the wrong length");
    UpwardClosedSet set;
    set.insert(target);
    if (observer) observer(set);
    std::deque<Marking> work{target};
    while (!work.empty()) {
        if (stop_at && set.contains(*stop_at)) break;
        Marking m = std::move(work.front());
        work.pop_front();
        // Elements dropped from the basis are covered by a smaller one, whose predecessors suffice.
        if (std::find(set.basis().begin(), set.basis().end(), m) == set.basis().end()) continue;
        for (TransitionId t = 0; t < net.transition_count(); ++t) {
            for (Marking& pred : minimal_predecessors(net, t, m)) {
                if (set.insert(pred)) {
                    if (observer) observer(set);
                    work.push_back(std::move(pred));
                }
            }
        }
    }
    return set;
}

}  // namespace

CoverVerdict backward_cover(const Net& net, const Marking& target)
{
    auto set = saturate(net, target, &net.initial(), {});
    return set.contains(net.initial()) ? CoverVerdict::Coverable : CoverVerdict::NotCoverable;
}

UpwardClosedSet backward_coverability_set(const Net& net, const Marking& target,
                                          const std::function<void(const UpwardClosedSet&)>& observer)
{
    return saturate(net, target, nullptr, observer);
}

}  // namespace hipn
