#include "transforms/draft.hpp"

#include <map>

namespace hipn {

namespace {

struct TransferCensus {
    TransitionId first_t;
    PlaceId first_from, first_to;
    TransitionId second_t;
    PlaceId second_from, second_to;
};

TransferCensus transfer_census(const Net& net)
{
    if (has_errors(validate(net))) throw Error("cannot transform an invalid net");
    std::vector<std::tuple<TransitionId, PlaceId, PlaceId>> transfers;
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        for (const PreArc& a : net.transitions()[t].pre) {
            if (const auto* x = std::get_if<Transfer>(&a.kind)) transfers.emplace_back(t, a.place, x->target);
            else if (!std::holds_alternative<Numeric>(a.kind))
                throw Error("expected only numeric and transfer arcs, found another special arc on '" +
                            net.transitions()[t].name + "'");
        }
    }
    if (transfers.size() != 2)
        throw Error("expected exactly two transfer arcs, found " + std::to_string(transfers.size()));
    TransferCensus c;
    std::tie(c.first_t, c.first_from, c.first_to) = transfers[0];
    std::tie(c.second_t, c.second_from, c.second_to) = transfers[1];
    if (c.first_t == c.second_t) throw Error("the two transfer arcs must belong to different transitions");
    if (c.first_from == c.first_to || c.second_from == c.second_to) throw Error("self-transfers are not supported");
    if (c.second_from == c.first_from || c.second_to == c.first_from)
        throw Error("the second transfer must not touch the first transfer's source");
    return c;
}

// Rewrites "source ..." origins of `step` through the origins recorded in `before`.
void carry_origins(const TransformResult& before, TransformResult& step)
{
    std::map<std::string, std::string> places, transitions;
    for (std::size_t p = 0; p < before.net.place_count(); ++p)
        places["source place " + before.net.place_name(p)] = before.place_origin[p];
    for (std::size_t t = 0; t < before.net.transition_count(); ++t)
        transitions["source transition " + before.net.transitions()[t].name] = before.transition_origin[t];
    for (auto& o : step.place_origin)
        if (auto it = places.find(o); it != places.end()) o = it->second;
    for (auto& o : step.transition_origin)
        if (auto it = transitions.find(o); it != transitions.end()) o = it->second;
}

}  // namespace

TransformResult split_transfer_transition(const Net& net)
{
    const TransferCensus c = transfer_census(net);
    const Transition t2 = net.transitions()[c.second_t];
    if (!t2.find_pre(c.first_from))
        throw Error("transition '" + t2.name + "' does not consume from '" + net.place_name(c.first_from) + "'");
    const std::size_t n = net.place_count();

    detail::NetDraft d(net);
    const PlaceId free = d.add_place("split.free", 1, "held when no split step of " + t2.name + " is pending");
    const PlaceId mid = d.add_place("split.mid", 0, "held between the two halves of " + t2.name);
    d.remove_transition(c.second_t);
    for (TransitionId u = 0; u < d.transition_count(); ++u) {
        d.transition(u).add_pre(free, Numeric{1});
        d.transition(u).add_post(free, 1);
    }
    const TransitionId take = d.add_transition(t2.name + ".take", "numeric inputs of " + t2.name);
    const TransitionId move = d.add_transition(t2.name + ".move", "transfer and outputs of " + t2.name);
    for (const PreArc& a : t2.pre) {
        if (std::holds_alternative<Numeric>(a.kind)) d.transition(take).add_pre(a.place, a.kind);
        else d.transition(move).add_pre(a.place, a.kind);
    }
    d.transition(take).add_pre(free, Numeric{1});
    d.transition(take).add_post(mid, 1);
    d.transition(move).add_pre(mid, Numeric{1});
    for (const PostArc& a : t2.post) d.transition(move).add_post(a.place, a.weight);
    d.transition(move).add_post(free, 1);

    TransformResult r;
    r.net = d.build();
    r.place_origin = d.place_origin();
    r.transition_origin = d.transition_origin();
    r.forward_map = detail::extend_map(n, n + 2);
    r.forward_map.entries[free].constant = 1;
    r.query.text = "M is reachable in the source iff f(M) is reachable here; f copies every source place and sets "
                   "split.free=1, split.mid=0";
    return r;
}

TransformResult transfer_hierarchize(const Net& net)
{
    const TransferCensus c = transfer_census(net);
    if (net.transitions()[c.second_t].find_pre(c.first_from)) {
        TransformResult split = split_transfer_transition(net);
        TransformResult inner = transfer_hierarchize(split.net);
        carry_origins(split, inner);
        inner.forward_map = split.forward_map.then(inner.forward_map);
        inner.alternate_map = split.forward_map.then(*inner.alternate_map);
        return inner;
    }

    const std::size_t n = net.place_count();
    const PlaceId p1 = c.first_from;
    const PlaceId p2 = c.second_from;
    const std::string& p1name = net.place_name(p1);
    const TransitionId t1 = c.first_t;
    const TransitionId t2 = c.second_t;

    detail::NetDraft d(net);
    const PlaceId twin = d.add_place(p1name + "'", 0, "twin of " + p1name + " used while the twin is representative");
    const PlaceId rep_orig = d.add_place("rep." + p1name, 1, p1name + " is the representative");
    const PlaceId rep_twin = d.add_place("rep." + p1name + "'", 0, p1name + "' is the representative");

    auto touches_p1 = [&](const Transition& t) {
        if (t.find_pre(p1) || t.post_weight(p1) > 0) return true;
        for (const PreArc& a : t.pre)
            if (const auto* x = std::get_if<Transfer>(&a.kind); x && x->target == p1) return true;
        return false;
    };
    auto swap_p1 = [&](PlaceId p) { return p == p1 ? twin : p; };

    // Copies of the transitions around p1 that work on the twin instead.
    std::map<TransitionId, TransitionId> twin_of;
    for (TransitionId u = 0; u < net.transition_count(); ++u) {
        const Transition& orig = net.transitions()[u];
        if (u == t2 || !touches_p1(orig)) continue;
        const TransitionId copy = d.add_transition(orig.name + "'", "copy of " + orig.name + " acting on " + p1name + "'");
        Transition& ct = d.transition(copy);
        for (const PreArc& a : orig.pre) {
            ArcKind k = a.kind;
            if (auto* x = std::get_if<Transfer>(&k)) x->target = swap_p1(x->target);
            ct.add_pre(swap_p1(a.place), k);
        }
        for (const PostArc& a : orig.post) ct.add_post(swap_p1(a.place), a.weight);
        ct.add_pre(rep_twin, Numeric{1});
        ct.add_post(rep_twin, 1);
        d.transition(u).add_pre(rep_orig, Numeric{1});
        d.transition(u).add_post(rep_orig, 1);
        twin_of[u] = copy;
    }

    const PlaceId p3 = c.first_to;
    d.transition(t1).add_pre(twin, Transfer{p3});
    d.transition(twin_of.at(t1)).add_pre(p1, Transfer{p3});

    // t2 hands the representative role from p1 to the twin; its copy hands it back.
    const Transition orig_t2 = net.transitions()[t2];
    const TransitionId t2_back = d.add_transition(orig_t2.name + "'", "copy of " + orig_t2.name +
                                                                          " returning the role to " + p1name);
    {
        Transition& fwd = d.transition(t2);
        fwd.post.clear();
        for (const PostArc& a : orig_t2.post) fwd.add_post(swap_p1(a.place), a.weight);
        fwd.add_pre(rep_orig, Numeric{1});
        fwd.add_post(rep_twin, 1);
        fwd.add_pre(p1, Transfer{twin});
        fwd.add_pre(twin, Transfer{p1});
    }
    {
        Transition& back = d.transition(t2_back);
        for (const PreArc& a : orig_t2.pre) back.add_pre(a.place, a.kind);
        for (const PostArc& a : orig_t2.post) back.add_post(a.place, a.weight);
        back.add_pre(rep_twin, Numeric{1});
        back.add_post(rep_orig, 1);
        back.add_pre(p1, Transfer{twin});
        back.add_pre(twin, Transfer{p1});
    }

    // Hierarchy: p1, its twin, p2, then everything else in the previous order.
    const std::size_t total = d.place_count();
    std::vector<PlaceId> new_position(total);
    new_position[p1] = 0;
    new_position[twin] = 1;
    new_position[p2] = 2;
    std::size_t next = 3;
    for (PlaceId p = 0; p < total; ++p)
        if (p != p1 && p != twin && p != p2) new_position[p] = next++;
    d.permute_places(new_position);

    PlaceMap a = detail::extend_map(n, total);
    a.entries[rep_orig].constant = 1;
    PlaceMap b = detail::extend_map(n, total);
    b.entries[p1].source.reset();
    b.entries[twin].source = p1;
    b.entries[rep_twin].constant = 1;
    auto permute = [&](const PlaceMap& m) {
        PlaceMap out = m;
        for (PlaceId q = 0; q < total; ++q) out.entries[new_position[q]] = m.entries[q];
        return out;
    };

    TransformResult r;
    r.net = d.build();
    r.place_origin = d.place_origin();
    r.transition_origin = d.transition_origin();
    r.forward_map = permute(a);
    r.alternate_map = permute(b);
    r.query.text = "M is reachable in the source iff A(M) or B(M) is reachable here; A keeps " + p1name +
                   " as representative (rep." + p1name + "=1), B moves its count to " + p1name + "' (rep." + p1name +
                   "'=1)";
    return r;
}

}  // namespace hipn
