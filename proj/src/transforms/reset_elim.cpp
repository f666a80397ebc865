#include "transforms/draft.hpp"

#include <map>

namespace hipn {

namespace {

bool eliminable(const Transition& t, bool with_transfers)
{
    for (const PreArc& a : t.pre) {
        if (std::holds_alternative<Reset>(a.kind)) return true;
        if (with_transfers && std::holds_alternative<Transfer>(a.kind)) return true;
    }
    return false;
}

TransformResult eliminate_one(const Net& net, bool with_transfers)
{
    const NetClass cls = classify(net);
    if (!with_transfers && cls.specials.transfer)
        throw Error("reset elimination does not accept transfer arcs; use the constrained-transfer variant");
    if (with_transfers && !cls.constrained_transfer)
        throw Error("a transfer arc targets a place with a special arc to the same transition");

    std::optional<TransitionId> chosen;
    for (TransitionId t = 0; t < net.transition_count() && !chosen; ++t)
        if (eliminable(net.transitions()[t], with_transfers)) chosen = t;
    if (!chosen)
        throw Error(with_transfers ? "no transition has reset or transfer arcs" : "no transition has reset arcs");

    const Transition t = net.transitions()[*chosen];
    const std::size_t n = net.place_count();
    detail::NetDraft d(net);

    const PlaceId busy = d.add_place(t.name + ".busy", 0, "marks that the replacement of " + t.name + " is running");
    const PlaceId idle = d.add_place(t.name + ".idle", 1, "marks that no replacement of " + t.name + " is running");

    d.remove_transition(*chosen);
    for (TransitionId u = 0; u < d.transition_count(); ++u) {
        d.transition(u).add_pre(idle, Numeric{1});
        d.transition(u).add_post(idle, 1);
    }

    const TransitionId start = d.add_transition(t.name + ".start", "consumes the numeric inputs of " + t.name);
    d.transition(start).add_pre(idle, Numeric{1});
    d.transition(start).add_post(busy, 1);

    std::vector<PlaceId> must_be_empty;
    for (const PreArc& a : t.pre) {
        const std::string& pname = net.place_name(a.place);
        if (const auto* num = std::get_if<Numeric>(&a.kind)) {
            d.transition(start).add_pre(a.place, *num);
        } else if (std::holds_alternative<Inhibitor>(a.kind)) {
            must_be_empty.push_back(a.place);
        } else if (std::holds_alternative<Reset>(a.kind)) {
            const TransitionId drain =
                d.add_transition(t.name + ".drain." + pname, "empties " + pname + " for " + t.name);
            d.transition(drain).add_pre(a.place, Numeric{1});
            d.transition(drain).add_pre(busy, Numeric{1});
            d.transition(drain).add_post(busy, 1);
            must_be_empty.push_back(a.place);
        } else {
            const PlaceId target = std::get<Transfer>(a.kind).target;
            const TransitionId move = d.add_transition(
                t.name + ".move." + pname, "moves " + pname + " to " + net.place_name(target) + " for " + t.name);
            d.transition(move).add_pre(a.place, Numeric{1});
            d.transition(move).add_pre(busy, Numeric{1});
            d.transition(move).add_post(busy, 1);
            d.transition(move).add_post(target, 1);
            must_be_empty.push_back(a.place);
        }
    }

    const TransitionId finish = d.add_transition(t.name + ".finish", "produces the outputs of " + t.name);
    d.transition(finish).add_pre(busy, Numeric{1});
    for (PlaceId p : must_be_empty) d.transition(finish).add_pre(p, Inhibitor{});
    for (const PostArc& a : t.post) d.transition(finish).add_post(a.place, a.weight);
    d.transition(finish).add_post(idle, 1);

    TransformResult r;
    r.net = d.build();
    r.place_origin = d.place_origin();
    r.transition_origin = d.transition_origin();
    r.forward_map = detail::extend_map(n, n + 2);
    r.forward_map.entries[idle].constant = 1;
    r.query.text = "M2 is reachable from M1 in the source iff f(M2) is reachable from f(M1) here; f copies every "
                   "source place and sets " + t.name + ".idle=1, " + t.name + ".busy=0";
    return r;
}

}  // namespace

TransformResult hir_elim(const Net& net)
{
    return eliminate_one(net, false);
}

TransformResult hirct_elim(const Net& net)
{
    return eliminate_one(net, true);
}

TransformResult eliminate_resets(const Net& net)
{
    TransformResult acc;
    acc.net = net;
    acc.forward_map = detail::identity_map(net.place_count());
    for (const auto& p : net.places()) acc.place_origin.push_back("source place " + p);
    for (const auto& t : net.transitions()) acc.transition_origin.push_back("source transition " + t.name);

    auto pending = [](const Net& n) {
        for (const Transition& t : n.transitions())
            if (eliminable(t, true)) return true;
        return false;
    };
    while (pending(acc.net)) {
        TransformResult step = hirct_elim(acc.net);
        // Carry origins of copied elements back to the original net.
        std::map<std::string, std::string> previous;
        for (std::size_t i = 0; i < acc.net.transition_count(); ++i)
            previous[acc.net.transitions()[i].name] = acc.transition_origin[i];
        for (std::size_t p = 0; p < acc.net.place_count(); ++p) step.place_origin[p] = acc.place_origin[p];
        for (std::size_t i = 0; i < step.net.transition_count(); ++i) {
            auto it = previous.find(step.net.transitions()[i].name);
            if (it != previous.end() && step.transition_origin[i].rfind("source ", 0) == 0)
                step.transition_origin[i] = it->second;
        }
        step.forward_map = acc.forward_map.then(step.forward_map);
        acc = std::move(step);
    }
    acc.query.text = "M2 is reachable from M1 in the source iff f(M2) is reachable from f(M1) here; f copies every "
                     "source place, sets every .idle place to 1 and every .busy place to 0";
    return acc;
}

}  // namespace hipn
