#include "transforms/draft.hpp"

namespace hipn {

TransformResult two_inh_to_reset(const Net& net)
{
    if (has_errors(validate(net))) throw Error("cannot transform an invalid net");
    std::vector<std::pair<TransitionId, PlaceId>> inhibitors;
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        for (const PreArc& a : net.transitions()[t].pre) {
            if (std::holds_alternative<Inhibitor>(a.kind)) inhibitors.emplace_back(t, a.place);
            else if (!std::holds_alternative<Numeric>(a.kind))
                throw Error("expected only numeric and inhibitor arcs, found another special arc on '" +
                            net.transitions()[t].name + "'");
        }
    }
    if (inhibitors.size() != 2)
        throw Error("expected exactly two inhibitor arcs, found " + std::to_string(inhibitors.size()));

    // The first inhibitor (in declaration order) becomes the reset; its place gets a shadow copy.
    const auto [reset_t, watched] = inhibitors[0];
    const std::size_t n = net.place_count();
    const std::string& wname = net.place_name(watched);

    detail::NetDraft d(net);
    const PlaceId copy = d.add_place(wname + "'", net.initial()[watched],
                                     "shadow of " + wname + " that is never reset");
    for (TransitionId u = 0; u < net.transition_count(); ++u) {
        Transition& tr = d.transition(u);
        if (u == reset_t) {
            for (PreArc& a : tr.pre)
                if (a.place == watched) a.kind = Reset{};
        } else if (const ArcKind* k = net.transitions()[u].find_pre(watched)) {
            // An inhibitor on the watched place stays there; the shadow gets no arc.
            if (const auto* num = std::get_if<Numeric>(k)) tr.add_pre(copy, *num);
        }
        Tokens w = net.transitions()[u].post_weight(watched);
        if (w > 0) tr.add_post(copy, w);
    }

    TransformResult r;
    r.net = d.build();
    r.place_origin = d.place_origin();
    r.transition_origin = d.transition_origin();
    r.transition_origin[reset_t] += " (inhibitor on " + wname + " turned into a reset)";
    r.forward_map = detail::extend_map(n, n + 1);
    r.forward_map.entries[copy].source = watched;
    r.query.text = "M is reachable in the source iff M' is reachable here, where M' equals M and " + wname +
                   "' holds M(" + wname + ")";
    return r;
}

}  // namespace hipn
