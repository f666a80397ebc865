#include <hipn/transforms.hpp>

#include <sstream>

namespace hipn {

Marking PlaceMap::apply(const Marking& m) const
{
    if (m.size() != source_places)
        throw Error("marking has " + std::to_string(m.size()) + " entries, map expects " +
                    std::to_string(source_places));
    Marking out(entries.size());
    for (std::size_t q = 0; q < entries.size(); ++q) {
        out[q] = entries[q].constant;
        if (entries[q].source) out[q] += m[*entries[q].source];
    }
    return out;
}

PlaceMap PlaceMap::then(const PlaceMap& next) const
{
    if (next.source_places != entries.size()) throw Error("cannot compose maps of mismatched sizes");
    PlaceMap out;
    out.source_places = source_places;
    for (const Entry& e : next.entries) {
        Entry combined{std::nullopt, e.constant};
        if (e.source) {
            const Entry& inner = entries[*e.source];
            combined.source = inner.source;
            combined.constant += inner.constant;
        }
        out.entries.push_back(std::move(combined));
    }
    return out;
}

bool PlaceMap::is_injective() const
{
    std::vector<bool> copied(source_places, false);
    for (const Entry& e : entries)
        if (e.source) copied.at(*e.source) = true;
    for (bool c : copied)
        if (!c) return false;
    return true;
}

std::string render_place_map(const Net& source, const TransformResult& result)
{
    auto render = [&](const PlaceMap& map, const char* title) {
        std::ostringstream out;
        out << "# " << title << "\n";
        for (std::size_t q = 0; q < map.entries.size(); ++q) {
            const auto& e = map.entries[q];
            out << result.net.place_name(q) << " = ";
            if (e.source) {
                out << source.place_name(*e.source);
                if (e.constant != 0) out << " + " << e.constant.str();
            } else {
                out << e.constant.str();
            }
            out << "\n";
        }
        return out.str();
    };
    std::string out = render(result.forward_map, "forward map");
    if (result.alternate_map) out += render(*result.alternate_map, "alternate map");
    return out;
}

std::vector<std::string> transform_names()
{
    return {"hir-elim",     "hirct-elim",       "eliminate-resets", "dlf-to-reach",
            "reach-to-dlf", "two-inh-to-reset", "split-transfer",   "transfer-hierarchize"};
}

TransformResult apply_transform(const std::string& name, const Net& net, const std::optional<Marking>& target)
{
    if (name == "hir-elim") return hir_elim(net);
    if (name == "hirct-elim") return hirct_elim(net);
    if (name == "eliminate-resets") return eliminate_resets(net);
    if (name == "dlf-to-reach") return dlf_to_reach(net);
    if (name == "reach-to-dlf") {
        if (!target) throw Error("reach-to-dlf needs a target marking");
        return reach_to_dlf(net, *target);
    }
    if (name == "two-inh-to-reset") return two_inh_to_reset(net);
    if (name == "split-transfer") return split_transfer_transition(net);
    if (name == "transfer-hierarchize") return transfer_hierarchize(net);
    throw Error("unknown transform '" + name + "'");
}

}  // namespace hipn
