#include "transforms/draft.hpp"

#include <algorithm>

namespace hipn::detail {

NetDraft::NetDraft(const Net& net, const std::string& origin_prefix)
    : places_(net.places()), initial_(net.initial().counts()), transitions_(net.transitions())
{
    for (const auto& p : places_) {
        place_origin_.push_back(origin_prefix + "place " + p);
        place_names_.insert(p);
    }
    for (const auto& t : transitions_) {
        transition_origin_.push_back(origin_prefix + "transition " + t.name);
        transition_names_.insert(t.name);
    }
}

std::string NetDraft::fresh(const std::string& base, std::set<std::string>& used)
{
    std::string name = base;
    for (std::size_t k = 2; used.count(name); ++k) name = base + "~" + std::to_string(k);
    used.insert(name);
    return name;
}

PlaceId NetDraft::add_place(const std::string& base_name, Tokens initial, std::string origin)
{
    places_.push_back(fresh(base_name, place_names_));
    initial_.push_back(std::move(initial));
    place_origin_.push_back(std::move(origin));
    return places_.size() - 1;
}

TransitionId NetDraft::add_transition(const std::string& base_name, std::string origin)
{
    transitions_.push_back(Transition{fresh(base_name, transition_names_), {}, {}});
    transition_origin_.push_back(std::move(origin));
    return transitions_.size() - 1;
}

void NetDraft::remove_transition(TransitionId t)
{
    transition_names_.erase(transitions_.at(t).name);
    transitions_.erase(transitions_.begin() + static_cast<std::ptrdiff_t>(t));
    transition_origin_.erase(transition_origin_.begin() + static_cast<std::ptrdiff_t>(t));
}

void NetDraft::permute_places(const std::vector<PlaceId>& new_position)
{
    const std::size_t n = places_.size();
    std::vector<std::string> places(n), origin(n);
    std::vector<Tokens> initial(n);
    for (PlaceId p = 0; p < n; ++p) {
        places[new_position[p]] = places_[p];
        origin[new_position[p]] = place_origin_[p];
        initial[new_position[p]] = initial_[p];
    }
    places_ = std::move(places);
    place_origin_ = std::move(origin);
    initial_ = std::move(initial);
    for (Transition& t : transitions_) {
        for (PreArc& a : t.pre) {
            a.place = new_position[a.place];
            if (auto* x = std::get_if<Transfer>(&a.kind)) x->target = new_position[x->target];
        }
        for (PostArc& a : t.post) a.place = new_position[a.place];
        std::sort(t.pre.begin(), t.pre.end(), [](const PreArc& a, const PreArc& b) { return a.place < b.place; });
        std::sort(t.post.begin(), t.post.end(), [](const PostArc& a, const PostArc& b) { return a.place < b.place; });
    }
}

Net NetDraft::build() const
{
    return Net(places_, transitions_, Marking(initial_));
}

PlaceMap identity_map(std::size_t places)
{
    return extend_map(places, places);
}

PlaceMap extend_map(std::size_t source_places, std::size_t target_places)
{
    PlaceMap map;
    map.source_places = source_places;
    map.entries.resize(target_places);
    for (PlaceId p = 0; p < source_places; ++p) map.entries[p].source = p;
    return map;
}

}  // namespace hipn::detail
