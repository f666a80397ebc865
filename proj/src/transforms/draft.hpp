#pragma once

#include <hipn/transforms.hpp>

#include <set>
#include <string>
#include <vector>

namespace hipn::detail {

// Mutable net under construction, carrying origin notes for every place and transition.
class NetDraft {
public:
    NetDraft() = default;
    // Copies the net; every element is annotated with `origin_prefix` + its name.
    explicit NetDraft(const Net& net, const std::string& origin_prefix = "source ");

    PlaceId add_place(const std::string& base_name, Tokens initial, std::string origin);
    TransitionId add_transition(const std::string& base_name, std::string origin);

    Transition& transition(TransitionId t) { return transitions_.at(t); }
    const Transition& transition(TransitionId t) const { return transitions_.at(t); }
    std::size_t place_count() const { return places_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }
    const std::string& place_name(PlaceId p) const { return places_.at(p); }
    Tokens& initial(PlaceId p) { return initial_.at(p); }

    void remove_transition(TransitionId t);
    // Renumbers places: new_position[old] gives the new position.
    void permute_places(const std::vector<PlaceId>& new_position);

    Net build() const;
    std::vector<std::string> place_origin() const { return place_origin_; }
    std::vector<std::string> transition_origin() const { return transition_origin_; }

private:
    std::string fresh(const std::string& base, std::set<std::string>& used);

    std::vector<std::string> places_;
    std::vector<Tokens> initial_;
    std::vector<Transition> transitions_;
    std::vector<std::string> place_origin_;
    std::vector<std::string> transition_origin_;
    std::set<std::string> place_names_;
    std::set<std::string> transition_names_;
};

PlaceMap identity_map(std::size_t places);
PlaceMap extend_map(std::size_t source_places, std::size_t target_places);

}  // namespace hipn::detail
