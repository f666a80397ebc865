#pragma once

#include <hipn/explore.hpp>
#include <hipn/net.hpp>

#include <optional>
#include <string>

namespace hipn {

// Graphviz rendering. Transitions used by `highlight`, and their arcs, are drawn in red
// with the step numbers at which they fire.
std::string export_dot(const Net& net, const std::optional<Trace>& highlight = std::nullopt);

}  // namespace hipn
