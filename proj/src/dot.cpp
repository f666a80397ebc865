#include <hipn/dot.hpp>

#include <map>
#include <sstream>

namespace hipn {

namespace {

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string export_dot(const Net& net, const std::optional<Trace>& highlight)
{
    std::map<TransitionId, std::vector<std::size_t>> steps;
    if (highlight)
        for (std::size_t i = 0; i < highlight->transitions.size(); ++i)
            steps[highlight->transitions[i]].push_back(i + 1);
    auto hot = [&](TransitionId t) { return steps.count(t) > 0; };
    const std::string red = ", color=red, penwidth=2";

    std::ostringstream out;
    out << "digraph net {\n  rankdir=LR;\n";
    for (PlaceId p = 0; p < net.place_count(); ++p)
        out << "  p" << p << " [shape=circle, label=" << quoted(net.place_name(p) + "\n" + net.initial()[p].str())
            << "];\n";
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        std::string label = net.transitions()[t].name;
        if (hot(t)) {
            label += "\n#";
            for (std::size_t i = 0; i < steps[t].size(); ++i) label += (i ? "," : "") + std::to_string(steps[t][i]);
        }
        out << "  t" << t << " [shape=box, label=" << quoted(label) << (hot(t) ? red : "") << "];\n";
    }
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        const Transition& tr = net.transitions()[t];
        const std::string mark = hot(t) ? red : "";
        for (const PreArc& a : tr.pre) {
            out << "  p" << a.place << " -> t" << t << " [";
            if (const auto* num = std::get_if<Numeric>(&a.kind)) {
                out << "label=" << quoted(num->weight.str());
            } else if (std::holds_alternative<Inhibitor>(a.kind)) {
                out << "arrowhead=odot";
            } else if (std::holds_alternative<Reset>(a.kind)) {
                out << "label=\"R\"";
            } else {
                const PlaceId target = std::get<Transfer>(a.kind).target;
                out << "style=dashed, label=" << quoted("to " + net.place_name(target));
            }
            out << mark << "];\n";
            if (const auto* x = std::get_if<Transfer>(&a.kind))
                out << "  t" << t << " -> p" << x->target << " [style=dashed" << mark << "];\n";
        }
        for (const PostArc& a : tr.post)
            out << "  t" << t << " -> p" << a.place << " [label=" << quoted(a.weight.str()) << mark << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace hipn
